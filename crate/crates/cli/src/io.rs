//! Snapshot and time-series files.
//!
//! A snapshot is a few `# key=value` header lines followed by a CSV table
//! of primitive variables at cell centres, one row per cell with `x`
//! fastest. Every number is written with 17 significant digits, so reading
//! a file back reproduces the written values exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rmi_core::{
    conserved_from_primitives, primitives_from_conserved, ConservedState, Field2D, IdealGasEos,
    InterfaceRecord, PrimitiveState,
};

use crate::error::{CliError, Result};

pub const SNAPSHOT_COLUMNS: &str = "x,y,rho,u,v,p,M";
pub const SERIES_COLUMNS: &str = "t,y_bubble,y_spike,amplitude,displacement";

/// Decimal text with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Contents of a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub gamma: f64,
    /// Cell-centre coordinates, row-major with `x` fastest.
    pub centers: Vec<(f64, f64)>,
    pub cells: Vec<PrimitiveState>,
}

impl Snapshot {
    pub fn from_field(field: &Field2D, eos: &IdealGasEos) -> Result<Self> {
        let mut centers = Vec::with_capacity(field.nx() * field.ny());
        let mut cells = Vec::with_capacity(centers.capacity());
        for j in 0..field.ny() {
            for i in 0..field.nx() {
                centers.push(field.cell_center(i, j));
                cells.push(primitives_from_conserved(field.get(i, j), eos)?);
            }
        }
        Ok(Self {
            time: field.time,
            nx: field.nx(),
            ny: field.ny(),
            dx: field.dx,
            dy: field.dy,
            gamma: eos.gamma(),
            centers,
            cells,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &PrimitiveState {
        &self.cells[j * self.nx + i]
    }

    /// Rebuild the conserved field. Conserved values are recomputed from the
    /// stored primitives and so may differ from the original in the last bit.
    pub fn to_field(&self) -> Result<Field2D> {
        let eos = IdealGasEos::new(self.gamma)?;
        let (x0, y0) = self.centers[0];
        let origin = (x0 - 0.5 * self.dx, y0 - 0.5 * self.dy);
        let mut f = Field2D::new(
            self.nx,
            self.ny,
            self.dx,
            self.dy,
            origin,
            ConservedState::default(),
        )?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                *f.get_mut(i, j) = conserved_from_primitives(self.get(i, j), &eos);
            }
        }
        f.time = self.time;
        Ok(f)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut emit = || -> std::io::Result<()> {
            writeln!(w, "# time={}", fmt_f64(self.time))?;
            writeln!(w, "# nx={}", self.nx)?;
            writeln!(w, "# ny={}", self.ny)?;
            writeln!(w, "# dx={}", fmt_f64(self.dx))?;
            writeln!(w, "# dy={}", fmt_f64(self.dy))?;
            writeln!(w, "# gamma={}", fmt_f64(self.gamma))?;
            writeln!(w, "{SNAPSHOT_COLUMNS}")?;
            for ((x, y), c) in self.centers.iter().zip(&self.cells) {
                let row = [*x, *y, c.rho, c.u, c.v, c.p, c.mass_fraction].map(fmt_f64);
                writeln!(w, "{}", row.join(","))?;
            }
            w.flush()
        };
        emit().map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let bad = |line: usize, message: String| CliError::Format {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut header = std::collections::HashMap::new();
        let mut centers = Vec::new();
        let mut cells = Vec::new();
        let mut columns_seen = false;
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| CliError::io(path, e))?;
            let lineno = n + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| bad(lineno, format!("malformed header `{line}`")))?;
                header.insert(k.trim().to_string(), (lineno, v.trim().to_string()));
                continue;
            }
            if !columns_seen {
                if line.trim() != SNAPSHOT_COLUMNS {
                    return Err(bad(
                        lineno,
                        format!("expected column header `{SNAPSHOT_COLUMNS}`"),
                    ));
                }
                columns_seen = true;
                continue;
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(lineno, format!("unparseable value: {e}")))?;
            if values.len() != 7 {
                return Err(bad(
                    lineno,
                    format!("expected 7 columns, found {}", values.len()),
                ));
            }
            centers.push((values[0], values[1]));
            cells.push(PrimitiveState::new(
                values[2], values[3], values[4], values[5], values[6],
            ));
        }
        let field = |key: &str| -> Result<(usize, String)> {
            header
                .get(key)
                .cloned()
                .ok_or_else(|| bad(0, format!("missing header `{key}`")))
        };
        let float = |key: &str| -> Result<f64> {
            let (l, v) = field(key)?;
            v.parse().map_err(|e| bad(l, format!("{key}: {e}")))
        };
        let int = |key: &str| -> Result<usize> {
            let (l, v) = field(key)?;
            v.parse().map_err(|e| bad(l, format!("{key}: {e}")))
        };
        let snap = Self {
            time: float("time")?,
            nx: int("nx")?,
            ny: int("ny")?,
            dx: float("dx")?,
            dy: float("dy")?,
            gamma: float("gamma")?,
            centers,
            cells,
        };
        if snap.cells.len() != snap.nx * snap.ny || snap.cells.is_empty() {
            return Err(bad(
                0,
                format!(
                    "{} data rows for a {}x{} grid",
                    snap.cells.len(),
                    snap.nx,
                    snap.ny
                ),
            ));
        }
        Ok(snap)
    }
}

/// Write `field` as a snapshot file.
pub fn write_snapshot(field: &Field2D, eos: &IdealGasEos, path: &Path) -> Result<()> {
    Snapshot::from_field(field, eos)?.write(path)
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    Snapshot::read(path)
}

/// Appends interface records to a CSV file, enforcing increasing time.
pub struct SeriesWriter {
    path: PathBuf,
    out: BufWriter<File>,
    last_t: Option<f64>,
}

impl SeriesWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{SERIES_COLUMNS}").map_err(|e| CliError::io(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            out,
            last_t: None,
        })
    }

    pub fn push(&mut self, r: &InterfaceRecord) -> Result<()> {
        if self.last_t.is_some_and(|t| r.t <= t) {
            return Err(CliError::Format {
                path: self.path.clone(),
                line: 0,
                message: format!("record time {} does not increase", r.t),
            });
        }
        self.last_t = Some(r.t);
        let row = [r.t, r.y_bubble, r.y_spike, r.amplitude, r.displacement].map(fmt_f64);
        writeln!(self.out, "{}", row.join(",")).map_err(|e| CliError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

pub fn write_series(records: &[InterfaceRecord], path: &Path) -> Result<()> {
    let mut w = SeriesWriter::create(path)?;
    for r in records {
        w.push(r)?;
    }
    w.finish()
}

pub fn read_series(path: &Path) -> Result<Vec<InterfaceRecord>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let bad = |line: usize, message: String| CliError::Format {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut out: Vec<InterfaceRecord> = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if n == 0 {
            if line.trim() != SERIES_COLUMNS {
                return Err(bad(1, format!("expected column header `{SERIES_COLUMNS}`")));
            }
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(n + 1, format!("unparseable value: {e}")))?;
        if v.len() != 5 {
            return Err(bad(n + 1, format!("expected 5 columns, found {}", v.len())));
        }
        if out.last().is_some_and(|r| v[0] <= r.t) {
            return Err(bad(n + 1, "time does not increase".into()));
        }
        out.push(InterfaceRecord {
            t: v[0],
            y_bubble: v[1],
            y_spike: v[2],
            amplitude: v[3],
            displacement: v[4],
        });
    }
    Ok(out)
}
