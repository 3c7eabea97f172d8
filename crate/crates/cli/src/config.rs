//! `key=value` run descriptions.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Every key is optional except `problem`. Defaults:
//!
//! | key | default |
//! |-----|---------|
//! | `problem` | required: `sod`, `shu-osher` or `rmi` |
//! | `cells` | 100 (sod), 200 (shu-osher) |
//! | `ppw` | 64 (rmi) |
//! | `t_end` | 2 (sod), 1.8 (shu-osher), 1e-3 s (rmi) |
//! | `cfl` | 0.45 |
//! | `epsilon` | 1e-6 |
//! | `acm`, `acm_strength` | `true`, 1/3 |
//! | `alpha_mode` | `global` (or `local`) |
//! | `dt_mode` | `min` (or `inverse_sum`) |
//! | `output_interval`, `output_times` | none: initial and final snapshots only |
//! | `series_interval` | 1e-5 s (rmi) |
//! | `output_dir` | `output` |
//! | `threads` | all cores |
//!
//! RMI runs also accept `mach` (default 1.21), `a0` (tabulated for Mach
//! 1.11 and 1.21), `lambda0`, `delta`, `rho_heavy`, `rho_light`,
//! `pressure`, `y_shock`, `y_interface`, `width`, `length` and `gamma`.
//! Shu-Osher runs accept `amplitude` and `wavenumber`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use rmi_core::{AlphaMode, DtMode, ProblemKind, ProblemSpec, RmiParams};

use crate::error::{CliError, Result};

const COMMON_KEYS: &[&str] = &[
    "problem",
    "cfl",
    "t_end",
    "epsilon",
    "acm",
    "acm_strength",
    "alpha_mode",
    "dt_mode",
    "output_interval",
    "output_times",
    "output_dir",
    "threads",
];
const TUBE_KEYS: &[&str] = &["cells"];
const SHU_OSHER_KEYS: &[&str] = &["amplitude", "wavenumber"];
const RMI_KEYS: &[&str] = &[
    "ppw",
    "mach",
    "a0",
    "lambda0",
    "delta",
    "rho_heavy",
    "rho_light",
    "pressure",
    "y_shock",
    "y_interface",
    "width",
    "length",
    "gamma",
    "series_interval",
];

/// A parsed run description: the solver problem plus where to write it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub output_dir: PathBuf,
}

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.0.get(key) else {
            return Ok(None);
        };
        e.value
            .parse()
            .map(Some)
            .map_err(|err: T::Err| self.error(key, format!("cannot parse `{}`: {err}", e.value)))
    }

    fn error(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::Key {
            line: self.0.get(key).map_or(0, |e| e.line),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn number(&self, key: &str, check: impl Fn(f64) -> bool, what: &str) -> Result<Option<f64>> {
        match self.parse::<f64>(key)? {
            Some(v) if !check(v) => Err(self.error(key, format!("{v} {what}"))),
            v => Ok(v),
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>> {
        self.number(key, |v| v > 0.0 && v.is_finite(), "must be positive")
    }

    fn count(&self, key: &str, min: usize) -> Result<Option<usize>> {
        match self.parse::<usize>(key)? {
            Some(v) if v < min => Err(self.error(key, format!("{v} is below the minimum {min}"))),
            v => Ok(v),
        }
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        self.parse::<bool>(key)
    }
}

/// Parse a run description into a validated [`ProblemSpec`].
pub fn parse_config(text: &str) -> Result<ProblemSpec> {
    parse_run_config(text).map(|c| c.spec)
}

/// Parse a run description, keeping the output directory.
pub fn parse_run_config(text: &str) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::Syntax {
                line,
                message: format!("expected key=value, found `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let known = [COMMON_KEYS, TUBE_KEYS, SHU_OSHER_KEYS, RMI_KEYS]
            .iter()
            .any(|set| set.contains(&key));
        if !known {
            return Err(CliError::Key {
                line,
                key: key.to_string(),
                message: "unknown key".into(),
            });
        }
        if let Some(prev) = map.get(key).map(|e: &Entry| e.line) {
            return Err(CliError::Key {
                line,
                key: key.to_string(),
                message: format!("already set on line {prev}"),
            });
        }
        map.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    let entries = Entries(map);

    let problem = entries
        .0
        .get("problem")
        .map(|e| e.value.clone())
        .ok_or_else(|| CliError::Usage("missing required key `problem`".into()))?;
    let allowed: &[&[&str]] = match problem.as_str() {
        "sod" => &[TUBE_KEYS],
        "shu-osher" => &[TUBE_KEYS, SHU_OSHER_KEYS],
        "rmi" => &[RMI_KEYS],
        other => {
            return Err(entries.error(
                "problem",
                format!("unknown problem `{other}` (expected sod, shu-osher or rmi)"),
            ))
        }
    };
    for key in entries.0.keys() {
        if !COMMON_KEYS.contains(&key.as_str())
            && !allowed.iter().any(|s| s.contains(&key.as_str()))
        {
            return Err(entries.error(key, format!("not applicable to problem `{problem}`")));
        }
    }

    let mut spec = match problem.as_str() {
        "sod" => ProblemSpec::sod(entries.count("cells", 7)?.unwrap_or(100)),
        "shu-osher" => {
            let mut s = ProblemSpec::shu_osher(entries.count("cells", 7)?.unwrap_or(200));
            if let ProblemKind::ShuOsher {
                amplitude,
                wavenumber,
            } = &mut s.kind
            {
                if let Some(a) =
                    entries.number("amplitude", |v| v.abs() < 1.0, "must lie in (-1, 1)")?
                {
                    *amplitude = a;
                }
                if let Some(k) = entries.number("wavenumber", f64::is_finite, "must be finite")? {
                    *wavenumber = k;
                }
            }
            s
        }
        _ => rmi_spec(&entries)?,
    };

    if let Some(v) = entries.number("cfl", |v| v > 0.0 && v < 1.0, "must lie in (0, 1)")? {
        spec.cfl = v;
    }
    if let Some(v) = entries.number(
        "t_end",
        |v| v >= 0.0 && v.is_finite(),
        "must be non-negative",
    )? {
        spec.t_end = v;
    }
    if let Some(v) = entries.positive("epsilon")? {
        spec.weno.epsilon = v;
    }
    if let Some(v) = entries.flag("acm")? {
        spec.weno.acm_enabled = v;
    }
    if let Some(v) = entries.number(
        "acm_strength",
        |v| v >= 0.0 && v.is_finite(),
        "must be non-negative",
    )? {
        spec.weno.acm_strength = v;
    }
    if let Some(e) = entries.0.get("alpha_mode") {
        spec.alpha_mode = match e.value.as_str() {
            "global" => AlphaMode::Global,
            "local" => AlphaMode::Local,
            v => return Err(entries.error("alpha_mode", format!("`{v}` is not global or local"))),
        };
    }
    if let Some(e) = entries.0.get("dt_mode") {
        spec.dt_mode = match e.value.as_str() {
            "min" => DtMode::Min,
            "inverse_sum" => DtMode::InverseSum,
            v => return Err(entries.error("dt_mode", format!("`{v}` is not min or inverse_sum"))),
        };
    }
    spec.output_interval = entries
        .positive("output_interval")?
        .or(spec.output_interval);
    if let Some(e) = entries.0.get("output_times") {
        spec.output_times = e
            .value
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|t| *t >= 0.0 && t.is_finite())
                    .ok_or_else(|| {
                        entries.error("output_times", format!("bad time `{}`", s.trim()))
                    })
            })
            .collect::<Result<_>>()?;
    }
    spec.series_interval = entries
        .positive("series_interval")?
        .or(spec.series_interval);
    spec.threads = entries.count("threads", 1)?.or(spec.threads);

    let output_dir = entries
        .0
        .get("output_dir")
        .map_or_else(|| PathBuf::from("output"), |e| PathBuf::from(&e.value));

    spec.validate().map_err(CliError::Invalid)?;
    Ok(RunConfig { spec, output_dir })
}

fn rmi_spec(entries: &Entries) -> Result<ProblemSpec> {
    let mach = entries
        .number("mach", |v| v >= 1.0 && v.is_finite(), "must be at least 1")?
        .unwrap_or(1.21);
    let mut p = match entries.number("a0", |v| v >= 0.0 && v.is_finite(), "must be non-negative")? {
        Some(a0) => RmiParams::with_amplitude(mach, a0),
        None => RmiParams::for_mach(mach).map_err(|e| entries.error("mach", e.to_string()))?,
    };
    let fields: [(&str, &mut f64); 10] = [
        ("lambda0", &mut p.lambda0),
        ("delta", &mut p.delta),
        ("rho_heavy", &mut p.rho_heavy),
        ("rho_light", &mut p.rho_light),
        ("pressure", &mut p.p_interface),
        ("y_shock", &mut p.y_shock),
        ("y_interface", &mut p.y_interface),
        ("width", &mut p.width),
        ("length", &mut p.length),
        ("gamma", &mut p.gamma),
    ];
    for (key, slot) in fields {
        if let Some(v) = entries.positive(key)? {
            *slot = v;
        }
    }
    if p.gamma <= 1.0 {
        return Err(entries.error("gamma", "must exceed 1"));
    }
    let ppw = entries.count("ppw", 4)?.unwrap_or(64);
    ProblemSpec::rmi(p, ppw).map_err(CliError::Invalid)
}
