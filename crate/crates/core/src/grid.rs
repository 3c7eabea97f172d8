//! Structured cell-centred grid with a three-cell ghost halo.

use crate::error::{Result, SolverError};
use crate::state::{ConservedState, Direction};

/// Width of the ghost halo; the WENO5 stencil reaches three cells.
pub const GHOST: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    ReflectingWall,
    ZeroGradientOutflow,
    Periodic,
}

/// Boundary condition per side of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    pub x_min: BoundaryCondition,
    pub x_max: BoundaryCondition,
    pub y_min: BoundaryCondition,
    pub y_max: BoundaryCondition,
}

impl BoundarySpec {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self {
            x_min: bc,
            x_max: bc,
            y_min: bc,
            y_max: bc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use BoundaryCondition::Periodic;
        let pairs = [("x", self.x_min, self.x_max), ("y", self.y_min, self.y_max)];
        for (axis, lo, hi) in pairs {
            if (lo == Periodic) != (hi == Periodic) {
                return Err(SolverError::Config(format!(
                    "periodic boundary on one {axis} side only"
                )));
            }
        }
        Ok(())
    }

    pub fn sides(&self, dir: Direction) -> (BoundaryCondition, BoundaryCondition) {
        match dir {
            Direction::X => (self.x_min, self.x_max),
            Direction::Y => (self.y_min, self.y_max),
        }
    }
}

/// Conserved states on an `nx` by `ny` grid, stored row-major (x fastest)
/// together with the ghost halo.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    nx: usize,
    ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub origin: (f64, f64),
    pub time: f64,
    /// Completed time steps; selects the sweep ordering.
    pub step: u64,
    data: Vec<ConservedState>,
}

impl Field2D {
    /// A field filled with `fill`, ghosts included.
    pub fn new(
        nx: usize,
        ny: usize,
        dx: f64,
        dy: f64,
        origin: (f64, f64),
        fill: ConservedState,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || !(dx > 0.0) || !(dy > 0.0) {
            return Err(SolverError::InvalidArgument(format!(
                "bad grid {nx}x{ny} with spacing ({dx}, {dy})"
            )));
        }
        let len = (nx + 2 * GHOST) * (ny + 2 * GHOST);
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            origin,
            time: 0.0,
            step: 0,
            data: vec![fill; len],
        })
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Row stride of the padded array.
    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * GHOST
    }

    pub fn len_along(&self, dir: Direction) -> usize {
        match dir {
            Direction::X => self.nx,
            Direction::Y => self.ny,
        }
    }

    pub fn spacing(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X => self.dx,
            Direction::Y => self.dy,
        }
    }

    /// Index into the padded array; `i`, `j` may address ghosts.
    #[inline]
    pub fn padded_index(&self, i: isize, j: isize) -> usize {
        let g = GHOST as isize;
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &ConservedState {
        &self.data[(j + GHOST) * self.stride() + i + GHOST]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut ConservedState {
        let s = self.stride();
        &mut self.data[(j + GHOST) * s + i + GHOST]
    }

    /// Cell access including ghosts (`-3..n+3`).
    #[inline]
    pub fn get_padded(&self, i: isize, j: isize) -> &ConservedState {
        &self.data[self.padded_index(i, j)]
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + (i as f64 + 0.5) * self.dx,
            self.origin.1 + (j as f64 + 0.5) * self.dy,
        )
    }

    pub fn padded_data(&self) -> &[ConservedState] {
        &self.data
    }

    pub fn padded_data_mut(&mut self) -> &mut [ConservedState] {
        &mut self.data
    }

    /// Interior cells in row-major order.
    pub fn interior(&self) -> impl Iterator<Item = &ConservedState> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.get(i, j)))
    }

    /// Copy a full line along `dir` (ghosts included) into `out`.
    /// `index` selects the row (`dir = X`) or column (`dir = Y`).
    pub fn read_line(&self, dir: Direction, index: usize, out: &mut Vec<ConservedState>) {
        out.clear();
        match dir {
            Direction::X => {
                let start = (index + GHOST) * self.stride();
                out.extend_from_slice(&self.data[start..start + self.stride()]);
            }
            Direction::Y => {
                let s = self.stride();
                let col = index + GHOST;
                out.extend((0..self.ny + 2 * GHOST).map(|j| self.data[j * s + col]));
            }
        }
    }

    /// Write the interior part of a line previously read with [`Self::read_line`].
    pub fn write_line_interior(&mut self, dir: Direction, index: usize, line: &[ConservedState]) {
        match dir {
            Direction::X => {
                let start = (index + GHOST) * self.stride() + GHOST;
                self.data[start..start + self.nx].copy_from_slice(&line[GHOST..GHOST + self.nx]);
            }
            Direction::Y => {
                let s = self.stride();
                let col = index + GHOST;
                for j in 0..self.ny {
                    self.data[(j + GHOST) * s + col] = line[j + GHOST];
                }
            }
        }
    }

    /// Sum of each conserved component over the interior times the cell area.
    pub fn totals(&self) -> [f64; 5] {
        let area = self.dx * self.dy;
        let mut t = [0.0; 5];
        for u in self.interior() {
            for (acc, v) in t.iter_mut().zip(u.to_array()) {
                *acc += v;
            }
        }
        t.map(|v| v * area)
    }
}

/// Fill the ghost cells of a single line (ghosts at both ends) along `dir`.
pub fn fill_line_ghosts(
    line: &mut [ConservedState],
    dir: Direction,
    (lo, hi): (BoundaryCondition, BoundaryCondition),
) {
    let n = line.len() - 2 * GHOST;
    let normal = dir.normal_momentum();
    let flip = |mut u: ConservedState| {
        match normal {
            1 => u.mx = -u.mx,
            _ => u.my = -u.my,
        }
        u
    };
    for k in 0..GHOST {
        // Ghost k cells outside the low side.
        let ghost = GHOST - 1 - k;
        line[ghost] = match lo {
            BoundaryCondition::ReflectingWall => flip(line[GHOST + k]),
            BoundaryCondition::ZeroGradientOutflow => line[GHOST],
            BoundaryCondition::Periodic => line[GHOST + n - 1 - k],
        };
        let ghost = GHOST + n + k;
        line[ghost] = match hi {
            BoundaryCondition::ReflectingWall => flip(line[GHOST + n - 1 - k]),
            BoundaryCondition::ZeroGradientOutflow => line[GHOST + n - 1],
            BoundaryCondition::Periodic => line[GHOST + k],
        };
    }
}

/// Populate every ghost cell of `field` from its interior according to `bc`.
/// Corner ghosts are left untouched; no stencil reads them.
pub fn fill_ghost(field: &mut Field2D, bc: &BoundarySpec) {
    let s = field.stride();
    let (nx, ny) = (field.nx, field.ny);
    let data = &mut field.data;
    for j in 0..ny {
        let start = (j + GHOST) * s;
        fill_line_ghosts(
            &mut data[start..start + s],
            Direction::X,
            bc.sides(Direction::X),
        );
    }
    let (lo, hi) = bc.sides(Direction::Y);
    let flip = |mut u: ConservedState| {
        u.my = -u.my;
        u
    };
    for i in GHOST..GHOST + nx {
        for k in 0..GHOST {
            let at = |j: usize| j * s + i;
            let ghost = GHOST - 1 - k;
            data[at(ghost)] = match lo {
                BoundaryCondition::ReflectingWall => flip(data[at(GHOST + k)]),
                BoundaryCondition::ZeroGradientOutflow => data[at(GHOST)],
                BoundaryCondition::Periodic => data[at(GHOST + ny - 1 - k)],
            };
            let ghost = GHOST + ny + k;
            data[at(ghost)] = match hi {
                BoundaryCondition::ReflectingWall => flip(data[at(GHOST + ny - 1 - k)]),
                BoundaryCondition::ZeroGradientOutflow => data[at(GHOST + ny - 1)],
                BoundaryCondition::Periodic => data[at(GHOST + k)],
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{
        conserved_from_primitives, primitives_from_conserved, IdealGasEos, PrimitiveState,
    };
    use BoundaryCondition::*;

    fn eos() -> IdealGasEos {
        IdealGasEos::new(1.4).unwrap()
    }

    #[test]
    fn uniform_field_ghosts_match_interior() {
        let u = conserved_from_primitives(&PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.3), &eos());
        for bc in [ReflectingWall, ZeroGradientOutflow, Periodic] {
            let mut f =
                Field2D::new(4, 5, 1.0, 1.0, (0.0, 0.0), ConservedState::default()).unwrap();
            for j in 0..5 {
                for i in 0..4 {
                    *f.get_mut(i, j) = u;
                }
            }
            fill_ghost(&mut f, &BoundarySpec::uniform(bc));
            for j in -3..8isize {
                for i in -3..7isize {
                    let corner = !(0..4).contains(&i) && !(0..5).contains(&j);
                    if !corner {
                        let g = f.get_padded(i, j);
                        // -0.0 == 0.0 for the reflected zero momentum.
                        assert_eq!(g, &u, "{bc:?} at ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_gradient_copies_edge_cell() {
        let mut f = Field2D::new(6, 1, 1.0, 1.0, (0.0, 0.0), ConservedState::default()).unwrap();
        for i in 0..6 {
            f.get_mut(i, 0).rho = 1.0 + i as f64;
        }
        fill_ghost(&mut f, &BoundarySpec::uniform(ZeroGradientOutflow));
        for k in 1..=3 {
            assert_eq!(f.get_padded(-k, 0).rho, 1.0);
            assert_eq!(f.get_padded(5 + k, 0).rho, 6.0);
        }
    }

    #[test]
    fn reflecting_wall_negates_normal_velocity_only() {
        let eos = eos();
        let mut f = Field2D::new(2, 4, 1.0, 1.0, (0.0, 0.0), ConservedState::default()).unwrap();
        for j in 0..4 {
            for i in 0..2 {
                let w = PrimitiveState::new(1.0 + j as f64, 0.3, 0.8, 2.0 + i as f64, 0.25);
                *f.get_mut(i, j) = conserved_from_primitives(&w, &eos);
            }
        }
        fill_ghost(&mut f, &BoundarySpec::uniform(ReflectingWall));
        for k in 0..3isize {
            let edge = primitives_from_conserved(f.get_padded(1, 3 - k), &eos).unwrap();
            let ghost = primitives_from_conserved(f.get_padded(1, 4 + k), &eos).unwrap();
            assert_eq!(ghost.v, -edge.v);
            assert_eq!(
                (ghost.rho, ghost.u, ghost.p, ghost.mass_fraction),
                (edge.rho, edge.u, edge.p, edge.mass_fraction)
            );
        }
    }

    #[test]
    fn periodic_wraps() {
        let mut f = Field2D::new(5, 1, 1.0, 1.0, (0.0, 0.0), ConservedState::default()).unwrap();
        for i in 0..5 {
            f.get_mut(i, 0).rho = i as f64;
        }
        let mut bc = BoundarySpec::uniform(ZeroGradientOutflow);
        bc.x_min = Periodic;
        bc.x_max = Periodic;
        fill_ghost(&mut f, &bc);
        assert_eq!(f.get_padded(-1, 0).rho, 4.0);
        assert_eq!(f.get_padded(-3, 0).rho, 2.0);
        assert_eq!(f.get_padded(5, 0).rho, 0.0);
        assert_eq!(f.get_padded(7, 0).rho, 2.0);
    }

    #[test]
    fn one_sided_periodic_is_rejected() {
        let mut bc = BoundarySpec::uniform(ReflectingWall);
        bc.y_max = Periodic;
        assert!(bc.validate().is_err());
    }

    #[test]
    fn line_round_trip() {
        let mut f = Field2D::new(3, 4, 1.0, 1.0, (0.0, 0.0), ConservedState::default()).unwrap();
        for j in 0..4 {
            for i in 0..3 {
                f.get_mut(i, j).rho = (10 * j + i) as f64;
            }
        }
        let mut line = Vec::new();
        f.read_line(Direction::Y, 2, &mut line);
        assert_eq!(line.len(), 10);
        assert_eq!(line[GHOST + 1].rho, 12.0);
        for u in line.iter_mut() {
            u.rho += 100.0;
        }
        f.write_line_interior(Direction::Y, 2, &line);
        assert_eq!(f.get(2, 3).rho, 132.0);
        assert_eq!(f.get(1, 3).rho, 31.0);
    }
}
