//! Polytopic partitions of the domain: 1D intervals, structured quads and
//! Voronoi tessellations, plus the ghost layer padding outside Ω.

mod domain;
mod io;
mod voronoi;

pub use domain::{Domain, SignedDistance};
pub use io::{read_mesh, write_mesh};
pub use voronoi::lloyd_seeds;

use crate::error::{Error, Result};
use crate::geometry::{area_centroid, minkowski_with_box, ConvexPolytope};
use crate::scalar::{from_usize, lit, Point, Real};

/// How a mesh was generated; needed to rebuild or pad it consistently.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshKind<T> {
    Intervals,
    /// `n[0] × n[1]` grid of axis-aligned cells over the domain box.
    Grid { n: [usize; 2] },
    /// Voronoi cells; `seeds[i]` generates `cells[i]` for every original cell.
    Voronoi { seeds: Vec<Point<T>> },
    Imported,
}

#[derive(Clone, Debug)]
pub struct Mesh<T> {
    cells: Vec<ConvexPolytope<T>>,
    is_ghost: Vec<bool>,
    h_cell: Vec<T>,
    h_avg: T,
    domain: Domain<T>,
    kind: MeshKind<T>,
    padded: bool,
}

impl<T: Real> Mesh<T> {
    /// Assembles a mesh from cells and ghost flags.
    pub fn from_parts(cells: Vec<ConvexPolytope<T>>, is_ghost: Vec<bool>, domain: Domain<T>) -> Result<Self> {
        Self::build(cells, is_ghost, domain, MeshKind::Imported, false)
    }

    fn build(
        cells: Vec<ConvexPolytope<T>>,
        is_ghost: Vec<bool>,
        domain: Domain<T>,
        kind: MeshKind<T>,
        padded: bool,
    ) -> Result<Self> {
        if cells.len() != is_ghost.len() {
            return Err(Error::InvalidInput("one ghost flag per cell required".into()));
        }
        let dim = domain.dim();
        let mut h_cell = Vec::with_capacity(cells.len());
        for c in &cells {
            if c.dim() != dim {
                return Err(Error::InvalidInput(format!("cell of dimension {} in a {dim}D mesh", c.dim())));
            }
            let m = c.measure();
            h_cell.push(if dim == 1 { m } else { m.sqrt() });
        }
        let n_int = is_ghost.iter().filter(|g| !**g).count();
        if n_int == 0 {
            return Err(Error::InvalidInput("mesh has no interior cells".into()));
        }
        let total: T = cells.iter().zip(&is_ghost).filter(|(_, g)| !**g).map(|(c, _)| c.measure()).sum();
        let mean = total / from_usize(n_int);
        let h_avg = if dim == 1 { mean } else { mean.sqrt() };
        Ok(Mesh { cells, is_ghost, h_cell, h_avg, domain, kind, padded })
    }

    /// Consecutive intervals between strictly increasing breakpoints.
    pub fn intervals_1d(breakpoints: &[T]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidInput("need at least two breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::NonMonotone);
        }
        let cells = breakpoints.windows(2).map(|w| ConvexPolytope::Interval { lo: w[0], hi: w[1] }).collect::<Vec<_>>();
        let n = cells.len();
        let domain = Domain::Interval { a: breakpoints[0], b: breakpoints[n] };
        Self::build(cells, vec![false; n], domain, MeshKind::Intervals, false)
    }

    /// `n` equal intervals on `[a, b]`.
    pub fn uniform_1d(n: usize, a: T, b: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("need at least one cell".into()));
        }
        let h = (b - a) / from_usize(n);
        let mut bp: Vec<T> = (0..=n).map(|i| a + h * from_usize(i)).collect();
        bp[n] = b;
        Self::intervals_1d(&bp)
    }

    /// Splits every interval in two. Only for unpadded interval meshes.
    pub fn bisect(&self) -> Result<Self> {
        if self.kind != MeshKind::Intervals || self.padded {
            return Err(Error::InvalidInput("bisection applies to unpadded interval meshes".into()));
        }
        let mut bp = Vec::with_capacity(2 * self.cells.len() + 1);
        for c in &self.cells {
            if let ConvexPolytope::Interval { lo, hi } = *c {
                bp.push(lo);
                bp.push((lo + hi) * lit(0.5));
            }
        }
        if let ConvexPolytope::Interval { hi, .. } = self.cells[self.cells.len() - 1] {
            bp.push(hi);
        }
        Self::intervals_1d(&bp)
    }

    /// Structured grid over the bounding box of `domain`. For a domain with a
    /// hole, cells lying entirely inside the hole are flagged as ghosts.
    pub fn grid_2d(n: [usize; 2], domain: Domain<T>) -> Result<Self> {
        if domain.dim() != 2 || n[0] == 0 || n[1] == 0 {
            return Err(Error::InvalidInput("grid needs a 2D domain and positive counts".into()));
        }
        let (min, max) = domain.bbox();
        let xs = grid_coords(min[0], max[0], n[0], 0, n[0]);
        let ys = grid_coords(min[1], max[1], n[1], 0, n[1]);
        let mut cells = Vec::with_capacity(n[0] * n[1]);
        let mut ghost = Vec::with_capacity(n[0] * n[1]);
        for j in 0..n[1] {
            for i in 0..n[0] {
                let c = ConvexPolytope::rect([xs[i], ys[j]], [xs[i + 1], ys[j + 1]])?;
                ghost.push(!domain.overlaps(&c));
                cells.push(c);
            }
        }
        Self::build(cells, ghost, domain, MeshKind::Grid { n }, false)
    }

    /// Quarter of a unit plate with a hole of radius 0.25 at the origin,
    /// meshed by a `(4·2^level)²` grid over the whole unit square.
    pub fn quarter_plate_hole_mesh(level: usize) -> Result<Self> {
        let n = 4usize << level;
        let domain = Domain::RectMinusDisk {
            min: [T::zero(); 2],
            max: [T::one(); 2],
            center: [T::zero(); 2],
            radius: lit(0.25),
        };
        Self::grid_2d([n, n], domain)
    }

    /// Voronoi tessellation of `[min, max]` generated by `seeds`.
    pub fn voronoi_2d(seeds: &[Point<T>], min: Point<T>, max: Point<T>) -> Result<Self> {
        voronoi::check_seeds(seeds, min, max)?;
        let cells = voronoi::cells(seeds, 0..seeds.len(), min, max);
        if cells.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidInput("Voronoi cell collapsed".into()));
        }
        let n = cells.len();
        Self::build(cells, vec![false; n], Domain::Rect { min, max }, MeshKind::Voronoi { seeds: seeds.to_vec() }, false)
    }

    /// Voronoi mesh of the unit square from `n` pseudo-random seeds relaxed
    /// by `lloyd_iterations` Lloyd steps.
    pub fn random_voronoi(n: usize, rng_seed: u64, lloyd_iterations: usize) -> Result<Self> {
        let min = [T::zero(); 2];
        let max = [T::one(); 2];
        let seeds = lloyd_seeds(n, rng_seed, lloyd_iterations, min, max)?;
        Self::voronoi_2d(&seeds, min, max)
    }

    /// Adds the ghost layer. Original cells keep their order and values; new
    /// ghost cells are appended. A ghost cell is kept only if its support
    /// `cell ⊕ box(h_m/2)` overlaps Ω with positive measure, and ghost cells
    /// already present (inside a hole) are pruned by the same rule.
    pub fn pad_ghost(&self, h_m: T) -> Result<Self> {
        if !(h_m > T::zero()) {
            return Err(Error::InvalidInput("mollifier width must be positive".into()));
        }
        if self.padded {
            return Err(Error::InvalidInput("mesh is already padded".into()));
        }
        let half = h_m * lit(0.5);
        let mut cells = Vec::with_capacity(self.cells.len());
        let mut ghost = Vec::with_capacity(self.cells.len());
        let keep = |c: &ConvexPolytope<T>| -> Result<bool> {
            let support = minkowski_with_box(c, [half, half])?;
            Ok(self.domain.overlaps(&support))
        };
        for (c, &g) in self.cells.iter().zip(&self.is_ghost) {
            if !g || keep(c)? {
                cells.push(c.clone());
                ghost.push(g);
            }
        }
        let candidates: Vec<ConvexPolytope<T>> = match (&self.kind, &self.domain) {
            (_, Domain::Interval { a, b }) => {
                vec![ConvexPolytope::Interval { lo: *a - h_m, hi: *a }, ConvexPolytope::Interval { lo: *b, hi: *b + h_m }]
            }
            (MeshKind::Grid { n }, _) => self.grid_ghosts(*n, h_m)?,
            (MeshKind::Voronoi { seeds }, _) => {
                let (min, max) = self.domain.bbox();
                voronoi::reflected_ghosts(seeds, min, max, h_m)
            }
            _ => return Err(Error::InvalidInput("cannot pad an imported 2D mesh".into())),
        };
        for c in candidates {
            if !c.is_empty() && keep(&c)? {
                cells.push(c);
                ghost.push(true);
            }
        }
        let mut out = Self::build(cells, ghost, self.domain.clone(), self.kind.clone(), true)?;
        out.h_avg = self.h_avg;
        Ok(out)
    }

    fn grid_ghosts(&self, n: [usize; 2], h_m: T) -> Result<Vec<ConvexPolytope<T>>> {
        let (min, max) = self.domain.bbox();
        let d = [(max[0] - min[0]) / from_usize(n[0]), (max[1] - min[1]) / from_usize(n[1])];
        let layers = [
            (h_m / d[0]).ceil().to_usize().unwrap_or(1).max(1),
            (h_m / d[1]).ceil().to_usize().unwrap_or(1).max(1),
        ];
        let xs = grid_coords(min[0], max[0], n[0], layers[0], n[0] + layers[0]);
        let ys = grid_coords(min[1], max[1], n[1], layers[1], n[1] + layers[1]);
        let mut out = Vec::new();
        for j in 0..ys.len() - 1 {
            for i in 0..xs.len() - 1 {
                let inside_x = i >= layers[0] && i < layers[0] + n[0];
                let inside_y = j >= layers[1] && j < layers[1] + n[1];
                if inside_x && inside_y {
                    continue;
                }
                out.push(ConvexPolytope::rect([xs[i], ys[j]], [xs[i + 1], ys[j + 1]])?);
            }
        }
        Ok(out)
    }

    pub fn cells(&self) -> &[ConvexPolytope<T>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &ConvexPolytope<T> {
        &self.cells[i]
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cells carrying the physical partition (not flagged ghost).
    pub fn n_interior(&self) -> usize {
        self.is_ghost.iter().filter(|g| !**g).count()
    }

    pub fn n_ghost(&self) -> usize {
        self.cells.len() - self.n_interior()
    }

    pub fn is_ghost(&self, i: usize) -> bool {
        self.is_ghost[i]
    }

    pub fn ghost_flags(&self) -> &[bool] {
        &self.is_ghost
    }

    /// Length (1D) or square root of area (2D).
    pub fn h_cell(&self, i: usize) -> T {
        self.h_cell[i]
    }

    /// Mean interior length (1D) or square root of the mean interior area (2D).
    pub fn h_avg(&self) -> T {
        self.h_avg
    }

    /// Largest interior cell size.
    pub fn h_max(&self) -> T {
        self.h_cell
            .iter()
            .zip(&self.is_ghost)
            .filter(|(_, g)| !**g)
            .fold(T::zero(), |a, (h, _)| a.max(*h))
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn kind(&self) -> &MeshKind<T> {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    /// Mollifier width for this mesh: `2κ·max h_c` in 1D, `2κ·h_avg` in 2D.
    pub fn mollifier_width(&self, kappa: T) -> T {
        let h = if self.dim() == 1 { self.h_max() } else { self.h_avg };
        lit::<T>(2.0) * kappa * h
    }

    /// Centroid of cell `i`.
    pub fn centroid(&self, i: usize) -> Point<T> {
        area_centroid(&self.cells[i]).1
    }
}

/// Grid lines `min + k·(max-min)/n` for `k = -before ..= after`, with the
/// lines at `k = 0` and `k = n` pinned to `min` and `max`.
fn grid_coords<T: Real>(min: T, max: T, n: usize, before: usize, after: usize) -> Vec<T> {
    let d = (max - min) / from_usize(n);
    (0..=before + after)
        .map(|idx| {
            let k = idx as i64 - before as i64;
            if k == 0 {
                min
            } else if k == n as i64 {
                max
            } else {
                min + d * lit(k as f64)
            }
        })
        .collect()
}
