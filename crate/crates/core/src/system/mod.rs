//! Assembly and least-squares solution of the collocation system.
//!
//! Every row is scaled on both sides by the power of the mollifier width
//! that matches its derivative order (`h_m²` for second-order rows, `h_m⁴`
//! for fourth-order rows, `h_m` for slope rows), so the unknowns need no
//! rescaling after the solve. Interior rows are further divided by the
//! material modulus of the operator so that they are commensurate with the
//! boundary rows.

mod lsq;

pub use lsq::*;

use std::io::Write;

use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::collocation::{BcKind, CollocationSet};
use crate::error::{Error, Result};
use crate::problems::{Pde, ProblemCase};
use crate::scalar::{from_usize, to_f64, Point, Real};

/// Origin of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Interior,
    BoundaryValue,
    BoundarySlope,
    /// `ε·u_j = 0` on a ghost-cell coefficient.
    Damping,
}

/// Rectangular collocation system `C u = s`.
#[derive(Clone, Debug)]
pub struct CollocationSystem<T> {
    pub rows: Vec<Row<T>>,
    pub rhs: Vec<T>,
    pub kinds: Vec<RowKind>,
    /// Multiplier applied to each row (1 when scaling is off).
    pub row_scale: Vec<T>,
    /// Total number of unknowns, `components · n_b`.
    pub n_cols: usize,
    pub n_b: usize,
    pub components: usize,
}

impl<T: Real> CollocationSystem<T> {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.0.len()).sum()
    }

    /// Appends `ε·u_j = 0` for every ghost-cell coefficient. Ghost cells whose
    /// support barely reaches into Ω are sampled by few points; the damping
    /// keeps their coefficients bounded without removing them from the
    /// partition of unity. `ε = 0` is a no-op.
    pub fn damp_ghosts(&mut self, basis: &BasisSet<T>, eps: T) {
        if eps == T::zero() {
            return;
        }
        let mesh = basis.mesh();
        for c in 0..self.components {
            for cell in (0..mesh.n_cells()).filter(|&i| mesh.is_ghost(i)) {
                for k in 0..basis.n_monomials() {
                    self.rows.push((vec![c * self.n_b + basis.column(cell, k)], vec![eps]));
                    self.rhs.push(T::zero());
                    self.kinds.push(RowKind::Damping);
                    self.row_scale.push(T::one());
                }
            }
        }
    }

    /// Writes `C`, `s` and optionally `u` as three triplet blocks, each
    /// headed by `ROWS COLS NNZ`. Indices are 1-based.
    pub fn write_triplets<W: Write>(&self, solution: Option<&[T]>, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.n_rows(), self.n_cols, self.nnz())?;
        for (i, (cols, vals)) in self.rows.iter().enumerate() {
            for (j, v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {:e}", i + 1, j + 1, to_f64(*v))?;
            }
        }
        writeln!(w, "{} 1 {}", self.n_rows(), self.n_rows())?;
        for (i, v) in self.rhs.iter().enumerate() {
            writeln!(w, "{} 1 {:e}", i + 1, to_f64(*v))?;
        }
        if let Some(u) = solution {
            writeln!(w, "{} 1 {}", u.len(), u.len())?;
            for (i, v) in u.iter().enumerate() {
                writeln!(w, "{} 1 {:e}", i + 1, to_f64(*v))?;
            }
        }
        Ok(())
    }
}

/// Derivatives required by the interior operator.
fn operator_derivs(pde: &Pde<impl Real>, dim: usize) -> Vec<[usize; 2]> {
    match (pde, dim) {
        (Pde::Biharmonic { .. }, 1) => vec![[4, 0]],
        (Pde::Biharmonic { .. }, _) => vec![[4, 0], [2, 2], [0, 4]],
        (_, 1) => vec![[2, 0]],
        _ => vec![[2, 0], [1, 1], [0, 2]],
    }
}

/// Assembles the scaled (or, with `scale_rows = false`, unscaled) system.
pub fn assemble<T: Real>(
    problem: &ProblemCase<T>,
    basis: &BasisSet<T>,
    points: &CollocationSet<T>,
    scale_rows: bool,
) -> Result<CollocationSystem<T>> {
    let family = basis.mollifier().family();
    let required = problem.pde.required_smoothness();
    if family.smoothness() < required {
        return Err(Error::Smoothness { family: family.name(), required, actual: family.smoothness() });
    }
    if basis.dim() != problem.dim() {
        return Err(Error::InvalidInput("basis and problem dimensions differ".into()));
    }
    let nc = problem.components();
    let n_b = basis.n_b();
    let n_cols = nc * n_b;
    let slope = points.bc == BcKind::ValueAndSlope;
    let n_rows = nc * (points.n_interior() + points.n_boundary() * points.bc.rows_per_point());
    if n_rows < n_cols {
        return Err(Error::Underdetermined { rows: n_rows, cols: n_cols });
    }
    let h = basis.mollifier().width();
    let pick = |s: T| if scale_rows { s } else { T::one() };
    let interior_scale = pick(h.powi(problem.pde.order() as i32) / problem.pde.modulus());
    let slope_scale = pick(h);
    let derivs = operator_derivs(&problem.pde, basis.dim());
    let shift = |cols: &[usize], comp: usize| -> Vec<usize> { cols.iter().map(|&c| c + comp * n_b).collect() };

    type Block<T> = Vec<(Row<T>, T, RowKind, T)>;

    let interior: Vec<Block<T>> = points
        .interior
        .par_iter()
        .map(|&x| -> Result<Block<T>> {
            let (cols, d) = basis.eval_many(x, &derivs)?;
            let src = problem.source(x);
            let sc = interior_scale;
            let mut out = Vec::with_capacity(nc);
            match problem.pde {
                Pde::Poisson => {
                    let vals: Vec<T> = if basis.dim() == 1 {
                        d[0].iter().map(|&v| -v * sc).collect()
                    } else {
                        d[0].iter().zip(&d[2]).map(|(&a, &b)| -(a + b) * sc).collect()
                    };
                    out.push(((cols, vals), src[0] * sc, RowKind::Interior, sc));
                }
                Pde::Biharmonic { stiffness } => {
                    let vals: Vec<T> = if basis.dim() == 1 {
                        d[0].iter().map(|&v| stiffness * v * sc).collect()
                    } else {
                        let two = T::one() + T::one();
                        (0..cols.len()).map(|i| stiffness * (d[0][i] + two * d[1][i] + d[2][i]) * sc).collect()
                    };
                    out.push(((cols, vals), src[0] * sc, RowKind::Interior, sc));
                }
                Pde::Elasticity { lambda, mu } => {
                    let m = cols.len();
                    let lm = lambda + mu;
                    for a in 0..2 {
                        let mut rc = Vec::with_capacity(2 * m);
                        let mut rv = Vec::with_capacity(2 * m);
                        for b in 0..2 {
                            rc.extend(shift(&cols, b));
                            for i in 0..m {
                                let lap = d[0][i] + d[2][i];
                                let dab = match (a, b) {
                                    (0, 0) => d[0][i],
                                    (1, 1) => d[2][i],
                                    _ => d[1][i],
                                };
                                let v = if a == b { mu * lap + lm * dab } else { lm * dab };
                                rv.push(-v * sc);
                            }
                        }
                        out.push(((rc, rv), src[a] * sc, RowKind::Interior, sc));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let boundary: Vec<Block<T>> = points
        .boundary
        .par_iter()
        .map(|bp| -> Result<Block<T>> {
            let mut d = vec![[0, 0]];
            if slope {
                d.push([1, 0]);
                if basis.dim() == 2 {
                    d.push([0, 1]);
                }
            }
            let (cols, vals) = basis.eval_many(bp.x, &d)?;
            let u = problem.exact(bp.x);
            let g = problem.exact_gradient(bp.x);
            let mut out = Vec::new();
            for c in 0..nc {
                out.push(((shift(&cols, c), vals[0].clone()), u[c], RowKind::BoundaryValue, T::one()));
            }
            if slope {
                let n = bp.normal;
                let sc = slope_scale;
                for c in 0..nc {
                    let dn: Vec<T> = (0..cols.len())
                        .map(|i| {
                            let mut s = n[0] * vals[1][i];
                            if basis.dim() == 2 {
                                s += n[1] * vals[2][i];
                            }
                            s * sc
                        })
                        .collect();
                    let target = (n[0] * g[c][0] + n[1] * g[c][1]) * sc;
                    out.push(((shift(&cols, c), dn), target, RowKind::BoundarySlope, sc));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut sys = CollocationSystem {
        rows: Vec::with_capacity(n_rows),
        rhs: Vec::with_capacity(n_rows),
        kinds: Vec::with_capacity(n_rows),
        row_scale: Vec::with_capacity(n_rows),
        n_cols,
        n_b,
        components: nc,
    };
    for (row, s, k, sc) in interior.into_iter().chain(boundary).flatten() {
        sys.rows.push(row);
        sys.rhs.push(s);
        sys.kinds.push(k);
        sys.row_scale.push(sc);
    }
    Ok(sys)
}

/// Factor position of every column: cells are swept in horizontal strips of
/// height `h_avg` (left to right within a strip) and the unknowns of one cell
/// are kept together across components.
pub fn spatial_column_order<T: Real>(basis: &BasisSet<T>, components: usize) -> Vec<usize> {
    let mesh = basis.mesh();
    let n_cells = mesh.n_cells();
    let nm = basis.n_monomials();
    let h = to_f64(mesh.h_avg());
    let key = |c: usize| {
        let p = basis.centroid(c);
        let (x, y) = (to_f64(p[0]), to_f64(p[1]));
        let strip = if basis.dim() == 1 { 0.0 } else { (y / h).floor() };
        (strip, x)
    };
    let mut cells: Vec<usize> = (0..n_cells).collect();
    cells.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    let n_b = basis.n_b();
    let mut order = vec![0; components * n_b];
    for (rank, &c) in cells.iter().enumerate() {
        for comp in 0..components {
            for k in 0..nm {
                order[comp * n_b + basis.column(c, k)] = (rank * components + comp) * nm + k;
            }
        }
    }
    order
}

/// Solved coefficients, component-major.
#[derive(Clone, Debug)]
pub struct Solution<T> {
    pub coeffs: Vec<T>,
    pub n_b: usize,
    pub components: usize,
    pub residual_norm: T,
    pub condition: f64,
}

impl<T: Real> Solution<T> {
    pub fn component(&self, c: usize) -> &[T] {
        &self.coeffs[c * self.n_b..(c + 1) * self.n_b]
    }
}

/// Sparse QR least-squares solve with a spatial column ordering.
pub fn solve<T: Real>(system: &CollocationSystem<T>, basis: &BasisSet<T>) -> Result<Solution<T>> {
    let order = spatial_column_order(basis, system.components);
    let s = lstsq_qr(&system.rows, &system.rhs, system.n_cols, &order)?;
    Ok(Solution {
        coeffs: s.x,
        n_b: system.n_b,
        components: system.components,
        residual_norm: s.residual_norm,
        condition: s.condition,
    })
}

/// Dense normal-equation solve; an independent reference for small systems.
pub fn solve_normal<T: Real>(system: &CollocationSystem<T>) -> Result<Solution<T>> {
    let s = lstsq_normal(&system.rows, &system.rhs, system.n_cols)?;
    Ok(Solution {
        coeffs: s.x,
        n_b: system.n_b,
        components: system.components,
        residual_norm: s.residual_norm,
        condition: s.condition,
    })
}

/// `∂^deriv u_h(x)` for every component.
pub fn evaluate_field<T: Real>(basis: &BasisSet<T>, sol: &Solution<T>, x: Point<T>, deriv: [usize; 2]) -> Result<[T; 2]> {
    let row = basis.eval_at(x, deriv)?;
    let mut out = [T::zero(); 2];
    for (c, o) in out.iter_mut().enumerate().take(sol.components) {
        *o = row.dot(sol.component(c));
    }
    Ok(out)
}

/// Value and gradient (`[component][axis]`) of `u_h` at `x`.
pub fn evaluate_with_gradient<T: Real>(basis: &BasisSet<T>, sol: &Solution<T>, x: Point<T>) -> Result<([T; 2], [[T; 2]; 2])> {
    let derivs: &[[usize; 2]] = if basis.dim() == 1 { &[[0, 0], [1, 0]] } else { &[[0, 0], [1, 0], [0, 1]] };
    let (cols, vals) = basis.eval_many(x, derivs)?;
    let mut u = [T::zero(); 2];
    let mut g = [[T::zero(); 2]; 2];
    for c in 0..sol.components {
        let coef = sol.component(c);
        let dot = |v: &[T]| cols.iter().zip(v).fold(T::zero(), |s, (&j, &w)| s + coef[j] * w);
        u[c] = dot(&vals[0]);
        for a in 0..basis.dim() {
            g[c][a] = dot(&vals[1 + a]);
        }
    }
    Ok((u, g))
}

/// `√(Σ|v - v_h|² / Σ|v|²)` over paired samples.
pub fn relative_error<T: Real>(exact: &[T], approx: &[T]) -> Result<T> {
    assert_eq!(exact.len(), approx.len());
    let mut num = T::zero();
    let mut den = T::zero();
    for (&v, &w) in exact.iter().zip(approx) {
        num += (v - w) * (v - w);
        den += v * v;
    }
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((num / den).sqrt())
}

/// Relative errors of a solution at a set of points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldErrors<T> {
    pub l2: T,
    pub h1: T,
    /// Only for elasticity problems.
    pub energy: Option<T>,
}

/// L², H¹-seminorm and (for elasticity) energy errors at `points`.
pub fn field_errors<T: Real>(
    problem: &ProblemCase<T>,
    basis: &BasisSet<T>,
    sol: &Solution<T>,
    points: &[Point<T>],
) -> Result<FieldErrors<T>> {
    let nc = sol.components;
    let dim = basis.dim();
    let samples: Vec<([T; 2], [[T; 2]; 2])> =
        points.par_iter().map(|&x| evaluate_with_gradient(basis, sol, x)).collect::<Result<_>>()?;
    let mut ue = Vec::new();
    let mut uh = Vec::new();
    let mut ge = Vec::new();
    let mut gh = Vec::new();
    let mut e_num = T::zero();
    let mut e_den = T::zero();
    let elastic = matches!(problem.pde, Pde::Elasticity { .. });
    for (&x, (u, g)) in points.iter().zip(&samples) {
        let u_ex = problem.exact(x);
        let g_ex = problem.exact_gradient(x);
        for c in 0..nc {
            ue.push(u_ex[c]);
            uh.push(u[c]);
            for a in 0..dim {
                ge.push(g_ex[c][a]);
                gh.push(g[c][a]);
            }
        }
        if elastic {
            let mut diff = [[T::zero(); 2]; 2];
            for c in 0..2 {
                for a in 0..2 {
                    diff[c][a] = g_ex[c][a] - g[c][a];
                }
            }
            e_num += problem.energy_density(diff);
            e_den += problem.energy_density(g_ex);
        }
    }
    let energy = if elastic {
        if e_den == T::zero() {
            return Err(Error::ZeroDenominator);
        }
        Some((e_num / e_den).sqrt())
    } else {
        None
    };
    Ok(FieldErrors { l2: relative_error(&ue, &uh)?, h1: relative_error(&ge, &gh)?, energy })
}

/// Root-mean-square of the scaled residual, per row.
pub fn rms_residual<T: Real>(system: &CollocationSystem<T>, sol: &Solution<T>) -> T {
    let r = residual(&system.rows, &system.rhs, &sol.coeffs);
    let s = r.iter().fold(T::zero(), |a, &v| a + v * v);
    (s / from_usize::<T>(r.len().max(1))).sqrt()
}
