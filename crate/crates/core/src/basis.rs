//! Mollified basis functions `N_i(x) = ∫_τ m(x - y) p_i(y) dy`.
//!
//! Each cell carries scaled monomials `ξ^a` with `ξ = 2 (y - c) / h`. A basis
//! function is evaluated by clipping its cell against the kernel box around
//! `x`, splitting at the kernel knots, and integrating the piecewise
//! polynomial integrand exactly with Gauss rules.

use crate::error::{Error, Result};
use crate::geometry::{
    area_centroid, clip_to_rect, fan_triangulate_into, gauss_legendre, minkowski_with_box, ConvexPolytope,
    TriangleRule, MAX_DEGREE,
};
use crate::mesh::Mesh;
use crate::mollifier::Mollifier;
use crate::scalar::{lit, Point, Real};

/// Sparse row of basis values: parallel column and value lists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseRow<T> {
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Real> SparseRow<T> {
    /// Contraction with a coefficient vector.
    pub fn dot(&self, coeffs: &[T]) -> T {
        self.cols.iter().zip(&self.vals).map(|(&c, &v)| v * coeffs[c]).sum()
    }
}

/// Multi-indices `[a, b]` with `a + b <= order`, ordered by total degree.
/// In 1D only `[a, 0]`.
pub fn monomial_exponents(order: usize, dim: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for deg in 0..=order {
        if dim == 1 {
            out.push([deg, 0]);
        } else {
            for b in 0..=deg {
                out.push([deg - b, b]);
            }
        }
    }
    out
}

/// Uniform bucket grid mapping points to cells whose support box may contain them.
#[derive(Clone, Debug)]
struct Buckets<T> {
    origin: Point<T>,
    inv_size: T,
    n: [usize; 2],
    lists: Vec<Vec<u32>>,
}

impl<T: Real> Buckets<T> {
    fn new(boxes: &[(Point<T>, Point<T>)], size: T, dim: usize) -> Self {
        let mut lo = [T::infinity(); 2];
        let mut hi = [T::neg_infinity(); 2];
        for (a, b) in boxes {
            for k in 0..2 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        let inv_size = T::one() / size;
        let count = |k: usize| ((hi[k] - lo[k]) * inv_size).floor().to_usize().unwrap_or(0) + 1;
        let n = [count(0), if dim == 1 { 1 } else { count(1) }];
        let mut lists = vec![Vec::new(); n[0] * n[1]];
        let this = Buckets { origin: lo, inv_size, n, lists: Vec::new() };
        for (c, (a, b)) in boxes.iter().enumerate() {
            let (i0, j0) = this.index(*a);
            let (i1, j1) = this.index(*b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    lists[j * n[0] + i].push(c as u32);
                }
            }
        }
        Buckets { lists, ..this }
    }

    fn index(&self, p: Point<T>) -> (usize, usize) {
        let f = |k: usize| {
            let v = ((p[k] - self.origin[k]) * self.inv_size).floor();
            if v < T::zero() {
                0
            } else {
                v.to_usize().unwrap_or(usize::MAX).min(self.n[k] - 1)
            }
        };
        (f(0), f(1))
    }

    fn candidates(&self, p: Point<T>) -> &[u32] {
        let (i, j) = self.index(p);
        &self.lists[j * self.n[0] + i]
    }
}

/// All mollified basis functions of a padded mesh.
#[derive(Clone, Debug)]
pub struct BasisSet<T> {
    mesh: Mesh<T>,
    mollifier: Mollifier<T>,
    order: usize,
    exponents: Vec<[usize; 2]>,
    centroids: Vec<Point<T>>,
    scales: Vec<T>,
    supports: Vec<ConvexPolytope<T>>,
    support_boxes: Vec<(Point<T>, Point<T>)>,
    buckets: Buckets<T>,
    tri_rules: Vec<TriangleRule<T>>,
    line_rules: Vec<(Vec<T>, Vec<T>)>,
}

impl<T: Real> BasisSet<T> {
    /// Builds the basis of order `order` on `mesh` (which should already be
    /// padded with ghost cells) with kernel `mollifier`.
    pub fn build(mesh: Mesh<T>, mollifier: Mollifier<T>, order: usize) -> Result<Self> {
        let dim = mesh.dim();
        if mollifier.dim() != dim {
            return Err(Error::InvalidInput("mollifier and mesh dimensions differ".into()));
        }
        let half = mollifier.halfwidth();
        let deg = mollifier.family().degree();
        let max_deg = dim * deg + order;
        if max_deg > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { degree: max_deg, max: MAX_DEGREE });
        }
        let exponents = monomial_exponents(order, dim);
        let two = lit::<T>(2.0);
        let mut centroids = Vec::with_capacity(mesh.n_cells());
        let mut scales = Vec::with_capacity(mesh.n_cells());
        let mut supports = Vec::with_capacity(mesh.n_cells());
        let mut support_boxes = Vec::with_capacity(mesh.n_cells());
        for (i, cell) in mesh.cells().iter().enumerate() {
            centroids.push(area_centroid(cell).1);
            scales.push(two / if dim == 1 { mesh.h_cell(i) } else { mesh.h_avg() });
            let s = minkowski_with_box(cell, [half, if dim == 1 { T::zero() } else { half }])?;
            support_boxes.push(s.bbox().expect("support is non-empty"));
            supports.push(s);
        }
        let buckets = Buckets::new(&support_boxes, mollifier.width(), dim);
        let tri_rules = if dim == 2 { (0..=max_deg).map(|d| TriangleRule::new(d.max(1))).collect() } else { Vec::new() };
        let line_rules = (1..=max_deg / 2 + 1).map(gauss_legendre::<T>).collect();
        Ok(BasisSet {
            mesh,
            mollifier,
            order,
            exponents,
            centroids,
            scales,
            supports,
            support_boxes,
            buckets,
            tri_rules,
            line_rules,
        })
    }

    pub fn mesh(&self) -> &Mesh<T> {
        &self.mesh
    }

    pub fn mollifier(&self) -> &Mollifier<T> {
        &self.mollifier
    }

    /// Polynomial order `r_p`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn exponents(&self) -> &[[usize; 2]] {
        &self.exponents
    }

    /// Monomials per cell.
    pub fn n_monomials(&self) -> usize {
        self.exponents.len()
    }

    /// Total number of basis functions `n_b`.
    pub fn n_b(&self) -> usize {
        self.mesh.n_cells() * self.exponents.len()
    }

    /// Column of monomial `k` of cell `cell`.
    pub fn column(&self, cell: usize, k: usize) -> usize {
        cell * self.exponents.len() + k
    }

    /// `(cell, monomial)` of a column.
    pub fn column_owner(&self, col: usize) -> (usize, usize) {
        (col / self.exponents.len(), col % self.exponents.len())
    }

    pub fn centroid(&self, cell: usize) -> Point<T> {
        self.centroids[cell]
    }

    /// Monomial scale factor `2/h` of a cell.
    pub fn scale(&self, cell: usize) -> T {
        self.scales[cell]
    }

    /// Minkowski support `cell ⊕ box(h_m/2)`.
    pub fn support_of(&self, cell: usize) -> &ConvexPolytope<T> {
        &self.supports[cell]
    }

    /// Cells whose support bounding box contains `x`.
    pub fn candidate_cells(&self, x: Point<T>) -> impl Iterator<Item = usize> + '_ {
        self.buckets.candidates(x).iter().map(|&c| c as usize).filter(move |&c| {
            let (a, b) = self.support_boxes[c];
            x[0] >= a[0] && x[0] <= b[0] && (self.dim() == 1 || (x[1] >= a[1] && x[1] <= b[1]))
        })
    }

    /// Values of `∂^deriv N_i(x)` for every basis function not vanishing
    /// identically near `x`.
    pub fn eval_at(&self, x: Point<T>, deriv: [usize; 2]) -> Result<SparseRow<T>> {
        let (cols, mut vals) = self.eval_many(x, &[deriv])?;
        Ok(SparseRow { cols, vals: vals.pop().unwrap_or_default() })
    }

    /// Several derivatives at one point in a single pass. Returns the shared
    /// column list and one value list per requested derivative.
    pub fn eval_many(&self, x: Point<T>, derivs: &[[usize; 2]]) -> Result<(Vec<usize>, Vec<Vec<T>>)> {
        for d in derivs {
            self.mollifier.check_derivative(*d)?;
        }
        let nd = derivs.len();
        let nm = self.exponents.len();
        let mut cols = Vec::new();
        let mut vals: Vec<Vec<T>> = vec![Vec::new(); nd];
        let mut ws = Workspace::new(nd, nm, self.order);
        for c in self.candidate_cells(x) {
            if self.integrate_cell(c, x, derivs, &mut ws) {
                for k in 0..nm {
                    cols.push(self.column(c, k));
                }
                for (d, v) in vals.iter_mut().enumerate() {
                    v.extend_from_slice(&ws.acc[d * nm..(d + 1) * nm]);
                }
            }
        }
        Ok((cols, vals))
    }

    /// Accumulates `∫_τ ∂m(x - y) ξ^a dy` for all monomials of cell `c` into
    /// `ws.acc`. Returns false when the clipped region is empty.
    fn integrate_cell(&self, c: usize, x: Point<T>, derivs: &[[usize; 2]], ws: &mut Workspace<T>) -> bool {
        ws.acc.iter_mut().for_each(|a| *a = T::zero());
        let h = self.mollifier.width();
        let half = self.mollifier.halfwidth();
        let pieces = self.mollifier.pieces();
        let deg = self.mollifier.family().degree();
        let min_d = derivs.iter().map(|d| d[0] + d[1]).min().unwrap_or(0);
        let mut any = false;
        if self.dim() == 1 {
            let (a, b) = match self.mesh.cell(c) {
                ConvexPolytope::Interval { lo, hi } => (*lo, *hi),
                _ => unreachable!(),
            };
            let lo = a.max(x[0] - half);
            let hi = b.min(x[0] + half);
            if !(hi - lo > h * lit(1e-12)) {
                return false;
            }
            let rule = &self.line_rules[(deg - min_d + self.order) / 2];
            for (pi, p) in pieces.iter().enumerate() {
                // Offsets t = (x - y)/h in [p.lo, p.hi] map to y in [x - p.hi h, x - p.lo h].
                let sa = lo.max(x[0] - p.hi * h);
                let sb = hi.min(x[0] - p.lo * h);
                if !(sb - sa > h * lit(1e-12)) {
                    continue;
                }
                any = true;
                let mid = (sa + sb) * lit(0.5);
                let jac = (sb - sa) * lit(0.5);
                for (&xi, &wi) in rule.0.iter().zip(&rule.1) {
                    let y = mid + jac * xi;
                    self.accumulate(c, x, [y, T::zero()], wi * jac, derivs, [pi, 0], ws);
                }
            }
            return any;
        }
        let cell = self.mesh.cell(c);
        let tau = clip_to_rect(cell, [x[0] - half, x[1] - half], [x[0] + half, x[1] + half]);
        if tau.is_empty() {
            return false;
        }
        let single = pieces.len() == 1;
        for (pi, p) in pieces.iter().enumerate() {
            for (pj, q) in pieces.iter().enumerate() {
                let sub = if single {
                    tau.clone()
                } else {
                    let smin = [x[0] - p.hi * h, x[1] - q.hi * h];
                    let smax = [x[0] - p.lo * h, x[1] - q.lo * h];
                    clip_to_rect(&tau, smin, smax)
                };
                let verts = match &sub {
                    ConvexPolytope::Polygon(v) => v,
                    _ => continue,
                };
                any = true;
                if let Some((lo, hi)) = axis_rect(verts) {
                    // Tensor Gauss rule, exact per axis.
                    let r0 = &self.line_rules[(deg - derivs.iter().map(|d| d[0]).min().unwrap() + self.order) / 2];
                    let r1 = &self.line_rules[(deg - derivs.iter().map(|d| d[1]).min().unwrap() + self.order) / 2];
                    let m0 = (lo[0] + hi[0]) * lit(0.5);
                    let j0 = (hi[0] - lo[0]) * lit(0.5);
                    let m1 = (lo[1] + hi[1]) * lit(0.5);
                    let j1 = (hi[1] - lo[1]) * lit(0.5);
                    for (&u, &wu) in r0.0.iter().zip(&r0.1) {
                        for (&v, &wv) in r1.0.iter().zip(&r1.1) {
                            let y = [m0 + j0 * u, m1 + j1 * v];
                            self.accumulate(c, x, y, wu * wv * j0 * j1, derivs, [pi, pj], ws);
                        }
                    }
                } else {
                    let rule = &self.tri_rules[2 * deg - min_d + self.order];
                    ws.tris.clear();
                    fan_triangulate_into(&sub, &mut ws.tris);
                    let tris = std::mem::take(&mut ws.tris);
                    for t in &tris {
                        let [a, b, cc] = *t;
                        let e1 = [b[0] - a[0], b[1] - a[1]];
                        let e2 = [cc[0] - a[0], cc[1] - a[1]];
                        let area2 = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
                        for (rp, &rw) in rule.points.iter().zip(&rule.weights) {
                            let y = [a[0] + rp[0] * e1[0] + rp[1] * e2[0], a[1] + rp[0] * e1[1] + rp[1] * e2[1]];
                            self.accumulate(c, x, y, rw * area2, derivs, [pi, pj], ws);
                        }
                    }
                    ws.tris = tris;
                }
            }
        }
        any
    }

    #[allow(clippy::too_many_arguments)]
    #[inline]
    fn accumulate(&self, c: usize, x: Point<T>, y: Point<T>, w: T, derivs: &[[usize; 2]], piece: [usize; 2], ws: &mut Workspace<T>) {
        let dim = self.dim();
        let s = self.scales[c];
        let cen = self.centroids[c];
        // Powers of the scaled local coordinates.
        let xi = [(y[0] - cen[0]) * s, (y[1] - cen[1]) * s];
        let r = self.order;
        ws.pow[0] = T::one();
        ws.pow[r + 1] = T::one();
        for k in 1..=r {
            ws.pow[k] = ws.pow[k - 1] * xi[0];
            ws.pow[r + 1 + k] = ws.pow[r + k] * xi[1];
        }
        let off = [x[0] - y[0], x[1] - y[1]];
        let nm = self.exponents.len();
        for (d, dv) in derivs.iter().enumerate() {
            let mut kv = self.mollifier.eval_piece(piece[0], dv[0], off[0]);
            if dim == 2 {
                kv *= self.mollifier.eval_piece(piece[1], dv[1], off[1]);
            }
            let f = w * kv;
            let acc = &mut ws.acc[d * nm..(d + 1) * nm];
            for (a, e) in acc.iter_mut().zip(&self.exponents) {
                *a += f * ws.pow[e[0]] * ws.pow[r + 1 + e[1]];
            }
        }
    }
}

struct Workspace<T> {
    acc: Vec<T>,
    pow: Vec<T>,
    tris: Vec<[Point<T>; 3]>,
}

impl<T: Real> Workspace<T> {
    fn new(nd: usize, nm: usize, order: usize) -> Self {
        Workspace { acc: vec![T::zero(); nd * nm], pow: vec![T::zero(); 2 * (order + 1)], tris: Vec::new() }
    }
}

/// Bounds of an axis-aligned rectangle given as 4 CCW vertices.
fn axis_rect<T: Real>(v: &[Point<T>]) -> Option<(Point<T>, Point<T>)> {
    if v.len() != 4 {
        return None;
    }
    for i in 0..4 {
        let p = v[i];
        let q = v[(i + 1) % 4];
        if p[0] != q[0] && p[1] != q[1] {
            return None;
        }
    }
    let lo = [v.iter().map(|p| p[0]).fold(T::infinity(), T::min), v.iter().map(|p| p[1]).fold(T::infinity(), T::min)];
    let hi = [
        v.iter().map(|p| p[0]).fold(T::neg_infinity(), T::max),
        v.iter().map(|p| p[1]).fold(T::neg_infinity(), T::max),
    ];
    Some((lo, hi))
}

/// Total number of monomials of order `r_p` in `dim` dimensions.
pub fn monomial_count(order: usize, dim: usize) -> usize {
    if dim == 1 {
        order + 1
    } else {
        (order + 1) * (order + 2) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollifier::MollifierFamily;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis_1d(family: MollifierFamily, order: usize) -> BasisSet<f64> {
        let mesh = Mesh::intervals_1d(&[0.0, 0.15, 0.35, 0.5, 0.65, 0.85, 1.0]).unwrap();
        let h_m = mesh.mollifier_width(1.0);
        let padded = mesh.pad_ghost(h_m).unwrap();
        BasisSet::build(padded, Mollifier::new(family, h_m, 1).unwrap(), order).unwrap()
    }

    fn basis_2d(family: MollifierFamily, order: usize, n: usize) -> BasisSet<f64> {
        let mesh = Mesh::random_voronoi(n, 1, 10).unwrap();
        let h_m = mesh.mollifier_width(1.0);
        let padded = mesh.pad_ghost(h_m).unwrap();
        BasisSet::build(padded, Mollifier::new(family, h_m, 2).unwrap(), order).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(basis_1d(MollifierFamily::BSpline2, 3).n_b(), 32);
        assert_eq!(basis_1d(MollifierFamily::BSpline2, 0).n_b(), 8);
        let seeds: Vec<[f64; 2]> =
            (0..16).map(|k| [0.125 + 0.25 * (k % 4) as f64, 0.125 + 0.25 * (k / 4) as f64]).collect();
        let mesh = Mesh::voronoi_2d(&seeds, [0.0; 2], [1.0; 2]).unwrap();
        let h_m = mesh.mollifier_width(1.0);
        let b = BasisSet::build(mesh.pad_ghost(h_m).unwrap(), Mollifier::new(MollifierFamily::Hexic, h_m, 2).unwrap(), 2)
            .unwrap();
        assert_eq!(b.n_b(), 216);
        assert_eq!(monomial_count(2, 2), 6);
        assert_eq!(monomial_exponents(2, 2), vec![[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]);
    }

    #[test]
    fn constant_inside_one_cell() {
        let mesh = Mesh::uniform_1d(2, 0.0f64, 1.0).unwrap();
        let padded = mesh.pad_ghost(0.2).unwrap();
        let b = BasisSet::build(padded, Mollifier::new(MollifierFamily::Hexic, 0.2, 1).unwrap(), 1).unwrap();
        let row = b.eval_at([0.25, 0.0], [0, 0]).unwrap();
        assert_eq!(row.cols, vec![0, 1]);
        assert!((row.vals[0] - 1.0).abs() < 1e-14);
        // Linear monomial reproduces ξ, which vanishes at the centroid.
        assert!(row.vals[1].abs() < 1e-14);
        let row = b.eval_at([0.3, 0.0], [0, 0]).unwrap();
        assert!((row.vals[1] - 2.0 * (0.3 - 0.25) / 0.5).abs() < 1e-14);
    }

    #[test]
    fn empty_far_away() {
        let b = basis_1d(MollifierFamily::BSpline2, 2);
        assert!(b.eval_at([5.0, 0.0], [0, 0]).unwrap().cols.is_empty());
        let b = basis_2d(MollifierFamily::Hexic, 1, 16);
        assert!(b.eval_at([5.0, -3.0], [0, 0]).unwrap().cols.is_empty());
    }

    fn partition_sum(b: &BasisSet<f64>, x: [f64; 2]) -> f64 {
        let row = b.eval_at(x, [0, 0]).unwrap();
        row.cols.iter().zip(&row.vals).filter(|(c, _)| b.column_owner(**c).1 == 0).map(|(_, v)| v).sum()
    }

    #[test]
    fn partition_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for f in [MollifierFamily::BSpline2, MollifierFamily::BSpline3, MollifierFamily::Octic] {
            let b = basis_1d(f, 2);
            for _ in 0..100 {
                let x = [rng.random_range(0.0..1.0), 0.0];
                assert!((partition_sum(&b, x) - 1.0).abs() < 1e-10);
            }
        }
        for f in [MollifierFamily::BSpline2, MollifierFamily::Hexic] {
            let b = basis_2d(f, 1, 16);
            for _ in 0..100 {
                let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
                assert!((partition_sum(&b, x) - 1.0).abs() < 1e-10);
            }
        }
    }

    fn dense(b: &BasisSet<f64>, x: [f64; 2], d: [usize; 2]) -> Vec<f64> {
        let mut out = vec![0.0; b.n_b()];
        let row = b.eval_at(x, d).unwrap();
        for (c, v) in row.cols.iter().zip(&row.vals) {
            out[*c] = *v;
        }
        out
    }

    fn check_fd(b: &BasisSet<f64>, x: [f64; 2], d: [usize; 2], axis: usize) {
        let h = 1e-5 * b.mollifier().width();
        let mut lo = d;
        lo[axis] -= 1;
        let mut xp = x;
        let mut xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        let fp = dense(b, xp, lo);
        let fm = dense(b, xm, lo);
        let exact = dense(b, x, d);
        let scale = exact.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..b.n_b() {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            assert!((fd - exact[i]).abs() <= 1e-5 * scale, "{d:?} col {i}: fd {fd} exact {}", exact[i]);
        }
    }

    #[test]
    fn derivatives_match_finite_differences_1d() {
        let b = basis_1d(MollifierFamily::BSpline3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let x = [rng.random_range(0.0..1.0), 0.0];
            check_fd(&b, x, [1, 0], 0);
            check_fd(&b, x, [2, 0], 0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences_2d() {
        let b = basis_2d(MollifierFamily::Hexic, 2, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
            check_fd(&b, x, [1, 0], 0);
            check_fd(&b, x, [0, 1], 1);
            check_fd(&b, x, [2, 0], 0);
            check_fd(&b, x, [1, 1], 1);
            check_fd(&b, x, [0, 2], 1);
        }
    }

    #[test]
    fn eval_many_matches_eval_at() {
        let b = basis_2d(MollifierFamily::BSpline2, 2, 16);
        let x = [0.37, 0.61];
        let derivs = [[0, 0], [2, 0], [1, 1]];
        let (cols, vals) = b.eval_many(x, &derivs).unwrap();
        for (d, v) in derivs.iter().zip(&vals) {
            let row = b.eval_at(x, *d).unwrap();
            assert_eq!(row.cols, cols);
            let scale = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for (p, q) in row.vals.iter().zip(v) {
                assert!((p - q).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn supports() {
        let mesh = Mesh::intervals_1d(&[0.0f64, 0.2, 0.4, 1.0]).unwrap();
        let b = BasisSet::build(mesh.pad_ghost(0.2).unwrap(), Mollifier::new(MollifierFamily::Hexic, 0.2, 1).unwrap(), 1)
            .unwrap();
        match b.support_of(1) {
            ConvexPolytope::Interval { lo, hi } => {
                assert!((lo - 0.1).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let b = basis_2d(MollifierFamily::Hexic, 1, 16);
        for c in 0..b.mesh().n_cells() {
            for v in b.mesh().cell(c).vertices() {
                let s = b.support_of(c);
                assert!(s.contains(v, -1e-9), "vertex strictly inside its support");
            }
        }
    }

    #[test]
    fn locality() {
        let b = basis_2d(MollifierFamily::Hexic, 1, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let x = [rng.random_range(-0.1..1.1), rng.random_range(-0.1..1.1)];
            let row = b.eval_at(x, [0, 0]).unwrap();
            let cells: std::collections::BTreeSet<usize> = row.cols.iter().map(|c| b.column_owner(*c).0).collect();
            for c in 0..b.mesh().n_cells() {
                let inside = b.support_of(c).contains(x, -1e-9);
                let outside = !b.support_of(c).contains(x, 1e-9);
                if inside {
                    assert!(cells.contains(&c));
                }
                if outside {
                    assert!(!cells.contains(&c), "x {x:?} cell {c} {:?} support {:?}", b.mesh().cell(c), b.support_of(c));
                }
            }
        }
    }

    #[test]
    fn derivative_beyond_kernel_rejected() {
        let b = basis_1d(MollifierFamily::BSpline2, 1);
        assert!(b.eval_at([0.5, 0.0], [3, 0]).is_err());
    }
}
