//! Benchmark problems with manufactured or analytic solutions.
//!
//! Sign conventions of the strong forms:
//! Poisson `-Δu = s`; biharmonic `D Δ²u = q` (1D: `u'''' = s`);
//! plane-stress elasticity `-∇·σ(u) = b`.

use std::fmt;
use std::str::FromStr;

use crate::collocation::BcKind;
use crate::error::{Error, Result};
use crate::mesh::Domain;
use crate::scalar::{lit, to_f64, Point, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseKind {
    Poisson1d,
    Biharmonic1d,
    Elasticity2d,
    PlateBending,
    PlateHole,
}

impl CaseKind {
    pub const ALL: [CaseKind; 5] =
        [CaseKind::Poisson1d, CaseKind::Biharmonic1d, CaseKind::Elasticity2d, CaseKind::PlateBending, CaseKind::PlateHole];

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Poisson1d => "poisson1d",
            CaseKind::Biharmonic1d => "biharmonic1d",
            CaseKind::Elasticity2d => "elasticity2d",
            CaseKind::PlateBending => "plate_bending",
            CaseKind::PlateHole => "plate_hole",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        CaseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown case {s:?}")))
    }
}

/// Differential operator of a case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pde<T> {
    Poisson,
    /// Plane-stress elasticity with reduced Lamé constant `λ* = 2λμ/(λ+2μ)`.
    Elasticity { lambda: T, mu: T },
    Biharmonic { stiffness: T },
}

impl<T: Real> Pde<T> {
    /// Highest derivative order.
    pub fn order(&self) -> usize {
        match self {
            Pde::Biharmonic { .. } => 4,
            _ => 2,
        }
    }

    /// Continuity class the mollifier must have (the basis gains one).
    pub fn required_smoothness(&self) -> usize {
        self.order() - 1
    }

    pub fn components(&self) -> usize {
        match self {
            Pde::Elasticity { .. } => 2,
            _ => 1,
        }
    }

    /// Stiffness that makes the operator dimensionless: `λ* + 2μ` for
    /// elasticity, `D` for plates, 1 for Poisson.
    pub fn modulus(&self) -> T {
        match *self {
            Pde::Poisson => T::one(),
            Pde::Elasticity { lambda, mu } => lambda + mu + mu,
            Pde::Biharmonic { stiffness } => stiffness,
        }
    }

    /// Plane-stress constants from Young's modulus and Poisson's ratio.
    pub fn plane_stress(e: T, nu: T) -> Self {
        let one = T::one();
        Pde::Elasticity { lambda: e * nu / (one - nu * nu), mu: e / (lit::<T>(2.0) * (one + nu)) }
    }
}

/// Material and loading constants (unused entries are zero).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Material<T> {
    pub youngs_modulus: T,
    pub poisson_ratio: T,
    pub plate_stiffness: T,
    pub far_field_stress: T,
    pub hole_radius: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemCase<T> {
    pub kind: CaseKind,
    pub pde: Pde<T>,
    pub domain: Domain<T>,
    pub bc: BcKind,
    pub material: Material<T>,
}

fn pi<T: Real>() -> T {
    T::PI()
}

impl<T: Real> ProblemCase<T> {
    pub fn new(kind: CaseKind) -> Self {
        match kind {
            CaseKind::Poisson1d => Self::poisson_1d(),
            CaseKind::Biharmonic1d => Self::biharmonic_1d(),
            CaseKind::Elasticity2d => Self::elasticity_2d(),
            CaseKind::PlateBending => Self::plate_bending_2d(),
            CaseKind::PlateHole => Self::plate_with_hole(),
        }
    }

    /// `-u'' = 9π² sin 3πx` on (0,1), `u = sin 3πx`.
    pub fn poisson_1d() -> Self {
        ProblemCase {
            kind: CaseKind::Poisson1d,
            pde: Pde::Poisson,
            domain: Domain::unit_interval(),
            bc: BcKind::Value,
            material: Material::default(),
        }
    }

    /// `u'''' = (3π)⁴ sin 3πx` on (0,1) with `u` and `u'` at both ends.
    pub fn biharmonic_1d() -> Self {
        ProblemCase {
            kind: CaseKind::Biharmonic1d,
            pde: Pde::Biharmonic { stiffness: T::one() },
            domain: Domain::unit_interval(),
            bc: BcKind::ValueAndSlope,
            material: Material { plate_stiffness: T::one(), ..Default::default() },
        }
    }

    /// Unit square, `E = 1000`, `ν = 0.3`, `u₁ = u₂ = sin πx sin πy`.
    pub fn elasticity_2d() -> Self {
        let e = lit::<T>(1000.0);
        let nu = lit::<T>(0.3);
        ProblemCase {
            kind: CaseKind::Elasticity2d,
            pde: Pde::plane_stress(e, nu),
            domain: Domain::unit_square(),
            bc: BcKind::Value,
            material: Material { youngs_modulus: e, poisson_ratio: nu, ..Default::default() },
        }
    }

    /// Clamped unit plate, `D = 1`, `u = (1 - cos 2πx)(1 - cos 2πy)`.
    pub fn plate_bending_2d() -> Self {
        ProblemCase {
            kind: CaseKind::PlateBending,
            pde: Pde::Biharmonic { stiffness: T::one() },
            domain: Domain::unit_square(),
            bc: BcKind::ValueAndSlope,
            material: Material { plate_stiffness: T::one(), ..Default::default() },
        }
    }

    /// Quarter of an infinite plate with a hole under uniaxial tension,
    /// Kirsch displacements imposed on the whole boundary.
    pub fn plate_with_hole() -> Self {
        let e = lit::<T>(70e6);
        let nu = lit::<T>(0.3);
        let a = lit::<T>(0.25);
        ProblemCase {
            kind: CaseKind::PlateHole,
            pde: Pde::plane_stress(e, nu),
            domain: Domain::RectMinusDisk { min: [T::zero(); 2], max: [T::one(); 2], center: [T::zero(); 2], radius: a },
            bc: BcKind::Value,
            material: Material {
                youngs_modulus: e,
                poisson_ratio: nu,
                far_field_stress: lit(1e6),
                hole_radius: a,
                ..Default::default()
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn components(&self) -> usize {
        self.pde.components()
    }

    /// Kolosov constant `(3 - ν)/(1 + ν)` (plane stress).
    pub fn kolosov(&self) -> T {
        let nu = self.material.poisson_ratio;
        (lit::<T>(3.0) - nu) / (T::one() + nu)
    }

    /// Shear modulus `E / (2(1 + ν))`.
    pub fn shear_modulus(&self) -> T {
        self.material.youngs_modulus / (lit::<T>(2.0) * (T::one() + self.material.poisson_ratio))
    }

    /// Exact field; scalar problems fill component 0 only.
    pub fn exact(&self, x: Point<T>) -> [T; 2] {
        let p = pi::<T>();
        match self.kind {
            CaseKind::Poisson1d | CaseKind::Biharmonic1d => [(lit::<T>(3.0) * p * x[0]).sin(), T::zero()],
            CaseKind::Elasticity2d => {
                let s = (p * x[0]).sin() * (p * x[1]).sin();
                [s, s]
            }
            CaseKind::PlateBending => {
                let tp = lit::<T>(2.0) * p;
                [(T::one() - (tp * x[0]).cos()) * (T::one() - (tp * x[1]).cos()), T::zero()]
            }
            CaseKind::PlateHole => self.kirsch(x).0,
        }
    }

    /// Exact gradient, `[component][axis]`.
    pub fn exact_gradient(&self, x: Point<T>) -> [[T; 2]; 2] {
        let p = pi::<T>();
        let z = T::zero();
        match self.kind {
            CaseKind::Poisson1d | CaseKind::Biharmonic1d => {
                let k = lit::<T>(3.0) * p;
                [[k * (k * x[0]).cos(), z], [z, z]]
            }
            CaseKind::Elasticity2d => {
                let gx = p * (p * x[0]).cos() * (p * x[1]).sin();
                let gy = p * (p * x[0]).sin() * (p * x[1]).cos();
                [[gx, gy], [gx, gy]]
            }
            CaseKind::PlateBending => {
                let tp = lit::<T>(2.0) * p;
                let one = T::one();
                [
                    [tp * (tp * x[0]).sin() * (one - (tp * x[1]).cos()), tp * (tp * x[1]).sin() * (one - (tp * x[0]).cos())],
                    [z, z],
                ]
            }
            CaseKind::PlateHole => self.kirsch(x).1,
        }
    }

    /// Right-hand side of the strong form at `x`.
    pub fn source(&self, x: Point<T>) -> [T; 2] {
        let p = pi::<T>();
        let z = T::zero();
        match self.kind {
            CaseKind::Poisson1d => {
                let k = lit::<T>(3.0) * p;
                [k * k * (k * x[0]).sin(), z]
            }
            CaseKind::Biharmonic1d => {
                let k = lit::<T>(3.0) * p;
                [k.powi(4) * (k * x[0]).sin(), z]
            }
            CaseKind::Elasticity2d => {
                let (lambda, mu) = self.lame();
                let s = (p * x[0]).sin() * (p * x[1]).sin();
                let c = (p * x[0]).cos() * (p * x[1]).cos();
                let b = p * p * ((lit::<T>(3.0) * mu + lambda) * s - (lambda + mu) * c);
                [b, b]
            }
            CaseKind::PlateBending => {
                let tp = lit::<T>(2.0) * p;
                let a = (tp * x[0]).cos();
                let b = (tp * x[1]).cos();
                [-lit::<T>(16.0) * p.powi(4) * (a - lit::<T>(4.0) * a * b + b) * self.material.plate_stiffness, z]
            }
            CaseKind::PlateHole => [z, z],
        }
    }

    /// Kirsch displacement and its gradient at `x` (hole centred at the origin).
    fn kirsch(&self, x: Point<T>) -> ([T; 2], [[T; 2]; 2]) {
        let a = self.material.hole_radius;
        let kap = self.kolosov();
        let k = self.material.far_field_stress * a / (lit::<T>(8.0) * self.shear_modulus());
        let one = T::one();
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        let six = lit::<T>(6.0);
        let r = x[0].hypot(x[1]);
        let th = x[1].atan2(x[0]);
        let (s1, c1) = th.sin_cos();
        let (s3, c3) = (three * th).sin_cos();
        let ar = a / r;
        let ar3 = ar * ar * ar;
        let ux = k * ((r / a) * (kap + one) * c1 + two * ar * ((one + kap) * c1 + c3) - two * ar3 * c3);
        let uy = k * ((r / a) * (kap - three) * s1 + two * ar * ((one - kap) * s1 + s3) - two * ar3 * s3);
        // Radial and angular derivatives.
        let dux_dr = k * ((kap + one) * c1 / a - two * ar / r * ((one + kap) * c1 + c3) + six * ar3 / r * c3);
        let dux_dt = k * (-(r / a) * (kap + one) * s1 - two * ar * ((one + kap) * s1 + three * s3) + six * ar3 * s3);
        let duy_dr = k * ((kap - three) * s1 / a - two * ar / r * ((one - kap) * s1 + s3) + six * ar3 / r * s3);
        let duy_dt = k * ((r / a) * (kap - three) * c1 + two * ar * ((one - kap) * c1 + three * c3) - six * ar3 * c3);
        let cart = |dr: T, dt: T| [c1 * dr - s1 / r * dt, s1 * dr + c1 / r * dt];
        ([ux, uy], [cart(dux_dr, dux_dt), cart(duy_dr, duy_dt)])
    }

    /// Plane-stress stress `[σxx, σyy, σxy]` from a displacement gradient.
    /// `(λ*, μ)`, zero for non-elastic problems.
    pub fn lame(&self) -> (T, T) {
        match self.pde {
            Pde::Elasticity { lambda, mu } => (lambda, mu),
            _ => (T::zero(), T::zero()),
        }
    }

    pub fn stress(&self, grad: [[T; 2]; 2]) -> [T; 3] {
        let (lambda, mu) = self.lame();
        let exx = grad[0][0];
        let eyy = grad[1][1];
        let exy = (grad[0][1] + grad[1][0]) * lit(0.5);
        let tr = exx + eyy;
        let two_mu = lit::<T>(2.0) * mu;
        [lambda * tr + two_mu * exx, lambda * tr + two_mu * eyy, two_mu * exy]
    }

    /// Strain energy density `ε : σ(ε)` of a displacement gradient.
    pub fn energy_density(&self, grad: [[T; 2]; 2]) -> T {
        let s = self.stress(grad);
        let exy = (grad[0][1] + grad[1][0]) * lit(0.5);
        s[0] * grad[0][0] + s[1] * grad[1][1] + lit::<T>(2.0) * s[2] * exy
    }

    /// The operator applied to the exact solution by finite differences.
    pub fn operator_fd(&self, x: Point<T>) -> [T; 2] {
        let u = |p: Point<T>| self.exact(p);
        match self.pde {
            Pde::Poisson => {
                let h = lit::<T>(1e-4);
                let l = second(&u, x, h, 0, 0);
                [-l[0], T::zero()]
            }
            Pde::Elasticity { lambda, mu } => {
                // Differentiating the analytic gradient once keeps rounding small.
                let h = lit::<T>(1e-6);
                let g = |p: Point<T>| self.exact_gradient(p);
                let d = |axis: usize| {
                    let mut xp = x;
                    let mut xm = x;
                    xp[axis] += h;
                    xm[axis] -= h;
                    let (gp, gm) = (g(xp), g(xm));
                    let mut out = [[T::zero(); 2]; 2];
                    for c in 0..2 {
                        for k in 0..2 {
                            out[c][k] = (gp[c][k] - gm[c][k]) / (lit::<T>(2.0) * h);
                        }
                    }
                    out
                };
                // dd[axis][component][k] = ∂_axis ∂_k u_component
                let dd = [d(0), d(1)];
                let mut out = [T::zero(); 2];
                for a in 0..2 {
                    let lap = dd[0][a][0] + dd[1][a][1];
                    let grad_div = dd[a][0][0] + dd[a][1][1];
                    out[a] = -(mu * lap + (lambda + mu) * grad_div);
                }
                out
            }
            Pde::Biharmonic { stiffness } => {
                // Richardson-extrapolated repeated differences.
                let bih = |h: T| -> T {
                    if self.dim() == 1 {
                        let f = |k: i32| u([x[0] + h * lit::<T>(k as f64), x[1]])[0];
                        (f(2) - lit::<T>(4.0) * f(1) + lit::<T>(6.0) * f(0) - lit::<T>(4.0) * f(-1) + f(-2)) / h.powi(4)
                    } else {
                        let lap = |p: Point<T>| -> T {
                            let f = |i: i32, j: i32| u([p[0] + h * lit::<T>(i as f64), p[1] + h * lit::<T>(j as f64)])[0];
                            (f(1, 0) + f(-1, 0) + f(0, 1) + f(0, -1) - lit::<T>(4.0) * f(0, 0)) / (h * h)
                        };
                        let l = |i: i32, j: i32| lap([x[0] + h * lit::<T>(i as f64), x[1] + h * lit::<T>(j as f64)]);
                        (l(1, 0) + l(-1, 0) + l(0, 1) + l(0, -1) - lit::<T>(4.0) * l(0, 0)) / (h * h)
                    }
                };
                let h = lit::<T>(1e-2);
                let v = (lit::<T>(4.0) * bih(h * lit(0.5)) - bih(h)) / lit::<T>(3.0);
                [stiffness * v, T::zero()]
            }
        }
    }

    /// Largest deviation between `operator_fd` and `source` over `points`,
    /// relative to the largest source magnitude (or, when the source
    /// vanishes, to the largest operator term).
    pub fn consistency_error(&self, points: &[Point<T>]) -> f64 {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for &x in points {
            let op = self.operator_fd(x);
            let s = self.source(x);
            for c in 0..self.components() {
                num = num.max(to_f64(op[c] - s[c]).abs());
                den = den.max(to_f64(s[c]).abs());
            }
        }
        if den == 0.0 {
            // Equilibrium check: compare with the size of μΔu.
            if let Pde::Elasticity { mu, .. } = self.pde {
                for &x in points {
                    let h = lit::<T>(1e-4);
                    let l = second(&|p| self.exact(p), x, h, 0, 0);
                    let m = second(&|p| self.exact(p), x, h, 1, 1);
                    den = den.max(to_f64(mu * (l[0] + m[0])).abs());
                }
            }
        }
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

/// Central second difference `∂_i ∂_j f` of a vector field.
fn second<T: Real, F: Fn(Point<T>) -> [T; 2]>(f: &F, x: Point<T>, h: T, i: usize, j: usize) -> [T; 2] {
    let shift = |p: Point<T>, k: usize, s: T| {
        let mut q = p;
        q[k] += s;
        q
    };
    let mut out = [T::zero(); 2];
    if i == j {
        let (a, b, c) = (f(shift(x, i, h)), f(x), f(shift(x, i, -h)));
        for k in 0..2 {
            out[k] = (a[k] - lit::<T>(2.0) * b[k] + c[k]) / (h * h);
        }
    } else {
        let pp = f(shift(shift(x, i, h), j, h));
        let pm = f(shift(shift(x, i, h), j, -h));
        let mp = f(shift(shift(x, i, -h), j, h));
        let mm = f(shift(shift(x, i, -h), j, -h));
        for k in 0..2 {
            out[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (lit::<T>(4.0) * h * h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_points(n: usize, seed: u64, dim: usize, hole: bool) -> Vec<[f64; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < n {
            let p: [f64; 2] = [rng.random_range(0.05..0.95), if dim == 1 { 0.0 } else { rng.random_range(0.05..0.95) }];
            if !hole || p[0].hypot(p[1]) > 0.3 {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn operator_modulus() {
        assert_eq!(Pde::<f64>::Poisson.modulus(), 1.0);
        assert_eq!(Pde::Biharmonic { stiffness: 2.5f64 }.modulus(), 2.5);
        let (l, m) = ProblemCase::<f64>::elasticity_2d().lame();
        assert!((ProblemCase::<f64>::elasticity_2d().pde.modulus() - (l + 2.0 * m)).abs() < 1e-12);
    }

    #[test]
    fn poisson_values() {
        let c = ProblemCase::<f64>::poisson_1d();
        assert!((c.exact([0.5, 0.0])[0] + 1.0).abs() < 1e-15);
        assert_eq!(c.exact([0.0, 0.0])[0], 0.0);
        assert!(c.exact([1.0, 0.0])[0].abs() < 1e-15);
        for x in [0.1, 0.2, 0.45, 0.8] {
            let r = c.source([x, 0.0])[0] / c.exact([x, 0.0])[0];
            assert!((r - 9.0 * PI * PI).abs() < 1e-9);
        }
        assert!(c.consistency_error(&random_points(20, 1, 1, false)) < 1e-5);
    }

    #[test]
    fn biharmonic_1d_values() {
        let c = ProblemCase::<f64>::biharmonic_1d();
        assert_eq!(c.bc, BcKind::ValueAndSlope);
        assert!((c.exact_gradient([0.0, 0.0])[0][0] - 3.0 * PI).abs() < 1e-14);
        for x in [0.1, 0.2, 0.45, 0.8] {
            let r = c.source([x, 0.0])[0] / c.exact([x, 0.0])[0];
            assert!((r - (3.0 * PI).powi(4)).abs() < 1e-6);
        }
        assert!(c.consistency_error(&random_points(20, 2, 1, false)) < 1e-5);
    }

    #[test]
    fn elasticity_values() {
        let c = ProblemCase::<f64>::elasticity_2d();
        let u = c.exact([0.5, 0.5]);
        assert!((u[0] - 1.0).abs() < 1e-15 && (u[1] - 1.0).abs() < 1e-15);
        for t in [0.0, 0.3, 0.7, 1.0] {
            for p in [[t, 0.0], [t, 1.0], [0.0, t], [1.0, t]] {
                assert!(c.exact(p)[0].abs() < 1e-15);
            }
        }
        if let Pde::Elasticity { lambda, mu } = c.pde {
            // λ* = 2λμ/(λ+2μ) with the 3D Lamé λ.
            let lam3 = 1000.0 * 0.3 / (1.3 * 0.4);
            assert!((lambda - 2.0 * lam3 * mu / (lam3 + 2.0 * mu)).abs() < 1e-9);
            assert!((mu - 1000.0 / 2.6).abs() < 1e-12);
        }
        assert!(c.consistency_error(&random_points(20, 3, 2, false)) < 1e-5);
    }

    #[test]
    fn plate_bending_values() {
        let c = ProblemCase::<f64>::plate_bending_2d();
        assert!((c.exact([0.25, 0.25])[0] - 1.0).abs() < 1e-15);
        assert!(c.source([0.25, 0.25])[0].abs() < 1e-9);
        assert!((c.exact([0.5, 0.5])[0] - 4.0).abs() < 1e-15);
        assert!(c.consistency_error(&random_points(20, 4, 2, false)) < 1e-4);
    }

    #[test]
    fn kirsch_values() {
        let c = ProblemCase::<f64>::plate_with_hole();
        assert!((c.kolosov() - 2.7 / 1.3).abs() < 1e-15);
        let mu = c.shear_modulus();
        let ux = c.exact([0.25, 0.0])[0];
        assert!((ux - 3.0 * 1e6 * 0.25 * (c.kolosov() + 1.0) / (8.0 * mu)).abs() < 1e-12 * ux.abs());
        for r in [0.25, 0.4, 0.9] {
            assert!(c.exact([r, 0.0])[1].abs() < 1e-18);
        }
        // Equilibrium of the analytic field.
        assert!(c.consistency_error(&random_points(20, 5, 2, true)) < 1e-4);
    }

    #[test]
    fn kirsch_gradient_matches_differences() {
        let c = ProblemCase::<f64>::plate_with_hole();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = 1e-6;
        for _ in 0..20 {
            let x: [f64; 2] = [rng.random_range(0.05..1.0), rng.random_range(0.05..1.0)];
            if x[0].hypot(x[1]) < 0.26 {
                continue;
            }
            let g = c.exact_gradient(x);
            for axis in 0..2 {
                let mut xp = x;
                let mut xm = x;
                xp[axis] += h;
                xm[axis] -= h;
                for comp in 0..2 {
                    let fd = (c.exact(xp)[comp] - c.exact(xm)[comp]) / (2.0 * h);
                    assert!((fd - g[comp][axis]).abs() < 1e-6 * g[comp][axis].abs().max(1e-3));
                }
            }
        }
    }

    #[test]
    fn gradients_match_differences() {
        let h = 1e-6;
        for kind in [CaseKind::Poisson1d, CaseKind::Elasticity2d, CaseKind::PlateBending] {
            let c = ProblemCase::<f64>::new(kind);
            for x in random_points(10, 7, c.dim(), false) {
                let g = c.exact_gradient(x);
                for axis in 0..c.dim() {
                    let mut xp = x;
                    let mut xm = x;
                    xp[axis] += h;
                    xm[axis] -= h;
                    for comp in 0..c.components() {
                        let fd = (c.exact(xp)[comp] - c.exact(xm)[comp]) / (2.0 * h);
                        assert!((fd - g[comp][axis]).abs() < 1e-6 * g[comp][axis].abs().max(1.0), "{kind}");
                    }
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for k in CaseKind::ALL {
            assert_eq!(k.name().parse::<CaseKind>().unwrap(), k);
        }
        assert!("heat3d".parse::<CaseKind>().is_err());
    }
}
