use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Point, Real};

/// Highest polynomial exactness degree served by [`gauss_rule`].
pub const MAX_DEGREE: usize = 40;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = from_usize::<T>(n);
    let half = (n + 1) / 2;
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (T::PI() * (from_usize::<T>(i) + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= T::epsilon() * lit(4.0) {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = lit::<T>(2.0) / ((T::one() - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}

fn legendre_with_derivative<T: Real>(n: usize, z: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = z;
    for k in 2..=n {
        let kf = from_usize::<T>(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = from_usize::<T>(n);
    let d = nf * (z * p1 - p0) / (z * z - T::one());
    (p1, d)
}

/// Integration element for [`gauss_rule`].
#[derive(Clone, Copy, Debug)]
pub enum Element<T> {
    Interval(T, T),
    Triangle([Point<T>; 3]),
}

/// Points and positive weights on a physical element.
#[derive(Clone, Debug)]
pub struct QuadratureRule<T> {
    pub points: Vec<Point<T>>,
    pub weights: Vec<T>,
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
}

/// Reference triangle rule on `(0,0), (1,0), (0,1)`; weights sum to 1/2.
///
/// Built as a collapsed (Duffy) product of Gauss–Legendre rules, so any
/// degree is available and all weights are positive.
#[derive(Clone, Debug)]
pub struct TriangleRule<T> {
    pub points: Vec<Point<T>>,
    pub weights: Vec<T>,
    pub degree: usize,
}

impl<T: Real> TriangleRule<T> {
    pub fn new(degree: usize) -> Self {
        // The collapse adds a factor (1 - u), one extra degree along u.
        let nu = (degree + 3) / 2;
        let nv = (degree + 2) / 2;
        let (xu, wu) = gauss_legendre::<T>(nu);
        let (xv, wv) = gauss_legendre::<T>(nv);
        let half = lit::<T>(0.5);
        let mut points = Vec::with_capacity(nu * nv);
        let mut weights = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            let u = (xu[i] + T::one()) * half;
            for j in 0..nv {
                let v = (xv[j] + T::one()) * half;
                points.push([u, v * (T::one() - u)]);
                weights.push(wu[i] * wv[j] * (T::one() - u) * half * half);
            }
        }
        TriangleRule { points, weights, degree }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Maps the rule onto a physical triangle.
    pub fn map(&self, tri: &[Point<T>; 3]) -> QuadratureRule<T> {
        let [a, b, c] = *tri;
        let area2 = ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs();
        let points = self
            .points
            .iter()
            .map(|p| {
                [
                    a[0] + p[0] * (b[0] - a[0]) + p[1] * (c[0] - a[0]),
                    a[1] + p[0] * (b[1] - a[1]) + p[1] * (c[1] - a[1]),
                ]
            })
            .collect();
        let weights = self.weights.iter().map(|&w| w * area2).collect();
        QuadratureRule { points, weights, degree: self.degree }
    }
}

/// Gauss rule of exactness degree `degree` on an interval or triangle.
pub fn gauss_rule<T: Real>(element: Element<T>, degree: usize) -> Result<QuadratureRule<T>> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree, max: MAX_DEGREE });
    }
    match element {
        Element::Interval(a, b) => {
            let n = (degree + 2) / 2;
            let (x, w) = gauss_legendre::<T>(n);
            let half = (b - a) * lit(0.5);
            let mid = (a + b) * lit(0.5);
            Ok(QuadratureRule {
                points: x.iter().map(|&xi| [mid + half * xi, T::zero()]).collect(),
                weights: w.iter().map(|&wi| wi * half.abs()).collect(),
                degree,
            })
        }
        Element::Triangle(tri) => Ok(TriangleRule::<T>::new(degree).map(&tri)),
    }
}
