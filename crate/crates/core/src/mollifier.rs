//! Compactly supported, symmetric, unit-volume polynomial mollifiers.
//!
//! Every kernel is stored as a piecewise polynomial in the normalised
//! offset `t = x / h_m` on `[-1/2, 1/2]`, with value `m(x) = P(t) / h_m`.
//! Derivatives are exact: the k-th derivative is `P^(k)(t) / h_m^(k+1)`.
//! Two-dimensional kernels are tensor products of the 1D profile.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::gauss_legendre;
use crate::scalar::{lit, Point, Real};

/// Highest total derivative order evaluated anywhere in the crate.
pub const MAX_TOTAL_DERIVATIVE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MollifierFamily {
    /// Quadratic uniform B-spline, C^1.
    BSpline2,
    /// Cubic uniform B-spline, C^2.
    BSpline3,
    /// `(1 - 4t^2)^3`, C^2.
    Hexic,
    /// `(1 - 4t^2)^4`, C^3.
    Octic,
    /// `(1 - 4t^2)^5`, C^4.
    Decic,
}

impl MollifierFamily {
    pub const ALL: [MollifierFamily; 5] = [
        MollifierFamily::BSpline2,
        MollifierFamily::BSpline3,
        MollifierFamily::Hexic,
        MollifierFamily::Octic,
        MollifierFamily::Decic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MollifierFamily::BSpline2 => "bspline2",
            MollifierFamily::BSpline3 => "bspline3",
            MollifierFamily::Hexic => "hexic",
            MollifierFamily::Octic => "octic",
            MollifierFamily::Decic => "decic",
        }
    }

    /// Continuity class k of the kernel (C^k).
    pub fn smoothness(self) -> usize {
        match self {
            MollifierFamily::BSpline2 => 1,
            MollifierFamily::BSpline3 => 2,
            MollifierFamily::Hexic => 2,
            MollifierFamily::Octic => 3,
            MollifierFamily::Decic => 4,
        }
    }

    /// Polynomial degree of each piece.
    pub fn degree(self) -> usize {
        match self {
            MollifierFamily::BSpline2 => 2,
            MollifierFamily::BSpline3 => 3,
            MollifierFamily::Hexic => 6,
            MollifierFamily::Octic => 8,
            MollifierFamily::Decic => 10,
        }
    }

    /// Highest derivative order per axis that is defined (possibly piecewise).
    pub fn max_derivative(self) -> usize {
        self.smoothness() + 1
    }

    /// Breakpoints and power coefficients (in `t`) of each piece.
    fn normalized_pieces(self) -> Vec<(f64, f64, Vec<f64>)> {
        // Even profiles C (1 - 4 t^2)^n.
        let even = |n: u32, c: f64| {
            // Binomial expansion in t^2.
            let mut coeffs = vec![0.0; 2 * n as usize + 1];
            let mut binom = 1.0;
            for k in 0..=n {
                coeffs[2 * k as usize] = c * binom * (-4.0f64).powi(k as i32);
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            vec![(-0.5, 0.5, coeffs)]
        };
        // Uniform B-spline pieces in u, rescaled with u = s t and multiplied by s.
        let rescale = |s: f64, pieces: &[(f64, f64, &[f64])]| {
            pieces
                .iter()
                .map(|(a, b, c)| {
                    let coeffs = c.iter().enumerate().map(|(k, ck)| ck * s.powi(k as i32 + 1)).collect();
                    (a / s, b / s, coeffs)
                })
                .collect()
        };
        match self {
            MollifierFamily::BSpline2 => rescale(
                3.0,
                &[
                    (-1.5, -0.5, &[9.0 / 8.0, 1.5, 0.5]),
                    (-0.5, 0.5, &[0.75, 0.0, -1.0]),
                    (0.5, 1.5, &[9.0 / 8.0, -1.5, 0.5]),
                ],
            ),
            MollifierFamily::BSpline3 => rescale(
                4.0,
                &[
                    (-2.0, -1.0, &[8.0 / 6.0, 2.0, 1.0, 1.0 / 6.0]),
                    (-1.0, 0.0, &[2.0 / 3.0, 0.0, -1.0, -0.5]),
                    (0.0, 1.0, &[2.0 / 3.0, 0.0, -1.0, 0.5]),
                    (1.0, 2.0, &[8.0 / 6.0, -2.0, 1.0, -1.0 / 6.0]),
                ],
            ),
            MollifierFamily::Hexic => even(3, 35.0 / 16.0),
            MollifierFamily::Octic => even(4, 315.0 / 128.0),
            MollifierFamily::Decic => even(5, 2772.0 / 1024.0),
        }
    }
}

impl fmt::Display for MollifierFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MollifierFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MollifierFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mollifier family '{s}'")))
    }
}

/// One polynomial piece on `[lo, hi)` in the normalised offset.
#[derive(Clone, Debug)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    /// `derivs[k]` are the power coefficients of `P^(k)`.
    derivs: Vec<Vec<T>>,
}

impl<T: Real> Piece<T> {
    /// `P^(k)(t)` by Horner's rule.
    #[inline]
    pub fn eval(&self, k: usize, t: T) -> T {
        let c = &self.derivs[k];
        let mut acc = T::zero();
        for &ci in c.iter().rev() {
            acc = acc * t + ci;
        }
        acc
    }
}

/// Symmetric compact kernel of a given family and support width.
#[derive(Clone, Debug)]
pub struct Mollifier<T> {
    family: MollifierFamily,
    width: T,
    dim: usize,
    pieces: Vec<Piece<T>>,
    /// `h_m^-(k+1)` for k = 0..=max_derivative.
    inv_pow: Vec<T>,
}

impl<T: Real> Mollifier<T> {
    pub fn new(family: MollifierFamily, width: T, dim: usize) -> Result<Self> {
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::InvalidInput("mollifier width must be positive".into()));
        }
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("mollifier dimension must be 1 or 2, got {dim}")));
        }
        let kmax = family.max_derivative();
        let pieces = family
            .normalized_pieces()
            .into_iter()
            .map(|(lo, hi, c)| {
                let mut derivs = Vec::with_capacity(kmax + 1);
                let mut cur: Vec<f64> = c;
                for _ in 0..=kmax {
                    derivs.push(cur.iter().map(|&x| lit::<T>(x)).collect());
                    cur = cur.iter().enumerate().skip(1).map(|(k, ck)| ck * k as f64).collect();
                    if cur.is_empty() {
                        cur.push(0.0);
                    }
                }
                Piece { lo: lit(lo), hi: lit(hi), derivs }
            })
            .collect();
        let inv = T::one() / width;
        let inv_pow = (0..=kmax).scan(T::one(), |acc, _| {
            *acc = *acc * inv;
            Some(*acc)
        });
        Ok(Mollifier { family, width, dim, pieces, inv_pow: inv_pow.collect() })
    }

    pub fn family(&self) -> MollifierFamily {
        self.family
    }

    /// Support width `h_m`.
    pub fn width(&self) -> T {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfwidth(&self) -> T {
        self.width * lit(0.5)
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    /// Checks a per-axis derivative multi-index against this kernel.
    pub fn check_derivative(&self, deriv: [usize; 2]) -> Result<()> {
        let max = self.family.max_derivative();
        let total = deriv[0] + deriv[1];
        if self.dim == 1 && deriv[1] != 0 {
            return Err(Error::InvalidInput("1D kernel has no second axis".into()));
        }
        for &d in &deriv {
            if d > max {
                return Err(Error::DerivativeOrder { family: self.family.name(), order: d, max });
            }
        }
        if total > MAX_TOTAL_DERIVATIVE {
            return Err(Error::DerivativeOrder {
                family: self.family.name(),
                order: total,
                max: MAX_TOTAL_DERIVATIVE,
            });
        }
        Ok(())
    }

    /// Index of the piece holding normalised offset `t`, if inside the
    /// open support. Ties at interior breakpoints go to the right piece.
    #[inline]
    pub fn piece_index(&self, t: T) -> Option<usize> {
        let half = lit::<T>(0.5);
        if t <= -half || t >= half {
            return None;
        }
        self.pieces.iter().position(|p| t >= p.lo && t < p.hi)
    }

    /// Unchecked 1D k-th derivative at physical offset `x` inside piece `piece`.
    #[inline]
    pub fn eval_piece(&self, piece: usize, k: usize, x: T) -> T {
        self.pieces[piece].eval(k, x * self.inv_pow[0]) * self.inv_pow[k]
    }

    /// 1D k-th derivative at offset `x`; zero outside the support.
    pub fn eval_1d(&self, x: T, k: usize) -> Result<T> {
        let max = self.family.max_derivative();
        if k > max {
            return Err(Error::DerivativeOrder { family: self.family.name(), order: k, max });
        }
        let t = x / self.width;
        Ok(match self.piece_index(t) {
            Some(i) => self.eval_piece(i, k, x),
            None => T::zero(),
        })
    }

    /// Kernel derivative `d^|deriv| m / dx^deriv` at `offset`.
    pub fn eval(&self, offset: Point<T>, deriv: [usize; 2]) -> Result<T> {
        self.check_derivative(deriv)?;
        let mut v = self.eval_1d(offset[0], deriv[0])?;
        if self.dim == 2 {
            v *= self.eval_1d(offset[1], deriv[1])?;
        }
        Ok(v)
    }

    /// `∫ s^k m(s) ds` of the 1D profile, by a Gauss rule exact for the integrand.
    pub fn moment(&self, k: usize) -> T {
        let n = (self.family.degree() + k + 2) / 2;
        let (x, w) = gauss_legendre::<T>(n);
        let half = lit::<T>(0.5);
        let mut acc = T::zero();
        for (pi, p) in self.pieces.iter().enumerate() {
            let a = p.lo * self.width;
            let b = p.hi * self.width;
            let hl = (b - a) * half;
            let mid = (a + b) * half;
            for (xi, wi) in x.iter().zip(&w) {
                let s = mid + hl * *xi;
                acc += *wi * hl * s.powi(k as i32) * self.eval_piece(pi, 0, s);
            }
        }
        acc
    }
}
