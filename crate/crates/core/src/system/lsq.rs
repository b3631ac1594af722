//! Sparse least squares by row-sequential Givens QR.
//!
//! Rows are merged one at a time into an upper triangular factor whose rows
//! are stored densely from the diagonal to the last filled column (a
//! variable band). With a bandwidth-reducing column order this keeps fill
//! bounded without forming `CᵀC`. A dense normal-equation solver is provided
//! as an independent check.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Rank tolerance relative to the largest diagonal entry of R.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LstsqSolution<T> {
    pub x: Vec<T>,
    /// `‖Cx - s‖₂`.
    pub residual_norm: T,
    /// Ratio of the largest to the smallest `|R_kk|`.
    pub condition: f64,
}

/// Incremental Givens QR of a tall sparse matrix.
pub struct GivensQr<T> {
    n: usize,
    r: Vec<Vec<T>>,
    z: Vec<T>,
    resid2: T,
    work: Vec<T>,
}

impl<T: Real> GivensQr<T> {
    pub fn new(n: usize) -> Self {
        GivensQr { n, r: vec![Vec::new(); n], z: vec![T::zero(); n], resid2: T::zero(), work: vec![T::zero(); n] }
    }

    /// Rotates one row (`cols` in factor ordering, ascending) into R.
    pub fn add_row(&mut self, cols: &[usize], vals: &[T], rhs: T) {
        debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
        let Some(&first) = cols.first() else {
            self.resid2 += rhs * rhs;
            return;
        };
        let w = &mut self.work;
        for (&c, &v) in cols.iter().zip(vals) {
            w[c] += v;
        }
        let mut hi = cols[cols.len() - 1] + 1;
        let mut b = rhs;
        let mut k = first;
        while k < hi {
            let a = w[k];
            if a == T::zero() {
                k += 1;
                continue;
            }
            let row = &mut self.r[k];
            if row.is_empty() {
                row.extend_from_slice(&w[k..hi]);
                w[k..hi].iter_mut().for_each(|x| *x = T::zero());
                self.z[k] = b;
                return;
            }
            if row.len() < hi - k {
                row.resize(hi - k, T::zero());
            }
            let len = row.len();
            let rho = row[0].hypot(a);
            let c = row[0] / rho;
            let s = a / rho;
            let wk = &mut w[k..k + len];
            for (rj, wj) in row.iter_mut().zip(wk.iter_mut()) {
                let r0 = *rj;
                let w0 = *wj;
                *rj = c * r0 + s * w0;
                *wj = c * w0 - s * r0;
            }
            wk[0] = T::zero();
            let zk = self.z[k];
            self.z[k] = c * zk + s * b;
            b = c * b - s * zk;
            hi = hi.max(k + len);
            k += 1;
        }
        self.resid2 += b * b;
    }

    /// Back substitution. Fails when R is numerically singular.
    pub fn solve(&self) -> Result<LstsqSolution<T>> {
        let mut dmax = T::zero();
        let mut dmin = T::infinity();
        for row in &self.r {
            let d = row.first().map_or(T::zero(), |v| v.abs());
            dmax = dmax.max(d);
            dmin = dmin.min(d);
        }
        let condition = if dmin > T::zero() { to_f64(dmax / dmin) } else { f64::INFINITY };
        if !(dmax > T::zero()) || dmin <= dmax * lit::<T>(RANK_TOL) {
            return Err(Error::RankDeficient { condition });
        }
        let mut x = vec![T::zero(); self.n];
        for k in (0..self.n).rev() {
            let row = &self.r[k];
            let mut acc = self.z[k];
            for (j, &v) in row.iter().enumerate().skip(1) {
                acc -= v * x[k + j];
            }
            x[k] = acc / row[0];
        }
        Ok(LstsqSolution { x, residual_norm: self.resid2.sqrt(), condition })
    }

    /// Stored entries of R.
    pub fn fill(&self) -> usize {
        self.r.iter().map(Vec::len).sum()
    }
}

/// Sparse row as `(columns, values)`.
pub type Row<T> = (Vec<usize>, Vec<T>);

/// Least squares `min ‖Cx - s‖` with rows of C given sparsely. `order[j]`
/// is the factor position of column `j`; rows are processed by increasing
/// leading position.
pub fn lstsq_qr<T: Real>(rows: &[Row<T>], rhs: &[T], n: usize, order: &[usize]) -> Result<LstsqSolution<T>> {
    if rows.len() < n {
        return Err(Error::Underdetermined { rows: rows.len(), cols: n });
    }
    assert_eq!(order.len(), n, "one position per column");
    let permuted: Vec<(usize, Vec<usize>, Vec<T>)> = rows
        .iter()
        .map(|(c, v)| {
            let mut pairs: Vec<(usize, T)> = c.iter().map(|&j| order[j]).zip(v.iter().copied()).collect();
            pairs.sort_by_key(|p| p.0);
            // Merge duplicate columns.
            let mut cols: Vec<usize> = Vec::with_capacity(pairs.len());
            let mut vals: Vec<T> = Vec::with_capacity(pairs.len());
            for (j, v) in pairs {
                if cols.last() == Some(&j) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                }
            }
            (cols.first().copied().unwrap_or(usize::MAX), cols, vals)
        })
        .collect();
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by_key(|&i| permuted[i].0);
    let mut qr = GivensQr::new(n);
    for i in idx {
        let (_, cols, vals) = &permuted[i];
        qr.add_row(cols, vals, rhs[i]);
    }
    let sol = qr.solve()?;
    let mut x = vec![T::zero(); n];
    for j in 0..n {
        x[j] = sol.x[order[j]];
    }
    Ok(LstsqSolution { x, ..sol })
}

/// Dense normal-equation solve `CᵀC x = Cᵀs` by Cholesky.
pub fn lstsq_normal<T: Real>(rows: &[Row<T>], rhs: &[T], n: usize) -> Result<LstsqSolution<T>> {
    let mut a = vec![T::zero(); n * n];
    let mut g = vec![T::zero(); n];
    for ((cols, vals), &s) in rows.iter().zip(rhs) {
        for (p, (&i, &vi)) in cols.iter().zip(vals).enumerate() {
            g[i] += vi * s;
            for (&j, &vj) in cols[p..].iter().zip(&vals[p..]) {
                a[i * n + j] += vi * vj;
                if i != j {
                    a[j * n + i] += vi * vj;
                }
            }
        }
    }
    let mut dmax = T::zero();
    let mut dmin = T::infinity();
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > T::zero()) {
            return Err(Error::RankDeficient { condition: f64::INFINITY });
        }
        let d = d.sqrt();
        dmax = dmax.max(d);
        dmin = dmin.min(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = v / d;
        }
    }
    let mut y = g;
    for i in 0..n {
        for k in 0..i {
            y[i] = y[i] - a[i * n + k] * y[k];
        }
        y[i] = y[i] / a[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] = y[i] - a[k * n + i] * y[k];
        }
        y[i] = y[i] / a[i * n + i];
    }
    let residual_norm = residual(rows, rhs, &y).iter().map(|r| *r * *r).sum::<T>().sqrt();
    let c = dmax / dmin;
    Ok(LstsqSolution { x: y, residual_norm, condition: to_f64(c * c) })
}

/// `Cx - s`.
pub fn residual<T: Real>(rows: &[Row<T>], rhs: &[T], x: &[T]) -> Vec<T> {
    rows.iter().zip(rhs).map(|((c, v), &s)| c.iter().zip(v).map(|(&j, &vj)| vj * x[j]).sum::<T>() - s).collect()
}

/// `Cᵀ r`.
pub fn transpose_times<T: Real>(rows: &[Row<T>], r: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    for ((c, v), &ri) in rows.iter().zip(r) {
        for (&j, &vj) in c.iter().zip(v) {
            out[j] += vj * ri;
        }
    }
    out
}
