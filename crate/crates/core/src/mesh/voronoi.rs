use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{area_centroid, clip_by_halfplane, ConvexPolytope};
use crate::scalar::{lit, Point, Real};

pub(crate) fn check_seeds<T: Real>(seeds: &[Point<T>], min: Point<T>, max: Point<T>) -> Result<()> {
    if seeds.len() < 2 {
        return Err(Error::InvalidInput("Voronoi diagram needs at least two seeds".into()));
    }
    let tol = (max[0] - min[0]).max(max[1] - min[1]) * lit(1e-12);
    for s in seeds {
        if s[0] < min[0] || s[0] > max[0] || s[1] < min[1] || s[1] > max[1] {
            return Err(Error::InvalidInput("Voronoi seed outside the bounding box".into()));
        }
    }
    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| seeds[a][0].partial_cmp(&seeds[b][0]).unwrap());
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if seeds[j][0] - seeds[i][0] > tol {
                break;
            }
            if (seeds[j][1] - seeds[i][1]).abs() <= tol {
                return Err(Error::DuplicateSeeds(
                    seeds[i][0].to_f64().unwrap_or(f64::NAN),
                    seeds[i][1].to_f64().unwrap_or(f64::NAN),
                ));
            }
        }
    }
    Ok(())
}

/// Cells of `targets` within the box, each obtained by clipping the box with
/// the bisector half-planes against the other seeds, nearest first.
pub(crate) fn cells<T: Real>(
    seeds: &[Point<T>],
    targets: impl Iterator<Item = usize>,
    min: Point<T>,
    max: Point<T>,
) -> Vec<ConvexPolytope<T>> {
    let bx = ConvexPolytope::Polygon(vec![min, [max[0], min[1]], max, [min[0], max[1]]]);
    let mut order: Vec<(T, usize)> = Vec::with_capacity(seeds.len());
    targets
        .map(|i| {
            let s = seeds[i];
            order.clear();
            order.extend(
                seeds
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, q)| ((q[0] - s[0]).powi(2) + (q[1] - s[1]).powi(2), j)),
            );
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut cell = bx.clone();
            for &(d2, j) in order.iter() {
                // Seeds beyond twice the cell radius cannot cut the cell.
                let r2 = match &cell {
                    ConvexPolytope::Polygon(v) => v
                        .iter()
                        .map(|p| (p[0] - s[0]).powi(2) + (p[1] - s[1]).powi(2))
                        .fold(T::zero(), |a, b| a.max(b)),
                    _ => break,
                };
                if d2 > lit::<T>(4.0) * r2 {
                    break;
                }
                let q = seeds[j];
                let normal = [q[0] - s[0], q[1] - s[1]];
                let mid = [(q[0] + s[0]) * lit(0.5), (q[1] + s[1]) * lit(0.5)];
                cell = clip_by_halfplane(&cell, normal, normal[0] * mid[0] + normal[1] * mid[1]);
            }
            cell
        })
        .collect()
}

/// Ghost cells from the seeds mirrored across the four edges and corners of
/// the box, tessellating the box enlarged by `h_m` on every side.
pub(crate) fn reflected_ghosts<T: Real>(seeds: &[Point<T>], min: Point<T>, max: Point<T>, h_m: T) -> Vec<ConvexPolytope<T>> {
    let two = lit::<T>(2.0);
    let tol = (max[0] - min[0]).max(max[1] - min[1]) * lit(1e-10);
    let mut all: Vec<Point<T>> = seeds.to_vec();
    let n = seeds.len();
    let mirror_x = [None, Some(min[0]), Some(max[0])];
    let mirror_y = [None, Some(min[1]), Some(max[1])];
    for mx in mirror_x {
        for my in mirror_y {
            if mx.is_none() && my.is_none() {
                continue;
            }
            for s in seeds {
                let p = [mx.map_or(s[0], |m| two * m - s[0]), my.map_or(s[1], |m| two * m - s[1])];
                // Seeds on the boundary mirror onto themselves or an existing image.
                if all.iter().any(|q| (q[0] - p[0]).abs() <= tol && (q[1] - p[1]).abs() <= tol) {
                    continue;
                }
                all.push(p);
            }
        }
    }
    let emin = [min[0] - h_m, min[1] - h_m];
    let emax = [max[0] + h_m, max[1] + h_m];
    cells(&all, n..all.len(), emin, emax)
}

/// Pseudo-random seeds in the box relaxed by Lloyd iterations.
pub fn lloyd_seeds<T: Real>(n: usize, rng_seed: u64, iterations: usize, min: Point<T>, max: Point<T>) -> Result<Vec<Point<T>>> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least two seeds".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seeds: Vec<Point<T>> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            [min[0] + (max[0] - min[0]) * lit(u), min[1] + (max[1] - min[1]) * lit(v)]
        })
        .collect();
    for _ in 0..iterations {
        let cs = cells(&seeds, 0..n, min, max);
        for (s, c) in seeds.iter_mut().zip(&cs) {
            if !c.is_empty() {
                *s = area_centroid(c).1;
            }
        }
    }
    check_seeds(&seeds, min, max)?;
    Ok(seeds)
}
