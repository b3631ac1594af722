//! Convex geometry kernel: intervals and convex polygons, clipping against
//! axis-aligned boxes, Minkowski sums with boxes, hulls, fan triangulation.
//!
//! One-dimensional cells are intervals and go through the same entry
//! points as polygons so that the basis code does not branch on dimension.

mod quadrature;

pub use quadrature::{gauss_legendre, gauss_rule, Element, QuadratureRule, TriangleRule, MAX_DEGREE};

use crate::error::{Error, Result};
use crate::scalar::{lit, Point, Real};

/// Relative tolerance used for vertex deduplication and sliver rejection.
pub const EPS_GEOM: f64 = 1e-12;

/// A convex cell or support region.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexPolytope<T> {
    /// Result of an intersection with no overlap (or only a sliver).
    Empty,
    /// Closed interval `[lo, hi]` with `lo < hi`.
    Interval { lo: T, hi: T },
    /// Convex polygon, vertices counter-clockwise without repetition.
    Polygon(Vec<Point<T>>),
}

/// Axis-aligned square support of a mollifier, `center ± halfwidth`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisBox<T> {
    pub center: Point<T>,
    pub halfwidth: [T; 2],
}

impl<T: Real> AxisBox<T> {
    pub fn new(center: Point<T>, halfwidth: [T; 2]) -> Result<Self> {
        if !(halfwidth[0] > T::zero() && halfwidth[1] >= T::zero()) {
            return Err(Error::InvalidInput("box halfwidth must be positive".into()));
        }
        Ok(AxisBox { center, halfwidth })
    }

    /// Square box with the same halfwidth on both axes.
    pub fn square(center: Point<T>, halfwidth: T) -> Result<Self> {
        Self::new(center, [halfwidth, halfwidth])
    }

    pub fn min(&self) -> Point<T> {
        [self.center[0] - self.halfwidth[0], self.center[1] - self.halfwidth[1]]
    }

    pub fn max(&self) -> Point<T> {
        [self.center[0] + self.halfwidth[0], self.center[1] + self.halfwidth[1]]
    }

    pub fn area(&self) -> T {
        lit::<T>(4.0) * self.halfwidth[0] * self.halfwidth[1]
    }
}

#[inline]
pub(crate) fn cross<T: Real>(o: Point<T>, a: Point<T>, b: Point<T>) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn shoelace<T: Real>(v: &[Point<T>]) -> T {
    let n = v.len();
    let mut s = T::zero();
    for i in 0..n {
        let p = v[i];
        let q = v[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    s * lit(0.5)
}

fn bbox_of<T: Real>(v: &[Point<T>]) -> (Point<T>, Point<T>) {
    let mut lo = [T::infinity(); 2];
    let mut hi = [T::neg_infinity(); 2];
    for p in v {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn char_length<T: Real>(v: &[Point<T>]) -> T {
    let (lo, hi) = bbox_of(v);
    (hi[0] - lo[0]).max(hi[1] - lo[1])
}

/// Drops consecutive vertices closer than `eps` (including the wrap-around).
fn dedup_loop<T: Real>(v: &mut Vec<Point<T>>, eps: T) {
    if v.len() < 2 {
        return;
    }
    let mut out: Vec<Point<T>> = Vec::with_capacity(v.len());
    for &p in v.iter() {
        if let Some(q) = out.last() {
            if (p[0] - q[0]).abs() <= eps && (p[1] - q[1]).abs() <= eps {
                continue;
            }
        }
        out.push(p);
    }
    while out.len() > 1 {
        let f = out[0];
        let l = out[out.len() - 1];
        if (f[0] - l[0]).abs() <= eps && (f[1] - l[1]).abs() <= eps {
            out.pop();
        } else {
            break;
        }
    }
    *v = out;
}

impl<T: Real> ConvexPolytope<T> {
    /// Interval `[a, b]`; requires `a < b`.
    pub fn interval(a: T, b: T) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidInput(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(ConvexPolytope::Interval { lo: a, hi: b })
    }

    /// Axis-aligned rectangle as a CCW polygon.
    pub fn rect(min: Point<T>, max: Point<T>) -> Result<Self> {
        if !(min[0] < max[0] && min[1] < max[1]) {
            return Err(Error::InvalidInput("rectangle needs min < max".into()));
        }
        Ok(ConvexPolytope::Polygon(vec![
            min,
            [max[0], min[1]],
            max,
            [min[0], max[1]],
        ]))
    }

    /// Validated convex polygon. Accepts either orientation and stores CCW.
    pub fn polygon(vertices: Vec<Point<T>>) -> Result<Self> {
        let mut v = vertices;
        if v.len() < 3 {
            return Err(Error::InvalidInput("polygon needs at least 3 vertices".into()));
        }
        let scale = char_length(&v);
        let eps = scale * lit(EPS_GEOM);
        dedup_loop(&mut v, eps);
        if v.len() < 3 {
            return Err(Error::InvalidInput("polygon collapses after deduplication".into()));
        }
        let area = shoelace(&v);
        if area.abs() <= eps * eps {
            return Err(Error::InvalidInput("polygon has zero area".into()));
        }
        if area < T::zero() {
            v.reverse();
        }
        let n = v.len();
        let tol = -eps * scale;
        for i in 0..n {
            if cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) < tol {
                return Err(Error::InvalidInput("polygon is not convex".into()));
            }
        }
        Ok(ConvexPolytope::Polygon(v))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexPolytope::Empty)
    }

    /// 1 for intervals, 2 for polygons, 0 for the empty set.
    pub fn dim(&self) -> usize {
        match self {
            ConvexPolytope::Empty => 0,
            ConvexPolytope::Interval { .. } => 1,
            ConvexPolytope::Polygon(_) => 2,
        }
    }

    /// Vertex list (intervals report their endpoints with y = 0).
    pub fn vertices(&self) -> Vec<Point<T>> {
        match self {
            ConvexPolytope::Empty => Vec::new(),
            ConvexPolytope::Interval { lo, hi } => vec![[*lo, T::zero()], [*hi, T::zero()]],
            ConvexPolytope::Polygon(v) => v.clone(),
        }
    }

    /// Bounding box; for intervals the y extent is `[0, 0]`.
    pub fn bbox(&self) -> Option<(Point<T>, Point<T>)> {
        match self {
            ConvexPolytope::Empty => None,
            ConvexPolytope::Interval { lo, hi } => Some(([*lo, T::zero()], [*hi, T::zero()])),
            ConvexPolytope::Polygon(v) => Some(bbox_of(v)),
        }
    }

    /// Length (1D) or area (2D).
    pub fn measure(&self) -> T {
        area_centroid(self).0
    }

    /// Closed membership test with absolute tolerance `eps`.
    pub fn contains(&self, p: Point<T>, eps: T) -> bool {
        match self {
            ConvexPolytope::Empty => false,
            ConvexPolytope::Interval { lo, hi } => p[0] >= *lo - eps && p[0] <= *hi + eps,
            ConvexPolytope::Polygon(v) => {
                let n = v.len();
                (0..n).all(|i| {
                    let a = v[i];
                    let b = v[(i + 1) % n];
                    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                    cross(a, b, p) >= -eps * len
                })
            }
        }
    }
}

/// Measure and centroid (shoelace for polygons, length/midpoint for intervals).
pub fn area_centroid<T: Real>(poly: &ConvexPolytope<T>) -> (T, Point<T>) {
    match poly {
        ConvexPolytope::Empty => (T::zero(), [T::zero(); 2]),
        ConvexPolytope::Interval { lo, hi } => (*hi - *lo, [(*lo + *hi) * lit(0.5), T::zero()]),
        ConvexPolytope::Polygon(v) => {
            let n = v.len();
            // Shift to the first vertex to reduce cancellation.
            let o = v[0];
            let mut a2 = T::zero();
            let mut cx = T::zero();
            let mut cy = T::zero();
            for i in 0..n {
                let p = [v[i][0] - o[0], v[i][1] - o[1]];
                let q = [v[(i + 1) % n][0] - o[0], v[(i + 1) % n][1] - o[1]];
                let c = p[0] * q[1] - q[0] * p[1];
                a2 += c;
                cx += (p[0] + q[0]) * c;
                cy += (p[1] + q[1]) * c;
            }
            let area = a2 * lit(0.5);
            let k = lit::<T>(3.0) * a2;
            (area, [o[0] + cx / k, o[1] + cy / k])
        }
    }
}

/// Clips against the half-plane `sign * (p[axis] - value) >= 0`.
fn clip_halfplane<T: Real>(input: &[Point<T>], axis: usize, value: T, keep_greater: bool, out: &mut Vec<Point<T>>) {
    out.clear();
    let n = input.len();
    if n == 0 {
        return;
    }
    let inside = |p: &Point<T>| if keep_greater { p[axis] >= value } else { p[axis] <= value };
    let other = 1 - axis;
    for i in 0..n {
        let cur = input[i];
        let prev = input[(i + n - 1) % n];
        let cin = inside(&cur);
        let pin = inside(&prev);
        if cin != pin {
            let t = (value - prev[axis]) / (cur[axis] - prev[axis]);
            let mut x = [T::zero(); 2];
            x[axis] = value;
            x[other] = prev[other] + t * (cur[other] - prev[other]);
            out.push(x);
        }
        if cin {
            out.push(cur);
        }
    }
}

/// Intersection of a polygon with the half-plane `normal · x <= offset`.
pub fn clip_by_halfplane<T: Real>(poly: &ConvexPolytope<T>, normal: Point<T>, offset: T) -> ConvexPolytope<T> {
    let v = match poly {
        ConvexPolytope::Polygon(v) => v,
        ConvexPolytope::Interval { lo, hi } => {
            // Only the x component matters for intervals.
            if normal[0] == T::zero() {
                return if offset >= T::zero() { poly.clone() } else { ConvexPolytope::Empty };
            }
            let cut = offset / normal[0];
            let (a, b) = if normal[0] > T::zero() { (*lo, hi.min(cut)) } else { (lo.max(cut), *hi) };
            return if b - a > (*hi - *lo) * lit(EPS_GEOM) { ConvexPolytope::Interval { lo: a, hi: b } } else { ConvexPolytope::Empty };
        }
        ConvexPolytope::Empty => return ConvexPolytope::Empty,
    };
    let scale = char_length(v);
    let eps = scale * lit(EPS_GEOM);
    let side = |p: &Point<T>| normal[0] * p[0] + normal[1] * p[1] - offset;
    let n = v.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = v[i];
        let prev = v[(i + n - 1) % n];
        let sc = side(&cur);
        let sp = side(&prev);
        let cin = sc <= T::zero();
        let pin = sp <= T::zero();
        if cin != pin {
            let t = sp / (sp - sc);
            out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
        }
        if cin {
            out.push(cur);
        }
    }
    dedup_loop(&mut out, eps);
    if out.len() < 3 || shoelace(&out) <= eps * eps {
        ConvexPolytope::Empty
    } else {
        ConvexPolytope::Polygon(out)
    }
}

/// Intersection of a polytope with the closed rectangle `[min, max]`.
///
/// Slivers with measure below `EPS_GEOM^2 * L^2` (L the characteristic
/// length of the input) come back as [`ConvexPolytope::Empty`].
pub fn clip_to_rect<T: Real>(poly: &ConvexPolytope<T>, min: Point<T>, max: Point<T>) -> ConvexPolytope<T> {
    match poly {
        ConvexPolytope::Empty => ConvexPolytope::Empty,
        ConvexPolytope::Interval { lo, hi } => {
            let a = lo.max(min[0]);
            let b = hi.min(max[0]);
            let eps = (*hi - *lo) * lit(EPS_GEOM);
            if b - a <= eps {
                ConvexPolytope::Empty
            } else {
                ConvexPolytope::Interval { lo: a, hi: b }
            }
        }
        ConvexPolytope::Polygon(v) => {
            let scale = char_length(v);
            let eps = scale * lit(EPS_GEOM);
            let mut a: Vec<Point<T>> = v.clone();
            let mut b: Vec<Point<T>> = Vec::with_capacity(v.len() + 4);
            clip_halfplane(&a, 0, min[0], true, &mut b);
            clip_halfplane(&b, 0, max[0], false, &mut a);
            clip_halfplane(&a, 1, min[1], true, &mut b);
            clip_halfplane(&b, 1, max[1], false, &mut a);
            dedup_loop(&mut a, eps);
            if a.len() < 3 || shoelace(&a) <= eps * eps {
                ConvexPolytope::Empty
            } else {
                ConvexPolytope::Polygon(a)
            }
        }
    }
}

/// Intersection of a cell with a mollifier box: the integration domain of
/// one basis function evaluation.
pub fn clip_to_box<T: Real>(poly: &ConvexPolytope<T>, bx: &AxisBox<T>) -> ConvexPolytope<T> {
    clip_to_rect(poly, bx.min(), bx.max())
}

/// Minkowski sum with the box `[-halfwidth, halfwidth]`, computed as the
/// hull of every vertex shifted to every box corner.
pub fn minkowski_with_box<T: Real>(poly: &ConvexPolytope<T>, halfwidth: [T; 2]) -> Result<ConvexPolytope<T>> {
    match poly {
        ConvexPolytope::Empty => Ok(ConvexPolytope::Empty),
        ConvexPolytope::Interval { lo, hi } => ConvexPolytope::interval(*lo - halfwidth[0], *hi + halfwidth[0]),
        ConvexPolytope::Polygon(v) => {
            let mut cloud = Vec::with_capacity(4 * v.len());
            for p in v {
                for sx in [-T::one(), T::one()] {
                    for sy in [-T::one(), T::one()] {
                        cloud.push([p[0] + sx * halfwidth[0], p[1] + sy * halfwidth[1]]);
                    }
                }
            }
            convex_hull(&cloud)
        }
    }
}

/// Andrew's monotone chain; collinear points on the hull boundary are dropped.
pub fn convex_hull<T: Real>(points: &[Point<T>]) -> Result<ConvexPolytope<T>> {
    if points.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let mut pts: Vec<Point<T>> = points.to_vec();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(std::cmp::Ordering::Equal))
    });
    let scale = char_length(&pts);
    if !(scale > T::zero()) {
        return Err(Error::DegenerateHull);
    }
    let eps = scale * scale * lit(EPS_GEOM);
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= scale * lit(EPS_GEOM) && (a[1] - b[1]).abs() <= scale * lit(EPS_GEOM));

    // Exact orientation tests keep the chain consistent; near-collinear
    // vertices are removed afterwards.
    let mut hull: Vec<Point<T>> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    let mut changed = true;
    while changed && hull.len() >= 3 {
        changed = false;
        let n = hull.len();
        for i in 0..n {
            let a = hull[(i + n - 1) % n];
            let b = hull[i];
            let c = hull[(i + 1) % n];
            if cross(a, b, c) <= eps {
                hull.remove(i);
                changed = true;
                break;
            }
        }
    }
    if hull.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(ConvexPolytope::Polygon(hull))
}

/// Splits a polygon into triangles joining each edge to the centroid.
/// Triangles are CCW. Returns an empty list for non-polygons.
pub fn fan_triangulate<T: Real>(poly: &ConvexPolytope<T>) -> Vec<[Point<T>; 3]> {
    let mut out = Vec::new();
    fan_triangulate_into(poly, &mut out);
    out
}

pub(crate) fn fan_triangulate_into<T: Real>(poly: &ConvexPolytope<T>, out: &mut Vec<[Point<T>; 3]>) {
    out.clear();
    if let ConvexPolytope::Polygon(v) = poly {
        let (_, c) = area_centroid(poly);
        let n = v.len();
        for i in 0..n {
            out.push([c, v[i], v[(i + 1) % n]]);
        }
    }
}

/// Signed area of a triangle.
pub fn triangle_area<T: Real>(t: &[Point<T>; 3]) -> T {
    cross(t[0], t[1], t[2]) * lit(0.5)
}
