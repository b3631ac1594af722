//! Interior and boundary collocation points.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{fan_triangulate, gauss_legendre, ConvexPolytope, TriangleRule};
use crate::mesh::{Domain, Mesh, SignedDistance};
use crate::scalar::{from_usize, lit, to_f64, Point, Real};

/// Interior points with `φ(z) <= PHI_MIN` are discarded.
pub const PHI_MIN: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Uniform,
    Gauss,
    QuasiRandom,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Uniform => "uniform",
            Scheme::Gauss => "gauss",
            Scheme::QuasiRandom => "quasirandom",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(Scheme::Uniform),
            "gauss" => Ok(Scheme::Gauss),
            "quasirandom" | "quasi-random" => Ok(Scheme::QuasiRandom),
            other => Err(Error::Config(format!("unknown collocation scheme {other:?}"))),
        }
    }
}

/// What is imposed at a boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    /// Field value only.
    Value,
    /// Field value and normal derivative (clamped plates, 1D biharmonic).
    ValueAndSlope,
}

impl BcKind {
    pub fn rows_per_point(self) -> usize {
        match self {
            BcKind::Value => 1,
            BcKind::ValueAndSlope => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BcKind::Value => "value",
            BcKind::ValueAndSlope => "value+slope",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint<T> {
    pub x: Point<T>,
    /// Outward unit normal of Ω.
    pub normal: Point<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollocationSet<T> {
    pub interior: Vec<Point<T>>,
    pub boundary: Vec<BoundaryPoint<T>>,
    pub bc: BcKind,
}

impl<T: Real> CollocationSet<T> {
    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    /// `n_z = n_z^I + n_z^B`.
    pub fn n_z(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    /// CSV with header `x,y,kind,tag`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,kind,tag")?;
        for p in &self.interior {
            writeln!(w, "{},{},interior,pde", to_f64(p[0]), to_f64(p[1]))?;
        }
        for b in &self.boundary {
            writeln!(w, "{},{},boundary,{}", to_f64(b.x[0]), to_f64(b.x[1]), self.bc.name())?;
        }
        Ok(())
    }
}

/// Parameters of a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct CollocationConfig {
    pub scheme: Scheme,
    /// Interior points per cell for the uniform and quasi-random schemes (and
    /// Gauss points per 1D cell when `gamma` is unset).
    pub beta: usize,
    /// Gauss order; `None` picks the smallest one giving `n_z >= n_b`.
    pub gamma: Option<usize>,
    /// Gauss points per boundary segment; `None` uses the interior order.
    pub gamma_boundary: Option<usize>,
    /// Perturbation amplitude as a fraction of the point spacing.
    pub sigma_fraction: f64,
    pub rng_seed: u64,
    /// Replicate index; selects an independent random stream.
    pub replicate: u64,
}

impl Default for CollocationConfig {
    fn default() -> Self {
        CollocationConfig {
            scheme: Scheme::Uniform,
            beta: 6,
            gamma: None,
            gamma_boundary: None,
            sigma_fraction: 0.1,
            rng_seed: 0,
            replicate: 0,
        }
    }
}

/// Equidistant interior points: spacing `1/(n+1)` in 1D, a tensor grid of
/// `⌈√n⌉` points per axis in 2D.
pub fn uniform_points<T: Real>(domain: &Domain<T>, n_interior: usize) -> Result<Vec<Point<T>>> {
    if !domain.is_tensor_product() {
        return Err(Error::NonTensorDomain);
    }
    let (min, max) = domain.bbox();
    let line = |a: T, b: T, n: usize| -> Vec<T> {
        let d = (b - a) / from_usize::<T>(n + 1);
        (1..=n).map(|k| a + d * from_usize::<T>(k)).collect()
    };
    Ok(match domain.dim() {
        1 => line(min[0], max[0], n_interior).into_iter().map(|x| [x, T::zero()]).collect(),
        _ => {
            let m = axis_count(n_interior);
            let xs = line(min[0], max[0], m);
            let ys = line(min[1], max[1], m);
            ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect()
        }
    })
}

fn axis_count(n: usize) -> usize {
    let mut m = (n as f64).sqrt().ceil() as usize;
    while m * m < n {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m
}

/// Uniform points with iid per-axis perturbations `U(-σ, σ)`, where `σ` is
/// `sigma_fraction` times the spacing. `sigma_fraction = 0` reproduces
/// [`uniform_points`] exactly without drawing random numbers.
pub fn quasirandom_points<T: Real>(
    domain: &Domain<T>,
    n_interior: usize,
    sigma_fraction: f64,
    rng_seed: u64,
    replicate: u64,
) -> Result<Vec<Point<T>>> {
    if !(0.0..0.5).contains(&sigma_fraction) {
        return Err(Error::Config(format!("sigma fraction must lie in [0, 0.5), got {sigma_fraction}")));
    }
    let mut pts = uniform_points(domain, n_interior)?;
    if sigma_fraction == 0.0 {
        return Ok(pts);
    }
    let (min, max) = domain.bbox();
    let per_axis = if domain.dim() == 1 { n_interior } else { axis_count(n_interior) };
    let spacing = [
        to_f64(max[0] - min[0]) / (per_axis + 1) as f64,
        to_f64(max[1] - min[1]) / (per_axis + 1) as f64,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(replicate);
    for p in pts.iter_mut() {
        for k in 0..domain.dim() {
            let s = sigma_fraction * spacing[k];
            let e: f64 = rng.random_range(-s..=s);
            p[k] += lit::<T>(e);
        }
    }
    Ok(pts)
}

/// Gauss points of order `gamma` in every non-ghost cell. Axis-aligned
/// rectangles use a `gamma × gamma` tensor rule, 1D cells `gamma` points,
/// other polygons a degree-`gamma` rule on each centroid-fan triangle.
/// Points with `φ <= PHI_MIN` are dropped.
pub fn gauss_points<T: Real>(mesh: &Mesh<T>, gamma: usize) -> Result<Vec<Point<T>>> {
    if gamma == 0 {
        return Err(Error::InvalidInput("Gauss order must be positive".into()));
    }
    let (gx, _) = gauss_legendre::<T>(gamma);
    let tri = TriangleRule::<T>::new(gamma);
    let half = lit::<T>(0.5);
    let mut out = Vec::new();
    for (i, cell) in mesh.cells().iter().enumerate() {
        if mesh.is_ghost(i) {
            continue;
        }
        match cell {
            ConvexPolytope::Interval { lo, hi } => {
                for &u in &gx {
                    out.push([(*lo + *hi) * half + (*hi - *lo) * half * u, T::zero()]);
                }
            }
            ConvexPolytope::Polygon(v) => {
                if let Some((lo, hi)) = axis_rect(v) {
                    for &u in &gx {
                        for &w in &gx {
                            out.push([
                                (lo[0] + hi[0]) * half + (hi[0] - lo[0]) * half * w,
                                (lo[1] + hi[1]) * half + (hi[1] - lo[1]) * half * u,
                            ]);
                        }
                    }
                } else {
                    for t in fan_triangulate(cell) {
                        out.extend(tri.map(&t).points);
                    }
                }
            }
            ConvexPolytope::Empty => {}
        }
    }
    Ok(filter_inside(mesh.domain(), out))
}

/// Keeps points with `φ(z) > PHI_MIN`.
pub fn filter_inside<T: Real>(domain: &Domain<T>, pts: Vec<Point<T>>) -> Vec<Point<T>> {
    let tol = lit::<T>(PHI_MIN);
    pts.into_iter().filter(|p| domain.signed_distance(*p) > tol).collect()
}

fn axis_rect<T: Real>(v: &[Point<T>]) -> Option<(Point<T>, Point<T>)> {
    if v.len() != 4 {
        return None;
    }
    let axis = (0..4).all(|i| {
        let p = v[i];
        let q = v[(i + 1) % 4];
        p[0] == q[0] || p[1] == q[1]
    });
    if !axis {
        return None;
    }
    let lo = [v.iter().map(|p| p[0]).fold(T::infinity(), T::min), v.iter().map(|p| p[1]).fold(T::infinity(), T::min)];
    let hi = [v.iter().map(|p| p[0]).fold(T::neg_infinity(), T::max), v.iter().map(|p| p[1]).fold(T::neg_infinity(), T::max)];
    Some((lo, hi))
}

/// Equally spaced boundary points on a tensor domain: the two end points
/// in 1D; in 2D `per_edge` points strictly inside each edge plus both
/// corners, each corner repeated once per incident edge.
pub fn uniform_boundary<T: Real>(domain: &Domain<T>, per_edge: usize) -> Result<Vec<BoundaryPoint<T>>> {
    let (min, max) = domain.bbox();
    match domain {
        Domain::Interval { a, b } => Ok(vec![
            BoundaryPoint { x: [*a, T::zero()], normal: [-T::one(), T::zero()] },
            BoundaryPoint { x: [*b, T::zero()], normal: [T::one(), T::zero()] },
        ]),
        Domain::Rect { .. } => {
            let mut out = Vec::with_capacity(4 * (per_edge + 2));
            for (a, b, n) in rect_edges(min, max) {
                let d = T::one() / from_usize::<T>(per_edge + 1);
                for k in 0..=per_edge + 1 {
                    let t = if k == per_edge + 1 { T::one() } else { d * from_usize(k) };
                    out.push(BoundaryPoint { x: lerp(a, b, t), normal: n });
                }
            }
            Ok(out)
        }
        Domain::RectMinusDisk { .. } => Err(Error::NonTensorDomain),
    }
}

/// Counter-clockwise box edges with outward normals.
fn rect_edges<T: Real>(min: Point<T>, max: Point<T>) -> [(Point<T>, Point<T>, Point<T>); 4] {
    let (o, l) = (T::zero(), T::one());
    [
        (min, [max[0], min[1]], [o, -l]),
        ([max[0], min[1]], max, [l, o]),
        (max, [min[0], max[1]], [o, l]),
        ([min[0], max[1]], min, [-l, o]),
    ]
}

fn lerp<T: Real>(a: Point<T>, b: Point<T>, t: T) -> Point<T> {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Gauss points (`n` per segment) on every boundary segment of the mesh:
/// cell edges lying on the box boundary outside any hole, and for a hole,
/// the arc inside the box split into `arc_segments` equal angular pieces.
pub fn gauss_boundary<T: Real>(mesh: &Mesh<T>, n: usize, arc_segments: usize) -> Result<Vec<BoundaryPoint<T>>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one boundary point per segment".into()));
    }
    let domain = mesh.domain();
    let (min, max) = domain.bbox();
    let (gx, _) = gauss_legendre::<T>(n);
    let half = lit::<T>(0.5);
    let mut out = Vec::new();
    if let Domain::Interval { .. } = domain {
        return uniform_boundary(domain, 0);
    }
    let scale = (max[0] - min[0]).max(max[1] - min[1]);
    let tol = scale * lit(1e-12);
    let on = |p: T, q: T| (p - q).abs() <= tol;
    for (i, cell) in mesh.cells().iter().enumerate() {
        if mesh.is_ghost(i) {
            continue;
        }
        let v = match cell {
            ConvexPolytope::Polygon(v) => v,
            _ => continue,
        };
        for k in 0..v.len() {
            let a = v[k];
            let b = v[(k + 1) % v.len()];
            let normal = if on(a[1], min[1]) && on(b[1], min[1]) {
                [T::zero(), -T::one()]
            } else if on(a[0], max[0]) && on(b[0], max[0]) {
                [T::one(), T::zero()]
            } else if on(a[1], max[1]) && on(b[1], max[1]) {
                [T::zero(), T::one()]
            } else if on(a[0], min[0]) && on(b[0], min[0]) {
                [-T::one(), T::zero()]
            } else {
                continue;
            };
            let mid = lerp(a, b, half);
            if let Domain::RectMinusDisk { center, radius, .. } = domain {
                let r = ((mid[0] - center[0]).powi(2) + (mid[1] - center[1]).powi(2)).sqrt();
                if r <= *radius {
                    continue;
                }
            }
            for &u in &gx {
                out.push(BoundaryPoint { x: lerp(a, b, (u + T::one()) * half), normal });
            }
        }
    }
    if let Domain::RectMinusDisk { center, radius, .. } = *domain {
        let (t0, t1) = arc_range(center, radius, min, max)?;
        let segs = arc_segments.max(1);
        let dt = (t1 - t0) / from_usize(segs);
        for s in 0..segs {
            let a = t0 + dt * from_usize(s);
            for &u in &gx {
                let th = a + dt * (u + T::one()) * half;
                let (sn, cs) = th.sin_cos();
                out.push(BoundaryPoint { x: [center[0] + radius * cs, center[1] + radius * sn], normal: [-cs, -sn] });
            }
        }
    }
    Ok(out)
}

/// Angular range of the hole arc inside the box; only a hole centred on a
/// box corner (the quarter plate) is supported.
fn arc_range<T: Real>(center: Point<T>, radius: T, min: Point<T>, max: Point<T>) -> Result<(T, T)> {
    let at = |a: T, b: T| a == b;
    let quarter = T::FRAC_PI_2();
    let r = if at(center[0], min[0]) && at(center[1], min[1]) {
        (T::zero(), quarter)
    } else if at(center[0], max[0]) && at(center[1], min[1]) {
        (quarter, T::PI())
    } else if at(center[0], max[0]) && at(center[1], max[1]) {
        (T::PI(), T::PI() + quarter)
    } else if at(center[0], min[0]) && at(center[1], max[1]) {
        (T::PI() + quarter, T::TAU())
    } else {
        return Err(Error::InvalidInput("hole must be centred on a box corner".into()));
    };
    if radius >= (max[0] - min[0]).min(max[1] - min[1]) {
        return Err(Error::InvalidInput("hole radius exceeds the box".into()));
    }
    Ok(r)
}

/// Generates the full point set for a mesh with `n_b` basis functions.
pub fn generate<T: Real>(mesh: &Mesh<T>, n_b: usize, cfg: &CollocationConfig, bc: BcKind) -> Result<CollocationSet<T>> {
    let domain = mesh.domain();
    let n_c = mesh.n_interior();
    let set = match cfg.scheme {
        Scheme::Uniform | Scheme::QuasiRandom => {
            // In 1D the β·n_c + 2 points sit at spacing 1/(β·n_c + 3); the
            // boundary points are added on top.
            let n_int = if domain.dim() == 1 { cfg.beta * n_c + 2 } else { cfg.beta * n_c };
            let sigma = if cfg.scheme == Scheme::Uniform { 0.0 } else { cfg.sigma_fraction };
            let interior = quasirandom_points(domain, n_int, sigma, cfg.rng_seed, cfg.replicate)?;
            let per_edge = if domain.dim() == 1 { 0 } else { axis_count(n_int) };
            let boundary = uniform_boundary(domain, per_edge)?;
            CollocationSet { interior, boundary, bc }
        }
        Scheme::Gauss => {
            let arc_segments = match mesh.kind() {
                crate::mesh::MeshKind::Grid { n } => n[0],
                _ => 1,
            };
            let build = |g: usize| -> Result<CollocationSet<T>> {
                let interior = gauss_points(mesh, g)?;
                let boundary = gauss_boundary(mesh, cfg.gamma_boundary.unwrap_or(g), arc_segments)?;
                Ok(CollocationSet { interior, boundary, bc })
            };
            match cfg.gamma {
                Some(g) => build(g)?,
                None if domain.dim() == 1 => build(cfg.beta)?,
                None => {
                    let mut found = None;
                    for g in 1..=20 {
                        let s = build(g)?;
                        if s.n_z() >= n_b {
                            found = Some(s);
                            break;
                        }
                    }
                    found.ok_or(Error::Underdetermined { rows: 0, cols: n_b })?
                }
            }
        }
    };
    if set.n_z() < n_b {
        return Err(Error::Underdetermined { rows: set.n_z(), cols: n_b });
    }
    Ok(set)
}
