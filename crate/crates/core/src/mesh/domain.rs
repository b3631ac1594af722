use crate::geometry::{clip_to_rect, ConvexPolytope};
use crate::scalar::{lit, Point, Real};

/// Implicit description of a domain: positive inside, negative outside.
pub trait SignedDistance<T> {
    fn signed_distance(&self, p: Point<T>) -> T;
}

/// The physical domain Ω.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain<T> {
    /// Open interval `(a, b)`.
    Interval { a: T, b: T },
    /// Axis-aligned rectangle.
    Rect { min: Point<T>, max: Point<T> },
    /// Rectangle with a circular hole removed.
    RectMinusDisk {
        min: Point<T>,
        max: Point<T>,
        center: Point<T>,
        radius: T,
    },
}

impl<T: Real> Domain<T> {
    pub fn unit_interval() -> Self {
        Domain::Interval { a: T::zero(), b: T::one() }
    }

    pub fn unit_square() -> Self {
        Domain::Rect { min: [T::zero(); 2], max: [T::one(); 2] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Bounding box; intervals have a zero y extent.
    pub fn bbox(&self) -> (Point<T>, Point<T>) {
        match *self {
            Domain::Interval { a, b } => ([a, T::zero()], [b, T::zero()]),
            Domain::Rect { min, max } | Domain::RectMinusDisk { min, max, .. } => (min, max),
        }
    }

    /// True for intervals and rectangles.
    pub fn is_tensor_product(&self) -> bool {
        !matches!(self, Domain::RectMinusDisk { .. })
    }

    /// Length or area of Ω, counting only the part of the hole inside the box.
    pub fn measure(&self) -> T {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Rect { min, max } => (max[0] - min[0]) * (max[1] - min[1]),
            Domain::RectMinusDisk { min, max, center, radius } => {
                let full = (max[0] - min[0]) * (max[1] - min[1]);
                full - disk_box_overlap(center, radius, min, max)
            }
        }
    }

    /// Whether `region` overlaps Ω in a set of positive measure.
    pub fn overlaps(&self, region: &ConvexPolytope<T>) -> bool {
        let (min, max) = self.bbox();
        let clipped = match region {
            ConvexPolytope::Interval { lo, hi } => {
                let lo = lo.max(min[0]);
                let hi = hi.min(max[0]);
                return hi - lo > (max[0] - min[0]) * lit(1e-12);
            }
            _ => clip_to_rect(region, min, max),
        };
        match (self, &clipped) {
            (_, ConvexPolytope::Empty) => false,
            (Domain::RectMinusDisk { center, radius, .. }, ConvexPolytope::Polygon(v)) => {
                // A convex region is inside the closed disk iff all its vertices are.
                let r2 = *radius * *radius * (T::one() + lit(1e-12));
                !v.iter().all(|p| {
                    let dx = p[0] - center[0];
                    let dy = p[1] - center[1];
                    dx * dx + dy * dy <= r2
                })
            }
            _ => true,
        }
    }
}

impl<T: Real> SignedDistance<T> for Domain<T> {
    fn signed_distance(&self, p: Point<T>) -> T {
        match *self {
            Domain::Interval { a, b } => (p[0] - a).min(b - p[0]),
            Domain::Rect { min, max } => rect_sd(p, min, max),
            Domain::RectMinusDisk { min, max, center, radius } => {
                let d = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt() - radius;
                rect_sd(p, min, max).min(d)
            }
        }
    }
}

fn rect_sd<T: Real>(p: Point<T>, min: Point<T>, max: Point<T>) -> T {
    let dx = (min[0] - p[0]).max(p[0] - max[0]);
    let dy = (min[1] - p[1]).max(p[1] - max[1]);
    if dx <= T::zero() && dy <= T::zero() {
        -(dx.max(dy))
    } else {
        -(dx.max(T::zero()).hypot(dy.max(T::zero())))
    }
}

/// Area of a disk intersected with a box, by fine polygonal clipping.
fn disk_box_overlap<T: Real>(center: Point<T>, radius: T, min: Point<T>, max: Point<T>) -> T {
    let n = 4096;
    let verts: Vec<Point<T>> = (0..n)
        .map(|k| {
            let th = T::TAU() * lit::<T>(k as f64) / lit::<T>(n as f64);
            [center[0] + radius * th.cos(), center[1] + radius * th.sin()]
        })
        .collect();
    // Inscribed polygon; correct its area to the exact disk area.
    let poly = ConvexPolytope::Polygon(verts);
    let scale = T::PI() / (lit::<T>(n as f64) * lit::<T>(0.5) * (T::TAU() / lit::<T>(n as f64)).sin());
    clip_to_rect(&poly, min, max).measure() * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_signed_distance() {
        let d = Domain::<f64>::unit_square();
        assert!((d.signed_distance([0.5, 0.5]) - 0.5).abs() < 1e-15);
        assert!((d.signed_distance([0.1, 0.7]) - 0.1).abs() < 1e-15);
        assert!((d.signed_distance([-0.3, 0.5]) + 0.3).abs() < 1e-15);
        assert!((d.signed_distance([2.0, 2.0]) + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hole_signed_distance() {
        let d = Domain::RectMinusDisk { min: [0.0f64, 0.0], max: [1.0, 1.0], center: [0.0, 0.0], radius: 0.25 };
        assert!(d.signed_distance([0.1, 0.1]) < 0.0);
        assert!((d.signed_distance([0.5, 0.0]) - 0.0).abs() < 1e-15);
        assert!((d.signed_distance([0.3, 0.4]) - 0.25).abs() < 1e-15);
        assert!(!d.is_tensor_product());
        let quarter = 1.0 - std::f64::consts::PI * 0.0625 / 4.0;
        assert!((d.measure() - quarter).abs() < 1e-12);
    }

    #[test]
    fn overlap_tests() {
        let d = Domain::RectMinusDisk { min: [0.0f64, 0.0], max: [1.0, 1.0], center: [0.0, 0.0], radius: 0.25 };
        let inside_hole = ConvexPolytope::rect([0.0, 0.0], [0.1, 0.1]).unwrap();
        let straddling = ConvexPolytope::rect([0.1, 0.1], [0.3, 0.3]).unwrap();
        let outside = ConvexPolytope::rect([1.0, 0.0], [1.2, 0.3]).unwrap();
        assert!(!d.overlaps(&inside_hole));
        assert!(d.overlaps(&straddling));
        assert!(!d.overlaps(&outside));
        let iv = Domain::<f64>::unit_interval();
        assert!(!iv.overlaps(&ConvexPolytope::Interval { lo: -0.5, hi: 0.0 }));
        assert!(iv.overlaps(&ConvexPolytope::Interval { lo: -0.5, hi: 0.01 }));
    }
}
