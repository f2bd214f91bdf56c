use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point of the plane, identified with a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub re: f64,
    pub im: f64,
}

impl PlanarPoint {
    pub const ZERO: PlanarPoint = PlanarPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn dist(&self, other: PlanarPoint) -> f64 {
        (*self - other).norm()
    }

    pub fn dot(&self, other: PlanarPoint) -> f64 {
        self.re * other.re + self.im * other.im
    }

    /// z-component of the cross product, i.e. the signed parallelogram area.
    pub fn cross(&self, other: PlanarPoint) -> f64 {
        self.re * other.im - self.im * other.re
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn scale(&self, s: f64) -> PlanarPoint {
        PlanarPoint::new(self.re * s, self.im * s)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl Add for PlanarPoint {
    type Output = PlanarPoint;
    fn add(self, rhs: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for PlanarPoint {
    type Output = PlanarPoint;
    fn sub(self, rhs: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul<f64> for PlanarPoint {
    type Output = PlanarPoint;
    fn mul(self, rhs: f64) -> PlanarPoint {
        self.scale(rhs)
    }
}

impl Neg for PlanarPoint {
    type Output = PlanarPoint;
    fn neg(self) -> PlanarPoint {
        PlanarPoint::new(-self.re, -self.im)
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Smallest `t` in `(eps, 1]` with `|p + t d - c| = radius`, if any.
pub fn circle_crossing(
    p: PlanarPoint,
    d: PlanarPoint,
    c: PlanarPoint,
    radius: f64,
) -> Option<f64> {
    let q = p - c;
    let a = d.norm_sq();
    if a == 0.0 {
        return None;
    }
    let b = 2.0 * q.dot(d);
    let c0 = q.norm_sq() - radius * radius;
    let disc = b * b - 4.0 * a * c0;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut best: Option<f64> = None;
    for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
        if t > 1e-12 && t <= 1.0 && best.map_or(true, |b0| t < b0) {
            best = Some(t);
        }
    }
    best
}

/// Crossing parameter `t` in `(eps, 1]` of the link `[p, p + d]` with the
/// segment `[a, b]`, if any. Parallel links never cross (grid links are kept
/// off collinear positions by the cell-centered layout).
pub fn segment_crossing(
    p: PlanarPoint,
    d: PlanarPoint,
    a: PlanarPoint,
    b: PlanarPoint,
) -> Option<f64> {
    let r = d;
    let s = b - a;
    let denom = r.cross(s);
    if denom.abs() < 1e-300 {
        return None;
    }
    let qp = a - p;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if t > 1e-12 && t <= 1.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_perpendicular_foot() {
        let d = point_segment_distance(
            PlanarPoint::new(0.5, 0.3),
            PlanarPoint::ZERO,
            PlanarPoint::new(1.0, 0.0),
        );
        assert!((d - 0.3).abs() < 1e-15);
    }

    #[test]
    fn segment_distance_endpoint() {
        let d = point_segment_distance(
            PlanarPoint::new(-0.4, 0.3),
            PlanarPoint::ZERO,
            PlanarPoint::new(1.0, 0.0),
        );
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn circle_crossing_hits_first_root() {
        let t = circle_crossing(
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(2.0, 0.0),
            PlanarPoint::ZERO,
            1.0,
        )
        .unwrap();
        assert!((t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn segment_crossing_basic() {
        let t = segment_crossing(
            PlanarPoint::new(0.0, -0.5),
            PlanarPoint::new(0.0, 1.0),
            PlanarPoint::new(-1.0, 0.0),
            PlanarPoint::new(1.0, 0.0),
        )
        .unwrap();
        assert!((t - 0.5).abs() < 1e-14);
    }
}
