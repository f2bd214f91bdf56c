use super::point::{circle_crossing, point_segment_distance, segment_crossing, PlanarPoint};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A closed interval `[2^log2_left, 2^log2_right]` on the positive real axis.
///
/// Endpoints are kept in log2 space so that doubly-exponentially shrinking
/// families (endpoints far below 2^-40) stay representable; capacity
/// computations renormalize in log space before ever exponentiating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogInterval {
    pub log2_left: f64,
    pub log2_right: f64,
}

impl LogInterval {
    pub fn from_linear(left: f64, right: f64) -> Result<Self> {
        if !(left > 0.0 && right > left && right.is_finite()) {
            return Err(Error::Geometry(format!(
                "interval must satisfy 0 < left < right, got [{left}, {right}]"
            )));
        }
        Ok(Self {
            log2_left: left.log2(),
            log2_right: right.log2(),
        })
    }

    pub fn from_log2(log2_left: f64, log2_right: f64) -> Result<Self> {
        if !(log2_left < log2_right) || !log2_left.is_finite() || !log2_right.is_finite() {
            return Err(Error::Geometry(format!(
                "log2 interval must satisfy left < right, got [{log2_left}, {log2_right}]"
            )));
        }
        Ok(Self {
            log2_left,
            log2_right,
        })
    }

    /// Linear endpoints; may underflow to 0 for extreme families, which is
    /// acceptable for grid-scale geometry (capacity work stays in log space).
    pub fn linear(&self) -> (f64, f64) {
        (self.log2_left.exp2(), self.log2_right.exp2())
    }

    pub fn length(&self) -> f64 {
        let (l, r) = self.linear();
        r - l
    }
}

/// A 1-D boundary curve used for discretization and boundary sampling.
#[derive(Debug, Clone, Copy)]
pub enum Curve {
    Circle { center: PlanarPoint, radius: f64 },
    Arc { center: PlanarPoint, radius: f64, theta0: f64, theta1: f64 },
    Seg { a: PlanarPoint, b: PlanarPoint },
}

impl Curve {
    pub fn length(&self) -> f64 {
        match *self {
            Curve::Circle { radius, .. } => TAU * radius,
            Curve::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0),
            Curve::Seg { a, b } => a.dist(b),
        }
    }

    /// `m` arclength-midpoint samples with their local spacing.
    pub fn sample(&self, m: usize) -> Vec<(PlanarPoint, f64)> {
        let len = self.length();
        let s = len / m as f64;
        (0..m)
            .map(|k| {
                let frac = (k as f64 + 0.5) / m as f64;
                let p = match *self {
                    Curve::Circle { center, radius } => {
                        let th = TAU * frac;
                        center + PlanarPoint::new(th.cos(), th.sin()) * radius
                    }
                    Curve::Arc { center, radius, theta0, theta1 } => {
                        let th = theta0 + (theta1 - theta0) * frac;
                        center + PlanarPoint::new(th.cos(), th.sin()) * radius
                    }
                    Curve::Seg { a, b } => a + (b - a) * frac,
                };
                (p, s)
            })
            .collect()
    }
}

/// Obstacle primitives removed from the ambient to form a domain; the same
/// variants describe compact sets (boundary traces, capacity targets).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObstaclePrimitive {
    /// Closed solid disk.
    Disk { center: PlanarPoint, radius: f64 },
    /// Closed segment.
    Segment { a: PlanarPoint, b: PlanarPoint },
    /// Disjoint closed intervals on the horizontal ray from `origin`.
    IntervalFamily {
        origin: PlanarPoint,
        intervals: Vec<LogInterval>,
    },
    /// Finite point set (polar).
    PointCloud { points: Vec<PlanarPoint> },
    /// Vertical teeth at `origin + lambda^k` of length `lambda^(gamma k)`,
    /// k = 1..=depth; engineered so the trace capacity at scale t is ~ t^gamma.
    CombTeeth {
        origin: PlanarPoint,
        lambda: f64,
        gamma: f64,
        depth: u32,
    },
    /// Circular arc (appears in clipped traces: ambient-complement arcs and
    /// clipped disk boundaries).
    Arc {
        center: PlanarPoint,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl ObstaclePrimitive {
    pub fn validate(&self) -> Result<()> {
        match self {
            ObstaclePrimitive::Disk { center, radius } => {
                if !center.is_finite() || !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::Geometry("disk needs finite center and radius > 0".into()));
                }
            }
            ObstaclePrimitive::Segment { a, b } => {
                if !a.is_finite() || !b.is_finite() || a.dist(*b) == 0.0 {
                    return Err(Error::Geometry("segment endpoints must be finite and distinct".into()));
                }
            }
            ObstaclePrimitive::IntervalFamily { origin, intervals } => {
                if !origin.is_finite() || intervals.is_empty() {
                    return Err(Error::Geometry("interval family needs finite origin and >= 1 interval".into()));
                }
                let mut sorted = intervals.clone();
                sorted.sort_by(|p, q| p.log2_left.total_cmp(&q.log2_left));
                for w in sorted.windows(2) {
                    if w[0].log2_right >= w[1].log2_left {
                        return Err(Error::Geometry("interval family must be pairwise disjoint".into()));
                    }
                }
                for iv in intervals {
                    if !(iv.log2_left < iv.log2_right) {
                        return Err(Error::Geometry("interval needs left < right".into()));
                    }
                }
            }
            ObstaclePrimitive::PointCloud { points } => {
                if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
                    return Err(Error::Geometry("point cloud must be nonempty and finite".into()));
                }
            }
            ObstaclePrimitive::CombTeeth { origin, lambda, gamma, depth } => {
                if !origin.is_finite() || !(*lambda > 0.0 && *lambda < 1.0) || !(*gamma >= 1.0) || *depth < 1 {
                    return Err(Error::Geometry(
                        "comb needs lambda in (0,1), gamma >= 1, depth >= 1".into(),
                    ));
                }
            }
            ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
                if !center.is_finite()
                    || !(*radius > 0.0)
                    || !(theta1 > theta0)
                    || theta1 - theta0 > TAU + 1e-9
                {
                    return Err(Error::Geometry("arc needs radius > 0 and theta0 < theta1 <= theta0 + 2pi".into()));
                }
            }
        }
        Ok(())
    }

    /// Distance from `z` to this primitive as a point set (solid for disks).
    pub fn distance(&self, z: PlanarPoint) -> f64 {
        match self {
            ObstaclePrimitive::Disk { center, radius } => (z.dist(*center) - radius).max(0.0),
            ObstaclePrimitive::Segment { a, b } => point_segment_distance(z, *a, *b),
            ObstaclePrimitive::IntervalFamily { origin, intervals } => intervals
                .iter()
                .map(|iv| {
                    let (l, r) = iv.linear();
                    point_segment_distance(
                        z,
                        *origin + PlanarPoint::new(l, 0.0),
                        *origin + PlanarPoint::new(r, 0.0),
                    )
                })
                .fold(f64::INFINITY, f64::min),
            ObstaclePrimitive::PointCloud { points } => points
                .iter()
                .map(|p| z.dist(*p))
                .fold(f64::INFINITY, f64::min),
            ObstaclePrimitive::CombTeeth { .. } => self
                .teeth()
                .into_iter()
                .map(|(a, b)| point_segment_distance(z, a, b))
                .fold(f64::INFINITY, f64::min),
            ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
                let v = z - *center;
                let th = normalise_into(v.arg(), *theta0);
                if th >= *theta0 && th <= *theta1 {
                    (v.norm() - radius).abs()
                } else {
                    let p0 = *center + PlanarPoint::new(theta0.cos(), theta0.sin()) * *radius;
                    let p1 = *center + PlanarPoint::new(theta1.cos(), theta1.sin()) * *radius;
                    z.dist(p0).min(z.dist(p1))
                }
            }
        }
    }

    /// Distance from `z` to the boundary of the primitive (differs from
    /// `distance` only for solid disks).
    pub fn boundary_distance(&self, z: PlanarPoint) -> f64 {
        match self {
            ObstaclePrimitive::Disk { center, radius } => (z.dist(*center) - radius).abs(),
            _ => self.distance(z),
        }
    }

    /// True when `z` lies in the closed solid set (only disks have interior).
    pub fn contains(&self, z: PlanarPoint) -> bool {
        match self {
            ObstaclePrimitive::Disk { center, radius } => z.dist(*center) <= *radius,
            _ => false,
        }
    }

    /// Smallest crossing parameter of the link `[p, p + d]` with the primitive
    /// boundary, if any. Point clouds are invisible (polar sets carry no
    /// boundary data at grid scale).
    pub fn crossing(&self, p: PlanarPoint, d: PlanarPoint) -> Option<f64> {
        match self {
            ObstaclePrimitive::Disk { center, radius } => circle_crossing(p, d, *center, *radius),
            ObstaclePrimitive::Segment { a, b } => segment_crossing(p, d, *a, *b),
            ObstaclePrimitive::IntervalFamily { origin, intervals } => intervals
                .iter()
                .filter_map(|iv| {
                    let (l, r) = iv.linear();
                    if r - l <= 0.0 {
                        return None;
                    }
                    segment_crossing(
                        p,
                        d,
                        *origin + PlanarPoint::new(l, 0.0),
                        *origin + PlanarPoint::new(r, 0.0),
                    )
                })
                .fold(None, min_opt),
            ObstaclePrimitive::PointCloud { .. } => None,
            ObstaclePrimitive::CombTeeth { .. } => self
                .teeth()
                .into_iter()
                .filter_map(|(a, b)| segment_crossing(p, d, a, b))
                .fold(None, min_opt),
            ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
                arc_crossing(p, d, *center, *radius, *theta0, *theta1)
            }
        }
    }

    /// Teeth of a comb as linear segments (empty for other variants).
    pub fn teeth(&self) -> Vec<(PlanarPoint, PlanarPoint)> {
        match self {
            ObstaclePrimitive::CombTeeth { origin, lambda, gamma, depth } => {
                let l2 = lambda.log2();
                (1..=*depth)
                    .map(|k| {
                        let x = (k as f64 * l2).exp2();
                        let len = (gamma * k as f64 * l2).exp2();
                        (
                            *origin + PlanarPoint::new(x, 0.0),
                            *origin + PlanarPoint::new(x, len),
                        )
                    })
                    .filter(|(a, b)| a.dist(*b) > 0.0)
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Boundary curves carrying 1-D measure (for discretization and sampling).
    pub fn curves(&self) -> Vec<Curve> {
        match self {
            ObstaclePrimitive::Disk { center, radius } => vec![Curve::Circle {
                center: *center,
                radius: *radius,
            }],
            ObstaclePrimitive::Segment { a, b } => vec![Curve::Seg { a: *a, b: *b }],
            ObstaclePrimitive::IntervalFamily { origin, intervals } => intervals
                .iter()
                .filter_map(|iv| {
                    let (l, r) = iv.linear();
                    if r - l <= 0.0 {
                        return None;
                    }
                    Some(Curve::Seg {
                        a: *origin + PlanarPoint::new(l, 0.0),
                        b: *origin + PlanarPoint::new(r, 0.0),
                    })
                })
                .collect(),
            ObstaclePrimitive::PointCloud { .. } => Vec::new(),
            ObstaclePrimitive::CombTeeth { .. } => self
                .teeth()
                .into_iter()
                .map(|(a, b)| Curve::Seg { a, b })
                .collect(),
            ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => vec![Curve::Arc {
                center: *center,
                radius: *radius,
                theta0: *theta0,
                theta1: *theta1,
            }],
        }
    }

    /// Isolated points (only point clouds carry them).
    pub fn points(&self) -> Vec<PlanarPoint> {
        match self {
            ObstaclePrimitive::PointCloud { points } => points.clone(),
            _ => Vec::new(),
        }
    }

    /// Conservative bounding box `(min, max)`.
    pub fn bbox(&self) -> (PlanarPoint, PlanarPoint) {
        match self {
            ObstaclePrimitive::Disk { center, radius }
            | ObstaclePrimitive::Arc { center, radius, .. } => (
                *center - PlanarPoint::new(*radius, *radius),
                *center + PlanarPoint::new(*radius, *radius),
            ),
            ObstaclePrimitive::Segment { a, b } => (
                PlanarPoint::new(a.re.min(b.re), a.im.min(b.im)),
                PlanarPoint::new(a.re.max(b.re), a.im.max(b.im)),
            ),
            ObstaclePrimitive::IntervalFamily { origin, intervals } => {
                let rmax = intervals
                    .iter()
                    .map(|iv| iv.log2_right)
                    .fold(f64::NEG_INFINITY, f64::max)
                    .exp2();
                (*origin, *origin + PlanarPoint::new(rmax, 0.0))
            }
            ObstaclePrimitive::PointCloud { points } => {
                let mut lo = PlanarPoint::new(f64::INFINITY, f64::INFINITY);
                let mut hi = PlanarPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for p in points {
                    lo = PlanarPoint::new(lo.re.min(p.re), lo.im.min(p.im));
                    hi = PlanarPoint::new(hi.re.max(p.re), hi.im.max(p.im));
                }
                (lo, hi)
            }
            ObstaclePrimitive::CombTeeth { origin, lambda, gamma, .. } => (
                *origin,
                *origin + PlanarPoint::new(*lambda, lambda.powf(*gamma)),
            ),
        }
    }

    /// Pieces of the primitive inside the closed disk `|z - a| <= t`, returned
    /// in renormalized coordinates `(z - a) / t`. Interval families clipped
    /// about their own origin are handled entirely in log space, so
    /// doubly-exponential endpoints never underflow before renormalization.
    pub fn clip_scaled(&self, a: PlanarPoint, t: f64) -> Vec<ObstaclePrimitive> {
        let norm = |p: PlanarPoint| (p - a).scale(1.0 / t);
        match self {
            ObstaclePrimitive::Disk { center, radius } => {
                clip_disk_scaled(*center, *radius, a, t)
            }
            ObstaclePrimitive::Segment { a: p, b: q } => clip_segment_scaled(*p, *q, a, t)
                .map(|(u, v)| ObstaclePrimitive::Segment { a: u, b: v })
                .into_iter()
                .collect(),
            ObstaclePrimitive::IntervalFamily { origin, intervals } => {
                if (a - *origin).norm() <= 1e-12 * t.max(1.0) {
                    // log-space clip about the family origin
                    let lt = t.log2();
                    let clipped: Vec<LogInterval> = intervals
                        .iter()
                        .filter(|iv| iv.log2_left < lt)
                        .map(|iv| LogInterval {
                            log2_left: iv.log2_left - lt,
                            log2_right: iv.log2_right.min(lt) - lt,
                        })
                        .filter(|iv| iv.log2_left < iv.log2_right)
                        .collect();
                    if clipped.is_empty() {
                        Vec::new()
                    } else {
                        vec![ObstaclePrimitive::IntervalFamily {
                            origin: PlanarPoint::ZERO,
                            intervals: clipped,
                        }]
                    }
                } else {
                    intervals
                        .iter()
                        .filter_map(|iv| {
                            let (l, r) = iv.linear();
                            if r - l <= 0.0 {
                                return None;
                            }
                            clip_segment_scaled(
                                *origin + PlanarPoint::new(l, 0.0),
                                *origin + PlanarPoint::new(r, 0.0),
                                a,
                                t,
                            )
                        })
                        .map(|(u, v)| ObstaclePrimitive::Segment { a: u, b: v })
                        .collect()
                }
            }
            ObstaclePrimitive::PointCloud { points } => {
                let kept: Vec<PlanarPoint> = points
                    .iter()
                    .filter(|p| p.dist(a) <= t * (1.0 + 1e-12))
                    .map(|p| norm(*p))
                    .collect();
                if kept.is_empty() {
                    Vec::new()
                } else {
                    vec![ObstaclePrimitive::PointCloud { points: kept }]
                }
            }
            ObstaclePrimitive::CombTeeth { origin, lambda, gamma, depth } => {
                if (a - *origin).norm() <= 1e-12 * t.max(1.0) {
                    // renormalized teeth computed directly in log space
                    let l2 = lambda.log2();
                    let lt = t.log2();
                    let mut out = Vec::new();
                    for k in 1..=*depth {
                        let xs = (k as f64 * l2 - lt).exp2();
                        if xs > 1.0 + 1e-12 {
                            continue;
                        }
                        let len = (gamma * k as f64 * l2 - lt).exp2();
                        if len <= 0.0 {
                            continue;
                        }
                        let base = PlanarPoint::new(xs, 0.0);
                        let top = PlanarPoint::new(xs, len);
                        // clip the renormalized tooth to the unit disk
                        if let Some((u, v)) =
                            clip_segment_scaled(base, top, PlanarPoint::ZERO, 1.0)
                        {
                            out.push(ObstaclePrimitive::Segment { a: u, b: v });
                        }
                    }
                    out
                } else {
                    self.teeth()
                        .into_iter()
                        .filter_map(|(p, q)| clip_segment_scaled(p, q, a, t))
                        .map(|(u, v)| ObstaclePrimitive::Segment { a: u, b: v })
                        .collect()
                }
            }
            ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
                clip_arc_scaled(*center, *radius, *theta0, *theta1, a, t)
            }
        }
    }
}

fn min_opt(acc: Option<f64>, t: f64) -> Option<f64> {
    Some(acc.map_or(t, |b| b.min(t)))
}

/// Bring `theta` into `[base, base + 2pi)`.
fn normalise_into(theta: f64, base: f64) -> f64 {
    let mut th = theta;
    while th < base {
        th += TAU;
    }
    while th >= base + TAU {
        th -= TAU;
    }
    th
}

fn arc_crossing(
    p: PlanarPoint,
    d: PlanarPoint,
    c: PlanarPoint,
    r: f64,
    theta0: f64,
    theta1: f64,
) -> Option<f64> {
    let q = p - c;
    let a = d.norm_sq();
    if a == 0.0 {
        return None;
    }
    let b = 2.0 * q.dot(d);
    let c0 = q.norm_sq() - r * r;
    let disc = b * b - 4.0 * a * c0;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut best: Option<f64> = None;
    for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
        if t > 1e-12 && t <= 1.0 {
            let z = p + d * t;
            let th = normalise_into((z - c).arg(), theta0);
            if th >= theta0 - 1e-12 && th <= theta1 + 1e-12 {
                best = min_opt(best, t);
            }
        }
    }
    best
}

/// Clip segment `[p, q]` to the closed disk `|z - a| <= t`; result in
/// renormalized coordinates.
fn clip_segment_scaled(
    p: PlanarPoint,
    q: PlanarPoint,
    a: PlanarPoint,
    t: f64,
) -> Option<(PlanarPoint, PlanarPoint)> {
    let d = q - p;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return None;
    }
    let rel = p - a;
    // |rel + s d|^2 = t^2
    let aa = len_sq;
    let bb = 2.0 * rel.dot(d);
    let cc = rel.norm_sq() - t * t;
    let disc = bb * bb - 4.0 * aa * cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let s0 = ((-bb - sq) / (2.0 * aa)).max(0.0);
    let s1 = ((-bb + sq) / (2.0 * aa)).min(1.0);
    if s1 <= s0 {
        return None;
    }
    let u = (rel + d * s0).scale(1.0 / t);
    let v = (rel + d * s1).scale(1.0 / t);
    if u.dist(v) <= 0.0 {
        return None;
    }
    Some((u, v))
}

/// Intersection of the solid disk `(c, r)` with the trace disk `(a, t)`,
/// renormalized. Lens-shaped intersections are represented by their two
/// bounding arcs, which carry the equilibrium measure of the lens.
fn clip_disk_scaled(c: PlanarPoint, r: f64, a: PlanarPoint, t: f64) -> Vec<ObstaclePrimitive> {
    let d = c.dist(a);
    if d >= t + r {
        return Vec::new();
    }
    let cn = (c - a).scale(1.0 / t);
    let rn = r / t;
    if d + r <= t {
        // obstacle disk entirely inside the trace
        return vec![ObstaclePrimitive::Disk { center: cn, radius: rn }];
    }
    if d + t <= r {
        // trace disk entirely inside the obstacle: the trace is a full disk
        return vec![ObstaclePrimitive::Disk {
            center: PlanarPoint::ZERO,
            radius: 1.0,
        }];
    }
    // proper lens: arc of the obstacle circle inside the trace disk and arc of
    // the trace circle inside the obstacle
    let mut out = Vec::new();
    let phi = ((d * d + r * r - t * t) / (2.0 * d * r)).clamp(-1.0, 1.0).acos();
    if phi > 1e-12 {
        let th_ca = (a - c).arg();
        out.push(ObstaclePrimitive::Arc {
            center: cn,
            radius: rn,
            theta0: th_ca - phi,
            theta1: th_ca + phi,
        });
    }
    let psi = ((d * d + t * t - r * r) / (2.0 * d * t)).clamp(-1.0, 1.0).acos();
    if psi > 1e-12 {
        let th_ac = (c - a).arg();
        out.push(ObstaclePrimitive::Arc {
            center: PlanarPoint::ZERO,
            radius: 1.0,
            theta0: th_ac - psi,
            theta1: th_ac + psi,
        });
    }
    out
}

/// Sub-arcs of an arc lying inside the trace disk, renormalized.
fn clip_arc_scaled(
    c: PlanarPoint,
    r: f64,
    theta0: f64,
    theta1: f64,
    a: PlanarPoint,
    t: f64,
) -> Vec<ObstaclePrimitive> {
    let d = c.dist(a);
    let cn = (c - a).scale(1.0 / t);
    let rn = r / t;
    let make = |t0: f64, t1: f64| ObstaclePrimitive::Arc {
        center: cn,
        radius: rn,
        theta0: t0,
        theta1: t1,
    };
    if d == 0.0 {
        return if r <= t {
            vec![make(theta0, theta1)]
        } else {
            Vec::new()
        };
    }
    // |c + r e^{i th} - a| <= t  <=>  cos(th - arg(a-c)) >= kappa
    let kappa = (d * d + r * r - t * t) / (2.0 * d * r);
    if kappa <= -1.0 {
        return vec![make(theta0, theta1)];
    }
    if kappa >= 1.0 {
        return Vec::new();
    }
    let phi = kappa.acos();
    let th_ca = (a - c).arg();
    intersect_angular(theta0, theta1, th_ca - phi, th_ca + phi)
        .into_iter()
        .filter(|(t0, t1)| t1 - t0 > 1e-12)
        .map(|(t0, t1)| make(t0, t1))
        .collect()
}

/// Intersection of angular intervals `[a0, a1]` and `[b0, b1]` on the circle
/// (each of width <= 2pi); up to two components.
pub fn intersect_angular(a0: f64, a1: f64, b0: f64, b1: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for k in -2..=2 {
        let s0 = b0 + k as f64 * TAU;
        let s1 = b1 + k as f64 * TAU;
        let lo = a0.max(s0);
        let hi = a1.min(s1);
        if hi > lo {
            out.push((lo, hi));
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out.dedup_by(|b, a| {
        if b.0 <= a.1 + 1e-12 {
            a.1 = a.1.max(b.1);
            true
        } else {
            false
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_teeth_positions() {
        let comb = ObstaclePrimitive::CombTeeth {
            origin: PlanarPoint::ZERO,
            lambda: 0.5,
            gamma: 2.0,
            depth: 3,
        };
        let teeth = comb.teeth();
        assert_eq!(teeth.len(), 3);
        assert!((teeth[0].0.re - 0.5).abs() < 1e-15);
        assert!((teeth[0].1.im - 0.25).abs() < 1e-15);
        assert!((teeth[2].0.re - 0.125).abs() < 1e-15);
        assert!((teeth[2].1.im - 0.125f64.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn interval_family_log_space_clip() {
        // Carleson-Totik style: [2^-8, 2^-4] and [2^-32, 2^-16]; clip at t = 2^-6
        let fam = ObstaclePrimitive::IntervalFamily {
            origin: PlanarPoint::ZERO,
            intervals: vec![
                LogInterval::from_log2(-8.0, -4.0).unwrap(),
                LogInterval::from_log2(-32.0, -16.0).unwrap(),
            ],
        };
        let pieces = fam.clip_scaled(PlanarPoint::ZERO, (-6.0f64).exp2());
        match &pieces[0] {
            ObstaclePrimitive::IntervalFamily { intervals, .. } => {
                assert_eq!(intervals.len(), 2);
                // first: [2^-8, 2^-6] renormalized -> [2^-2, 1]
                assert!((intervals[0].log2_left - (-2.0)).abs() < 1e-12);
                assert!(intervals[0].log2_right.abs() < 1e-12);
                // second: [2^-32, 2^-16] renormalized -> [2^-26, 2^-10]
                assert!((intervals[1].log2_left - (-26.0)).abs() < 1e-12);
                assert!((intervals[1].log2_right - (-10.0)).abs() < 1e-12);
            }
            other => panic!("expected interval family, got {other:?}"),
        }
    }

    #[test]
    fn segment_clip_inside_disk() {
        let seg = ObstaclePrimitive::Segment {
            a: PlanarPoint::ZERO,
            b: PlanarPoint::new(1.0, 0.0),
        };
        // trace at a=0, t=0.3 -> renormalized segment [0, 1] along x
        let pieces = seg.clip_scaled(PlanarPoint::ZERO, 0.3);
        match pieces[0] {
            ObstaclePrimitive::Segment { a, b } => {
                assert!(a.norm() < 1e-12);
                assert!((b.re - 1.0).abs() < 1e-12 && b.im.abs() < 1e-12);
            }
            ref other => panic!("expected segment, got {other:?}"),
        }
    }

    #[test]
    fn disk_clip_produces_lens_arcs() {
        // obstacle disk (0.5, 0.3) clipped by trace disk centered 0 radius 0.5
        let disk = ObstaclePrimitive::Disk {
            center: PlanarPoint::new(0.5, 0.0),
            radius: 0.3,
        };
        let pieces = disk.clip_scaled(PlanarPoint::ZERO, 0.5);
        assert_eq!(pieces.len(), 2);
        assert!(matches!(pieces[0], ObstaclePrimitive::Arc { .. }));
        assert!(matches!(pieces[1], ObstaclePrimitive::Arc { .. }));
    }
}
