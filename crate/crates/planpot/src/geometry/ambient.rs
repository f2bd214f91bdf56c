use super::point::{circle_crossing, segment_crossing, PlanarPoint};
use super::primitive::{intersect_angular, Curve, ObstaclePrimitive};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// The ambient region a domain is carved from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Ambient {
    Disk { center: PlanarPoint, radius: f64 },
    Rect { min: PlanarPoint, max: PlanarPoint },
}

impl Ambient {
    pub fn validate(&self) -> Result<()> {
        match self {
            Ambient::Disk { center, radius } => {
                if !center.is_finite() || !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::Geometry("ambient disk needs radius > 0".into()));
                }
            }
            Ambient::Rect { min, max } => {
                if !min.is_finite() || !max.is_finite() || min.re >= max.re || min.im >= max.im {
                    return Err(Error::Geometry("ambient rect needs min < max".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, z: PlanarPoint) -> bool {
        match self {
            Ambient::Disk { center, radius } => z.dist(*center) < *radius,
            Ambient::Rect { min, max } => {
                z.re > min.re && z.re < max.re && z.im > min.im && z.im < max.im
            }
        }
    }

    /// Distance from an interior point to the ambient boundary (negative
    /// values flag exterior points).
    pub fn boundary_distance_signed(&self, z: PlanarPoint) -> f64 {
        match self {
            Ambient::Disk { center, radius } => radius - z.dist(*center),
            Ambient::Rect { min, max } => (z.re - min.re)
                .min(max.re - z.re)
                .min(z.im - min.im)
                .min(max.im - z.im),
        }
    }

    /// Unsigned distance from any point to the ambient boundary curve.
    pub fn boundary_distance_abs(&self, z: PlanarPoint) -> f64 {
        match self {
            Ambient::Disk { .. } => self.boundary_distance_signed(z).abs(),
            Ambient::Rect { min, max } => {
                if self.contains(z) {
                    self.boundary_distance_signed(z)
                } else {
                    let dx = (min.re - z.re).max(0.0).max(z.re - max.re);
                    let dy = (min.im - z.im).max(0.0).max(z.im - max.im);
                    if self.contains(PlanarPoint::new(
                        z.re.clamp(min.re, max.re),
                        z.im.clamp(min.im, max.im),
                    )) || dx > 0.0
                        || dy > 0.0
                    {
                        dx.hypot(dy)
                    } else {
                        0.0
                    }
                }
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Ambient::Disk { radius, .. } => 2.0 * radius,
            Ambient::Rect { min, max } => (*max - *min).norm(),
        }
    }

    pub fn bbox(&self) -> (PlanarPoint, PlanarPoint) {
        match self {
            Ambient::Disk { center, radius } => (
                *center - PlanarPoint::new(*radius, *radius),
                *center + PlanarPoint::new(*radius, *radius),
            ),
            Ambient::Rect { min, max } => (*min, *max),
        }
    }

    /// First crossing of the link `[p, p + d]` with the ambient boundary.
    pub fn crossing(&self, p: PlanarPoint, d: PlanarPoint) -> Option<f64> {
        match self {
            Ambient::Disk { center, radius } => circle_crossing(p, d, *center, *radius),
            Ambient::Rect { min, max } => {
                let corners = [
                    *min,
                    PlanarPoint::new(max.re, min.im),
                    *max,
                    PlanarPoint::new(min.re, max.im),
                ];
                let mut best: Option<f64> = None;
                for k in 0..4 {
                    if let Some(t) = segment_crossing(p, d, corners[k], corners[(k + 1) % 4]) {
                        best = Some(best.map_or(t, |b| b.min(t)));
                    }
                }
                best
            }
        }
    }

    pub fn boundary_curves(&self) -> Vec<Curve> {
        match self {
            Ambient::Disk { center, radius } => vec![Curve::Circle {
                center: *center,
                radius: *radius,
            }],
            Ambient::Rect { min, max } => {
                let corners = [
                    *min,
                    PlanarPoint::new(max.re, min.im),
                    *max,
                    PlanarPoint::new(min.re, max.im),
                ];
                (0..4)
                    .map(|k| Curve::Seg {
                        a: corners[k],
                        b: corners[(k + 1) % 4],
                    })
                    .collect()
            }
        }
    }

    /// Pieces of the ambient complement inside the closed disk `|z - a| <= t`,
    /// renormalized by `(z - a)/t`. Disk ambients contribute the arc of the
    /// ambient circle inside the trace (the equilibrium measure of such traces
    /// concentrates there); rect ambients contribute clipped sides plus the
    /// trace-circle arcs beyond them.
    pub fn complement_clip_scaled(&self, a: PlanarPoint, t: f64) -> Vec<ObstaclePrimitive> {
        match self {
            Ambient::Disk { center, radius } => {
                let d = center.dist(a);
                if d + t <= *radius {
                    return Vec::new();
                }
                if d - t >= *radius {
                    // trace disk entirely outside the ambient closure
                    return vec![ObstaclePrimitive::Disk {
                        center: PlanarPoint::ZERO,
                        radius: 1.0,
                    }];
                }
                let kappa = (d * d + radius * radius - t * t) / (2.0 * d * radius);
                let cn = (*center - a).scale(1.0 / t);
                let rn = radius / t;
                if kappa <= -1.0 {
                    return vec![ObstaclePrimitive::Arc {
                        center: cn,
                        radius: rn,
                        theta0: 0.0,
                        theta1: TAU,
                    }];
                }
                let phi = kappa.clamp(-1.0, 1.0).acos();
                if phi <= 1e-12 {
                    return Vec::new();
                }
                let th = (a - *center).arg();
                vec![ObstaclePrimitive::Arc {
                    center: cn,
                    radius: rn,
                    theta0: th - phi,
                    theta1: th + phi,
                }]
            }
            Ambient::Rect { min, max } => {
                let mut out = Vec::new();
                let corners = [
                    *min,
                    PlanarPoint::new(max.re, min.im),
                    *max,
                    PlanarPoint::new(min.re, max.im),
                ];
                for k in 0..4 {
                    let (p, q) = (corners[k], corners[(k + 1) % 4]);
                    if let Some((u, v)) = clip_side(p, q, a, t) {
                        out.push(ObstaclePrimitive::Segment { a: u, b: v });
                    }
                }
                // trace-circle arcs beyond each side half-plane
                let mut arcs: Vec<(f64, f64)> = Vec::new();
                let sides = [
                    (PlanarPoint::new(1.0, 0.0), max.re - a.re),
                    (PlanarPoint::new(-1.0, 0.0), a.re - min.re),
                    (PlanarPoint::new(0.0, 1.0), max.im - a.im),
                    (PlanarPoint::new(0.0, -1.0), a.im - min.im),
                ];
                for (dir, gap) in sides {
                    let kappa = gap / t;
                    if kappa >= 1.0 {
                        continue;
                    }
                    let phi = kappa.clamp(-1.0, 1.0).acos();
                    let th = dir.arg();
                    for (t0, t1) in intersect_angular(th - phi, th + phi, th - phi, th + phi) {
                        arcs.push((t0, t1));
                    }
                }
                arcs.sort_by(|p, q| p.0.total_cmp(&q.0));
                let mut merged: Vec<(f64, f64)> = Vec::new();
                for (t0, t1) in arcs {
                    if let Some(last) = merged.last_mut() {
                        if t0 <= last.1 + 1e-12 {
                            last.1 = last.1.max(t1);
                            continue;
                        }
                    }
                    merged.push((t0, t1));
                }
                for (t0, t1) in merged {
                    out.push(ObstaclePrimitive::Arc {
                        center: PlanarPoint::ZERO,
                        radius: 1.0,
                        theta0: t0,
                        theta1: t1,
                    });
                }
                out
            }
        }
    }
}

fn clip_side(
    p: PlanarPoint,
    q: PlanarPoint,
    a: PlanarPoint,
    t: f64,
) -> Option<(PlanarPoint, PlanarPoint)> {
    let d = q - p;
    let len_sq = d.norm_sq();
    let rel = p - a;
    let bb = 2.0 * rel.dot(d);
    let cc = rel.norm_sq() - t * t;
    let disc = bb * bb - 4.0 * len_sq * cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let s0 = ((-bb - sq) / (2.0 * len_sq)).max(0.0);
    let s1 = ((-bb + sq) / (2.0 * len_sq)).min(1.0);
    if s1 <= s0 {
        return None;
    }
    let u = (rel + d * s0).scale(1.0 / t);
    let v = (rel + d * s1).scale(1.0 / t);
    Some((u, v))
}
