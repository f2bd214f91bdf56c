use super::ambient::Ambient;
use super::compact::CompactSet;
use super::point::PlanarPoint;
use super::primitive::{Curve, ObstaclePrimitive};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Identifies a boundary feature of a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureId {
    Ambient,
    Obstacle(usize),
}

/// A bounded planar domain: an ambient disk or rectangle minus obstacles,
/// understood as the connected component of the base point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Domain {
    pub ambient: Ambient,
    pub obstacles: Vec<ObstaclePrimitive>,
    pub base_point: PlanarPoint,
}

impl Domain {
    /// Validates geometry and checks by flood fill (h = diameter/512) that the
    /// base point sits in a nonempty interior component.
    pub fn new(
        ambient: Ambient,
        obstacles: Vec<ObstaclePrimitive>,
        base_point: PlanarPoint,
    ) -> Result<Self> {
        let d = Self {
            ambient,
            obstacles,
            base_point,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        self.ambient.validate()?;
        for (k, obs) in self.obstacles.iter().enumerate() {
            obs.validate()
                .map_err(|e| Error::Geometry(format!("obstacle {k}: {e}")))?;
            let (lo, hi) = obs.bbox();
            let margin = 1e-9 * self.diameter();
            for corner in [lo, hi, PlanarPoint::new(lo.re, hi.im), PlanarPoint::new(hi.re, lo.im)]
            {
                if self.ambient.boundary_distance_signed(corner) < -margin - 1e-12 {
                    return Err(Error::Geometry(format!(
                        "obstacle {k} extends outside the ambient closure"
                    )));
                }
            }
        }
        if !self.base_point.is_finite() || !self.contains(self.base_point) {
            return Err(Error::Geometry(
                "base point must lie inside the ambient and outside all obstacles".into(),
            ));
        }
        // connectivity probe
        let h = self.diameter() / 512.0;
        let cells = self.flood_fill_count(h);
        if cells < 4 {
            return Err(Error::Geometry(
                "no interior component containing the base point".into(),
            ));
        }
        Ok(())
    }

    pub fn diameter(&self) -> f64 {
        self.ambient.diameter()
    }

    /// Strict interior test: inside the ambient, off every obstacle.
    pub fn contains(&self, z: PlanarPoint) -> bool {
        self.ambient.contains(z) && self.obstacles.iter().all(|o| o.distance(z) > 0.0)
    }

    /// Exact analytic distance from `z` to the nearest boundary feature.
    pub fn boundary_distance(&self, z: PlanarPoint) -> Result<f64> {
        if !self.ambient.contains(z) {
            return Err(Error::OutsideDomain(format!(
                "({}, {}) is outside the ambient",
                z.re, z.im
            )));
        }
        Ok(self.boundary_distance_unchecked(z))
    }

    pub fn boundary_distance_unchecked(&self, z: PlanarPoint) -> f64 {
        let mut d = self.ambient.boundary_distance_signed(z).abs();
        for obs in &self.obstacles {
            d = d.min(obs.distance(z));
        }
        d
    }

    /// Distance from `z` to the boundary curve set (obstacle boundaries and
    /// the ambient boundary), regardless of which side `z` is on.
    pub fn boundary_feature_distance(&self, z: PlanarPoint) -> f64 {
        let mut d = self.ambient.boundary_distance_abs(z);
        for obs in &self.obstacles {
            d = d.min(obs.boundary_distance(z));
        }
        d
    }

    pub fn is_boundary_point(&self, a: PlanarPoint, tol: f64) -> bool {
        self.boundary_feature_distance(a) <= tol
    }

    /// First crossing of the link `[p, p + d]` with any boundary feature.
    pub fn crossing(&self, p: PlanarPoint, d: PlanarPoint) -> Option<(f64, FeatureId)> {
        let mut best: Option<(f64, FeatureId)> = None;
        if let Some(t) = self.ambient.crossing(p, d) {
            best = Some((t, FeatureId::Ambient));
        }
        for (k, obs) in self.obstacles.iter().enumerate() {
            if let Some(t) = obs.crossing(p, d) {
                if best.map_or(true, |(tb, _)| t < tb) {
                    best = Some((t, FeatureId::Obstacle(k)));
                }
            }
        }
        best
    }

    /// `K_t(a)`: the part of the complement inside the closed disk of radius
    /// `t` about `a`, in renormalized coordinates `(z - a)/t`. No boundary
    /// membership requirement on the clip center.
    pub fn complement_trace_scaled(&self, a: PlanarPoint, t: f64) -> CompactSet {
        let mut pieces = self.ambient.complement_clip_scaled(a, t);
        for obs in &self.obstacles {
            pieces.extend(obs.clip_scaled(a, t));
        }
        CompactSet::from_pieces(pieces)
    }

    /// Boundary trace `K_t(a)` in absolute coordinates; requires `a` within
    /// `tol_bnd` of the boundary.
    pub fn boundary_trace(&self, a: PlanarPoint, t: f64, tol_bnd: f64) -> Result<CompactSet> {
        if !self.is_boundary_point(a, tol_bnd) {
            return Err(Error::Precondition(format!(
                "trace center ({}, {}) is {:.3e} from the boundary (tol {:.3e})",
                a.re,
                a.im,
                self.boundary_feature_distance(a),
                tol_bnd
            )));
        }
        if !(t > 0.0) {
            return Err(Error::Precondition("trace radius must be positive".into()));
        }
        Ok(self.complement_trace_scaled(a, t).unscale(a, t))
    }

    /// Arclength-uniform boundary sample of roughly `count` points, in a
    /// deterministic seam order: ambient curves first, then obstacles in list
    /// order. Point-cloud members and accumulation origins of interval
    /// families and combs are always included.
    pub fn boundary_sample(&self, count: usize) -> Vec<PlanarPoint> {
        let mut curves: Vec<Curve> = self.ambient.boundary_curves();
        for obs in &self.obstacles {
            curves.extend(obs.curves());
        }
        let total: f64 = curves.iter().map(|c| c.length()).sum();
        let mut out = Vec::new();
        if total > 0.0 && count > 0 {
            for c in &curves {
                let share = c.length() / total;
                let m = ((count as f64 * share).round() as usize).max(1);
                if share < 1e-9 {
                    continue;
                }
                out.extend(c.sample(m).into_iter().map(|(p, _)| p));
            }
        }
        for obs in &self.obstacles {
            out.extend(obs.points());
            match obs {
                ObstaclePrimitive::IntervalFamily { origin, .. }
                | ObstaclePrimitive::CombTeeth { origin, .. } => out.push(*origin),
                _ => {}
            }
        }
        out
    }

    /// Closest point of the boundary to `z`.
    pub fn nearest_boundary_point(&self, z: PlanarPoint) -> PlanarPoint {
        let mut best = self.ambient_nearest(z);
        let mut best_d = z.dist(best);
        for obs in &self.obstacles {
            let p = nearest_on_primitive(obs, z);
            let d = z.dist(p);
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        best
    }

    fn ambient_nearest(&self, z: PlanarPoint) -> PlanarPoint {
        match &self.ambient {
            Ambient::Disk { center, radius } => {
                let v = z - *center;
                let n = v.norm();
                if n == 0.0 {
                    *center + PlanarPoint::new(*radius, 0.0)
                } else {
                    *center + v * (*radius / n)
                }
            }
            Ambient::Rect { min, max } => {
                let dl = z.re - min.re;
                let dr = max.re - z.re;
                let db = z.im - min.im;
                let dt = max.im - z.im;
                let m = dl.min(dr).min(db).min(dt);
                if m == dl {
                    PlanarPoint::new(min.re, z.im)
                } else if m == dr {
                    PlanarPoint::new(max.re, z.im)
                } else if m == db {
                    PlanarPoint::new(z.re, min.im)
                } else {
                    PlanarPoint::new(z.re, max.im)
                }
            }
        }
    }

    /// Interior cell count of the base-point component on a grid of spacing
    /// `h`; links crossing any boundary feature are cut.
    pub fn flood_fill_count(&self, h: f64) -> usize {
        let (lo, hi) = self.ambient.bbox();
        let nx = ((hi.re - lo.re) / h).ceil() as usize + 1;
        let ny = ((hi.im - lo.im) / h).ceil() as usize + 1;
        let center = |i: usize, j: usize| {
            PlanarPoint::new(lo.re + (i as f64 + 0.5) * h, lo.im + (j as f64 + 0.5) * h)
        };
        let inside: Vec<bool> = (0..nx * ny)
            .map(|q| self.contains(center(q % nx, q / nx)))
            .collect();
        let bi = ((self.base_point.re - lo.re) / h).floor() as isize;
        let bj = ((self.base_point.im - lo.im) / h).floor() as isize;
        if bi < 0 || bj < 0 || bi as usize >= nx || bj as usize >= ny {
            return 0;
        }
        let start = bj as usize * nx + bi as usize;
        if !inside[start] {
            return 0;
        }
        let mut seen = vec![false; nx * ny];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0usize;
        while let Some(q) = stack.pop() {
            count += 1;
            let (i, j) = (q % nx, q / nx);
            let p = center(i, j);
            let dirs: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
            for (di, dj) in dirs {
                let (ni, nj) = (i as isize + di, j as isize + dj);
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    continue;
                }
                let nq = nj as usize * nx + ni as usize;
                if seen[nq] || !inside[nq] {
                    continue;
                }
                let d = PlanarPoint::new(di as f64 * h, dj as f64 * h);
                if self.crossing(p, d).is_some() {
                    continue;
                }
                seen[nq] = true;
                stack.push(nq);
            }
        }
        count
    }
}

fn nearest_on_primitive(obs: &ObstaclePrimitive, z: PlanarPoint) -> PlanarPoint {
    let nearest_on_segment = |a: PlanarPoint, b: PlanarPoint| {
        let ab = b - a;
        let len_sq = ab.norm_sq();
        if len_sq == 0.0 {
            return a;
        }
        let t = ((z - a).dot(ab) / len_sq).clamp(0.0, 1.0);
        a + ab * t
    };
    match obs {
        ObstaclePrimitive::Disk { center, radius } => {
            let v = z - *center;
            let n = v.norm();
            if n == 0.0 {
                *center + PlanarPoint::new(*radius, 0.0)
            } else {
                *center + v * (*radius / n)
            }
        }
        ObstaclePrimitive::Segment { a, b } => nearest_on_segment(*a, *b),
        ObstaclePrimitive::IntervalFamily { origin, intervals } => intervals
            .iter()
            .map(|iv| {
                let (l, r) = iv.linear();
                nearest_on_segment(
                    *origin + PlanarPoint::new(l, 0.0),
                    *origin + PlanarPoint::new(r, 0.0),
                )
            })
            .min_by(|p, q| z.dist(*p).total_cmp(&z.dist(*q)))
            .unwrap_or(*origin),
        ObstaclePrimitive::PointCloud { points } => points
            .iter()
            .copied()
            .min_by(|p, q| z.dist(*p).total_cmp(&z.dist(*q)))
            .unwrap(),
        ObstaclePrimitive::CombTeeth { origin, .. } => obs
            .teeth()
            .into_iter()
            .map(|(a, b)| nearest_on_segment(a, b))
            .min_by(|p, q| z.dist(*p).total_cmp(&z.dist(*q)))
            .unwrap_or(*origin),
        ObstaclePrimitive::Arc { .. } => {
            // project radially, clamp to the angular range endpoints
            let d = obs.distance(z);
            let candidates = obs.curves();
            match candidates.first() {
                Some(Curve::Arc { center, radius, theta0, theta1 }) => {
                    let th = (z - *center).arg();
                    let mut t = th;
                    while t < *theta0 {
                        t += std::f64::consts::TAU;
                    }
                    let t = if t <= *theta1 { t } else {
                        let d0 = z.dist(*center + PlanarPoint::new(theta0.cos(), theta0.sin()) * *radius);
                        let d1 = z.dist(*center + PlanarPoint::new(theta1.cos(), theta1.sin()) * *radius);
                        if d0 < d1 { *theta0 } else { *theta1 }
                    };
                    *center + PlanarPoint::new(t.cos(), t.sin()) * *radius
                }
                _ => z + PlanarPoint::new(d, 0.0),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> Domain {
        Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![],
            PlanarPoint::new(-0.5, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn boundary_distance_center_of_unit_disk() {
        let d = unit_disk();
        assert!((d.boundary_distance(PlanarPoint::ZERO).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_disk_obstacle() {
        let d = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::Disk {
                center: PlanarPoint::new(0.5, 0.0),
                radius: 0.1,
            }],
            PlanarPoint::new(-0.5, 0.0),
        )
        .unwrap();
        assert!((d.boundary_distance(PlanarPoint::ZERO).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_slit() {
        let d = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::Segment {
                a: PlanarPoint::ZERO,
                b: PlanarPoint::new(1.0, 0.0),
            }],
            PlanarPoint::new(-0.5, 0.0),
        )
        .unwrap();
        let z = PlanarPoint::new(0.5, 0.3);
        assert!((d.boundary_distance(z).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn outside_ambient_is_error() {
        let d = unit_disk();
        assert!(d.boundary_distance(PlanarPoint::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn covered_ambient_rejected() {
        let r = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            }],
            PlanarPoint::new(-0.5, 0.0),
        );
        assert!(r.is_err());
    }
}
