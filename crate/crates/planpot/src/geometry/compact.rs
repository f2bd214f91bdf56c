use super::point::PlanarPoint;
use super::primitive::{Curve, LogInterval, ObstaclePrimitive};
use crate::error::{Error, Result};

/// A compact set built from primitives: capacity targets, boundary traces.
#[derive(Debug, Clone)]
pub struct CompactSet {
    pub primitives: Vec<ObstaclePrimitive>,
    pub center: PlanarPoint,
    pub bounding_radius: f64,
}

/// A discretization point with its local arclength spacing.
#[derive(Debug, Clone, Copy)]
pub struct SupportPoint {
    pub pos: PlanarPoint,
    pub spacing: f64,
}

impl CompactSet {
    pub fn new(primitives: Vec<ObstaclePrimitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::Geometry("compact set must be nonempty".into()));
        }
        for p in &primitives {
            p.validate()?;
        }
        Ok(Self::from_pieces(primitives))
    }

    /// Builds without validation; an empty piece list is the empty set.
    pub fn from_pieces(primitives: Vec<ObstaclePrimitive>) -> Self {
        let mut lo = PlanarPoint::new(f64::INFINITY, f64::INFINITY);
        let mut hi = PlanarPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &primitives {
            let (a, b) = p.bbox();
            lo = PlanarPoint::new(lo.re.min(a.re), lo.im.min(a.im));
            hi = PlanarPoint::new(hi.re.max(b.re), hi.im.max(b.im));
        }
        let (center, bounding_radius) = if primitives.is_empty() {
            (PlanarPoint::ZERO, 0.0)
        } else {
            let c = (lo + hi) * 0.5;
            (c, (hi - c).norm().max(1e-300))
        };
        Self {
            primitives,
            center,
            bounding_radius,
        }
    }

    pub fn disk(center: PlanarPoint, radius: f64) -> Self {
        Self::from_pieces(vec![ObstaclePrimitive::Disk { center, radius }])
    }

    pub fn segment(a: PlanarPoint, b: PlanarPoint) -> Self {
        Self::from_pieces(vec![ObstaclePrimitive::Segment { a, b }])
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    /// True when the set carries no 1-D measure (point clouds only, or empty):
    /// such sets are polar.
    pub fn is_polar(&self) -> bool {
        self.total_length() <= 0.0
    }

    pub fn total_length(&self) -> f64 {
        self.primitives
            .iter()
            .flat_map(|p| p.curves())
            .map(|c| c.length())
            .sum()
    }

    pub fn distance(&self, z: PlanarPoint) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: PlanarPoint) -> bool {
        self.primitives.iter().any(|p| p.contains(z))
    }

    /// Affine image `z -> (z - shift) * scale`, exact in log space for
    /// interval families. Combs are expanded to their teeth (the comb law does
    /// not commute with affine maps).
    pub fn transform(&self, shift: PlanarPoint, scale: f64) -> CompactSet {
        let prims = self
            .primitives
            .iter()
            .flat_map(|p| transform_primitive(p, shift, scale))
            .collect();
        CompactSet::from_pieces(prims)
    }

    /// Undo a trace renormalization: `u -> a + t * u`.
    pub fn unscale(&self, a: PlanarPoint, t: f64) -> CompactSet {
        self.transform(PlanarPoint::ZERO, t).transform(-a, 1.0)
    }
}

fn transform_primitive(
    p: &ObstaclePrimitive,
    shift: PlanarPoint,
    s: f64,
) -> Vec<ObstaclePrimitive> {
    let m = |z: PlanarPoint| (z - shift) * s;
    match p {
        ObstaclePrimitive::Disk { center, radius } => vec![ObstaclePrimitive::Disk {
            center: m(*center),
            radius: radius * s,
        }],
        ObstaclePrimitive::Segment { a, b } => {
            vec![ObstaclePrimitive::Segment { a: m(*a), b: m(*b) }]
        }
        ObstaclePrimitive::IntervalFamily { origin, intervals } => {
            let ls = s.log2();
            vec![ObstaclePrimitive::IntervalFamily {
                origin: m(*origin),
                intervals: intervals
                    .iter()
                    .map(|iv| LogInterval {
                        log2_left: iv.log2_left + ls,
                        log2_right: iv.log2_right + ls,
                    })
                    .collect(),
            }]
        }
        ObstaclePrimitive::PointCloud { points } => vec![ObstaclePrimitive::PointCloud {
            points: points.iter().map(|p| m(*p)).collect(),
        }],
        ObstaclePrimitive::CombTeeth { .. } => p
            .teeth()
            .into_iter()
            .map(|(a, b)| ObstaclePrimitive::Segment { a: m(a), b: m(b) })
            .collect(),
        ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
            vec![ObstaclePrimitive::Arc {
                center: m(*center),
                radius: radius * s,
                theta0: *theta0,
                theta1: *theta1,
            }]
        }
    }
}

/// Distributes at least `n` points over the 1-D boundary curves of `k`,
/// proportionally to arclength; every retained curve receives at least two
/// points. Point clouds carry no capacity and contribute no support points.
pub fn discretize_compact(k: &CompactSet, n: usize) -> Result<Vec<SupportPoint>> {
    if n < 8 {
        return Err(Error::Precondition("discretization needs n >= 8".into()));
    }
    if k.is_empty() {
        return Err(Error::Geometry("cannot discretize the empty set".into()));
    }
    let curves: Vec<Curve> = k.primitives.iter().flat_map(|p| p.curves()).collect();
    let total: f64 = curves.iter().map(|c| c.length()).sum();
    if total <= 0.0 {
        return Err(Error::PolarSet);
    }
    // drop measure-negligible curves, allocate the rest
    let kept: Vec<&Curve> = curves
        .iter()
        .filter(|c| c.length() / total >= 1e-12)
        .collect();
    let kept_total: f64 = kept.iter().map(|c| c.length()).sum();
    let mut quotas: Vec<usize> = kept
        .iter()
        .map(|c| ((n as f64) * c.length() / kept_total).floor() as usize)
        .map(|q| q.max(2))
        .collect();
    let mut assigned: usize = quotas.iter().sum();
    // top up largest curves until the total reaches n
    while assigned < n {
        let (imax, _) = kept
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                (a.length() / quotas[*i] as f64).total_cmp(&(b.length() / quotas[*j] as f64))
            })
            .unwrap();
        quotas[imax] += 1;
        assigned += 1;
    }
    let mut out = Vec::with_capacity(assigned);
    for (c, q) in kept.iter().zip(quotas) {
        out.extend(
            c.sample(q)
                .into_iter()
                .map(|(pos, spacing)| SupportPoint { pos, spacing }),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_discretization_equispaced() {
        let k = CompactSet::segment(PlanarPoint::ZERO, PlanarPoint::new(1.0, 0.0));
        let pts = discretize_compact(&k, 100).unwrap();
        assert_eq!(pts.len(), 100);
        for p in &pts {
            assert!((p.spacing - 0.01).abs() < 1e-14);
        }
        assert!((pts[0].pos.re - 0.005).abs() < 1e-14);
    }

    #[test]
    fn disk_discretizes_to_circle() {
        let k = CompactSet::disk(PlanarPoint::ZERO, 1.0);
        let pts = discretize_compact(&k, 128).unwrap();
        assert_eq!(pts.len(), 128);
        for p in &pts {
            assert!((p.pos.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cloud_only_is_polar() {
        let k = CompactSet::from_pieces(vec![ObstaclePrimitive::PointCloud {
            points: vec![PlanarPoint::ZERO],
        }]);
        assert!(matches!(discretize_compact(&k, 16), Err(Error::PolarSet)));
    }
}
