//! Domains, obstacles, compact sets and their metric queries.

mod ambient;
mod compact;
mod domain;
mod mask;
mod point;
mod primitive;

pub use ambient::Ambient;
pub use compact::{discretize_compact, CompactSet, SupportPoint};
pub use domain::{Domain, FeatureId};
pub use mask::{grid_mask, GridMask};
pub use point::{circle_crossing, point_segment_distance, segment_crossing, PlanarPoint};
pub use primitive::{intersect_angular, Curve, LogInterval, ObstaclePrimitive};

use crate::error::Result;

/// Standard test domains used across the toolkit.
pub mod domains {
    use super::*;

    /// The unit disk with base point on the negative real axis.
    pub fn unit_disk() -> Domain {
        Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![],
            PlanarPoint::new(-0.5, 0.0),
        )
        .expect("unit disk is valid")
    }

    /// Unit disk minus the radial slit `[0, 1]`; uniformly perfect boundary.
    pub fn slit_disk() -> Domain {
        Domain::new(
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
        .expect("slit disk is valid")
    }

    /// Unit disk minus the origin and the Carleson-Totik interval family
    /// `[2^-2^(2k+1), 2^-2^(2k)]`.
    pub fn carleson_totik(terms: u32) -> Domain {
        let intervals = (1..=terms)
            .map(|k| {
                LogInterval::from_log2(
                    -(2f64.powi(2 * k as i32 + 1)),
                    -(2f64.powi(2 * k as i32)),
                )
                .expect("valid CT interval")
            })
            .collect();
        Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![
                ObstaclePrimitive::PointCloud {
                    points: vec![PlanarPoint::ZERO],
                },
                ObstaclePrimitive::IntervalFamily {
                    origin: PlanarPoint::ZERO,
                    intervals,
                },
            ],
            PlanarPoint::new(-0.5, 0.0),
        )
        .expect("Carleson-Totik domain is valid")
    }

    /// Unit disk minus vertical teeth at `lambda^k` of length `lambda^(gamma k)`.
    pub fn comb(lambda: f64, gamma: f64, depth: u32) -> Domain {
        Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::CombTeeth {
                origin: PlanarPoint::ZERO,
                lambda,
                gamma,
                depth,
            }],
            PlanarPoint::new(-0.5, 0.0),
        )
        .expect("comb domain is valid")
    }

    /// Axis-aligned square `(-1,1)^2`.
    pub fn square() -> Domain {
        Domain::new(
            Ambient::Rect {
                min: PlanarPoint::new(-1.0, -1.0),
                max: PlanarPoint::new(1.0, 1.0),
            },
            vec![],
            PlanarPoint::ZERO,
        )
        .expect("square is valid")
    }

    /// Annulus `rho < |z| < 1`.
    pub fn annulus(rho: f64) -> Domain {
        Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::Disk {
                center: PlanarPoint::ZERO,
                radius: rho,
            }],
            PlanarPoint::new(-(1.0 + rho) / 2.0, 0.0),
        )
        .expect("annulus is valid")
    }
}

/// Convenience wrapper matching the toolkit-wide naming.
pub fn boundary_trace(domain: &Domain, a: PlanarPoint, t: f64, tol_bnd: f64) -> Result<CompactSet> {
    domain.boundary_trace(a, t, tol_bnd)
}
