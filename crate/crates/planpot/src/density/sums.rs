use crate::capacity::log_capacity;
use crate::error::{Error, Result};
use crate::geometry::{intersect_angular, CompactSet, Domain, LogInterval, ObstaclePrimitive, PlanarPoint};

/// Pieces of the complement inside the dyadic annulus
/// `2^-(k+1) <= |z - a| <= 2^-k`, renormalized by the outer radius: the
/// outer trace clipped against the open inner disk of radius 1/2.
pub fn complement_annulus_scaled(domain: &Domain, a: PlanarPoint, k: u32) -> CompactSet {
    let r_out = (-(k as f64)).exp2();
    let trace = domain.complement_trace_scaled(a, r_out);
    let mut kept: Vec<ObstaclePrimitive> = Vec::new();
    for p in &trace.primitives {
        kept.extend(remove_inner_disk(p, 0.5));
    }
    CompactSet::from_pieces(kept)
}

/// Parts of a renormalized trace piece outside the open disk `|z| < rho`.
fn remove_inner_disk(p: &ObstaclePrimitive, rho: f64) -> Vec<ObstaclePrimitive> {
    match p {
        ObstaclePrimitive::Segment { a, b } => {
            let d = *b - *a;
            let len_sq = d.norm_sq();
            if len_sq == 0.0 {
                return Vec::new();
            }
            let bb = 2.0 * a.dot(d);
            let cc = a.norm_sq() - rho * rho;
            let disc = bb * bb - 4.0 * len_sq * cc;
            if disc <= 0.0 {
                return vec![p.clone()];
            }
            let sq = disc.sqrt();
            let s0 = (-bb - sq) / (2.0 * len_sq);
            let s1 = (-bb + sq) / (2.0 * len_sq);
            let mut out = Vec::new();
            let lo = s0.clamp(0.0, 1.0);
            let hi = s1.clamp(0.0, 1.0);
            if lo > 1e-12 {
                out.push(ObstaclePrimitive::Segment {
                    a: *a,
                    b: *a + d * lo,
                });
            }
            if hi < 1.0 - 1e-12 {
                out.push(ObstaclePrimitive::Segment {
                    a: *a + d * hi,
                    b: *b,
                });
            }
            out.retain(|s| match s {
                ObstaclePrimitive::Segment { a, b } => a.dist(*b) > 1e-300,
                _ => true,
            });
            out
        }
        ObstaclePrimitive::Arc { center, radius, theta0, theta1 } => {
            let d = center.norm();
            if d == 0.0 {
                return if *radius >= rho { vec![p.clone()] } else { Vec::new() };
            }
            // |c + r e^(i th)|^2 >= rho^2  <=>  cos(th - arg c) >= kappa
            let kappa = (rho * rho - d * d - radius * radius) / (2.0 * d * radius);
            if kappa <= -1.0 {
                return vec![p.clone()];
            }
            if kappa >= 1.0 {
                return Vec::new();
            }
            let phi = kappa.acos();
            let th_c = center.arg();
            intersect_angular(*theta0, *theta1, th_c - phi, th_c + phi)
                .into_iter()
                .filter(|(t0, t1)| t1 - t0 > 1e-12)
                .map(|(t0, t1)| ObstaclePrimitive::Arc {
                    center: *center,
                    radius: *radius,
                    theta0: t0,
                    theta1: t1,
                })
                .collect()
        }
        ObstaclePrimitive::Disk { center, radius } => {
            let d = center.norm();
            if d - radius >= rho {
                return vec![p.clone()];
            }
            if d + radius <= rho {
                return Vec::new();
            }
            // keep the boundary-circle arcs outside the inner disk
            remove_inner_disk(
                &ObstaclePrimitive::Arc {
                    center: *center,
                    radius: *radius,
                    theta0: 0.0,
                    theta1: std::f64::consts::TAU,
                },
                rho,
            )
        }
        ObstaclePrimitive::IntervalFamily { origin, intervals } => {
            if origin.norm() > 1e-9 {
                // families are renormalized about their own origin
                return vec![p.clone()];
            }
            let cut = rho.log2();
            let kept: Vec<LogInterval> = intervals
                .iter()
                .filter(|iv| iv.log2_right > cut)
                .map(|iv| LogInterval {
                    log2_left: iv.log2_left.max(cut),
                    log2_right: iv.log2_right,
                })
                .filter(|iv| iv.log2_left < iv.log2_right)
                .collect();
            if kept.is_empty() {
                Vec::new()
            } else {
                vec![ObstaclePrimitive::IntervalFamily {
                    origin: *origin,
                    intervals: kept,
                }]
            }
        }
        ObstaclePrimitive::PointCloud { points } => {
            let kept: Vec<PlanarPoint> =
                points.iter().copied().filter(|p| p.norm() >= rho).collect();
            if kept.is_empty() {
                Vec::new()
            } else {
                vec![ObstaclePrimitive::PointCloud { points: kept }]
            }
        }
        ObstaclePrimitive::CombTeeth { .. } => unreachable!("traces never contain raw combs"),
    }
}

/// Natural-log capacity of a renormalized annulus trace, shifted back to the
/// true scale; `-inf` for polar traces.
pub fn annulus_log_capacity(domain: &Domain, a: PlanarPoint, k: u32, n_disc: usize) -> Result<f64> {
    let set = complement_annulus_scaled(domain, a, k);
    let rep = log_capacity(&set, n_disc)?;
    if rep.cap == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(rep.log_cap - (k as f64) * std::f64::consts::LN_2)
    }
}

/// Partial sums of the boundary-regularity series
/// `sum_k k / log(1 / C_l(A_k ∩ complement))` at a boundary anchor.
pub fn wiener_sum(
    domain: &Domain,
    a: PlanarPoint,
    truncation: u32,
    n_disc: usize,
) -> Result<Vec<f64>> {
    if truncation == 0 {
        return Err(Error::Config("truncation must be at least 1".into()));
    }
    let mut sums = Vec::with_capacity(truncation as usize);
    let mut acc = 0.0f64;
    for k in 1..=truncation {
        let log_cl = annulus_log_capacity(domain, a, k, n_disc)?;
        let term = if log_cl == f64::NEG_INFINITY {
            0.0
        } else {
            let denom = -log_cl;
            if denom <= 0.0 {
                return Err(Error::Numeric(format!(
                    "annulus capacity at k={k} is not below 1"
                )));
            }
            k as f64 / denom
        };
        acc += term;
        sums.push(acc);
    }
    Ok(sums)
}

/// Kernel-exhaustiveness series `sum_k 4^k / log(1 / C_l(A_k(z) ∩ complement))`
/// about an interior point.
pub fn zwonek_sum(domain: &Domain, z: PlanarPoint, truncation: u32, n_disc: usize) -> Result<f64> {
    if truncation == 0 {
        return Err(Error::Config("truncation must be at least 1".into()));
    }
    let mut acc = 0.0f64;
    for k in 1..=truncation {
        let log_cl = annulus_log_capacity(domain, z, k, n_disc)?;
        if log_cl == f64::NEG_INFINITY {
            continue;
        }
        let denom = -log_cl;
        if denom <= 0.0 {
            return Err(Error::Numeric(format!(
                "annulus capacity at k={k} is not below 1"
            )));
        }
        acc += (2.0f64).powi(2 * k as i32) / denom;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domains;

    #[test]
    fn disk_boundary_wiener_terms_approach_inverse_log2() {
        // at a boundary point of the disk the annulus complement capacity is
        // comparable to 2^-k, so terms tend to 1/log 2
        let d = domains::unit_disk();
        let a = PlanarPoint::new(1.0, 0.0);
        let sums = wiener_sum(&d, a, 12, 96).unwrap();
        let terms: Vec<f64> = sums
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect();
        let lim = 1.0 / std::f64::consts::LN_2;
        for t in terms.iter().skip(6) {
            assert!((t - lim).abs() / lim < 0.25, "term {t} vs {lim}");
        }
        // partial sums grow linearly
        assert!(sums[11] > 0.8 * 12.0 / std::f64::consts::LN_2 * 0.5);
    }

    #[test]
    fn punctured_disk_terms_vanish() {
        use crate::geometry::{Ambient, ObstaclePrimitive};
        let d = crate::geometry::Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![ObstaclePrimitive::PointCloud {
                points: vec![PlanarPoint::ZERO],
            }],
            PlanarPoint::new(-0.5, 0.0),
        )
        .unwrap();
        let sums = wiener_sum(&d, PlanarPoint::ZERO, 8, 64).unwrap();
        assert!(sums.iter().all(|s| *s == 0.0), "polar annuli must vanish");
    }

    #[test]
    fn zero_truncation_is_error() {
        let d = domains::unit_disk();
        assert!(wiener_sum(&d, PlanarPoint::new(1.0, 0.0), 0, 64).is_err());
    }

    #[test]
    fn zwonek_sum_grows_toward_boundary() {
        let d = domains::unit_disk();
        let far = zwonek_sum(&d, PlanarPoint::ZERO, 8, 64).unwrap();
        let near = zwonek_sum(&d, PlanarPoint::new(0.9, 0.0), 8, 64).unwrap();
        assert!(near > 4.0 * far, "near {near} vs far {far}");
    }
}
