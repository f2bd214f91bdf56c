use crate::error::Result;
use crate::geometry::{discretize_compact, CompactSet, PlanarPoint};
use rayon::prelude::*;

/// Transfinite diameter `d_n = (prod |x_i - x_j|)^(2/(n(n-1)))` after greedy
/// Fekete-point exchange over a discretized candidate pool. Independent of the
/// energy route; classical oracle for the logarithmic capacity.
pub fn transfinite_diameter(k: &CompactSet, n: usize) -> Result<f64> {
    if k.is_empty() || k.is_polar() {
        return Ok(0.0);
    }
    let normalized = k.transform(k.center, 1.0 / k.bounding_radius);
    let pool_size = (4 * n).clamp(512, 2048);
    let pool: Vec<PlanarPoint> = discretize_compact(&normalized, pool_size)?
        .into_iter()
        .map(|p| p.pos)
        .collect();
    let n = n.min(pool.len());
    let mut pts: Vec<PlanarPoint> = (0..n)
        .map(|i| pool[i * pool.len() / n])
        .collect();

    // greedy exchange: move each point to the pool position maximizing the
    // product of distances to the others; 50 sweeps cap
    for _sweep in 0..50 {
        let mut improved = false;
        for i in 0..n {
            let cur = score(&pts, i, pts[i]);
            let best = pool
                .par_iter()
                .enumerate()
                .map(|(q, &z)| (score(&pts, i, z), q))
                .reduce(
                    || (f64::NEG_INFINITY, usize::MAX),
                    |a, b| {
                        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                            b
                        } else {
                            a
                        }
                    },
                );
            if best.0 > cur + 1e-13 && best.1 != usize::MAX {
                pts[i] = pool[best.1];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    let mut logsum = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            logsum += pts[i].dist(pts[j]).max(1e-300).ln();
        }
    }
    let log_d = 2.0 * logsum / (n as f64 * (n as f64 - 1.0));
    Ok(log_d.exp() * k.bounding_radius)
}

fn score(pts: &[PlanarPoint], skip: usize, z: PlanarPoint) -> f64 {
    let mut s = 0.0f64;
    for (j, p) in pts.iter().enumerate() {
        if j == skip {
            continue;
        }
        let d = p.dist(z);
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        s += d.ln();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CompactSet;

    #[test]
    fn circle_matches_roots_of_unity_value() {
        // the optimal configuration on the circle gives d_n = n^(1/(n-1))
        let k = CompactSet::disk(PlanarPoint::ZERO, 1.0);
        let n = 64;
        let d = transfinite_diameter(&k, n).unwrap();
        let theory = (n as f64).powf(1.0 / (n as f64 - 1.0));
        assert!(
            (d - theory).abs() / theory < 5e-3,
            "d_n = {d}, roots-of-unity value {theory}"
        );
    }

    #[test]
    fn scaled_set_scales_exactly() {
        let k = CompactSet::segment(PlanarPoint::ZERO, PlanarPoint::new(1.0, 0.0));
        let k2 = k.transform(PlanarPoint::ZERO, 2.0);
        let d1 = transfinite_diameter(&k, 64).unwrap();
        let d2 = transfinite_diameter(&k2, 64).unwrap();
        assert!(
            (d2 - 2.0 * d1).abs() < 1e-12 * d2,
            "homogeneity: {d2} vs {}",
            2.0 * d1
        );
    }

    #[test]
    fn polar_set_is_zero() {
        let k = CompactSet::from_pieces(vec![crate::geometry::ObstaclePrimitive::PointCloud {
            points: vec![PlanarPoint::ZERO],
        }]);
        assert_eq!(transfinite_diameter(&k, 32).unwrap(), 0.0);
    }

    #[test]
    fn nonincreasing_under_refinement() {
        let k = CompactSet::segment(PlanarPoint::ZERO, PlanarPoint::new(4.0, 0.0));
        let d64 = transfinite_diameter(&k, 64).unwrap();
        let d128 = transfinite_diameter(&k, 128).unwrap();
        assert!(d128 <= d64 + 1e-3, "d_128 = {d128} > d_64 = {d64}");
    }
}
