use super::energy::maximize_on_simplex;
use crate::error::{Error, Result};
use crate::geometry::{discretize_compact, CompactSet, PlanarPoint, SupportPoint};
use nalgebra::DMatrix;
use std::f64::consts::TAU;

/// A discrete probability measure with the local spacings of its support.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub support: Vec<PlanarPoint>,
    pub weights: Vec<f64>,
    pub self_spacings: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.support.len() != self.weights.len() || self.support.len() != self.self_spacings.len()
        {
            return Err(Error::Numeric("measure arrays must have equal length".into()));
        }
        let s: f64 = self.weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 || self.weights.iter().any(|w| *w < 0.0) {
            return Err(Error::Numeric(format!(
                "weights must be nonnegative and sum to 1 (sum = {s})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMethod {
    Energy,
    Fekete,
}

/// Logarithmic capacity with its natural-log value; `cap = 0` is encoded by
/// the `-inf` sentinel in `log_cap` (polar sets are legitimate inputs whose
/// Wiener terms vanish).
#[derive(Debug, Clone)]
pub struct CapacityReport {
    pub log_cap: f64,
    pub cap: f64,
    pub method: CapacityMethod,
    pub point_count: usize,
    pub err_estimate: f64,
}

impl CapacityReport {
    pub fn polar(method: CapacityMethod) -> Self {
        Self {
            log_cap: f64::NEG_INFINITY,
            cap: 0.0,
            method,
            point_count: 0,
            err_estimate: 0.0,
        }
    }
}

/// Energy matrix of a discretized set: off-diagonal `ln|x_i - x_j|`, diagonal
/// `ln(s_i / 2pi)`. The diagonal is the periodic-quadrature self-energy of a
/// cell of arclength `s_i`; it reproduces closed-curve capacities exactly in
/// the uniform limit.
pub fn energy_matrix(points: &[SupportPoint]) -> DMatrix<f64> {
    let n = points.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = (points[i].spacing / TAU).max(1e-300).ln();
        for j in 0..i {
            let d = points[i].pos.dist(points[j].pos).max(1e-300);
            let v = d.ln();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Equilibrium measure of a compact set: maximizes the discrete logarithmic
/// energy over the probability simplex; KKT residual <= 1e-8.
pub fn equilibrium_measure(k: &CompactSet, n: usize) -> Result<DiscreteMeasure> {
    let points = discretize_compact(k, n)?;
    let a = energy_matrix(&points);
    let sol = maximize_on_simplex(&a)?;
    if sol.kkt_residual > 1e-8 {
        return Err(Error::Numeric(format!(
            "KKT residual {:.2e} exceeds 1e-8",
            sol.kkt_residual
        )));
    }
    Ok(DiscreteMeasure {
        support: points.iter().map(|p| p.pos).collect(),
        weights: sol.weights,
        self_spacings: points.iter().map(|p| p.spacing).collect(),
    })
}

/// Logarithmic capacity via the energy route, computed at normalized scale
/// and rescaled by the scaling law `C_l(sK) = s C_l(K)`.
pub fn log_capacity(k: &CompactSet, n: usize) -> Result<CapacityReport> {
    if k.is_empty() || k.is_polar() {
        return Ok(CapacityReport::polar(CapacityMethod::Energy));
    }
    let normalized = k.transform(k.center, 1.0 / k.bounding_radius);
    let solve_at = |m: usize| -> Result<(f64, usize)> {
        let points = discretize_compact(&normalized, m)?;
        let a = energy_matrix(&points);
        let sol = maximize_on_simplex(&a)?;
        Ok((sol.value, points.len()))
    };
    let (e_n, count) = solve_at(n)?;
    let err_estimate = if n >= 32 {
        let (e_half, _) = solve_at(n / 2)?;
        (e_n - e_half).abs()
    } else {
        0.0
    };
    let log_cap = e_n + k.bounding_radius.ln();
    Ok(CapacityReport {
        log_cap,
        cap: log_cap.exp(),
        method: CapacityMethod::Energy,
        point_count: count,
        err_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CompactSet, LogInterval, ObstaclePrimitive, PlanarPoint};

    #[test]
    fn unit_circle_capacity_is_one() {
        let k = CompactSet::disk(PlanarPoint::ZERO, 1.0);
        let rep = log_capacity(&k, 128).unwrap();
        assert!(
            (rep.cap - 1.0).abs() < 1e-3,
            "cap(unit disk) = {} should be 1",
            rep.cap
        );
    }

    #[test]
    fn uniform_weights_on_circle() {
        let k = CompactSet::disk(PlanarPoint::ZERO, 1.0);
        let mu = equilibrium_measure(&k, 128).unwrap();
        mu.validate().unwrap();
        let expect = 1.0 / 128.0;
        for w in &mu.weights {
            assert!((w - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn segment_capacity_quarter_length() {
        // cap([a, a+L]) = L/4; length 4 -> capacity 1
        let k = CompactSet::segment(PlanarPoint::new(-2.0, 0.0), PlanarPoint::new(2.0, 0.0));
        let rep = log_capacity(&k, 200).unwrap();
        assert!(
            (rep.cap - 1.0).abs() < 1e-2,
            "cap(segment length 4) = {}",
            rep.cap
        );
    }

    #[test]
    fn single_point_is_polar() {
        let k = CompactSet::from_pieces(vec![ObstaclePrimitive::PointCloud {
            points: vec![PlanarPoint::new(0.3, 0.1)],
        }]);
        let rep = log_capacity(&k, 64).unwrap();
        assert_eq!(rep.cap, 0.0);
        assert!(rep.log_cap == f64::NEG_INFINITY);
    }

    #[test]
    fn symmetric_disks_symmetric_weights() {
        let k = CompactSet::from_pieces(vec![
            ObstaclePrimitive::Disk {
                center: PlanarPoint::new(-0.6, 0.0),
                radius: 0.3,
            },
            ObstaclePrimitive::Disk {
                center: PlanarPoint::new(0.6, 0.0),
                radius: 0.3,
            },
        ]);
        let mu = equilibrium_measure(&k, 128).unwrap();
        let m = mu.len() / 2;
        // the swap z -> -z maps point i of the first circle to point
        // (i + m/2) mod m of the second
        for i in 0..m {
            let j = m + (i + m / 2) % m;
            assert!(
                (mu.weights[i] - mu.weights[j]).abs() < 1e-8,
                "weights {} vs {}",
                mu.weights[i],
                mu.weights[j]
            );
        }
    }

    #[test]
    fn arcsine_density_on_segment() {
        // bin the equilibrium weights of [-1,1] against the arcsine law
        let k = CompactSet::segment(PlanarPoint::new(-1.0, 0.0), PlanarPoint::new(1.0, 0.0));
        let mu = equilibrium_measure(&k, 200).unwrap();
        let bins = 10usize;
        let mut got = vec![0.0f64; bins];
        for (p, w) in mu.support.iter().zip(&mu.weights) {
            let b = (((p.re + 1.0) / 2.0) * bins as f64).floor().clamp(0.0, bins as f64 - 1.0);
            got[b as usize] += w;
        }
        // interior bins only: arcsine mass of [a,b] is (asin(b)-asin(a))/pi
        for b in 2..bins - 2 {
            let a0 = -1.0 + 2.0 * b as f64 / bins as f64;
            let a1 = a0 + 2.0 / bins as f64;
            let expect = (a1.asin() - a0.asin()) / std::f64::consts::PI;
            assert!(
                (got[b] - expect).abs() / expect < 0.05,
                "bin {b}: got {} expect {}",
                got[b],
                expect
            );
        }
    }

    #[test]
    fn scaling_covariance_via_renormalization() {
        let base = CompactSet::segment(PlanarPoint::new(0.0, 0.0), PlanarPoint::new(1.0, 0.0));
        let scaled = base.transform(PlanarPoint::ZERO, 10.0);
        let c1 = log_capacity(&base, 96).unwrap();
        let c2 = log_capacity(&scaled, 96).unwrap();
        assert!(
            ((c2.cap / c1.cap) - 10.0).abs() < 1e-6 * 10.0,
            "scaling law violated: {} vs {}",
            c2.cap,
            10.0 * c1.cap
        );
    }

    #[test]
    fn log_space_family_capacity_bounds() {
        // renormalized CT-style family: biggest piece dominates
        let fam = CompactSet::from_pieces(vec![ObstaclePrimitive::IntervalFamily {
            origin: PlanarPoint::ZERO,
            intervals: vec![
                LogInterval::from_log2(-23.0, -7.0).unwrap(),
                LogInterval::from_log2(-120.0, -60.0).unwrap(),
            ],
        }]);
        let rep = log_capacity(&fam, 96).unwrap();
        // contained in [0, 2^-7] so cap <= 2^-9; contains [2^-23, 2^-7] so
        // cap >= (2^-7 - 2^-23)/4
        let lo = ((-7.0f64).exp2() - (-23.0f64).exp2()) / 4.0;
        let hi = (-9.0f64).exp2();
        assert!(rep.cap >= lo * 0.9, "cap {} below {lo}", rep.cap);
        assert!(rep.cap <= hi * 1.1, "cap {} above {hi}", rep.cap);
    }
}
