use crate::capacity::log_capacity;
use crate::error::{Error, Result};
use crate::geometry::{Domain, PlanarPoint};
use rayon::prelude::*;

/// Parameters of the capacity-density scan.
#[derive(Debug, Clone, Copy)]
pub struct DensityParams {
    pub eps: f64,
    pub lambda: f64,
    /// Threshold exponent: qualify when `C_l(K_t) >= eps t^gamma`; the
    /// harmonic-sum normalization engages whenever `gamma` is set.
    pub gamma: Option<f64>,
    pub n_max: u32,
    pub n_disc: usize,
    pub tol_bnd: f64,
}

impl Default for DensityParams {
    fn default() -> Self {
        Self {
            eps: (-12.0f64).exp2(),
            lambda: 0.5,
            gamma: None,
            n_max: 24,
            n_disc: 96,
            tol_bnd: 0.5 / 1024.0,
        }
    }
}

/// Scale-by-scale qualification record at one boundary point.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub a: PlanarPoint,
    pub eps: f64,
    pub lambda: f64,
    pub gamma: Option<f64>,
    pub n_max: u32,
    /// qualifying scales, 1-based
    pub qualifying: Vec<u32>,
    /// density sequence d_n: counting density, or the harmonic-sum density
    /// when gamma is set
    pub d_seq: Vec<f64>,
    /// natural-log capacities of the renormalized traces per scale
    pub log_caps_scaled: Vec<f64>,
    /// conservative liminf estimate: minimum over the tail window
    pub liminf_estimate: f64,
}

impl DensityProfile {
    pub fn qualifies(&self, n: u32) -> bool {
        self.qualifying.binary_search(&n).is_ok()
    }
}

fn tail_min(d_seq: &[f64], n_max: u32) -> f64 {
    let lo = (n_max / 2).max(1) as usize;
    d_seq[lo - 1..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Scans the scales `t = lambda^n`, `n = 1..=n_max`: computes the capacity of
/// the renormalized boundary trace at each scale and compares against the
/// threshold `eps` (or `eps lambda^((gamma-1) n)` with the gamma variant).
/// All comparisons happen in log space.
pub fn density_profile(domain: &Domain, a: PlanarPoint, params: &DensityParams) -> Result<DensityProfile> {
    if !domain.is_boundary_point(a, params.tol_bnd) {
        return Err(Error::Precondition(format!(
            "({}, {}) is {:.3e} from the boundary (tol {:.3e})",
            a.re,
            a.im,
            domain.boundary_feature_distance(a),
            params.tol_bnd
        )));
    }
    if !(params.lambda > 0.0 && params.lambda < 1.0) {
        return Err(Error::Config("lambda must lie in (0,1)".into()));
    }
    if !(params.eps > 0.0) {
        return Err(Error::Config("eps must be positive".into()));
    }
    if params.n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    let ln_lambda = params.lambda.ln();
    let ln_eps = params.eps.ln();
    let mut qualifying = Vec::new();
    let mut log_caps = Vec::with_capacity(params.n_max as usize);
    for n in 1..=params.n_max {
        let t = (n as f64 * ln_lambda).exp();
        let trace = domain.complement_trace_scaled(a, t);
        let rep = log_capacity(&trace, params.n_disc)?;
        log_caps.push(rep.log_cap);
        // C_l(K_t) >= eps t^gamma  <=>  log cap_scaled >= log eps + (gamma-1) n log lambda
        let threshold = match params.gamma {
            Some(g) => ln_eps + (g - 1.0) * n as f64 * ln_lambda,
            None => ln_eps,
        };
        if rep.log_cap >= threshold {
            qualifying.push(n);
        }
    }
    let d_seq = density_sequence(&qualifying, params.n_max, params.gamma.is_some());
    let liminf_estimate = tail_min(&d_seq, params.n_max);
    Ok(DensityProfile {
        a,
        eps: params.eps,
        lambda: params.lambda,
        gamma: params.gamma,
        n_max: params.n_max,
        qualifying,
        d_seq,
        log_caps_scaled: log_caps,
        liminf_estimate,
    })
}

/// Counting density `|N ∩ [1..n]| / n`, or the harmonic-sum density
/// `sum_(k in N, k<=n) 1/k / log n` under the gamma convention.
pub fn density_sequence(qualifying: &[u32], n_max: u32, harmonic: bool) -> Vec<f64> {
    let mut d = Vec::with_capacity(n_max as usize);
    let mut count = 0usize;
    let mut hsum = 0.0f64;
    let mut it = qualifying.iter().peekable();
    for n in 1..=n_max {
        while let Some(&&k) = it.peek() {
            if k <= n {
                count += 1;
                hsum += 1.0 / k as f64;
                it.next();
            } else {
                break;
            }
        }
        if harmonic {
            let ln_n = (n as f64).ln();
            d.push(if ln_n > 0.0 { hsum / ln_n } else { 0.0 });
        } else {
            d.push(count as f64 / n as f64);
        }
    }
    d
}

/// Weak and strong density estimates over a boundary sample: the weak index
/// counts the per-point worst case at each n, the strong one counts the
/// scales every sampled point qualifies at.
#[derive(Debug, Clone)]
pub struct WeakStrongDensity {
    pub d_weak: f64,
    pub d_strong: f64,
    pub weak_seq: Vec<f64>,
    pub strong_seq: Vec<f64>,
    pub profiles: Vec<DensityProfile>,
}

pub fn weak_strong_density(
    domain: &Domain,
    boundary_sample: &[PlanarPoint],
    params: &DensityParams,
) -> Result<WeakStrongDensity> {
    if boundary_sample.is_empty() {
        return Err(Error::Config("boundary sample must be nonempty".into()));
    }
    let profiles: Vec<DensityProfile> = boundary_sample
        .par_iter()
        .map(|a| density_profile(domain, *a, params))
        .collect::<Result<Vec<_>>>()?;
    let n_max = params.n_max;
    let harmonic = params.gamma.is_some();
    // strong: intersection of qualifying sets
    let strong_set: Vec<u32> = (1..=n_max)
        .filter(|n| profiles.iter().all(|p| p.qualifies(*n)))
        .collect();
    let strong_seq = density_sequence(&strong_set, n_max, harmonic);
    // weak: worst per-point density at each n
    let mut weak_seq = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as usize {
        let w = profiles
            .iter()
            .map(|p| p.d_seq[n - 1])
            .fold(f64::INFINITY, f64::min);
        weak_seq.push(w);
    }
    Ok(WeakStrongDensity {
        d_weak: tail_min(&weak_seq, n_max),
        d_strong: tail_min(&strong_seq, n_max),
        weak_seq,
        strong_seq,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domains;

    #[test]
    fn slit_disk_every_scale_qualifies() {
        let d = domains::slit_disk();
        let params = DensityParams {
            eps: 0.125,
            lambda: 0.5,
            n_max: 16,
            ..Default::default()
        };
        let p = density_profile(&d, PlanarPoint::ZERO, &params).unwrap();
        assert_eq!(p.qualifying.len(), 16, "qualifying: {:?}", p.qualifying);
        assert!((p.liminf_estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn punctured_disk_nothing_qualifies() {
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
        let p = density_profile(&d, PlanarPoint::ZERO, &DensityParams::default()).unwrap();
        assert!(p.qualifying.is_empty());
        assert_eq!(p.liminf_estimate, 0.0);
    }

    #[test]
    fn interior_point_rejected() {
        let d = domains::unit_disk();
        assert!(density_profile(&d, PlanarPoint::new(0.2, 0.0), &DensityParams::default()).is_err());
    }

    #[test]
    fn antitone_in_eps() {
        let d = domains::carleson_totik(4);
        let mut p_small = DensityParams::default();
        p_small.eps = (-14.0f64).exp2();
        p_small.n_max = 20;
        let mut p_big = p_small;
        p_big.eps = (-6.0f64).exp2();
        let small = density_profile(&d, PlanarPoint::ZERO, &p_small).unwrap();
        let big = density_profile(&d, PlanarPoint::ZERO, &p_big).unwrap();
        for n in &big.qualifying {
            assert!(
                small.qualifying.contains(n),
                "qualifying at eps-big must qualify at eps-small (n = {n})"
            );
        }
    }

    #[test]
    fn gamma_profile_on_comb_hits_full_density() {
        let d = domains::comb(0.5, 2.0, 40);
        let params = DensityParams {
            eps: 1.0 / 64.0,
            lambda: 0.5,
            gamma: Some(2.0),
            n_max: 24,
            ..Default::default()
        };
        let p = density_profile(&d, PlanarPoint::ZERO, &params).unwrap();
        // teeth make C_l(K_t) ~ t^gamma/4: all scales qualify at eps = 1/64
        assert!(
            p.qualifying.len() >= 22,
            "qualifying scales: {:?}",
            p.qualifying
        );
        // harmonic-sum density tends to 1
        assert!(p.liminf_estimate > 0.7, "estimate {}", p.liminf_estimate);
    }

    #[test]
    fn scaling_invariance_of_profiles() {
        use crate::geometry::{Ambient, ObstaclePrimitive};
        // same slit geometry, 10x scale: identical qualification pattern
        let scaled = crate::geometry::Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 10.0,
            },
            vec![ObstaclePrimitive::Segment {
                a: PlanarPoint::ZERO,
                b: PlanarPoint::new(10.0, 0.0),
            }],
            PlanarPoint::new(-5.0, 0.0),
        )
        .unwrap();
        let base = domains::slit_disk();
        let params = DensityParams {
            eps: 0.125,
            lambda: 0.5,
            n_max: 12,
            ..Default::default()
        };
        let p0 = density_profile(&base, PlanarPoint::ZERO, &params).unwrap();
        // scales for the large domain shift by log_lambda(10) ~ -3.32; compare
        // the common range instead of absolute indices
        let p1 = density_profile(&scaled, PlanarPoint::ZERO, &params).unwrap();
        assert_eq!(p0.qualifying.len(), 12);
        assert_eq!(p1.qualifying.len(), 12);
    }
}
