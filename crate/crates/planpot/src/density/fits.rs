use crate::bergman::{BergmanModel, LogKernelGrid};
use crate::error::{Error, Result};
use crate::geometry::{Domain, PlanarPoint};
use crate::potential::green_function;

/// Least squares `y = slope x + intercept` with the coefficient of
/// determination.
pub fn linfit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// `-g ~ delta^beta`
    Power,
    /// `-g ~ (-log delta)^(-beta)`
    LogPower,
}

/// Fitted decay law of the Green function toward the boundary.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub model: DecayModel,
    pub exponent: f64,
    pub r2: f64,
    pub n_samples: usize,
    pub delta_range: (f64, f64),
}

/// Fits `-g(z, z0)` against the boundary distance along the given samples;
/// needs at least 12 samples spanning two decades of `delta`.
pub fn fit_green_decay(
    domain: &Domain,
    z0: PlanarPoint,
    model: DecayModel,
    samples: &[PlanarPoint],
    h: f64,
) -> Result<DecayFit> {
    let g = green_function(domain, z0, h)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0f64;
    for &z in samples {
        // snap to the nearest cell center so the probe and its distance agree
        let Some((i, j)) = g.nearest_inside_center(z) else {
            continue;
        };
        let zc = g.center(i, j);
        let delta = domain.boundary_distance(zc)?;
        let val = -g.get(i, j).unwrap_or(f64::NAN);
        if !(val > 0.0) || !(delta > 0.0) {
            continue;
        }
        dmin = dmin.min(delta);
        dmax = dmax.max(delta);
        match model {
            DecayModel::Power => {
                xs.push(delta.ln());
                ys.push(val.ln());
            }
            DecayModel::LogPower => {
                xs.push((-delta.ln()).ln());
                ys.push(val.ln());
            }
        }
    }
    if xs.len() < 12 {
        return Err(Error::Config(format!(
            "decay fit needs >= 12 usable samples, got {}",
            xs.len()
        )));
    }
    if dmax / dmin < 99.0 {
        return Err(Error::Config(format!(
            "decay fit needs >= 2 decades of delta, got [{dmin:.3e}, {dmax:.3e}]"
        )));
    }
    let (slope, _icept, r2) = linfit(&xs, &ys);
    let exponent = match model {
        DecayModel::Power => slope,
        DecayModel::LogPower => -slope,
    };
    Ok(DecayFit {
        model,
        exponent,
        r2,
        n_samples: xs.len(),
        delta_range: (dmin, dmax),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthLaw {
    /// `d_B ~ |log delta|`
    LogDelta,
    /// `d_B ~ |log delta| / log |log delta|`
    LogOverLogLog,
    /// `d_B ~ log log |log delta|`
    LogLogLog,
}

impl GrowthLaw {
    pub fn x(&self, delta: f64) -> f64 {
        let l = -delta.ln();
        match self {
            GrowthLaw::LogDelta => l,
            GrowthLaw::LogOverLogLog => l / l.ln().max(1e-9),
            GrowthLaw::LogLogLog => l.ln().max(1e-9).ln(),
        }
    }
}

/// Regression of the geodesic Bergman distance from the base point against a
/// growth law of the boundary distance.
#[derive(Debug, Clone)]
pub struct GrowthFit {
    pub law: GrowthLaw,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn distance_growth_check(
    model: &BergmanModel,
    mesh: &LogKernelGrid,
    z0: PlanarPoint,
    samples: &[PlanarPoint],
    law: GrowthLaw,
) -> Result<GrowthFit> {
    let dists = mesh.distances_from(z0)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut points = Vec::new();
    for &z in samples {
        let i = ((z.re - mesh.origin.re) / mesh.h).floor() as i64;
        let j = ((z.im - mesh.origin.im) / mesh.h).floor() as i64;
        if i < 0 || j < 0 || i as usize >= mesh.nx || j as usize >= mesh.ny {
            continue;
        }
        let q = j as usize * mesh.nx + i as usize;
        let d_b = dists[q];
        if !d_b.is_finite() {
            continue;
        }
        let zc = mesh.center(i as usize, j as usize);
        let delta = model.domain.boundary_distance(zc)?;
        if !(delta > 0.0) {
            continue;
        }
        let x = law.x(delta);
        xs.push(x);
        ys.push(d_b);
        points.push((x, d_b));
    }
    if xs.len() < 4 {
        return Err(Error::Config("growth fit needs at least 4 samples".into()));
    }
    let (slope, intercept, r2) = linfit(&xs, &ys);
    Ok(GrowthFit {
        law,
        slope,
        intercept,
        r2,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linfit_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let (m, b, r2) = linfit(&xs, &ys);
        assert!((m - 2.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
