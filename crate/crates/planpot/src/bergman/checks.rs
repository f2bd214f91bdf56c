use super::model::BergmanModel;
use crate::capacity::log_capacity;
use crate::error::{Error, Result};
use crate::geometry::PlanarPoint;
use crate::potential::green_function;
use std::f64::consts::PI;

/// Simply-connected kernel bound: returns `min 16 pi K(z) delta(z)^2` over the
/// samples, which the Koebe-type estimate keeps at or above 1.
pub fn check_sc_bound(model: &BergmanModel, samples: &[PlanarPoint]) -> Result<f64> {
    if !model.domain.obstacles.is_empty() {
        return Err(Error::Precondition(
            "simply-connected bound needs a hole-free domain".into(),
        ));
    }
    let mut worst = f64::INFINITY;
    for &z in samples {
        let k = model.kernel_diag(z)?;
        let d = model.domain.boundary_distance(z)?;
        worst = worst.min(16.0 * PI * k * d * d);
    }
    if !worst.is_finite() {
        return Err(Error::Numeric("no valid samples".into()));
    }
    Ok(worst)
}

/// Sublevel-set kernel bound `K(z) >= C / |{g(., z) <= -c}|`: returns the
/// product `K(z) * area` whose positivity and stability across samples is the
/// calibrated form of the bound.
pub fn green_to_kernel_bound(
    model: &BergmanModel,
    z: PlanarPoint,
    c: f64,
    h: f64,
) -> Result<(f64, f64, f64)> {
    let g = green_function(&model.domain, z, h)?;
    let mut cells = 0usize;
    for j in 0..g.ny {
        for i in 0..g.nx {
            if let Some(v) = g.get(i, j) {
                if v <= -c {
                    cells += 1;
                }
            }
        }
    }
    let area = cells as f64 * h * h;
    let k = model.kernel_diag(z)?;
    Ok((k * area, area, k))
}

/// Capacity-weighted kernel lower bound at `z`:
/// `lhs = K(z)`, `rhs = (alpha delta)^-2 / (-log C_l(B(z, alpha delta) ∩ complement))`
/// with unit constant; callers fit and track the constant per family.
pub fn zwonek_bound(
    model: &BergmanModel,
    z: PlanarPoint,
    alpha: f64,
    cap_points: usize,
) -> Result<(f64, f64)> {
    let delta = model.domain.boundary_distance(z)?;
    let r = alpha * delta;
    if r > 0.5 {
        return Err(Error::Precondition(format!(
            "alpha delta = {r:.3e} exceeds 1/2"
        )));
    }
    let trace = model.domain.complement_trace_scaled(z, r);
    let cap = log_capacity(&trace, cap_points)?;
    let log_cl = if cap.cap == 0.0 {
        f64::NEG_INFINITY
    } else {
        cap.log_cap + r.ln()
    };
    if log_cl >= 0.0 {
        return Err(Error::Numeric("complement capacity not below 1".into()));
    }
    let rhs = if log_cl == f64::NEG_INFINITY {
        0.0
    } else {
        1.0 / (r * r * (-log_cl))
    };
    let lhs = model.kernel_diag(z)?;
    Ok((lhs, rhs))
}

/// Row of the capacity-hypothesis kernel check.
#[derive(Debug, Clone, Copy)]
pub struct CapConditionRow {
    pub z: PlanarPoint,
    pub delta: f64,
    pub scaled_cap: f64,
    pub hypothesis_holds: bool,
    pub k_delta_sq: f64,
}

/// For each sample: tests `C_l(B(z, alpha delta) ∩ complement) >= eps delta`
/// via the scaled trace capacity, and reports `K(z) delta^2` for the samples
/// that pass.
pub fn cap_condition_kernel_check(
    model: &BergmanModel,
    alpha: f64,
    eps: f64,
    samples: &[PlanarPoint],
    cap_points: usize,
) -> Result<Vec<CapConditionRow>> {
    if !(alpha > 1.0) {
        return Err(Error::Precondition("alpha must exceed 1".into()));
    }
    let mut rows = Vec::with_capacity(samples.len());
    for &z in samples {
        let delta = model.domain.boundary_distance(z)?;
        let r = alpha * delta;
        let trace = model.domain.complement_trace_scaled(z, r);
        let cap = log_capacity(&trace, cap_points)?;
        // scaled cap is C_l(trace)/r; hypothesis asks C_l >= eps delta
        let scaled = cap.cap;
        let hypothesis_holds = scaled * r >= eps * delta;
        let k = model.kernel_diag(z)?;
        rows.push(CapConditionRow {
            z,
            delta,
            scaled_cap: scaled,
            hypothesis_holds,
            k_delta_sq: k * delta * delta,
        });
    }
    Ok(rows)
}
