use super::solver::{solve, BoundaryValue, DirichletSpec, GridField, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{discretize_compact, CompactSet, Domain, PlanarPoint};

/// Constant boundary values per feature, in domain order.
#[derive(Debug, Clone)]
pub struct BoundaryConstants {
    pub ambient: f64,
    pub obstacles: Vec<f64>,
}

/// Perron-style Dirichlet solve with constant per-feature data.
pub fn solve_dirichlet(domain: &Domain, values: &BoundaryConstants, h: f64) -> Result<GridField> {
    if values.obstacles.len() != domain.obstacles.len() {
        return Err(Error::Config(format!(
            "boundary values given for {} obstacles, domain has {}",
            values.obstacles.len(),
            domain.obstacles.len()
        )));
    }
    let spec = DirichletSpec {
        ambient: BoundaryValue::Const(values.ambient),
        obstacles: values.obstacles.iter().map(|v| BoundaryValue::Const(*v)).collect(),
        extra: vec![],
    };
    let rep = solve(domain, &spec, h, &SolverOptions::default())?;
    Ok(rep.field)
}

/// Harmonic corrector of the Green pole: solves `H` with boundary data
/// `-ln|zeta - w|`; the Green function is `ln|z - w| + H(z)`.
pub fn harmonic_corrector(
    domain: &Domain,
    w: PlanarPoint,
    h: f64,
    opts: &SolverOptions,
) -> Result<super::solver::SolveReport> {
    let data = move |zeta: PlanarPoint| -(zeta.dist(w).max(1e-300)).ln();
    let spec = DirichletSpec::uniform(domain, BoundaryValue::Func(&data));
    solve(domain, &spec, h, opts)
}

/// Green function `g(., w)` of the domain on a grid of spacing `h`; the pole
/// needs clearance `4h` from the boundary.
pub fn green_function(domain: &Domain, w: PlanarPoint, h: f64) -> Result<GridField> {
    let delta = domain.boundary_distance(w)?;
    if delta < 4.0 * h {
        return Err(Error::Precondition(format!(
            "pole clearance {delta:.3e} below 4h = {:.3e}",
            4.0 * h
        )));
    }
    let rep = harmonic_corrector(domain, w, h, &SolverOptions::default())?;
    let mut field = rep.field;
    let (nx, ny) = (field.nx, field.ny);
    for j in 0..ny {
        for i in 0..nx {
            let q = field.idx(i, j);
            if field.values[q].is_finite() {
                let z = field.center(i, j);
                field.values[q] = ((z.dist(w).max(1e-300)).ln() + field.values[q]).min(0.0);
            }
        }
    }
    Ok(field)
}

/// Capacity potential of `K` relative to the domain: 1 on `K`, 0 on the
/// domain boundary, harmonic between; clamped to `[0, 1]`.
pub fn capacity_potential(k: &CompactSet, domain: &Domain, h: f64) -> Result<GridField> {
    Ok(capacity_potential_full(k, domain, h)?.0)
}

/// Capacity potential together with its grid Dirichlet energy.
pub fn capacity_potential_full(
    k: &CompactSet,
    domain: &Domain,
    h: f64,
) -> Result<(GridField, f64)> {
    ensure_clearance(k, domain, h)?;
    let spec = DirichletSpec {
        ambient: BoundaryValue::Const(0.0),
        obstacles: domain.obstacles.iter().map(|_| BoundaryValue::Const(0.0)).collect(),
        extra: vec![(k, BoundaryValue::Const(1.0))],
    };
    let rep = solve(domain, &spec, h, &SolverOptions::default())?;
    Ok((
        rep.field.map_values(|v| v.clamp(0.0, 1.0)),
        rep.dirichlet_energy,
    ))
}

/// Green potential `p_mu(z) = sum w_k g(z, x_k)` of a discrete measure,
/// computed with a single corrector solve.
pub fn green_potential(
    mu: &crate::capacity::DiscreteMeasure,
    domain: &Domain,
    h: f64,
) -> Result<GridField> {
    mu.validate()?;
    for x in &mu.support {
        let d = domain.boundary_distance(*x)?;
        if d < 4.0 * h {
            return Err(Error::Precondition(format!(
                "support clearance {d:.3e} below 4h"
            )));
        }
    }
    let support = mu.support.clone();
    let weights = mu.weights.clone();
    let log_sum = move |zeta: PlanarPoint| -> f64 {
        support
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * (zeta.dist(*x).max(1e-300)).ln())
            .sum()
    };
    let data = move |zeta: PlanarPoint| -log_sum(zeta);
    let spec = DirichletSpec::uniform(domain, BoundaryValue::Func(&data));
    let rep = solve(domain, &spec, h, &SolverOptions::default())?;
    let mut field = rep.field;
    for j in 0..field.ny {
        for i in 0..field.nx {
            let q = field.idx(i, j);
            if field.values[q].is_finite() {
                let z = field.center(i, j);
                let ls: f64 = mu
                    .support
                    .iter()
                    .zip(&mu.weights)
                    .map(|(x, w)| w * (z.dist(*x).max(1e-300)).ln())
                    .sum();
                field.values[q] = (ls + field.values[q]).min(0.0);
            }
        }
    }
    Ok(field)
}

pub(crate) fn ensure_clearance(k: &CompactSet, domain: &Domain, h: f64) -> Result<()> {
    let probes = if k.is_polar() {
        k.primitives.iter().flat_map(|p| p.points()).collect::<Vec<_>>()
    } else {
        discretize_compact(k, 32.max(k.primitives.len() * 8))?
            .into_iter()
            .map(|p| p.pos)
            .collect()
    };
    for p in probes {
        let d = domain.boundary_distance(p)?;
        if d < 4.0 * h {
            return Err(Error::Precondition(format!(
                "compact set clearance {d:.3e} below 4h = {:.3e}",
                4.0 * h
            )));
        }
    }
    Ok(())
}
