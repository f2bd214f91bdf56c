use super::energy::maximize_on_simplex;
use super::logcap::{energy_matrix, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::geometry::{discretize_compact, CompactSet, Domain, PlanarPoint};
use crate::potential::{prepare, BoundaryValue, DirichletSpec, SolverOptions};
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Green capacity `C_g = exp(I(mu_max))` with the data needed to check the
/// sandwich `log C_l - log R <= log C_g <= log C_l - log d` at the discrete
/// level: `r_hat`/`d_hat` are the extreme pole-to-boundary-data distances the
/// solves actually used.
#[derive(Debug, Clone)]
pub struct GreenCapacityReport {
    pub cap: f64,
    pub green_energy: f64,
    pub measure: DiscreteMeasure,
    pub log_cap_l: f64,
    pub log_r_hat: f64,
    pub log_d_hat: f64,
}

/// Maximizes the discrete Green energy over probability measures on `K`.
/// Kernel values come from one harmonic-corrector solve per support point;
/// the smooth corrector is symmetrized across the pair.
pub fn green_capacity(
    k: &CompactSet,
    domain: &Domain,
    h: f64,
    n: usize,
) -> Result<GreenCapacityReport> {
    let points = discretize_compact(k, n)?;
    for p in &points {
        let d = domain.boundary_distance(p.pos)?;
        if d < 4.0 * h {
            return Err(Error::Precondition(format!(
                "support clearance {d:.3e} below 4h = {:.3e}",
                4.0 * h
            )));
        }
    }
    let m = points.len();
    let opts = SolverOptions {
        rtol: 1e-9,
        ..SolverOptions::default()
    };
    // one assembly, one corrector solve per support point
    let prepared = prepare(domain, &[], h)?;
    let solves: Vec<_> = points
        .par_iter()
        .map(|p| {
            let pole = p.pos;
            let data = move |zeta: PlanarPoint| -(zeta.dist(pole).max(1e-300)).ln();
            let spec = DirichletSpec::uniform(domain, BoundaryValue::Func(&data));
            prepared.run(&spec, &opts)
        })
        .collect::<Result<Vec<_>>>()?;

    // log-kernel part plus symmetrized corrector
    let mut a = energy_matrix(&points);
    let mut log_r_hat = f64::NEG_INFINITY;
    let mut log_d_hat = f64::INFINITY;
    for i in 0..m {
        // data = -ln|zeta - x_i|: data_min corresponds to the farthest, the
        // max to the nearest boundary point used
        log_r_hat = log_r_hat.max(-solves[i].data_min);
        log_d_hat = log_d_hat.min(-solves[i].data_max);
        let hi_at_i = solves[i].field.bilinear(points[i].pos).ok_or_else(|| {
            Error::Numeric("corrector not defined at its own pole cell".into())
        })?;
        a[(i, i)] += hi_at_i;
        for j in 0..i {
            let hij = solves[i].field.bilinear(points[j].pos);
            let hji = solves[j].field.bilinear(points[i].pos);
            let hsym = match (hij, hji) {
                (Some(x), Some(y)) => 0.5 * (x + y),
                _ => return Err(Error::Numeric("corrector interpolation failed".into())),
            };
            a[(i, j)] += hsym;
            a[(j, i)] += hsym;
        }
    }
    let sol = maximize_on_simplex(&a)?;
    if sol.kkt_residual > 1e-8 {
        return Err(Error::Numeric(format!(
            "Green energy KKT residual {:.2e} exceeds 1e-8",
            sol.kkt_residual
        )));
    }
    let green_energy = sol.value;

    // logarithmic capacity on the same discretization, for the sandwich
    let log_sol = maximize_on_simplex(&energy_matrix(&points))?;

    Ok(GreenCapacityReport {
        cap: green_energy.exp(),
        green_energy,
        measure: DiscreteMeasure {
            support: points.iter().map(|p| p.pos).collect(),
            weights: sol.weights,
            self_spacings: points.iter().map(|p| p.spacing).collect(),
        },
        log_cap_l: log_sol.value,
        log_r_hat,
        log_d_hat,
    })
}

/// Dirichlet capacity by two routes: the bridge `-2pi / log C_g` (primary)
/// and the grid Dirichlet energy of the capacity potential.
#[derive(Debug, Clone)]
pub struct DirichletCapacityReport {
    pub bridge: f64,
    pub energy_route: f64,
    pub rel_gap: f64,
    pub green: GreenCapacityReport,
}

pub fn dirichlet_capacity(
    k: &CompactSet,
    domain: &Domain,
    h: f64,
    n: usize,
) -> Result<DirichletCapacityReport> {
    let green = green_capacity(k, domain, h, n)?;
    if green.green_energy >= 0.0 {
        return Err(Error::Numeric(
            "Green energy must be negative for the capacity bridge".into(),
        ));
    }
    let bridge = -TAU / green.green_energy;
    let (_, energy_route) = crate::potential::capacity_potential_full(k, domain, h)?;
    let rel_gap = (bridge - energy_route).abs() / bridge.max(1e-300);
    Ok(DirichletCapacityReport {
        bridge,
        energy_route,
        rel_gap,
        green,
    })
}

/// Monotonicity helper used by invariants: `K1 ⊆ K2`, `domain1 ⊇ domain2`
/// implies `C_d(K1, domain1) <= C_d(K2, domain2)`.
pub fn dirichlet_monotone_pair(
    k1: &CompactSet,
    d1: &Domain,
    k2: &CompactSet,
    d2: &Domain,
    h: f64,
    n: usize,
) -> Result<(f64, f64)> {
    let a = dirichlet_capacity(k1, d1, h, n)?;
    let b = dirichlet_capacity(k2, d2, h, n)?;
    Ok((a.bridge, b.bridge))
}
