//! The acceptance checks: each criterion exercises the toolkit end to end at
//! pinned grids and tolerances and reports one pass/fail line.

use crate::bergman::{
    build_bergman_model, green_to_kernel_bound, zwonek_bound, BasisSpec, LogKernelGrid,
};
use crate::capacity::{
    dirichlet_capacity, green_capacity, log_capacity, transfinite_diameter,
};
use crate::density::{
    chain_lower_bound, density_profile, fit_green_decay, linfit, weak_strong_density, DecayModel,
    DensityParams,
};
use crate::error::Result;
use crate::geometry::{domains, CompactSet, PlanarPoint};
use crate::potential::{
    capacity_potential, flux, green_potential, grigoryan_sandwich, potential_upper_bound, prepare,
    BoundaryValue, Contour, DirichletSpec, FundamentalInequality, SolverOptions, SublevelParams,
};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} — {} ({} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.detail,
            self.millis
        )
    }
}

/// Grid selection: `full` runs the pinned verification grids, smoke mode
/// coarsens everything for quick runs.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub full: bool,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            full: true,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    fn h(&self, fine: f64, coarse: f64) -> f64 {
        if self.full {
            fine
        } else {
            coarse
        }
    }
}

/// Deterministic 64-bit mixer for reproducible sample jitter.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64)
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn outcome(id: &str, start: Instant, pass: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        id: id.to_string(),
        pass,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn fail(id: &str, start: Instant, err: impl std::fmt::Display) -> CheckOutcome {
    outcome(id, start, false, format!("error: {err}"))
}

/// C1: unit-circle capacity 1 +- 1e-3 at n=256; length-4 segment 1 +- 1e-2;
/// energy and Fekete routes within 3 percent.
pub fn criterion_1(_cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c01-capacity-exactness";
    let run = || -> Result<(bool, String)> {
        let circle = CompactSet::disk(PlanarPoint::ZERO, 1.0);
        let seg = CompactSet::segment(PlanarPoint::new(-2.0, 0.0), PlanarPoint::new(2.0, 0.0));
        let c_energy = log_capacity(&circle, 256)?;
        let s_energy = log_capacity(&seg, 256)?;
        let c_fek = transfinite_diameter(&circle, 256)?;
        let s_fek = transfinite_diameter(&seg, 256)?;
        let ok_c = (c_energy.cap - 1.0).abs() <= 1e-3;
        let ok_s = (s_energy.cap - 1.0).abs() <= 1e-2;
        let gap_c = (c_energy.cap - c_fek).abs() / c_energy.cap;
        let gap_s = (s_energy.cap - s_fek).abs() / s_energy.cap;
        let ok_gap = gap_c <= 0.03 && gap_s <= 0.03;
        Ok((
            ok_c && ok_s && ok_gap,
            format!(
                "circle {:.6} (fekete {:.4}), segment {:.6} (fekete {:.4}), gaps {:.2}%/{:.2}%",
                c_energy.cap,
                c_fek,
                s_energy.cap,
                s_fek,
                100.0 * gap_c,
                100.0 * gap_s
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C2: the log-capacity sandwich for the Green capacity holds with 1e-9
/// additive slack on 20 generated disk/segment targets in the unit disk.
pub fn criterion_2(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c02-green-capacity-sandwich";
    let run = || -> Result<(bool, String)> {
        let domain = domains::unit_disk();
        let h = cfg.h(1.0 / 128.0, 1.0 / 64.0);
        let mut rng = Lcg::new(cfg.seed);
        let mut targets = Vec::new();
        for q in 0..20 {
            let cx = rng.in_range(-0.35, 0.35);
            let cy = rng.in_range(-0.35, 0.35);
            if q % 2 == 0 {
                let r = rng.in_range(0.08, 0.28);
                targets.push(CompactSet::disk(PlanarPoint::new(cx, cy), r));
            } else {
                let dx = rng.in_range(-0.3, 0.3);
                let dy = rng.in_range(-0.3, 0.3);
                let b = PlanarPoint::new(
                    (cx + dx).clamp(-0.55, 0.55),
                    (cy + dy).clamp(-0.55, 0.55),
                );
                let a = PlanarPoint::new(cx, cy);
                if a.dist(b) < 0.05 {
                    targets.push(CompactSet::segment(a, a + PlanarPoint::new(0.2, 0.0)));
                } else {
                    targets.push(CompactSet::segment(a, b));
                }
            }
        }
        let results: Vec<Result<(f64, f64)>> = targets
            .par_iter()
            .map(|k| {
                let g = green_capacity(k, &domain, h, 40)?;
                let lower = g.log_cap_l - g.log_r_hat;
                let upper = g.log_cap_l - g.log_d_hat;
                let viol_lo = lower - g.green_energy; // should be <= slack
                let viol_hi = g.green_energy - upper;
                Ok((viol_lo, viol_hi))
            })
            .collect();
        let mut worst: f64 = f64::NEG_INFINITY;
        for r in results {
            let (lo, hi) = r?;
            worst = worst.max(lo).max(hi);
        }
        Ok((
            worst <= 1e-9,
            format!("worst sandwich violation {worst:.3e} over 20 targets (slack 1e-9)"),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C3: the fundamental inequality holds with 2 percent slack at 100 probes
/// over three target configurations in the unit disk.
pub fn criterion_3(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c03-fundamental-inequality";
    let run = || -> Result<(bool, String)> {
        let domain = domains::unit_disk();
        let h = cfg.h(1.0 / 512.0, 1.0 / 128.0);
        let hk = cfg.h(1.0 / 256.0, 1.0 / 128.0);
        let configs: Vec<(&str, CompactSet)> = vec![
            ("concentric", CompactSet::disk(PlanarPoint::ZERO, 0.3)),
            (
                "slit",
                CompactSet::segment(PlanarPoint::new(-0.45, 0.0), PlanarPoint::new(0.35, 0.0)),
            ),
            (
                "two-component",
                CompactSet::from_pieces(vec![
                    crate::geometry::ObstaclePrimitive::Disk {
                        center: PlanarPoint::new(-0.38, 0.28),
                        radius: 0.13,
                    },
                    crate::geometry::ObstaclePrimitive::Disk {
                        center: PlanarPoint::new(0.42, -0.18),
                        radius: 0.13,
                    },
                ]),
            ),
        ];
        let n_z = if cfg.full { 34 } else { 8 };
        let mut worst = f64::NEG_INFINITY;
        let mut checked = 0usize;
        for (_name, k) in &configs {
            let ctx = FundamentalInequality::new(k, &domain, hk, 48)?;
            // probes on two rings clear of K
            let mut probes = Vec::new();
            let mut q = 0usize;
            while probes.len() < n_z && q < 400 {
                let th = TAU * (q as f64 + 0.37) / 61.0;
                let r = if q % 2 == 0 { 0.82 } else { 0.62 };
                let z = PlanarPoint::new(r * th.cos(), r * th.sin());
                if k.distance(z) > 6.0 * h && domain.boundary_distance(z)? > 6.0 * h {
                    probes.push(z);
                }
                q += 1;
            }
            let prepared = prepare(&domain, &[], h)?;
            let rows: Vec<Result<f64>> = probes
                .par_iter()
                .map(|&z| {
                    let pole = z;
                    let data = move |zeta: PlanarPoint| -(zeta.dist(pole).max(1e-300)).ln();
                    let spec = DirichletSpec::uniform(&domain, BoundaryValue::Func(&data));
                    let opts = SolverOptions { rtol: 1e-7, ..Default::default() };
                    let rep = prepared.run(&spec, &opts)?;
                    let mut inf = f64::INFINITY;
                    let mut sup = f64::NEG_INFINITY;
                    for p in &ctx.k_probes {
                        if let Some(v) = rep.field.bilinear(*p) {
                            let g = (p.dist(pole).max(1e-300)).ln() + v;
                            inf = inf.min(-g);
                            sup = sup.max(-g);
                        }
                    }
                    let mid = ctx.phi.bilinear(z).unwrap_or(f64::NAN);
                    let lower = ctx.cd_over_2pi * inf;
                    let upper = ctx.cd_over_2pi * sup;
                    // positive violations are failures
                    let viol = (lower * (1.0 - 0.02) - mid).max(mid - upper * (1.0 + 0.02));
                    Ok(viol / mid.abs().max(1e-12))
                })
                .collect();
            for r in rows {
                worst = worst.max(r?);
                checked += 1;
            }
        }
        Ok((
            worst <= 0.0,
            format!("worst relative violation {worst:.3e} over {checked} probes (2% slack)"),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C4: the capacity potential equals the normalized equilibrium Green
/// potential within 3 percent sup-norm (concentric and slit targets).
pub fn criterion_4(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c04-frostman-identity";
    let run = || -> Result<(bool, String)> {
        let domain = domains::unit_disk();
        let h = cfg.h(1.0 / 256.0, 1.0 / 128.0);
        let mut worst = 0.0f64;
        for k in [
            CompactSet::disk(PlanarPoint::ZERO, (-1.0f64).exp()),
            CompactSet::segment(PlanarPoint::new(-0.45, 0.0), PlanarPoint::new(0.35, 0.0)),
        ] {
            let g = green_capacity(&k, &domain, h, 64)?;
            let p = green_potential(&g.measure, &domain, h)?;
            let phi = capacity_potential(&k, &domain, h)?;
            // the potential of a discrete measure cannot track the continuum
            // within one support spacing of the atoms; compare outside that
            // near-field band
            let s_max = g
                .measure
                .self_spacings
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            let band = 2.0 * s_max;
            let mut sup = 0.0f64;
            for j in 0..phi.ny {
                for i in 0..phi.nx {
                    if let (Some(a), Some(b)) = (phi.get(i, j), p.get(i, j)) {
                        let z = phi.center(i, j);
                        let near = g
                            .measure
                            .support
                            .iter()
                            .map(|x| x.dist(z))
                            .fold(f64::INFINITY, f64::min);
                        if near >= band {
                            sup = sup.max((a - b / g.green_energy).abs());
                        }
                    }
                }
            }
            worst = worst.max(sup);
        }
        Ok((
            worst <= 0.03,
            format!("sup-norm gap {worst:.4} outside the atom near-field (tolerance 0.03)"),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C5: concentric Dirichlet capacity 2 pi within 2 percent by the bridge,
/// energy and flux routes.
pub fn criterion_5(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c05-dirichlet-capacity-concentric";
    let run = || -> Result<(bool, String)> {
        let domain = domains::unit_disk();
        let h = cfg.h(1.0 / 256.0, 1.0 / 128.0);
        let k = CompactSet::disk(PlanarPoint::ZERO, (-1.0f64).exp());
        let dc = dirichlet_capacity(&k, &domain, h, 64)?;
        let phi = capacity_potential(&k, &domain, h)?;
        let contour = Contour::circle(PlanarPoint::ZERO, 0.62, 256)?;
        let fx = -flux(&phi, &contour)?;
        let rel = |x: f64| (x - TAU).abs() / TAU;
        let (rb, re_, rf) = (rel(dc.bridge), rel(dc.energy_route), rel(fx));
        Ok((
            rb <= 0.02 && re_ <= 0.02 && rf <= 0.02,
            format!(
                "bridge {:.4} energy {:.4} flux {:.4} vs 2pi (rel {:.2}%/{:.2}%/{:.2}%)",
                dc.bridge,
                dc.energy_route,
                fx,
                100.0 * rb,
                100.0 * re_,
                100.0 * rf
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C6: the two-sided bound on `2pi/C_d(U,Omega)`: radial equality within 1
/// percent, off-center sandwich with 2 percent slack.
pub fn criterion_6(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c06-grigoryan-bound";
    let run = || -> Result<(bool, String)> {
        let domain = domains::unit_disk();
        let h = cfg.h(1.0 / 256.0, 1.0 / 128.0);
        let rho = 0.4;
        let (mn, bridge, mx) =
            grigoryan_sandwich(PlanarPoint::ZERO, rho, &domain, PlanarPoint::ZERO, h, 64)?;
        let target = (1.0 / rho).ln();
        let radial_ok = (bridge - target).abs() / target <= 0.01
            && (mn - target).abs() / target <= 0.02
            && (mx - target).abs() / target <= 0.02;
        let (mn2, bridge2, mx2) = grigoryan_sandwich(
            PlanarPoint::new(0.3, 0.0),
            0.25,
            &domain,
            PlanarPoint::new(0.35, 0.1),
            h,
            64,
        )?;
        let off_ok = mn2 * (1.0 - 0.02) <= bridge2 && bridge2 <= mx2 * (1.0 + 0.02);
        Ok((
            radial_ok && off_ok,
            format!(
                "radial bridge {bridge:.4} vs {target:.4}; off-center {mn2:.3} <= {bridge2:.3} <= {mx2:.3}"
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C7: capacity-weighted decay bound for the capacity potential on the slit
/// domain at 12 radii spanning two decades; measured sup below 1.05x bound.
pub fn criterion_7(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c07-potential-upper-bound";
    let run = || -> Result<(bool, String)> {
        let domain = domains::slit_disk();
        let h = cfg.h(1.0 / 1024.0, 1.0 / 256.0);
        let alpha = 1.0 / 32.0;
        let e = CompactSet::disk(PlanarPoint::new(0.0, -0.5), 0.1);
        let a = PlanarPoint::ZERO;
        let radii: Vec<f64> = (0..12)
            .map(|q| 1.2e-3 * (100.0f64).powf(q as f64 / 11.0))
            .collect();
        let mut worst_ratio = 0.0f64;
        let mut lines = Vec::new();
        for &r in &radii {
            let (measured, bound) = potential_upper_bound(&e, &domain, a, r, alpha, h, 96)?;
            let ratio = if bound > 0.0 { measured / bound } else { f64::INFINITY };
            worst_ratio = worst_ratio.max(ratio);
            lines.push(format!("r={r:.2e}: sup={measured:.3e} bound={bound:.3e}"));
        }
        Ok((
            worst_ratio <= 1.05,
            format!("worst measured/bound = {worst_ratio:.3} over 12 radii"),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C8: Green decay fits: disk power exponent 1 +- 0.1 with R^2 >= 0.99;
/// slit-domain exponent positive with R^2 >= 0.9.
pub fn criterion_8(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c08-green-decay-power";
    let run = || -> Result<(bool, String)> {
        let h = cfg.h(1.0 / 1024.0, 1.0 / 256.0);
        let deltas: Vec<f64> = (0..16)
            .map(|q| 1.3e-3 * (100.0f64).powf(q as f64 / 15.0))
            .collect();
        let disk = domains::unit_disk();
        let disk_samples: Vec<PlanarPoint> = deltas
            .iter()
            .map(|d| PlanarPoint::new(-(1.0 - d), 0.0))
            .collect();
        let slit = domains::slit_disk();
        let slit_samples: Vec<PlanarPoint> = deltas
            .iter()
            .map(|d| PlanarPoint::new(0.5, *d))
            .collect();
        let (fit_disk, fit_slit) = rayon::join(
            || {
                fit_green_decay(
                    &disk,
                    PlanarPoint::ZERO,
                    DecayModel::Power,
                    &disk_samples,
                    h,
                )
            },
            || {
                fit_green_decay(
                    &slit,
                    PlanarPoint::new(-0.5, 0.0),
                    DecayModel::Power,
                    &slit_samples,
                    h,
                )
            },
        );
        let fit_disk = fit_disk?;
        let fit_slit = fit_slit?;
        let ok = (fit_disk.exponent - 1.0).abs() <= 0.1
            && fit_disk.r2 >= 0.99
            && fit_slit.exponent > 0.0
            && fit_slit.r2 >= 0.9;
        Ok((
            ok,
            format!(
                "disk beta {:.3} (R2 {:.4}); slit beta {:.3} (R2 {:.4})",
                fit_disk.exponent, fit_disk.r2, fit_slit.exponent, fit_slit.r2
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C9: comb domain with gamma = 2: log-power exponent >= 0.5 with
/// R^2 >= 0.85.
pub fn criterion_9(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c09-green-decay-logpower";
    let run = || -> Result<(bool, String)> {
        let h = cfg.h(1.0 / 1024.0, 1.0 / 256.0);
        let comb = domains::comb(0.5, 2.0, 12);
        let deltas: Vec<f64> = (0..16)
            .map(|q| 1.3e-3 * (100.0f64).powf(q as f64 / 15.0))
            .collect();
        let samples: Vec<PlanarPoint> = deltas
            .iter()
            .map(|d| PlanarPoint::new(-*d, 0.0))
            .collect();
        let fit = fit_green_decay(
            &comb,
            PlanarPoint::new(-0.5, 0.0),
            DecayModel::LogPower,
            &samples,
            h,
        )?;
        Ok((
            fit.exponent >= 0.5 && fit.r2 >= 0.85,
            format!("comb tau {:.3} (R2 {:.4})", fit.exponent, fit.r2),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C10: disk kernel within 1 percent for |z| <= 0.8 at degree 40; annulus
/// self-convergence within 1 percent between degrees 40 and 60.
pub fn criterion_10(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c10-bergman-kernel";
    let run = || -> Result<(bool, String)> {
        let hq = cfg.h(2.0 / 256.0, 2.0 / 128.0);
        let disk = domains::unit_disk();
        let model = build_bergman_model(&disk, &BasisSpec::polynomial(&disk, 40), hq)?;
        let mut worst = 0.0f64;
        for r in [0.0, 0.2, 0.4, 0.6, 0.8] {
            for th in [0.0, 1.1, 2.7] {
                let z = PlanarPoint::new(r * f64::cos(th), r * f64::sin(th));
                let k = model.kernel_diag(z)?;
                let exact = 1.0 / (PI * (1.0 - z.norm_sq()).powi(2));
                worst = worst.max((k - exact).abs() / exact);
            }
        }
        let annulus = domains::annulus(0.5);
        let m40 = build_bergman_model(&annulus, &BasisSpec::for_domain(&annulus, 40), hq)?;
        let m60 = build_bergman_model(&annulus, &BasisSpec::for_domain(&annulus, 60), hq)?;
        let mut ann_gap = 0.0f64;
        for z in [
            PlanarPoint::new(0.75, 0.0),
            PlanarPoint::new(0.0, -0.7),
            PlanarPoint::new(-0.6, 0.35),
        ] {
            let a = m40.kernel_diag(z)?;
            let b = m60.kernel_diag(z)?;
            ann_gap = ann_gap.max((b - a).abs() / b);
        }
        Ok((
            worst <= 0.01 && ann_gap <= 0.01,
            format!(
                "disk max rel err {:.4}; annulus 40-60 gap {:.4}",
                worst, ann_gap
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C11: simply-connected bound: min of `16 pi K delta^2` at least 0.95 on the
/// disk and the square; the disk near-boundary value 4 within 10 percent.
pub fn criterion_11(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c11-simply-connected-bound";
    let run = || -> Result<(bool, String)> {
        let hq = cfg.h(2.0 / 256.0, 2.0 / 128.0);
        let disk = domains::unit_disk();
        let model = build_bergman_model(&disk, &BasisSpec::polynomial(&disk, 48), hq)?;
        let mut disk_samples = Vec::new();
        for r in [0.0, 0.3, 0.6, 0.8, 0.9] {
            disk_samples.push(PlanarPoint::new(r, 0.0));
            disk_samples.push(PlanarPoint::new(0.0, -r));
        }
        let min_disk = crate::bergman::check_sc_bound(&model, &disk_samples)?;
        // near-boundary asymptote 16/(1+|z|)^2 -> 4
        let mut near = Vec::new();
        for r in [0.93, 0.95, 0.97] {
            let z = PlanarPoint::new(r, 0.0);
            let k = model.kernel_diag(z)?;
            let d = disk.boundary_distance(z)?;
            near.push(16.0 * PI * k * d * d);
        }
        let near_ok = near.iter().all(|v| (v - 4.0).abs() / 4.0 <= 0.10);
        let square = domains::square();
        let sq_model = build_bergman_model(&square, &BasisSpec::polynomial(&square, 48), hq)?;
        let mut sq_samples = Vec::new();
        for x in [-0.8, -0.4, 0.0, 0.4, 0.8] {
            for y in [-0.8, 0.0, 0.6] {
                sq_samples.push(PlanarPoint::new(x, y));
            }
        }
        let min_sq = crate::bergman::check_sc_bound(&sq_model, &sq_samples)?;
        Ok((
            min_disk >= 0.95 && min_sq >= 0.95 && near_ok,
            format!(
                "min 16piKd^2: disk {:.3}, square {:.3}; near-boundary {:?}",
                min_disk,
                min_sq,
                near.iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>()
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C12: disk Bergman distance `d(0, 0.9)` within 5 percent of the closed
/// form; growth slope against `|log delta|` within 10 percent of `sqrt2/2`.
pub fn criterion_12(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c12-bergman-distance";
    let run = || -> Result<(bool, String)> {
        let disk = domains::unit_disk();
        let hq = cfg.h(2.0 / 512.0, 2.0 / 256.0);
        let degree = if cfg.full { 280 } else { 120 };
        let model = build_bergman_model(&disk, &BasisSpec::polynomial(&disk, degree), hq)?;
        let mesh_h = cfg.h(2.0 / 512.0, 2.0 / 256.0);
        let mesh = LogKernelGrid::build(&model, mesh_h)?;
        let dists = mesh.distances_from(PlanarPoint::ZERO)?;
        let probe = |z: PlanarPoint| -> Option<(f64, f64)> {
            let i = ((z.re - mesh.origin.re) / mesh.h).floor() as usize;
            let j = ((z.im - mesh.origin.im) / mesh.h).floor() as usize;
            let q = j * mesh.nx + i;
            let d = dists.get(q).copied()?;
            if !d.is_finite() {
                return None;
            }
            let zc = mesh.center(i, j);
            Some((d, 1.0 - zc.norm()))
        };
        let (d09, _) = probe(PlanarPoint::new(0.9, 0.0))
            .ok_or_else(|| crate::error::Error::Numeric("probe 0.9 unreachable".into()))?;
        let exact = std::f64::consts::SQRT_2 * 0.9f64.atanh();
        let ok_val = (d09 - exact).abs() / exact <= 0.05;
        // slope of d_B against |log delta| over |z| in [0.9, 0.99]
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for q in 0..14 {
            let r = 0.9 + 0.09 * q as f64 / 13.0;
            if let Some((d, delta)) = probe(PlanarPoint::new(r, 0.0)) {
                if delta > 0.0 {
                    xs.push(-delta.ln());
                    ys.push(d);
                }
            }
        }
        let (slope, _b, r2) = linfit(&xs, &ys);
        let target = std::f64::consts::SQRT_2 / 2.0;
        let ok_slope = (slope - target).abs() / target <= 0.10;
        Ok((
            ok_val && ok_slope,
            format!(
                "d(0,0.9) = {d09:.4} vs {exact:.4}; slope {slope:.4} vs {target:.4} (R2 {r2:.3})"
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C13: the kernel-sublevel product on the disk: `e^-2` within 5 percent at
/// the center and spread below 10 percent over `|w| <= 0.9`. The closed form
/// `t^2/(1 - t^2 |w|^2)^2` puts the true spread at 26 percent, so the spread
/// leg records the discrepancy rather than hiding it.
pub fn criterion_13(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c13-kernel-sublevel-product";
    let run = || -> Result<(bool, String)> {
        let disk = domains::unit_disk();
        let hq = cfg.h(2.0 / 512.0, 2.0 / 256.0);
        let h = cfg.h(1.0 / 512.0, 1.0 / 128.0);
        let degree = if cfg.full { 200 } else { 80 };
        let model = build_bergman_model(&disk, &BasisSpec::polynomial(&disk, degree), hq)?;
        let mut products = Vec::new();
        let mut closed_gap = 0.0f64;
        let t2 = (-2.0f64).exp();
        for q in 0..7 {
            let w = PlanarPoint::new(0.15 * q as f64, 0.0);
            let (product, _area, _k) = green_to_kernel_bound(&model, w, 1.0, h)?;
            let closed = t2 / (1.0 - t2 * w.norm_sq()).powi(2);
            closed_gap = closed_gap.max((product - closed).abs() / closed);
            products.push(product);
        }
        let center_ok = (products[0] - t2).abs() / t2 <= 0.05;
        let spread = products.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            / products.iter().cloned().fold(f64::INFINITY, f64::min)
            - 1.0;
        let spread_ok = spread <= 0.10;
        Ok((
            center_ok && spread_ok,
            format!(
                "center {:.5} vs e^-2 = {:.5}; sweep spread {:.1}% (threshold 10%; closed form gives 26%, numerics match it within {:.1}%)",
                products[0],
                t2,
                100.0 * spread,
                100.0 * closed_gap
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C14: capacity-weighted kernel bound on the slit family: fitted constant
/// positive and stable within a factor 2 across two decades of delta.
pub fn criterion_14(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c14-zwonek-stability";
    let run = || -> Result<(bool, String)> {
        let slit = domains::slit_disk();
        let hq = cfg.h(2.0 / 512.0, 2.0 / 256.0);
        let degree = if cfg.full { 48 } else { 32 };
        let model = build_bergman_model(&slit, &BasisSpec::for_domain(&slit, degree), hq)?;
        let alpha = 1.1;
        let deltas: Vec<f64> = (0..9)
            .map(|q| 1e-3 * (100.0f64).powf(q as f64 / 8.0))
            .collect();
        let mut ratios = Vec::new();
        for &d in &deltas {
            let z = PlanarPoint::new(-d, 0.0);
            let (lhs, rhs) = zwonek_bound(&model, z, alpha, 96)?;
            if rhs > 0.0 {
                ratios.push(lhs / rhs);
            }
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ok = lo > 0.0 && hi / lo <= 2.0 && ratios.len() >= 8;
        Ok((
            ok,
            format!(
                "fitted constants in [{lo:.3}, {hi:.3}] over delta in [1e-3, 1e-1] (factor {:.2})",
                hi / lo
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C15: density indices: slit boundary fully dense at (1/8, 1/2); the
/// doubly-exponential interval family keeps a positive strong density at
/// (2^-12, 1/2) with a stable tail window, cross-checked against certified
/// interval-capacity bounds.
pub fn criterion_15(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c15-density-indices";
    let run = || -> Result<(bool, String)> {
        let slit = domains::slit_disk();
        let slit_params = DensityParams {
            eps: 0.125,
            lambda: 0.5,
            n_max: if cfg.full { 20 } else { 10 },
            n_disc: 96,
            ..Default::default()
        };
        let sample = slit.boundary_sample(if cfg.full { 48 } else { 16 });
        let ws = weak_strong_density(&slit, &sample, &slit_params)?;
        let slit_ok = (ws.d_weak - 1.0).abs() < 1e-12 && (ws.d_strong - 1.0).abs() < 1e-12;

        // interval-capacity oracle for the doubly-exponential family: piece
        // [2^-2^(2k+1), 2^-2^(2k)] clipped at t = 2^-n gives certified bounds
        // cap >= (biggest piece length)/4 and cap <= (reach)/4
        let ct = domains::carleson_totik(4);
        let n_max: u32 = if cfg.full { 24 } else { 16 };
        let eps = (-12.0f64).exp2();
        let oracle_qualifies = |n: u32| -> Option<bool> {
            // renormalized certified lower bound on cap of K_(2^-n)(0)/2^-n
            let mut lower = 0.0f64; // in units of t
            let mut reach = 0.0f64;
            for k in 1..=4u32 {
                let l = -(2f64.powi(2 * k as i32 + 1));
                let r = -(2f64.powi(2 * k as i32));
                let rl = (l + n as f64).min(0.0);
                let rr = (r + n as f64).min(0.0);
                if rl >= rr {
                    continue;
                }
                let len = rr.exp2() - rl.exp2();
                lower = lower.max(len / 4.0);
                reach = reach.max(rr.exp2());
            }
            let upper = reach / 4.0;
            if lower >= eps {
                Some(true)
            } else if upper < eps {
                Some(false)
            } else {
                None // bounds not decisive
            }
        };
        let params = DensityParams {
            eps,
            lambda: 0.5,
            n_max,
            n_disc: 96,
            ..Default::default()
        };
        let profile = density_profile(&ct, PlanarPoint::ZERO, &params)?;
        let mut oracle_ok = true;
        for n in 1..=n_max {
            if let Some(expect) = oracle_qualifies(n) {
                if profile.qualifies(n) != expect {
                    oracle_ok = false;
                }
            }
        }
        // strong density over a sample including the accumulation point
        let mut ct_sample = ct.boundary_sample(24);
        ct_sample.truncate(24);
        let ws_ct = weak_strong_density(&ct, &ct_sample, &params)?;
        let params16 = DensityParams {
            n_max: n_max.saturating_sub(8).max(8),
            ..params
        };
        let ws_ct16 = weak_strong_density(&ct, &ct_sample, &params16)?;
        let ct_ok = ws_ct.d_strong > 0.0 && (ws_ct.d_strong - ws_ct16.d_strong).abs() <= 0.05;
        Ok((
            slit_ok && ct_ok && oracle_ok,
            format!(
                "slit D_W={:.2} D_S={:.2}; family D_S={:.2} (window-stable {:.3}); oracle agreement: {}",
                ws.d_weak,
                ws.d_strong,
                ws_ct.d_strong,
                (ws_ct.d_strong - ws_ct16.d_strong).abs(),
                oracle_ok
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// C16: chain bound: disk count matches the dyadic gap exactly (+-1); slit
/// chain grows with slope at least `0.5/log 2` against `|log delta|`.
pub fn criterion_16(cfg: &VerifyConfig) -> CheckOutcome {
    let t0 = Instant::now();
    let id = "c16-chain-lower-bound";
    let run = || -> Result<(bool, String)> {
        let h = cfg.h(1.0 / 512.0, 1.0 / 128.0);
        let lambda = 0.5;
        let disk = domains::unit_disk();
        let z0 = PlanarPoint::new(-0.5, 0.0);
        // calibrate the level on the disk: smallest c confirming the full count
        let all: Vec<u32> = (1..=24).collect();
        let z_ref = PlanarPoint::new(0.0, 1.0 - 0.02);
        let expected_ref = (disk.boundary_distance(z0)? / disk.boundary_distance(z_ref)?)
            .log2()
            .floor() as i64;
        let mut c_star = None;
        for c in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let m = chain_lower_bound(&disk, z0, z_ref, lambda, c, &all, h)? as i64;
            if (m - expected_ref).abs() <= 1 {
                c_star = Some(c);
                break;
            }
        }
        let Some(c) = c_star else {
            return Ok((false, "no calibration level confirmed the disk count".into()));
        };
        // disk exact count at a second probe
        let z1 = PlanarPoint::new(0.0, 1.0 - 0.04);
        let m1 = chain_lower_bound(&disk, z0, z1, lambda, c, &all, h)? as i64;
        let expect1 = (disk.boundary_distance(z0)? / disk.boundary_distance(z1)?)
            .log2()
            .floor() as i64;
        let disk_ok = (m1 - expect1).abs() <= 1;
        // slit chain slope
        let slit = domains::slit_disk();
        let qualifying: Vec<u32> = {
            let params = DensityParams {
                eps: 0.125,
                lambda,
                n_max: 24,
                n_disc: 96,
                ..Default::default()
            };
            density_profile(&slit, PlanarPoint::new(0.5, 0.0), &params)?.qualifying
        };
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for d in [0.04, 0.02, 0.01, 0.005, 0.0025] {
            let z = PlanarPoint::new(0.5, d);
            let m = chain_lower_bound(&slit, z0, z, lambda, c, &qualifying, h)?;
            xs.push(-(d.ln()));
            ys.push(m as f64);
        }
        let (slope, _b, _r2) = linfit(&xs, &ys);
        let slope_ok = slope >= 0.5 / std::f64::consts::LN_2;
        Ok((
            disk_ok && slope_ok,
            format!(
                "calibrated c={c}; disk count {m1} vs {expect1}; slit slope {slope:.3} (need {:.3})",
                0.5 / std::f64::consts::LN_2
            ),
        ))
    };
    match run() {
        Ok((pass, detail)) => outcome(id, t0, pass, detail),
        Err(e) => fail(id, t0, e),
    }
}

/// Runs every criterion in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let fns: Vec<fn(&VerifyConfig) -> CheckOutcome> = vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
        criterion_14,
        criterion_15,
        criterion_16,
    ];
    fns.iter().map(|f| f(cfg)).collect()
}

/// The sublevel-localization calibration on the reference disk, exposed for
/// the experiment runner.
pub fn reference_sublevel_calibration(h: f64) -> Result<f64> {
    let disk = domains::unit_disk();
    // anchor at the boundary point (1,0), complement capacity hypothesis
    // holds with eps = 1/4 at r = 0.2
    let params = SublevelParams {
        anchor: PlanarPoint::new(1.0, 0.0),
        r: 0.2,
        alpha: 0.2,
        beta: 1.0,
        eps: 0.25,
    };
    let w = PlanarPoint::new(1.0 - 0.2, 0.0);
    crate::potential::calibrate_sublevel_c(&disk, &params, w, h)
}
