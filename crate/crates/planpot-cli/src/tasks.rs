use crate::config::{ExperimentConfig, Task};
use crate::csv::Csv;
use crate::svg::{emit_plot, Axes};
use anyhow::{anyhow, bail, Context, Result};
use planpot::bergman::{build_bergman_model, BasisSpec, LogKernelGrid};
use planpot::capacity::{dirichlet_capacity, log_capacity, transfinite_diameter};
use planpot::density::{
    density_profile, fit_green_decay, weak_strong_density, wiener_sum, DecayModel, DensityParams,
};
use planpot::geometry::{CompactSet, PlanarPoint};
use planpot::potential::green_function;
use planpot::verify::{run_all, VerifyConfig};
use serde_json::Value;
use std::path::Path;

/// Per-check record of a run.
pub struct RunReport {
    pub checks: Vec<(String, bool, String)>,
    pub outputs: Vec<String>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, p, _)| *p)
    }
}

fn param_f64(params: &Value, key: &str, default: f64) -> f64 {
    params.get(key).and_then(Value::as_f64).unwrap_or(default)
}

fn param_u64(params: &Value, key: &str, default: u64) -> u64 {
    params.get(key).and_then(Value::as_u64).unwrap_or(default)
}

fn param_point(params: &Value, key: &str, default: PlanarPoint) -> PlanarPoint {
    params
        .get(key)
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .and_then(|a| match (a[0].as_f64(), a[1].as_f64()) {
            (Some(x), Some(y)) => Some(PlanarPoint::new(x, y)),
            _ => None,
        })
        .unwrap_or(default)
}

pub fn run(cfg: &ExperimentConfig, out_dir: &Path, grid_override: Option<f64>) -> Result<RunReport> {
    let mut report = RunReport {
        checks: Vec::new(),
        outputs: Vec::new(),
    };
    let h = grid_override.unwrap_or_else(|| param_f64(&cfg.params, "grid", cfg.domain.diameter() / 256.0));
    match cfg.task {
        Task::Cap => task_cap(cfg, out_dir, &mut report)?,
        Task::Green => task_green(cfg, out_dir, h, &mut report)?,
        Task::Potential => task_potential(cfg, out_dir, h, &mut report)?,
        Task::Bergman => task_bergman(cfg, out_dir, h, &mut report)?,
        Task::Density => task_density(cfg, out_dir, &mut report)?,
        Task::Verify => task_verify(cfg, &mut report)?,
    }
    Ok(report)
}

/// Capacity table for each obstacle treated as a compact target.
fn task_cap(cfg: &ExperimentConfig, out_dir: &Path, report: &mut RunReport) -> Result<()> {
    let n = param_u64(&cfg.params, "points", 256) as usize;
    let mut csv = Csv::new(&["obstacle", "cap", "log_cap", "fekete", "err_estimate"]);
    for (k, obs) in cfg.domain.obstacles.iter().enumerate() {
        let set = CompactSet::new(vec![obs.clone()])
            .map_err(|e| anyhow!("obstacle {k}: {e}"))?;
        let rep = log_capacity(&set, n).map_err(|e| anyhow!("capacity: {e}"))?;
        let fek = transfinite_diameter(&set, n.min(256)).map_err(|e| anyhow!("fekete: {e}"))?;
        csv.row(&[
            k.to_string(),
            Csv::float(rep.cap),
            Csv::float(rep.log_cap),
            Csv::float(fek),
            Csv::float(rep.err_estimate),
        ]);
        if rep.cap > 0.0 {
            let gap = (rep.cap - fek).abs() / rep.cap;
            report.checks.push((
                format!("cap-vs-fekete-{k}"),
                gap <= 0.03,
                format!("relative gap {gap:.4}"),
            ));
        }
    }
    let path = out_dir.join("capacities.csv");
    csv.write(&path).context("writing capacities.csv")?;
    report.outputs.push(path.display().to_string());
    Ok(())
}

/// Green function field export plus a radial decay plot.
fn task_green(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    h: f64,
    report: &mut RunReport,
) -> Result<()> {
    let pole = param_point(&cfg.params, "pole", cfg.domain.base_point);
    let g = green_function(&cfg.domain, pole, h).map_err(|e| anyhow!("green solve: {e}"))?;
    let mut csv = Csv::new(&["x", "y", "value"]);
    for j in 0..g.ny {
        for i in 0..g.nx {
            if let Some(v) = g.get(i, j) {
                let c = g.center(i, j);
                csv.row(&[Csv::float(c.re), Csv::float(c.im), Csv::float(v)]);
            }
        }
    }
    let path = out_dir.join("green_field.csv");
    csv.write(&path)?;
    report.outputs.push(path.display().to_string());

    // decay fit toward the nearest boundary point from the pole
    let a = cfg.domain.nearest_boundary_point(pole);
    let dir = {
        let v = pole - a;
        v * (1.0 / v.norm().max(1e-300))
    };
    let deltas: Vec<f64> = (0..16)
        .map(|q| 8.0 * h * (0.12 / (8.0 * h)).max(1.001).powf(q as f64 / 15.0))
        .collect();
    let samples: Vec<PlanarPoint> = deltas.iter().map(|d| a + dir * *d).collect();
    if let Ok(fit) = fit_green_decay(&cfg.domain, pole, DecayModel::Power, &samples, h) {
        let series: Vec<(f64, f64)> = samples
            .iter()
            .filter_map(|z| {
                let d = cfg.domain.boundary_distance(*z).ok()?;
                let v = -g.bilinear(*z)?;
                if v > 0.0 {
                    Some((d, v))
                } else {
                    None
                }
            })
            .collect();
        let label = format!("beta={:.2}  R2={:.3}", fit.exponent, fit.r2);
        let path = out_dir.join("green_decay.svg");
        emit_plot(
            &series,
            Some((fit.exponent, 0.0, &label)),
            Axes::LogLog,
            "Green decay toward the boundary",
            &path,
        )?;
        report.outputs.push(path.display().to_string());
        report.checks.push((
            "green-decay-fit".into(),
            fit.r2 > 0.5,
            format!("beta {:.3}, R2 {:.3}", fit.exponent, fit.r2),
        ));
    }
    Ok(())
}

/// Capacity potential of a configured target with the Dirichlet capacity by
/// both routes.
fn task_potential(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    h: f64,
    report: &mut RunReport,
) -> Result<()> {
    let center = param_point(&cfg.params, "target_center", PlanarPoint::ZERO);
    let radius = param_f64(&cfg.params, "target_radius", 0.3 * cfg.domain.diameter() / 2.0);
    let k = CompactSet::disk(center, radius);
    let n = param_u64(&cfg.params, "measure_points", 48) as usize;
    let dc = dirichlet_capacity(&k, &cfg.domain, h, n).map_err(|e| anyhow!("{e}"))?;
    let phi = planpot::potential::capacity_potential(&k, &cfg.domain, h)
        .map_err(|e| anyhow!("{e}"))?;
    let mut csv = Csv::new(&["x", "y", "value"]);
    for j in 0..phi.ny {
        for i in 0..phi.nx {
            if let Some(v) = phi.get(i, j) {
                let c = phi.center(i, j);
                csv.row(&[Csv::float(c.re), Csv::float(c.im), Csv::float(v)]);
            }
        }
    }
    let path = out_dir.join("capacity_potential.csv");
    csv.write(&path)?;
    report.outputs.push(path.display().to_string());
    report.checks.push((
        "dirichlet-capacity-routes".into(),
        dc.rel_gap <= 0.03,
        format!(
            "bridge {:.6}, energy {:.6}, gap {:.4}",
            dc.bridge, dc.energy_route, dc.rel_gap
        ),
    ));
    Ok(())
}

/// Kernel, metric and distance samples along a ray toward the boundary.
fn task_bergman(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    h: f64,
    report: &mut RunReport,
) -> Result<()> {
    let degree = param_u64(&cfg.params, "degree", 40) as u32;
    let spec = BasisSpec::for_domain(&cfg.domain, degree);
    let model =
        build_bergman_model(&cfg.domain, &spec, h).map_err(|e| anyhow!("model build: {e}"))?;
    let mesh_h = param_f64(&cfg.params, "mesh", cfg.domain.diameter() / 256.0);
    let mesh = LogKernelGrid::build(&model, mesh_h).map_err(|e| anyhow!("{e}"))?;
    let z0 = cfg.domain.base_point;
    let dists = mesh.distances_from(z0).map_err(|e| anyhow!("{e}"))?;
    let toward = param_point(
        &cfg.params,
        "toward",
        cfg.domain.nearest_boundary_point(z0),
    );
    let dir = {
        let v = toward - z0;
        v * (1.0 / v.norm().max(1e-300))
    };
    let mut csv = Csv::new(&["x", "y", "delta", "kernel", "metric", "distance"]);
    let mut rows = 0;
    for q in 1..60 {
        let z = z0 + dir * (q as f64 / 60.0) * z0.dist(toward);
        if !cfg.domain.contains(z) {
            break;
        }
        let delta = cfg.domain.boundary_distance(z).map_err(|e| anyhow!("{e}"))?;
        if delta < 4.0 * mesh_h {
            break;
        }
        let kd = model.kernel_diag(z).map_err(|e| anyhow!("{e}"))?;
        let b = planpot::bergman::bergman_metric(&model, z, (delta / 8.0).min(mesh_h))
            .unwrap_or(f64::NAN);
        let i = ((z.re - mesh.origin.re) / mesh.h).floor() as usize;
        let j = ((z.im - mesh.origin.im) / mesh.h).floor() as usize;
        let d_b = dists.get(j * mesh.nx + i).copied().unwrap_or(f64::NAN);
        csv.row(&[
            Csv::float(z.re),
            Csv::float(z.im),
            Csv::float(delta),
            Csv::float(kd),
            Csv::float(b),
            Csv::float(d_b),
        ]);
        rows += 1;
    }
    let path = out_dir.join("bergman_ray.csv");
    csv.write(&path)?;
    report.outputs.push(path.display().to_string());
    report.checks.push((
        "bergman-ray-rows".into(),
        rows >= 8,
        format!("{rows} samples along the ray"),
    ));
    Ok(())
}

/// Per-boundary-point density profiles, the weak/strong indices, and the
/// regularity partial sums.
fn task_density(cfg: &ExperimentConfig, out_dir: &Path, report: &mut RunReport) -> Result<()> {
    let params = DensityParams {
        eps: param_f64(&cfg.params, "eps", (-12.0f64).exp2()),
        lambda: param_f64(&cfg.params, "lambda", 0.5),
        gamma: cfg.params.get("gamma").and_then(Value::as_f64),
        n_max: param_u64(&cfg.params, "n_max", 24) as u32,
        n_disc: param_u64(&cfg.params, "points", 96) as usize,
        tol_bnd: param_f64(&cfg.params, "tol_bnd", 0.5 / 1024.0),
    };
    let count = param_u64(&cfg.params, "boundary_sample", 64) as usize;
    let sample = cfg.domain.boundary_sample(count);
    let ws = weak_strong_density(&cfg.domain, &sample, &params).map_err(|e| anyhow!("{e}"))?;
    let mut csv = Csv::new(&["a_re", "a_im", "n", "qualifies", "log_cap_scaled", "d_n"]);
    for p in &ws.profiles {
        for n in 1..=p.n_max {
            csv.row(&[
                Csv::float(p.a.re),
                Csv::float(p.a.im),
                n.to_string(),
                (p.qualifies(n) as u8).to_string(),
                Csv::float(p.log_caps_scaled[(n - 1) as usize]),
                Csv::float(p.d_seq[(n - 1) as usize]),
            ]);
        }
    }
    let path = out_dir.join("density_profiles.csv");
    csv.write(&path)?;
    report.outputs.push(path.display().to_string());

    // anchor profile and regularity sums at a canonical boundary point
    let anchor = param_point(
        &cfg.params,
        "anchor",
        cfg.domain.nearest_boundary_point(cfg.domain.base_point),
    );
    if let Ok(profile) = density_profile(&cfg.domain, anchor, &params) {
        let sums = wiener_sum(&cfg.domain, anchor, params.n_max, params.n_disc)
            .map_err(|e| anyhow!("{e}"))?;
        let mut csv = Csv::new(&["n", "wiener_partial_sum", "d_n"]);
        for (k, s) in sums.iter().enumerate() {
            csv.row(&[
                (k + 1).to_string(),
                Csv::float(*s),
                Csv::float(profile.d_seq[k]),
            ]);
        }
        let path = out_dir.join("regularity_sums.csv");
        csv.write(&path)?;
        report.outputs.push(path.display().to_string());
    }
    report.checks.push((
        "density-indices".into(),
        ws.d_strong <= ws.d_weak + 1e-12,
        format!("D_W est {:.4}, D_S est {:.4}", ws.d_weak, ws.d_strong),
    ));
    Ok(())
}

fn task_verify(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let full = cfg
        .params
        .get("full")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let vc = VerifyConfig {
        full,
        seed: cfg.seed,
    };
    for out in run_all(&vc) {
        println!("{}", out.line());
        report.checks.push((out.id, out.pass, out.detail));
    }
    Ok(())
}

pub fn print_report(report: &RunReport) {
    for (id, pass, detail) in &report.checks {
        println!("[{}] {id} — {detail}", if *pass { "PASS" } else { "FAIL" });
    }
    for out in &report.outputs {
        println!("wrote {out}");
    }
}

pub fn bail_on_invalid(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.params.is_object() || cfg.params.is_null() {
        Ok(())
    } else {
        bail!("params must be an object")
    }
}
