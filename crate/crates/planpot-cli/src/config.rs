use planpot::geometry::{Ambient, Domain, LogInterval, ObstaclePrimitive, PlanarPoint};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;

/// Task selector of the experiment runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Cap,
    Green,
    Potential,
    Bergman,
    Density,
    Verify,
}

impl Task {
    pub fn parse(s: &str) -> Option<Task> {
        match s {
            "cap" => Some(Task::Cap),
            "green" => Some(Task::Green),
            "potential" => Some(Task::Potential),
            "bergman" => Some(Task::Bergman),
            "density" => Some(Task::Density),
            "verify" => Some(Task::Verify),
            _ => None,
        }
    }
}

/// A validated experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub task: Task,
    pub params: Value,
    pub seed: u64,
}

/// Collects every schema violation with its JSON path instead of stopping at
/// the first.
#[derive(Debug, Default)]
pub struct ConfigErrors {
    pub errors: Vec<String>,
}

impl ConfigErrors {
    fn push(&mut self, path: &str, msg: impl AsRef<str>) {
        self.errors.push(format!("{path}: {}", msg.as_ref()));
    }

    pub fn into_message(self) -> String {
        let mut out = String::from("configuration invalid:\n");
        for e in &self.errors {
            let _ = writeln!(out, "  - {e}");
        }
        out
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let root: Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON in {}: {e}", path.display()))?;
    parse_config_value(&root)
}

pub fn parse_config_value(root: &Value) -> Result<ExperimentConfig, String> {
    let mut errs = ConfigErrors::default();
    let domain = parse_domain(root.get("domain"), "$.domain", &mut errs);
    let task = match root.get("task").and_then(Value::as_str) {
        Some(name) => match Task::parse(name) {
            Some(t) => Some(t),
            None => {
                errs.push("$.task", format!("unknown task '{name}'"));
                None
            }
        },
        None => {
            errs.push("$.task", "missing or non-string task");
            None
        }
    };
    let params = root.get("params").cloned().unwrap_or(Value::Null);
    validate_params(&params, &mut errs);
    let seed = root.get("seed").and_then(Value::as_u64).unwrap_or(1);
    if !errs.errors.is_empty() {
        return Err(errs.into_message());
    }
    Ok(ExperimentConfig {
        domain: domain.expect("validated above"),
        task: task.expect("validated above"),
        params,
        seed,
    })
}

fn validate_params(params: &Value, errs: &mut ConfigErrors) {
    if let Some(lambda) = params.get("lambda") {
        match lambda.as_f64() {
            Some(l) if l > 0.0 && l < 1.0 => {}
            _ => errs.push("$.params.lambda", "must be a number in (0, 1)"),
        }
    }
    if let Some(eps) = params.get("eps") {
        match eps.as_f64() {
            Some(e) if e > 0.0 => {}
            _ => errs.push("$.params.eps", "must be a positive number"),
        }
    }
    if let Some(g) = params.get("gamma") {
        match g.as_f64() {
            Some(v) if v >= 1.0 => {}
            _ => errs.push("$.params.gamma", "must be a number >= 1"),
        }
    }
    if let Some(h) = params.get("grid") {
        match h.as_f64() {
            Some(v) if v > 0.0 => {}
            _ => errs.push("$.params.grid", "must be a positive spacing"),
        }
    }
}

fn point_at(v: Option<&Value>, path: &str, errs: &mut ConfigErrors) -> Option<PlanarPoint> {
    match v {
        Some(Value::Array(a)) if a.len() == 2 => {
            let x = a[0].as_f64();
            let y = a[1].as_f64();
            match (x, y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
                    Some(PlanarPoint::new(x, y))
                }
                _ => {
                    errs.push(path, "components must be finite numbers");
                    None
                }
            }
        }
        Some(_) => {
            errs.push(path, "expected [x, y]");
            None
        }
        None => {
            errs.push(path, "missing point");
            None
        }
    }
}

fn parse_domain(v: Option<&Value>, path: &str, errs: &mut ConfigErrors) -> Option<Domain> {
    let Some(obj) = v.and_then(Value::as_object) else {
        errs.push(path, "missing domain object");
        return None;
    };
    let ambient = match obj.get("ambient").and_then(Value::as_object) {
        Some(amb) => match amb.get("type").and_then(Value::as_str) {
            Some("disk") => {
                let c = point_at(amb.get("center"), &format!("{path}.ambient.center"), errs);
                let r = amb.get("radius").and_then(Value::as_f64);
                match (c, r) {
                    (Some(c), Some(r)) if r > 0.0 => Some(Ambient::Disk { center: c, radius: r }),
                    _ => {
                        errs.push(&format!("{path}.ambient.radius"), "radius must be > 0");
                        None
                    }
                }
            }
            Some("rect") => {
                let lo = point_at(amb.get("min"), &format!("{path}.ambient.min"), errs);
                let hi = point_at(amb.get("max"), &format!("{path}.ambient.max"), errs);
                match (lo, hi) {
                    (Some(lo), Some(hi)) => Some(Ambient::Rect { min: lo, max: hi }),
                    _ => None,
                }
            }
            other => {
                errs.push(
                    &format!("{path}.ambient.type"),
                    format!("expected 'disk' or 'rect', got {other:?}"),
                );
                None
            }
        },
        None => {
            errs.push(&format!("{path}.ambient"), "missing ambient object");
            None
        }
    };
    let mut obstacles = Vec::new();
    if let Some(list) = obj.get("obstacles") {
        match list.as_array() {
            Some(items) => {
                for (k, item) in items.iter().enumerate() {
                    let p = format!("{path}.obstacles[{k}]");
                    if let Some(o) = parse_obstacle(item, &p, errs) {
                        obstacles.push(o);
                    }
                }
            }
            None => errs.push(&format!("{path}.obstacles"), "must be an array"),
        }
    }
    let base = point_at(obj.get("base_point"), &format!("{path}.base_point"), errs);
    let (Some(ambient), Some(base)) = (ambient, base) else {
        return None;
    };
    match Domain::new(ambient, obstacles, base) {
        Ok(d) => Some(d),
        Err(e) => {
            errs.push(path, format!("{e}"));
            None
        }
    }
}

fn parse_obstacle(v: &Value, path: &str, errs: &mut ConfigErrors) -> Option<ObstaclePrimitive> {
    let Some(obj) = v.as_object() else {
        errs.push(path, "obstacle must be an object");
        return None;
    };
    match obj.get("type").and_then(Value::as_str) {
        Some("disk") => {
            let c = point_at(obj.get("center"), &format!("{path}.center"), errs)?;
            let r = obj.get("radius").and_then(Value::as_f64).unwrap_or(-1.0);
            if r <= 0.0 {
                errs.push(&format!("{path}.radius"), "radius must be > 0");
                return None;
            }
            Some(ObstaclePrimitive::Disk { center: c, radius: r })
        }
        Some("segment") => {
            let a = point_at(obj.get("a"), &format!("{path}.a"), errs)?;
            let b = point_at(obj.get("b"), &format!("{path}.b"), errs)?;
            Some(ObstaclePrimitive::Segment { a, b })
        }
        Some("interval_family") => {
            let origin = point_at(obj.get("origin"), &format!("{path}.origin"), errs)?;
            let mut intervals = Vec::new();
            // linear endpoints or log2 endpoints for doubly-exponential families
            if let Some(arr) = obj.get("intervals").and_then(Value::as_array) {
                for (k, iv) in arr.iter().enumerate() {
                    let p = format!("{path}.intervals[{k}]");
                    let pair = iv.as_array().filter(|a| a.len() == 2);
                    let Some(pair) = pair else {
                        errs.push(&p, "expected [left, right]");
                        continue;
                    };
                    let (l, r) = (pair[0].as_f64(), pair[1].as_f64());
                    match (l, r) {
                        (Some(l), Some(r)) => match LogInterval::from_linear(l, r) {
                            Ok(iv) => intervals.push(iv),
                            Err(e) => errs.push(&p, format!("{e}")),
                        },
                        _ => errs.push(&p, "endpoints must be numbers"),
                    }
                }
            } else if let Some(arr) = obj.get("log2_intervals").and_then(Value::as_array) {
                for (k, iv) in arr.iter().enumerate() {
                    let p = format!("{path}.log2_intervals[{k}]");
                    let pair = iv.as_array().filter(|a| a.len() == 2);
                    let Some(pair) = pair else {
                        errs.push(&p, "expected [log2_left, log2_right]");
                        continue;
                    };
                    let (l, r) = (pair[0].as_f64(), pair[1].as_f64());
                    match (l, r) {
                        (Some(l), Some(r)) => match LogInterval::from_log2(l, r) {
                            Ok(iv) => intervals.push(iv),
                            Err(e) => errs.push(&p, format!("{e}")),
                        },
                        _ => errs.push(&p, "endpoints must be numbers"),
                    }
                }
            } else {
                errs.push(path, "interval_family needs 'intervals' or 'log2_intervals'");
            }
            if intervals.is_empty() {
                return None;
            }
            Some(ObstaclePrimitive::IntervalFamily { origin, intervals })
        }
        Some("point_cloud") => {
            let mut points = Vec::new();
            if let Some(arr) = obj.get("points").and_then(Value::as_array) {
                for (k, p) in arr.iter().enumerate() {
                    if let Some(pt) =
                        point_at(Some(p), &format!("{path}.points[{k}]"), errs)
                    {
                        points.push(pt);
                    }
                }
            }
            if points.is_empty() {
                errs.push(path, "point_cloud needs at least one point");
                return None;
            }
            Some(ObstaclePrimitive::PointCloud { points })
        }
        Some("comb") => {
            let origin = point_at(obj.get("origin"), &format!("{path}.origin"), errs)?;
            let lambda = obj.get("lambda").and_then(Value::as_f64).unwrap_or(-1.0);
            let gamma = obj.get("gamma").and_then(Value::as_f64).unwrap_or(-1.0);
            let depth = obj.get("depth").and_then(Value::as_u64).unwrap_or(0) as u32;
            if !(lambda > 0.0 && lambda < 1.0) {
                errs.push(&format!("{path}.lambda"), "must lie in (0, 1)");
                return None;
            }
            if gamma < 1.0 {
                errs.push(&format!("{path}.gamma"), "must be >= 1");
                return None;
            }
            if depth == 0 {
                errs.push(&format!("{path}.depth"), "must be >= 1");
                return None;
            }
            Some(ObstaclePrimitive::CombTeeth {
                origin,
                lambda,
                gamma,
                depth,
            })
        }
        other => {
            errs.push(
                &format!("{path}.type"),
                format!("unknown obstacle type {other:?}"),
            );
            None
        }
    }
}
