use crate::error::{Error, Result};
use crate::geometry::{CompactSet, Domain, PlanarPoint};
use crate::potential::{
    capacity_potential, green_function, prepare, BoundaryValue, DirichletSpec, SolverOptions,
};

/// Counts the qualifying dyadic scales between `delta(z)` and `delta(z0)` at
/// which the sublevel set `{g(., w_k) <= -c}` stays inside the band
/// `{lambda^k < delta < lambda^(k-1)}`, with the probe `w_k` placed at
/// boundary distance between `lambda^(k-1/3)` and `lambda^(k-1/2)`. Each
/// confirmed scale forces one unit of geodesic distance, so the count is the
/// chain lower bound for `d_B(z0, z)`.
pub fn chain_lower_bound(
    domain: &Domain,
    z0: PlanarPoint,
    z: PlanarPoint,
    lambda: f64,
    c: f64,
    qualifying: &[u32],
    h: f64,
) -> Result<usize> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Config("lambda must lie in (0,1)".into()));
    }
    let dz = domain.boundary_distance(z)?;
    let dz0 = domain.boundary_distance(z0)?;
    if dz >= dz0 {
        return Ok(0);
    }
    let ll = (1.0 / lambda).ln();
    let k_min = ((1.0 / dz0).ln() / ll).ceil() as i64 + 1;
    let k_max = ((1.0 / dz).ln() / ll).floor() as i64;
    if k_max < k_min {
        return Ok(0);
    }
    let anchor = domain.nearest_boundary_point(z);
    let dir = {
        let v = z - anchor;
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::Precondition("probe point on the boundary".into()));
        }
        v * (1.0 / n)
    };
    let prepared = prepare(domain, &[], h)?;
    let opts = SolverOptions::default();
    let mut m = 0usize;
    for k in k_min..=k_max {
        if k < 1 || !qualifying.contains(&(k as u32)) {
            continue;
        }
        // target band of boundary distances for the probe
        let lo = lambda.powf(k as f64 - 1.0 / 3.0);
        let hi = lambda.powf(k as f64 - 1.0 / 2.0);
        let target = 0.5 * (lo + hi);
        let Some(w) = place_at_distance(domain, anchor, dir, target, lo, hi) else {
            continue;
        };
        if domain.boundary_distance(w)? < 4.0 * h {
            continue; // too fine for this grid
        }
        let pole = w;
        let data = move |zeta: PlanarPoint| -(zeta.dist(pole).max(1e-300)).ln();
        let spec = DirichletSpec::uniform(domain, BoundaryValue::Func(&data));
        let rep = prepared.run(&spec, &opts)?;
        let band_lo = lambda.powi(k as i32);
        let band_hi = lambda.powi(k as i32 - 1);
        let mut ok = true;
        'cells: for j in 0..rep.field.ny {
            for i in 0..rep.field.nx {
                if let Some(v) = rep.field.get(i, j) {
                    let zc = rep.field.center(i, j);
                    let g = (zc.dist(pole).max(1e-300)).ln() + v;
                    if g <= -c {
                        let delta = domain.boundary_distance_unchecked(zc);
                        if delta <= band_lo || delta >= band_hi {
                            ok = false;
                            break 'cells;
                        }
                    }
                }
            }
        }
        if ok {
            m += 1;
        }
    }
    Ok(m)
}

/// Walks along the ray from `anchor` to put the probe at boundary distance
/// inside `[lo, hi]`; bisection against the analytic distance.
fn place_at_distance(
    domain: &Domain,
    anchor: PlanarPoint,
    dir: PlanarPoint,
    target: f64,
    lo: f64,
    hi: f64,
) -> Option<PlanarPoint> {
    let mut s = target;
    for _ in 0..24 {
        let w = anchor + dir * s;
        if !domain.contains(w) {
            s *= 0.5;
            continue;
        }
        let d = domain.boundary_distance_unchecked(w);
        if d >= lo && d <= hi {
            return Some(w);
        }
        // distance along the outward ray is monotone near the anchor
        s *= target / d.max(1e-300);
        if !(s.is_finite()) || s <= 0.0 {
            return None;
        }
    }
    None
}

/// Band inclusion for the capacity potential: every cell with
/// `g(., w) <= -1` satisfies
/// `phi(w)^((1+beta)/beta)/c < phi < c phi(w)^(beta/(1+beta))`.
pub fn green_band_inclusion(
    domain: &Domain,
    e: &CompactSet,
    w: PlanarPoint,
    beta: f64,
    c: f64,
    h: f64,
) -> Result<bool> {
    if !(beta > 0.0) || !(c > 0.0) {
        return Err(Error::Config("beta and c must be positive".into()));
    }
    let phi = capacity_potential(e, domain, h)?;
    let g = green_function(domain, w, h)?;
    let phi_w = phi
        .bilinear(w)
        .ok_or_else(|| Error::OutsideDomain("probe outside potential mask".into()))?;
    if !(phi_w > 0.0 && phi_w < 1.0) {
        return Err(Error::Numeric(format!("phi(w) = {phi_w} out of (0,1)")));
    }
    let lo = phi_w.powf((1.0 + beta) / beta) / c;
    let hi = c * phi_w.powf(beta / (1.0 + beta));
    for j in 0..g.ny {
        for i in 0..g.nx {
            if let Some(v) = g.get(i, j) {
                if v <= -1.0 {
                    let p = match phi.get(i, j) {
                        Some(p) => p,
                        None => continue,
                    };
                    if p <= lo || p >= hi {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Largest ratio `|phi(z) - phi(w)| * (-log|z - w|)^beta` over the sampled
/// pairs: the constant of the continuity modulus the band argument leans on.
pub fn holder_modulus_constant(
    phi: &crate::potential::GridField,
    pairs: &[(PlanarPoint, PlanarPoint)],
    beta: f64,
) -> Result<f64> {
    let mut c0 = 0.0f64;
    let mut used = 0usize;
    for (z, w) in pairs {
        let (Some(a), Some(b)) = (phi.bilinear(*z), phi.bilinear(*w)) else {
            continue;
        };
        let d = z.dist(*w);
        if !(d > 0.0 && d < 1.0) {
            continue;
        }
        c0 = c0.max((a - b).abs() * (-d.ln()).powf(beta));
        used += 1;
    }
    if used == 0 {
        return Err(Error::Numeric("no usable pairs for the modulus".into()));
    }
    Ok(c0)
}
