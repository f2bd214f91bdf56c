use super::basis::{BasisElement, BasisSpec};
use crate::error::{Error, Result};
use crate::geometry::{grid_mask, Domain, PlanarPoint};
use num_complex::Complex64;
use rayon::prelude::*;

/// Quadrature node over the domain: interior cells carry full cell area,
/// boundary cells are 8x8 supersampled into covered subcells.
#[derive(Debug, Clone, Copy)]
pub struct QuadNode {
    pub pos: PlanarPoint,
    pub weight: f64,
}

/// Bergman-space model: an orthonormalized trial basis via the Cholesky
/// factor of its quadrature Gram matrix.
pub struct BergmanModel {
    pub domain: Domain,
    pub spec: BasisSpec,
    elements: Vec<BasisElement>,
    /// lower-triangular factor over the kept elements, row-major packed
    chol: Vec<Complex64>,
    kept: Vec<usize>,
    pub condition_estimate: f64,
    pub quad_node_count: usize,
}

/// Builds the Gram matrix over a supersampled grid quadrature and factors it,
/// dropping trailing near-dependent elements.
pub fn build_bergman_model(domain: &Domain, spec: &BasisSpec, h: f64) -> Result<BergmanModel> {
    spec.validate()?;
    let nodes = quadrature_nodes(domain, h)?;
    if nodes.iter().filter(|n| n.weight == h * h).count() < 10_000 {
        return Err(Error::Config(format!(
            "quadrature too coarse: fewer than 1e4 interior cells at h = {h}"
        )));
    }
    let elements = spec.elements();
    let b = elements.len();

    // G[i][j] = sum_w w * e_i conj(e_j): accumulate in fixed chunks so the
    // reduction order is independent of thread count
    let chunks: Vec<&[QuadNode]> = nodes.chunks(nodes.len().div_ceil(64).max(1)).collect();
    let partials: Vec<Vec<Complex64>> = chunks
        .par_iter()
        .map(|chunk| {
            let mut g = vec![Complex64::new(0.0, 0.0); b * b];
            let mut vals = vec![Complex64::new(0.0, 0.0); b];
            for node in chunk.iter() {
                for (k, e) in elements.iter().enumerate() {
                    vals[k] = e.eval(node.pos);
                }
                for i in 0..b {
                    let vi = vals[i] * node.weight;
                    for j in 0..=i {
                        g[i * b + j] += vi * vals[j].conj();
                    }
                }
            }
            g
        })
        .collect();
    let mut gram = vec![Complex64::new(0.0, 0.0); b * b];
    for part in partials {
        for (acc, v) in gram.iter_mut().zip(part) {
            *acc += v;
        }
    }
    for i in 0..b {
        for j in (i + 1)..b {
            gram[i * b + j] = gram[j * b + i].conj();
        }
    }

    // pivot-drop Cholesky: trailing elements with non-positive or tiny
    // remaining diagonal are removed rather than failing the factorization
    let trace_mean: f64 = (0..b).map(|i| gram[i * b + i].re).sum::<f64>() / b as f64;
    let drop_tol = 1e-12 * trace_mean;
    let mut kept: Vec<usize> = Vec::with_capacity(b);
    let mut chol: Vec<Complex64> = Vec::new(); // rows over kept indices
    let mut diag_min = f64::INFINITY;
    let mut diag_max = f64::NEG_INFINITY;
    for i in 0..b {
        let m = kept.len();
        let mut row = vec![Complex64::new(0.0, 0.0); m + 1];
        for (r, &kj) in kept.iter().enumerate() {
            let mut acc = gram[i * b + kj];
            for s in 0..r {
                acc -= row[s] * chol[row_start(r) + s].conj();
            }
            row[r] = acc / chol[row_start(r) + r].re;
        }
        let mut dd = gram[i * b + i].re;
        for s in 0..m {
            dd -= row[s].norm_sqr();
        }
        if dd <= drop_tol {
            continue; // near-dependent tail element
        }
        row[m] = Complex64::new(dd.sqrt(), 0.0);
        diag_min = diag_min.min(dd);
        diag_max = diag_max.max(dd);
        chol.extend(row);
        kept.push(i);
    }
    if kept.is_empty() {
        return Err(Error::Numeric("Gram matrix has no positive pivots".into()));
    }
    let condition_estimate = diag_max / diag_min;
    Ok(BergmanModel {
        domain: domain.clone(),
        spec: spec.clone(),
        elements,
        chol,
        kept,
        condition_estimate,
        quad_node_count: nodes.len(),
    })
}

// chol packs rows of increasing length: row r occupies
// [r(r+1)/2, r(r+1)/2 + r]
fn row_start(r: usize) -> usize {
    r * (r + 1) / 2
}

impl BergmanModel {
    pub fn kept_len(&self) -> usize {
        self.kept.len()
    }

    /// Diagonal Bergman kernel `K(z) = sum |phi_k(z)|^2` over the
    /// orthonormalized basis; forward substitution against the factor.
    pub fn kernel_diag(&self, z: PlanarPoint) -> Result<f64> {
        if !self.domain.contains(z) {
            return Err(Error::OutsideDomain(format!(
                "kernel probe ({}, {}) outside the domain",
                z.re, z.im
            )));
        }
        Ok(self.kernel_diag_unchecked(z))
    }

    pub fn kernel_diag_unchecked(&self, z: PlanarPoint) -> f64 {
        let m = self.kept.len();
        let mut y = vec![Complex64::new(0.0, 0.0); m];
        let mut total = 0.0f64;
        for r in 0..m {
            let mut acc = self.elements[self.kept[r]].eval(z);
            let base = row_start(r);
            for s in 0..r {
                acc -= self.chol[base + s] * y[s];
            }
            let v = acc / self.chol[base + r].re;
            y[r] = v;
            total += v.norm_sqr();
        }
        total
    }

    /// `log K` over a grid for metric and geodesic work.
    pub fn log_kernel_grid(&self, h: f64) -> Result<super::metric::LogKernelGrid> {
        super::metric::LogKernelGrid::build(self, h)
    }
}

/// Grid quadrature: interior cells (closed cell inside the domain) at full
/// weight, boundary cells supersampled 8x8; kernel mass near the boundary
/// dominates the distance checks, so partial cells matter.
pub fn quadrature_nodes(domain: &Domain, h: f64) -> Result<Vec<QuadNode>> {
    let mask = grid_mask(domain, h)?;
    let mut nodes = Vec::new();
    let sub = 8usize;
    let sw = h / sub as f64;
    for j in 0..mask.ny {
        for i in 0..mask.nx {
            let q = mask.idx(i, j);
            let c = mask.center(i, j);
            if mask.interior[q] {
                nodes.push(QuadNode {
                    pos: c,
                    weight: h * h,
                });
                continue;
            }
            // supersample cells near the boundary
            let corner = PlanarPoint::new(c.re - h / 2.0, c.im - h / 2.0);
            let mut any = false;
            let mut subnodes = Vec::new();
            for sj in 0..sub {
                for si in 0..sub {
                    let p = PlanarPoint::new(
                        corner.re + (si as f64 + 0.5) * sw,
                        corner.im + (sj as f64 + 0.5) * sw,
                    );
                    if domain.contains(p) {
                        any = true;
                        subnodes.push(QuadNode {
                            pos: p,
                            weight: sw * sw,
                        });
                    }
                }
            }
            if any {
                nodes.extend(subnodes);
            }
        }
    }
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domains;

    #[test]
    fn disk_gram_diagonal_matches_moments() {
        // int_D |z|^(2k) dA = pi/(k+1)
        let d = domains::unit_disk();
        let spec = BasisSpec {
            degree: 12,
            center: PlanarPoint::ZERO,
            scale: 1.0,
            hole_poles: vec![],
            slits: vec![],
        };
        let nodes = quadrature_nodes(&d, 2.0 / 256.0).unwrap();
        for k in [0u32, 3, 8, 12] {
            let e = BasisElement::Poly {
                center: PlanarPoint::ZERO,
                scale: 1.0,
                k,
            };
            let got: f64 = nodes.iter().map(|n| e.eval(n.pos).norm_sqr() * n.weight).sum();
            let expect = std::f64::consts::PI / (k as f64 + 1.0);
            assert!(
                (got - expect).abs() / expect < 0.01,
                "moment k={k}: {got} vs {expect}"
            );
        }
        let _ = spec;
    }

    #[test]
    fn disk_kernel_center_and_half() {
        let d = domains::unit_disk();
        let spec = BasisSpec::polynomial(&d, 40);
        let model = build_bergman_model(&d, &spec, 2.0 / 256.0).unwrap();
        let k0 = model.kernel_diag(PlanarPoint::ZERO).unwrap();
        let expect0 = 1.0 / std::f64::consts::PI;
        assert!((k0 - expect0).abs() / expect0 < 0.01, "K(0) = {k0}");
        let k5 = model.kernel_diag(PlanarPoint::new(0.5, 0.0)).unwrap();
        let expect5 = 1.0 / (std::f64::consts::PI * (1.0 - 0.25f64).powi(2));
        assert!((k5 - expect5).abs() / expect5 < 0.01, "K(0.5) = {k5}");
    }

    #[test]
    fn constant_only_model_gram_is_area() {
        let d = domains::unit_disk();
        let spec = BasisSpec {
            degree: 0,
            center: PlanarPoint::ZERO,
            scale: 1.0,
            hole_poles: vec![],
            slits: vec![],
        };
        let model = build_bergman_model(&d, &spec, 2.0 / 256.0).unwrap();
        // K(z) = 1/area for the single constant element
        let k = model.kernel_diag(PlanarPoint::new(0.3, -0.2)).unwrap();
        let area = std::f64::consts::PI;
        assert!((k - 1.0 / area).abs() / (1.0 / area) < 0.01);
    }

    #[test]
    fn kernel_monotone_in_degree() {
        let d = domains::unit_disk();
        let m40 = build_bergman_model(&d, &BasisSpec::polynomial(&d, 40), 2.0 / 256.0).unwrap();
        let m56 = build_bergman_model(&d, &BasisSpec::polynomial(&d, 56), 2.0 / 256.0).unwrap();
        for p in [
            PlanarPoint::new(0.7, 0.1),
            PlanarPoint::new(-0.4, 0.45),
            PlanarPoint::new(0.0, -0.85),
        ] {
            let a = m40.kernel_diag(p).unwrap();
            let b = m56.kernel_diag(p).unwrap();
            assert!(b >= a * (1.0 - 1e-9), "K_56 {b} < K_40 {a} at {p:?}");
        }
    }

    #[test]
    fn annulus_pole_block_finite_and_stable() {
        let d = domains::annulus(0.5);
        let spec40 = BasisSpec::for_domain(&d, 40);
        let m40 = build_bergman_model(&d, &spec40, 2.0 / 256.0).unwrap();
        let spec60 = BasisSpec::for_domain(&d, 60);
        let m60 = build_bergman_model(&d, &spec60, 2.0 / 256.0).unwrap();
        let z = PlanarPoint::new(0.75, 0.0);
        let a = m40.kernel_diag(z).unwrap();
        let b = m60.kernel_diag(z).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert!(
            (b - a).abs() / b < 0.01,
            "annulus self-convergence: K40 = {a}, K60 = {b}"
        );
    }
}
