use crate::error::{Error, Result};
use crate::geometry::{Domain, ObstaclePrimitive, PlanarPoint};
use num_complex::Complex64;

/// One generator of the square-integrable holomorphic trial space.
#[derive(Debug, Clone, Copy)]
pub enum BasisElement {
    /// `((z - c)/s)^k`
    Poly { center: PlanarPoint, scale: f64, k: u32 },
    /// `(s/(z - p))^k` for a bounded complementary component around `p`
    HolePole { pole: PlanarPoint, scale: f64, k: u32 },
    /// `sqrt(zeta (zeta - 1)) (e2 - e1)/s * ((z - c)/s)^k` with
    /// `zeta = (z - e1)/(e2 - e1)`: jumps exactly across the open segment,
    /// spanning the part of the Bergman space that slit obstacles open up
    Slit {
        e1: PlanarPoint,
        e2: PlanarPoint,
        center: PlanarPoint,
        scale: f64,
        k: u32,
    },
}

impl BasisElement {
    pub fn eval(&self, z: PlanarPoint) -> Complex64 {
        let zc = z.to_complex();
        match *self {
            BasisElement::Poly { center, scale, k } => {
                ((zc - center.to_complex()) / scale).powu(k)
            }
            BasisElement::HolePole { pole, scale, k } => {
                (Complex64::new(scale, 0.0) / (zc - pole.to_complex())).powu(k)
            }
            BasisElement::Slit { e1, e2, center, scale, k } => {
                let d = e2.to_complex() - e1.to_complex();
                let zeta = (zc - e1.to_complex()) / d;
                let branch = (zeta * (zeta - 1.0)).sqrt() * d / scale;
                branch * ((zc - center.to_complex()) / scale).powu(k)
            }
        }
    }
}

/// Span specification for a Bergman model: polynomials up to `degree`, one
/// pole ladder per hole, one branch ladder per slit.
#[derive(Debug, Clone)]
pub struct BasisSpec {
    pub degree: u32,
    pub center: PlanarPoint,
    pub scale: f64,
    pub hole_poles: Vec<(PlanarPoint, f64, u32)>,
    pub slits: Vec<(PlanarPoint, PlanarPoint, u32)>,
}

impl BasisSpec {
    /// Polynomial-only span in the frame of the ambient.
    pub fn polynomial(domain: &Domain, degree: u32) -> Self {
        let (lo, hi) = domain.ambient.bbox();
        Self {
            degree,
            center: (lo + hi) * 0.5,
            scale: 0.5 * (hi - lo).norm() / std::f64::consts::SQRT_2,
            hole_poles: Vec::new(),
            slits: Vec::new(),
        }
    }

    /// Enriches the polynomial span by the obstacles: disk holes contribute
    /// pole ladders at their centers, segments and the longest comb teeth
    /// contribute branch ladders.
    pub fn for_domain(domain: &Domain, degree: u32) -> Self {
        let mut spec = Self::polynomial(domain, degree);
        for obs in &domain.obstacles {
            match obs {
                ObstaclePrimitive::Disk { center, radius } => {
                    spec.hole_poles.push((*center, *radius, degree / 2));
                }
                ObstaclePrimitive::Segment { a, b } => {
                    spec.slits.push((*a, *b, degree));
                }
                ObstaclePrimitive::IntervalFamily { origin, intervals } => {
                    // branch ladders for the widest intervals only
                    let mut ivs: Vec<_> = intervals
                        .iter()
                        .filter(|iv| iv.length() > 0.0)
                        .collect();
                    ivs.sort_by(|p, q| q.length().total_cmp(&p.length()));
                    for iv in ivs.into_iter().take(2) {
                        let (l, r) = iv.linear();
                        spec.slits.push((
                            *origin + PlanarPoint::new(l, 0.0),
                            *origin + PlanarPoint::new(r, 0.0),
                            degree / 2,
                        ));
                    }
                }
                ObstaclePrimitive::CombTeeth { .. } => {
                    let mut teeth = obs.teeth();
                    teeth.sort_by(|p, q| q.0.dist(q.1).total_cmp(&p.0.dist(p.1)));
                    for (a, b) in teeth.into_iter().take(3) {
                        spec.slits.push((a, b, degree / 2));
                    }
                }
                ObstaclePrimitive::PointCloud { .. } => {
                    // polar: removable for square-integrable holomorphic functions
                }
                ObstaclePrimitive::Arc { center, radius, .. } => {
                    spec.hole_poles.push((*center, *radius, degree / 2));
                }
            }
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) {
            return Err(Error::Config("basis scale must be positive".into()));
        }
        Ok(())
    }

    /// Elements in a fixed nested order: polynomials by degree, then slit
    /// ladders, then hole poles; a larger `degree` spec extends a smaller one.
    pub fn elements(&self) -> Vec<BasisElement> {
        let mut out = Vec::new();
        for k in 0..=self.degree {
            out.push(BasisElement::Poly {
                center: self.center,
                scale: self.scale,
                k,
            });
        }
        for &(e1, e2, deg) in &self.slits {
            for k in 0..=deg {
                out.push(BasisElement::Slit {
                    e1,
                    e2,
                    center: self.center,
                    scale: self.scale,
                    k,
                });
            }
        }
        for &(pole, scale, orders) in &self.hole_poles {
            for k in 1..=orders.max(1) {
                out.push(BasisElement::HolePole { pole, scale, k });
            }
        }
        out
    }
}
