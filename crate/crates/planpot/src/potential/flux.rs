use super::solver::GridField;
use crate::error::{Error, Result};
use crate::geometry::PlanarPoint;
use std::f64::consts::TAU;

/// A simple closed polyline for flux integrals.
#[derive(Debug, Clone)]
pub struct Contour {
    pub vertices: Vec<PlanarPoint>,
}

impl Contour {
    pub fn new(vertices: Vec<PlanarPoint>) -> Result<Self> {
        if vertices.len() < 8 {
            return Err(Error::Geometry("contour needs at least 8 vertices".into()));
        }
        Ok(Self { vertices })
    }

    pub fn circle(center: PlanarPoint, radius: f64, n: usize) -> Result<Self> {
        let n = n.max(8);
        Self::new(
            (0..n)
                .map(|k| {
                    let th = TAU * k as f64 / n as f64;
                    center + PlanarPoint::new(th.cos(), th.sin()) * radius
                })
                .collect(),
        )
    }

    fn signed_area(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let mut a = 0.0;
        for k in 0..n {
            a += v[k].cross(v[(k + 1) % n]);
        }
        a / 2.0
    }
}

/// Line integral of the outward normal derivative along the contour,
/// `int dG/dn ds`, by central differences of the interpolated field.
/// Contour-independent for homologous contours around the same sources.
pub fn flux(field: &GridField, contour: &Contour) -> Result<f64> {
    let h = field.h;
    let orient = if contour.signed_area() >= 0.0 { 1.0 } else { -1.0 };
    let n = contour.vertices.len();
    let mut total = 0.0f64;
    for k in 0..n {
        let a = contour.vertices[k];
        let b = contour.vertices[(k + 1) % n];
        let len = a.dist(b);
        if len == 0.0 {
            continue;
        }
        let m = ((len / (0.5 * h)).ceil() as usize).max(1);
        let tangent = (b - a) * (1.0 / len);
        // for counterclockwise traversal the outward normal is the tangent
        // rotated minus ninety degrees
        let normal = PlanarPoint::new(tangent.im, -tangent.re) * orient;
        let ds = len / m as f64;
        for q in 0..m {
            let p = a + (b - a) * ((q as f64 + 0.5) / m as f64);
            let up = field.bilinear(p + normal * h);
            let um = field.bilinear(p - normal * h);
            match (up, um) {
                (Some(up), Some(um)) => total += (up - um) / (2.0 * h) * ds,
                _ => {
                    return Err(Error::Precondition(
                        "contour too close to the mask edge for flux stencils".into(),
                    ))
                }
            }
        }
    }
    Ok(total)
}
