use super::ambient::Ambient;
use super::domain::Domain;
use super::point::PlanarPoint;
use super::primitive::ObstaclePrimitive;
use crate::error::{Error, Result};

/// Boolean rasterization of a domain: a cell is interior iff its closed cell
/// is contained in the domain.
#[derive(Debug, Clone)]
pub struct GridMask {
    pub origin: PlanarPoint,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub interior: Vec<bool>,
}

impl GridMask {
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> PlanarPoint {
        PlanarPoint::new(
            self.origin.re + (i as f64 + 0.5) * self.h,
            self.origin.im + (j as f64 + 0.5) * self.h,
        )
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|b| **b).count()
    }

    pub fn interior_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.interior[self.idx(i, j)] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Rasterizes the domain at spacing `h`. Cells whose closed cell lies inside
/// the ambient and meets no obstacle are interior; deterministic for fixed h.
pub fn grid_mask(domain: &Domain, h: f64) -> Result<GridMask> {
    if !(h > 0.0) || h > domain.diameter() / 4.0 {
        return Err(Error::Config(format!(
            "grid spacing {h} too coarse for ambient diameter {}",
            domain.diameter()
        )));
    }
    let (lo, hi) = domain.ambient.bbox();
    let nx = (((hi.re - lo.re) / h).round() as usize).max(1);
    let ny = (((hi.im - lo.im) / h).round() as usize).max(1);
    let mut interior = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let cmin = PlanarPoint::new(lo.re + i as f64 * h, lo.im + j as f64 * h);
            let cmax = PlanarPoint::new(cmin.re + h, cmin.im + h);
            if cell_in_ambient(&domain.ambient, cmin, cmax)
                && domain
                    .obstacles
                    .iter()
                    .all(|o| !cell_meets_obstacle(o, cmin, cmax))
            {
                interior[j * nx + i] = true;
            }
        }
    }
    let mask = GridMask {
        origin: lo,
        h,
        nx,
        ny,
        interior,
    };
    if mask.interior_count() == 0 {
        return Err(Error::Config(
            "no interior cells: obstacles cover the ambient at this resolution".into(),
        ));
    }
    Ok(mask)
}

fn cell_in_ambient(ambient: &Ambient, cmin: PlanarPoint, cmax: PlanarPoint) -> bool {
    match ambient {
        Ambient::Disk { center, radius } => {
            // farthest corner decides containment of the square in the disk
            let dx = (center.re - cmin.re).abs().max((center.re - cmax.re).abs());
            let dy = (center.im - cmin.im).abs().max((center.im - cmax.im).abs());
            dx.hypot(dy) < *radius
        }
        Ambient::Rect { min, max } => {
            cmin.re >= min.re && cmax.re <= max.re && cmin.im >= min.im && cmax.im <= max.im
        }
    }
}

fn seg_meets_rect(a: PlanarPoint, b: PlanarPoint, cmin: PlanarPoint, cmax: PlanarPoint) -> bool {
    let inside = |p: PlanarPoint| {
        p.re >= cmin.re && p.re <= cmax.re && p.im >= cmin.im && p.im <= cmax.im
    };
    if inside(a) || inside(b) {
        return true;
    }
    let corners = [
        cmin,
        PlanarPoint::new(cmax.re, cmin.im),
        cmax,
        PlanarPoint::new(cmin.re, cmax.im),
    ];
    for k in 0..4 {
        if segments_intersect(a, b, corners[k], corners[(k + 1) % 4]) {
            return true;
        }
    }
    false
}

fn segments_intersect(p1: PlanarPoint, p2: PlanarPoint, q1: PlanarPoint, q2: PlanarPoint) -> bool {
    let d1 = (q2 - q1).cross(p1 - q1);
    let d2 = (q2 - q1).cross(p2 - q1);
    let d3 = (p2 - p1).cross(q1 - p1);
    let d4 = (p2 - p1).cross(q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |d: f64, a: PlanarPoint, lo: PlanarPoint, hi: PlanarPoint| {
        d == 0.0
            && a.re >= lo.re.min(hi.re)
            && a.re <= lo.re.max(hi.re)
            && a.im >= lo.im.min(hi.im)
            && a.im <= lo.im.max(hi.im)
    };
    on(d1, p1, q1, q2) || on(d2, p2, q1, q2) || on(d3, q1, p1, p2) || on(d4, q2, p1, p2)
}

fn cell_meets_obstacle(obs: &ObstaclePrimitive, cmin: PlanarPoint, cmax: PlanarPoint) -> bool {
    match obs {
        ObstaclePrimitive::Disk { center, radius } => {
            let nx = center.re.clamp(cmin.re, cmax.re);
            let ny = center.im.clamp(cmin.im, cmax.im);
            center.dist(PlanarPoint::new(nx, ny)) <= *radius
        }
        ObstaclePrimitive::Segment { a, b } => seg_meets_rect(*a, *b, cmin, cmax),
        ObstaclePrimitive::IntervalFamily { origin, intervals } => intervals.iter().any(|iv| {
            let (l, r) = iv.linear();
            seg_meets_rect(
                *origin + PlanarPoint::new(l, 0.0),
                *origin + PlanarPoint::new(r, 0.0),
                cmin,
                cmax,
            )
        }),
        ObstaclePrimitive::PointCloud { points } => points.iter().any(|p| {
            p.re >= cmin.re && p.re <= cmax.re && p.im >= cmin.im && p.im <= cmax.im
        }),
        ObstaclePrimitive::CombTeeth { .. } => obs
            .teeth()
            .into_iter()
            .any(|(a, b)| seg_meets_rect(a, b, cmin, cmax)),
        ObstaclePrimitive::Arc { .. } => {
            // polyline proxy at sub-cell resolution
            let step = ((cmax.re - cmin.re) * 0.5).max(1e-12);
            let curves = obs.curves();
            let c = &curves[0];
            let m = ((c.length() / step).ceil() as usize).clamp(4, 4096);
            let pts: Vec<PlanarPoint> = c.sample(m).into_iter().map(|(p, _)| p).collect();
            pts.windows(2)
                .any(|w| seg_meets_rect(w[0], w[1], cmin, cmax))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disk_coarse_mask_has_four_cells() {
        let d = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![],
            PlanarPoint::new(-0.25, 0.0),
        )
        .unwrap();
        let mask = grid_mask(&d, 0.5).unwrap();
        // the four cells touching the origin are the only squares that fit
        assert_eq!(mask.interior_count(), 4);
        for (i, j) in mask.interior_cells() {
            let c = mask.center(i, j);
            assert!((c.re.abs() - 0.25).abs() < 1e-12);
            assert!((c.im.abs() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn too_coarse_rejected() {
        let d = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![],
            PlanarPoint::new(-0.25, 0.0),
        )
        .unwrap();
        assert!(grid_mask(&d, 0.75).is_err());
    }

    #[test]
    fn area_scaling_under_refinement() {
        let d = Domain::new(
            Ambient::Disk {
                center: PlanarPoint::ZERO,
                radius: 1.0,
            },
            vec![],
            PlanarPoint::new(-0.25, 0.0),
        )
        .unwrap();
        for h in [2.0 / 64.0, 2.0 / 128.0, 2.0 / 256.0] {
            let mask = grid_mask(&d, h).unwrap();
            let area = mask.interior_count() as f64 * h * h;
            assert!(
                (area - std::f64::consts::PI).abs() / std::f64::consts::PI < 0.10,
                "area {area} at h={h}"
            );
        }
    }
}
