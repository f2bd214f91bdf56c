use super::model::BergmanModel;
use crate::error::{Error, Result};
use crate::geometry::PlanarPoint;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Bergman metric length element `b(z) = sqrt(dd log K / 4)` by a five-point
/// second difference of `log K` with step `h_m`.
pub fn bergman_metric(model: &BergmanModel, z: PlanarPoint, step: f64) -> Result<f64> {
    let delta = model.domain.boundary_distance(z)?;
    if delta < 4.0 * step {
        return Err(Error::Precondition(format!(
            "metric probe clearance {delta:.3e} below 4 h_m = {:.3e}",
            4.0 * step
        )));
    }
    let lk = |p: PlanarPoint| -> Result<f64> { Ok(model.kernel_diag(p)?.max(1e-300).ln()) };
    let c = lk(z)?;
    let e = lk(z + PlanarPoint::new(step, 0.0))?;
    let w = lk(z - PlanarPoint::new(step, 0.0))?;
    let n = lk(z + PlanarPoint::new(0.0, step))?;
    let s = lk(z - PlanarPoint::new(0.0, step))?;
    let lap = (e + w + n + s - 4.0 * c) / (step * step);
    let b2 = lap / 4.0;
    if b2 <= 0.0 {
        return Err(Error::Numeric(format!(
            "nonpositive metric {b2:.3e}; basis too coarse here"
        )));
    }
    Ok(b2.sqrt())
}

/// `log K` sampled on a cell grid with the induced finite-difference metric,
/// ready for geodesic distance queries.
pub struct LogKernelGrid {
    pub origin: PlanarPoint,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub log_k: Vec<f64>,
    pub metric: Vec<f64>,
    inside: Vec<bool>,
}

impl LogKernelGrid {
    pub fn build(model: &BergmanModel, h: f64) -> Result<Self> {
        let (lo, hi) = model.domain.ambient.bbox();
        let nx = (((hi.re - lo.re) / h).round() as usize).max(4);
        let ny = (((hi.im - lo.im) / h).round() as usize).max(4);
        let center = |i: usize, j: usize| {
            PlanarPoint::new(lo.re + (i as f64 + 0.5) * h, lo.im + (j as f64 + 0.5) * h)
        };
        let inside: Vec<bool> = (0..nx * ny)
            .map(|q| model.domain.contains(center(q % nx, q / nx)))
            .collect();
        let log_k: Vec<f64> = (0..nx * ny)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&q| {
                if inside[q] {
                    model.kernel_diag_unchecked(center(q % nx, q / nx)).max(1e-300).ln()
                } else {
                    f64::NAN
                }
            })
            .collect();
        // five-point metric where all neighbors exist; nearest valid value
        // copied toward the wall
        let mut metric = vec![f64::NAN; nx * ny];
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let q = j * nx + i;
                if !inside[q] {
                    continue;
                }
                let (e, w, n, s) = (q + 1, q - 1, q + nx, q - nx);
                if inside[e] && inside[w] && inside[n] && inside[s] {
                    let lap =
                        (log_k[e] + log_k[w] + log_k[n] + log_k[s] - 4.0 * log_k[q]) / (h * h);
                    if lap > 0.0 {
                        metric[q] = (lap / 4.0).sqrt();
                    }
                }
            }
        }
        // fill boundary-adjacent cells from the nearest computed neighbor
        let mut filled = metric.clone();
        for _pass in 0..3 {
            for j in 0..ny {
                for i in 0..nx {
                    let q = j * nx + i;
                    if !inside[q] || filled[q].is_finite() {
                        continue;
                    }
                    let mut best = f64::NAN;
                    for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                            continue;
                        }
                        let v = filled[nj as usize * nx + ni as usize];
                        if v.is_finite() && (!best.is_finite() || v > best) {
                            best = v; // metric grows toward the wall
                        }
                    }
                    if best.is_finite() {
                        filled[q] = best;
                    }
                }
            }
        }
        Ok(Self {
            origin: lo,
            h,
            nx,
            ny,
            log_k,
            metric: filled,
            inside,
        })
    }

    pub fn center(&self, i: usize, j: usize) -> PlanarPoint {
        PlanarPoint::new(
            self.origin.re + (i as f64 + 0.5) * self.h,
            self.origin.im + (j as f64 + 0.5) * self.h,
        )
    }

    fn cell_of(&self, z: PlanarPoint) -> Option<usize> {
        let i = ((z.re - self.origin.re) / self.h).floor();
        let j = ((z.im - self.origin.im) / self.h).floor();
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        let q = j as usize * self.nx + i as usize;
        if self.inside[q] && self.metric[q].is_finite() {
            Some(q)
        } else {
            // search a small neighborhood for a valid start
            let (ci, cj) = (i as i64, j as i64);
            let mut best: Option<(usize, f64)> = None;
            for dj in -2i64..=2 {
                for di in -2i64..=2 {
                    let (ni, nj) = (ci + di, cj + dj);
                    if ni < 0 || nj < 0 || ni as usize >= self.nx || nj as usize >= self.ny {
                        continue;
                    }
                    let nq = nj as usize * self.nx + ni as usize;
                    if self.inside[nq] && self.metric[nq].is_finite() {
                        let d = z.dist(self.center(ni as usize, nj as usize));
                        if best.map_or(true, |(_, bd)| d < bd) {
                            best = Some((nq, d));
                        }
                    }
                }
            }
            best.map(|(q, _)| q)
        }
    }

    /// Geodesic distances from `z0` to every cell: Dijkstra on the
    /// 8-connected grid graph with edge weight `b(midpoint) * edge length`.
    pub fn distances_from(&self, z0: PlanarPoint) -> Result<Vec<f64>> {
        let start = self
            .cell_of(z0)
            .ok_or_else(|| Error::OutsideDomain("geodesic start outside mask".into()))?;
        let n = self.nx * self.ny;
        let mut dist = vec![f64::INFINITY; n];
        dist[start] = 0.0;
        #[derive(PartialEq)]
        struct Entry {
            cost: f64,
            node: usize,
        }
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> Ordering {
                other.cost.partial_cmp(&self.cost).unwrap_or(Ordering::Equal)
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        let mut heap = BinaryHeap::new();
        heap.push(Entry {
            cost: 0.0,
            node: start,
        });
        let dirs: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        while let Some(Entry { cost, node }) = heap.pop() {
            if cost > dist[node] {
                continue;
            }
            let (i, j) = ((node % self.nx) as i64, (node / self.nx) as i64);
            for (di, dj) in dirs {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni as usize >= self.nx || nj as usize >= self.ny {
                    continue;
                }
                let nq = nj as usize * self.nx + ni as usize;
                if !self.inside[nq] || !self.metric[nq].is_finite() {
                    continue;
                }
                // keep diagonal moves from cutting across boundary corners
                if di != 0 && dj != 0 {
                    let a = j as usize * self.nx + ni as usize;
                    let b = nj as usize * self.nx + i as usize;
                    if !self.inside[a] || !self.inside[b] {
                        continue;
                    }
                }
                let len = self.h * ((di * di + dj * dj) as f64).sqrt();
                let w = 0.5 * (self.metric[node] + self.metric[nq]) * len;
                let next = cost + w;
                if next < dist[nq] {
                    dist[nq] = next;
                    heap.push(Entry {
                        cost: next,
                        node: nq,
                    });
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, z0: PlanarPoint, z1: PlanarPoint) -> Result<f64> {
        let d = self.distances_from(z0)?;
        let end = self
            .cell_of(z1)
            .ok_or_else(|| Error::OutsideDomain("geodesic target outside mask".into()))?;
        let v = d[end];
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric("targets disconnected on the geodesic mesh".into()))
        }
    }
}

/// Geodesic Bergman distance between two points on a fresh mesh of spacing
/// `mesh_h`; an upper bound on the true distance, symmetric by construction.
pub fn bergman_distance(
    model: &BergmanModel,
    z0: PlanarPoint,
    z1: PlanarPoint,
    mesh_h: f64,
) -> Result<f64> {
    let mesh = LogKernelGrid::build(model, mesh_h)?;
    mesh.distance(z0, z1)
}
