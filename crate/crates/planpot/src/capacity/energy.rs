use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Result of maximizing `w^T A w` over the probability simplex.
#[derive(Debug, Clone)]
pub struct SimplexMax {
    pub weights: Vec<f64>,
    pub value: f64,
    pub kkt_residual: f64,
}

/// Active-set solver for `max w^T A w` s.t. `sum w = 1`, `w >= 0`.
///
/// The logarithmic-energy form is strictly concave on probability vectors
/// over distinct support points, so the stationary point on the active face
/// is the global maximum once no weight is negative and no inactive gradient
/// exceeds the multiplier.
pub fn maximize_on_simplex(a: &DMatrix<f64>) -> Result<SimplexMax> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Numeric("energy matrix must be square and nonempty".into()));
    }
    let mut active: Vec<bool> = vec![true; n];
    let mut w = vec![0.0f64; n];
    let mut c = 0.0f64;
    let max_iters = 4 * n + 16;
    let mut converged = false;
    for _ in 0..max_iters {
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let m = idx.len();
        if m == 0 {
            return Err(Error::Numeric("active set emptied out".into()));
        }
        // bordered KKT: stationarity 2 A w = c 1 on the active set, sum w = 1
        let mut kkt = DMatrix::<f64>::zeros(m + 1, m + 1);
        for (r, &i) in idx.iter().enumerate() {
            for (s, &j) in idx.iter().enumerate() {
                kkt[(r, s)] = 2.0 * a[(i, j)];
            }
            kkt[(r, m)] = -1.0;
            kkt[(m, r)] = 1.0;
        }
        let mut rhs = DVector::<f64>::zeros(m + 1);
        rhs[m] = 1.0;
        let sol = kkt
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Numeric("singular KKT system in energy solve".into()))?;
        c = sol[m];
        let mut worst = (0usize, 0.0f64);
        for (r, &i) in idx.iter().enumerate() {
            if sol[r] < worst.1 {
                worst = (i, sol[r]);
            }
        }
        if worst.1 < -1e-12 {
            active[worst.0] = false;
            continue;
        }
        w.iter_mut().for_each(|x| *x = 0.0);
        for (r, &i) in idx.iter().enumerate() {
            w[i] = sol[r].max(0.0);
        }
        // entering test on inactive indices
        let scale = c.abs().max(1.0);
        let mut enter = (usize::MAX, 1e-10 * scale);
        for i in 0..n {
            if active[i] {
                continue;
            }
            let g = 2.0 * (0..n).map(|j| a[(i, j)] * w[j]).sum::<f64>();
            if g - c > enter.1 {
                enter = (i, g - c);
            }
        }
        if enter.0 != usize::MAX {
            active[enter.0] = true;
            continue;
        }
        converged = true;
        break;
    }
    if !converged {
        return Err(Error::Numeric("active-set iteration did not settle".into()));
    }
    // value and KKT residual
    let wv = DVector::from_column_slice(&w);
    let g = a * &wv * 2.0;
    let value = 0.5 * wv.dot(&g);
    let scale = c.abs().max(1.0);
    let mut res = 0.0f64;
    for i in 0..n {
        if w[i] > 0.0 {
            res = res.max((g[i] - c).abs());
        } else {
            res = res.max((g[i] - c).max(0.0));
        }
    }
    Ok(SimplexMax {
        weights: w,
        value,
        kkt_residual: res / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_two_point_split() {
        // symmetric 2x2: optimum is the even split
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        let s = maximize_on_simplex(&a).unwrap();
        assert!((s.weights[0] - 0.5).abs() < 1e-12);
        assert!((s.value + 0.5).abs() < 1e-12);
        assert!(s.kkt_residual < 1e-10);
    }

    #[test]
    fn corner_solution_drops_bad_point() {
        // second point strongly penalized: weight concentrates on the first
        let a = DMatrix::from_row_slice(2, 2, &[-0.1, -5.0, -5.0, -10.0]);
        let s = maximize_on_simplex(&a).unwrap();
        assert!(s.weights[1].abs() < 1e-12);
        assert!((s.weights[0] - 1.0).abs() < 1e-12);
    }
}
