//! Piecewise cubic Hermite interpolation on a uniform grid, built from stored
//! (value, derivative) pairs. C¹, with interpolation error O(h⁴) on smooth data.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicHermite {
    t0: f64,
    h: f64,
    u: Vec<f64>,
    du: Vec<f64>,
}

impl CubicHermite {
    /// `grid` must be uniform and strictly increasing; `u`, `du` are samples of
    /// the function and its derivative at the nodes.
    pub fn new(grid: &[f64], u: &[f64], du: &[f64]) -> Result<Self> {
        if grid.len() < 2 || grid.len() != u.len() || grid.len() != du.len() {
            return Err(Error::Config("interpolant needs matching arrays of length >= 2".into()));
        }
        let h = grid[1] - grid[0];
        let n = grid.len();
        let span = grid[n - 1] - grid[0];
        let expected = span / (n - 1) as f64;
        if (h - expected).abs() > 1e-9 * expected.abs().max(1.0) {
            return Err(Error::Config("interpolant grid must be uniform".into()));
        }
        Ok(Self { t0: grid[0], h, u: u.to_vec(), du: du.to_vec() })
    }

    pub fn t_min(&self) -> f64 {
        self.t0
    }

    pub fn t_max(&self) -> f64 {
        self.t0 + self.h * (self.u.len() - 1) as f64
    }

    /// Value and derivative at `t`. Errors when `t` is outside the grid (a
    /// hair of roundoff slack at the ends is tolerated).
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let n = self.u.len();
        let slack = 1e-12 * self.h.max(1.0);
        if t < self.t0 - slack || t > self.t_max() + slack {
            return Err(Error::Range(format!(
                "t = {t} outside interpolation range [{}, {}]",
                self.t0,
                self.t_max()
            )));
        }
        let mut cell = ((t - self.t0) / self.h).floor() as isize;
        cell = cell.clamp(0, n as isize - 2);
        let j = cell as usize;
        let s = (t - (self.t0 + self.h * j as f64)) / self.h;
        let (u0, u1) = (self.u[j], self.u[j + 1]);
        let (m0, m1) = (self.du[j] * self.h, self.du[j + 1] * self.h);
        // Hermite basis
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let val = h00 * u0 + h10 * m0 + h01 * u1 + h11 * m1;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        let der = (d00 * u0 + d10 * m0 + d01 * u1 + d11 * m1) / self.h;
        Ok((val, der))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t0: f64, h: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t0 + h * i as f64).collect()
    }

    #[test]
    fn reproduces_nodes_exactly() {
        let ts = grid(0.0, 0.25, 9);
        let u: Vec<f64> = ts.iter().map(|t| t.exp()).collect();
        let du = u.clone();
        let c = CubicHermite::new(&ts, &u, &du).unwrap();
        for (i, &t) in ts.iter().enumerate() {
            let (v, d) = c.eval(t).unwrap();
            assert_eq!(v, u[i]);
            assert!((d - du[i]).abs() < 1e-12 * du[i].abs());
        }
    }

    #[test]
    fn linear_data_exact() {
        let ts = grid(1.0, 0.5, 7);
        let u: Vec<f64> = ts.iter().map(|t| 3.0 * t - 2.0).collect();
        let du = vec![3.0; 7];
        let c = CubicHermite::new(&ts, &u, &du).unwrap();
        let (v, d) = c.eval(2.13).unwrap();
        assert!((v - (3.0 * 2.13 - 2.0)).abs() < 1e-14);
        assert!((d - 3.0).abs() < 1e-13);
    }

    #[test]
    fn sin_interpolation_error() {
        let h = 0.01;
        let n = 315; // covers [0, 3.14]
        let ts = grid(0.0, h, n);
        let u: Vec<f64> = ts.iter().map(|t| t.sin()).collect();
        let du: Vec<f64> = ts.iter().map(|t| t.cos()).collect();
        let c = CubicHermite::new(&ts, &u, &du).unwrap();
        let mut max_err: f64 = 0.0;
        for k in 0..5000 {
            let t = 3.14 * (k as f64 + 0.5) / 5000.0;
            let (v, _) = c.eval(t).unwrap();
            max_err = max_err.max((v - t.sin()).abs());
        }
        assert!(max_err < 1e-8, "max interpolation error {max_err}");
    }

    #[test]
    fn out_of_range_rejected() {
        let ts = grid(0.0, 0.1, 5);
        let u = vec![0.0; 5];
        let du = vec![0.0; 5];
        let c = CubicHermite::new(&ts, &u, &du).unwrap();
        assert!(matches!(c.eval(-0.05), Err(Error::Range(_))));
        assert!(matches!(c.eval(0.45), Err(Error::Range(_))));
    }
}
