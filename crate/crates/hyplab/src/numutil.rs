//! Small numerical helpers: quadrature on uniform grids, least-squares slope,
//! median, unit-sphere area.

use std::f64::consts::PI;

/// Composite Simpson rule on a uniform grid. An odd final interval is closed
/// with the Simpson 3/8 rule so every point contributes at fourth order.
pub fn simpson_uniform(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    assert!(n >= 2, "need at least two samples");
    if n == 2 {
        return 0.5 * h * (f[0] + f[1]);
    }
    let intervals = n - 1;
    let (simpson_end, tail38) = if intervals % 2 == 0 {
        (n - 1, false)
    } else if intervals >= 3 {
        (n - 4, true)
    } else {
        (0, true)
    };
    let mut total = 0.0;
    if simpson_end >= 2 {
        let mut acc = f[0] + f[simpson_end];
        let mut i = 1;
        while i < simpson_end {
            acc += 4.0 * f[i];
            if i + 1 < simpson_end {
                acc += 2.0 * f[i + 1];
            }
            i += 2;
        }
        total += acc * h / 3.0;
    }
    if tail38 {
        let j = n - 4;
        total += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
    }
    total
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    sxy / sxx
}

/// Median of a slice (copies and sorts).
pub fn median(v: &[f64]) -> f64 {
    let mut w: Vec<f64> = v.to_vec();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = w.len();
    if n % 2 == 1 {
        w[n / 2]
    } else {
        0.5 * (w[n / 2 - 1] + w[n / 2])
    }
}

/// Surface area of the unit sphere S^{N−1} in R^N.
pub fn unit_sphere_area(n_dim: u32) -> f64 {
    // ω_{N−1} = 2 π^{N/2} / Γ(N/2), evaluated with exact integer/half-integer Γ.
    let n = n_dim as f64;
    if n_dim % 2 == 0 {
        let k = (n_dim / 2) as usize;
        let mut fact = 1.0;
        for i in 1..k {
            fact *= i as f64;
        }
        2.0 * PI.powi(k as i32) / fact
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let k = ((n_dim - 1) / 2) as usize;
        let mut gamma_half = PI.sqrt();
        for i in 0..k {
            gamma_half *= i as f64 + 0.5;
        }
        2.0 * PI.powf(n / 2.0) / gamma_half
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics() {
        let h = 0.1;
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(3) - 2.0 * x + 1.0).collect();
        // ∫₀¹ (x³ − 2x + 1) dx = 1/4 − 1 + 1 = 1/4
        assert!((simpson_uniform(h, &f) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn simpson_odd_interval_count() {
        let h = 0.1;
        let xs: Vec<f64> = (0..=9).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let exact = 1.0 - (0.9f64).cos();
        // composite 4th-order error at h = 0.1 is a few times 1e-7
        assert!((simpson_uniform(h, &f) - exact).abs() < 1e-6);
    }

    #[test]
    fn slope_recovers_line() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|xi| -1.5 * xi + 3.0).collect();
        assert!((ls_slope(&x, &y) + 1.5).abs() < 1e-13);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }
}
