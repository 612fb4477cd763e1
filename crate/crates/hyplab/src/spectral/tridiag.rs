//! Symmetric tridiagonal eigensolver: Sturm-sequence counting with bisection
//! for eigenvalues, inverse iteration with a partially pivoted solve for
//! eigenvectors.

use crate::error::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Number of eigenvalues of T strictly below `sigma`, by counting negative
/// pivots of the LDLᵀ recurrence.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], sigma: f64) -> usize {
    let n = diag.len();
    debug_assert_eq!(offdiag.len() + 1, n);
    let mut count = 0usize;
    let mut q = diag[0] - sigma;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if q == 0.0 { 1e-300 } else { q };
        q = diag[i] - sigma - offdiag[i - 1] * offdiag[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin bounds enclosing the whole spectrum.
pub fn gershgorin(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { offdiag[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// k-th eigenvalue (0-based, ascending) by bisection on the Sturm count,
/// to absolute accuracy `tol`.
pub fn eigenvalue_k(diag: &[f64], offdiag: &[f64], k: usize, tol: f64) -> Result<f64> {
    let n = diag.len();
    if k >= n {
        return Err(Error::Size(format!("eigenvalue index {k} out of range for size {n}")));
    }
    let (mut lo, mut hi) = gershgorin(diag, offdiag);
    lo -= 1e-10;
    hi += 1e-10;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break; // bisection hit floating-point resolution
        }
        if sturm_count(diag, offdiag, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lowest `k` eigenvalues in ascending order.
pub fn lowest_eigenvalues(diag: &[f64], offdiag: &[f64], k: usize, tol: f64) -> Result<Vec<f64>> {
    (0..k).map(|i| eigenvalue_k(diag, offdiag, i, tol)).collect()
}

/// Multiplicity of the eigenvalue nearest `mu` inside `window`, from the
/// jump of the Sturm count.
pub fn count_in_window(diag: &[f64], offdiag: &[f64], mu: f64, window: f64) -> usize {
    sturm_count(diag, offdiag, mu + window) - sturm_count(diag, offdiag, mu - window)
}

/// Solve (T − mu·I) x = b with partial pivoting (two-band fill-in).
fn solve_shifted(diag: &[f64], offdiag: &[f64], mu: f64, b: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    // bands: l = subdiagonal multipliers applied on the fly; u0 main, u1, u2 super
    let mut u0: Vec<f64> = diag.iter().map(|d| d - mu).collect();
    let mut u1: Vec<f64> = offdiag.to_vec();
    u1.push(0.0);
    let mut u2 = vec![0.0f64; n];
    let mut x = b.to_vec();
    for i in 0..n - 1 {
        let sub = offdiag[i];
        if u0[i].abs() >= sub.abs() {
            if u0[i] == 0.0 {
                u0[i] = 1e-300;
            }
            let m = sub / u0[i];
            u0[i + 1] -= m * u1[i];
            // u2 stays
            x[i + 1] -= m * x[i];
        } else {
            // swap rows i and i+1
            let (r0, r1) = (
                [u0[i], u1[i], u2[i], x[i]],
                [sub, u0[i + 1], u1[i + 1], x[i + 1]],
            );
            u0[i] = r1[0];
            u1[i] = r1[1];
            u2[i] = r1[2];
            x[i] = r1[3];
            let m = r0[0] / r1[0];
            u0[i + 1] = r0[1] - m * r1[1];
            u1[i + 1] = r0[2] - m * r1[2];
            x[i + 1] = r0[3] - m * r1[3];
        }
    }
    if u0[n - 1] == 0.0 {
        u0[n - 1] = 1e-300;
    }
    // back substitution
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / u0[i];
    }
    Ok(x)
}

fn residual_norm(diag: &[f64], offdiag: &[f64], mu: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut r2 = 0.0;
    for i in 0..n {
        let mut av = diag[i] * v[i];
        if i > 0 {
            av += offdiag[i - 1] * v[i - 1];
        }
        if i < n - 1 {
            av += offdiag[i] * v[i + 1];
        }
        let r = av - mu * v[i];
        r2 += r * r;
    }
    r2.sqrt()
}

/// Inverse iteration for the eigenvector of an isolated eigenvalue `mu`
/// (located to ~1e−12 beforehand). Errors when the eigenvalue is degenerate
/// within 1e−10 or the iteration fails to reach residual 1e−8 in 50 rounds.
pub fn inverse_iteration(diag: &[f64], offdiag: &[f64], mu: f64, seed: u64) -> Result<Vec<f64>> {
    let n = diag.len();
    if count_in_window(diag, offdiag, mu, 1e-10) > 1 {
        return Err(Error::Degenerate(format!(
            "eigenvalue {mu} is not isolated within 1e-10"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    for _ in 0..50 {
        let mut w = solve_shifted(diag, offdiag, mu, &v)?;
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm == 0.0 {
            // restart from a fresh random direction
            v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= nrm);
            continue;
        }
        w.iter_mut().for_each(|x| *x /= nrm);
        let res = residual_norm(diag, offdiag, mu, &w);
        v = w;
        if res < 1e-8 {
            // fix the sign convention: first significant component positive
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            return Ok(v);
        }
    }
    Err(Error::Degenerate(format!(
        "inverse iteration did not converge for eigenvalue {mu}"
    )))
}
