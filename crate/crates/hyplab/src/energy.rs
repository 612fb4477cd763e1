//! Auxiliary-energy machinery: the constants α, β, A, B, the coefficient
//! G_ε(t) and its derivative, the energy E_û(t) of the transformed variable
//! û = sinh^α t · u, the perturbed functional I_ε, and the conformal change
//! to the Euclidean Brezis–Nirenberg form.
//!
//! The sign of G′_ε drives the uniqueness argument: dE/dt = ½G′_ε û² along
//! any solution of the normalized radial equation.

use crate::error::{Error, Result};
use crate::groundstate::{ProfileKind, RadialProfile};
use crate::numutil::{simpson_uniform, unit_sphere_area};
use crate::ode::ProblemParams;
use serde::Serialize;

/// Which line of the sign claim applies to (N, p, λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonoCase {
    /// N = 2, λ below 2(p+1)/(p+3)²: G′ < 0 everywhere.
    AllNegativeTwoD,
    /// N ≥ 3 subcritical, λ below 2(N−1)²(p+1)/(p+3)²: one sign change,
    /// positive before t₁, negative after.
    OneSignChange,
    /// N ≥ 3 subcritical, λ at or above the threshold: G′ > 0 everywhere.
    AllPositiveSubcritical,
    /// Critical exponent, λ above N(N−2)/4: G′ > 0 everywhere (β = 2).
    AllPositiveCritical,
}

/// The four constants of the auxiliary energy and the case classification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyConstants {
    pub alpha: f64,
    pub beta: f64,
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub case: MonoCase,
}

/// α = 2(N−1)/(p+3), β = α(p−1), A = λ − α²(p+1)/2, B = (α/2)(2 − α(p+1)).
pub fn constants(params: &ProblemParams) -> EnergyConstants {
    let n = params.n_dim as f64;
    let p = params.p;
    let alpha = 2.0 * (n - 1.0) / (p + 3.0);
    let beta = alpha * (p - 1.0);
    let a_coeff = params.lambda - alpha * alpha * (p + 1.0) / 2.0;
    let b_coeff = alpha / 2.0 * (2.0 - alpha * (p + 1.0));
    let critical = params.n_dim >= 3
        && (p - ProblemParams::critical_exponent(params.n_dim)).abs() < 1e-12;
    let case = if params.n_dim == 2 {
        MonoCase::AllNegativeTwoD
    } else if critical {
        MonoCase::AllPositiveCritical
    } else if params.lambda < 2.0 * (n - 1.0) * (n - 1.0) * (p + 1.0) / (p + 3.0).powi(2) {
        MonoCase::OneSignChange
    } else {
        MonoCase::AllPositiveSubcritical
    };
    EnergyConstants { alpha, beta, a_coeff, b_coeff, case }
}

/// Closed-form sign-change location for the unperturbed one-sign-change case:
/// G′ = 0 at sinh²t = −B(β−2)/(βA).
pub fn t1_closed_form(c: &EnergyConstants) -> Option<f64> {
    if c.case != MonoCase::OneSignChange || c.a_coeff >= 0.0 {
        return None;
    }
    let s2 = -c.b_coeff * (c.beta - 2.0) / (c.beta * c.a_coeff);
    if s2 > 0.0 {
        Some(s2.sqrt().asinh())
    } else {
        None
    }
}

fn background_up(bg: Option<&RadialProfile>, p: f64, t: f64) -> Result<(f64, f64)> {
    match bg {
        None => Ok((0.0, 0.0)),
        Some(prof) => {
            if t > prof.t_max() {
                return Ok((0.0, 0.0));
            }
            let (u, du) = prof.interpolate(t.max(prof.grid[0]))?;
            let _ = p;
            Ok((u, du))
        }
    }
}

/// G_ε(t) = (A − εU^{p−1}) sinh^β t + B sinh^{β−2} t and its derivative, the
/// latter in the factored form
/// G′ = β sinh^{β−3}t cosh t [(A − εU^{p−1} − (ε(p−1)/β)U^{p−2}U′ tanh t) sinh²t + B(β−2)/β].
pub fn g_and_derivative(
    params: &ProblemParams,
    consts: &EnergyConstants,
    background: Option<&RadialProfile>,
    eps: f64,
    t: f64,
) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("G is defined for t > 0, got {t}")));
    }
    if eps > 0.0 && background.is_none() {
        return Err(Error::Config("epsilon > 0 requires the unperturbed profile".into()));
    }
    let p = params.p;
    let (u, du) = background_up(background, p, t)?;
    let s = t.sinh();
    let ch = t.cosh();
    let upm1 = if eps > 0.0 { u.abs().powf(p - 1.0) } else { 0.0 };
    let upm2_du = if eps > 0.0 { u.abs().powf(p - 2.0) * du } else { 0.0 };
    let (a, b, beta) = (consts.a_coeff, consts.b_coeff, consts.beta);
    let g = (a - eps * upm1) * s.powf(beta) + b * s.powf(beta - 2.0);
    let bracket =
        (a - eps * upm1 - eps * (p - 1.0) / beta * upm2_du * t.tanh()) * s * s + b * (beta - 2.0) / beta;
    let gp = beta * s.powf(beta - 3.0) * ch * bracket;
    Ok((g, gp))
}

/// Sampled auxiliary energy along a profile.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyTrace {
    pub grid: Vec<f64>,
    pub e_hat: Vec<f64>,
    pub g: Vec<f64>,
    pub g_prime: Vec<f64>,
    /// Sign-change locations of G′, refined by bisection to 1e−8.
    pub sign_changes: Vec<f64>,
}

/// Scale the unperturbed ground state into the exact solution of the
/// normalized perturbed equation: (1+ε)^{1/(p−1)}·U solves
/// u″ + (N−1)coth t·u′ + (λ − εU^{p−1})u + u^p = 0.
pub fn normalized_perturbed_profile(u0: &RadialProfile, eps: f64) -> Result<RadialProfile> {
    if eps < 0.0 {
        return Err(Error::Config(format!("epsilon = {eps} < 0")));
    }
    let c = (1.0 + eps).powf(1.0 / (u0.params.p - 1.0));
    let lambda_eff = u0
        .grid
        .iter()
        .enumerate()
        .map(|(i, _)| u0.params.lambda - eps * u0.u[i].abs().powf(u0.params.p - 1.0))
        .collect();
    let mut out = u0.clone();
    out.params.epsilon = eps;
    out.u.iter_mut().for_each(|x| *x *= c);
    out.du.iter_mut().for_each(|x| *x *= c);
    out.amplitude *= c;
    out.nonlin_coeff = 1.0;
    out.lambda_eff = Some(lambda_eff);
    Ok(out)
}

/// Evaluate E_û, G_ε and G′_ε along `profile`, which must solve the
/// normalized equation (nonlinearity coefficient 1). For ε > 0 pass the
/// unperturbed ground state as `background` and the profile produced by
/// [`normalized_perturbed_profile`].
pub fn energy_trace(
    profile: &RadialProfile,
    consts: &EnergyConstants,
    eps: f64,
    background: Option<&RadialProfile>,
) -> Result<EnergyTrace> {
    if eps > 0.0 && background.is_none() {
        return Err(Error::Config("epsilon > 0 requires the unperturbed profile".into()));
    }
    let params = &profile.params;
    let p = params.p;
    let n = profile.grid.len();
    let mut e_hat = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut gp = Vec::with_capacity(n);
    for i in 0..n {
        let t = profile.grid[i];
        let (gv, gpv) = g_and_derivative(params, consts, background, eps, t)?;
        let s = t.sinh();
        let ch = t.cosh();
        let uh = s.powf(consts.alpha) * profile.u[i];
        let uhp = consts.alpha * s.powf(consts.alpha - 1.0) * ch * profile.u[i]
            + s.powf(consts.alpha) * profile.du[i];
        let e = 0.5 * s.powf(consts.beta) * uhp * uhp
            + uh.abs().powf(p + 1.0) / (p + 1.0)
            + 0.5 * gv * uh * uh;
        if !e.is_finite() {
            return Err(Error::Domain(format!("energy not finite at t = {t}")));
        }
        e_hat.push(e);
        g.push(gv);
        gp.push(gpv);
    }
    // locate sign changes of G' and refine between flip brackets
    let mut sign_changes = Vec::new();
    for i in 1..n {
        if gp[i - 1] != 0.0 && gp[i] != 0.0 && gp[i - 1].signum() != gp[i].signum() {
            let mut lo = profile.grid[i - 1];
            let mut hi = profile.grid[i];
            let sign_lo = gp[i - 1].signum();
            while hi - lo > 1e-8 {
                let mid = 0.5 * (lo + hi);
                let (_, gm) = g_and_derivative(params, consts, background, eps, mid)?;
                if gm.signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            sign_changes.push(0.5 * (lo + hi));
        }
    }
    Ok(EnergyTrace { grid: profile.grid.clone(), e_hat, g, g_prime: gp, sign_changes })
}

/// Check a G′ sample sequence against the expected sign pattern of `case`.
/// Returns the number of sign changes and whether the pattern matches.
pub fn pattern_matches(case: MonoCase, g_prime: &[f64]) -> (usize, bool) {
    let signs: Vec<f64> = g_prime.iter().map(|x| x.signum()).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let ok = match case {
        MonoCase::AllNegativeTwoD => changes == 0 && signs[0] < 0.0,
        MonoCase::OneSignChange => changes == 1 && signs[0] > 0.0 && *signs.last().unwrap() < 0.0,
        MonoCase::AllPositiveSubcritical | MonoCase::AllPositiveCritical => {
            changes == 0 && signs[0] > 0.0
        }
    };
    (changes, ok)
}

/// Largest ε from `candidates` preserving the case's sign pattern along a
/// 2000-point scan grid. Each row reports (ε, sign changes, pattern ok).
pub fn epsilon_scan(
    u0: &RadialProfile,
    consts: &EnergyConstants,
    candidates: &[f64],
    scan_to: f64,
) -> Result<(Vec<(f64, usize, bool)>, Option<f64>)> {
    let params = &u0.params;
    let t_hi = scan_to.min(u0.t_max());
    let grid: Vec<f64> = (0..2000).map(|k| 0.01 + (t_hi - 0.01) * k as f64 / 1999.0).collect();
    let mut rows = Vec::new();
    let mut largest = None;
    for &eps in candidates {
        let mut gp = Vec::with_capacity(grid.len());
        for &t in &grid {
            let bg = if eps > 0.0 { Some(u0) } else { None };
            gp.push(g_and_derivative(params, consts, bg, eps, t)?.1);
        }
        let (changes, ok) = pattern_matches(consts.case, &gp);
        if ok {
            largest = Some(largest.map_or(eps, |l: f64| l.max(eps)));
        }
        rows.push((eps, changes, ok));
    }
    Ok((rows, largest))
}

/// A radial function paired with its derivative on a uniform grid, for
/// quadrature of the functionals.
#[derive(Debug, Clone)]
pub struct SampledRadial {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

impl SampledRadial {
    pub fn from_profile(p: &RadialProfile) -> Self {
        Self { grid: p.grid.clone(), u: p.u.clone(), du: p.du.clone() }
    }

    /// Sample a closed form (value, derivative) on a uniform grid.
    pub fn from_fn(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> (f64, f64)) -> Self {
        let grid: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
        let (u, du): (Vec<f64>, Vec<f64>) = grid.iter().map(|&t| f(t)).unzip();
        Self { grid, u, du }
    }

    fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }
}

/// Quadrature value of the perturbed functional with its truncated-tail
/// estimate (reported, never added).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub tail_estimate: f64,
}

/// I_ε(u) = ½∫[u′² − (λ − εU^{p−1})u²] dv − (1+ε)/(p+1)∫(u⁺)^{p+1} dv over the
/// radial measure ω_{N−1} sinh^{N−1}t dt.
pub fn i_eps(
    f: &SampledRadial,
    params: &ProblemParams,
    eps: f64,
    background: Option<&RadialProfile>,
) -> Result<FunctionalValue> {
    if eps > 0.0 && background.is_none() {
        return Err(Error::Config("epsilon > 0 requires the unperturbed profile".into()));
    }
    let p = params.p;
    let omega = unit_sphere_area(params.n_dim);
    let n = f.grid.len();
    let mut quad = Vec::with_capacity(n);
    let mut last_pos = 0.0f64;
    for i in 0..n {
        let t = f.grid[i];
        let w = t.sinh().powf(params.n_dim as f64 - 1.0);
        let upm1 = if eps > 0.0 {
            background_up(background, p, t)?.0.abs().powf(p - 1.0)
        } else {
            0.0
        };
        let lam = params.lambda - eps * upm1;
        let plus = f.u[i].max(0.0);
        let integrand = 0.5 * (f.du[i] * f.du[i] - lam * f.u[i] * f.u[i]) * w
            - (1.0 + eps) / (p + 1.0) * plus.powf(p + 1.0) * w;
        if !integrand.is_finite() {
            return Err(Error::Domain(format!("non-integrable input at t = {t}")));
        }
        quad.push(integrand);
        last_pos = integrand.abs();
    }
    // growth guard: the weighted integrand must not be blowing up at the edge
    let mid = quad[n / 2].abs();
    if last_pos > 1e6 * mid.max(1e-12) && last_pos > 1e3 {
        return Err(Error::Domain(
            "integrand grows toward the truncation radius; input not integrable".into(),
        ));
    }
    let value = simpson_uniform(f.step(), &quad) * omega;
    // exponential tail model from the last decade of samples
    let tail_estimate = tail_model(&f.grid, &quad) * omega;
    Ok(FunctionalValue { value, tail_estimate })
}

fn tail_model(grid: &[f64], integrand: &[f64]) -> f64 {
    let n = grid.len();
    let (a, b) = (integrand[n - 1 - n / 10].abs(), integrand[n - 1].abs());
    if b <= 0.0 || a <= b {
        return 0.0;
    }
    let dt = grid[n - 1] - grid[n - 1 - n / 10];
    let rate = (a / b).ln() / dt;
    integrand[n - 1].abs() / rate
}

/// Second variation I″_ε[U](v, v) for a direction in the spherical-harmonic
/// sector ℓ:
/// ∫[v′² + (ℓ(ℓ+N−2)/sinh²t − λ + εU^{p−1})v²] dv − (1+ε)p∫U^{p−1}v² dv.
pub fn second_variation(
    ground: &RadialProfile,
    eps: f64,
    v: &SampledRadial,
    ell: u32,
) -> Result<f64> {
    let params = &ground.params;
    let p = params.p;
    let omega = unit_sphere_area(params.n_dim);
    let ang = crate::spectral::angular_eigenvalue(ell, params.n_dim);
    let n = v.grid.len();
    let mut quad = Vec::with_capacity(n);
    for i in 0..n {
        let t = v.grid[i];
        let s = t.sinh();
        let w = s.powf(params.n_dim as f64 - 1.0);
        let u = if t > ground.t_max() {
            0.0
        } else {
            ground.interpolate(t.max(ground.grid[0]))?.0
        };
        let upm1 = u.abs().powf(p - 1.0);
        let integrand = (v.du[i] * v.du[i]
            + (ang / (s * s) - (params.lambda - eps * upm1)) * v.u[i] * v.u[i]
            - (1.0 + eps) * p * upm1 * v.u[i] * v.u[i])
            * w;
        quad.push(integrand);
    }
    Ok(simpson_uniform(v.step(), &quad) * omega)
}

/// Conformally transformed profile and functional value.
#[derive(Debug, Clone, Serialize)]
pub struct ConformalResult {
    /// Euclidean radii r = tanh(t/2) of the samples.
    pub r_grid: Vec<f64>,
    pub v: Vec<f64>,
    /// J_ε(v) = ½∫[|∇v|² − a(x)v²]dx − (1+ε)/2*·∫(v⁺)^{2*}dx.
    pub j_eps: f64,
    /// I_ε(u) for the same function, for the identity check.
    pub i_eps: f64,
    /// a(x) > 0 everywhere on the sampled grid.
    pub a_positive: bool,
}

/// Conformal change v(x) = (2/(1−|x|²))^{(N−2)/2} u(x) to the Euclidean form;
/// in the critical case I_ε(u) = J_ε(v).
pub fn conformal_change(
    profile: &RadialProfile,
    eps: f64,
    background: Option<&RadialProfile>,
) -> Result<ConformalResult> {
    let params = &profile.params;
    if params.n_dim == 2 {
        return Err(Error::Domain(
            "conformal exponent (N-2)/2 degenerates in dimension 2".into(),
        ));
    }
    if eps > 0.0 && background.is_none() {
        return Err(Error::Config("epsilon > 0 requires the unperturbed profile".into()));
    }
    let n_dim = params.n_dim as f64;
    let p = params.p;
    let two_star = 2.0 * n_dim / (n_dim - 2.0);
    let omega = unit_sphere_area(params.n_dim);
    let n = profile.grid.len();
    let mut r_grid = Vec::with_capacity(n);
    let mut v_samples = Vec::with_capacity(n);
    let mut quad_j = Vec::with_capacity(n);
    let mut a_positive = true;
    for i in 0..n {
        let t = profile.grid[i];
        let r = (t / 2.0).tanh();
        let omr2 = 1.0 - r * r;
        let conf = 2.0 / omr2;
        let f = conf.powf((n_dim - 2.0) / 2.0);
        let u = profile.u[i];
        let du = profile.du[i];
        let v = f * u;
        // dv/dr = v·(N−2)r/(1−r²) + f·u′(t)·dt/dr, dt/dr = 2/(1−r²)
        let dv = v * (n_dim - 2.0) * r / omr2 + f * du * 2.0 / omr2;
        let upm1 = if eps > 0.0 {
            background_up(background, p, t)?.0.abs().powf(p - 1.0)
        } else {
            0.0
        };
        let a = (params.lambda - n_dim * (n_dim - 2.0) / 4.0 - eps * upm1) * 4.0 / (omr2 * omr2);
        if a <= 0.0 {
            a_positive = false;
        }
        // Euclidean measure r^{N−1} dr = r^{N−1}·(1−r²)/2 dt on the t-grid
        let jac = r.powf(n_dim - 1.0) * omr2 / 2.0;
        let vplus = v.max(0.0);
        quad_j.push(
            (0.5 * (dv * dv - a * v * v) - (1.0 + eps) / two_star * vplus.powf(two_star)) * jac,
        );
        r_grid.push(r);
        v_samples.push(v);
    }
    let h = profile.grid_step();
    let j_val = simpson_uniform(h, &quad_j) * omega;
    let i_val = i_eps(&SampledRadial::from_profile(profile), params, eps, background)?.value;
    Ok(ConformalResult { r_grid, v: v_samples, j_eps: j_val, i_eps: i_val, a_positive })
}
