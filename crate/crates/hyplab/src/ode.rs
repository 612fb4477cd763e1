//! Radial ODE u″ + (N−1)coth(t)·u′ + λ_ε u + κ|u|^{p−1}u = 0 integrated from
//! the regular-singular origin with a Dormand–Prince 5(4) pair, dense output,
//! and trajectory classification for shooting.

use crate::error::{Error, Result};
use crate::interp::CubicHermite;
use crate::numutil::median;
use serde::{Deserialize, Serialize};

/// Which line of the admissibility conditions the parameters satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Subcritical,
    Critical,
    TwoD,
}

/// Problem parameters (N, p, λ, ε) with their admissibility classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemParams {
    pub n_dim: u32,
    pub p: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub regime: Regime,
}

impl ProblemParams {
    /// Critical Sobolev exponent (N+2)/(N−2) for N ≥ 3.
    pub fn critical_exponent(n_dim: u32) -> f64 {
        (n_dim as f64 + 2.0) / (n_dim as f64 - 2.0)
    }

    /// Classify (N, p, λ) against the admissibility conditions; the rejection
    /// message names the inequality that failed.
    pub fn validate(n_dim: u32, p: f64, lambda: f64) -> Result<Self> {
        if n_dim < 2 {
            return Err(Error::Params(format!("N = {n_dim} < 2")));
        }
        if p <= 1.0 {
            return Err(Error::Params(format!("p = {p} <= 1")));
        }
        let n = n_dim as f64;
        let regime = if n_dim == 2 {
            let bound = 2.0 * (p + 1.0) / (p + 3.0).powi(2);
            if lambda >= bound {
                return Err(Error::Params(format!(
                    "N = 2 requires lambda < 2(p+1)/(p+3)^2 = {bound}, got {lambda}"
                )));
            }
            Regime::TwoD
        } else {
            let pc = Self::critical_exponent(n_dim);
            let top = ((n - 1.0) / 2.0).powi(2);
            if p > pc {
                return Err(Error::Params(format!(
                    "p = {p} exceeds the critical exponent (N+2)/(N-2) = {pc} in dimension {n_dim}"
                )));
            }
            if (p - pc).abs() < 1e-12 {
                if n_dim == 3 {
                    return Err(Error::Params(
                        "critical exponent in dimension 3: no positive solution for any lambda"
                            .into(),
                    ));
                }
                let bottom = n * (n - 2.0) / 4.0;
                if lambda <= bottom {
                    return Err(Error::Params(format!(
                        "critical case requires lambda > N(N-2)/4 = {bottom}, got {lambda}"
                    )));
                }
                if lambda >= top {
                    return Err(Error::Params(format!(
                        "critical case requires lambda < ((N-1)/2)^2 = {top}, got {lambda}"
                    )));
                }
                Regime::Critical
            } else {
                if lambda >= top {
                    return Err(Error::Params(format!(
                        "subcritical case requires lambda < ((N-1)/2)^2 = {top}, got {lambda}"
                    )));
                }
                Regime::Subcritical
            }
        };
        Ok(Self { n_dim, p, lambda, epsilon: 0.0, regime })
    }

    /// Same parameters with a perturbation strength; ε > 0 only enters the
    /// Morse-index and uniqueness workflows.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if epsilon < 0.0 {
            return Err(Error::Params(format!("epsilon = {epsilon} < 0")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Fast decay rate γ₊ = [N−1+√((N−1)²−4λ)]/2.
    pub fn gamma_plus(&self) -> f64 {
        let n1 = self.n_dim as f64 - 1.0;
        (n1 + (n1 * n1 - 4.0 * self.lambda).sqrt()) / 2.0
    }

    /// Slow decay rate γ₋ = [N−1−√((N−1)²−4λ)]/2.
    pub fn gamma_minus(&self) -> f64 {
        let n1 = self.n_dim as f64 - 1.0;
        (n1 - (n1 * n1 - 4.0 * self.lambda).sqrt()) / 2.0
    }
}

/// State (t, u, u′) of the radial trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeState {
    pub t: f64,
    pub u: f64,
    pub du: f64,
}

/// Shooting dichotomy verdict for one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryClass {
    /// u changes sign; carries the interpolated first zero.
    CrossesZero { t_cross: f64 },
    /// Tail follows the slow rate −γ₋.
    SlowDecay,
    /// Tail follows the fast rate −γ₊ (the ground-state behavior).
    FastDecayCandidate,
    /// |u| exceeded the overflow limit while positive.
    Blowup,
}

/// The radial equation. `background` supplies U for the perturbed coefficient
/// λ_ε(t) = λ − εU(t)^{p−1}; `nonlin_coeff` is the constant κ multiplying the
/// nonlinearity (1 for the plain equation, 1+ε for the perturbed one whose
/// exact solution is U itself).
#[derive(Clone)]
pub struct RadialEquation<'a> {
    pub params: &'a ProblemParams,
    pub background: Option<&'a CubicHermite>,
    pub nonlin_coeff: f64,
}

impl<'a> RadialEquation<'a> {
    pub fn new(params: &'a ProblemParams) -> Result<Self> {
        if params.epsilon > 0.0 {
            return Err(Error::Config(
                "epsilon > 0 requires a background profile; use with_background".into(),
            ));
        }
        Ok(Self { params, background: None, nonlin_coeff: 1.0 })
    }

    pub fn with_background(
        params: &'a ProblemParams,
        background: &'a CubicHermite,
        nonlin_coeff: f64,
    ) -> Self {
        Self { params, background: Some(background), nonlin_coeff }
    }

    fn lambda_eff(&self, t: f64) -> f64 {
        match (self.params.epsilon > 0.0, self.background) {
            (true, Some(bg)) => {
                // beyond the stored grid U has decayed to nothing; below it
                // U is flat to O(t0²) and the first sample serves
                let u_bg = if t > bg.t_max() {
                    0.0
                } else {
                    bg.value(t.max(bg.t_min())).unwrap_or(0.0)
                };
                self.params.lambda - self.params.epsilon * u_bg.abs().powf(self.params.p - 1.0)
            }
            _ => self.params.lambda,
        }
    }

    /// u″ = −(N−1)coth(t)·u′ − λ_ε(t)·u − κ|u|^{p−1}u. The signed power keeps
    /// the flow defined past a zero crossing for classification.
    pub fn accel(&self, t: f64, u: f64, du: f64) -> f64 {
        let n1 = self.params.n_dim as f64 - 1.0;
        let coth = 1.0 / t.tanh();
        let nonlin = self.nonlin_coeff * u.signum() * u.abs().powf(self.params.p);
        -n1 * coth * du - self.lambda_eff(t) * u - nonlin
    }

    /// Curvature c of the Taylor launch u(t) = a + c t²/2 with
    /// N·c + λ_ε(0)·a + κ·a^p = 0 (the L'Hôpital limit of the equation at 0).
    pub fn series_curvature(&self, a: f64) -> f64 {
        let lam0 = self.lambda_eff(1e-300);
        -(lam0 * a + self.nonlin_coeff * a.powf(self.params.p)) / self.params.n_dim as f64
    }

    /// Second-order Taylor start at t0: u = a + c t0²/2, u′ = c t0. For large
    /// amplitudes t0 is shrunk so the neglected quartic term stays below
    /// 1e−9·a; the configured t0 is only a cap.
    pub fn series_start(&self, a: f64, t0: f64) -> OdeState {
        let c = self.series_curvature(a);
        let t0 = t0.min(self.series_t0(a));
        OdeState { t: t0, u: a + 0.5 * c * t0 * t0, du: c * t0 }
    }

    /// Largest start time keeping the quartic Taylor term below 1e−9·a.
    pub fn series_t0(&self, a: f64) -> f64 {
        let n = self.params.n_dim as f64;
        let c = self.series_curvature(a);
        let fprime = self.lambda_eff(1e-300)
            + self.nonlin_coeff * self.params.p * a.abs().powf(self.params.p - 1.0);
        // u⁗(0) from the next order of the expansion
        let d = -c * (2.0 * (n - 1.0) + 3.0 * fprime) / (n + 2.0);
        if d.abs() < 1e-30 {
            return 1e-2;
        }
        (24.0 * 1e-9 * a.abs().max(1e-30) / d.abs()).powf(0.25)
    }
}

/// Integration controls. `atol` defaults to a denormal-scale floor so that
/// relative accuracy is kept over hundreds of decades of exponential decay.
#[derive(Debug, Clone)]
pub struct IntegrateControls {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// |u| above this (times max(1, amplitude)) terminates as blowup.
    pub overflow: f64,
    /// Terminate when u drops below this (absolute); 0 disables.
    pub u_floor: f64,
    /// Terminate at the first sign change of u.
    pub stop_on_crossing: bool,
}

impl Default for IntegrateControls {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-250,
            h_init: 1e-6,
            h_max: 0.2,
            h_min: 1e-12,
            max_steps: 2_000_000,
            overflow: 1e8,
            u_floor: 0.0,
            stop_on_crossing: false,
        }
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedEnd,
    CrossedZero { t_cross: f64 },
    HitFloor,
    Overflow,
}

/// One accepted step with the dense-output coefficients of the embedded pair.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    // rcont[k][component]; quartic Hermite-type interpolant of the 5(4) pair
    rcont: [[f64; 2]; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> [f64; 2] {
        let theta = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1
                            * (self.rcont[2][i]
                                + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        out
    }
}

/// An integrated trajectory with dense output over every accepted step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub start: OdeState,
    pub end: OdeState,
    pub steps: Vec<DenseStep>,
    pub termination: Termination,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl Trajectory {
    /// Dense-output sample at `t` within the integrated span.
    pub fn sample(&self, t: f64) -> Result<OdeState> {
        if t < self.start.t - 1e-12 || t > self.end.t + 1e-12 {
            return Err(Error::Range(format!(
                "t = {t} outside trajectory span [{}, {}]",
                self.start.t, self.end.t
            )));
        }
        if t <= self.start.t {
            return Ok(self.start);
        }
        let idx = self
            .steps
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.steps.len().saturating_sub(1));
        let y = self.steps[idx].eval(t);
        Ok(OdeState { t, u: y[0], du: y[1] })
    }
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Adaptive integration of u″ = accel(t, u, u′) from `start` to `t_end`.
pub fn integrate<F: Fn(f64, f64, f64) -> f64>(
    accel: &F,
    start: OdeState,
    t_end: f64,
    ctl: &IntegrateControls,
) -> Result<Trajectory> {
    if !(t_end > start.t) {
        return Err(Error::Config(format!("t_end = {t_end} must exceed start.t = {}", start.t)));
    }
    let mut t = start.t;
    let mut y = [start.u, start.du];
    let rhs = |t: f64, y: &[f64; 2]| [y[1], accel(t, y[0], y[1])];
    let mut k1 = rhs(t, &y);
    let mut h = ctl.h_init.min(t_end - t);
    let mut steps: Vec<DenseStep> = Vec::new();
    let mut n_acc = 0usize;
    let mut n_rej = 0usize;
    let mut termination = Termination::ReachedEnd;

    'outer: for _ in 0..ctl.max_steps {
        if t >= t_end {
            break;
        }
        h = h.min(t_end - t);
        if h < ctl.h_min {
            return Err(Error::Stiffness(format!("step size {h} underflowed at t = {t}")));
        }
        let mut ks = [[0.0f64; 2]; 7];
        ks[0] = k1;
        for stage in 0..6 {
            let mut ys = y;
            for comp in 0..2 {
                let mut acc = 0.0;
                for j in 0..=stage {
                    acc += A[stage][j] * ks[j][comp];
                }
                ys[comp] += h * acc;
            }
            ks[stage + 1] = rhs(t + C[stage] * h, &ys);
        }
        let y_new = {
            let mut yn = y;
            for comp in 0..2 {
                // 5th-order weights are the last A row (FSAL)
                let mut acc = 0.0;
                for j in 0..6 {
                    acc += A[5][j] * ks[j][comp];
                }
                yn[comp] += h * acc;
            }
            yn
        };
        let k_new = rhs(t + h, &y_new);
        ks[6] = k_new;

        let mut err = 0.0f64;
        for comp in 0..2 {
            let mut e = 0.0;
            for j in 0..7 {
                e += E[j] * ks[j][comp];
            }
            e *= h;
            let sc = ctl.atol + ctl.rtol * y[comp].abs().max(y_new[comp].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / 2.0).sqrt();

        if !err.is_finite() {
            h *= 0.25;
            n_rej += 1;
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            n_rej += 1;
            continue;
        }

        // accepted: build the dense-output coefficients
        let mut rcont = [[0.0f64; 2]; 5];
        for comp in 0..2 {
            let ydiff = y_new[comp] - y[comp];
            let bspl = h * ks[0][comp] - ydiff;
            rcont[0][comp] = y[comp];
            rcont[1][comp] = ydiff;
            rcont[2][comp] = bspl;
            rcont[3][comp] = ydiff - h * k_new[comp] - bspl;
            let mut dsum = 0.0;
            for j in 0..7 {
                dsum += D[j] * ks[j][comp];
            }
            rcont[4][comp] = h * dsum;
        }
        let step = DenseStep { t0: t, h, rcont };

        // event scan over the accepted step: sign change of u, floor, overflow
        let u_before = y[0];
        let mut event: Option<(Termination, f64)> = None;
        if ctl.stop_on_crossing && u_before > 0.0 {
            let mut t_lo = t;
            let mut found = false;
            for k in 1..=8 {
                let ts = t + h * k as f64 / 8.0;
                let us = step.eval(ts)[0];
                if us <= 0.0 {
                    // bisect [t_lo, ts]
                    let mut lo = t_lo;
                    let mut hi = ts;
                    for _ in 0..100 {
                        let mid = 0.5 * (lo + hi);
                        if step.eval(mid)[0] > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        if hi - lo < 1e-14 * (1.0 + hi.abs()) {
                            break;
                        }
                    }
                    event = Some((Termination::CrossedZero { t_cross: 0.5 * (lo + hi) }, hi));
                    found = true;
                    break;
                }
                t_lo = ts;
            }
            let _ = found;
        }
        if event.is_none() && ctl.u_floor > 0.0 && u_before > ctl.u_floor && y_new[0] < ctl.u_floor
        {
            event = Some((Termination::HitFloor, t + h));
        }
        if event.is_none() && y_new[0].abs() > ctl.overflow {
            event = Some((Termination::Overflow, t + h));
        }

        steps.push(step);
        n_acc += 1;

        if let Some((term, t_stop)) = event {
            termination = term;
            let y_stop = steps.last().unwrap().eval(t_stop);
            t = t_stop;
            y = y_stop;
            break 'outer;
        }

        t += h;
        y = y_new;
        k1 = k_new;
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::Stiffness(format!("non-finite state at t = {t}")));
        }
        h *= (0.9 * err.powf(-0.2)).clamp(0.2, 5.0).min(ctl.h_max / h.max(1e-300)).max(0.2);
        h = h.min(ctl.h_max);
    }

    if steps.is_empty() {
        return Err(Error::Stiffness("no steps accepted".into()));
    }
    Ok(Trajectory {
        start,
        end: OdeState { t, u: y[0], du: y[1] },
        steps,
        termination,
        n_accepted: n_acc,
        n_rejected: n_rej,
    })
}

/// Tail tolerance for matching u′/u against −γ₊ or −γ₋.
pub fn tail_tolerance(params: &ProblemParams) -> f64 {
    (0.05 * (params.gamma_plus() - params.gamma_minus())).max(1e-3)
}

/// Classify a trajectory per the shooting dichotomy. The tail logarithmic
/// derivative is the median of u′/u over the last 20% of the integrated span.
/// A trajectory terminated at the decay floor while still plunging (u′/u far
/// below −γ₊) is an imminent crossing and classified as such.
pub fn classify(params: &ProblemParams, traj: &Trajectory) -> Result<TrajectoryClass> {
    match traj.termination {
        Termination::CrossedZero { t_cross } => return Ok(TrajectoryClass::CrossesZero { t_cross }),
        Termination::Overflow => {
            return if traj.end.u > 0.0 {
                Ok(TrajectoryClass::Blowup)
            } else {
                // crossed zero before overflowing; locate the crossing
                locate_crossing(traj).map(|t_cross| TrajectoryClass::CrossesZero { t_cross })
            };
        }
        _ => {}
    }
    // scan for a sign change that was not terminal
    if let Some(t_cross) = scan_crossing(traj) {
        return Ok(TrajectoryClass::CrossesZero { t_cross });
    }
    let gp = params.gamma_plus();
    let gm = params.gamma_minus();
    let tol = tail_tolerance(params);
    let t_end = traj.end.t;
    let t_lo = traj.start.t + 0.8 * (t_end - traj.start.t);
    let mut ratios = Vec::with_capacity(128);
    for k in 0..128 {
        let t = t_lo + (t_end - t_lo) * k as f64 / 127.0;
        let s = traj.sample(t)?;
        if s.u != 0.0 {
            ratios.push(s.du / s.u);
        }
    }
    if ratios.is_empty() {
        return Err(Error::Horizon("no usable tail samples".into()));
    }
    let med = median(&ratios);
    if traj.termination == Termination::HitFloor && med < -(gp + 0.5) {
        // plunging through the floor: the zero is immediately ahead
        return Ok(TrajectoryClass::CrossesZero { t_cross: t_end });
    }
    if (med + gm).abs() < tol {
        return Ok(TrajectoryClass::SlowDecay);
    }
    if (med + gp).abs() < tol {
        return Ok(TrajectoryClass::FastDecayCandidate);
    }
    Err(Error::Horizon(format!(
        "tail log-derivative {med:.6} matches neither -gamma+ = {:.6} nor -gamma- = {:.6} \
         (tolerance {tol:.1e}); integrate further",
        -gp, -gm
    )))
}

fn scan_crossing(traj: &Trajectory) -> Option<f64> {
    for step in &traj.steps {
        let u0 = step.eval(step.t0)[0];
        if u0 <= 0.0 {
            continue;
        }
        for k in 1..=8 {
            let ts = step.t0 + step.h * k as f64 / 8.0;
            if step.eval(ts)[0] <= 0.0 {
                let mut lo = step.t0 + step.h * (k - 1) as f64 / 8.0;
                let mut hi = ts;
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if step.eval(mid)[0] > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-14 * (1.0 + hi.abs()) {
                        break;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
        }
    }
    None
}

fn locate_crossing(traj: &Trajectory) -> Result<f64> {
    scan_crossing(traj)
        .ok_or_else(|| Error::Horizon("overflow with negative u but no crossing found".into()))
}
