//! Independent cross-validation of the matching solver.
//!
//! The deltas are replaced by unit-area Gaussians of width epsilon and the
//! coupled second-order system for (phi_a, phi_b) is integrated numerically,
//! right to left, starting from the transmitted asymptotic form. Two basis
//! integrations (transmitted seeds (t, tt) = (1, 0) and (0, 1)) are combined
//! so that the evanescent mode which grows towards x -> -infinity cancels;
//! the physical reflection and transmission amplitudes then follow from a
//! least-squares decomposition of the left asymptotics. Nothing here touches
//! the matching-system code path.

use crate::error::{Error, Result};
use crate::model::ScatteringParams;
use crate::quat::Complex;

/// Limit on the probed local truncation estimate per step pair.
const TRUNCATION_LIMIT: f64 = 1e-8;

/// Largest |p * x| before the asymptotic exponentials overflow.
const MAX_EXPONENT: f64 = 300.0;

/// A delta-regularized scattering problem with an integration domain.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedProblem {
    pub params: ScatteringParams,
    /// Gaussian width; must satisfy epsilon <= a0 / 20.
    pub epsilon: f64,
    pub x_left: f64,
    pub x_right: f64,
    /// Maximum integration step.
    pub step: f64,
}

impl RegularizedProblem {
    /// Default domain: margins of 12 epsilon around the bumps and a fit
    /// window of one oscillation period (2 pi / p) on the left, with a step
    /// of epsilon / 20 so each bump is resolved by hundreds of points.
    pub fn new(params: ScatteringParams, epsilon: f64) -> Result<Self> {
        let p = params.wavenumber()?.0;
        let window = 2.0 * std::f64::consts::PI / p;
        let margin = 12.0 * epsilon;
        Self::with_bounds(
            params,
            epsilon,
            -params.a0 - margin - window,
            params.a0 + margin,
            epsilon / 20.0,
        )
    }

    /// Fully explicit construction; validates all domain invariants.
    pub fn with_bounds(
        params: ScatteringParams,
        epsilon: f64,
        x_left: f64,
        x_right: f64,
        step: f64,
    ) -> Result<Self> {
        let p = params.wavenumber()?.0;
        if epsilon.is_nan() || epsilon <= 0.0 || epsilon > params.a0 / 20.0 {
            return Err(Error::InvalidParams(format!(
                "epsilon must be in (0, a0/20] = (0, {}], got {epsilon}",
                params.a0 / 20.0
            )));
        }
        if x_left >= -params.a0 - 10.0 * epsilon {
            return Err(Error::InvalidParams(format!(
                "x_left = {x_left} must lie left of -a0 - 10 epsilon = {}",
                -params.a0 - 10.0 * epsilon
            )));
        }
        if x_right <= params.a0 + 10.0 * epsilon {
            return Err(Error::InvalidParams(format!(
                "x_right = {x_right} must lie right of a0 + 10 epsilon = {}",
                params.a0 + 10.0 * epsilon
            )));
        }
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidParams(format!("step must be positive, got {step}")));
        }
        let reach = p * x_left.abs().max(x_right.abs());
        if reach > MAX_EXPONENT {
            return Err(Error::RangeOverflow(format!(
                "p * |x| = {reach:.3e} exceeds {MAX_EXPONENT}; asymptotic exponentials overflow"
            )));
        }
        Ok(Self {
            params,
            epsilon,
            x_left,
            x_right,
            step,
        })
    }
}

/// Reflection/transmission amplitudes extracted from the integration.
#[derive(Debug, Clone, Copy)]
pub struct OracleSolution {
    pub r: Complex,
    pub t: Complex,
    pub r_tilde: Complex,
    pub t_tilde: Complex,
    /// Largest probed local truncation estimate (scaled, per double step).
    pub truncation_estimate: f64,
    /// Integration steps per basis run.
    pub steps: usize,
}

/// State vector (phi_a, phi_a', phi_b, phi_b').
type State = [Complex; 4];

struct Rhs {
    p2: f64,
    e: f64,
    m: f64,
    va: f64,
    vb: f64,
    a0: f64,
    epsilon: f64,
}

impl Rhs {
    /// Unit-area Gaussian bump pair replacing delta(x - a0) + delta(x + a0).
    fn bump(&self, x: f64) -> f64 {
        let norm = 1.0 / (self.epsilon * (2.0 * std::f64::consts::PI).sqrt());
        let g = |u: f64| (-u * u / (2.0 * self.epsilon * self.epsilon)).exp();
        norm * (g(x - self.a0) + g(x + self.a0))
    }

    fn eval(&self, x: f64, y: &State) -> State {
        let g = self.bump(x);
        let i = Complex::new(0.0, 1.0);
        // regularized potentials: S_a = Va g, S_b = i Vb g; the a-channel
        // couples through conj(S_b), which is what makes both couplings real
        let s_a = Complex::new(self.va * g, 0.0);
        let s_b = i * (self.vb * g);
        let phi_a = y[0];
        let phi_b = y[2];
        let dda = -self.p2 * phi_a
            + 2.0 * (self.e + self.m) * (s_a * phi_a + i * s_b.conj() * phi_b);
        let ddb = self.p2 * phi_b
            + 2.0 * (self.e - self.m) * (s_a * phi_b - i * s_b * phi_a);
        [y[1], dda, y[3], ddb]
    }
}

fn rk4_step(rhs: &Rhs, x: f64, y: &State, h: f64) -> State {
    let add = |a: &State, b: &State, s: f64| -> State {
        [
            a[0] + b[0] * s,
            a[1] + b[1] * s,
            a[2] + b[2] * s,
            a[3] + b[3] * s,
        ]
    };
    let k1 = rhs.eval(x, y);
    let k2 = rhs.eval(x + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = rhs.eval(x + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = rhs.eval(x + h, &add(y, &k3, h));
    let mut out = *y;
    for c in 0..4 {
        out[c] += (k1[c] + (k2[c] + k3[c]) * 2.0 + k4[c]) * (h / 6.0);
    }
    out
}

fn state_norm(y: &State) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Amplitudes of one basis run, from the window fit:
/// phi_a = a_plus e^{ipx} + a_minus e^{-ipx},
/// phi_b = b_plus e^{px} + b_minus e^{-px}.
struct WindowFit {
    a_plus: Complex,
    a_minus: Complex,
    b_plus: Complex,
    b_minus: Complex,
}

fn solve_2x2(g: [[Complex; 2]; 2], rhs: [Complex; 2]) -> (Complex, Complex) {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    (
        (rhs[0] * g[1][1] - g[0][1] * rhs[1]) / det,
        (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det,
    )
}

/// Least-squares decomposition of window samples onto the asymptotic modes.
/// The exponential bases are centered at the window midpoint so the normal
/// equations stay well conditioned for any p (the window is one period long).
fn fit_window(samples: &[(f64, Complex, Complex)], p: f64) -> WindowFit {
    let xc = samples.iter().map(|s| s.0).sum::<f64>() / samples.len() as f64;
    let i = Complex::new(0.0, 1.0);

    let mut g_osc = [[Complex::new(0.0, 0.0); 2]; 2];
    let mut r_osc = [Complex::new(0.0, 0.0); 2];
    let mut g_ev = [[Complex::new(0.0, 0.0); 2]; 2];
    let mut r_ev = [Complex::new(0.0, 0.0); 2];
    for &(x, phi_a, phi_b) in samples {
        let u = x - xc;
        let e_plus = (i * p * u).exp();
        let e_minus = e_plus.conj();
        g_osc[0][0] += Complex::new(1.0, 0.0);
        g_osc[0][1] += e_plus.conj() * e_minus;
        g_osc[1][0] += e_minus.conj() * e_plus;
        g_osc[1][1] += Complex::new(1.0, 0.0);
        r_osc[0] += e_plus.conj() * phi_a;
        r_osc[1] += e_minus.conj() * phi_a;

        let q_plus = Complex::new((p * u).exp(), 0.0);
        let q_minus = Complex::new((-p * u).exp(), 0.0);
        g_ev[0][0] += q_plus * q_plus;
        g_ev[0][1] += Complex::new(1.0, 0.0);
        g_ev[1][0] += Complex::new(1.0, 0.0);
        g_ev[1][1] += q_minus * q_minus;
        r_ev[0] += q_plus * phi_b;
        r_ev[1] += q_minus * phi_b;
    }
    let (alpha_plus, alpha_minus) = solve_2x2(g_osc, r_osc);
    let (beta_plus, beta_minus) = solve_2x2(g_ev, r_ev);

    // undo the centering: e^{ip(x-xc)} = e^{-ipxc} e^{ipx} etc.
    let phase = (i * p * xc).exp();
    WindowFit {
        a_plus: alpha_plus / phase,
        a_minus: alpha_minus * phase,
        b_plus: beta_plus / Complex::new((p * xc).exp(), 0.0),
        b_minus: beta_minus * Complex::new((p * xc).exp(), 0.0),
    }
}

/// Integrates one basis run and fits the left window.
fn integrate_basis(
    problem: &RegularizedProblem,
    p: f64,
    seed_transmitted: Complex,
    seed_evanescent: Complex,
    window_end: f64,
) -> Result<(WindowFit, f64, usize)> {
    let rhs = Rhs {
        p2: p * p,
        e: problem.params.e,
        m: problem.params.m,
        va: problem.params.va,
        vb: problem.params.vb,
        a0: problem.params.a0,
        epsilon: problem.epsilon,
    };

    let span = problem.x_right - problem.x_left;
    let steps = (span / problem.step).ceil() as usize;
    let h = -span / steps as f64;

    let i = Complex::new(0.0, 1.0);
    let xr = problem.x_right;
    let mut y: State = [
        seed_transmitted * (i * p * xr).exp(),
        seed_transmitted * i * p * (i * p * xr).exp(),
        seed_evanescent * (-p * xr).exp(),
        seed_evanescent * (-p) * (-p * xr).exp(),
    ];

    let mut samples = Vec::new();
    let mut max_truncation = 0.0f64;
    let mut x = xr;
    let bump_probe_level = 1e-3 / problem.epsilon;

    for k in 0..steps {
        // Richardson probe: two steps of h against one of 2h. Probed near the
        // bumps (where the derivatives peak) and periodically elsewhere.
        if (k % 256 == 0 || rhs.bump(x) > bump_probe_level) && k + 2 <= steps {
            let fine = rk4_step(&rhs, x + h, &rk4_step(&rhs, x, &y, h), h);
            let coarse = rk4_step(&rhs, x, &y, 2.0 * h);
            let mut diff = 0.0f64;
            for c in 0..4 {
                diff = diff.max((fine[c] - coarse[c]).norm());
            }
            let estimate = diff / 15.0 / (1.0 + state_norm(&y));
            max_truncation = max_truncation.max(estimate);
            if estimate > TRUNCATION_LIMIT {
                return Err(Error::StepTooLarge {
                    estimate,
                    limit: TRUNCATION_LIMIT,
                });
            }
        }
        y = rk4_step(&rhs, x, &y, h);
        x = xr + (k + 1) as f64 * h;
        if !state_norm(&y).is_finite() {
            return Err(Error::RangeOverflow(format!(
                "integration state became non-finite near x = {x:.3}"
            )));
        }
        if x <= window_end {
            samples.push((x, y[0], y[2]));
        }
    }
    if samples.len() < 16 {
        return Err(Error::InvalidParams(format!(
            "fit window captured only {} samples; widen the domain",
            samples.len()
        )));
    }
    Ok((fit_window(&samples, p), max_truncation, steps))
}

/// Runs the regularized integration and extracts (r, t) plus diagnostics.
pub fn integrate(problem: &RegularizedProblem) -> Result<OracleSolution> {
    let p = problem.params.wavenumber()?.0;
    let window = 2.0 * std::f64::consts::PI / p;
    let window_end = (problem.x_left + window).min(-problem.params.a0 - 10.0 * problem.epsilon);

    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let (fit_t, trunc_t, steps) = integrate_basis(problem, p, one, zero, window_end)?;
    let (fit_e, trunc_e, _) = integrate_basis(problem, p, zero, one, window_end)?;

    // combine the runs so the left-growing mode e^{-px} cancels
    let denom = fit_e.b_minus;
    if denom.norm() < 1e-12 * (1.0 + fit_t.b_minus.norm()) {
        return Err(Error::Domain(
            "degenerate evanescent basis run; cannot enforce decaying asymptotics".into(),
        ));
    }
    let gamma = -fit_t.b_minus / denom;

    let incident = fit_t.a_plus + gamma * fit_e.a_plus;
    if incident.norm() < 1e-300 {
        return Err(Error::Domain("vanishing incident amplitude".into()));
    }
    let reflected = fit_t.a_minus + gamma * fit_e.a_minus;
    let evanescent_left = fit_t.b_plus + gamma * fit_e.b_plus;

    Ok(OracleSolution {
        r: reflected / incident,
        t: one / incident,
        r_tilde: evanescent_left / incident,
        t_tilde: gamma / incident,
        truncation_estimate: trunc_t.max(trunc_e),
        steps,
    })
}
