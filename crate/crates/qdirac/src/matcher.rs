//! Assembly and dense solve of the 8x8 matching system.
//!
//! The scattering ansatz puts plane waves in the propagating a-channel and
//! real exponentials in the evanescent b-channel:
//!
//! ```text
//! region I   (x < -a0):  phi_a = e^{ipx} + r e^{-ipx}      phi_b = rt e^{px}
//! region II  (|x| < a0): phi_a = c1 e^{ipx} + c2 e^{-ipx}  phi_b = c3 e^{px} + c4 e^{-px}
//! region III (x > a0):   phi_a = t e^{ipx}                 phi_b = tt e^{-px}
//! ```
//!
//! Continuity of both channels at x = +-a0 gives four equations; the
//! derivative jumps induced by the deltas give four more. The incident wave
//! (unit amplitude, a-channel only — the evanescent channel cannot carry an
//! incident wave) supplies the right-hand side.

use crate::error::{Error, Result};
use crate::model::{delta_strengths, JumpVariant, ScatteringParams};
use crate::quat::Complex;

/// Labels for the eight unknown amplitudes, in system order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    R = 0,
    RTilde = 1,
    C1 = 2,
    C2 = 3,
    C3 = 4,
    C4 = 5,
    T = 6,
    TTilde = 7,
}

pub const UNKNOWN_LABELS: [&str; 8] = ["r", "r_tilde", "c1", "c2", "c3", "c4", "t", "t_tilde"];

/// The assembled linear system `matrix * x = rhs` over the unknowns above.
#[derive(Debug, Clone)]
pub struct MatchingSystem {
    pub matrix: [[Complex; 8]; 8],
    pub rhs: [Complex; 8],
    pub params: ScatteringParams,
}

/// Solved amplitudes plus solve diagnostics.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub r: Complex,
    pub r_tilde: Complex,
    pub c1: Complex,
    pub c2: Complex,
    pub c3: Complex,
    pub c4: Complex,
    pub t: Complex,
    pub t_tilde: Complex,
    /// Max-norm of `matrix * x - rhs`, recomputed after the solve.
    pub residual_norm: f64,
    pub params: ScatteringParams,
}

impl ScatteringSolution {
    pub fn amplitude(&self, which: Unknown) -> Complex {
        match which {
            Unknown::R => self.r,
            Unknown::RTilde => self.r_tilde,
            Unknown::C1 => self.c1,
            Unknown::C2 => self.c2,
            Unknown::C3 => self.c3,
            Unknown::C4 => self.c4,
            Unknown::T => self.t,
            Unknown::TTilde => self.t_tilde,
        }
    }

    /// Reflection probability R = |r|^2.
    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// Transmission probability T = |t|^2.
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }
}

/// Largest p*a0 before the evanescent exponentials overflow f64.
const MAX_EVANESCENT_EXPONENT: f64 = 300.0;

/// Pivot threshold relative to the largest entry of the column-rescaled
/// matrix (which is 1 by construction).
const SINGULARITY_RELATIVE_THRESHOLD: f64 = 1e-13;

/// Builds the 8x8 system for the given parameters.
pub fn assemble_system(params: &ScatteringParams) -> Result<MatchingSystem> {
    let p = params.wavenumber()?.0;
    let a0 = params.a0;
    if p * a0 > MAX_EVANESCENT_EXPONENT {
        return Err(Error::RangeOverflow(format!(
            "p*a0 = {:.3e} exceeds {MAX_EVANESCENT_EXPONENT}; e^(p*a0) overflows",
            p * a0
        )));
    }
    let (va, vb) = delta_strengths(params);

    let zero = Complex::new(0.0, 0.0);
    let ip = Complex::new(0.0, p);
    let eip = Complex::new(0.0, p * a0).exp(); // e^{+i p a0}
    let eim = Complex::new(0.0, -p * a0).exp(); // e^{-i p a0}
    let epp = Complex::new((p * a0).exp(), 0.0); // e^{+p a0}
    let epm = Complex::new((-p * a0).exp(), 0.0); // e^{-p a0}

    let ca = 2.0 * (params.e + params.m);
    let cb = 2.0 * (params.e - params.m);
    // b-channel jump couplings: `own` multiplies phi_b, `cross` multiplies phi_a.
    let (sb_own, sb_cross) = match params.variant {
        JumpVariant::OdeDerived => (cb * va, cb * vb),
        JumpVariant::CommonRhs => (cb * vb, cb * va),
    };

    let mut m = [[zero; 8]; 8];
    let mut b = [zero; 8];
    use Unknown::*;

    // (1) a-channel continuity at -a0: e^{-ipa0} + r e^{ipa0} = c1 e^{-ipa0} + c2 e^{ipa0}
    m[0][R as usize] = eip;
    m[0][C1 as usize] = -eim;
    m[0][C2 as usize] = -eip;
    b[0] = -eim;

    // (2) b-channel continuity at -a0: rt e^{-pa0} = c3 e^{-pa0} + c4 e^{pa0}
    m[1][RTilde as usize] = epm;
    m[1][C3 as usize] = -epm;
    m[1][C4 as usize] = -epp;

    // (3) a-channel continuity at +a0: c1 e^{ipa0} + c2 e^{-ipa0} = t e^{ipa0}
    m[2][C1 as usize] = eip;
    m[2][C2 as usize] = eim;
    m[2][T as usize] = -eip;

    // (4) b-channel continuity at +a0: c3 e^{pa0} + c4 e^{-pa0} = tt e^{-pa0}
    m[3][C3 as usize] = epp;
    m[3][C4 as usize] = epm;
    m[3][TTilde as usize] = -epm;

    // (5) a-channel jump at -a0:
    // [phi_a'] = 2(E+m) (Va phi_a(-a0) + Vb phi_b(-a0))
    m[4][C1 as usize] = ip * eim;
    m[4][C2 as usize] = -ip * eip;
    m[4][R as usize] = ip * eip - ca * va * eip;
    m[4][RTilde as usize] = -ca * vb * epm;
    b[4] = ip * eim + ca * va * eim;

    // (6) b-channel jump at -a0 (variant-dependent right-hand side)
    m[5][C3 as usize] = p * epm;
    m[5][C4 as usize] = -p * epp;
    m[5][RTilde as usize] = -(p + sb_own) * epm;
    m[5][R as usize] = -sb_cross * eip;
    b[5] = sb_cross * eim;

    // (7) a-channel jump at +a0
    m[6][T as usize] = ip * eip - ca * va * eip;
    m[6][C1 as usize] = -ip * eip;
    m[6][C2 as usize] = ip * eim;
    m[6][TTilde as usize] = -ca * vb * epm;

    // (8) b-channel jump at +a0 (variant-dependent right-hand side)
    m[7][TTilde as usize] = -(p + sb_own) * epm;
    m[7][C3 as usize] = -p * epp;
    m[7][C4 as usize] = p * epm;
    m[7][T as usize] = -sb_cross * eip;

    Ok(MatchingSystem {
        matrix: m,
        rhs: b,
        params: *params,
    })
}

/// Gaussian elimination with partial pivoting over complex scalars.
fn gaussian_solve(
    mut a: [[Complex; 8]; 8],
    mut b: [Complex; 8],
    threshold: f64,
) -> Result<[Complex; 8]> {
    for col in 0..8 {
        let pivot_row = (col..8)
            .max_by(|&r1, &r2| a[r1][col].norm().total_cmp(&a[r2][col].norm()))
            .unwrap();
        let pivot_mag = a[pivot_row][col].norm();
        if pivot_mag < threshold || !pivot_mag.is_finite() {
            return Err(Error::SingularMatrix {
                pivot: pivot_mag,
                threshold,
            });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col];
        for row in col + 1..8 {
            let factor = a[row][col] / pivot[col];
            a[row][col] = Complex::new(0.0, 0.0);
            for (entry, pv) in a[row][col + 1..].iter_mut().zip(&pivot[col + 1..]) {
                *entry -= factor * pv;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [Complex::new(0.0, 0.0); 8];
    for row in (0..8).rev() {
        let mut acc = b[row];
        for (coeff, xv) in a[row][row + 1..].iter().zip(&x[row + 1..]) {
            acc -= coeff * xv;
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

fn residual_vector(system: &MatchingSystem, x: &[Complex; 8]) -> [Complex; 8] {
    let mut res = [Complex::new(0.0, 0.0); 8];
    for (row, slot) in res.iter_mut().enumerate() {
        let mut acc = -system.rhs[row];
        for (coeff, xv) in system.matrix[row].iter().zip(x.iter()) {
            acc += coeff * xv;
        }
        *slot = acc;
    }
    res
}

/// Solves the assembled system and records the residual.
///
/// The evanescent columns carry entries spanning e^{+-p*a0}, so elimination
/// runs on a column-rescaled copy (each unknown divided by its column's
/// largest entry); the rescale is undone afterwards and one step of iterative
/// refinement against the original rows keeps the residual near machine level.
pub fn solve_dense(system: &MatchingSystem) -> Result<ScatteringSolution> {
    let mut col_scale = [1.0f64; 8];
    for (j, scale) in col_scale.iter_mut().enumerate() {
        let max = (0..8)
            .map(|r| system.matrix[r][j].norm())
            .fold(0.0f64, f64::max);
        if max > 0.0 {
            *scale = max;
        }
    }
    let mut scaled = system.matrix;
    for row in scaled.iter_mut() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry /= col_scale[j];
        }
    }
    // all scaled entries are <= 1, so the threshold is effectively absolute
    let threshold = SINGULARITY_RELATIVE_THRESHOLD;

    let mut x = gaussian_solve(scaled, system.rhs, threshold)?;
    for (xj, scale) in x.iter_mut().zip(col_scale.iter()) {
        *xj /= scale;
    }

    let res = residual_vector(system, &x);
    if let Ok(correction) = gaussian_solve(scaled, res, threshold) {
        for ((xj, dj), scale) in x.iter_mut().zip(correction.iter()).zip(col_scale.iter()) {
            *xj -= dj / scale;
        }
    }

    let res = residual_vector(system, &x);
    let residual_norm = res.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let rhs_norm = system.rhs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if residual_norm > 1e-10 * (1.0 + rhs_norm) {
        return Err(Error::Domain(format!(
            "solve residual {residual_norm:.3e} exceeds 1e-10 * (1 + |rhs|) = {:.3e}",
            1e-10 * (1.0 + rhs_norm)
        )));
    }

    Ok(ScatteringSolution {
        r: x[Unknown::R as usize],
        r_tilde: x[Unknown::RTilde as usize],
        c1: x[Unknown::C1 as usize],
        c2: x[Unknown::C2 as usize],
        c3: x[Unknown::C3 as usize],
        c4: x[Unknown::C4 as usize],
        t: x[Unknown::T as usize],
        t_tilde: x[Unknown::TTilde as usize],
        residual_norm,
        params: system.params,
    })
}

/// Convenience: assemble and solve in one call.
pub fn solve(params: &ScatteringParams) -> Result<ScatteringSolution> {
    solve_dense(&assemble_system(params)?)
}

/// Residuals of the eight matching conditions, evaluated per condition from
/// the closed-form region wavefunctions (not from the assembled matrix).
#[derive(Debug, Clone)]
pub struct MatchReport {
    /// Scaled violation of each condition, in assembly row order.
    pub violations: [f64; 8],
    pub max_violation: f64,
}

/// Re-evaluates all continuity and jump conditions on a solved amplitude set.
///
/// Each violation is scaled by `1 + max |term|` of its condition, so the
/// report stays meaningful when the evanescent exponentials are large.
pub fn verify_matching(sol: &ScatteringSolution) -> MatchReport {
    let params = &sol.params;
    let p = params
        .wavenumber()
        .expect("solution exists, so E > m holds")
        .0;
    let a0 = params.a0;
    let (va, vb) = delta_strengths(params);
    let ca = 2.0 * (params.e + params.m);
    let cb = 2.0 * (params.e - params.m);
    let (sb_own, sb_cross) = match params.variant {
        JumpVariant::OdeDerived => (cb * va, cb * vb),
        JumpVariant::CommonRhs => (cb * vb, cb * va),
    };

    let i = Complex::new(0.0, 1.0);
    let exp_ip = |x: f64| (i * p * x).exp();
    let exp_p = |x: f64| Complex::new((p * x).exp(), 0.0);

    // closed-form channel values and derivatives per region
    let a_i = |x: f64| exp_ip(x) + sol.r * exp_ip(-x);
    let da_i = |x: f64| i * p * exp_ip(x) - i * p * sol.r * exp_ip(-x);
    let b_i = |x: f64| sol.r_tilde * exp_p(x);
    let db_i = |x: f64| p * sol.r_tilde * exp_p(x);

    let a_ii = |x: f64| sol.c1 * exp_ip(x) + sol.c2 * exp_ip(-x);
    let da_ii = |x: f64| i * p * sol.c1 * exp_ip(x) - i * p * sol.c2 * exp_ip(-x);
    let b_ii = |x: f64| sol.c3 * exp_p(x) + sol.c4 * exp_p(-x);
    let db_ii = |x: f64| p * sol.c3 * exp_p(x) - p * sol.c4 * exp_p(-x);

    let a_iii = |x: f64| sol.t * exp_ip(x);
    let da_iii = |x: f64| i * p * sol.t * exp_ip(x);
    let b_iii = |x: f64| sol.t_tilde * exp_p(-x);
    let db_iii = |x: f64| -p * sol.t_tilde * exp_p(-x);

    let scaled = |lhs: Complex, rhs: Complex, terms: &[Complex]| -> f64 {
        let scale = 1.0 + terms.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        (lhs - rhs).norm() / scale
    };

    let xl = -a0;
    let xr = a0;
    let mut v = [0.0f64; 8];

    // continuity
    v[0] = scaled(a_i(xl), a_ii(xl), &[a_i(xl), a_ii(xl)]);
    v[1] = scaled(b_i(xl), b_ii(xl), &[b_i(xl), b_ii(xl)]);
    v[2] = scaled(a_ii(xr), a_iii(xr), &[a_ii(xr), a_iii(xr)]);
    v[3] = scaled(b_ii(xr), b_iii(xr), &[b_ii(xr), b_iii(xr)]);
    // jumps at -a0
    let jump_a_l = ca * (va * a_i(xl) + vb * b_i(xl));
    v[4] = scaled(da_ii(xl) - da_i(xl), jump_a_l, &[da_ii(xl), da_i(xl), jump_a_l]);
    let jump_b_l = sb_own * b_i(xl) + sb_cross * a_i(xl);
    v[5] = scaled(db_ii(xl) - db_i(xl), jump_b_l, &[db_ii(xl), db_i(xl), jump_b_l]);
    // jumps at +a0
    let jump_a_r = ca * (va * a_iii(xr) + vb * b_iii(xr));
    v[6] = scaled(da_iii(xr) - da_ii(xr), jump_a_r, &[da_iii(xr), da_ii(xr), jump_a_r]);
    let jump_b_r = sb_own * b_iii(xr) + sb_cross * a_iii(xr);
    v[7] = scaled(db_iii(xr) - db_ii(xr), jump_b_r, &[db_iii(xr), db_ii(xr), jump_b_r]);

    let max_violation = v.iter().copied().fold(0.0f64, f64::max);
    MatchReport {
        violations: v,
        max_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JumpVariant, ScatteringParams};
    use proptest::prelude::*;

    fn params(e: f64, m: f64, va: f64, vb: f64, a0: f64) -> ScatteringParams {
        ScatteringParams::new(e, m, va, vb, a0).unwrap()
    }

    fn fig1_params(e: f64) -> ScatteringParams {
        params(e, 1.0, 1.0, 1.0, 1.0)
    }

    /// Independent 2x2 transfer-matrix computation for the pure-complex case
    /// (Vb = 0, b-channel identically zero). Composes single-delta matrices
    /// in the (e^{ipx}, e^{-ipx}) amplitude basis.
    fn transfer_matrix_rt(e: f64, m: f64, va: f64, a0: f64) -> (Complex, Complex) {
        let p = (e * e - m * m).sqrt();
        let g = (e + m) * va / p; // jump strength 2(E+m)Va over 2p
        let ig = Complex::new(0.0, g);
        let one = Complex::new(1.0, 0.0);
        let delta_at = |x0: f64| {
            let phase = Complex::new(0.0, 2.0 * p * x0).exp();
            [[one - ig, -ig / phase], [ig * phase, one + ig]]
        };
        let mul = |m1: [[Complex; 2]; 2], m2: [[Complex; 2]; 2]| {
            let mut out = [[Complex::new(0.0, 0.0); 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] = m1[r][0] * m2[0][c] + m1[r][1] * m2[1][c];
                }
            }
            out
        };
        let total = mul(delta_at(a0), delta_at(-a0));
        let r = -total[1][0] / total[1][1];
        let t = total[0][0] + total[0][1] * r;
        (r, t)
    }

    #[test]
    fn labels_match_unknown_order() {
        for (k, u) in [
            Unknown::R,
            Unknown::RTilde,
            Unknown::C1,
            Unknown::C2,
            Unknown::C3,
            Unknown::C4,
            Unknown::T,
            Unknown::TTilde,
        ]
        .into_iter()
        .enumerate()
        {
            assert_eq!(u as usize, k);
        }
        assert_eq!(UNKNOWN_LABELS[Unknown::R as usize], "r");
        assert_eq!(UNKNOWN_LABELS[Unknown::TTilde as usize], "t_tilde");
    }

    #[test]
    fn free_particle_is_perfect_transmission() {
        let sol = solve(&params(2.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(sol.r.norm() < 1e-14);
        assert!(sol.r_tilde.norm() < 1e-14);
        assert!((sol.c1 - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!(sol.c2.norm() < 1e-14);
        assert!(sol.c3.norm() < 1e-14);
        assert!(sol.c4.norm() < 1e-14);
        assert!((sol.t - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!(sol.t_tilde.norm() < 1e-14);
    }

    #[test]
    fn zero_strength_decouples_jump_rows() {
        let system = assemble_system(&params(2.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        // with Va = Vb = 0 the jump rows keep only derivative terms: no
        // coupling of the a-jump to r_tilde/t_tilde and none of the b-jump to r/t
        assert_eq!(system.matrix[4][Unknown::RTilde as usize].norm(), 0.0);
        assert_eq!(system.matrix[5][Unknown::R as usize].norm(), 0.0);
        assert_eq!(system.matrix[6][Unknown::TTilde as usize].norm(), 0.0);
        assert_eq!(system.matrix[7][Unknown::T as usize].norm(), 0.0);
    }

    #[test]
    fn unitarity_at_figure_point() {
        let sol = solve(&fig1_params(2.0)).unwrap();
        let defect = (sol.reflection() + sol.transmission() - 1.0).abs();
        assert!(defect < 1e-10, "defect = {defect:.3e}");
        assert!(sol.residual_norm < 1e-10 * (1.0 + 10.0));
    }

    #[test]
    fn variants_coincide_when_strengths_equal() {
        let base = params(2.3, 1.0, 1.7, 1.7, 0.8);
        let sys_derived = assemble_system(&base.with_variant(JumpVariant::OdeDerived)).unwrap();
        let sys_common = assemble_system(&base.with_variant(JumpVariant::CommonRhs)).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let d = (sys_derived.matrix[r][c] - sys_common.matrix[r][c]).norm();
                assert!(d <= 1e-12, "matrix entry ({r},{c}) differs by {d:.3e}");
            }
            assert!((sys_derived.rhs[r] - sys_common.rhs[r]).norm() <= 1e-12);
        }
        let a = solve_dense(&sys_derived).unwrap();
        let b = solve_dense(&sys_common).unwrap();
        for u in [Unknown::R, Unknown::RTilde, Unknown::T, Unknown::TTilde] {
            assert!((a.amplitude(u) - b.amplitude(u)).norm() <= 1e-12);
        }
    }

    #[test]
    fn threshold_energy_is_rejected() {
        assert!(matches!(
            assemble_system(&params(1.0, 1.0, 1.0, 1.0, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn huge_evanescent_exponent_is_rejected() {
        let p = params(100.0, 1.0, 1.0, 1.0, 4.0);
        assert!(matches!(
            assemble_system(&p),
            Err(Error::RangeOverflow(_))
        ));
    }

    #[test]
    fn singular_system_reports_pivot() {
        let mut system = assemble_system(&fig1_params(2.0)).unwrap();
        system.matrix[1] = system.matrix[0];
        system.rhs[1] = system.rhs[0];
        match solve_dense(&system) {
            Err(Error::SingularMatrix { pivot, threshold }) => {
                assert!(pivot < threshold);
            }
            other => panic!("expected singular-matrix error, got {other:?}"),
        }
    }

    #[test]
    fn matches_transfer_matrix_oracle_at_recorded_point() {
        // m = 1, a0 = 1, Va = 0.3, Vb = 0, E = 1.5
        let sol = solve(&params(1.5, 1.0, 0.3, 0.0, 1.0)).unwrap();
        let (r_oracle, t_oracle) = transfer_matrix_rt(1.5, 1.0, 0.3, 1.0);
        assert!((sol.r - r_oracle).norm() < 1e-12, "r = {:?} vs {:?}", sol.r, r_oracle);
        assert!((sol.t - t_oracle).norm() < 1e-12, "t = {:?} vs {:?}", sol.t, t_oracle);
        // frozen regression values recorded from the transfer-matrix oracle
        let r_frozen = Complex::new(0.107_079_984_386_424_42, 0.052_432_021_060_319_065);
        let t_frozen = Complex::new(0.436_626_963_732_874_46, -0.891_707_157_452_907_6);
        assert!((sol.r - r_frozen).norm() < 1e-10);
        assert!((sol.t - t_frozen).norm() < 1e-10);
    }

    #[test]
    fn verify_matching_flags_perturbed_solution() {
        let mut sol = solve(&fig1_params(2.0)).unwrap();
        assert!(verify_matching(&sol).max_violation < 1e-10);
        sol.r += Complex::new(1e-3, 0.0);
        assert!(verify_matching(&sol).max_violation > 1e-4);
    }

    #[test]
    fn verify_matching_free_particle() {
        let sol = solve(&params(2.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        let report = verify_matching(&sol);
        for v in report.violations {
            assert!(v < 1e-14);
        }
    }

    /// Right-incident assembly built independently of `assemble_system`,
    /// used to check that the even geometry gives mirror-symmetric moduli.
    fn solve_right_incident(params: &ScatteringParams) -> ScatteringSolution {
        let p = params.wavenumber().unwrap().0;
        let a0 = params.a0;
        let (va, vb) = delta_strengths(params);
        let ca = 2.0 * (params.e + params.m);
        let cb = 2.0 * (params.e - params.m);
        let (sb_own, sb_cross) = match params.variant {
            JumpVariant::OdeDerived => (cb * va, cb * vb),
            JumpVariant::CommonRhs => (cb * vb, cb * va),
        };
        let zero = Complex::new(0.0, 0.0);
        let ip = Complex::new(0.0, p);
        let eip = Complex::new(0.0, p * a0).exp();
        let eim = Complex::new(0.0, -p * a0).exp();
        let epp = Complex::new((p * a0).exp(), 0.0);
        let epm = Complex::new((-p * a0).exp(), 0.0);

        // region III: e^{-ipx} + r e^{ipx} + (rt e^{-px} in channel b)
        // region I:   t e^{-ipx}           + (tt e^{px} in channel b)
        let mut m = [[zero; 8]; 8];
        let mut b = [zero; 8];
        use Unknown::*;
        // a-continuity at +a0
        m[0][R as usize] = eip;
        m[0][C1 as usize] = -eip;
        m[0][C2 as usize] = -eim;
        b[0] = -eim;
        // b-continuity at +a0
        m[1][RTilde as usize] = epm;
        m[1][C3 as usize] = -epp;
        m[1][C4 as usize] = -epm;
        // a-continuity at -a0: c1 e^{-ipa0} + c2 e^{ipa0} = t e^{ipa0}
        m[2][C1 as usize] = eim;
        m[2][C2 as usize] = eip;
        m[2][T as usize] = -eip;
        // b-continuity at -a0
        m[3][C3 as usize] = epm;
        m[3][C4 as usize] = epp;
        m[3][TTilde as usize] = -epm;
        // a-jump at +a0: da_III(a0) - da_II(a0) = ca (va a(a0) + vb b(a0))
        m[4][R as usize] = ip * eip - ca * va * eip;
        m[4][C1 as usize] = -ip * eip;
        m[4][C2 as usize] = ip * eim;
        m[4][RTilde as usize] = -ca * vb * epm;
        b[4] = ip * eim + ca * va * eim;
        // b-jump at +a0
        m[5][RTilde as usize] = -(p + sb_own) * epm;
        m[5][C3 as usize] = -p * epp;
        m[5][C4 as usize] = p * epm;
        m[5][R as usize] = -sb_cross * eip;
        b[5] = sb_cross * eim;
        // a-jump at -a0: phi_a in region I is t e^{-ipx}, so phi_a(-a0) = t eip
        // and da_I(-a0) = -ip t eip; da_II(-a0) - da_I(-a0) = ca (va a + vb b)
        m[6][T as usize] = ip * eip - ca * va * eip;
        m[6][C1 as usize] = ip * eim;
        m[6][C2 as usize] = -ip * eip;
        m[6][TTilde as usize] = -ca * vb * epm;
        // b-jump at -a0: phi_b in region I is tt e^{px}, value tt epm at -a0,
        // derivative p tt epm; db_II(-a0) - db_I(-a0) = own b + cross a
        m[7][TTilde as usize] = -(p + sb_own) * epm;
        m[7][C3 as usize] = p * epm;
        m[7][C4 as usize] = -p * epp;
        m[7][T as usize] = -sb_cross * eip;

        let system = MatchingSystem {
            matrix: m,
            rhs: b,
            params: *params,
        };
        solve_dense(&system).unwrap()
    }

    fn box_params() -> impl Strategy<Value = ScatteringParams> {
        (1.001f64..10.0, -3.0f64..3.0, -3.0f64..3.0, 0.1f64..5.0).prop_map(
            |(e_over_m, va, vb, a0)| params(e_over_m, 1.0, va, vb, a0),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn unitarity_over_parameter_box(p in box_params()) {
            let sol = solve(&p).unwrap();
            let defect = (sol.reflection() + sol.transmission() - 1.0).abs();
            prop_assert!(defect < 1e-10, "defect {:.3e} at {:?}", defect, p);
        }

        #[test]
        fn closed_loop_residuals_vanish(p in box_params()) {
            let sol = solve(&p).unwrap();
            let rhs_norm = 1.0 + assemble_system(&p).unwrap().rhs.iter()
                .map(|z| z.norm()).fold(0.0f64, f64::max);
            prop_assert!(sol.residual_norm <= 1e-10 * rhs_norm);
            prop_assert!(verify_matching(&sol).max_violation < 1e-9);
        }

        #[test]
        fn variants_agree_for_equal_strengths(
            e in 1.01f64..8.0,
            v in -3.0f64..3.0,
            a0 in 0.1f64..4.0,
        ) {
            let base = params(e, 1.0, v, v, a0);
            let a = solve(&base.with_variant(JumpVariant::OdeDerived)).unwrap();
            let b = solve(&base.with_variant(JumpVariant::CommonRhs)).unwrap();
            for u in [Unknown::R, Unknown::RTilde, Unknown::C1, Unknown::C2,
                      Unknown::C3, Unknown::C4, Unknown::T, Unknown::TTilde] {
                prop_assert!((a.amplitude(u) - b.amplitude(u)).norm() <= 1e-12);
            }
        }

        #[test]
        fn mirror_symmetry_of_even_potential(p in box_params()) {
            let left = solve(&p).unwrap();
            let right = solve_right_incident(&p);
            prop_assert!((left.r.norm() - right.r.norm()).abs() < 1e-10);
            prop_assert!((left.t.norm() - right.t.norm()).abs() < 1e-10);
        }

        #[test]
        fn transfer_matrix_agreement_without_quaternionic_channel(
            e in 1.05f64..6.0,
            va in -2.0f64..2.0,
            a0 in 0.2f64..3.0,
        ) {
            let sol = solve(&params(e, 1.0, va, 0.0, a0)).unwrap();
            let (r_tm, t_tm) = transfer_matrix_rt(e, 1.0, va, a0);
            prop_assert!((sol.r - r_tm).norm() < 1e-11);
            prop_assert!((sol.t - t_tm).norm() < 1e-11);
            prop_assert!(sol.r_tilde.norm() < 1e-12);
            prop_assert!(sol.t_tilde.norm() < 1e-12);
        }
    }
}
