//! Problem definition: physical parameters, dispersion relation and the
//! selector between the two candidate forms of the b-channel jump condition.
//!
//! Natural units throughout (hbar = c = 1); all quantities are dimensionless
//! once the mass sets the scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which right-hand side the b-channel derivative jump uses.
///
/// Integrating the coupled second-order system across a delta gives
/// `[phi_b'] = 2(E-m)(Va*phi_b + Vb*phi_a)` (`OdeDerived`). An alternative
/// form reuses the a-channel combination, `[phi_b'] = 2(E-m)(Va*phi_a +
/// Vb*phi_b)` (`CommonRhs`). The two coincide when `Va == Vb`; only the
/// derived form conserves probability current when they differ, which is why
/// it is the default. `CommonRhs` stays selectable for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpVariant {
    #[default]
    OdeDerived,
    CommonRhs,
}

/// Full definition of one scattering problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringParams {
    /// Total energy E. The scattering regime needs E > m, checked at solve time.
    pub e: f64,
    /// Fermion mass m > 0.
    pub m: f64,
    /// Delta strength of the real potential channel.
    pub va: f64,
    /// Delta strength of the quaternionic potential channel.
    pub vb: f64,
    /// Half-separation: the deltas sit at x = -a0 and x = +a0, a0 > 0.
    pub a0: f64,
    #[serde(default)]
    pub variant: JumpVariant,
}

impl ScatteringParams {
    pub fn new(e: f64, m: f64, va: f64, vb: f64, a0: f64) -> Result<Self> {
        if !(e.is_finite() && m.is_finite() && va.is_finite() && vb.is_finite() && a0.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if m <= 0.0 {
            return Err(Error::InvalidParams(format!("mass must be positive, got {m}")));
        }
        if a0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "delta half-separation must be positive, got {a0}"
            )));
        }
        Ok(Self {
            e,
            m,
            va,
            vb,
            a0,
            variant: JumpVariant::default(),
        })
    }

    pub fn with_variant(mut self, variant: JumpVariant) -> Self {
        self.variant = variant;
        self
    }

    /// Momentum of the propagating a-channel modes.
    pub fn wavenumber(&self) -> Result<Wavenumber> {
        dispersion(self.e, self.m)
    }
}

/// Momentum p > 0 of a propagating mode, p^2 = E^2 - m^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(pub f64);

/// Relativistic dispersion relation p = sqrt(E^2 - m^2).
///
/// Rejects E <= m: at threshold p = 0 and the plane-wave matching ansatz
/// degenerates, and below it there is no propagating channel at all.
pub fn dispersion(e: f64, m: f64) -> Result<Wavenumber> {
    if m <= 0.0 {
        return Err(Error::Domain(format!("mass must be positive, got {m}")));
    }
    if e <= m {
        return Err(Error::Domain(format!(
            "scattering requires E > m, got E = {e}, m = {m}"
        )));
    }
    Ok(Wavenumber((e * e - m * m).sqrt()))
}

/// The real constants (Va, Vb) feeding the jump conditions.
///
/// The quaternionic channel's potential carries a factor i by definition;
/// that factor cancels against its complex conjugate in the coupled system,
/// so the jump algebra only ever sees the real strengths returned here.
pub fn delta_strengths(params: &ScatteringParams) -> (f64, f64) {
    (params.va, params.vb)
}
