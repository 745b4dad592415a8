//! Exact joint survival probability for exponential claims.
//!
//! For normalized reserves `x2 > x1` the survival probability is a sum of
//! at most three exponential residue terms plus a cut integral `omega` over
//! `[q+, q-]`. Below the diagonal the problem reduces to company 2 alone.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExpConstants, Regime};
use crate::quadrature::{integrate, QuadOptions};

/// Panel budget for the cut integral.
pub const MAX_PANELS: usize = 10_000;

/// Default absolute tolerance on `omega`.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Omega {
    pub value: f64,
    pub error: f64,
    /// The integrand underflowed everywhere; `value` is 0.
    pub saturated: bool,
}

/// Cut integral contribution
/// `omega(x1, x2) = -(p2 - rho)/pi * int_{q+}^{q-} e^{x1 a + x2 q} [f sin(b x1) + b cos(b x1)] / (q (q p2 + mu p2 - lambda)) dq`.
///
/// Integrated in `q = m + h cos(t)`, `t in [0, pi]`, where `b = s h sin(t)`
/// vanishes exactly at both ends.
pub fn omega(k: &ExpConstants, x1: f64, x2: f64, tol: f64) -> Result<Omega> {
    if x1 < 0.0 {
        return Err(Error::InvalidReserve(x1));
    }
    if !(x2 >= x1) {
        return Err(Error::Domain {
            what: "omega needs x2 >= x1",
            value: x2,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance must be positive",
            value: tol,
        });
    }
    if !k.cut_is_pole_free() {
        return Err(Error::Pole(-k.gamma[1]));
    }
    let mid = 0.5 * (k.q_plus_end + k.q_minus_end);
    let half = 0.5 * (k.q_minus_end - k.q_plus_end);
    let b_scale = (k.p1 - k.p2) / (2.0 * k.p1) * half;
    let a_of = |q: f64| -(k.p1 * k.mu - k.lambda + (k.p1 + k.p2) * q) / (2.0 * k.p1);

    // Exponent is affine in q, so its maximum over the cut sits at an endpoint.
    let expo = |q: f64| x1 * a_of(q) + x2 * q;
    let shift = expo(k.q_plus_end).max(expo(k.q_minus_end));
    let prefactor = (k.p2 - k.rho) / PI;
    if shift < -745.0 {
        return Ok(Omega {
            value: 0.0,
            error: 0.0,
            saturated: true,
        });
    }

    let integrand = |t: f64| {
        let (st, ct) = t.sin_cos();
        let q = mid + half * ct;
        let a = a_of(q);
        let b = b_scale * st;
        let f = k.mu + q + a;
        let (sb, cb) = (b * x1).sin_cos();
        let num = f * sb + b * cb;
        let den = q * (q * k.p2 + k.mu * k.p2 - k.lambda);
        (expo(q) - shift).exp() * num / den * half * st
    };

    let oscillations = 2.0 * b_scale * x1 / PI;
    let panels = (2.0 * oscillations).ceil().max(4.0) as usize;
    let scale = prefactor * shift.exp();
    let opts = QuadOptions {
        abs_tol: tol / scale,
        rel_tol: 0.0,
        max_panels: MAX_PANELS,
        initial_panels: panels,
    };
    let r = integrate(integrand, 0.0, PI, &opts);
    let error = r.abs_error * scale;
    if !r.converged {
        return Err(Error::ToleranceNotMet {
            requested: tol,
            estimated: error,
        });
    }
    Ok(Omega {
        value: -scale * r.value,
        error,
        saturated: false,
    })
}

/// The exponential terms of the spectral representation, obtained from the
/// residues of `g(q) e^{x1 z1(q) + x2 q}` at `q = 0` and `q = -gamma2`
/// after differentiating in `x2` and removing the auxiliary shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueTerms {
    /// `1 - C2 e^{-gamma2 x2}`: company 2's survival, inverse of the first term in `p`.
    pub one_dim_survival: f64,
    /// `-C1 e^{-gamma1 x1}`, from the pole at `q = 0`.
    pub pole_zero: f64,
    /// `C~2 e^{z1(-gamma2) x1 - gamma2 x2}`, from the pole at `q = -gamma2`.
    pub pole_gamma2: f64,
    /// `C~2 = C2 + z1(-gamma2)/mu`.
    pub c2_tilde: f64,
    /// `z1(-gamma2) = (mu/p2) min(p2^2/p1 - rho, 0)`.
    pub z1_at_minus_gamma2: f64,
}

impl ResidueTerms {
    pub fn sum(&self) -> f64 {
        self.one_dim_survival + self.pole_zero + self.pole_gamma2
    }
}

pub fn residue_terms(k: &ExpConstants, x1: f64, x2: f64) -> ResidueTerms {
    let z1 = (k.mu / k.p2) * (k.p2 * k.p2 / k.p1 - k.rho).min(0.0);
    let c2_tilde = k.lundberg[1] + z1 / k.mu;
    ResidueTerms {
        one_dim_survival: 1.0 - k.lundberg[1] * (-k.gamma[1] * x2).exp(),
        pole_zero: -k.lundberg[0] * (-k.gamma[0] * x1).exp(),
        pole_gamma2: c2_tilde * (z1 * x1 - k.gamma[1] * x2).exp(),
        c2_tilde,
        z1_at_minus_gamma2: z1,
    }
}

/// Exponential terms of the survival formula as grouped per regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralTerms {
    /// `-C1 e^{-gamma1 x1}`.
    pub c1_term: f64,
    /// `-C2 e^{-gamma2 x2}`, case 2 only.
    pub c2_term: Option<f64>,
    /// `(p2/p1) e^{-gamma3 x1 - gamma2 x2}`, case 2 only.
    pub gamma3_term: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalResult {
    pub x1: f64,
    pub x2: f64,
    pub value: f64,
    pub regime: Regime,
    /// `x2 <= x1`: value is company 2's survival probability alone.
    pub lower_cone: bool,
    pub omega: f64,
    pub terms: Option<SpectralTerms>,
    pub quadrature_error: f64,
    pub saturated: bool,
}

fn spectral_terms(k: &ExpConstants, x1: f64, x2: f64) -> SpectralTerms {
    let c1_term = -k.lundberg[0] * (-k.gamma[0] * x1).exp();
    match k.regime {
        Regime::Case1 => SpectralTerms {
            c1_term,
            c2_term: None,
            gamma3_term: None,
        },
        Regime::Case2 => SpectralTerms {
            c1_term,
            c2_term: Some(-k.lundberg[1] * (-k.gamma[1] * x2).exp()),
            gamma3_term: Some(k.p2 / k.p1 * (-k.gamma3 * x1 - k.gamma[1] * x2).exp()),
        },
    }
}

/// Joint survival probability `1 - psi(x1, x2)` in normalized coordinates.
pub fn survival(k: &ExpConstants, x1: f64, x2: f64, tol: f64) -> Result<SurvivalResult> {
    for x in [x1, x2] {
        if !(x >= 0.0) {
            return Err(Error::InvalidReserve(x));
        }
    }
    if x2 <= x1 {
        return Ok(SurvivalResult {
            x1,
            x2,
            value: 1.0 - k.lundberg[1] * (-k.gamma[1] * x2).exp(),
            regime: k.regime,
            lower_cone: true,
            omega: 0.0,
            terms: None,
            quadrature_error: 0.0,
            saturated: false,
        });
    }
    survival_upper(k, x1, x2, tol)
}

/// The spectral formula itself, valid for `x2 >= x1`. On the diagonal it
/// must agree with company 2's survival probability.
pub fn survival_upper(k: &ExpConstants, x1: f64, x2: f64, tol: f64) -> Result<SurvivalResult> {
    let om = omega(k, x1, x2, tol)?;
    let terms = spectral_terms(k, x1, x2);
    let value = 1.0 + terms.c1_term + terms.c2_term.unwrap_or(0.0) + terms.gamma3_term.unwrap_or(0.0) + om.value;
    Ok(SurvivalResult {
        x1,
        x2,
        value,
        regime: k.regime,
        lower_cone: false,
        omega: om.value,
        terms: Some(terms),
        quadrature_error: om.error,
        saturated: om.saturated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuinValue {
    pub value: f64,
    /// `1 - survival` fell outside `[0, 1]` by quadrature noise and was clipped.
    pub clipped: bool,
    pub survival: SurvivalResult,
}

/// Joint ultimate ruin probability, clipped to `[0, 1]`.
pub fn ruin(k: &ExpConstants, x1: f64, x2: f64, tol: f64) -> Result<RuinValue> {
    let s = survival(k, x1, x2, tol)?;
    let raw = 1.0 - s.value;
    let value = raw.clamp(0.0, 1.0);
    Ok(RuinValue {
        value,
        clipped: value != raw,
        survival: s,
    })
}
