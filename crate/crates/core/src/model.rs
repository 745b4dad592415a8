//! Risk-model parameters, assumption checks and the constants derived from them.
//!
//! Two companies pay fixed shares `delta1`, `delta2` of every claim of a
//! compound Poisson stream and collect premia at rates `c1`, `c2`. All the
//! downstream machinery works with the normalized reserves `x_i = u_i / delta_i`
//! whose net drifts are `p_i = c_i / delta_i`.

use std::fmt;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Claim-size distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClaimLaw {
    /// Exponential claims with intensity `mu` (mean `1/mu`).
    Exponential { mu: f64 },
    /// Phase-type claims: `P[claim > x] = beta exp(B x) 1`.
    #[serde(alias = "phase-type", alias = "phasetype")]
    PhaseType {
        beta: Vec<f64>,
        #[serde(rename = "B")]
        generator: Vec<Vec<f64>>,
    },
    /// Resampled observed claim sizes. Only the Monte Carlo layer accepts these.
    Empirical { samples: Vec<f64> },
}

impl ClaimLaw {
    pub fn kind(&self) -> &'static str {
        match self {
            ClaimLaw::Exponential { .. } => "exponential",
            ClaimLaw::PhaseType { .. } => "phase-type",
            ClaimLaw::Empirical { .. } => "empirical",
        }
    }

    /// Mean claim size, or `None` when the law is malformed.
    pub fn mean(&self) -> Option<f64> {
        match self {
            ClaimLaw::Exponential { mu } => Some(1.0 / mu),
            ClaimLaw::PhaseType { beta, generator } => {
                let (beta, b) = phase_type_matrices(beta, generator).ok()?;
                let neg_inv = (-b).try_inverse()?;
                let ones = DVector::from_element(beta.len(), 1.0);
                Some((beta.transpose() * neg_inv * ones)[(0, 0)])
            }
            ClaimLaw::Empirical { samples } => {
                if samples.is_empty() {
                    None
                } else {
                    Some(samples.iter().sum::<f64>() / samples.len() as f64)
                }
            }
        }
    }

    fn check(&self, out: &mut Vec<Violation>) {
        match self {
            ClaimLaw::Exponential { mu } => {
                if !(*mu > 0.0 && mu.is_finite()) {
                    out.push(Violation::ClaimLaw(format!("exponential intensity must be positive, got {mu}")));
                }
            }
            ClaimLaw::PhaseType { beta, generator } => check_phase_type(beta, generator, out),
            ClaimLaw::Empirical { samples } => {
                if samples.is_empty() {
                    out.push(Violation::ClaimLaw("empirical law has no samples".into()));
                } else if samples.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                    out.push(Violation::ClaimLaw("empirical samples must be finite and nonnegative".into()));
                } else if !(self.mean().unwrap_or(0.0) > 0.0) {
                    out.push(Violation::ClaimLaw("empirical mean must be positive".into()));
                }
            }
        }
    }
}

/// Converts `(beta, B)` to nalgebra types, checking only shapes.
pub(crate) fn phase_type_matrices(beta: &[f64], generator: &[Vec<f64>]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = beta.len();
    if n == 0 || generator.len() != n || generator.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidModel(format!(
            "phase-type generator must be {n}x{n} to match beta"
        )));
    }
    let b = DMatrix::from_fn(n, n, |i, j| generator[i][j]);
    Ok((DVector::from_column_slice(beta), b))
}

fn check_phase_type(beta: &[f64], generator: &[Vec<f64>], out: &mut Vec<Violation>) {
    let (beta_v, b) = match phase_type_matrices(beta, generator) {
        Ok(m) => m,
        Err(e) => {
            out.push(Violation::ClaimLaw(e.to_string()));
            return;
        }
    };
    let n = beta.len();
    let tol = 1e-12;
    if beta_v.iter().any(|&x| x < 0.0) || beta_v.sum() > 1.0 + tol {
        out.push(Violation::ClaimLaw("beta must be nonnegative with sum <= 1".into()));
    }
    for i in 0..n {
        if !(b[(i, i)] < 0.0) {
            out.push(Violation::ClaimLaw(format!("B[{i}][{i}] must be negative")));
        }
        let mut row = 0.0;
        for j in 0..n {
            if i != j && b[(i, j)] < 0.0 {
                out.push(Violation::ClaimLaw(format!("B[{i}][{j}] must be nonnegative")));
            }
            row += b[(i, j)];
        }
        if row > tol {
            out.push(Violation::ClaimLaw(format!("row {i} of B sums to {row} > 0")));
        }
    }
    if b.clone().try_inverse().is_none() {
        out.push(Violation::ClaimLaw("B is singular".into()));
    }
}

/// The two-company model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskModel {
    /// Claim arrival intensity.
    pub lambda: f64,
    pub claim: ClaimLaw,
    /// Premium rates `(c1, c2)`.
    pub c: [f64; 2],
    /// Claim proportions `(delta1, delta2)`.
    pub delta: [f64; 2],
}

/// A single failed standing assumption.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositive(&'static str, f64),
    /// `p1 <= p2`.
    NetProfitOrdering { p1: f64, p2: f64 },
    /// `p2 <= rho`: company 2 does not drift to infinity.
    NetProfitCondition { p2: f64, rho: f64 },
    ClaimLaw(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive(name, v) => write!(f, "{name} must be positive, got {v}"),
            Violation::NetProfitOrdering { p1, p2 } => {
                write!(f, "net-profit ordering violated: p1 = {p1} must exceed p2 = {p2}")
            }
            Violation::NetProfitCondition { p2, rho } => {
                write!(f, "net-profit condition violated: p2 = {p2} must exceed rho = {rho}")
            }
            Violation::ClaimLaw(msg) => write!(f, "claim law: {msg}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a failed report into an error naming every violation.
    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            let msg = self
                .violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::InvalidModel(msg))
        }
    }
}

/// Which form the spectral representation takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `rho < p2^2 / p1`: only the `C1` term survives.
    Case1,
    /// `rho >= p2^2 / p1`: the extra `gamma3` term appears.
    Case2,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Case1 => f.write_str("case1"),
            Regime::Case2 => f.write_str("case2"),
        }
    }
}

/// Constants that exist only for exponential claims. Indexing `[0]`/`[1]`
/// refers to company 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpConstants {
    pub lambda: f64,
    pub mu: f64,
    pub p1: f64,
    pub p2: f64,
    pub rho: f64,
    /// Adjustment coefficients `gamma_i = mu - lambda / p_i`.
    pub gamma: [f64; 2],
    /// Lundberg constants `C_i = lambda / (mu p_i)`.
    pub lundberg: [f64; 2],
    pub gamma3: f64,
    /// Left cut endpoint `q+`.
    pub q_plus_end: f64,
    /// Right cut endpoint `q-`.
    pub q_minus_end: f64,
    pub regime: Regime,
}

impl ExpConstants {
    /// Builds the constants for normalized drifts `p1 > p2 > lambda/mu`.
    pub fn new(lambda: f64, mu: f64, p1: f64, p2: f64) -> Self {
        let rho = lambda / mu;
        let gamma = [mu - lambda / p1, mu - lambda / p2];
        let lundberg = [lambda / (mu * p1), lambda / (mu * p2)];
        let gamma3 = (mu / p2) * (rho - p2 * p2 / p1);
        let (sl, sp) = (lambda.sqrt(), (p1 * mu).sqrt());
        let q_plus_end = -(sl + sp).powi(2) / (p1 - p2);
        let q_minus_end = -(sl - sp).powi(2) / (p1 - p2);
        let regime = if rho < p2 * p2 / p1 { Regime::Case1 } else { Regime::Case2 };
        ExpConstants {
            lambda,
            mu,
            p1,
            p2,
            rho,
            gamma,
            lundberg,
            gamma3,
            q_plus_end,
            q_minus_end,
            regime,
        }
    }

    pub fn p(&self, company: Company) -> f64 {
        match company {
            Company::One => self.p1,
            Company::Two => self.p2,
        }
    }

    /// True when `q- < -gamma2`, i.e. the cut integrand has no pole. Fails
    /// only exactly on the regime seam `rho = p2^2 / p1`.
    pub fn cut_is_pole_free(&self) -> bool {
        self.q_plus_end < self.q_minus_end && self.q_minus_end < -self.gamma[1] && -self.gamma[1] < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub p1: f64,
    pub p2: f64,
    pub rho: f64,
    /// `d = delta1 c2 - delta2 c1`, negative for valid models.
    pub d: f64,
    pub exponential: Option<ExpConstants>,
}

impl DerivedConstants {
    pub fn exponential(&self) -> Result<&ExpConstants> {
        self.exponential.as_ref().ok_or(Error::UnsupportedClaimLaw {
            required: "exponential",
            found: "non-exponential",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Company {
    One,
    Two,
}

impl Company {
    pub fn index(self) -> usize {
        match self {
            Company::One => 0,
            Company::Two => 1,
        }
    }
}

impl RiskModel {
    pub fn exponential(lambda: f64, mu: f64, c: [f64; 2], delta: [f64; 2]) -> Self {
        RiskModel {
            lambda,
            claim: ClaimLaw::Exponential { mu },
            c,
            delta,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn p1(&self) -> f64 {
        self.c[0] / self.delta[0]
    }

    pub fn p2(&self) -> f64 {
        self.c[1] / self.delta[1]
    }

    /// `lambda` times the mean claim; `NaN` for malformed laws.
    pub fn rho(&self) -> f64 {
        self.lambda * self.claim.mean().unwrap_or(f64::NAN)
    }

    pub fn mu(&self) -> Result<f64> {
        match self.claim {
            ClaimLaw::Exponential { mu } => Ok(mu),
            _ => Err(self.unsupported("exponential")),
        }
    }

    pub(crate) fn unsupported(&self, required: &'static str) -> Error {
        Error::UnsupportedClaimLaw {
            required,
            found: self.claim.kind(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let v = &mut report.violations;
        for (name, val) in [
            ("lambda", self.lambda),
            ("c1", self.c[0]),
            ("c2", self.c[1]),
            ("delta1", self.delta[0]),
            ("delta2", self.delta[1]),
        ] {
            if !(val > 0.0 && val.is_finite()) {
                v.push(Violation::NonPositive(name, val));
            }
        }
        self.claim.check(v);
        if !v.is_empty() {
            return report;
        }
        let (p1, p2, rho) = (self.p1(), self.p2(), self.rho());
        if !(p1 > p2) {
            v.push(Violation::NetProfitOrdering { p1, p2 });
        }
        if !(p2 > rho) {
            v.push(Violation::NetProfitCondition { p2, rho });
        }
        let total = self.delta[0] + self.delta[1];
        if (total - 1.0).abs() > 1e-12 {
            report
                .warnings
                .push(format!("delta1 + delta2 = {total} (not 1); results depend only on p1, p2"));
        }
        report
    }

    /// Validates, then computes every derived constant.
    pub fn derive(&self) -> Result<DerivedConstants> {
        self.validate().into_result()?;
        let (p1, p2) = (self.p1(), self.p2());
        let exponential = match self.claim {
            ClaimLaw::Exponential { mu } => Some(ExpConstants::new(self.lambda, mu, p1, p2)),
            _ => None,
        };
        Ok(DerivedConstants {
            p1,
            p2,
            rho: self.rho(),
            d: self.delta[0] * self.c[1] - self.delta[1] * self.c[0],
            exponential,
        })
    }

    /// Shorthand for `derive()?.exponential()`.
    pub fn exp_constants(&self) -> Result<ExpConstants> {
        self.derive()?.exponential().copied()
    }

    /// Raw reserves to normalized reserves `(u1/delta1, u2/delta2)`.
    pub fn normalize(&self, u1: f64, u2: f64) -> (f64, f64) {
        (u1 / self.delta[0], u2 / self.delta[1])
    }

    pub fn denormalize(&self, x1: f64, x2: f64) -> (f64, f64) {
        (x1 * self.delta[0], x2 * self.delta[1])
    }

    /// Whether raw reserves lie strictly above the line `u2/delta2 = u1/delta1`.
    pub fn in_upper_cone(&self, u1: f64, u2: f64) -> bool {
        let (x1, x2) = self.normalize(u1, u2);
        x2 > x1
    }
}
