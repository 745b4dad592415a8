//! Single-company quantities: ultimate ruin probabilities, the discounted ruin
//! transform, the q-scale function of `X1` and its killed resolvent.

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{Error, Result};
use crate::model::{phase_type_matrices, ClaimLaw, Company, ExpConstants, RiskModel};
use crate::transform::kappa;

fn check_reserve(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidReserve(x))
    }
}

/// `psi_i(x) = C_i exp(-gamma_i x)` in normalized coordinates.
pub fn ruin_prob_exp(k: &ExpConstants, company: Company, x: f64) -> Result<f64> {
    check_reserve(x)?;
    let i = company.index();
    Ok(k.lundberg[i] * (-k.gamma[i] * x).exp())
}

/// Real roots `(theta_minus, theta_plus)` of `kappa_i(theta) = s`, `s >= 0`.
///
/// `theta_minus` lies in `(-mu, 0]`, `theta_plus >= 0`; at `s = 0` they are
/// `-gamma_i` and `0`.
pub fn kappa_roots(k: &ExpConstants, company: Company, s: f64) -> Result<(f64, f64)> {
    if !(s >= 0.0) {
        return Err(Error::Domain {
            what: "discount rate must be nonnegative",
            value: s,
        });
    }
    let p = k.p(company);
    if s == 0.0 {
        return Ok((-k.gamma[company.index()], 0.0));
    }
    // p t^2 + (p mu - lambda - s) t - s mu = 0; the roots have opposite signs.
    let a1 = p * k.mu - k.lambda - s;
    let disc = a1 * a1 + 4.0 * p * s * k.mu;
    if !(disc > 0.0) {
        return Err(Error::RootNotFound(format!("kappa = {s} has no simple real roots")));
    }
    let sq = disc.sqrt();
    // Stable pair: one root from the formula without cancellation, the other from the product.
    let (minus, plus) = if a1 >= 0.0 {
        let m = (-a1 - sq) / (2.0 * p);
        (m, (-s * k.mu / p) / m)
    } else {
        let pl = (-a1 + sq) / (2.0 * p);
        ((-s * k.mu / p) / pl, pl)
    };
    Ok((minus, plus))
}

/// `E[exp(-s tau_2) 1{tau_2 < inf}]` for company 2 from normalized reserve `x`:
/// `((mu + theta_-) / mu) exp(theta_- x)` with `theta_-` the negative root of `kappa_2 = s`.
pub fn ruin_transform_exp(k: &ExpConstants, x: f64, s: f64) -> Result<f64> {
    check_reserve(x)?;
    if s == 0.0 {
        return ruin_prob_exp(k, Company::Two, x);
    }
    let (theta, _) = kappa_roots(k, Company::Two, s)?;
    Ok((k.mu + theta) / k.mu * (theta * x).exp())
}

/// Company 2's ultimate ruin probability under phase-type claims,
/// `eta exp((B + b eta) u2 / delta2) 1` with `eta = (lambda / p2) beta (-B)^{-1}`
/// and exit rates `b = -B 1`. Exponential claims are the one-state case.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTypeRuin {
    eta: RowDVector<f64>,
    generator: DMatrix<f64>,
    delta2: f64,
}

impl PhaseTypeRuin {
    pub fn new(model: &RiskModel) -> Result<Self> {
        let (beta, gen) = match &model.claim {
            ClaimLaw::PhaseType { beta, generator } => phase_type_matrices(beta, generator)?,
            ClaimLaw::Exponential { mu } => phase_type_matrices(&[1.0], &[vec![-mu]])?,
            ClaimLaw::Empirical { .. } => return Err(model.unsupported("phase-type")),
        };
        let n = beta.len();
        let ones = DVector::from_element(n, 1.0);
        let neg_inv = (-gen.clone()).try_inverse().ok_or(Error::SingularMatrix)?;
        let eta = (model.lambda / model.p2()) * beta.transpose() * neg_inv;
        let exit = -(&gen * &ones);
        let generator = &gen + &exit * &eta;
        Ok(PhaseTypeRuin {
            eta,
            generator,
            delta2: model.delta[1],
        })
    }

    /// Ruin probability from raw reserve `u2 >= 0`.
    pub fn eval(&self, u2: f64) -> Result<f64> {
        check_reserve(u2)?;
        let m = (&self.generator * (u2 / self.delta2)).exp();
        Ok((&self.eta * m).sum())
    }
}

/// Company 2's ultimate ruin probability from raw reserve `u2` under
/// phase-type (or exponential) claims.
pub fn ruin_prob_phasetype(model: &RiskModel, u2: f64) -> Result<f64> {
    check_reserve(u2)?;
    PhaseTypeRuin::new(model)?.eval(u2)
}

/// The q-scale function of `X1` for exponential claims,
/// `W(x) = [(mu + t+) e^{t+ x} - (mu + t-) e^{t- x}] / (p1 (t+ - t-))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFunction {
    pub q: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    p1: f64,
    mu: f64,
}

impl ScaleFunction {
    pub fn new(k: &ExpConstants, q: f64) -> Result<Self> {
        let (theta_minus, theta_plus) = kappa_roots(k, Company::One, q)?;
        if theta_plus == theta_minus {
            return Err(Error::DegenerateRoots(q));
        }
        Ok(ScaleFunction {
            q,
            theta_plus,
            theta_minus,
            p1: k.p1,
            mu: k.mu,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let (tp, tm) = (self.theta_plus, self.theta_minus);
        ((self.mu + tp) * (tp * x).exp() - (self.mu + tm) * (tm * x).exp()) / (self.p1 * (tp - tm))
    }

    /// `q+(q)`, the largest root of `kappa_1 = q`.
    pub fn q_plus(&self) -> f64 {
        self.theta_plus
    }

    /// Killed q-resolvent density of `X1` started at `x1`, at level `z`:
    /// `exp(-q+ z) W(x1) - 1{x1 >= z} W(x1 - z)`.
    pub fn resolvent_density(&self, x1: f64, z: f64) -> f64 {
        let first = (-self.theta_plus * z).exp() * self.eval(x1);
        if x1 >= z {
            first - self.eval(x1 - z)
        } else {
            first
        }
    }
}

/// `W^(q)(x)`.
pub fn scale_w(k: &ExpConstants, q: f64, x: f64) -> Result<f64> {
    check_reserve(x)?;
    Ok(ScaleFunction::new(k, q)?.eval(x))
}

/// Resolvent density; requires `q > 0`.
pub fn resolvent_density(k: &ExpConstants, q: f64, x1: f64, z: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain {
            what: "resolvent needs a positive killing rate",
            value: q,
        });
    }
    check_reserve(x1)?;
    check_reserve(z)?;
    Ok(ScaleFunction::new(k, q)?.resolvent_density(x1, z))
}

/// Laplace transform in the starting point of company `i`'s survival
/// probability: `kappa_i'(0+) / kappa_i(theta)`.
pub fn survival_lt(k: &ExpConstants, company: Company, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::Domain {
            what: "survival transform needs theta > 0",
            value: theta,
        });
    }
    Ok((k.p(company) - k.rho) / kappa(k, company, theta)?)
}
