//! Laplace-domain machinery for exponential claims: the exponents `kappa_i`,
//! the root pair `z1(q), z2(q)`, `q+(r)`, the function `g`, the cut data
//! `a(q), b(q), f(q)` and the double transform of the survival probability.
//!
//! Everything here works in normalized coordinates (drifts `p1 > p2`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Company, ExpConstants};

/// Distance from `0`, `-gamma2` or the cut below which `g` is not evaluated.
pub const NEAR_SINGULAR: f64 = 1e-9;

/// Principal square root, cut along the negative real axis. Every
/// branch-sensitive evaluation goes through here.
#[inline]
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    // Normalize -0.0 so real negative arguments land on the upper lip.
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// `kappa_i(theta) = p_i theta - lambda theta / (mu + theta)` for real `theta > -mu`.
pub fn kappa(k: &ExpConstants, company: Company, theta: f64) -> Result<f64> {
    if !(theta > -k.mu) {
        return Err(Error::Domain {
            what: "kappa requires theta > -mu",
            value: theta,
        });
    }
    Ok(k.p(company) * theta - k.lambda * theta / (k.mu + theta))
}

pub fn kappa_complex(k: &ExpConstants, company: Company, theta: Complex64) -> Complex64 {
    k.p(company) * theta - k.lambda * theta / (k.mu + theta)
}

/// `kappa_i'(0+) = p_i - rho`.
pub fn kappa_slope_at_zero(k: &ExpConstants, company: Company) -> f64 {
    k.p(company) - k.rho
}

/// The two roots of `kappa_1(z + q) = q (p1 - p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub q: Complex64,
    /// Root taken with the minus sign in front of the square root.
    pub z1: Complex64,
    /// Root taken with the plus sign.
    pub z2: Complex64,
}

fn linear_coeff(k: &ExpConstants, q: Complex64) -> Complex64 {
    k.p2 * q + k.p1 * (q + k.gamma[0])
}

/// Discriminant `(p2 q + p1 (q + gamma1))^2 - 4 p1 p2 q (q + gamma2)`.
pub fn discriminant(k: &ExpConstants, q: Complex64) -> Complex64 {
    let b = linear_coeff(k, q);
    b * b - 4.0 * k.p1 * k.p2 * q * (q + k.gamma[1])
}

/// Root pair using the principal square root of the discriminant, as written.
/// For real `q` outside `[q+, q-]` both roots are real and `z1 <= z2`.
pub fn z_roots(k: &ExpConstants, q: Complex64) -> RootPair {
    let b = linear_coeff(k, q);
    let s = branch_sqrt(discriminant(k, q));
    RootPair {
        q,
        z1: (-b - s) / (2.0 * k.p1),
        z2: (-b + s) / (2.0 * k.p1),
    }
}

/// `z1` continued analytically to the whole plane minus `[q+, q-]`.
///
/// The discriminant factors as `(p1-p2)^2 (q-q+)(q-q-)`; taking the principal
/// root of each factor separately leaves a single cut on the segment. This
/// agrees with [`z_roots`] for `Re q` right of the cut midpoint. Left of it the
/// principal root of the product has an extra vertical cut and the two
/// expressions differ.
pub fn z1_analytic(k: &ExpConstants, q: Complex64) -> Complex64 {
    let b = linear_coeff(k, q);
    let s = (k.p1 - k.p2) * branch_sqrt(q - k.q_plus_end) * branch_sqrt(q - k.q_minus_end);
    (-b - s) / (2.0 * k.p1)
}

/// Real part of the root pair as an affine function of `q`; equals `a(q)` on the cut.
pub fn a_ext(k: &ExpConstants, q: f64) -> f64 {
    -(k.p1 * k.mu - k.lambda + k.p2 * q + k.p1 * q) / (2.0 * k.p1)
}

/// Largest real root of `kappa_1(alpha) = r`.
pub fn q_plus(k: &ExpConstants, r: f64) -> Result<f64> {
    // p1 a^2 + (p1 mu - lambda - r) a - r mu = 0 after clearing mu + a.
    let (a2, a1, a0) = (k.p1, k.p1 * k.mu - k.lambda - r, -r * k.mu);
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return Err(Error::NoRealRoot(r));
    }
    let root = largest_quadratic_root(a2, a1, disc);
    if root <= -k.mu {
        return Err(Error::NoRealRoot(r));
    }
    Ok(root)
}

/// Largest root of `a2 x^2 + a1 x + a0` given the (nonnegative) discriminant,
/// written to avoid cancellation.
fn largest_quadratic_root(a2: f64, a1: f64, disc: f64) -> f64 {
    let sq = disc.sqrt();
    if a1 <= 0.0 {
        (-a1 + sq) / (2.0 * a2)
    } else {
        // Product of roots is a0/a2; the other root is (-a1 - sq)/(2 a2).
        let other = (-a1 - sq) / (2.0 * a2);
        let prod = (a1 * a1 - disc) / (4.0 * a2 * a2);
        if other == 0.0 {
            (-a1 + sq) / (2.0 * a2)
        } else {
            prod / other
        }
    }
}

/// `g(q) = (p2 - rho)(mu + z1(q) + q) / (q (mu p2 - lambda + p2 q))`.
pub fn g(k: &ExpConstants, q: Complex64) -> Result<Complex64> {
    if q.norm() < NEAR_SINGULAR {
        return Err(Error::Pole(0.0));
    }
    if (q + k.gamma[1]).norm() < NEAR_SINGULAR {
        return Err(Error::Pole(-k.gamma[1]));
    }
    if q.im.abs() < NEAR_SINGULAR
        && q.re >= k.q_plus_end - NEAR_SINGULAR
        && q.re <= k.q_minus_end + NEAR_SINGULAR
    {
        return Err(Error::OnCut(q.re));
    }
    Ok(g_unchecked(k, q))
}

pub(crate) fn g_unchecked(k: &ExpConstants, q: Complex64) -> Complex64 {
    let z1 = z1_analytic(k, q);
    (k.p2 - k.rho) * (k.mu + z1 + q) / (q * (k.mu * k.p2 - k.lambda + k.p2 * q))
}

/// Values on the cut `[q+, q-]`: `z1` has one-sided limits `a -/+ i b` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutData {
    pub q: f64,
    pub a: f64,
    pub b: f64,
    /// `f(q) = mu + q + a(q)`.
    pub f: f64,
}

/// `b(q)^2` in factored form, exactly zero at both endpoints.
pub fn cut_b_squared(k: &ExpConstants, q: f64) -> f64 {
    let s = (k.p1 - k.p2) / (2.0 * k.p1);
    s * s * (q - k.q_plus_end) * (k.q_minus_end - q)
}

/// `b(q)^2` expanded as the polynomial `[4 p1 (p2 q mu + p2 q^2 - lambda q) - (p1 mu - lambda + (p1+p2) q)^2] / (2 p1)^2`.
pub fn cut_b_squared_expanded(k: &ExpConstants, q: f64) -> f64 {
    let lin = k.p1 * k.mu - k.lambda + k.p2 * q + k.p1 * q;
    (4.0 * k.p1 * (k.p2 * q * k.mu + k.p2 * q * q - k.lambda * q) - lin * lin) / (4.0 * k.p1 * k.p1)
}

pub fn cut_data(k: &ExpConstants, q: f64) -> Result<CutData> {
    if !(q >= k.q_plus_end && q <= k.q_minus_end) {
        return Err(Error::Domain {
            what: "cut data defined only on [q+, q-]",
            value: q,
        });
    }
    Ok(cut_data_unchecked(k, q))
}

pub(crate) fn cut_data_unchecked(k: &ExpConstants, q: f64) -> CutData {
    let a = a_ext(k, q);
    let b = cut_b_squared(k, q).max(0.0).sqrt();
    CutData { q, a, b, f: k.mu + q + a }
}

/// Double Laplace transform of the survival probability in `(x1, x2)`,
/// exponential-claims closed form. Requires `Re p > 0`, `Re q > 0`.
pub fn psi_tilde(k: &ExpConstants, p: Complex64, q: Complex64) -> Complex64 {
    let RootPair { z1, z2, .. } = z_roots(k, q);
    (k.mu + p + q) * (k.p2 - k.rho) / (p * k.p1 * (z1 - p) * z2)
}

/// A spectrally negative Laplace exponent for company 1, together with the
/// right inverse `r -> q+(r)`. Experimental: only the exponential case ships tested.
pub trait LaplaceExponent {
    fn eval(&self, theta: Complex64) -> Complex64;
    /// `kappa'(0+)`.
    fn slope_at_zero(&self) -> f64;
    /// Root of `kappa(alpha) = r` continuing the largest real root.
    fn right_inverse(&self, r: Complex64) -> Complex64;
}

/// `kappa(theta) = p theta - lambda theta / (mu + theta)`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialExponent {
    pub p: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl LaplaceExponent for ExponentialExponent {
    fn eval(&self, theta: Complex64) -> Complex64 {
        self.p * theta - self.lambda * theta / (self.mu + theta)
    }

    fn slope_at_zero(&self) -> f64 {
        self.p - self.lambda / self.mu
    }

    fn right_inverse(&self, r: Complex64) -> Complex64 {
        let a1 = self.p * self.mu - self.lambda - r;
        let a0 = -r * self.mu;
        let s = branch_sqrt(a1 * a1 - 4.0 * self.p * a0);
        let x = (-a1 + s) / (2.0 * self.p);
        let y = (-a1 - s) / (2.0 * self.p);
        if x.re >= y.re {
            x
        } else {
            y
        }
    }
}

/// Double transform for a general company-1 exponent:
/// `kappa2'(0+) / (p (kappa1(p+q) - q gap)) * [1 + p / (q - q+(q gap))]`
/// with `gap = p1 - p2`.
pub fn psi_tilde_general<E: LaplaceExponent>(kappa1: &E, gap: f64, p: Complex64, q: Complex64) -> Complex64 {
    let slope2 = kappa1.slope_at_zero() - gap;
    let r = q * gap;
    let qp = kappa1.right_inverse(r);
    slope2 / (p * (kappa1.eval(p + q) - r)) * (1.0 + p / (q - qp))
}

/// The unsimplified form of [`psi_tilde_general`] (before cancelling `p1 - p2`).
pub fn psi_tilde_general_unsimplified<E: LaplaceExponent>(
    kappa1: &E,
    gap: f64,
    p: Complex64,
    q: Complex64,
) -> Complex64 {
    let r = q * gap;
    let qp = kappa1.right_inverse(r);
    let num = (kappa1.slope_at_zero() - gap) * (r + gap * (p - qp));
    let den = p * (r - gap * qp) * (kappa1.eval(p + q) - r);
    num / den
}

pub fn company1_exponent(k: &ExpConstants) -> ExponentialExponent {
    ExponentialExponent {
        p: k.p1,
        lambda: k.lambda,
        mu: k.mu,
    }
}
