//! Numerical Laplace inversion by Euler summation (Abate–Whitt), in one
//! variable and nested over two.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ExpConstants;
use crate::transform::psi_tilde;

/// Default number of Euler terms is `2M + 1` with this `M`.
///
/// The nested double inversion multiplies the round-off amplification
/// `10^{M/3}` of both levels, so `M` much above 18 loses accuracy in
/// double precision.
pub const DEFAULT_M: usize = 15;

/// Disagreement between `M` and `M + 5` above which the result is rejected.
pub const AGREEMENT_TOL: f64 = 1e-3;

/// Nodes and weights of the Euler algorithm:
/// `f(t) ~ 10^{M/3}/t * sum_k eta_k Re F(beta_k / t)`.
#[derive(Debug, Clone)]
pub struct EulerRule {
    m: usize,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    scale: f64,
}

impl EulerRule {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "Euler rule needs M >= 1");
        let n = 2 * m + 1;
        let mut xi = vec![0.0; n];
        xi[0] = 0.5;
        for x in xi.iter_mut().take(m + 1).skip(1) {
            *x = 1.0;
        }
        let tail = 2f64.powi(-(m as i32));
        xi[2 * m] = tail;
        let mut binom = 1.0;
        for k in 1..m {
            binom *= (m - k + 1) as f64 / k as f64;
            xi[2 * m - k] = xi[2 * m - k + 1] + tail * binom;
        }
        let a = m as f64 * std::f64::consts::LN_10 / 3.0;
        let nodes = (0..n)
            .map(|k| Complex64::new(a, std::f64::consts::PI * k as f64))
            .collect();
        let weights = (0..n)
            .map(|k| if k % 2 == 0 { xi[k] } else { -xi[k] })
            .collect();
        EulerRule {
            m,
            nodes,
            weights,
            scale: 10f64.powf(m as f64 / 3.0),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Inverts a transform of a real function at `t > 0`.
    pub fn invert_real<F: Fn(Complex64) -> Complex64>(&self, f: F, t: f64) -> f64 {
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| w * f(b / t).re)
            .sum();
        self.scale / t * sum
    }

    /// Inverts a transform of a complex-valued function, using both `beta`
    /// and its conjugate in place of the real-part shortcut.
    pub fn invert_complex<F: Fn(Complex64) -> Complex64>(&self, f: F, t: f64) -> Complex64 {
        let sum: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| *w * 0.5 * (f(b / t) + f(b.conj() / t)))
            .sum();
        self.scale / t * sum
    }
}

/// Nested double inversion: inner in `p` at `x1`, outer in `q` at `x2`.
pub fn invert_double<F: Fn(Complex64, Complex64) -> Complex64>(
    inner: &EulerRule,
    outer: &EulerRule,
    f: F,
    x1: f64,
    x2: f64,
) -> f64 {
    outer.invert_real(|q| inner.invert_complex(|p| f(p, q), x1), x2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    /// Estimate of the survival probability at `(x1, x2)`.
    pub value: f64,
    /// The same computation with `M + 5`.
    pub check: f64,
    pub m: usize,
}

impl InversionResult {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.check).abs()
    }
}

/// Survival probability at normalized reserves `(x1, x2)` by inverting the
/// double transform numerically. Fails with `ConvergenceWarning` when the
/// `M` and `M + 5` runs differ by more than [`AGREEMENT_TOL`].
pub fn invert_2d(k: &ExpConstants, x1: f64, x2: f64, m: usize) -> Result<InversionResult> {
    for x in [x1, x2] {
        if !(x > 0.0) {
            return Err(Error::Domain {
                what: "numeric inversion needs positive reserves",
                value: x,
            });
        }
    }
    let run = |m: usize| {
        let rule = EulerRule::new(m);
        invert_double(&rule, &rule, |p, q| psi_tilde(k, p, q), x1, x2)
    };
    let res = InversionResult {
        value: run(m),
        check: run(m + 5),
        m,
    };
    if res.discrepancy() > AGREEMENT_TOL {
        return Err(Error::ConvergenceWarning(res.discrepancy()));
    }
    Ok(res)
}
