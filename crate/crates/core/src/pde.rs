//! Discounted ruin transform `psi(u1, u2; s)` on the upper cone by marching
//! along characteristics.
//!
//! In coordinates `(u1, u2) = (delta1 r + c1 w, delta2 r + c2 w)` the upper
//! cone becomes the wedge `r >= 0, -delta1 r / c1 <= w <= 0`. With
//! `chi = psi` and `xi(r, w) = E chi(r - sigma, w)` (taking `chi = 1` past
//! the ruin edge), the Feynman-Kac equation splits into
//!
//! ```text
//! chi_w = (lambda + s) chi - lambda xi
//! xi_r  = mu (chi - xi)
//! ```
//!
//! with `chi` known on `w = 0` (company 2 alone) and `xi = 1` on the ruin
//! edge `u1 = 0`. Equivalently `h = e^{mu r} e^{-(lambda+s) w} chi` solves
//! `h_rw + mu lambda h = 0`.
//!
//! Nodes sit at `r = i dr`, `w = -j dw` with `dw = (delta1/c1) dr` and
//! `0 <= j <= i`, so the ruin edge runs through the diagonal nodes.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExpConstants, RiskModel};
use crate::onedim::ruin_transform_exp;

/// Coefficients of `chi_w = alpha chi + beta xi`, `xi_r = gamma chi + epsilon xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    /// Column `i` holds rows `0..=rows`; `xi` data on column 0.
    Rectangle { rows: usize },
    /// Column `i` holds rows `0..=i`; `xi` data on the diagonal.
    Triangle,
}

impl Lattice {
    fn top(self, i: usize) -> usize {
        match self {
            Lattice::Rectangle { rows } => rows,
            Lattice::Triangle => i,
        }
    }

    // Column where row j begins.
    fn first(self, j: usize) -> usize {
        match self {
            Lattice::Rectangle { .. } => 0,
            Lattice::Triangle => j,
        }
    }
}

/// Trapezoidal marching of the first-order system. Column `i` sits at
/// `r = i dr`, row `j` at `w = -j dw`. `chi0(i)` gives `chi` on row 0 and
/// `xi0(i, j)` gives `xi` at the first node of each row.
pub fn march_system(
    columns: usize,
    dr: f64,
    dw: f64,
    lattice: Lattice,
    coef: Coefficients,
    chi0: impl Fn(usize) -> f64,
    xi0: impl Fn(usize, usize) -> f64,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let Coefficients {
        alpha,
        beta,
        gamma,
        epsilon,
    } = coef;
    let (a, b) = (0.5 * dw, 0.5 * dr);
    let mut chi: Vec<Vec<f64>> = Vec::with_capacity(columns + 1);
    let mut xi: Vec<Vec<f64>> = Vec::with_capacity(columns + 1);
    for i in 0..=columns {
        let top = lattice.top(i);
        let mut c = vec![0.0; top + 1];
        let mut x = vec![0.0; top + 1];
        for j in 0..=top {
            let first = lattice.first(j) == i;
            if j == 0 {
                c[0] = chi0(i);
            }
            if first {
                x[j] = xi0(i, j);
            }
            if j == 0 && first {
                continue;
            }
            // Along r: xi_i - xi_{i-1} = b (G_i + G_{i-1}), G = gamma chi + epsilon xi.
            let (cp, xp) = if first { (0.0, 0.0) } else { (chi[i - 1][j], xi[i - 1][j]) };
            let rhs_r = xp + b * (gamma * cp + epsilon * xp);
            if j == 0 {
                x[0] = (rhs_r + b * gamma * c[0]) / (1.0 - b * epsilon);
                continue;
            }
            // Along w (decreasing in j): chi_{j-1} - chi_j = a (F_{j-1} + F_j), F = alpha chi + beta xi.
            let (cm, xm) = (c[j - 1], x[j - 1]);
            let rhs_w = cm - a * (alpha * cm + beta * xm);
            if first {
                c[j] = (rhs_w - a * beta * x[j]) / (1.0 + a * alpha);
                continue;
            }
            // [1 + a alpha, a beta; -b gamma, 1 - b epsilon] (chi, xi) = (rhs_w, rhs_r)
            let (m11, m12, m21, m22) = (1.0 + a * alpha, a * beta, -b * gamma, 1.0 - b * epsilon);
            let det = m11 * m22 - m12 * m21;
            c[j] = (rhs_w * m22 - m12 * rhs_r) / det;
            x[j] = (m11 * rhs_r - m21 * rhs_w) / det;
        }
        chi.push(c);
        xi.push(x);
    }
    (chi, xi)
}

/// Solved wedge with the data needed to map back to reserves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicGrid {
    pub s: f64,
    pub r_max: f64,
    /// Number of r-steps.
    pub steps: usize,
    pub dr: f64,
    pub dw: f64,
    /// `chi[i][j]` at `r = i dr`, `w = -j dw`, `j <= i`.
    pub chi: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
    /// Estimated max nodal error, from step halving; `None` for a single march.
    pub error_estimate: Option<f64>,
    lambda: f64,
    mu: f64,
    c: [f64; 2],
    delta: [f64; 2],
}

fn check_inputs(s: f64, r_max: f64, steps: usize) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::Domain {
            what: "discount rate must be nonnegative",
            value: s,
        });
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Domain {
            what: "rmax must be positive",
            value: r_max,
        });
    }
    if steps == 0 {
        return Err(Error::Domain {
            what: "steps must be positive",
            value: 0.0,
        });
    }
    Ok(())
}

/// Single march with `steps` r-steps on `[0, r_max]`.
pub fn march(model: &RiskModel, s: f64, r_max: f64, steps: usize) -> Result<CharacteristicGrid> {
    check_inputs(s, r_max, steps)?;
    model.validate().into_result()?;
    let k = model.exp_constants()?;
    march_exp(model, &k, s, r_max, steps)
}

fn march_exp(model: &RiskModel, k: &ExpConstants, s: f64, r_max: f64, steps: usize) -> Result<CharacteristicGrid> {
    let dr = r_max / steps as f64;
    let dw = model.delta[0] / model.c[0] * dr;
    // Data on w = 0 is the one-company transform at normalized reserve r.
    let boundary: Vec<f64> = (0..=steps)
        .map(|i| ruin_transform_exp(k, i as f64 * dr, s))
        .collect::<Result<_>>()?;
    let coef = Coefficients {
        alpha: model.lambda + s,
        beta: -model.lambda,
        gamma: k.mu,
        epsilon: -k.mu,
    };
    let (chi, xi) = march_system(steps, dr, dw, Lattice::Triangle, coef, |i| boundary[i], |_, _| 1.0);
    Ok(CharacteristicGrid {
        s,
        r_max,
        steps,
        dr,
        dw,
        chi,
        xi,
        error_estimate: None,
        lambda: model.lambda,
        mu: k.mu,
        c: model.c,
        delta: model.delta,
    })
}

/// Marches with `steps` and `2 steps`, keeps the Richardson-extrapolated
/// values on the coarse nodes and fails with `GridTooCoarse` if the
/// estimated error exceeds `tol`.
pub fn solve(model: &RiskModel, s: f64, r_max: f64, steps: usize, tol: f64) -> Result<CharacteristicGrid> {
    check_inputs(s, r_max, steps)?;
    model.validate().into_result()?;
    let k = model.exp_constants()?;
    let coarse = march_exp(model, &k, s, r_max, steps)?;
    let fine = march_exp(model, &k, s, r_max, 2 * steps)?;
    let mut out = coarse.clone();
    let mut err: f64 = 0.0;
    for i in 0..=steps {
        for j in 0..=i {
            let (cc, cf) = (coarse.chi[i][j], fine.chi[2 * i][2 * j]);
            let (xc, xf) = (coarse.xi[i][j], fine.xi[2 * i][2 * j]);
            out.chi[i][j] = (4.0 * cf - cc) / 3.0;
            out.xi[i][j] = (4.0 * xf - xc) / 3.0;
            err = err.max((cf - cc).abs() / 3.0);
        }
    }
    out.error_estimate = Some(err);
    if err > tol {
        return Err(Error::GridTooCoarse {
            requested: tol,
            estimated: err,
        });
    }
    Ok(out)
}

impl CharacteristicGrid {
    /// `(r, w)` of raw reserves.
    pub fn to_characteristic(&self, u1: f64, u2: f64) -> (f64, f64) {
        let d = self.delta[0] * self.c[1] - self.delta[1] * self.c[0];
        ((self.c[1] * u1 - self.c[0] * u2) / d, (-self.delta[1] * u1 + self.delta[0] * u2) / d)
    }

    pub fn to_reserves(&self, r: f64, w: f64) -> (f64, f64) {
        (self.delta[0] * r + self.c[0] * w, self.delta[1] * r + self.c[1] * w)
    }

    /// `h = e^{mu r} e^{-(lambda+s) w} chi` at node `(i, j)`.
    pub fn h(&self, i: usize, j: usize) -> f64 {
        let (r, w) = self.node(i, j);
        (self.mu * r - (self.lambda + self.s) * w).exp() * self.chi[i][j]
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.dr, -(j as f64) * self.dw)
    }

    /// `psi(u1, u2; s)` by interpolation: bilinear in full cells, linear on
    /// the half cells cut by the ruin edge.
    pub fn evaluate(&self, u1: f64, u2: f64) -> Result<f64> {
        for u in [u1, u2] {
            if !(u >= 0.0) {
                return Err(Error::InvalidReserve(u));
            }
        }
        if u2 / self.delta[1] < u1 / self.delta[0] {
            return Err(Error::LowerCone { u1, u2 });
        }
        let (r, w) = self.to_characteristic(u1, u2);
        let fi = r / self.dr;
        if fi > self.steps as f64 * (1.0 + 1e-12) {
            return Err(Error::OutOfFootprint { u1, u2 });
        }
        let fi = fi.clamp(0.0, self.steps as f64);
        let fj = (-w / self.dw).clamp(0.0, fi);
        let i0 = (fi.floor() as usize).min(self.steps.saturating_sub(1));
        let j0 = (fj.floor() as usize).min(i0);
        let (x, y) = (fi - i0 as f64, fj - j0 as f64);
        if self.steps == 0 {
            return Ok(self.chi[0][0]);
        }
        let v = |i: usize, j: usize| self.chi[i][j];
        if j0 < i0 {
            Ok((1.0 - x) * (1.0 - y) * v(i0, j0) + x * (1.0 - y) * v(i0 + 1, j0) + (1.0 - x) * y * v(i0, j0 + 1) + x * y * v(i0 + 1, j0 + 1))
        } else {
            // Half cell with corners (i0, i0), (i0 + 1, i0), (i0 + 1, i0 + 1); y <= x.
            Ok((1.0 - x) * v(i0, i0) + (x - y) * v(i0 + 1, i0) + y * v(i0 + 1, i0 + 1))
        }
    }

    /// Max residual of the system under central differences at interior
    /// nodes with `r` in `[r_lo, r_hi]`.
    pub fn residual(&self, r_lo: f64, r_hi: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..self.steps {
            let r = i as f64 * self.dr;
            if r < r_lo || r > r_hi {
                continue;
            }
            for j in 1..i.saturating_sub(1) {
                let (c, x) = (self.chi[i][j], self.xi[i][j]);
                let chi_w = (self.chi[i][j - 1] - self.chi[i][j + 1]) / (2.0 * self.dw);
                let xi_r = (self.xi[i + 1][j] - self.xi[i - 1][j]) / (2.0 * self.dr);
                let rw = chi_w - ((self.lambda + self.s) * c - self.lambda * x);
                let rr = xi_r - self.mu * (c - x);
                worst = worst.max(rw.abs()).max(rr.abs());
            }
        }
        worst
    }

    /// Max defect of `((lambda + s) chi - chi_w) / lambda = 1` on the ruin
    /// edge, with a one-sided second-order `chi_w`.
    pub fn edge_defect(&self) -> f64 {
        (2..=self.steps)
            .map(|i| {
                let chi_w = (-3.0 * self.chi[i][i] + 4.0 * self.chi[i][i - 1] - self.chi[i][i - 2]) / (2.0 * self.dw);
                (((self.lambda + self.s) * self.chi[i][i] - chi_w) / self.lambda - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Corner check where both boundaries meet: the edge condition evaluated
    /// with the first-column difference quotient. First order in the step.
    pub fn corner_defect(&self) -> f64 {
        if self.steps == 0 {
            return 0.0;
        }
        let chi_w = (self.chi[1][0] - self.chi[1][1]) / self.dw;
        (((self.lambda + self.s) * self.chi[0][0] - chi_w) / self.lambda - 1.0).abs()
    }

    /// CSV rows `r,w,u1,u2,chi,xi,h`.
    pub fn write_csv(&self, out: &mut impl Write, fmt: impl Fn(f64) -> String) -> std::io::Result<()> {
        writeln!(out, "r,w,u1,u2,chi,xi,h")?;
        for i in 0..=self.steps {
            for j in 0..=i {
                let (r, w) = self.node(i, j);
                let (u1, u2) = self.to_reserves(r, w);
                let row = [r, w, u1, u2, self.chi[i][j], self.xi[i][j], self.h(i, j)].map(&fmt);
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Ok(())
    }
}
