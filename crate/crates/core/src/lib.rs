//! Ruin probabilities for two insurance companies that split claims in fixed
//! proportions.
//!
//! Exact results for exponential claims (closed form, transforms, numeric
//! inversion) sit next to general-purpose oracles: Monte Carlo and a
//! characteristic-grid solver for the integro-differential equation.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod inversion;
pub mod mc;
pub mod model;
pub mod onedim;
pub mod pde;
pub mod quadrature;
pub mod transform;

pub use error::{Error, Result};
pub use model::{ClaimLaw, Company, DerivedConstants, ExpConstants, Regime, RiskModel};
