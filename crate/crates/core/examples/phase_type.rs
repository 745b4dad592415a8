//! Phase-type claims: exact one-dimensional ruin via the matrix exponential
//! and joint survival by conditional Monte Carlo.

use quadrant_ruin::mc::{conditional_survival, McConfig};
use quadrant_ruin::onedim::PhaseTypeRuin;
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/models/erlang_claims.json");
    let model = RiskModel::from_path(path)?;
    model.validate().into_result()?;
    let d = model.derive()?;
    println!("Erlang(2, 2) claims, mean {:?}, p = ({:.3}, {:.3})", model.claim.mean(), d.p1, d.p2);

    let psi2 = PhaseTypeRuin::new(&model)?;
    for u in [0.0, 0.5, 1.0, 2.0] {
        println!("  company 2 ruin from {u}: {:.6}", psi2.eval(u)?);
    }

    let (x1, x2) = model.normalize(0.6, 1.2);
    let est = conditional_survival(&model, x1, x2, &McConfig::new(100_000, 5))?;
    println!("joint survival at u = (0.6, 1.2): {:.5} +- {:.5}", est.mean, est.standard_error);
    Ok(())
}
