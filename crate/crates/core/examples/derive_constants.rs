//! Validate a model and print its derived constants in both regimes.

use quadrant_ruin::{Result, RiskModel};

fn show(label: &str, model: &RiskModel) -> Result<()> {
    let report = model.validate();
    for w in &report.warnings {
        println!("  warning: {w}");
    }
    report.into_result()?;
    let d = model.derive()?;
    let k = d.exponential()?;
    println!("{label}: p = ({}, {}), rho = {}, d = {}", d.p1, d.p2, d.rho, d.d);
    println!("  gamma = {:?}, C = {:?}, gamma3 = {:.6}", k.gamma, k.lundberg, k.gamma3);
    println!("  cut = [{:.6}, {:.6}], {}", k.q_plus_end, k.q_minus_end, k.regime);
    Ok(())
}

fn main() -> Result<()> {
    show("case 1", &RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]))?;
    show("case 2", &RiskModel::exponential(2.0, 1.0, [5.0, 2.2], [1.0, 1.0]))?;
    // Raw rates are scaled by the claim shares.
    show("shares", &RiskModel::exponential(1.0, 1.0, [1.8, 0.8], [0.6, 0.4]))?;

    let bad = RiskModel::exponential(1.0, 1.0, [2.0, 3.0], [1.0, 1.0]);
    if let Err(e) = bad.validate().into_result() {
        println!("rejected: {e}");
    }
    Ok(())
}
