//! Discounted ruin transform from the characteristic PDE solver.

use quadrant_ruin::closedform::ruin;
use quadrant_ruin::{pde, Result, RiskModel};

fn main() -> Result<()> {
    let model = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]);
    let k = model.exp_constants()?;

    let grid = pde::solve(&model, 0.0, 12.0, 120, 1e-4)?;
    println!("s = 0, error estimate {:.1e}", grid.error_estimate.unwrap_or(f64::NAN));
    for (u1, u2) in [(0.5, 1.0), (1.0, 3.0), (2.0, 2.5)] {
        let exact = ruin(&k, u1, u2, 1e-10)?.value;
        println!("  psi({u1}, {u2}) = {:.6}  closed form {exact:.6}", grid.evaluate(u1, u2)?);
    }

    for s in [0.1, 0.5, 2.0] {
        let grid = pde::solve(&model, s, 12.0, 120, 1e-4)?;
        println!("s = {s}: psi(1, 3; s) = {:.6}, residual {:.1e}", grid.evaluate(1.0, 3.0)?, grid.residual(1.0, 8.0));
    }
    Ok(())
}
