//! Monte Carlo estimators: naive, conditional, discounted, and the
//! occupation density of company 1 before ruin.

use quadrant_ruin::closedform::survival;
use quadrant_ruin::mc::{conditional_survival, resolvent_mc, ruin_time_lt, simulate_joint_ruin, McConfig};
use quadrant_ruin::onedim::resolvent_density;
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    let model = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]);
    let k = model.exp_constants()?;
    let cfg = McConfig::new(200_000, 42);
    let (x1, x2) = (1.0, 2.0);

    let exact = survival(&k, x1, x2, 1e-10)?.value;
    let naive = simulate_joint_ruin(&model, [x1, x2], 100.0, &cfg)?;
    let cond = conditional_survival(&model, x1, x2, &cfg)?;
    println!("exact survival     {exact:.6}");
    println!("naive  1 - P(ruin) {:.6} +- {:.6}  [{}]", 1.0 - naive.mean, naive.standard_error, naive.meta);
    println!("conditional        {:.6} +- {:.6}  [{}]", cond.mean, cond.standard_error, cond.meta);

    let lt = ruin_time_lt(&model, [x1, x2], 0.2, 100.0, &cfg)?;
    println!("E[e^(-0.2 tau)]    {:.6} +- {:.6}", lt.mean, lt.standard_error);

    let q = 0.5;
    let edges = [0.0, 0.5, 1.0, 2.0, 4.0];
    let bins = resolvent_mc(&k, q, 1.0, &edges, &McConfig::new(100_000, 7))?;
    for (w, est) in edges.windows(2).zip(&bins) {
        let mid = 0.5 * (w[0] + w[1]);
        println!(
            "  occupation density on [{}, {}): {:.4} +- {:.4} (density at {mid}: {:.4})",
            w[0], w[1], est.mean, est.standard_error, resolvent_density(&k, q, 1.0, mid)?
        );
    }
    Ok(())
}
