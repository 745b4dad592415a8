//! Single-company results: ruin probabilities, the discounted ruin transform
//! and the scale function of the company-1 reserve process.

use quadrant_ruin::onedim::{kappa_roots, ruin_prob_exp, ruin_transform_exp, ScaleFunction};
use quadrant_ruin::{Company, Result, RiskModel};

fn main() -> Result<()> {
    let k = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]).exp_constants()?;

    println!("{:>5} {:>10} {:>10}", "x", "psi_1", "psi_2");
    for x in [0.0, 0.5, 1.0, 2.0, 5.0] {
        println!(
            "{x:5.1} {:10.6} {:10.6}",
            ruin_prob_exp(&k, Company::One, x)?,
            ruin_prob_exp(&k, Company::Two, x)?
        );
    }

    for s in [0.0, 0.1, 1.0] {
        let (minus, plus) = kappa_roots(&k, Company::Two, s)?;
        println!("s = {s}: roots ({minus:.6}, {plus:.6}), E[e^(-s tau) ; tau < inf] at x=1: {:.6}", ruin_transform_exp(&k, 1.0, s)?);
    }

    let w = ScaleFunction::new(&k, 0.5)?;
    println!("W^(0.5): Phi = {:.6}", w.q_plus());
    for x in [0.0, 1.0, 2.0] {
        println!("  W({x}) = {:.6}, r(1, {x}) = {:.6}", w.eval(x), w.resolvent_density(1.0, x));
    }
    Ok(())
}
