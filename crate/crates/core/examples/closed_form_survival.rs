//! Joint survival probability from the spectral formula, with its terms.

use quadrant_ruin::closedform::{residue_terms, ruin, survival};
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    for (name, model) in [
        ("case 1", RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0])),
        ("case 2", RiskModel::exponential(2.0, 1.0, [5.0, 2.2], [1.0, 1.0])),
    ] {
        let k = model.exp_constants()?;
        println!("{name} ({})", k.regime);
        println!("{:>5} {:>5} {:>10} {:>10} {:>11} {:>9}", "x1", "x2", "survival", "ruin", "omega", "qerr");
        for (x1, x2) in [(0.0, 0.0), (1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (1.0, 5.0), (4.0, 6.0)] {
            let s = survival(&k, x1, x2, 1e-10)?;
            let r = ruin(&k, x1, x2, 1e-10)?;
            println!(
                "{x1:5.1} {x2:5.1} {:10.6} {:10.6} {:11.6} {:9.1e}",
                s.value, r.value, s.omega, s.quadrature_error
            );
        }
        let t = residue_terms(&k, 1.0, 2.0);
        let omega = survival(&k, 1.0, 2.0, 1e-10)?.omega;
        println!("  at (1, 2): {t:?}");
        println!("  residues {:.6} + cut {omega:.6} = {:.6}", t.sum(), t.sum() + omega);
    }
    Ok(())
}
