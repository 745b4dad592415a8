//! Recover survival probabilities from the transform by Euler inversion and
//! compare with the closed form.

use quadrant_ruin::closedform::survival;
use quadrant_ruin::inversion::{invert_2d, DEFAULT_M};
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    let k = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]).exp_constants()?;
    println!("{:>5} {:>5} {:>10} {:>10} {:>9}", "x1", "x2", "inverted", "exact", "|M-M+5|");
    for (x1, x2) in [(0.5, 1.0), (1.0, 2.0), (1.0, 4.0), (3.0, 3.5)] {
        let inv = invert_2d(&k, x1, x2, DEFAULT_M)?;
        let exact = survival(&k, x1, x2, 1e-12)?.value;
        println!("{x1:5.1} {x2:5.1} {:10.6} {exact:10.6} {:9.1e}", inv.value, inv.discrepancy());
    }
    Ok(())
}
