//! The double Laplace transform of the survival function and the kernel
//! roots behind it.

use num_complex::Complex64;
use quadrant_ruin::transform::{g, psi_tilde, z_roots};
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    let k = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]).exp_constants()?;

    for (p, q) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.2)] {
        let v = psi_tilde(&k, Complex64::new(p, 0.0), Complex64::new(q, 0.0));
        println!("psi~({p}, {q}) = {:.8}", v.re);
    }
    let v = psi_tilde(&k, Complex64::new(1.0, 2.0), Complex64::new(1.0, -1.0));
    println!("psi~(1+2i, 1-i) = {:.8} {:+.8}i", v.re, v.im);

    let q = Complex64::new(1.0, 0.0);
    let roots = z_roots(&k, q);
    println!("roots at q=1: {:?}", roots);
    println!("g(1) = {:.8}", g(&k, q)?.re);
    Ok(())
}
