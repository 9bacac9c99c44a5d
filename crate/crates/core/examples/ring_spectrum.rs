//! Block-diagonalize the Jacobian at the origin of a ring network, check
//! the diagonalization numerically and list the Hopf critical values.
//!
//! ```sh
//! cargo run --example ring_spectrum -- 6 2 0.05
//! ```

use slnet::spectral::{classify_criticalities, ring_jacobian, ring_spectral_report, verify_diagonalization, RingSpec};

fn main() -> slnet::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let n: usize = arg(0, "6").parse().expect("N is an integer");
    let s: usize = arg(1, "2").parse().expect("s is an integer");
    let c: f64 = arg(2, "0.05").parse().expect("c is a number");
    let (mu, omega) = (0.1, 1.0);

    let report = ring_spectral_report(n, s, mu, omega, c)?;
    print!("{}", report.to_csv());
    for j in 1..=n {
        let [lp, lm] = report.eigenvalues(j);
        println!("block {j}: {:+.6}{:+.6}i, {:+.6}{:+.6}i", lp.re, lp.im, lm.re, lm.im);
    }

    let jac = ring_jacobian(RingSpec::new(n, s)?, mu, omega, c);
    let residual = verify_diagonalization(&jac, &report)?;
    println!("reconstruction residual = {:.3e}", residual.reconstruction);
    println!("eigenpair residual = {:.3e}", residual.eigenpairs);

    print!("{}", classify_criticalities(n, s, c)?.to_summary());
    Ok(())
}
