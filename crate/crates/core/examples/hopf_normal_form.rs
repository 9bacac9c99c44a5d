//! First Lyapunov coefficient and the derived period/amplitude corrections
//! of the synchronous Hopf bifurcation, from exact and finite-difference
//! partial derivatives.
//!
//! ```sh
//! cargo run --example hopf_normal_form -- 2.5
//! ```

use slnet::hopf::{normal_form, PartialsMethod};

fn main() -> slnet::error::Result<()> {
    let omega: f64 = std::env::args().nth(1).map_or(1.0, |a| a.parse().expect("omega is a number"));

    let exact = normal_form(omega, PartialsMethod::Analytic)?;
    print!("{}", exact.to_table());

    for h in [1e-2, 1e-3, 1e-4] {
        let fd = normal_form(omega, PartialsMethod::FiniteDifference { h })?;
        println!("h = {h:.0e}: |C1 - C1_exact| = {:.3e}", (fd.c1 - exact.c1).norm());
    }
    Ok(())
}
