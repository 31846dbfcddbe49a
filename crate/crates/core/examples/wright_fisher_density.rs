//! Truncated Wright–Fisher transition density on the 2-simplex, its tail
//! bound and its approach to the stationary Dirichlet density.
//!
//! `cargo run --example wright_fisher_density`

use dfchaos::wright_fisher::{density_mass, kernel_q, q_via_multiple_integrals, transition_density, TransitionModel};
use dfchaos::DiscreteBaseMeasure;

fn main() -> dfchaos::Result<()> {
    let theta = DiscreteBaseMeasure::from_ints(&[1, 2, 1])?;
    let model = TransitionModel::new(theta, 8)?;
    let (g, gp) = ([0.25, 0.5], [0.6, 0.15]);
    for n in 1..=3 {
        println!(
            "Q_{n}: {:+.12} (kernel form {:+.12})",
            kernel_q(&model, n, &g, &gp)?,
            q_via_multiple_integrals(&model, n, &g, &gp)?
        );
    }
    println!("{:>6} {:>14} {:>14} {:>10} {:>12}", "t", "density", "stationary", "tail", "mass");
    for t in [0.05, 0.2, 0.5, 1.0, 3.0, 10.0] {
        let d = transition_density(&model, t, &g, &gp)?;
        println!(
            "{t:>6} {:>14.8} {:>14.8} {:>10.1e} {:>12.8}",
            d.value,
            d.stationary,
            d.tail_bound,
            density_mass(&model, t, &gp)?
        );
    }
    Ok(())
}
