//! Best approximation of `F = D({1})²` by symmetric statistics of `X_N`:
//! the exact projection against the closed-form `h_(F,i)/C(N,i)` kernels.
//!
//! `cargo run --example ustat_approximation`

use dfchaos::math::{fmt_rational, to_f64};
use dfchaos::ustat::approx_error_report;
use dfchaos::{DiscreteBaseMeasure, SimplexPolynomial};

fn main() -> dfchaos::Result<()> {
    let alpha = DiscreteBaseMeasure::from_ints(&[1, 1])?;
    let f = SimplexPolynomial::var(2, 1).pow(2);
    for n in 1..=3 {
        let r = approx_error_report(&f, &alpha, n, 20_000, 11)?;
        println!("N = {n}   Var F = {}", fmt_rational(&r.variance));
        println!("  {:<16} {:>14} {:>14} {:>12}", "kernels", "loss (exact)", "loss (MC)", "MC s.e.");
        for c in &r.competitors {
            println!(
                "  {:<16} {:>14.10} {:>14.10} {:>12.2e}",
                c.name,
                to_f64(&c.loss_enumerated),
                c.loss_mc,
                c.loss_mc_std_error
            );
        }
        let cand = &r.candidate;
        println!(
            "  closed-form error: literal {}  truncated {}  calibrated {}",
            fmt_rational(&cand.error_literal),
            fmt_rational(&cand.error_truncated),
            fmt_rational(&cand.error_calibrated)
        );
        let scales: Vec<String> = cand.optimal_scale.iter().map(fmt_rational).collect();
        println!("  optimal per-order scale of h_(F,i): {}", scales.join(", "));
        println!("  oracle minimal: {}\n", r.oracle_minimal);
    }
    Ok(())
}
