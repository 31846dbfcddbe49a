//! Large-N limits of the projection coefficients next to their exact values.
//!
//! Run with `cargo run --example theta_limits -- 2` (the argument is |α|).

use dfchaos::coeffs::{printed_theta, theta_limits, theta_oracle};
use dfchaos::math::{fmt_rational, parse_rational, to_f64};

fn main() -> dfchaos::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "2".into());
    let mass = parse_rational(&arg)?;
    let kmax = 4;
    let start = std::time::Instant::now();
    let limits = theta_limits(kmax, &mass, 1e-10)?;
    let exact = theta_oracle(&mass, kmax)?;
    println!("|alpha| = {}", fmt_rational(&mass));
    println!("{:>3} {:>3} {:>22} {:>14} {:>10} {:>8}", "k", "a", "exact", "limit", "N used", "printed");
    for e in &limits.entries {
        let x = exact.get(e.k, e.a);
        let printed = printed_theta(e.k, e.a, &mass).map(|p| fmt_rational(&p)).unwrap_or_else(|| "-".into());
        println!(
            "{:>3} {:>3} {:>22} {:>14.8} {:>10} {:>8}   |diff| = {:.1e}",
            e.k,
            e.a,
            fmt_rational(x),
            e.value,
            e.n_used,
            printed,
            (e.value - to_f64(x)).abs()
        );
    }
    eprintln!("elapsed {:?}", start.elapsed());
    Ok(())
}
