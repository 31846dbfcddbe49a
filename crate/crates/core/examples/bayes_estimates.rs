//! Posterior estimates: the conditional variance of a statistic given data,
//! and the chaos of exp(λ D(C)).
//!
//! `cargo run --example bayes_estimates`

use dfchaos::bayes::{decompose_exponential, estimate_conditional_variance, ObservedSample};
use dfchaos::chaos::TupleStatistic;
use dfchaos::math::{fmt_rational, int};
use dfchaos::DiscreteBaseMeasure;

fn main() -> dfchaos::Result<()> {
    let prior = DiscreteBaseMeasure::from_ints(&[1, 1, 2])?;
    let sample = ObservedSample::new(prior.clone(), vec![1, 3, 3, 2, 3])?;
    let h = TupleStatistic::from_fn(2, 3, |x| int((x[0] == x[1]) as i64));
    let e = estimate_conditional_variance(&h, &sample)?;
    println!("h(x, y) = 1{{x = y}} after 5 observations");
    println!("  estimate {} (direct {})", fmt_rational(&e.estimate), fmt_rational(&e.direct));
    println!("  posterior mean of Var[h | D] before correction {}", fmt_rational(&e.conditional_variance));

    let d = decompose_exponential(&DiscreteBaseMeasure::from_ints(&[1, 1])?, &[1], 1.0, 20)?;
    println!("exp(D({{1}})), alpha = (1, 1): mean {:.15}, variance {:.15}", d.mean, d.variance);
    println!("  h_1(1) = {:.12}", d.decomposition.kernel(1).unwrap().eval(&[1])?);
    for (n, c) in d.contributions.iter().enumerate().take(6) {
        println!("  order {}: {:.3e}", n + 1, c);
    }
    println!("  residual after 20 orders {:.1e}", d.residual);
    Ok(())
}
