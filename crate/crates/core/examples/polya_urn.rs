//! Pólya sequences: exact joint law, predictive rule and a seeded sampler
//! checked against the exact first moments.
//!
//! `cargo run --example polya_urn`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dfchaos::math::{fmt_rational, to_f64};
use dfchaos::polya::{polya_joint_prob, predictive, sample_polya};
use dfchaos::DiscreteBaseMeasure;

fn main() -> dfchaos::Result<()> {
    let alpha = DiscreteBaseMeasure::from_ints(&[1, 2, 3])?;
    let seq = [3, 1, 3, 3];
    println!("P(X = {seq:?}) = {}", fmt_rational(&polya_joint_prob(&alpha, &seq)?));
    let next: Vec<String> = predictive(&alpha, &seq)?.iter().map(fmt_rational).collect();
    println!("P(X_5 = j | history) = [{}]", next.join(", "));

    let (n, draws) = (10, 50_000);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut totals = [0.0f64; 3];
    for _ in 0..draws {
        for (t, c) in totals.iter_mut().zip(sample_polya(&alpha, n, &mut rng).counts().counts()) {
            *t += *c as f64;
        }
    }
    let a = to_f64(alpha.total_mass());
    for (j, t) in totals.iter().enumerate() {
        let p = to_f64(alpha.weight(j + 1)) / a;
        println!("label {}: mean count {:.4}, exact {:.4}", j + 1, t / draws as f64, n as f64 * p);
    }
    Ok(())
}
