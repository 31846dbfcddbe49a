//! Chaos decomposition of a polynomial in the Dirichlet masses, with the
//! order-by-order variance split.
//!
//! `cargo run --example chaos_decomposition`

use dfchaos::chaos::decompose_polynomial;
use dfchaos::math::{fmt_rational, rat};
use dfchaos::{DiscreteBaseMeasure, SimplexPolynomial};

fn main() -> dfchaos::Result<()> {
    let alpha = DiscreteBaseMeasure::from_ints(&[1, 1])?;
    let eta2 = SimplexPolynomial::var(2, 1).pow(2);
    let d = decompose_polynomial(&eta2, &alpha)?;
    println!("F = D({{1}})^2, alpha = (1, 1): mean {}", fmt_rational(&d.mean));
    for (i, h) in d.kernels.iter().enumerate() {
        let vals: Vec<String> = h.iter().map(|(m, v)| format!("{:?}: {}", m.counts(), fmt_rational(v))).collect();
        println!("  h_{} = {}", i + 1, vals.join(", "));
    }
    let terms: Vec<String> = d.variance_terms()?.iter().map(fmt_rational).collect();
    println!("  variance {} = {}", terms.join(" + "), fmt_rational(&d.variance()?));

    let alpha3 = DiscreteBaseMeasure::new(vec![rat(1, 2), rat(1, 1), rat(3, 2)])?;
    let f = SimplexPolynomial::var(3, 1).mul(&SimplexPolynomial::var(3, 3)).add(&SimplexPolynomial::var(3, 2).pow(3));
    let d = decompose_polynomial(&f, &alpha3)?;
    let terms: Vec<String> = d.variance_terms()?.iter().map(fmt_rational).collect();
    println!("F = D1 D3 + D2^3, alpha = (1/2, 1, 3/2): variance by order {}", terms.join(", "));
    println!("  reconstruction exact: {}", d.to_polynomial().sub(&f).to_free().is_zero());
    Ok(())
}
