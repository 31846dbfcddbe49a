//! Hoeffding decomposition of a symmetric statistic of a Pólya sequence.
//!
//! `cargo run --example hoeffding_projection`

use dfchaos::hoeffding::{degenerate_check, hoeffding_decompose};
use dfchaos::math::{fmt_rational, int};
use dfchaos::{DiscreteBaseMeasure, SymmetricKernel};

fn main() -> dfchaos::Result<()> {
    let alpha = DiscreteBaseMeasure::from_ints(&[1, 2])?;
    // number of 1s in X_3, squared
    let t = SymmetricKernel::from_fn(3, 2, |m| int(m.counts()[0] as i64 * m.counts()[0] as i64));
    let d = hoeffding_decompose(&t, &alpha)?;
    println!("E T = {}", fmt_rational(&d.mean));
    for (s, phi) in d.nonzero() {
        let vals: Vec<String> = phi.iter().map(|(m, v)| format!("{:?}: {}", m.counts(), fmt_rational(v))).collect();
        println!("order {s}: {}   (degeneracy residual {:.1e})", vals.join(", "), degenerate_check(phi, &alpha)?);
    }
    println!("reconstruction exact: {}", d.reconstruct() == t);
    Ok(())
}
