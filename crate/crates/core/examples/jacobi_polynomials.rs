//! Modified Jacobi polynomials on [0, 1] as multiple integrals of degenerate
//! kernels on two atoms.
//!
//! `cargo run --example jacobi_polynomials -- 1.5 0.5`

use dfchaos::chaos::multiple_integral;
use dfchaos::jacobi::{jacobi_modified, jacobi_norm_identity, orthonormality_residual, solve_phi_system, BetaParams};
use dfchaos::measures::SimplexPoint;

fn main() -> dfchaos::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (a1, a0) = (*args.first().unwrap_or(&1.5), *args.get(1).unwrap_or(&0.5));
    let params = BetaParams::new(a1, a0)?;
    println!("alpha1 = {a1}, alpha0 = {a0}");
    for n in 1..=5 {
        let j = jacobi_modified(n, &params)?;
        let kernel = solve_phi_system(n, &params)?;
        let x = 0.37;
        let via_kernel = multiple_integral(&kernel, &SimplexPoint::new(vec![x, 1.0 - x])?)?;
        let (lhs, rhs) = jacobi_norm_identity(n, &params)?;
        println!(
            "n={n}: J_n({x}) = {:+.12}, via kernel {:+.12}, <J_n,J_n> - 1 = {:.1e}, norm identity {:.6} / {:.6}",
            j.eval(x),
            via_kernel,
            orthonormality_residual(n, n, &params),
            lhs,
            rhs
        );
    }
    Ok(())
}
