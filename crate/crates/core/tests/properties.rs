use num_traits::{One, Zero};
use proptest::prelude::*;

use dfchaos::chaos::decompose_polynomial;
use dfchaos::coeffs::{c_iso, c_overlap_oracle, pure_order_kernel, theta_oracle};
use dfchaos::hoeffding::{degenerate_check, hoeffding_decompose};
use dfchaos::jacobi::{orthonormality_residual, BetaParams};
use dfchaos::math::{factorial, falling_ratio, hyp1f1, hyp1f1_exact, int, log_gamma, rat, rising_factorial, to_f64, Rational};
use dfchaos::measures::compositions;
use dfchaos::polya::{expectation, polya_joint_prob};
use dfchaos::wright_fisher::TransitionModel;
use dfchaos::{DiscreteBaseMeasure, SimplexPolynomial, SymmetricKernel};

fn weights(k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=12, 1i64..=4), k).prop_map(|w| w.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn measure(k: usize) -> impl Strategy<Value = DiscreteBaseMeasure> {
    weights(k).prop_map(|w| DiscreteBaseMeasure::new(w).unwrap())
}

fn any_measure() -> impl Strategy<Value = DiscreteBaseMeasure> {
    (2usize..=3).prop_flat_map(measure)
}

fn statistic(order: usize, atoms: usize) -> impl Strategy<Value = SymmetricKernel<Rational>> {
    let n = compositions(order, atoms).len();
    prop::collection::vec(-5i64..=5, n).prop_map(move |v| {
        let mut it = v.into_iter();
        SymmetricKernel::from_fn(order, atoms, |_| int(it.next().unwrap()))
    })
}

fn polynomial(vars: usize, degree: usize) -> impl Strategy<Value = SimplexPolynomial<Rational>> {
    prop::collection::vec((prop::collection::vec(0u32..=degree as u32, vars), -4i64..=4), 1..4).prop_map(move |terms| {
        let mut p = SimplexPolynomial::zero(vars);
        for (mut e, c) in terms {
            while e.iter().sum::<u32>() > degree as u32 {
                let j = e.iter().position(|&x| x > 0).unwrap();
                e[j] -= 1;
            }
            p.add_term(e, int(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hyp1f1_matches_exact_series(a in -12i64..=20, b in 1i64..=24, z in -20i64..=20) {
        let (a, b, z) = (rat(a, 4), rat(b, 4), rat(z, 4));
        let exact = to_f64(&hyp1f1_exact(&a, &b, &z, 1e-30).unwrap());
        let float = hyp1f1(to_f64(&a), to_f64(&b), to_f64(&z)).unwrap();
        prop_assert!((float - exact).abs() <= 1e-10 * exact.abs().max(1.0), "{float} vs {exact}");
    }

    #[test]
    fn log_gamma_recurrence(x in 0.01f64..60.0) {
        let lhs = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
        prop_assert!((lhs - x.ln()).abs() <= 1e-10 * log_gamma(x + 1.0).unwrap().abs().max(1.0));
    }

    #[test]
    fn falling_ratio_is_a_quotient_of_factorials(a in 0u64..40, d in 0u64..40) {
        let b = a.saturating_sub(d);
        let r = falling_ratio(a, b).unwrap() * Rational::from_integer(factorial(b));
        prop_assert_eq!(r, Rational::from_integer(factorial(a)));
        if a > 0 {
            prop_assert!(falling_ratio(b, a + 1).is_err());
        }
    }

    #[test]
    fn polya_law_is_exchangeable_and_consistent(
        alpha in any_measure(),
        seq in prop::collection::vec(1usize..=3, 0..6),
        shift in 0usize..6,
    ) {
        let k = alpha.atoms();
        let seq: Vec<usize> = seq.into_iter().map(|x| (x - 1) % k + 1).collect();
        let p = polya_joint_prob(&alpha, &seq).unwrap();
        let mut rotated = seq.clone();
        if !rotated.is_empty() {
            let s = shift % rotated.len();
            rotated.rotate_left(s);
        }
        prop_assert_eq!(&polya_joint_prob(&alpha, &rotated).unwrap(), &p);
        let mut marginal = Rational::zero();
        for j in 1..=k {
            let mut longer = seq.clone();
            longer.push(j);
            marginal += polya_joint_prob(&alpha, &longer).unwrap();
        }
        prop_assert_eq!(marginal, p);
    }

    #[test]
    fn hoeffding_components_rebuild_the_statistic(
        (alpha, stat) in (2usize..=3, 1usize..=3).prop_flat_map(|(k, n)| (measure(k), statistic(n, k)))
    ) {
        let d = hoeffding_decompose(&stat, &alpha).unwrap();
        prop_assert_eq!(d.reconstruct(), stat);
        for (_, phi) in d.nonzero() {
            prop_assert_eq!(degenerate_check(phi, &alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn chaos_variance_is_the_sum_of_orders(
        (alpha, f) in (2usize..=3).prop_flat_map(|k| (measure(k), polynomial(k, 3)))
    ) {
        let d = decompose_polynomial(&f, &alpha).unwrap();
        let total = d.variance_terms().unwrap().into_iter().fold(Rational::zero(), |a, b| a + b);
        prop_assert_eq!(total, f.variance(&alpha).unwrap());
        prop_assert!(d.to_polynomial().sub(&f).to_free().is_zero());
    }

    #[test]
    fn disjoint_overlap_gives_isometry_constant(alpha in measure(2), n in 1usize..=3) {
        let h = pure_order_kernel(&alpha, n).unwrap();
        let sq = SymmetricKernel::from_fn(n, 2, |m| h.get(m) * h.get(m));
        let lhs = c_overlap_oracle(0, n, &alpha, &h, &h, 1 << 20).unwrap();
        prop_assert_eq!(lhs, c_iso(n, alpha.total_mass()) * expectation(&sq, &alpha).unwrap());
    }

    #[test]
    fn theta_rows_have_a_closed_form(num in 1i64..=20, den in 1i64..=4) {
        let a = rat(num, den);
        let theta = theta_oracle(&a, 4).unwrap();
        for n in 1..=4usize {
            for k in 1..=n {
                let sign = if (n - k) % 2 == 0 { Rational::one() } else { -Rational::one() };
                let closed = sign * (&a + int(2 * n as i64 - 1)) * rising_factorial(&(&a + int(k as i64)), n as u64 - 1)
                    / Rational::from_integer(factorial(n as u64));
                prop_assert_eq!(theta.get(n, k), &closed, "n={} k={}", n, k);
            }
        }
    }

    #[test]
    fn jacobi_polynomials_are_orthonormal(a1 in 1i64..=24, a0 in 1i64..=24) {
        let params = BetaParams::exact(rat(a1, 4), rat(a0, 4)).unwrap();
        for n in 0..=5 {
            for m in 0..=5 {
                prop_assert!(orthonormality_residual(n, m, &params) <= 1e-10);
            }
        }
    }

    #[test]
    fn transition_kernels_reproduce_polynomials(theta in measure(3), e1 in 0u32..=2, e2 in 0u32..=2, x in 1i64..=8, y in 1i64..=8) {
        prop_assume!(x + y < 10);
        let model = TransitionModel::new(theta, 4).unwrap();
        let r = SimplexPolynomial::monomial(vec![e1, e2], int(1));
        let g = [rat(x, 10), rat(y, 10)];
        let mut s = Rational::zero();
        for j in 0..=(e1 + e2) as usize {
            s += model.q_pairing_exact(j, &g, &r).unwrap();
        }
        prop_assert_eq!(s, r.eval_exact(&g).unwrap());
    }
}
