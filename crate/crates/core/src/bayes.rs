//! Bayesian estimation under squared loss with a Dirichlet–Ferguson prior,
//! and the chaos decomposition of `exp(λ D(C))`.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::chaos::{extract_kernels, polynomial_chaos, ChaosDecomposition, TupleStatistic};
use crate::coeffs::{c_iso, theta_oracle};
use crate::error::{Error, Result};
use crate::kernel::SymmetricKernel;
use crate::math::{fmt_rational, hyp1f1_exact, int, rational_from_f64, to_f64, Rational};
use crate::measures::{DiscreteBaseMeasure, MultiExponent};
use crate::poly::SimplexPolynomial;
use crate::polya::expectation;

/// Truncation order used for exponential functionals when none is given.
pub const DEFAULT_EXP_ORDER: usize = 12;

/// Absolute accuracy of the rational ₁F₁ partial sums.
const SERIES_TOL: f64 = 1e-40;

/// Prior `α` and observed labels `x_1, …, x_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedSample {
    prior: DiscreteBaseMeasure,
    labels: Vec<usize>,
}

impl ObservedSample {
    pub fn new(prior: DiscreteBaseMeasure, labels: Vec<usize>) -> Result<Self> {
        prior.check_labels(&labels)?;
        Ok(ObservedSample { prior, labels })
    }

    pub fn prior(&self) -> &DiscreteBaseMeasure {
        &self.prior
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `α + Σ δ_{x_j}`.
    pub fn posterior(&self) -> DiscreteBaseMeasure {
        self.prior.with_observations(&self.labels).expect("labels checked on construction")
    }
}

/// Bayes estimate of `V(h)` and its ingredients, all exact.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceEstimate {
    pub estimate: Rational,
    /// `Var[h(X_{n+1}, …, X_{n+m}) | obs]`.
    pub conditional_variance: Rational,
    /// `c(k, |α|+n)·E[h_k(X_{n+1}, …, X_{n+k})² | obs]`, `k = 1..=m`.
    pub contributions: Vec<Rational>,
    /// `E[∫h² dD^⊗m - (∫h dD^⊗m)² | obs]` from moments alone.
    pub direct: Rational,
}

impl VarianceEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "estimate": fmt_rational(&self.estimate),
            "estimate_f64": to_f64(&self.estimate),
            "conditional_variance": fmt_rational(&self.conditional_variance),
            "contributions": self.contributions.iter().map(fmt_rational).collect::<Vec<_>>(),
            "direct": fmt_rational(&self.direct),
        })
    }
}

fn squared(h: &TupleStatistic<Rational>) -> TupleStatistic<Rational> {
    TupleStatistic::from_fn(h.order(), h.atoms(), |x| {
        let v = h.get(x);
        v * v
    })
}

/// `V(h) = ∫h² dD^⊗m - (∫h dD^⊗m)²` as a polynomial in the masses.
pub fn conditional_variance_functional(h: &TupleStatistic<Rational>) -> SimplexPolynomial<Rational> {
    let g = h.integral_polynomial();
    squared(h).integral_polynomial().sub(&g.mul(&g))
}

/// Posterior mean of `V(h)`: the conditional variance of `h` minus the chaos
/// energy of `G = ∫h dD^⊗m` under the posterior.
///
/// `G` is a polynomial of degree `m`, so the sum stops at `k = m`.
pub fn estimate_conditional_variance(h: &TupleStatistic<Rational>, sample: &ObservedSample) -> Result<VarianceEstimate> {
    let post = sample.posterior();
    if h.atoms() != post.atoms() {
        return Err(Error::input(format!("statistic on {} atoms, prior on {}", h.atoms(), post.atoms())));
    }
    let m = h.order();
    let g = h.integral_polynomial();
    let second = squared(h).integral_polynomial().expectation(&post)?;
    let mean = g.expectation(&post)?;
    let conditional_variance = &second - &mean * &mean;
    let mut contributions = Vec::with_capacity(m);
    if m > 0 {
        let theta = theta_oracle(post.total_mass(), m)?;
        let d = polynomial_chaos(&g, &post, m, &theta)?;
        for k in 1..=m {
            let c = match d.kernel(k) {
                Some(hk) => c_iso(k, post.total_mass()) * expectation(&hk.map(|v| v * v), &post)?,
                None => Rational::zero(),
            };
            contributions.push(c);
        }
    }
    let estimate = contributions.iter().fold(conditional_variance.clone(), |acc, c| acc - c);
    let direct = second - g.mul(&g).expectation(&post)?;
    Ok(VarianceEstimate { estimate, conditional_variance, contributions, direct })
}

/// `E[(V(h) - value)² | obs]`.
pub fn posterior_loss(h: &TupleStatistic<Rational>, sample: &ObservedSample, value: &Rational) -> Result<Rational> {
    let v = conditional_variance_functional(h);
    let k = v.vars();
    let diff = v.sub(&SimplexPolynomial::constant(k, value.clone()));
    diff.mul(&diff).expectation(&sample.posterior())
}

/// Chaos decomposition of `G = exp(λ D(C))`, truncated at order `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialDecomposition {
    pub decomposition: ChaosDecomposition<f64>,
    pub mean: f64,
    pub variance: f64,
    /// `c(n, |α|)·E[h_n(X_n)²]`, `n = 1..=M`.
    pub contributions: Vec<f64>,
    /// `Var G - Σ_{n≤M} c(n)E[h_n²]`.
    pub residual: f64,
}

impl ExponentialDecomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "mean": self.mean,
            "variance": self.variance,
            "contributions": self.contributions,
            "residual": self.residual,
            "decomposition": self.decomposition.to_json(),
        })
    }
}

/// The functional depends on `D` only through `D(C)`, so the kernels are
/// computed on the two-atom collapse `{C, C^c}` with exact rational
/// conditional expectations and then pulled back to all atoms.
///
/// The kernel formula weighs the conditional expectations with coefficients
/// that grow quickly in `n`, so float conditional expectations would lose all
/// accuracy well before order 20.
pub fn decompose_exponential(
    alpha: &DiscreteBaseMeasure,
    set: &[usize],
    lambda: f64,
    max_order: usize,
) -> Result<ExponentialDecomposition> {
    let a_c = alpha.mass_of(set)?;
    let total = alpha.total_mass().clone();
    if !a_c.is_positive() || a_c >= total {
        return Err(Error::input(format!(
            "need 0 < α(C) < |α|, got α(C) = {} and |α| = {}",
            fmt_rational(&a_c),
            fmt_rational(&total)
        )));
    }
    let lam = rational_from_f64(lambda)?;
    let collapsed = DiscreteBaseMeasure::new(vec![a_c.clone(), &total - &a_c])?;
    let mean = hyp1f1_exact(&a_c, &total, &lam, SERIES_TOL)?;
    let theta = theta_oracle(&total, max_order)?;
    let kernels2 = extract_kernels(&collapsed, max_order, &theta, |b| {
        let hits = int(b.counts()[0] as i64);
        let size = int(b.order() as i64);
        Ok(hyp1f1_exact(&(&a_c + hits), &(&total + size), &lam, SERIES_TOL)? - &mean)
    })?;
    let mut contributions = Vec::with_capacity(max_order);
    let mut explained = Rational::zero();
    for (i, k) in kernels2.iter().enumerate() {
        let c = c_iso(i + 1, &total) * expectation(&k.map(|v| v * v), &collapsed)?;
        contributions.push(to_f64(&c));
        explained += c;
    }
    let two_lam = &lam + &lam;
    let variance = hyp1f1_exact(&a_c, &total, &two_lam, SERIES_TOL)? - &mean * &mean;
    let residual = &variance - explained;

    let in_set: Vec<bool> = (1..=alpha.atoms()).map(|j| set.contains(&j)).collect();
    let mut kernels: Vec<SymmetricKernel<f64>> = kernels2
        .iter()
        .map(|k2| {
            SymmetricKernel::from_fn(k2.order(), alpha.atoms(), |m| {
                let hits: u32 = m.counts().iter().zip(&in_set).filter(|(_, &c)| c).map(|(n, _)| n).sum();
                to_f64(k2.get(&MultiExponent::new(vec![hits, m.order() as u32 - hits])))
            })
        })
        .collect();
    while kernels.last().is_some_and(|k| k.is_zero()) {
        kernels.pop();
    }
    let mean = to_f64(&mean);
    Ok(ExponentialDecomposition {
        decomposition: ChaosDecomposition { mean, alpha: alpha.clone(), kernels },
        mean,
        variance: to_f64(&variance),
        contributions,
        residual: to_f64(&residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoeffding::degenerate_check;
    use crate::math::{hyp1f1, rat};

    fn indicator_of_one(m: usize) -> TupleStatistic<Rational> {
        TupleStatistic::from_fn(m, 2, |x| int((x[0] == 1) as i64))
    }

    #[test]
    fn indicator_without_data() {
        let s = ObservedSample::new(DiscreteBaseMeasure::from_ints(&[1, 1]).unwrap(), vec![]).unwrap();
        let e = estimate_conditional_variance(&indicator_of_one(1), &s).unwrap();
        assert_eq!(e.estimate, rat(1, 6));
        assert_eq!(e.direct, rat(1, 6));
    }

    #[test]
    fn single_coordinate_formula() {
        let prior = DiscreteBaseMeasure::new(vec![rat(1, 2), int(1), rat(3, 2)]).unwrap();
        let h = TupleStatistic::from_fn(1, 3, |x| int([0, 2, -1][x[0] - 1]));
        let s = ObservedSample::new(prior, vec![1, 3, 3]).unwrap();
        let e = estimate_conditional_variance(&h, &s).unwrap();
        let a = s.posterior().total_mass().clone();
        assert_eq!(e.estimate, &a / (&a + int(1)) * &e.conditional_variance);
    }

    #[test]
    fn two_coordinates_and_conjugacy() {
        let prior = DiscreteBaseMeasure::from_ints(&[1, 2]).unwrap();
        let h = TupleStatistic::from_fn(2, 2, |x| int(x[0] as i64 * 3 - x[1] as i64));
        let s = ObservedSample::new(prior.clone(), vec![2, 1]).unwrap();
        let e = estimate_conditional_variance(&h, &s).unwrap();
        assert_eq!(e.estimate, e.direct);
        let moved = ObservedSample::new(s.posterior(), vec![]).unwrap();
        assert_eq!(estimate_conditional_variance(&h, &moved).unwrap().estimate, e.estimate);
        let best = posterior_loss(&h, &s, &e.estimate).unwrap();
        assert!(best < posterior_loss(&h, &s, &(&e.estimate + rat(1, 100))).unwrap());
        let constant = TupleStatistic::from_fn(2, 2, |_| int(4));
        assert!(estimate_conditional_variance(&constant, &s).unwrap().estimate.is_zero());
    }

    #[test]
    fn exponential_first_kernel() {
        let a = DiscreteBaseMeasure::from_ints(&[1, 1]).unwrap();
        let d = decompose_exponential(&a, &[1], 1.0, 4).unwrap();
        let e = std::f64::consts::E;
        assert!((d.mean - (e - 1.0)).abs() < 1e-14);
        let h1 = d.decomposition.kernel(1).unwrap();
        assert!((h1.eval(&[1]).unwrap() - 3.0 * (3.0 - e)).abs() < 1e-12);
        assert!((h1.eval(&[2]).unwrap() - 3.0 * (e - 3.0)).abs() < 1e-12);
        for n in 1..=3 {
            assert!(degenerate_check(d.decomposition.kernel(n).unwrap(), &a).unwrap() < 1e-10);
        }
    }

    #[test]
    fn exponential_residuals() {
        let a = DiscreteBaseMeasure::from_ints(&[1, 2, 1]).unwrap();
        let d = decompose_exponential(&a, &[1, 3], -0.7, 6).unwrap();
        assert!((d.mean - hyp1f1(2.0, 4.0, -0.7).unwrap()).abs() < 1e-12);
        let mut partial = 0.0;
        for c in &d.contributions {
            assert!(*c >= 0.0);
            partial += c;
            assert!(partial <= d.variance + 1e-15);
        }
        assert!(d.residual >= 0.0 && d.residual < 1e-6 * d.variance);
        let zero = decompose_exponential(&a, &[2], 0.0, 3).unwrap();
        assert_eq!(zero.mean, 1.0);
        assert!(zero.decomposition.kernels.is_empty());
        assert!(decompose_exponential(&a, &[1, 2, 3], 1.0, 3).is_err());
    }
}
