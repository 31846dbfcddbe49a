//! Finite-`N` Hoeffding decompositions of symmetric statistics of the
//! Pólya sequence.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::coeffs::{theta_table, CoefficientTable};
use crate::error::{Error, Result};
use crate::json::JsonValue;
use crate::kernel::{SymmetricKernel, SymmetricStatistic};
use crate::math::{Rational, Scalar};
use crate::measures::{compositions, sub_multisets, DiscreteBaseMeasure, MultiExponent};
use crate::polya::{cond_exp_given_counts, expectation, predictive, DEFAULT_ENUMERATION_CAP};

/// `max_x |E[h(x, X_n) | X_{n-1} = x]|` over histories `x` of length `n-1`;
/// zero exactly when `h` is degenerate.
pub fn degenerate_check<T: Scalar>(h: &SymmetricKernel<T>, alpha: &DiscreteBaseMeasure) -> Result<f64> {
    let k = alpha.atoms();
    if h.atoms() != k {
        return Err(Error::input(format!("kernel on {} atoms, measure on {k}", h.atoms())));
    }
    if h.order() == 0 {
        return Ok(h.max_abs());
    }
    let mut worst = 0.0f64;
    for x in compositions(h.order() - 1, k) {
        let pred = predictive(alpha, &x.to_labels())?;
        let mut s = T::zero();
        for (j, p) in pred.iter().enumerate() {
            s = s + h.get(&x.with_incremented(j + 1)).clone() * T::from_rational(p);
        }
        worst = worst.max(s.abs().as_f64());
    }
    Ok(worst)
}

/// `φ_T^{(s)}` and the summed projection `π[T, SH_s]` as a statistic of `X_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T = Rational> {
    pub kernel: SymmetricKernel<T>,
    pub summed: SymmetricStatistic<T>,
}

/// `Σ_{c ⊆ m, |c| = s} C(m, c)·φ(c)`: the sum of `φ` over all `s`-subsets of
/// the coordinates of a sample with counts `m`.
pub fn subset_sum<T: Scalar>(phi: &SymmetricKernel<T>, m: &MultiExponent) -> T {
    let s = phi.order();
    sub_multisets(m)
        .into_iter()
        .filter(|c| c.order() == s)
        .fold(T::zero(), |acc, c| acc + phi.get(&c).clone() * T::from_rational(&m.choose(&c)))
}

/// Statistic `m ↦ Σ_{s-subsets} φ`, of order `big_n`.
pub fn lift<T: Scalar>(phi: &SymmetricKernel<T>, big_n: usize) -> SymmetricStatistic<T> {
    SymmetricStatistic::from_fn(big_n, phi.atoms(), |m| subset_sum(phi, m))
}

struct CondCache<'a, T> {
    stat: &'a SymmetricStatistic<T>,
    alpha: &'a DiscreteBaseMeasure,
    memo: HashMap<MultiExponent, T>,
}

impl<'a, T: Scalar> CondCache<'a, T> {
    fn get(&mut self, b: &MultiExponent) -> Result<T> {
        if let Some(v) = self.memo.get(b) {
            return Ok(v.clone());
        }
        let v = cond_exp_given_counts(self.stat, self.alpha, b, DEFAULT_ENUMERATION_CAP)?;
        self.memo.insert(b.clone(), v.clone());
        Ok(v)
    }
}

fn project_with<T: Scalar>(
    cache: &mut CondCache<'_, T>,
    table: &CoefficientTable,
    s: usize,
) -> Result<Projection<T>> {
    let stat = cache.stat;
    let big_n = stat.order();
    let star: Vec<T> = (1..=s).map(|a| T::from_rational(table.theta_star(s, a))).collect();
    let kernel = SymmetricKernel::try_from_fn(s, stat.atoms(), |x| {
        let mut acc = T::zero();
        for b in sub_multisets(x) {
            let a = b.order();
            if a == 0 {
                continue;
            }
            let w = T::from_rational(&x.choose(&b));
            acc = acc + star[a - 1].clone() * w * cache.get(&b)?;
        }
        Ok(acc)
    })?;
    let summed = lift(&kernel, big_n);
    Ok(Projection { kernel, summed })
}

fn check_inputs<T: Scalar>(stat: &SymmetricStatistic<T>, alpha: &DiscreteBaseMeasure) -> Result<()> {
    if stat.atoms() != alpha.atoms() {
        return Err(Error::input(format!("statistic on {} atoms, measure on {}", stat.atoms(), alpha.atoms())));
    }
    if stat.order() == 0 {
        return Err(Error::input("statistic of X_0 has no Hoeffding components"));
    }
    Ok(())
}

/// `φ_T^{(s)}` for a centred statistic `T` of `X_N`.
pub fn project_sh<T: Scalar>(stat: &SymmetricStatistic<T>, alpha: &DiscreteBaseMeasure, s: usize) -> Result<Projection<T>> {
    check_inputs(stat, alpha)?;
    if s < 1 || s > stat.order() {
        return Err(Error::input(format!("projection order {s} outside 1..={}", stat.order())));
    }
    let table = theta_table(stat.order(), alpha.total_mass())?;
    let mut cache = CondCache { stat, alpha, memo: HashMap::new() };
    project_with(&mut cache, &table, s)
}

/// `T = E T + Σ_s π[T, SH_s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoeffdingDecomposition<T = Rational> {
    pub n: usize,
    pub mean: T,
    /// `components[s-1] = φ^{(s)}`.
    pub components: Vec<SymmetricKernel<T>>,
}

/// `T - E[T(X_N)]`.
pub fn center<T: Scalar>(stat: &SymmetricStatistic<T>, alpha: &DiscreteBaseMeasure) -> Result<(T, SymmetricStatistic<T>)> {
    let mean = expectation(stat, alpha)?;
    let centred = stat.map(|v| v.clone() - mean.clone());
    Ok((mean, centred))
}

/// Full decomposition; `T` need not be centred.
pub fn hoeffding_decompose<T: Scalar>(
    stat: &SymmetricStatistic<T>,
    alpha: &DiscreteBaseMeasure,
) -> Result<HoeffdingDecomposition<T>> {
    check_inputs(stat, alpha)?;
    let (mean, centred) = center(stat, alpha)?;
    let table = theta_table(stat.order(), alpha.total_mass())?;
    let mut cache = CondCache { stat: &centred, alpha, memo: HashMap::new() };
    let components = (1..=stat.order())
        .map(|s| project_with(&mut cache, &table, s).map(|p| p.kernel))
        .collect::<Result<_>>()?;
    Ok(HoeffdingDecomposition { n: stat.order(), mean, components })
}

impl<T: Scalar> HoeffdingDecomposition<T> {
    /// `π[T, SH_s]` as a statistic of `X_N`.
    pub fn projection(&self, s: usize) -> SymmetricStatistic<T> {
        lift(&self.components[s - 1], self.n)
    }

    /// Components that are not identically zero, as `(s, φ^{(s)})`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &SymmetricKernel<T>)> {
        self.components.iter().enumerate().filter(|(_, k)| !k.is_zero()).map(|(i, k)| (i + 1, k))
    }

    /// `E T + Σ_s π_s`, pointwise.
    pub fn reconstruct(&self) -> SymmetricStatistic<T> {
        let atoms = self.components.first().map(|k| k.atoms()).unwrap_or(0);
        SymmetricStatistic::from_fn(self.n, atoms, |m| {
            self.components.iter().fold(self.mean.clone(), |acc, phi| acc + subset_sum(phi, m))
        })
    }
}

impl<T: Scalar + JsonValue> HoeffdingDecomposition<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "mean": self.mean.to_json(),
            "components": self.components.iter().map(|k| k.to_json()).collect::<Vec<_>>(),
        })
    }
}
