//! The Pólya urn: joint law, predictive distributions, sampling and exact
//! conditional expectations of symmetric statistics.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::SymmetricStatistic;
use crate::math::{int, to_f64, Rational, Scalar};
use crate::measures::{compositions, multiset_count, DiscreteBaseMeasure, MultiExponent, SimplexPoint};

/// Default bound on the number of terms an exact enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// `P(X_1 = a_1, …, X_k = a_k)` for the urn started from `α`.
pub fn polya_joint_prob(alpha: &DiscreteBaseMeasure, seq: &[usize]) -> Result<Rational> {
    alpha.check_labels(seq)?;
    let mut seen = vec![0i64; alpha.atoms()];
    let mut p = Rational::one();
    for (i, &a) in seq.iter().enumerate() {
        p *= (alpha.weight(a) + int(seen[a - 1])) / (alpha.total_mass() + int(i as i64));
        seen[a - 1] += 1;
    }
    Ok(p)
}

/// Law of the next draw given `history`.
pub fn predictive(alpha: &DiscreteBaseMeasure, history: &[usize]) -> Result<Vec<Rational>> {
    let post = alpha.with_observations(history)?;
    Ok(post.weights().iter().map(|w| w / post.total_mass()).collect())
}

/// A realised prefix `X_1, …, X_n` of the urn.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaSample {
    pub labels: Vec<usize>,
    pub measure: DiscreteBaseMeasure,
}

impl PolyaSample {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn counts(&self) -> MultiExponent {
        MultiExponent::from_labels(self.measure.atoms(), &self.labels).expect("labels validated at construction")
    }

    /// Continues the urn for `extra` more draws.
    pub fn extend<R: Rng + ?Sized>(&mut self, extra: usize, rng: &mut R) {
        let mut weights: Vec<f64> = self.measure.weights().iter().map(to_f64).collect();
        let mut total: f64 = to_f64(self.measure.total_mass());
        for &l in &self.labels {
            weights[l - 1] += 1.0;
            total += 1.0;
        }
        for _ in 0..extra {
            let l = draw_label(&weights, total, rng);
            weights[l - 1] += 1.0;
            total += 1.0;
            self.labels.push(l);
        }
    }

    pub fn empirical_measure(&self) -> Result<SimplexPoint> {
        empirical_measure(&self.labels, self.measure.atoms())
    }
}

fn draw_label<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (j, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return j + 1;
        }
    }
    weights.len()
}

/// `n` sequential draws from the urn.
pub fn sample_polya<R: Rng + ?Sized>(alpha: &DiscreteBaseMeasure, n: usize, rng: &mut R) -> PolyaSample {
    let mut s = PolyaSample { labels: Vec::with_capacity(n), measure: alpha.clone() };
    s.extend(n, rng);
    s
}

/// `n` i.i.d. draws from the fixed probability vector `d`.
pub fn sample_iid<R: Rng + ?Sized>(d: &SimplexPoint, n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| draw_label(d.coords(), 1.0, rng)).collect()
}

/// Normalised occupation frequencies of `seq` on `atoms` atoms.
pub fn empirical_measure(seq: &[usize], atoms: usize) -> Result<SimplexPoint> {
    if seq.is_empty() {
        return Err(Error::input("empirical measure of an empty sequence"));
    }
    let counts = MultiExponent::from_labels(atoms, seq)?;
    let n = seq.len() as f64;
    SimplexPoint::new(counts.counts().iter().map(|&c| c as f64 / n).collect())
}

/// Every ordered sequence in `{1..K}^n`, last coordinate fastest.
pub fn all_sequences(n: usize, atoms: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (atoms as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let mut cur = vec![1usize; n];
    let mut done = atoms == 0 && n > 0;
    let mut emitted = 0u128;
    std::iter::from_fn(move || {
        if done || emitted >= total {
            return None;
        }
        let out = cur.clone();
        emitted += 1;
        let mut i = n;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if cur[i] < atoms {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
        Some(out)
    })
}

/// `E[T(X_N) | X_1..X_a = fixed]`, exact.
///
/// Completions of the fixed prefix are grouped by occupation counts: every
/// ordering of a multiset `w` has the same probability under the posterior
/// urn, so the sum runs over `C(N-a+K-1, K-1)` multisets.
pub fn cond_exp_statistic<T: Scalar>(
    stat: &SymmetricStatistic<T>,
    alpha: &DiscreteBaseMeasure,
    fixed: &[usize],
) -> Result<T> {
    cond_exp_statistic_capped(stat, alpha, fixed, DEFAULT_ENUMERATION_CAP)
}

pub fn cond_exp_statistic_capped<T: Scalar>(
    stat: &SymmetricStatistic<T>,
    alpha: &DiscreteBaseMeasure,
    fixed: &[usize],
    cap: u128,
) -> Result<T> {
    let k = alpha.atoms();
    if stat.atoms() != k {
        return Err(Error::input(format!("statistic on {} atoms, measure on {k}", stat.atoms())));
    }
    if fixed.len() > stat.order() {
        return Err(Error::input(format!(
            "conditioning on {} coordinates of a statistic of {}",
            fixed.len(),
            stat.order()
        )));
    }
    let head = MultiExponent::from_labels(k, fixed)?;
    cond_exp_given_counts(stat, alpha, &head, cap)
}

/// As [`cond_exp_statistic_capped`], with the conditioning prefix given by
/// its occupation counts.
pub fn cond_exp_given_counts<T: Scalar>(
    stat: &SymmetricStatistic<T>,
    alpha: &DiscreteBaseMeasure,
    head: &MultiExponent,
    cap: u128,
) -> Result<T> {
    let rest = stat.order() - head.order();
    let needed = multiset_count(rest, alpha.atoms());
    if needed > cap {
        return Err(Error::Resource { needed, cap });
    }
    let post = alpha.with_counts(head);
    let mut acc = T::zero();
    for w in compositions(rest, alpha.atoms()) {
        let weight = w.multinomial() * post.dirichlet_moment(&w);
        if weight.is_zero() {
            continue;
        }
        acc = acc + stat.get(&head.add(&w)).clone() * T::from_rational(&weight);
    }
    Ok(acc)
}

/// `E[T(X_N)]`.
pub fn expectation<T: Scalar>(stat: &SymmetricStatistic<T>, alpha: &DiscreteBaseMeasure) -> Result<T> {
    cond_exp_statistic(stat, alpha, &[])
}

/// Probability that `X_N` has occupation counts `m`.
pub fn counts_prob(alpha: &DiscreteBaseMeasure, m: &MultiExponent) -> Rational {
    m.multinomial() * alpha.dirichlet_moment(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uniform2() -> DiscreteBaseMeasure {
        DiscreteBaseMeasure::from_ints(&[1, 1]).unwrap()
    }

    #[test]
    fn joint_probabilities() {
        let a = uniform2();
        assert_eq!(polya_joint_prob(&a, &[]).unwrap(), int(1));
        assert_eq!(polya_joint_prob(&a, &[1]).unwrap(), rat(1, 2));
        assert_eq!(polya_joint_prob(&a, &[1, 1]).unwrap(), rat(1, 3));
        assert_eq!(polya_joint_prob(&a, &[1, 2]).unwrap(), rat(1, 6));
        assert!(polya_joint_prob(&a, &[3]).is_err());
    }

    #[test]
    fn predictive_examples() {
        let a = uniform2();
        assert_eq!(predictive(&a, &[]).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(predictive(&a, &[1]).unwrap(), vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(predictive(&a, &[1, 2]).unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = DiscreteBaseMeasure::from_ints(&[1, 2, 3]).unwrap();
        assert!(sample_polya(&a, 0, &mut ChaCha8Rng::seed_from_u64(1)).is_empty());
        let s1 = sample_polya(&a, 50, &mut ChaCha8Rng::seed_from_u64(9));
        let s2 = sample_polya(&a, 50, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(s1, s2);
        assert!(s1.labels.iter().all(|&l| (1..=3).contains(&l)));
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(empirical_measure(&[1, 1, 2], 2).unwrap().coords(), &[2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(empirical_measure(&[1], 2).unwrap().coords(), &[1.0, 0.0]);
        assert!(empirical_measure(&[], 2).is_err());
    }

    #[test]
    fn sequences_enumerate_cube() {
        let all: Vec<_> = all_sequences(2, 3).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![1, 1]);
        assert_eq!(all[8], vec![3, 3]);
        assert_eq!(all_sequences(0, 3).count(), 1);
    }

    #[test]
    fn conditional_expectation_examples() {
        let a = uniform2();
        let ones = SymmetricStatistic::from_fn(2, 2, |m| int(m.counts()[0] as i64));
        assert_eq!(cond_exp_statistic(&ones, &a, &[1]).unwrap(), rat(5, 3));
        assert_eq!(cond_exp_statistic(&ones, &a, &[2, 1]).unwrap(), int(1));
        assert_eq!(cond_exp_statistic(&ones, &a, &[]).unwrap(), int(1));
        let c = SymmetricStatistic::constant(3, 2, rat(7, 2));
        assert_eq!(cond_exp_statistic(&c, &a, &[2]).unwrap(), rat(7, 2));
        let big = SymmetricStatistic::<Rational>::zeros(30, 3);
        assert!(cond_exp_statistic_capped(&big, &a.with_observations(&[]).unwrap(), &[], 10).is_err());
    }

    #[test]
    fn cap_reports_resource_error() {
        let a = DiscreteBaseMeasure::from_ints(&[1, 1, 1]).unwrap();
        let t = SymmetricStatistic::<Rational>::zeros(10, 3);
        assert_eq!(cond_exp_statistic_capped(&t, &a, &[], 5), Err(Error::Resource { needed: 66, cap: 5 }));
    }
}
