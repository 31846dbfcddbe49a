//! Base measures on a finite atom set `{1, …, K}`, simplex points and
//! exact Dirichlet mixed moments.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::JsonRational;
use crate::math::{int, rising_factorial, to_f64, Rational};

/// The parameter `α = Σ_j θ_j δ_j` of a Dirichlet–Ferguson process on `{1, …, K}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteBaseMeasure {
    weights: Vec<Rational>,
    total_mass: Rational,
}

impl DiscreteBaseMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("a base measure needs at least one atom"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::input(format!("atom weights must be positive, got {w}")));
        }
        let total_mass = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
        Ok(DiscreteBaseMeasure { weights, total_mass })
    }

    /// Measure with integer weights, e.g. `from_ints(&[1, 1])`.
    pub fn from_ints(weights: &[i64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| int(w)).collect())
    }

    /// Number of atoms `K`.
    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Weight of the atom with 1-based `label`.
    pub fn weight(&self, label: usize) -> &Rational {
        &self.weights[label - 1]
    }

    /// `α(A)`, the total mass.
    pub fn total_mass(&self) -> &Rational {
        &self.total_mass
    }

    /// `α(C)` for a set of atom labels.
    pub fn mass_of(&self, set: &[usize]) -> Result<Rational> {
        self.check_labels(set)?;
        let mut seen = vec![false; self.atoms()];
        let mut acc = Rational::zero();
        for &l in set {
            if !std::mem::replace(&mut seen[l - 1], true) {
                acc += self.weight(l);
            }
        }
        Ok(acc)
    }

    pub fn check_labels(&self, labels: &[usize]) -> Result<()> {
        match labels.iter().find(|&&l| l == 0 || l > self.atoms()) {
            Some(l) => Err(Error::input(format!("atom label {l} outside 1..={}", self.atoms()))),
            None => Ok(()),
        }
    }

    /// Posterior parameter `α + Σ_i δ_{obs_i}`.
    pub fn with_observations(&self, obs: &[usize]) -> Result<Self> {
        self.check_labels(obs)?;
        let mut out = self.clone();
        for &l in obs {
            out.weights[l - 1] += Rational::one();
        }
        out.total_mass += int(obs.len() as i64);
        Ok(out)
    }

    /// Posterior parameter after observing the occupation counts `counts`.
    pub fn with_counts(&self, counts: &MultiExponent) -> Self {
        debug_assert_eq!(counts.atoms(), self.atoms());
        let mut out = self.clone();
        for (w, &c) in out.weights.iter_mut().zip(counts.counts()) {
            *w += int(c as i64);
        }
        out.total_mass += int(counts.order() as i64);
        out
    }

    /// `E[Π_j D({j})^{m_j}] = Π_j (θ_j)_{m_j} / (|α|)_{|m|}` (rising factorials).
    pub fn dirichlet_moment(&self, m: &MultiExponent) -> Rational {
        debug_assert_eq!(m.atoms(), self.atoms());
        let num = self
            .weights
            .iter()
            .zip(m.counts())
            .fold(Rational::one(), |acc, (w, &e)| acc * rising_factorial(w, e as u64));
        num / rising_factorial(&self.total_mass, m.order() as u64)
    }

    /// One draw from `Dirichlet(θ_1, …, θ_K)` via normalised Gamma variates.
    pub fn sample_dirichlet<R: Rng + ?Sized>(&self, rng: &mut R) -> SimplexPoint {
        if self.atoms() == 1 {
            return SimplexPoint { coords: vec![1.0] };
        }
        let mut draws: Vec<f64> = self
            .weights
            .iter()
            .map(|w| Gamma::new(to_f64(w), 1.0).expect("positive shape").sample(rng))
            .collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            draws.iter_mut().for_each(|d| *d /= sum);
        } else {
            // every variate underflowed: the draw sits at a vertex, chosen with
            // probability θ_j / |θ|
            let u: f64 = rng.gen::<f64>() * to_f64(&self.total_mass);
            let mut acc = 0.0;
            let winner = self
                .weights
                .iter()
                .position(|w| {
                    acc += to_f64(w);
                    u < acc
                })
                .unwrap_or(draws.len() - 1);
            draws.iter_mut().enumerate().for_each(|(i, d)| *d = if i == winner { 1.0 } else { 0.0 });
        }
        SimplexPoint { coords: draws }
    }
}

impl fmt::Display for DiscreteBaseMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(crate::math::fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// JSON form `{"weights": ["3/2", "1", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub weights: Vec<JsonRational>,
}

impl From<&DiscreteBaseMeasure> for MeasureJson {
    fn from(m: &DiscreteBaseMeasure) -> Self {
        MeasureJson { weights: m.weights.iter().cloned().map(JsonRational).collect() }
    }
}

impl TryFrom<MeasureJson> for DiscreteBaseMeasure {
    type Error = Error;
    fn try_from(j: MeasureJson) -> Result<Self> {
        DiscreteBaseMeasure::new(j.weights.into_iter().map(|w| w.0).collect())
    }
}

/// A point `(d_1, …, d_K)` of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::input(format!("simplex coordinates must be nonnegative: {coords:?}")));
        }
        let s: f64 = coords.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!("simplex coordinates sum to {s}, not 1")));
        }
        Ok(SimplexPoint { coords })
    }

    /// Completes `(γ_1, …, γ_{K-1})` with `γ_K = 1 - Σ γ_j`.
    pub fn from_free(free: &[f64]) -> Result<Self> {
        let last = 1.0 - free.iter().sum::<f64>();
        let mut coords = free.to_vec();
        coords.push(last.max(0.0));
        if last < -1e-12 {
            return Err(Error::input(format!("free coordinates {free:?} leave the simplex")));
        }
        SimplexPoint::new(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn atoms(&self) -> usize {
        self.coords.len()
    }
}

/// Occupation counts `(m_1, …, m_K)`; also the exponent vector of a monomial
/// `Π_j D({j})^{m_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiExponent(Vec<u32>);

impl MultiExponent {
    pub fn new(counts: Vec<u32>) -> Self {
        MultiExponent(counts)
    }

    pub fn zeros(atoms: usize) -> Self {
        MultiExponent(vec![0; atoms])
    }

    /// Occupation counts of a sequence of 1-based labels.
    pub fn from_labels(atoms: usize, labels: &[usize]) -> Result<Self> {
        let mut c = vec![0u32; atoms];
        for &l in labels {
            if l == 0 || l > atoms {
                return Err(Error::input(format!("atom label {l} outside 1..={atoms}")));
            }
            c[l - 1] += 1;
        }
        Ok(MultiExponent(c))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn atoms(&self) -> usize {
        self.0.len()
    }

    /// `|m| = Σ_j m_j`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// One canonical ordered sequence (non-decreasing labels) with these counts.
    pub fn to_labels(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat_n(j + 1, c as usize)).collect()
    }

    pub fn add(&self, other: &MultiExponent) -> MultiExponent {
        MultiExponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &MultiExponent) -> Option<MultiExponent> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiExponent)
    }

    pub fn with_incremented(&self, label: usize) -> MultiExponent {
        let mut c = self.0.clone();
        c[label - 1] += 1;
        MultiExponent(c)
    }

    /// Number of distinct orderings: `|m|! / Π m_j!`.
    pub fn multinomial(&self) -> Rational {
        let mut acc = Rational::one();
        let mut n = 0u64;
        for &c in &self.0 {
            for i in 1..=c as u64 {
                n += 1;
                acc = acc * int(n as i64) / int(i as i64);
            }
        }
        acc
    }

    /// Number of ways to choose a sub-multiset `sub` from this multiset's
    /// positions: `Π_j C(m_j, sub_j)`.
    pub fn choose(&self, sub: &MultiExponent) -> Rational {
        self.0
            .iter()
            .zip(&sub.0)
            .fold(Rational::one(), |acc, (&m, &s)| acc * crate::math::binom(m as u64, s as u64))
    }
}

/// All occupation vectors of `parts` atoms summing to `total`, in
/// lexicographically decreasing order (`(total, 0, …)` first).
pub fn compositions(total: usize, parts: usize) -> Vec<MultiExponent> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiExponent>) {
        if parts == 1 {
            prefix.push(total);
            out.push(MultiExponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(MultiExponent(Vec::new()));
        }
        return out;
    }
    rec(total as u32, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// All sub-multisets of `m`.
pub fn sub_multisets(m: &MultiExponent) -> Vec<MultiExponent> {
    let mut out = vec![MultiExponent(Vec::with_capacity(m.atoms()))];
    for &c in m.counts() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=c).map(move |s| {
                    let mut p = prefix.0.clone();
                    p.push(s);
                    MultiExponent(p)
                })
            })
            .collect();
    }
    out
}

/// Number of multisets of size `n` over `k` atoms: `C(n+k-1, k-1)`.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return (n == 0) as u128;
    }
    let (a, b) = ((n + k - 1) as u128, (k - 1).min(n) as u128);
    (0..b).fold(1u128, |acc, i| acc.saturating_mul(a - i) / (i + 1))
}

/// Interior lattice points `m/denom` of the simplex (every `m_j ≥ 1`), exact.
pub fn interior_lattice(atoms: usize, denom: usize) -> Vec<Vec<Rational>> {
    if denom < atoms {
        return Vec::new();
    }
    compositions(denom - atoms, atoms)
        .into_iter()
        .map(|m| m.counts().iter().map(|&c| crate::math::rat(c as i64 + 1, denom as i64)).collect())
        .collect()
}

/// `count` interior lattice points spread evenly through the lattice of
/// denominator 20, or of the smallest denominator that has enough points.
pub fn interior_grid(atoms: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut denom = 20.max(atoms);
    let mut pts = interior_lattice(atoms, denom);
    while pts.len() < count {
        denom += 1;
        pts = interior_lattice(atoms, denom);
    }
    let stride = pts.len() as f64 / count as f64;
    (0..count).map(|i| pts[(i as f64 * stride) as usize].clone()).collect()
}
