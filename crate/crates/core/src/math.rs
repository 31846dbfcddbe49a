//! Special functions, exact combinatorics and index subsets.
//!
//! Everything algebraic is carried out over [`Rational`] (arbitrary precision);
//! only the Gamma and Kummer functions work in `f64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `"0.25"` / `"1e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("malformed rational '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::input(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Field elements usable as kernel values: exact rationals or `f64`.
pub trait Scalar: Clone + fmt::Debug + PartialOrd + Num + Signed + Send + Sync {
    fn from_rational(r: &Rational) -> Self;
    fn as_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Beta function `B(s, t) = Γ(s)Γ(t)/Γ(s+t)`.
pub fn beta_fn(s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::domain(format!("beta_fn requires s, t > 0, got ({s}, {t})")));
    }
    Ok((ln_gamma_pos(s) + ln_gamma_pos(t) - ln_gamma_pos(s + t)).exp())
}

const KUMMER_MAX_TERMS: usize = 100_000;
const KUMMER_REL_STOP: f64 = 1e-17;

/// Confluent hypergeometric function `₁F₁(a; b; z)` by its Kummer series.
///
/// Negative arguments go through `₁F₁(a; b; z) = e^z ₁F₁(b-a; b; -z)` so that
/// the summed series has no large alternating terms.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::domain(format!("hyp1f1 undefined for b = {b}")));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::domain("hyp1f1 arguments must be finite"));
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_series(b - a, b, -z)?);
    }
    kummer_series(a, b, z)
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small_run = 0;
    for k in 0..KUMMER_MAX_TERMS {
        let k = k as f64;
        term *= (a + k) / (b + k) * z / (k + 1.0);
        sum += term;
        if term.abs() < KUMMER_REL_STOP * sum.abs() || term == 0.0 {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Numeric {
        message: format!("Kummer series for 1F1({a}; {b}; {z}) did not converge"),
        partial: Some(sum),
    })
}

/// `₁F₁(a; b; z)` as an exact rational partial sum whose omitted tail is
/// below `tol` in absolute value. Needs `b > 0`.
pub fn hyp1f1_exact(a: &Rational, b: &Rational, z: &Rational, tol: f64) -> Result<Rational> {
    if !b.is_positive() {
        return Err(Error::domain(format!("hyp1f1_exact needs b > 0, got {b}")));
    }
    // past index k the term ratio is at most growth·|z|/(k+1)
    let growth = to_f64(&(a.abs() / b)).max(1.0);
    let zf = to_f64(&z.abs());
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for k in 0..KUMMER_MAX_TERMS {
        let kr = Rational::from_integer(BigInt::from(k));
        term = term * (a + &kr) / (b + &kr) * z / (kr + Rational::one());
        sum += &term;
        let ratio = growth * zf / (k as f64 + 2.0);
        if ratio <= 0.5 && 2.0 * to_f64(&term.abs()) < tol {
            return Ok(sum);
        }
    }
    Err(Error::Numeric {
        message: format!("exact Kummer series for 1F1({a}; {b}; {z}) did not reach {tol:e}"),
        partial: Some(to_f64(&sum)),
    })
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient `C(a, b)`; zero when `b > a`.
pub fn binom(a: u64, b: u64) -> Rational {
    Rational::from_integer(binom_int(a, b))
}

pub(crate) fn binom_int(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(a, b)·1{a ≥ b}` for possibly negative `a`, `b`.
pub fn binom_star(a: i64, b: i64) -> Rational {
    if a < 0 || b < 0 || a < b {
        Rational::zero()
    } else {
        binom(a as u64, b as u64)
    }
}

/// `a!/b!` for `a ≥ b`.
pub fn falling_ratio(a: u64, b: u64) -> Result<Rational> {
    if a < b {
        return Err(Error::domain(format!("falling_ratio requires a >= b, got ({a}, {b})")));
    }
    let v = ((b + 1)..=a).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Ok(Rational::from_integer(v))
}

/// Rising factorial `x(x+1)…(x+k-1)`; the empty product is 1.
pub fn rising_factorial(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Rising factorial in floating point.
pub fn rising_f64(x: f64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + i as f64))
}

pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::input(format!("cannot represent {x} exactly")))
}

/// Solves the square system `a·x = b` exactly by Gaussian elimination.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::input("solve_exact needs a square system"));
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Numeric { message: format!("singular matrix at column {col}"), partial: None })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in (r + 1)..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Ok(x)
}

/// A strictly increasing tuple of positive integers `k_1 < … < k_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.first() == Some(&0) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(format!("{indices:?} is not a strictly increasing positive tuple")));
        }
        Ok(IndexSubset(indices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// `self ∧ other`: common elements.
    pub fn intersection(&self, other: &IndexSubset) -> IndexSubset {
        IndexSubset(self.0.iter().copied().filter(|i| other.0.binary_search(i).is_ok()).collect())
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IndexSubset) -> IndexSubset {
        IndexSubset(self.0.iter().copied().filter(|i| other.0.binary_search(i).is_err()).collect())
    }

    /// `other ⊂ self`.
    pub fn contains(&self, other: &IndexSubset) -> bool {
        other.0.iter().all(|i| self.0.binary_search(i).is_ok())
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Lexicographic stream of the `k`-subsets of `{1, …, n}`.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets { n, next: (k <= n).then(|| (1..=k).collect()) }
}

#[derive(Debug, Clone)]
pub struct KSubsets {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = IndexSubset;

    fn next(&mut self) -> Option<IndexSubset> {
        let current = self.next.take()?;
        let k = current.len();
        let mut succ = current.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] < self.n - (k - 1 - i) {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(IndexSubset(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        let ln24 = 24f64.ln();
        assert!(((log_gamma(5.0).unwrap() - ln24) / ln24).abs() < 1e-13);
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_half_against_quadrature() {
        // Γ(1/2) = 2∫_0^∞ exp(-u²) du, composite Simpson on [0, 12]
        let n = 24_000;
        let h = 12.0 / n as f64;
        let f = |u: f64| (-u * u).exp();
        let mut s = f(0.0) + f(12.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        let gamma_half = 2.0 * s * h / 3.0;
        let lg = log_gamma(0.5).unwrap();
        assert!((lg - gamma_half.ln()).abs() < 1e-12);
        assert!((lg - 0.572_364_942_924_700_1).abs() < 1e-13);
    }

    #[test]
    fn beta_examples() {
        assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((beta_fn(2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((beta_fn(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-13);
        assert!(beta_fn(0.0, 1.0).is_err());
    }

    #[test]
    fn hyp1f1_examples() {
        let e = std::f64::consts::E;
        assert_eq!(hyp1f1(3.0, 7.0, 0.0).unwrap(), 1.0);
        assert!((hyp1f1(2.0, 2.0, 1.0).unwrap() - e).abs() < 1e-14);
        assert!((hyp1f1(1.0, 2.0, 1.0).unwrap() - (e - 1.0)).abs() < 1e-14);
        assert!(hyp1f1(1.0, -2.0, 1.0).is_err());
        // (e^z - 1)/z at z = -50 exercises the Kummer transformation
        let z = -50.0_f64;
        let want = (z.exp() - 1.0) / z;
        assert!(((hyp1f1(1.0, 2.0, z).unwrap() - want) / want).abs() < 1e-12);
        let z = 50.0_f64;
        let want = (z.exp() - 1.0) / z;
        assert!(((hyp1f1(1.0, 2.0, z).unwrap() - want) / want).abs() < 1e-12);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binom(4, 2), int(6));
        assert_eq!(binom_star(2, 3), int(0));
        assert_eq!(binom_star(5, 5), int(1));
        assert_eq!(falling_ratio(3, 1).unwrap(), int(6));
        assert_eq!(falling_ratio(7, 7).unwrap(), int(1));
        assert!(falling_ratio(1, 3).is_err());
        assert_eq!(rising_factorial(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(rising_factorial(&rat(5, 3), 0), int(1));
    }

    #[test]
    fn subsets() {
        let s: Vec<_> = k_subsets(3, 2).map(|s| s.indices().to_vec()).collect();
        assert_eq!(s, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let empty: Vec<_> = k_subsets(4, 0).collect();
        assert_eq!(empty, vec![IndexSubset::default()]);
        assert_eq!(k_subsets(6, 3).count(), 20);
        assert_eq!(k_subsets(2, 3).count(), 0);

        let a = IndexSubset::new(vec![1, 3, 5]).unwrap();
        let b = IndexSubset::new(vec![3, 4]).unwrap();
        assert_eq!(a.intersection(&b).indices(), &[3]);
        assert_eq!(a.difference(&b).indices(), &[1, 5]);
        assert!(a.contains(&IndexSubset::new(vec![1, 5]).unwrap()));
        assert!(!a.contains(&b));
        assert!(IndexSubset::new(vec![2, 2]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&int(7)), "7");
    }
}
