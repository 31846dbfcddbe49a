//! Polynomials in the masses `D({1}), …, D({K})` (or in free coordinates
//! `γ_1, …, γ_{K-1}`), keyed by exponent vector.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::JsonValue;
use crate::math::{int, Rational, Scalar};
use crate::measures::{DiscreteBaseMeasure, MultiExponent};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPolynomial<T = Rational> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> SimplexPolynomial<T> {
    pub fn zero(vars: usize) -> Self {
        SimplexPolynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: T) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    pub fn monomial(exponents: Vec<u32>, coeff: T) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    /// The coordinate `x_j` (1-based).
    pub fn var(vars: usize, j: usize) -> Self {
        let mut e = vec![0; vars];
        e[j - 1] = 1;
        Self::monomial(e, T::one())
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, T)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::input(format!("exponent vector {e:?} has length {}, expected {vars}", e.len())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> T {
        self.terms.get(exponents).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: T) {
        debug_assert_eq!(exponents.len(), self.vars);
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert(coeff);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "polynomials in different numbers of variables");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        SimplexPolynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "polynomials in different numbers of variables");
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.vars, T::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c.as_f64() * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>())
            .sum())
    }

    pub fn eval_exact(&self, x: &[T]) -> Result<T> {
        self.check_point(x.len())?;
        Ok(self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(x).fold(T::one(), |m, (&k, xi)| (0..k).fold(m, |m, _| m * xi.clone()));
            acc + c.clone() * mono
        }))
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.vars {
            return Err(Error::input(format!("point of dimension {len} for a polynomial in {} variables", self.vars)));
        }
        Ok(())
    }

    /// Substitutes the last variable by `1 - Σ_{j<K} x_j`, giving the
    /// unique representation in `K-1` free coordinates.
    pub fn to_free(&self) -> Self {
        assert!(self.vars >= 1);
        let free = self.vars - 1;
        let mut last = Self::constant(free, T::one());
        for j in 1..=free {
            last = last.sub(&Self::var(free, j));
        }
        let mut out = Self::zero(free);
        for (e, c) in &self.terms {
            let head = Self::monomial(e[..free].to_vec(), c.clone());
            out = out.add(&head.mul(&last.pow(e[free])));
        }
        out
    }

    /// Inverse of [`Self::to_free`]: the same polynomial read as a function of
    /// all `K` masses (degree is preserved, no homogenisation).
    pub fn from_free(&self) -> Self {
        SimplexPolynomial {
            vars: self.vars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.push(0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Whether the two polynomials agree as functions on the simplex.
    pub fn same_on_simplex(&self, other: &Self) -> bool {
        self.sub(other).to_free().is_zero()
    }

    pub fn to_f64(&self) -> SimplexPolynomial<f64> {
        SimplexPolynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.as_f64())).filter(|(_, c)| *c != 0.0).collect(),
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs().as_f64()).fold(0.0, f64::max)
    }
}

impl SimplexPolynomial<Rational> {
    /// `E[F(D)]` for `D ~ DF(α)`. Accepts polynomials in all `K` masses or in
    /// the `K-1` free coordinates.
    pub fn expectation(&self, alpha: &DiscreteBaseMeasure) -> Result<Rational> {
        let k = alpha.atoms();
        let pad = if self.vars == k {
            false
        } else if self.vars + 1 == k {
            true
        } else {
            return Err(Error::input(format!("polynomial in {} variables under a measure on {k} atoms", self.vars)));
        };
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            if pad {
                e.push(0);
            }
            acc += c * alpha.dirichlet_moment(&MultiExponent::new(e));
        }
        Ok(acc)
    }

    /// `Var F(D)` under `DF(α)`.
    pub fn variance(&self, alpha: &DiscreteBaseMeasure) -> Result<Rational> {
        let m = self.expectation(alpha)?;
        Ok(self.mul(self).expectation(alpha)? - &m * &m)
    }

    /// `E[F(D) | X = obs]`, by conjugacy.
    pub fn cond_expectation(&self, alpha: &DiscreteBaseMeasure, obs: &[usize]) -> Result<Rational> {
        self.expectation(&alpha.with_observations(obs)?)
    }

    /// Rational coefficients of a float polynomial are not recoverable; this
    /// builds the monomial `Π x_j^{m_j}` exactly.
    pub fn from_exponent(m: &MultiExponent) -> Self {
        Self::monomial(m.counts().to_vec(), int(1))
    }
}

impl<T: Scalar + JsonValue> SimplexPolynomial<T> {
    /// `{"terms": [{"exponents": [...], "coeff": c}, ...]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(e, c)| json!({"exponents": e, "coeff": c.to_json()})).collect();
        json!({ "terms": terms })
    }

    /// Parses the `terms` format; an empty term list needs `vars` from the caller.
    pub fn from_json(v: &Value, vars: Option<usize>) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("polynomial JSON needs a 'terms' array"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let e: Vec<u32> = t
                .get("exponents")
                .and_then(|e| serde_json::from_value(e.clone()).ok())
                .ok_or_else(|| Error::input("polynomial term needs integer 'exponents'"))?;
            let c = T::from_json(t.get("coeff").ok_or_else(|| Error::input("polynomial term needs 'coeff'"))?)?;
            parsed.push((e, c));
        }
        let vars = match (vars, parsed.first()) {
            (Some(v), _) => v,
            (None, Some((e, _))) => e.len(),
            (None, None) => return Err(Error::input("cannot infer the number of variables of an empty polynomial")),
        };
        Self::from_terms(vars, parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rat;

    type P = SimplexPolynomial<Rational>;

    #[test]
    fn arithmetic_and_cancellation() {
        let x = P::var(2, 1);
        let y = P::var(2, 2);
        let s = x.add(&y);
        assert_eq!(s.pow(2).coeff(&[1, 1]), int(2));
        assert!(x.sub(&x).is_zero());
        assert_eq!(s.degree(), 1);
        assert_eq!(s.pow(3).degree(), 3);
    }

    #[test]
    fn free_coordinates() {
        // x1 + x2 = 1 on the simplex
        let s = P::var(2, 1).add(&P::var(2, 2));
        assert_eq!(s.to_free(), P::constant(1, int(1)));
        assert!(s.same_on_simplex(&P::constant(2, int(1))));
        let back = P::var(1, 1).from_free();
        assert_eq!(back, P::var(2, 1));
    }

    #[test]
    fn expectations_match_beta_moments() {
        let a = DiscreteBaseMeasure::from_ints(&[1, 1]).unwrap();
        let eta = P::var(2, 1);
        assert_eq!(eta.expectation(&a).unwrap(), rat(1, 2));
        assert_eq!(eta.pow(2).expectation(&a).unwrap(), rat(1, 3));
        assert_eq!(eta.variance(&a).unwrap(), rat(1, 12));
        assert_eq!(P::var(1, 1).pow(2).expectation(&a).unwrap(), rat(1, 3));
        assert_eq!(eta.cond_expectation(&a, &[1]).unwrap(), rat(2, 3));
        assert_eq!(eta.pow(2).cond_expectation(&a, &[1, 1]).unwrap(), rat(3, 5));
    }

    #[test]
    fn evaluation() {
        let p = P::from_terms(2, [(vec![2, 0], int(1)), (vec![1, 0], int(-1)), (vec![0, 0], rat(1, 6))]).unwrap();
        assert!((p.eval(&[0.5, 0.5]).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(p.eval_exact(&[rat(1, 2), rat(1, 2)]).unwrap(), rat(-1, 12));
        assert!(p.eval(&[0.5]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = P::from_terms(3, [(vec![2, 0, 1], rat(3, 4)), (vec![0, 0, 0], int(-2))]).unwrap();
        let back = P::from_json(&p.to_json(), None).unwrap();
        assert_eq!(back, p);
        let f = SimplexPolynomial::<f64>::from_json(&json!({"terms": [{"exponents": [2, 0], "coeff": 1.5}]}), None)
            .unwrap();
        assert_eq!(f.coeff(&[2, 0]), 1.5);
    }
}
