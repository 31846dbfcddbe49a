//! Symmetric functions on `{1, …, K}^n`, stored by occupation multiset.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::JsonValue;
use crate::math::{Rational, Scalar};
use crate::measures::{compositions, MultiExponent};

/// A symmetric kernel `h(a_1, …, a_n)` on `K` atoms.
///
/// Because `h` is symmetric it is a function of the occupation counts of its
/// arguments only; every multiset of size `order` has an entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel<T = Rational> {
    order: usize,
    atoms: usize,
    values: BTreeMap<MultiExponent, T>,
}

/// A symmetric statistic of `X_N` is the same object as an order-`N` kernel.
pub type SymmetricStatistic<T = Rational> = SymmetricKernel<T>;

impl<T: Scalar> SymmetricKernel<T> {
    pub fn from_fn(order: usize, atoms: usize, mut f: impl FnMut(&MultiExponent) -> T) -> Self {
        let values = compositions(order, atoms).into_iter().map(|m| {
            let v = f(&m);
            (m, v)
        });
        SymmetricKernel { order, atoms, values: values.collect() }
    }

    pub fn try_from_fn(
        order: usize,
        atoms: usize,
        mut f: impl FnMut(&MultiExponent) -> Result<T>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for m in compositions(order, atoms) {
            let v = f(&m)?;
            values.insert(m, v);
        }
        Ok(SymmetricKernel { order, atoms, values })
    }

    pub fn zeros(order: usize, atoms: usize) -> Self {
        Self::from_fn(order, atoms, |_| T::zero())
    }

    pub fn constant(order: usize, atoms: usize, c: T) -> Self {
        Self::from_fn(order, atoms, |_| c.clone())
    }

    /// Builds a kernel from explicit entries; missing multisets default to zero.
    pub fn from_entries(
        order: usize,
        atoms: usize,
        entries: impl IntoIterator<Item = (MultiExponent, T)>,
    ) -> Result<Self> {
        let mut k = Self::zeros(order, atoms);
        for (m, v) in entries {
            if m.atoms() != atoms || m.order() != order {
                return Err(Error::input(format!(
                    "counts {:?} do not describe a multiset of size {order} on {atoms} atoms",
                    m.counts()
                )));
            }
            k.values.insert(m, v);
        }
        Ok(k)
    }

    /// Kernel of an arbitrary (not necessarily symmetric) function of
    /// ordered tuples, symmetrised by averaging over permutations.
    pub fn symmetrize(order: usize, atoms: usize, f: impl Fn(&[usize]) -> T) -> Self {
        Self::from_fn(order, atoms, |m| {
            let labels = m.to_labels();
            let mut total = T::zero();
            let mut count = 0u64;
            permutations(&labels, &mut |p| {
                total = total.clone() + f(p);
                count += 1;
            });
            total / T::from_rational(&crate::math::int(count as i64))
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn get(&self, m: &MultiExponent) -> &T {
        &self.values[m]
    }

    pub fn set(&mut self, m: &MultiExponent, v: T) {
        assert!(self.values.contains_key(m), "multiset {:?} not in kernel domain", m.counts());
        self.values.insert(m.clone(), v);
    }

    /// Value at an ordered tuple of 1-based labels.
    pub fn eval(&self, labels: &[usize]) -> Result<&T> {
        if labels.len() != self.order {
            return Err(Error::input(format!("kernel of order {} evaluated at {} points", self.order, labels.len())));
        }
        Ok(self.get(&MultiExponent::from_labels(self.atoms, labels)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiExponent, &T)> {
        self.values.iter()
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> SymmetricKernel<U> {
        SymmetricKernel {
            order: self.order,
            atoms: self.atoms,
            values: self.values.iter().map(|(m, v)| (m.clone(), f(v))).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(SymmetricKernel {
            order: self.order,
            atoms: self.atoms,
            values: self.values.iter().map(|(m, v)| (m.clone(), v.clone() + other.values[m].clone())).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-T::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn to_f64(&self) -> SymmetricKernel<f64> {
        self.map(|v| v.as_f64())
    }

    /// `max_m |self(m) - other(m)|` in floating point.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .map(|(m, v)| (v.clone() - other.values[m].clone()).abs().as_f64())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().map(|v| v.abs().as_f64()).fold(0.0, f64::max)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.atoms != other.atoms {
            return Err(Error::input(format!(
                "kernel shapes differ: order {} on {} atoms vs order {} on {} atoms",
                self.order, self.atoms, other.order, other.atoms
            )));
        }
        Ok(())
    }
}

impl<T: Scalar + JsonValue> SymmetricKernel<T> {
    /// `{"order": n, "K": K, "values": [{"counts": [...], "value": v}, ...]}`.
    pub fn to_json(&self) -> Value {
        let values: Vec<Value> =
            self.values.iter().map(|(m, v)| json!({"counts": m.counts(), "value": v.to_json()})).collect();
        json!({"order": self.order, "K": self.atoms, "values": values})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::input(format!("kernel JSON missing '{name}'")));
        let order = field("order")?.as_u64().ok_or_else(|| Error::input("'order' must be an integer"))? as usize;
        let atoms = field("K")?.as_u64().ok_or_else(|| Error::input("'K' must be an integer"))? as usize;
        let entries = field("values")?.as_array().ok_or_else(|| Error::input("'values' must be an array"))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for e in entries {
            let counts: Vec<u32> = e
                .get("counts")
                .and_then(|c| serde_json::from_value(c.clone()).ok())
                .ok_or_else(|| Error::input("kernel entry needs integer 'counts'"))?;
            let value = T::from_json(e.get("value").ok_or_else(|| Error::input("kernel entry needs 'value'"))?)?;
            parsed.push((MultiExponent::new(counts), value));
        }
        Self::from_entries(order, atoms, parsed)
    }
}

fn permutations(items: &[usize], visit: &mut impl FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    rec(&mut items.to_vec(), 0, visit);
}
