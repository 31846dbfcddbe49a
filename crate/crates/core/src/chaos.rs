//! Multiple integrals `∫h dD^⊗n` of symmetric kernels, chaos kernels of
//! functionals of `D`, and the identities they satisfy.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coeffs::{c_iso, printed_theta, theta_limit_estimate, theta_oracle, ThetaCoefficients, DEFAULT_N_MAX};
use crate::error::{Error, Result};
use crate::json::JsonValue;
use crate::kernel::{SymmetricKernel, SymmetricStatistic};
use crate::math::{fmt_rational, int, to_f64, Rational, Scalar};
use crate::measures::{sub_multisets, DiscreteBaseMeasure, MeasureJson, MultiExponent, SimplexPoint};
use crate::poly::SimplexPolynomial;
use crate::polya::{self, predictive};

/// `∫h dD^⊗n` at `D = d`.
pub fn multiple_integral<T: Scalar>(h: &SymmetricKernel<T>, d: &SimplexPoint) -> Result<f64> {
    if h.atoms() != d.atoms() {
        return Err(Error::input(format!("kernel on {} atoms, point with {} coordinates", h.atoms(), d.atoms())));
    }
    Ok(h.iter()
        .map(|(m, v)| {
            let mono: f64 = m.counts().iter().zip(d.coords()).map(|(&k, &x)| x.powi(k as i32)).product();
            v.as_f64() * to_f64(&m.multinomial()) * mono
        })
        .sum())
}

/// `∫h dD^⊗n` at a rational point, exactly.
pub fn multiple_integral_exact(h: &SymmetricKernel<Rational>, d: &[Rational]) -> Result<Rational> {
    integral_polynomial(h).eval_exact(d)
}

/// `∫h dD^⊗n = Σ_m h(m)·(n!/Π m_j!)·Π D({j})^{m_j}` as a polynomial in the masses.
pub fn integral_polynomial(h: &SymmetricKernel<Rational>) -> SimplexPolynomial<Rational> {
    let mut p = SimplexPolynomial::zero(h.atoms());
    for (m, v) in h.iter() {
        p.add_term(m.counts().to_vec(), v * m.multinomial());
    }
    p
}

/// `E[∫h dD^⊗n] = E[h(X_n)]`.
pub fn expectation_of_integral<T: Scalar>(h: &SymmetricKernel<T>, alpha: &DiscreteBaseMeasure) -> Result<T> {
    polya::expectation(h, alpha)
}

/// A functional `F(D)` of the random masses.
#[derive(Clone)]
pub enum FunctionalSpec {
    /// `F = Σ c_m Π D({j})^{m_j}`, in all `K` masses or the first `K-1`.
    Polynomial(SimplexPolynomial<Rational>),
    /// Arbitrary evaluator; conditional expectations by Monte Carlo.
    BlackBox(BlackBox),
}

#[derive(Clone)]
pub struct BlackBox {
    pub f: Arc<dyn Fn(&SimplexPoint) -> f64 + Send + Sync>,
    /// Dirichlet draws per conditional expectation.
    pub budget: usize,
    pub seed: u64,
}

impl fmt::Debug for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalSpec::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            FunctionalSpec::BlackBox(b) => {
                f.debug_struct("BlackBox").field("budget", &b.budget).field("seed", &b.seed).finish()
            }
        }
    }
}

impl FunctionalSpec {
    pub fn black_box(f: impl Fn(&SimplexPoint) -> f64 + Send + Sync + 'static, budget: usize, seed: u64) -> Self {
        FunctionalSpec::BlackBox(BlackBox { f: Arc::new(f), budget, seed })
    }

    /// Polynomial degree; `None` for black boxes.
    pub fn degree(&self) -> Option<usize> {
        match self {
            FunctionalSpec::Polynomial(p) => Some(p.degree()),
            FunctionalSpec::BlackBox(_) => None,
        }
    }

    pub fn eval(&self, d: &SimplexPoint) -> Result<f64> {
        match self {
            FunctionalSpec::Polynomial(p) if p.vars() == d.atoms() => p.eval(d.coords()),
            FunctionalSpec::Polynomial(p) => p.eval(&d.coords()[..p.vars()]),
            FunctionalSpec::BlackBox(b) => Ok((b.f)(d)),
        }
    }
}

/// A conditional expectation: exact, or a Monte Carlo mean with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    Exact(Rational),
    MonteCarlo { mean: f64, std_error: f64, draws: usize },
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Exact(r) => to_f64(r),
            Estimate::MonteCarlo { mean, .. } => *mean,
        }
    }
}

/// `E[F(D) | X = obs]`: `F` integrated against `DF(α + Σ δ_obs)`.
pub fn cond_exp_functional(f: &FunctionalSpec, alpha: &DiscreteBaseMeasure, obs: &[usize]) -> Result<Estimate> {
    let counts = MultiExponent::from_labels(alpha.atoms(), obs)?;
    cond_exp_counts(f, alpha, &counts)
}

fn cond_exp_counts(f: &FunctionalSpec, alpha: &DiscreteBaseMeasure, b: &MultiExponent) -> Result<Estimate> {
    let post = alpha.with_counts(b);
    match f {
        FunctionalSpec::Polynomial(p) => p.expectation(&post).map(Estimate::Exact),
        FunctionalSpec::BlackBox(bb) => {
            if bb.budget < 2 {
                return Err(Error::input("Monte Carlo budget must be at least 2"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(bb.seed);
            rng.set_stream(stream_id(b));
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..bb.budget {
                let v = (bb.f)(&post.sample_dirichlet(&mut rng));
                sum += v;
                sq += v * v;
            }
            let n = bb.budget as f64;
            let mean = sum / n;
            let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
            Ok(Estimate::MonteCarlo { mean, std_error: (var / n).sqrt(), draws: bb.budget })
        }
    }
}

/// Stable stream index for a conditioning multiset.
fn stream_id(b: &MultiExponent) -> u64 {
    b.counts().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &c| (h ^ c as u64).wrapping_mul(0x0100_0000_01b3))
}

/// `F = E F + Σ_n ∫h_n dD^⊗n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosDecomposition<T = Rational> {
    pub mean: T,
    pub alpha: DiscreteBaseMeasure,
    /// `kernels[n-1]` has order `n`; trailing zero kernels are dropped.
    pub kernels: Vec<SymmetricKernel<T>>,
}

/// The kernel formula: `h_n(a) = Σ_k θ^{(n,k)} Σ_{k-subsets j} (E[F | X_k = a_j] - E F)`.
///
/// `centred(b)` must return `E[F | X_{|b|} has counts b] - E F`.
pub fn extract_kernels<T: Scalar>(
    alpha: &DiscreteBaseMeasure,
    max_order: usize,
    theta: &ThetaCoefficients,
    mut centred: impl FnMut(&MultiExponent) -> Result<T>,
) -> Result<Vec<SymmetricKernel<T>>> {
    if theta.max_order() < max_order {
        return Err(Error::Unvalidated(format!(
            "coefficients validated up to order {}, {max_order} requested",
            theta.max_order()
        )));
    }
    if theta.total_mass() != alpha.total_mass() {
        return Err(Error::Unvalidated(format!(
            "coefficients were validated for total mass {}, measure has {}",
            fmt_rational(theta.total_mass()),
            fmt_rational(alpha.total_mass())
        )));
    }
    let mut memo: HashMap<MultiExponent, T> = HashMap::new();
    let mut kernels = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        let coeffs: Vec<T> = theta.row(n).iter().map(T::from_rational).collect();
        let h = SymmetricKernel::try_from_fn(n, alpha.atoms(), |a| {
            let mut acc = T::zero();
            for b in sub_multisets(a) {
                let k = b.order();
                if k == 0 {
                    continue;
                }
                let c = match memo.get(&b) {
                    Some(v) => v.clone(),
                    None => {
                        let v = centred(&b)?;
                        memo.insert(b.clone(), v.clone());
                        v
                    }
                };
                acc = acc + coeffs[k - 1].clone() * T::from_rational(&a.choose(&b)) * c;
            }
            Ok(acc)
        })?;
        kernels.push(h);
    }
    Ok(kernels)
}

fn trim<T: Scalar>(mut kernels: Vec<SymmetricKernel<T>>) -> Vec<SymmetricKernel<T>> {
    while kernels.last().is_some_and(|k| k.is_zero()) {
        kernels.pop();
    }
    kernels
}

/// Exact chaos decomposition of a polynomial functional up to order `max_order`.
pub fn polynomial_chaos(
    p: &SimplexPolynomial<Rational>,
    alpha: &DiscreteBaseMeasure,
    max_order: usize,
    theta: &ThetaCoefficients,
) -> Result<ChaosDecomposition<Rational>> {
    let mean = p.expectation(alpha)?;
    let kernels = extract_kernels(alpha, max_order, theta, |b| Ok(p.expectation(&alpha.with_counts(b))? - &mean))?;
    Ok(ChaosDecomposition { mean, alpha: alpha.clone(), kernels: trim(kernels) })
}

/// [`polynomial_chaos`] at order `deg F` with freshly validated coefficients.
pub fn decompose_polynomial(
    p: &SimplexPolynomial<Rational>,
    alpha: &DiscreteBaseMeasure,
) -> Result<ChaosDecomposition<Rational>> {
    let order = p.degree();
    let theta = theta_oracle(alpha.total_mass(), order)?;
    polynomial_chaos(p, alpha, order, &theta)
}

/// Chaos kernels of any functional; black boxes use Monte Carlo conditional
/// expectations, so their kernels carry sampling error.
pub fn chaos_kernels(
    f: &FunctionalSpec,
    alpha: &DiscreteBaseMeasure,
    max_order: usize,
    theta: &ThetaCoefficients,
) -> Result<ChaosDecomposition<f64>> {
    match f {
        FunctionalSpec::Polynomial(p) => Ok(polynomial_chaos(p, alpha, max_order, theta)?.to_f64()),
        FunctionalSpec::BlackBox(_) => {
            let mean = cond_exp_counts(f, alpha, &MultiExponent::zeros(alpha.atoms()))?.value();
            let kernels =
                extract_kernels(alpha, max_order, theta, |b| Ok(cond_exp_counts(f, alpha, b)?.value() - mean))?;
            Ok(ChaosDecomposition { mean, alpha: alpha.clone(), kernels: trim(kernels) })
        }
    }
}

impl<T: Scalar> ChaosDecomposition<T> {
    /// Kernel of order `n`, if within the stored range.
    pub fn kernel(&self, n: usize) -> Option<&SymmetricKernel<T>> {
        self.kernels.get(n.checked_sub(1)?)
    }

    /// `E F + Σ_n ∫h_n dD^⊗n` at `d`.
    pub fn reconstruct(&self, d: &SimplexPoint) -> Result<f64> {
        self.kernels.iter().try_fold(self.mean.as_f64(), |acc, h| Ok(acc + multiple_integral(h, d)?))
    }

    /// Parseval: `Σ_n c(n, |α|)·E[h_n(X_n)²]`.
    pub fn variance(&self) -> Result<T> {
        variance_from_decomp(self)
    }

    /// Per-order Parseval terms `c(n)·E[h_n²]`.
    pub fn variance_terms(&self) -> Result<Vec<T>> {
        self.kernels
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let sq = h.map(|v| v.clone() * v.clone());
                Ok(T::from_rational(&c_iso(i + 1, self.alpha.total_mass())) * polya::expectation(&sq, &self.alpha)?)
            })
            .collect()
    }

    pub fn to_f64(&self) -> ChaosDecomposition<f64> {
        ChaosDecomposition {
            mean: self.mean.as_f64(),
            alpha: self.alpha.clone(),
            kernels: self.kernels.iter().map(|k| k.to_f64()).collect(),
        }
    }
}

impl ChaosDecomposition<Rational> {
    /// `E F + Σ_n ∫h_n dD^⊗n` as a polynomial in the `K` masses.
    pub fn to_polynomial(&self) -> SimplexPolynomial<Rational> {
        let k = self.alpha.atoms();
        self.kernels
            .iter()
            .fold(SimplexPolynomial::constant(k, self.mean.clone()), |acc, h| acc.add(&integral_polynomial(h)))
    }

    pub fn reconstruct_exact(&self, d: &[Rational]) -> Result<Rational> {
        self.to_polynomial().eval_exact(d)
    }
}

impl<T: Scalar + JsonValue> ChaosDecomposition<T> {
    /// `{"mean": v, "alpha": {"weights": [...]}, "kernels": [...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "mean": self.mean.to_json(),
            "alpha": serde_json::to_value(MeasureJson::from(&self.alpha)).expect("measure serialises"),
            "kernels": self.kernels.iter().map(|k| k.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mean = T::from_json(v.get("mean").ok_or_else(|| Error::input("decomposition JSON missing 'mean'"))?)?;
        let alpha: MeasureJson = serde_json::from_value(
            v.get("alpha").cloned().ok_or_else(|| Error::input("decomposition JSON missing 'alpha'"))?,
        )
        .map_err(|e| Error::Input(e.to_string()))?;
        let kernels = v
            .get("kernels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("decomposition JSON missing 'kernels'"))?
            .iter()
            .map(SymmetricKernel::from_json)
            .collect::<Result<Vec<_>>>()?;
        for (i, k) in kernels.iter().enumerate() {
            if k.order() != i + 1 {
                return Err(Error::input("kernels must be listed by increasing order starting at 1"));
            }
        }
        Ok(ChaosDecomposition { mean, alpha: alpha.try_into()?, kernels })
    }
}

/// Parseval: `Σ_n c(n, |α|)·E[h_n(X_n)²]`.
pub fn variance_from_decomp<T: Scalar>(decomp: &ChaosDecomposition<T>) -> Result<T> {
    Ok(decomp.variance_terms()?.into_iter().fold(T::zero(), |a, b| a + b))
}

/// Exact covariance of two multiple integrals next to the isometry prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    /// `E[∫h dD^n · ∫f dD^m]`, from Dirichlet moments of the product polynomial.
    pub exact: Rational,
    /// `1{n=m}·c(n, |α|)·E[h(X_n) f(X_n)]`.
    pub predicted: Rational,
}

pub fn covariance_integrals(
    h: &SymmetricKernel<Rational>,
    f: &SymmetricKernel<Rational>,
    alpha: &DiscreteBaseMeasure,
) -> Result<Covariance> {
    if h.atoms() != alpha.atoms() || f.atoms() != alpha.atoms() {
        return Err(Error::input("kernels and measure must share the atom set"));
    }
    let exact = integral_polynomial(h).mul(&integral_polynomial(f)).expectation(alpha)?;
    let predicted = if h.order() == f.order() {
        let prod = SymmetricKernel::from_fn(h.order(), h.atoms(), |m| h.get(m) * f.get(m));
        c_iso(h.order(), alpha.total_mass()) * polya::expectation(&prod, alpha)?
    } else {
        Rational::zero()
    };
    Ok(Covariance { exact, predicted })
}

/// A (not necessarily symmetric) function on `{1..K}^n`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleStatistic<T = Rational> {
    order: usize,
    atoms: usize,
    values: Vec<T>,
}

impl<T: Scalar> TupleStatistic<T> {
    pub fn from_fn(order: usize, atoms: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let values = polya::all_sequences(order, atoms).map(|x| f(&x)).collect();
        TupleStatistic { order, atoms, values }
    }

    pub fn from_symmetric(s: &SymmetricStatistic<T>) -> Self {
        Self::from_fn(s.order(), s.atoms(), |x| s.eval(x).expect("labels in range").clone())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    fn index(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &l| acc * self.atoms + (l - 1))
    }

    pub fn get(&self, x: &[usize]) -> &T {
        &self.values[self.index(x)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Values listed over `{1..K}^n` in lexicographic order, last coordinate fastest.
    pub fn from_values(order: usize, atoms: usize, values: Vec<T>) -> Result<Self> {
        let expected = (atoms as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
        if values.len() as u128 != expected {
            return Err(Error::input(format!("{} values given, {atoms}^{order} = {expected} needed", values.len())));
        }
        Ok(TupleStatistic { order, atoms, values })
    }
}

impl<T: Scalar + JsonValue> TupleStatistic<T> {
    /// `{"order": n, "K": K, "values": [...]}` in [`Self::from_values`] order.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::input(format!("table JSON missing '{name}'")));
        let order = field("order")?.as_u64().ok_or_else(|| Error::input("'order' must be an integer"))? as usize;
        let atoms = field("K")?.as_u64().ok_or_else(|| Error::input("'K' must be an integer"))? as usize;
        let values = field("values")?
            .as_array()
            .ok_or_else(|| Error::input("'values' must be an array"))?
            .iter()
            .map(T::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(order, atoms, values)
    }

    pub fn to_json(&self) -> Value {
        json!({"order": self.order, "K": self.atoms, "values": self.values.iter().map(|v| v.to_json()).collect::<Vec<_>>()})
    }
}

impl TupleStatistic<Rational> {
    /// `∫g dD^⊗n = Σ_x g(x) Π_i D({x_i})`.
    pub fn integral_polynomial(&self) -> SimplexPolynomial<Rational> {
        let mut p = SimplexPolynomial::zero(self.atoms);
        for (x, v) in polya::all_sequences(self.order, self.atoms).zip(&self.values) {
            let m = MultiExponent::from_labels(self.atoms, &x).expect("labels in range");
            p.add_term(m.counts().to_vec(), v.clone());
        }
        p
    }
}

/// `H = E H + Σ_n g_n(X_n)` with `g_n = E[H | X_n] - E[H | X_{n-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleDecomposition {
    pub mean: Rational,
    pub increments: Vec<TupleStatistic<Rational>>,
}

pub fn martingale_decomposition(h: &TupleStatistic<Rational>, alpha: &DiscreteBaseMeasure) -> Result<MartingaleDecomposition> {
    let k = alpha.atoms();
    if h.atoms() != k {
        return Err(Error::input(format!("statistic on {} atoms, measure on {k}", h.atoms())));
    }
    // cond[n] = E[H | X_n = x] for every prefix x of length n
    let mut cond = vec![h.clone()];
    for n in (0..h.order()).rev() {
        let next = cond.last().unwrap();
        let mut prefix = vec![0usize; n + 1];
        let mut out = Vec::with_capacity(k.pow(n as u32));
        for x in polya::all_sequences(n, k) {
            let pred = predictive(alpha, &x)?;
            prefix[..n].copy_from_slice(&x);
            let mut acc = Rational::zero();
            for (j, p) in pred.iter().enumerate() {
                prefix[n] = j + 1;
                acc += p * next.get(&prefix);
            }
            out.push(acc);
        }
        cond.push(TupleStatistic { order: n, atoms: k, values: out });
    }
    cond.reverse();
    let mean = cond[0].values[0].clone();
    let increments = (1..=h.order())
        .map(|n| TupleStatistic::from_fn(n, k, |x| cond[n].get(x) - cond[n - 1].get(&x[..n - 1])))
        .collect();
    Ok(MartingaleDecomposition { mean, increments })
}

impl MartingaleDecomposition {
    /// `E H + Σ_n ∫g_n dD^⊗n`, which equals `E[H | D]`.
    pub fn to_polynomial(&self, atoms: usize) -> SimplexPolynomial<Rational> {
        self.increments
            .iter()
            .fold(SimplexPolynomial::constant(atoms, self.mean.clone()), |acc, g| acc.add(&g.integral_polynomial()))
    }
}

/// `E[H | D] = ∫H dD^⊗N` as a polynomial.
pub fn conditional_on_directing(h: &TupleStatistic<Rational>) -> SimplexPolynomial<Rational> {
    h.integral_polynomial()
}

/// Comparison of the second-row limit constants from three sources, with
/// reconstruction of `F = D({1})²` as the arbiter.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaErratum {
    pub total_mass: Rational,
    pub entries: Vec<ErratumEntry>,
    /// Largest coefficient of `F - reconstruction` on the simplex, using the
    /// oracle coefficients.
    pub residual_oracle: Rational,
    /// The same with the printed closed forms substituted for rows 1 and 2.
    pub residual_printed: Rational,
    /// The same with the extrapolated limits, rounded to rationals.
    pub residual_limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErratumEntry {
    pub k: usize,
    pub a: usize,
    pub limit: f64,
    pub limit_change: f64,
    pub oracle: Rational,
    pub printed: Rational,
}

impl ErratumEntry {
    pub fn limit_agrees(&self, tol: f64) -> bool {
        (self.limit - to_f64(&self.oracle)).abs() <= tol * to_f64(&self.oracle).abs().max(1.0)
    }

    pub fn printed_agrees(&self) -> bool {
        self.printed == self.oracle
    }
}

pub fn theta_erratum(total_mass: &Rational, tol: f64) -> Result<ThetaErratum> {
    let oracle = theta_oracle(total_mass, 2)?;
    let mut entries = Vec::new();
    let mut printed_theta_set = oracle.clone();
    for (k, a) in [(1, 1), (2, 1), (2, 2)] {
        let est = theta_limit_estimate(k, a, total_mass, tol, DEFAULT_N_MAX)?;
        let printed = printed_theta(k, a, total_mass).expect("rows 1 and 2 are printed");
        printed_theta_set = printed_theta_set.with_override(k, a, printed.clone());
        entries.push(ErratumEntry {
            k,
            a,
            limit: est.value,
            limit_change: est.last_change,
            oracle: oracle.get(k, a).clone(),
            printed,
        });
    }
    let half = total_mass / int(2);
    let alpha = DiscreteBaseMeasure::new(vec![half.clone(), half])?;
    let f = SimplexPolynomial::var(2, 1).pow(2);
    let residual = |theta: &ThetaCoefficients| -> Result<Rational> {
        let d = polynomial_chaos(&f, &alpha, 2, theta)?;
        let diff = d.to_polynomial().sub(&f).to_free();
        Ok(diff.terms().map(|(_, c)| c.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a }))
    };
    let residual_oracle = residual(&oracle)?;
    let residual_printed = residual(&printed_theta_set)?;
    let mut limit_set = oracle.clone();
    for e in &entries {
        let r = crate::math::rational_from_f64(e.limit)?;
        limit_set = limit_set.with_override(e.k, e.a, r);
    }
    let residual_limit = to_f64(&residual(&limit_set)?);
    Ok(ThetaErratum { total_mass: total_mass.clone(), entries, residual_oracle, residual_printed, residual_limit })
}

impl ThetaErratum {
    pub fn to_json(&self) -> Value {
        json!({
            "total_mass": fmt_rational(&self.total_mass),
            "entries": self.entries.iter().map(|e| json!({
                "k": e.k,
                "a": e.a,
                "recursion_limit": e.limit,
                "limit_last_change": e.limit_change,
                "oracle": fmt_rational(&e.oracle),
                "printed": fmt_rational(&e.printed),
                "printed_matches_oracle": e.printed_agrees(),
            })).collect::<Vec<_>>(),
            "reconstruction_residual": {
                "oracle": fmt_rational(&self.residual_oracle),
                "printed": fmt_rational(&self.residual_printed),
                "recursion_limit": self.residual_limit,
            },
        })
    }
}

/// `F = D(C)` as a polynomial in the `K` masses.
pub fn mass_functional(atoms: usize, set: &[usize]) -> SimplexPolynomial<Rational> {
    let mut p = SimplexPolynomial::zero(atoms);
    let mut seen = vec![false; atoms];
    for &j in set {
        if !std::mem::replace(&mut seen[j - 1], true) {
            p = p.add(&SimplexPolynomial::var(atoms, j));
        }
    }
    p
}
