//! Modified Jacobi polynomials: the two-atom case, where `η = D({1})` is
//! Beta distributed and each chaos is spanned by one orthonormal polynomial.
//!
//! Atom 1 carries the label "1" (mass `η`), atom 2 the label "0".

use num_traits::{One, Signed, Zero};

use crate::coeffs::c_iso;
use crate::error::{Error, Result};
use crate::kernel::SymmetricKernel;
use crate::math::{binom, factorial, int, log_gamma, rational_from_f64, rising_factorial, to_f64, Rational};
use crate::measures::{DiscreteBaseMeasure, MultiExponent};

/// Parameters `(α1, α0)` of the Beta weight `p(x) ∝ x^{α1-1}(1-x)^{α0-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaParams {
    a1: Rational,
    a0: Rational,
}

impl BetaParams {
    /// Floats are converted exactly (binary fractions are rational).
    pub fn new(a1: f64, a0: f64) -> Result<Self> {
        Self::exact(rational_from_f64(a1)?, rational_from_f64(a0)?)
    }

    pub fn exact(a1: Rational, a0: Rational) -> Result<Self> {
        if !a1.is_positive() || !a0.is_positive() {
            return Err(Error::input(format!("Beta parameters must be positive, got ({a1}, {a0})")));
        }
        Ok(BetaParams { a1, a0 })
    }

    pub fn a1(&self) -> f64 {
        to_f64(&self.a1)
    }

    pub fn a0(&self) -> f64 {
        to_f64(&self.a0)
    }

    pub fn a1_exact(&self) -> &Rational {
        &self.a1
    }

    pub fn a0_exact(&self) -> &Rational {
        &self.a0
    }

    /// The base measure `α1 δ_1 + α0 δ_0` on atoms (1, 2).
    pub fn measure(&self) -> DiscreteBaseMeasure {
        DiscreteBaseMeasure::new(vec![self.a1.clone(), self.a0.clone()]).expect("weights are positive")
    }

    /// `E[η^j] = (α1)_j / (α1+α0)_j`.
    pub fn moment(&self, j: usize) -> Rational {
        rising_factorial(&self.a1, j as u64) / rising_factorial(&(&self.a1 + &self.a0), j as u64)
    }
}

/// Coefficients `c_0, …, c_n` of a polynomial in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    /// Rejects a zero leading coefficient (an overstated degree), except for
    /// the zero constant.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("a polynomial needs at least one coefficient"));
        }
        if coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            return Err(Error::input("leading coefficient is zero; degree overstated"));
        }
        Ok(PolynomialCoeffs { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialCoeffs { coeffs: out }
    }
}

/// `g_{n,a}(α1+α0-1, α1)`, `a = 0..n`: the monic Jacobi polynomial `G_n`.
///
/// The Gamma ratios have integer-spaced arguments, so
/// `g_{n,a} = C(n,a)(-1)^{n-a}(a+q)_{n-a} / (p+a+n)_{n-a}` with `p = α1+α0-1`, `q = α1`.
pub fn jacobi_g(n: usize, params: &BetaParams) -> Vec<Rational> {
    let p = &params.a1 + &params.a0 - int(1);
    let q = &params.a1;
    (0..=n)
        .map(|a| {
            let sign = if (n - a).is_multiple_of(2) { int(1) } else { int(-1) };
            sign * binom(n as u64, a as u64) * rising_factorial(&(q + int(a as i64)), (n - a) as u64)
                / rising_factorial(&(&p + int((a + n) as i64)), (n - a) as u64)
        })
        .collect()
}

/// `k_n(α1, α0)`, exactly. For `n = 0` this is 1.
///
/// With `p = α1+α0-1`, `Γ(2n+p)²/Γ(n+p)·B(α1,α0)/(Γ(n+α1)Γ(n+α0))` reduces to
/// `(n+p)_n (p+1)_{2n-1} / ((α1)_n (α0)_n)`.
pub fn jacobi_k(n: usize, params: &BetaParams) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let p = &params.a1 + &params.a0 - int(1);
    (&p + int(2 * n as i64)) / Rational::from_integer(factorial(n as u64))
        * rising_factorial(&(&p + int(n as i64)), n as u64)
        * rising_factorial(&(&p + int(1)), (2 * n - 1) as u64)
        / rising_factorial(&params.a1, n as u64)
        / rising_factorial(&params.a0, n as u64)
}

/// `J_n = √k_n · G_n`, leading coefficient positive.
pub fn jacobi_modified(n: usize, params: &BetaParams) -> Result<PolynomialCoeffs> {
    let sk = to_f64(&jacobi_k(n, params)).sqrt();
    if !sk.is_finite() {
        return Err(Error::Numeric { message: format!("k_{n} overflows"), partial: None });
    }
    PolynomialCoeffs::new(jacobi_g(n, params).iter().map(|g| sk * to_f64(g)).collect())
}

/// The same coefficients evaluated term by term from Gamma functions in log
/// space, as the closed form is written.
pub fn jacobi_modified_log_gamma(n: usize, params: &BetaParams) -> Result<PolynomialCoeffs> {
    if n == 0 {
        return PolynomialCoeffs::new(vec![1.0]);
    }
    let (a1, a0) = (params.a1(), params.a0());
    let (p, q) = (a1 + a0 - 1.0, a1);
    let nf = n as f64;
    let ln_k = (2.0 * nf + p).ln() + 2.0 * log_gamma(2.0 * nf + p)?
        - log_gamma(nf + 1.0)?
        - log_gamma(nf + a1)?
        - log_gamma(nf + a0)?
        - log_gamma(nf + p)?
        + log_gamma(a1)?
        + log_gamma(a0)?
        - log_gamma(a1 + a0)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for a in 0..=n {
        let af = a as f64;
        let ln_binom = log_gamma(nf + 1.0)? - log_gamma(af + 1.0)? - log_gamma(nf - af + 1.0)?;
        let ln_g = ln_binom + log_gamma(q + nf)? + log_gamma(p + af + nf)? - log_gamma(p + 2.0 * nf)? - log_gamma(af + q)?;
        let sign = if (n - a).is_multiple_of(2) { 1.0 } else { -1.0 };
        let c = sign * (0.5 * ln_k + ln_g).exp();
        if !c.is_finite() {
            return Err(Error::Numeric { message: format!("coefficient {a} of J_{n} overflows"), partial: None });
        }
        coeffs.push(c);
    }
    PolynomialCoeffs::new(coeffs)
}

/// `∫ poly · p_{α1,α0}` from exact monomial moments.
pub fn beta_weight_integral(poly: &PolynomialCoeffs, params: &BetaParams) -> Result<f64> {
    let (a1, s) = (params.a1(), params.a1() + params.a0());
    let mut moment = 1.0;
    let mut acc = 0.0;
    for (a, c) in poly.coeffs().iter().enumerate() {
        if a > 0 {
            moment *= (a1 + (a - 1) as f64) / (s + (a - 1) as f64);
        }
        acc += c * moment;
    }
    Ok(acc)
}

/// `∫ Σ_a c_a x^a · p_{α1,α0}`, exactly.
pub fn beta_integral_exact(coeffs: &[Rational], params: &BetaParams) -> Rational {
    coeffs.iter().enumerate().fold(Rational::zero(), |acc, (a, c)| acc + c * params.moment(a))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `|∫J_n J_m p - δ_{nm}|`, with the integral of `G_n G_m` done exactly and
/// only `√(k_n k_m)` in floating point.
pub fn orthonormality_residual(n: usize, m: usize, params: &BetaParams) -> f64 {
    let inner = beta_integral_exact(&poly_mul(&jacobi_g(n, params), &jacobi_g(m, params)), params);
    if n == m {
        // k_n·∫G_n² p is a rational that should equal 1
        to_f64(&(jacobi_k(n, params) * inner - int(1)).abs())
    } else {
        (to_f64(&(jacobi_k(n, params) * jacobi_k(m, params))).sqrt() * to_f64(&inner)).abs()
    }
}

/// Kernel `ψ` with `∫ψ dD^⊗n = G_n(η)`, from the triangular system
/// `Σ_{m≤a} C(n,m) C(n-m,n-a) (-1)^{a-m} ψ(1^m 0^{n-m}) = g_{n,a}`.
pub fn solve_phi_system_exact(n: usize, params: &BetaParams) -> SymmetricKernel<Rational> {
    let g = jacobi_g(n, params);
    let mut phi: Vec<Rational> = Vec::with_capacity(n + 1);
    for a in 0..=n {
        let mut s = g[a].clone();
        for (m, v) in phi.iter().enumerate() {
            let sign = if (a - m) % 2 == 0 { int(1) } else { int(-1) };
            s -= sign * binom(n as u64, m as u64) * binom((n - m) as u64, (n - a) as u64) * v;
        }
        phi.push(s / binom(n as u64, a as u64));
    }
    SymmetricKernel::from_fn(n, 2, |c| phi[c.counts()[0] as usize].clone())
}

/// Kernel `φ_n` with `∫φ_n dD^⊗n = J_n(η)`; the value at counts `[m, n-m]`
/// is `φ(1^m 0^{n-m})`.
pub fn solve_phi_system(n: usize, params: &BetaParams) -> Result<SymmetricKernel<f64>> {
    let sk = to_f64(&jacobi_k(n, params)).sqrt();
    if !sk.is_finite() {
        return Err(Error::Numeric { message: format!("k_{n} overflows"), partial: None });
    }
    Ok(solve_phi_system_exact(n, params).map(|v| sk * to_f64(v)))
}

/// `(∫J_n² p, c(n, α1+α0)·Σ_m C(n,m) φ_m² ∫x^m(1-x)^{n-m} p)`.
///
/// Both sides are rational (`φ_m² = k_n ψ_m²`), so they are evaluated exactly
/// and rounded at the end.
pub fn jacobi_norm_identity(n: usize, params: &BetaParams) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::input("the norm identity is stated for n >= 1"));
    }
    let k = jacobi_k(n, params);
    let g = jacobi_g(n, params);
    let lhs = &k * beta_integral_exact(&poly_mul(&g, &g), params);
    let psi = solve_phi_system_exact(n, params);
    let alpha = params.measure();
    let mut sum = Rational::zero();
    for m in 0..=n {
        let c = MultiExponent::new(vec![m as u32, (n - m) as u32]);
        let v = psi.get(&c);
        sum += binom(n as u64, m as u64) * &k * v * v * alpha.dirichlet_moment(&c);
    }
    let rhs = c_iso(n, alpha.total_mass()) * sum;
    Ok((to_f64(&lhs), to_f64(&rhs)))
}

/// Squared coefficients `c_n² = (∫F J_n p)²`, `n = 1..=max_n`, of `F(η) = Σ f_a η^a`.
pub fn jacobi_expansion_squares(f: &[Rational], params: &BetaParams, max_n: usize) -> Vec<Rational> {
    (1..=max_n)
        .map(|n| {
            let i = beta_integral_exact(&poly_mul(f, &jacobi_g(n, params)), params);
            jacobi_k(n, params) * &i * &i
        })
        .collect()
}
