//! Wright–Fisher diffusion with parent-independent mutation
//! `q_ij = θ_j / 2`: Dirichlet stationary density, orthonormal polynomials
//! `P_n`, kernel polynomials `Q_n` and the transition density expansion.
//!
//! Points are given by their `K-1` free coordinates `γ = (γ_1, …, γ_{K-1})`.

use num_traits::{Signed, Zero};

use crate::chaos::{multiple_integral, polynomial_chaos};
use crate::coeffs::{c_iso, theta_oracle};
use crate::error::{Error, Result};
use crate::kernel::{SymmetricKernel, SymmetricStatistic};
use crate::math::{log_gamma, rational_from_f64, to_f64, Rational};
use crate::measures::{compositions, DiscreteBaseMeasure, SimplexPoint};
use crate::poly::SimplexPolynomial;
use crate::polya::expectation;

/// Element `(n_1, …, n_{K-1})` of the exponent lattice.
pub type MultiIndex = Vec<u32>;

fn check_interior(gamma: &[f64], k: usize) -> Result<()> {
    if gamma.len() + 1 != k {
        return Err(Error::input(format!("expected {} free coordinates, got {}", k - 1, gamma.len())));
    }
    let s: f64 = gamma.iter().sum();
    if gamma.iter().any(|&g| !(g > 0.0)) || !(s < 1.0) {
        return Err(Error::domain(format!("{gamma:?} is not interior to the simplex")));
    }
    Ok(())
}

/// Dirichlet(θ) density in the free coordinates. The last factor carries the
/// exponent `θ_K - 1`.
pub fn dirichlet_density(theta: &DiscreteBaseMeasure, gamma: &[f64]) -> Result<f64> {
    check_interior(gamma, theta.atoms())?;
    let w: Vec<f64> = theta.weights().iter().map(to_f64).collect();
    let mut ln = log_gamma(to_f64(theta.total_mass()))?;
    for &x in &w {
        ln -= log_gamma(x)?;
    }
    let last = 1.0 - gamma.iter().sum::<f64>();
    for (g, x) in gamma.iter().chain(std::iter::once(&last)).zip(&w) {
        ln += (x - 1.0) * g.ln();
    }
    Ok(ln.exp())
}

/// `ρ_n(t) = exp{-n(n-1)t/2 - total·n·t/2}`.
pub fn rho(n: usize, t: f64, total: f64) -> f64 {
    let n = n as f64;
    (-0.5 * n * (n - 1.0) * t - 0.5 * total * n * t).exp()
}

/// One orthonormal polynomial `P_n = P̃_n / √‖P̃_n‖²`, with the exact
/// orthogonal polynomial `P̃_n` kept alongside.
#[derive(Debug, Clone)]
pub struct OrthoPoly {
    pub index: MultiIndex,
    pub unnormalised: SimplexPolynomial<Rational>,
    pub norm_sq: Rational,
    pub poly: SimplexPolynomial<f64>,
}

impl OrthoPoly {
    pub fn degree(&self) -> usize {
        self.index.iter().sum::<u32>() as usize
    }

    pub fn eval(&self, gamma: &[f64]) -> Result<f64> {
        self.poly.eval(gamma)
    }
}

/// Exact Gram–Schmidt on the monomials `γ^n`, `|n| ≤ max_degree`, in graded
/// lexicographic order, with inner products `E[p(D) q(D)]` under `DF(θ)`.
pub fn gram_schmidt_p(theta: &DiscreteBaseMeasure, max_degree: usize) -> Result<Vec<OrthoPoly>> {
    let k = theta.atoms();
    if k < 2 {
        return Err(Error::input("the simplex needs at least two atoms"));
    }
    let free = k - 1;
    let inner = |p: &SimplexPolynomial<Rational>, q: &SimplexPolynomial<Rational>| p.mul(q).expectation(theta);
    let mut out: Vec<OrthoPoly> = Vec::new();
    for d in 0..=max_degree {
        for m in compositions(d, free) {
            let mono = SimplexPolynomial::monomial(m.counts().to_vec(), Rational::from_integer(1.into()));
            let mut p = mono.clone();
            for prev in &out {
                let c = inner(&mono, &prev.unnormalised)? / &prev.norm_sq;
                p = p.sub(&prev.unnormalised.scale(&c));
            }
            let norm_sq = inner(&p, &p)?;
            if !norm_sq.is_positive() {
                return Err(Error::Numeric { message: format!("Gram matrix singular at {:?}", m.counts()), partial: None });
            }
            let s = to_f64(&norm_sq).sqrt();
            let poly = p.to_f64().scale(&(1.0 / s));
            out.push(OrthoPoly { index: m.counts().to_vec(), unnormalised: p, norm_sq, poly });
        }
    }
    Ok(out)
}

/// `θ`, the truncation order `M` and the basis `P_n` for `|n| ≤ M + 1`
/// (one extra degree for the tail bound). Immutable once built.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    theta: DiscreteBaseMeasure,
    max_order: usize,
    basis: Vec<OrthoPoly>,
}

/// Density value with its per-order contributions and truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDensity {
    pub value: f64,
    pub stationary: f64,
    /// `f_θ(γ)·ρ_n(t)·Q_n(γ, γ')`, `n = 1..=M`.
    pub contributions: Vec<f64>,
    pub tail_bound: f64,
    pub negative: bool,
}

impl TransitionModel {
    pub fn new(theta: DiscreteBaseMeasure, max_order: usize) -> Result<Self> {
        let basis = gram_schmidt_p(&theta, max_order + 1)?;
        Ok(TransitionModel { theta, max_order, basis })
    }

    pub fn theta(&self) -> &DiscreteBaseMeasure {
        &self.theta
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn basis(&self) -> &[OrthoPoly] {
        &self.basis
    }

    /// Basis elements of total degree `n`.
    pub fn basis_of_degree(&self, n: usize) -> impl Iterator<Item = &OrthoPoly> {
        self.basis.iter().filter(move |p| p.degree() == n)
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n > self.max_order {
            return Err(Error::input(format!("order {n} exceeds the truncation order {}", self.max_order)));
        }
        Ok(())
    }

    fn q_any(&self, n: usize, g: &[f64], h: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for p in self.basis_of_degree(n) {
            s += p.eval(g)? * p.eval(h)?;
        }
        Ok(s)
    }

    /// `Q_n` evaluated exactly at rational points.
    pub fn kernel_q_exact(&self, n: usize, g: &[Rational], h: &[Rational]) -> Result<Rational> {
        self.check_order(n)?;
        let mut s = Rational::zero();
        for p in self.basis_of_degree(n) {
            s += p.unnormalised.eval_exact(g)? * p.unnormalised.eval_exact(h)? / &p.norm_sq;
        }
        Ok(s)
    }

    /// `E[Q_n(D; γ) R(D)]`, exactly; `R` in the free coordinates.
    pub fn q_pairing_exact(&self, n: usize, g: &[Rational], r: &SimplexPolynomial<Rational>) -> Result<Rational> {
        self.check_order(n)?;
        let mut s = Rational::zero();
        for p in self.basis_of_degree(n) {
            s += p.unnormalised.eval_exact(g)? * p.unnormalised.mul(r).expectation(&self.theta)? / &p.norm_sq;
        }
        Ok(s)
    }

    /// Orthonormal chaos kernels `h_{n,θ}` with `∫h_{n,θ} dD^⊗n = P_n(D)`,
    /// one per basis element of degree `n`, exactly up to `1/√‖P̃_n‖²`.
    pub fn chaos_basis(&self, n: usize) -> Result<Vec<(OrthoPoly, SymmetricKernel<Rational>)>> {
        self.check_order(n)?;
        if n == 0 {
            return Err(Error::input("chaos kernels start at order 1"));
        }
        let theta = theta_oracle(self.theta.total_mass(), n)?;
        self.basis_of_degree(n)
            .map(|p| {
                let d = polynomial_chaos(&p.unnormalised, &self.theta, n, &theta)?;
                if d.kernels.len() != n || d.kernels[..n - 1].iter().any(|h| !h.is_zero()) || !d.mean.is_zero() {
                    return Err(Error::Numeric {
                        message: format!("P_{:?} is not a pure order-{n} chaos", p.index),
                        partial: None,
                    });
                }
                Ok((p.clone(), d.kernels[n - 1].clone()))
            })
            .collect()
    }
}

/// `Q_n(γ, γ') = Σ_{|n|=n} P_n(γ) P_n(γ')`.
pub fn kernel_q(model: &TransitionModel, n: usize, gamma: &[f64], gamma_prime: &[f64]) -> Result<f64> {
    model.check_order(n)?;
    model.q_any(n, gamma, gamma_prime)
}

/// Truncated transition density at time `t` from `γ'` to `γ`.
pub fn transition_density(model: &TransitionModel, t: f64, gamma: &[f64], gamma_prime: &[f64]) -> Result<TransitionDensity> {
    if !(t > 0.0) {
        return Err(Error::input(format!("time must be positive, got {t}")));
    }
    let k = model.theta.atoms();
    check_interior(gamma, k)?;
    check_interior(gamma_prime, k)?;
    let f = dirichlet_density(&model.theta, gamma)?;
    let total = to_f64(model.theta.total_mass());
    let contributions = (1..=model.max_order)
        .map(|n| Ok(f * rho(n, t, total) * model.q_any(n, gamma, gamma_prime)?))
        .collect::<Result<Vec<_>>>()?;
    let value = f + contributions.iter().sum::<f64>();
    let m1 = model.max_order + 1;
    let tail_bound = f
        * rho(m1, t, total)
        * (model.q_any(m1, gamma, gamma)? * model.q_any(m1, gamma_prime, gamma_prime)?).sqrt();
    Ok(TransitionDensity { value, stationary: f, contributions, tail_bound, negative: value < 0.0 })
}

/// `∫ density(γ) dγ` over the simplex, from exact moments: each `Q_n` term
/// integrates to `Σ P_n(γ') E[P_n(D)]`.
pub fn density_mass(model: &TransitionModel, t: f64, gamma_prime: &[f64]) -> Result<f64> {
    check_interior(gamma_prime, model.theta.atoms())?;
    let total = to_f64(model.theta.total_mass());
    let mut mass = 1.0;
    for n in 1..=model.max_order {
        for p in model.basis_of_degree(n) {
            let e = to_f64(&p.unnormalised.expectation(&model.theta)?) / to_f64(&p.norm_sq).sqrt();
            mass += rho(n, t, total) * p.eval(gamma_prime)? * e;
        }
    }
    Ok(mass)
}

fn full_point(gamma: &[f64]) -> Result<SimplexPoint> {
    SimplexPoint::from_free(gamma)
}

/// `Q_n` through the chaos kernels: `Σ_{|n|=n} ∫h_{n,θ} dμ_γ^⊗n · ∫h_{n,θ} dμ_{γ'}^⊗n`.
pub fn q_via_multiple_integrals(model: &TransitionModel, n: usize, gamma: &[f64], gamma_prime: &[f64]) -> Result<f64> {
    model.check_order(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let (mu, nu) = (full_point(gamma)?, full_point(gamma_prime)?);
    let mut s = 0.0;
    for (p, h) in model.chaos_basis(n)? {
        let scale = 1.0 / to_f64(&p.norm_sq);
        s += scale * multiple_integral(&h, &mu)? * multiple_integral(&h, &nu)?;
    }
    Ok(s)
}

/// Both sides of the order-`n` Parseval identity for `F` (free coordinates):
/// `(Σ_{|n|=n} ⟨F, P_n⟩², c(n, |θ|)·E[h_{F,n}(X_n)²])`, exactly.
pub fn parseval_order(model: &TransitionModel, f: &SimplexPolynomial<Rational>, n: usize) -> Result<(Rational, Rational)> {
    model.check_order(n)?;
    if n == 0 {
        return Err(Error::input("Parseval is checked for orders n >= 1"));
    }
    let theta = &model.theta;
    let mut lhs = Rational::zero();
    for p in model.basis_of_degree(n) {
        let ip = f.mul(&p.unnormalised).expectation(theta)?;
        lhs += &ip * &ip / &p.norm_sq;
    }
    let coeffs = theta_oracle(theta.total_mass(), n)?;
    let d = polynomial_chaos(f, theta, n, &coeffs)?;
    let rhs = match d.kernel(n) {
        Some(h) => {
            let sq: SymmetricStatistic<Rational> = h.map(|v| v * v);
            c_iso(n, theta.total_mass()) * expectation(&sq, theta)?
        }
        None => Rational::zero(),
    };
    Ok((lhs, rhs))
}

/// Largest gap between the order-`n` kernels of `G_γ(D) = density(γ | D)`,
/// extracted from conditional expectations, and
/// `f_θ(γ)·ρ_n(t)·Σ_{|n|=n} P_n(γ)·h_{n,θ}`, for `n = 1..=M`.
///
/// The float density weights are turned into exact rationals so that the
/// functional is a rational polynomial in `D`.
pub fn projection_gap(model: &TransitionModel, t: f64, gamma: &[f64]) -> Result<f64> {
    check_interior(gamma, model.theta.atoms())?;
    let theta = &model.theta;
    let free = theta.atoms() - 1;
    let f = dirichlet_density(theta, gamma)?;
    let total = to_f64(theta.total_mass());
    let g_exact: Vec<Rational> = gamma.iter().map(|&g| rational_from_f64(g)).collect::<Result<_>>()?;
    let mut weights = Vec::new();
    let mut functional = SimplexPolynomial::constant(free, rational_from_f64(f)?);
    for n in 1..=model.max_order {
        let w = rational_from_f64(f * rho(n, t, total))?;
        for p in model.basis_of_degree(n) {
            let c = &w * p.unnormalised.eval_exact(&g_exact)? / &p.norm_sq;
            functional = functional.add(&p.unnormalised.scale(&c));
        }
        weights.push(w);
    }
    let coeffs = theta_oracle(theta.total_mass(), model.max_order)?;
    let d = polynomial_chaos(&functional, theta, model.max_order, &coeffs)?;
    let mut gap = 0.0f64;
    for n in 1..=model.max_order {
        let mut predicted = SymmetricKernel::zeros(n, theta.atoms());
        for (p, h) in model.chaos_basis(n)? {
            let c = &weights[n - 1] * p.unnormalised.eval_exact(&g_exact)? / &p.norm_sq;
            predicted = predicted.try_add(&h.scale(&c))?;
        }
        let extracted = d.kernel(n).cloned().unwrap_or_else(|| SymmetricKernel::zeros(n, theta.atoms()));
        gap = gap.max(extracted.to_f64().max_abs_diff(&predicted.to_f64()));
    }
    Ok(gap)
}
