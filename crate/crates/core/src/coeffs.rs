//! The coefficients `Φ`, `Ψ_N` and `θ_N^{(k,a)}` behind finite-`N` Hoeffding
//! projections, their large-`N` limits `θ^{(k,a)}`, and the isometry
//! constants `c(n, |α|)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::SymmetricKernel;
use crate::math::{binom, binom_star, falling_ratio, fmt_rational, int, solve_exact, to_f64, Rational};
use crate::measures::{compositions, multiset_count, sub_multisets, DiscreteBaseMeasure, MultiExponent};
use crate::polya;

/// `Φ(n, m, r, p)`.
pub fn phi(n: usize, m: usize, r: usize, p: usize, total_mass: &Rational) -> Result<Rational> {
    if m < 1 || m > n || r > m || p > m - r {
        return Err(Error::input(format!("phi needs 1 <= m <= n, r <= m, p <= m - r; got n={n} m={m} r={r} p={p}")));
    }
    let mut v = falling_ratio((m - r) as u64, (m - r - p) as u64)?;
    for s in 1..=(m - r - p) {
        v *= total_mass + int((r + p + s - 1) as i64);
    }
    for s in 1..=(m - r) {
        v /= total_mass + int((n + s - 1) as i64);
    }
    Ok(v)
}

/// `Ψ_N(q, n, m) = Σ_r C(q,r)·C*(N-n, m-r)·Φ(n, m, r, q-r)`.
pub fn psi(big_n: usize, q: usize, n: usize, m: usize, total_mass: &Rational) -> Result<Rational> {
    if q < 1 || q > m || m > n || n > big_n {
        return Err(Error::input(format!("psi needs 1 <= q <= m <= n <= N; got N={big_n} q={q} n={n} m={m}")));
    }
    let mut acc = Rational::zero();
    for r in 0..=q {
        let b = binom_star((big_n - n) as i64, m as i64 - r as i64);
        if b.is_zero() || q - r > m - r {
            continue;
        }
        acc += binom(q as u64, r as u64) * b * phi(n, m, r, q - r, total_mass)?;
    }
    Ok(acc)
}

/// Rows `1..=kmax` of the `θ_N` table (`kmax < N`), by back-substitution.
/// `rows[k-1][a-1] = θ_N^{(k,a)}`.
pub fn theta_rows(big_n: usize, kmax: usize, total_mass: &Rational) -> Result<Vec<Vec<Rational>>> {
    if kmax >= big_n {
        return Err(Error::input(format!("lower rows need kmax < N; got kmax={kmax}, N={big_n}")));
    }
    let mut memo: HashMap<(usize, usize, usize), Rational> = HashMap::new();
    let mut psi_m = |q: usize, n: usize, m: usize| -> Result<Rational> {
        if let Some(v) = memo.get(&(q, n, m)) {
            return Ok(v.clone());
        }
        let v = psi(big_n, q, n, m, total_mass)?;
        memo.insert((q, n, m), v.clone());
        Ok(v)
    };
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut row = vec![Rational::zero(); k];
        let d = psi_m(k, k, k)?;
        if d.is_zero() {
            return Err(Error::Singular { k, q: k });
        }
        row[k - 1] = d.recip();
        for q in (1..k).rev() {
            let mut s = Rational::zero();
            for i in q..=k {
                for j in q..=i {
                    if i == k && j == q {
                        continue;
                    }
                    let t = if i == k { &row[j - 1] } else { &rows[i - 1][j - 1] };
                    if !t.is_zero() {
                        s += t * psi_m(q, k, j)?;
                    }
                }
            }
            let pivot = psi_m(q, k, q)?;
            if pivot.is_zero() {
                return Err(Error::Singular { k, q });
            }
            row[q - 1] = -s / pivot;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// The full triangular table `θ_N^{(k,a)}`, `1 ≤ a ≤ k ≤ N`, with starred entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    n: usize,
    total_mass: Rational,
    theta: Vec<Vec<Rational>>,
    starred: Vec<Vec<Rational>>,
}

pub fn theta_table(big_n: usize, total_mass: &Rational) -> Result<CoefficientTable> {
    if big_n < 1 {
        return Err(Error::input("theta_table needs N >= 1"));
    }
    if !total_mass.is_positive() {
        return Err(Error::input("total mass must be positive"));
    }
    let mut theta = theta_rows(big_n, big_n - 1, total_mass)?;
    let mut top = vec![Rational::zero(); big_n];
    for a in 1..big_n {
        top[a - 1] = -(a..big_n).fold(Rational::zero(), |acc, s| acc + &theta[s - 1][a - 1]);
    }
    top[big_n - 1] = Rational::one();
    theta.push(top);
    let starred = theta
        .iter()
        .enumerate()
        .map(|(k0, row)| {
            row.iter()
                .enumerate()
                .map(|(a0, t)| t / binom((big_n - a0 - 1) as u64, (k0 - a0) as u64))
                .collect()
        })
        .collect();
    Ok(CoefficientTable { n: big_n, total_mass: total_mass.clone(), theta, starred })
}

impl CoefficientTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_mass(&self) -> &Rational {
        &self.total_mass
    }

    /// `θ_N^{(k,a)}`.
    pub fn theta(&self, k: usize, a: usize) -> &Rational {
        &self.theta[k - 1][a - 1]
    }

    /// `θ_N*^{(k,a)} = θ_N^{(k,a)} / C(N-a, k-a)`.
    pub fn theta_star(&self, k: usize, a: usize) -> &Rational {
        &self.starred[k - 1][a - 1]
    }

    /// Left-hand sides of every equation of the systems `S_N(k)`, `k < N`,
    /// as `(k, q, value)`.
    pub fn residuals(&self) -> Result<Vec<(usize, usize, Rational)>> {
        let mut out = Vec::new();
        for k in 1..self.n {
            for q in 1..=k {
                let mut s = Rational::zero();
                for i in q..=k {
                    for j in q..=i {
                        s += self.theta(i, j) * psi(self.n, q, k, j, &self.total_mass)?;
                    }
                }
                // the q = k equation is the normalisation θ^(k,k)Ψ(k,k,k) = 1
                if q == k {
                    s -= Rational::one();
                }
                out.push((k, q, s));
            }
        }
        Ok(out)
    }

    /// CSV with columns `k,a,theta,theta_star`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,a,theta,theta_star\n");
        for k in 1..=self.n {
            for a in 1..=k {
                let _ = writeln!(
                    s,
                    "{k},{a},{},{}",
                    fmt_f64(to_f64(self.theta(k, a))),
                    fmt_f64(to_f64(self.theta_star(k, a)))
                );
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for k in 1..=self.n {
            for a in 1..=k {
                entries.push(json!({
                    "k": k,
                    "a": a,
                    "theta": fmt_rational(self.theta(k, a)),
                    "theta_star": fmt_rational(self.theta_star(k, a)),
                }));
            }
        }
        json!({"N": self.n, "total_mass": fmt_rational(&self.total_mass), "entries": entries})
    }
}

/// Decimal with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Largest `N` tried by [`theta_limit`].
pub const DEFAULT_N_MAX: usize = 1 << 14;

/// `C(N,k)·θ_N*^{(k,a)}`, exactly.
pub fn scaled_theta(big_n: usize, k: usize, a: usize, total_mass: &Rational) -> Result<Rational> {
    let rows = theta_rows(big_n, k, total_mass)?;
    Ok(&rows[k - 1][a - 1] * binom(big_n as u64, k as u64) / binom((big_n - a) as u64, (k - a) as u64))
}

/// Convergence record of one extrapolated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub k: usize,
    pub a: usize,
    pub value: f64,
    /// `|T_j - T_{j-1}|` between the last two diagonal extrapolants.
    pub last_change: f64,
    /// Largest `N` whose exact value entered the tableau.
    pub n_used: usize,
    pub converged: bool,
}

/// `lim_N C(N,k)·θ_N*^{(k,a)}`.
///
/// The exact sequence at `N = 2k, 4k, 8k, …` is fed to a Richardson tableau
/// in `h = 1/N` (ratio 2, exact rational arithmetic). Convergence is declared
/// when two successive diagonal extrapolants differ by less than
/// `tol·max(1, |value|)`.
pub fn theta_limit(k: usize, a: usize, total_mass: &Rational, tol: f64) -> Result<f64> {
    let est = theta_limit_estimate(k, a, total_mass, tol, DEFAULT_N_MAX)?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::Convergence(format!(
            "theta^({k},{a}) not settled by N={}: last change {:e}",
            est.n_used, est.last_change
        )))
    }
}

pub fn theta_limit_estimate(k: usize, a: usize, total_mass: &Rational, tol: f64, n_max: usize) -> Result<LimitEstimate> {
    if a < 1 || a > k {
        return Err(Error::input(format!("theta_limit needs 1 <= a <= k, got k={k} a={a}")));
    }
    let mut tableau: Vec<Vec<Rational>> = Vec::new();
    let mut big_n = 2 * k;
    let mut prev_diag: Option<Rational> = None;
    let mut est = LimitEstimate { k, a, value: f64::NAN, last_change: f64::INFINITY, n_used: 0, converged: false };
    while big_n <= n_max.max(2 * k) {
        let mut row = vec![scaled_theta(big_n, k, a, total_mass)?];
        if let Some(last) = tableau.last() {
            for m in 1..=last.len() {
                let factor = Rational::from_integer((num_bigint::BigInt::one() << m) - 1);
                let t = &row[m - 1] + (&row[m - 1] - &last[m - 1]) / factor;
                row.push(t);
            }
        }
        let diag = row.last().unwrap().clone();
        est.value = to_f64(&diag);
        est.n_used = big_n;
        if let Some(p) = &prev_diag {
            est.last_change = to_f64(&(&diag - p).abs());
            if est.last_change < tol * est.value.abs().max(1.0) {
                est.converged = true;
                return Ok(est);
            }
        }
        prev_diag = Some(diag);
        tableau.push(row);
        big_n *= 2;
    }
    Ok(est)
}

/// All limits `θ^{(k,a)}` with `k ≤ kmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaLimits {
    pub total_mass: Rational,
    pub tol: f64,
    pub entries: Vec<LimitEstimate>,
}

pub fn theta_limits(kmax: usize, total_mass: &Rational, tol: f64) -> Result<ThetaLimits> {
    let mut entries = Vec::new();
    for k in 1..=kmax {
        for a in 1..=k {
            let e = theta_limit_estimate(k, a, total_mass, tol, DEFAULT_N_MAX)?;
            if !e.converged {
                return Err(Error::Convergence(format!(
                    "theta^({k},{a}) not settled by N={}: last change {:e}",
                    e.n_used, e.last_change
                )));
            }
            entries.push(e);
        }
    }
    Ok(ThetaLimits { total_mass: total_mass.clone(), tol, entries })
}

impl ThetaLimits {
    pub fn get(&self, k: usize, a: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.k == k && e.a == a).map(|e| e.value)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "k": e.k,
                    "a": e.a,
                    "value": e.value,
                    "last_change": e.last_change,
                    "n_used": e.n_used,
                    "converged": e.converged,
                })
            })
            .collect();
        json!({"total_mass": fmt_rational(&self.total_mass), "tol": self.tol, "entries": entries})
    }
}

/// The two rows of limit constants available in closed form in the
/// literature: `θ^(1,1) = |α|+1`, `θ^(2,1) = (|α|+3)(|α|+2)`,
/// `θ^(2,2) = (|α|+3)(|α|+1)/2`. `None` beyond `k = 2`.
pub fn printed_theta(k: usize, a: usize, total_mass: &Rational) -> Option<Rational> {
    let t = total_mass;
    match (k, a) {
        (1, 1) => Some(t + int(1)),
        (2, 1) => Some((t + int(3)) * (t + int(2))),
        (2, 2) => Some((t + int(3)) * (t + int(1)) / int(2)),
        _ => None,
    }
}

/// Exact `θ^{(n,k)}` for `n ≤ max_order`, obtained by forcing the kernel
/// formula to reproduce known pure-order functionals on a two-point space.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficients {
    total_mass: Rational,
    rows: Vec<Vec<Rational>>,
}

impl ThetaCoefficients {
    pub fn total_mass(&self) -> &Rational {
        &self.total_mass
    }

    pub fn max_order(&self) -> usize {
        self.rows.len()
    }

    /// `θ^{(n,k)}`, `1 ≤ k ≤ n ≤ max_order`.
    pub fn get(&self, n: usize, k: usize) -> &Rational {
        &self.rows[n - 1][k - 1]
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n - 1]
    }

    /// Replaces the coefficients by arbitrary values, e.g. to test what a
    /// competing table does to reconstruction. The result is marked by the
    /// caller, not validated here.
    pub fn with_override(&self, n: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.rows[n - 1][k - 1] = value;
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> =
            self.rows.iter().map(|r| Value::Array(r.iter().map(|t| Value::String(fmt_rational(t))).collect())).collect();
        json!({"total_mass": fmt_rational(&self.total_mass), "rows": rows})
    }
}

/// The order-`o` degenerate kernel on two atoms whose multiple integral is the
/// monic orthogonal polynomial of degree `o` in `η = D({1})`.
pub fn pure_order_kernel(alpha: &DiscreteBaseMeasure, o: usize) -> Result<SymmetricKernel<Rational>> {
    if alpha.atoms() != 2 {
        return Err(Error::input("pure-order kernels are built on two atoms"));
    }
    let mom = |i: usize| alpha.dirichlet_moment(&MultiExponent::new(vec![i as u32, 0]));
    let mut c = if o == 0 {
        Vec::new()
    } else {
        let m: Vec<Vec<Rational>> = (0..o).map(|j| (0..o).map(|i| mom(i + j)).collect()).collect();
        let b: Vec<Rational> = (0..o).map(|j| -mom(o + j)).collect();
        solve_exact(m, b)?
    };
    c.push(Rational::one());
    // coefficient of η^a in Σ_m C(o,m) φ_m η^m (1-η)^{o-m}
    let mut phi: Vec<Rational> = Vec::with_capacity(o + 1);
    for a in 0..=o {
        let mut s = c[a].clone();
        for (m, p) in phi.iter().enumerate() {
            let sign = if (a - m) % 2 == 0 { int(1) } else { int(-1) };
            s -= sign * binom(o as u64, m as u64) * binom((o - m) as u64, (o - a) as u64) * p;
        }
        phi.push(s / binom(o as u64, a as u64));
    }
    Ok(SymmetricKernel::from_fn(o, 2, |m| phi[m.counts()[0] as usize].clone()))
}

/// `θ^{(n,k)}` for all `n ≤ max_order`, on the two-point space with
/// weights `(|α|/2, |α|/2)`.
pub fn theta_oracle(total_mass: &Rational, max_order: usize) -> Result<ThetaCoefficients> {
    let half = total_mass / int(2);
    theta_oracle_on(&DiscreteBaseMeasure::new(vec![half.clone(), half])?, max_order)
}

/// As [`theta_oracle`] on an arbitrary two-point base measure; the result
/// depends on `α` only through `|α|`.
///
/// For `F_o = ∫h_o dD^o` with `h_o` degenerate, `E[F_o | X_k] = 0` when
/// `k < o`, so the kernel equations for row `n` are triangular: the
/// functional of order `o` determines `θ^{(n,o)}` once the entries `k > o`
/// are known. Every equation, at every argument, is checked exactly.
pub fn theta_oracle_on(alpha: &DiscreteBaseMeasure, max_order: usize) -> Result<ThetaCoefficients> {
    if alpha.atoms() != 2 {
        return Err(Error::input("the projection oracle runs on two atoms"));
    }
    let kernels: Vec<SymmetricKernel<Rational>> =
        (1..=max_order).map(|o| pure_order_kernel(alpha, o)).collect::<Result<_>>()?;
    let mut cond: HashMap<(usize, MultiExponent), Rational> = HashMap::new();
    let mut cond_exp = |o: usize, b: &MultiExponent| -> Result<Rational> {
        if let Some(v) = cond.get(&(o, b.clone())) {
            return Ok(v.clone());
        }
        let v = polya::expectation(&kernels[o - 1], &alpha.with_counts(b))?;
        cond.insert((o, b.clone()), v.clone());
        Ok(v)
    };
    let mut rows = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        let points = compositions(n, 2);
        // s[o-1][p][k-1] = Σ_{b ⊆ a_p, |b| = k} C(a_p, b) E[F_o | b]
        let mut s = vec![vec![vec![Rational::zero(); n]; points.len()]; n];
        for o in 1..=n {
            for (p, a) in points.iter().enumerate() {
                for b in sub_multisets(a) {
                    let k = b.order();
                    if k == 0 {
                        continue;
                    }
                    let v = cond_exp(o, &b)?;
                    if !v.is_zero() {
                        s[o - 1][p][k - 1] += a.choose(&b) * v;
                    }
                }
            }
        }
        let rhs = |o: usize, p: usize| -> Rational {
            if o == n {
                kernels[n - 1].get(&points[p]).clone()
            } else {
                Rational::zero()
            }
        };
        let mut theta = vec![Rational::zero(); n];
        for o in (1..=n).rev() {
            let p = (0..points.len()).find(|&p| !s[o - 1][p][o - 1].is_zero()).ok_or(Error::Singular { k: n, q: o })?;
            let known = ((o + 1)..=n).fold(Rational::zero(), |acc, k| acc + &theta[k - 1] * &s[o - 1][p][k - 1]);
            theta[o - 1] = (rhs(o, p) - known) / &s[o - 1][p][o - 1];
        }
        for o in 1..=n {
            for p in 0..points.len() {
                let lhs = (1..=n).fold(Rational::zero(), |acc, k| acc + &theta[k - 1] * &s[o - 1][p][k - 1]);
                if lhs != rhs(o, p) {
                    return Err(Error::Unvalidated(format!(
                        "row {n}: equation for order {o} at counts {:?} has residual {}",
                        points[p].counts(),
                        fmt_rational(&(lhs - rhs(o, p)))
                    )));
                }
            }
        }
        rows.push(theta);
    }
    Ok(ThetaCoefficients { total_mass: alpha.total_mass().clone(), rows })
}

/// `c(n, |α|) = Π_{l=1}^{n} (n-l+1)/(|α|+n+l-1)`.
pub fn c_iso(n: usize, total_mass: &Rational) -> Rational {
    (1..=n).fold(Rational::one(), |acc, l| acc * int((n - l + 1) as i64) / (total_mass + int((n + l - 1) as i64)))
}

/// `Π_{l=1}^{n} (n-r-l+1)/(|α|+n+l-1)`, evaluated literally (zero for `r ≥ 1`).
pub fn c_overlap_literal(r: usize, n: usize, total_mass: &Rational) -> Rational {
    (1..=n).fold(Rational::one(), |acc, l| {
        acc * int(n as i64 - r as i64 - l as i64 + 1) / (total_mass + int((n + l - 1) as i64))
    })
}

/// The same product with upper limit `n - r`: `c(0,n) = c(n)` and `c(n,n) = 1`.
pub fn c_overlap_truncated(r: usize, n: usize, total_mass: &Rational) -> Rational {
    (1..=n.saturating_sub(r)).fold(Rational::one(), |acc, l| {
        acc * int((n - r - l + 1) as i64) / (total_mass + int((n + l - 1) as i64))
    })
}

/// `E[h(X_1..X_n)·f(X_{n-r+1}..X_{2n-r})]`, exactly, for kernels of order `n`
/// sharing `r` coordinates.
pub fn c_overlap_oracle(
    r: usize,
    n: usize,
    alpha: &DiscreteBaseMeasure,
    h: &SymmetricKernel<Rational>,
    f: &SymmetricKernel<Rational>,
    cap: u128,
) -> Result<Rational> {
    let k = alpha.atoms();
    if h.order() != n || f.order() != n || h.atoms() != k || f.atoms() != k {
        return Err(Error::input("overlap oracle needs two kernels of order n on the measure's atoms"));
    }
    if r > n {
        return Err(Error::input(format!("overlap r={r} exceeds order n={n}")));
    }
    let outer = multiset_count(n - r, k);
    let needed = outer.saturating_mul(outer).saturating_mul(multiset_count(r, k));
    if needed > cap {
        return Err(Error::Resource { needed, cap });
    }
    let left = compositions(n - r, k);
    let shared = compositions(r, k);
    let mut acc = Rational::zero();
    for c1 in &left {
        for c2 in &shared {
            let hv = h.get(&c1.add(c2));
            if hv.is_zero() {
                continue;
            }
            let w12 = c1.multinomial() * c2.multinomial();
            for c3 in &left {
                let fv = f.get(&c2.add(c3));
                if fv.is_zero() {
                    continue;
                }
                let total = c1.add(c2).add(c3);
                acc += &w12 * c3.multinomial() * alpha.dirichlet_moment(&total) * hv * fv;
            }
        }
    }
    Ok(acc)
}
