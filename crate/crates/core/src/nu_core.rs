//! Nikiforov-Uvarov reduction of equations of hypergeometric type
//!
//! ```text
//! φ'' + (τ̃/σ) φ' + (σ̃/σ²) φ = 0,    deg σ, deg σ̃ ≤ 2,  deg τ̃ ≤ 1
//! ```
//!
//! The factorization `φ = ψ(s) y(s)` leads to
//! `π = (σ'−τ̃)/2 ± √((σ'−τ̃)²/4 − σ̃ + tσ)`, where `t` is fixed by making
//! the radicand a perfect square, `τ = τ̃ + 2π`, `λ = t + π'`, and the
//! polynomial solutions exist for `λ = −nτ' − n(n−1)σ''/2`.

use serde::Serialize;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

const SQUARE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("{name} must have degree at most {max}, got {degree}")]
    Degree {
        name: &'static str,
        max: usize,
        degree: usize,
    },
    #[error("no real t: discriminant of the t-quadratic is {0}")]
    ComplexRoots(f64),
    #[error("radicand is a perfect square for every t; π is not determined")]
    Degenerate,
    #[error("radicand is not a perfect square (discriminant residue {0})")]
    NotPerfectSquare(f64),
    #[error("no admissible branch with τ' < 0")]
    NotAdmissible,
    #[error("weight equation only handled for σ ∝ s(1−s), s or a constant")]
    UnsupportedShape,
    #[error("Rodrigues formula limited to n ≤ 8, got {0}")]
    RodriguesOrder(u32),
    #[error("quantization condition has no positive root")]
    NoPositiveRoot,
}

/// Real polynomial, constant term first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn linear(c0: f64, c1: f64) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn quadratic(c0: f64, c1: f64, c2: f64) -> Self {
        Self::new(vec![c0, c1, c2])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^i`, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Index of the highest exactly nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        if coeffs.is_empty() {
            Poly::constant(0.0)
        } else {
            Poly::new(coeffs)
        }
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.len().max(rhs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.len().max(rhs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<f64> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * rhs).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.len() + rhs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuProblem {
    tau_tilde: Poly,
    sigma: Poly,
    sigma_tilde: Poly,
}

fn bounded(name: &'static str, p: &Poly, max: usize) -> Result<(), NuError> {
    let degree = p.degree();
    if degree > max {
        Err(NuError::Degree { name, max, degree })
    } else {
        Ok(())
    }
}

impl NuProblem {
    pub fn new(tau_tilde: Poly, sigma: Poly, sigma_tilde: Poly) -> Result<Self, NuError> {
        bounded("tau_tilde", &tau_tilde, 1)?;
        bounded("sigma", &sigma, 2)?;
        bounded("sigma_tilde", &sigma_tilde, 2)?;
        Ok(Self {
            tau_tilde,
            sigma,
            sigma_tilde,
        })
    }

    pub fn tau_tilde(&self) -> &Poly {
        &self.tau_tilde
    }

    pub fn sigma(&self) -> &Poly {
        &self.sigma
    }

    pub fn sigma_tilde(&self) -> &Poly {
        &self.sigma_tilde
    }

    /// `(σ'−τ̃)/2`
    fn half_shift(&self) -> Poly {
        &(&self.sigma.derivative() - &self.tau_tilde) * 0.5
    }

    /// `((σ'−τ̃)/2)² − σ̃ + tσ`
    fn radicand(&self, t: f64) -> Poly {
        let h = self.half_shift();
        &(&(&h * &h) - &self.sigma_tilde) + &(&self.sigma * t)
    }
}

/// Sign in front of the square root in `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

/// Weight function solving `(σρ)' = τρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Weight {
    /// `s^a (1−s)^b`, for `σ = c·s(1−s)`.
    Jacobi { a: f64, b: f64 },
    /// `s^a e^{βs}`, for `σ = c·s`.
    Laguerre { a: f64, beta: f64 },
    /// `exp(c₁s + c₂s²)`, for constant `σ`.
    Gaussian { c1: f64, c2: f64 },
}

impl Weight {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Weight::Jacobi { a, b } => s.powf(a) * (1.0 - s).powf(b),
            Weight::Laguerre { a, beta } => s.powf(a) * (beta * s).exp(),
            Weight::Gaussian { c1, c2 } => (c1 * s + c2 * s * s).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuSolution {
    pub t: f64,
    pub branch: Branch,
    pub pi: Poly,
    pub tau: Poly,
    pub lambda: f64,
    /// `(a, b)` of `ρ = s^a(1−s)^b` when σ is proportional to `s(1−s)`.
    pub weight_exponents: Option<(f64, f64)>,
}

/// Values of `t` that make the radicand a perfect square, ascending.
pub fn t_candidates(problem: &NuProblem) -> Result<Vec<f64>, NuError> {
    let p = problem.radicand(0.0);
    let s = &problem.sigma;
    let (p0, p1, p2) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let (s0, s1, s2) = (s.coeff(0), s.coeff(1), s.coeff(2));
    // disc(t) = (p1 + t s1)² − 4(p2 + t s2)(p0 + t s0)
    let a = s1 * s1 - 4.0 * s2 * s0;
    let b = 2.0 * p1 * s1 - 4.0 * (p2 * s0 + p0 * s2);
    let c = p1 * p1 - 4.0 * p2 * p0;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Err(NuError::Degenerate);
    }
    let tiny = 1e-14 * scale;
    if a.abs() <= tiny {
        if b.abs() <= tiny {
            return if c.abs() <= tiny {
                Err(NuError::Degenerate)
            } else {
                Err(NuError::ComplexRoots(c))
            };
        }
        return Ok(vec![-c / b]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * (b * b).max((4.0 * a * c).abs()) {
        return Err(NuError::ComplexRoots(disc));
    }
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * root);
    let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
    for t in &mut roots {
        *t = polish_t(problem, *t);
    }
    roots.sort_by(f64::total_cmp);
    if (roots[1] - roots[0]).abs() <= 1e-12 * roots[0].abs().max(roots[1].abs()).max(1.0) {
        roots.truncate(1);
    }
    Ok(roots)
}

/// Newton steps on `R₁² − 4R₂R₀` evaluated from the radicand itself; the
/// expanded t-quadratic loses digits when its coefficients are large.
fn polish_t(problem: &NuProblem, t0: f64) -> f64 {
    let s = &problem.sigma;
    let eval = |t: f64| {
        let r = problem.radicand(t);
        let (r0, r1, r2) = (r.coeff(0), r.coeff(1), r.coeff(2));
        let d = r1 * r1 - 4.0 * r2 * r0;
        let dd = 2.0 * r1 * s.coeff(1) - 4.0 * (r2 * s.coeff(0) + r0 * s.coeff(2));
        (d, dd)
    };
    let mut t = t0;
    let (mut d, mut dd) = eval(t);
    for _ in 0..4 {
        if dd == 0.0 || d == 0.0 {
            break;
        }
        let next = t - d / dd;
        let (dn, ddn) = eval(next);
        if dn.abs() >= d.abs() {
            break;
        }
        t = next;
        d = dn;
        dd = ddn;
    }
    t
}

/// Square root `m·s + b` (with `m ≥ 0`) of a perfect-square quadratic whose
/// coefficients were formed from terms of size `magnitude`.
fn linear_root(r: &Poly, magnitude: f64) -> Result<Poly, NuError> {
    let (r0, r1, r2) = (r.coeff(0), r.coeff(1), r.coeff(2));
    let residue = r1 * r1 - 4.0 * r2 * r0;
    let coef_scale = r0.abs().max(r1.abs()).max(r2.abs()).max(magnitude);
    if residue.abs() > SQUARE_TOL * coef_scale * coef_scale {
        return Err(NuError::NotPerfectSquare(residue));
    }
    if r2 > SQUARE_TOL * coef_scale {
        let m = r2.sqrt();
        Ok(Poly::linear(r1 / (2.0 * m), m))
    } else if r2 >= -SQUARE_TOL * coef_scale && r0 >= 0.0 {
        Ok(Poly::linear(r0.sqrt(), 0.0))
    } else {
        Err(NuError::NotPerfectSquare(residue))
    }
}

/// `π = (σ'−τ̃)/2 ± √(radicand)` for a candidate `t`.
pub fn pi_for(problem: &NuProblem, t: f64, branch: Branch) -> Result<Poly, NuError> {
    let magnitude = problem
        .radicand(0.0)
        .coeffs()
        .iter()
        .chain(problem.sigma.coeffs())
        .map(|c| c.abs())
        .fold(0.0, f64::max)
        * t.abs().max(1.0);
    let root = linear_root(&problem.radicand(t), magnitude)?;
    Ok(&problem.half_shift() + &(&root * branch.sign()))
}

/// `τ = τ̃ + 2π` and whether `τ' < 0`.
pub fn admissible(problem: &NuProblem, pi: &Poly) -> (Poly, bool) {
    let tau = &problem.tau_tilde + &(pi * 2.0);
    let ok = tau.coeff(1) < 0.0;
    (tau, ok)
}

/// `λ − (−nτ' − n(n−1)σ''/2)`; zero when a degree-n polynomial solution exists.
pub fn quantization(problem: &NuProblem, solution: &NuSolution, n: u32) -> f64 {
    let n = f64::from(n);
    let tau_p = solution.tau.coeff(1);
    let sigma_pp = 2.0 * problem.sigma.coeff(2);
    solution.lambda - (-n * tau_p - n * (n - 1.0) * sigma_pp / 2.0)
}

/// Weight function for the supported shapes of σ.
pub fn weight(sigma: &Poly, tau: &Poly) -> Result<Weight, NuError> {
    let (s0, s1, s2) = (sigma.coeff(0), sigma.coeff(1), sigma.coeff(2));
    if sigma.degree() > 2 || tau.degree() > 1 {
        return Err(NuError::UnsupportedShape);
    }
    let scale = s0.abs().max(s1.abs()).max(s2.abs());
    let zero = |x: f64| x.abs() <= 1e-14 * scale;
    // (σρ)' = τρ with N = τ − σ'
    let n = tau - &sigma.derivative();
    let (n0, n1) = (n.coeff(0), n.coeff(1));
    if scale == 0.0 {
        Err(NuError::UnsupportedShape)
    } else if zero(s0) && !zero(s2) && ((s1 + s2).abs() <= 1e-14 * scale) {
        let c = s1;
        Ok(Weight::Jacobi {
            a: n0 / c,
            b: -(n0 + n1) / c,
        })
    } else if zero(s0) && zero(s2) {
        Ok(Weight::Laguerre {
            a: n0 / s1,
            beta: n1 / s1,
        })
    } else if zero(s1) && zero(s2) {
        Ok(Weight::Gaussian {
            c1: n0 / s0,
            c2: n1 / (2.0 * s0),
        })
    } else {
        Err(NuError::UnsupportedShape)
    }
}

/// `(a, b)` with `ρ = s^a (1−s)^b` for `σ ∝ s(1−s)`.
pub fn weight_exponents(sigma: &Poly, tau: &Poly) -> Result<(f64, f64), NuError> {
    match weight(sigma, tau)? {
        Weight::Jacobi { a, b } => Ok((a, b)),
        _ => Err(NuError::UnsupportedShape),
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn falling(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - f64::from(i)))
}

/// `y_n = ρ⁻¹ dⁿ/dsⁿ [σⁿ ρ]` as a polynomial in `s`.
pub fn rodrigues(sigma: &Poly, w: &Weight, n: u32) -> Result<Poly, NuError> {
    if n > 8 {
        return Err(NuError::RodriguesOrder(n));
    }
    let nn = n as usize;
    let mut out = vec![0.0; nn + 1];
    match *w {
        Weight::Jacobi { a, b } => {
            // σ = c s(1−s): Leibniz on s^{n+a}(1−s)^{n+b}
            let c = sigma.coeff(1);
            let (big_a, big_b) = (a + f64::from(n), b + f64::from(n));
            for k in 0..=n {
                let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
                let term = binomial(n, k) * falling(big_a, k) * sign * falling(big_b, n - k);
                // s^{n−k}(1−s)^k
                for j in 0..=k {
                    let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
                    out[(n - k + j) as usize] += term * binomial(k, j) * sj;
                }
            }
            for v in &mut out {
                *v *= c.powi(n as i32);
            }
        }
        Weight::Laguerre { a, beta } => {
            // σ = c s: Leibniz on s^{n+a} e^{βs}
            let c = sigma.coeff(1);
            let big_a = a + f64::from(n);
            for k in 0..=n {
                out[(n - k) as usize] += binomial(n, k) * falling(big_a, k) * beta.powi((n - k) as i32);
            }
            for v in &mut out {
                *v *= c.powi(n as i32);
            }
        }
        Weight::Gaussian { c1, c2 } => {
            // dᵏ e^q = H_k e^q with H_{k+1} = H_k' + q' H_k
            let q_prime = Poly::linear(c1, 2.0 * c2);
            let mut h = Poly::constant(1.0);
            for _ in 0..n {
                h = &h.derivative() + &(&q_prime * &h);
            }
            let c = sigma.coeff(0).powi(n as i32);
            for (i, v) in out.iter_mut().enumerate() {
                *v = c * h.coeff(i);
            }
        }
    }
    Ok(Poly::new(out))
}

/// Every admissible `(t, branch)` combination.
pub fn solutions(problem: &NuProblem) -> Result<Vec<NuSolution>, NuError> {
    let mut out = Vec::new();
    for t in t_candidates(problem)? {
        for branch in [Branch::Upper, Branch::Lower] {
            let pi = pi_for(problem, t, branch)?;
            let (tau, ok) = admissible(problem, &pi);
            if !ok {
                continue;
            }
            let lambda = t + pi.coeff(1);
            let weight_exponents = weight_exponents(&problem.sigma, &tau).ok();
            out.push(NuSolution {
                t,
                branch,
                pi,
                tau,
                lambda,
                weight_exponents,
            });
        }
    }
    Ok(out)
}

/// The admissible solution with the most negative `τ'`.
pub fn solve(problem: &NuProblem) -> Result<NuSolution, NuError> {
    solutions(problem)?
        .into_iter()
        .min_by(|x, y| x.tau.coeff(1).total_cmp(&y.tau.coeff(1)))
        .ok_or(NuError::NotAdmissible)
}

/// The reduced Pöschl-Teller equation in `s = tanh²(αr)`:
/// `σ = 2s(1−s)`, `τ̃ = 1−3s`, `σ̃ = −δs² + (γ+δ−ε²)s − γ`.
pub fn pt_problem(gamma: f64, delta: f64, epsilon: f64) -> NuProblem {
    NuProblem {
        tau_tilde: Poly::linear(1.0, -3.0),
        sigma: Poly::quadratic(0.0, 2.0, -2.0),
        sigma_tilde: Poly::quadratic(-gamma, gamma + delta - epsilon * epsilon, -delta),
    }
}

/// The branch regular at the origin for `k = D + 2ℓ`.
///
/// `ψ ~ s^{π(0)/2}` near `s = 0` and the hyperradial function behaves as
/// `r^{(k−1)/2}`, so the physical branch has `π(0) = (k−1)/2`. Ties are
/// broken by the most negative `τ'`.
pub fn pt_solution(problem: &NuProblem, k: u32) -> Result<NuSolution, NuError> {
    let target = (f64::from(k) - 1.0) / 2.0;
    solutions(problem)?
        .into_iter()
        .filter(|sol| (sol.pi.coeff(0) - target).abs() <= 1e-9 * target.abs().max(1.0))
        .min_by(|x, y| x.tau.coeff(1).total_cmp(&y.tau.coeff(1)))
        .ok_or(NuError::NotAdmissible)
}

/// Positive `ε` satisfying the quantization condition for `n_r`, found by
/// running the engine at trial `ε` and bracketing the residual.
pub fn quantized_epsilon(k: u32, delta: f64, n_r: u32) -> Result<f64, NuError> {
    let kf = f64::from(k);
    let gamma = (kf - 1.0) * (kf - 3.0) / 4.0;
    let residual = |eps: f64| -> Result<f64, NuError> {
        let problem = pt_problem(gamma, delta, eps);
        let sol = pt_solution(&problem, k)?;
        Ok(quantization(&problem, &sol, n_r))
    };
    let mut lo = 0.0;
    let f_lo = residual(lo)?;
    if !(f_lo > 0.0) {
        return Err(NuError::NoPositiveRoot);
    }
    let mut hi = 1.0;
    let mut bracketed = false;
    for _ in 0..200 {
        if residual(hi)? <= 0.0 {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !bracketed {
        return Err(NuError::NoPositiveRoot);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{jacobi, JacobiParams};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// `π` of the lower branch at `t₋ = −½(γ−δ+ε²) − ½ε√(1+4γ)`.
    fn lower_pi(gamma: f64, epsilon: f64) -> (f64, f64) {
        let root = (1.0 + 4.0 * gamma).sqrt();
        (0.5 + 0.5 * root, -0.5 - 0.5 * (2.0 * epsilon + root))
    }

    #[test]
    fn degree_bounds_enforced() {
        let cubic = Poly::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert!(NuProblem::new(Poly::constant(0.0), cubic, Poly::constant(0.0)).is_err());
        assert!(NuProblem::new(Poly::quadratic(0.0, 0.0, 1.0), Poly::constant(1.0), Poly::constant(0.0)).is_err());
        // trailing exact zeros do not count
        assert_eq!(Poly::new(vec![1.0, 2.0, 0.0, 0.0]).degree(), 1);
    }

    #[test]
    fn pt_candidates_at_small_numbers() {
        // γ=0, δ=2, ε=1: −½(γ−δ+ε²) ± ½ε√(1+4γ) = {0, 1}
        let t = t_candidates(&pt_problem(0.0, 2.0, 1.0)).unwrap();
        assert_eq!(t.len(), 2);
        assert_abs_diff_eq!(t[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn linear_radicand_forces_zero_t() {
        let p = NuProblem::new(Poly::constant(0.0), Poly::linear(0.0, 1.0), Poly::constant(0.0)).unwrap();
        assert_eq!(t_candidates(&p).unwrap(), vec![0.0]);
    }

    #[test]
    fn complex_t_is_an_error() {
        // σ = s, σ̃ = 1 − s²: radicand s² + ts − ¾ never has a double root
        let p = NuProblem::new(
            Poly::constant(0.0),
            Poly::linear(0.0, 1.0),
            Poly::quadratic(1.0, 0.0, -1.0),
        )
        .unwrap();
        assert!(matches!(t_candidates(&p), Err(NuError::ComplexRoots(_))));
    }

    #[test]
    fn harmonic_oscillator_fixture() {
        // φ'' + (ε − s²)φ = 0
        let eps = 5.0;
        let p = NuProblem::new(
            Poly::constant(0.0),
            Poly::constant(1.0),
            Poly::quadratic(eps, 0.0, -1.0),
        )
        .unwrap();
        let t = t_candidates(&p).unwrap();
        assert_eq!(t, vec![eps]);
        let sol = solve(&p).unwrap();
        assert_eq!(sol.pi, Poly::linear(0.0, -1.0));
        assert_eq!(sol.tau.coeff(1), -2.0);
        // λ = ε − 1 = 2n  ⇒  n = 2
        assert_abs_diff_eq!(quantization(&p, &sol, 2), 0.0, epsilon = 1e-14);
        let w = weight(p.sigma(), &sol.tau).unwrap();
        assert_eq!(w, Weight::Gaussian { c1: 0.0, c2: -1.0 });
        // e^{s²} d²/ds² e^{−s²} = 4s² − 2
        assert_eq!(rodrigues(p.sigma(), &w, 2).unwrap(), Poly::new(vec![-2.0, 0.0, 4.0]));
    }

    #[test]
    fn lower_branch_pi_at_frozen_point() {
        // γ=2, δ=8, ε=1.3723: π = 2 − 3.3723 s
        let p = pt_problem(2.0, 8.0, 1.3723);
        let t = t_candidates(&p).unwrap()[0];
        let pi = pi_for(&p, t, Branch::Lower).unwrap();
        assert_abs_diff_eq!(pi.coeff(0), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pi.coeff(1), -3.3723, epsilon = 1e-12);
    }

    #[test]
    fn lower_branch_matches_closed_form_on_grid() {
        for &gamma in &[0.0, 0.75, 2.0, 3.75, 6.0, 12.0] {
            for &delta in &[1.0, 8.0, 20.0, 45.0, 80.0] {
                for &eps in &[0.1, 0.5, 1.3723, 3.0] {
                    let p = pt_problem(gamma, delta, eps);
                    let sol = solve(&p).unwrap();
                    let (c0, c1) = lower_pi(gamma, eps);
                    assert_eq!(sol.branch, Branch::Lower);
                    assert_abs_diff_eq!(sol.pi.coeff(0), c0, epsilon = 1e-12);
                    assert_abs_diff_eq!(sol.pi.coeff(1), c1, epsilon = 1e-12);
                    // τ = (2 + S) − (4 + 2ε + S)s
                    let root = (1.0 + 4.0 * gamma).sqrt();
                    assert_abs_diff_eq!(sol.tau.coeff(0), 2.0 + root, epsilon = 1e-12);
                    assert_abs_diff_eq!(sol.tau.coeff(1), -(4.0 + 2.0 * eps + root), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn admissibility() {
        let p = pt_problem(2.0, 8.0, 3.0);
        let t_minus = t_candidates(&p).unwrap()[0];
        let lower = pi_for(&p, t_minus, Branch::Lower).unwrap();
        assert!(admissible(&p, &lower).1);
        // upper branch: τ' = −4 + 2ε + √(1+4γ) = 5
        let upper = pi_for(&p, t_minus, Branch::Upper).unwrap();
        let (tau, ok) = admissible(&p, &upper);
        assert!(!ok);
        assert_abs_diff_eq!(tau.coeff(1), 5.0, epsilon = 1e-12);
        let q = NuProblem::new(Poly::constant(0.0), Poly::constant(1.0), Poly::constant(0.0)).unwrap();
        assert!(!admissible(&q, &Poly::linear(0.0, 1.0)).1);
    }

    #[test]
    fn non_square_radicand_rejected() {
        let p = pt_problem(2.0, 8.0, 1.0);
        assert!(matches!(
            pi_for(&p, 0.123, Branch::Lower),
            Err(NuError::NotPerfectSquare(_))
        ));
    }

    #[test]
    fn quantization_roots() {
        // γ=2, δ=8, n_r=0: (√33 − 5)/2
        let eps = quantized_epsilon(5, 8.0, 0).unwrap();
        assert_abs_diff_eq!(eps, (33f64.sqrt() - 5.0) / 2.0, epsilon = 1e-12);
        // γ=0 and δ=2 at k=1 (even branch) gives ε=1, at k=3 the threshold ε=0
        assert_abs_diff_eq!(quantized_epsilon(1, 2.0, 0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(matches!(quantized_epsilon(3, 2.0, 0), Err(NuError::NoPositiveRoot)));
    }

    #[test]
    fn quantization_residual_zero_at_ground_state_with_zero_lambda() {
        let p = NuProblem::new(
            Poly::constant(0.0),
            Poly::constant(1.0),
            Poly::quadratic(1.0, 0.0, -1.0),
        )
        .unwrap();
        let sol = solve(&p).unwrap();
        assert_eq!(quantization(&p, &sol, 0), sol.lambda);
        assert_eq!(sol.lambda, 0.0);
    }

    #[test]
    fn weight_for_pt_branch() {
        // v = 1 (k = 3), ε = 2: τ = 3 − 9s, ρ = s^{1/2}(1−s)^2
        let p = pt_problem(0.0, 20.0, 2.0);
        let sol = solve(&p).unwrap();
        let (a, b) = sol.weight_exponents.unwrap();
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-14);
        // (σρ)' = τρ pointwise
        let w = Weight::Jacobi { a, b };
        for &s in &[0.3, 0.7] {
            let h = 1e-6;
            let sr = |x: f64| p.sigma().eval(x) * w.eval(x);
            let lhs = (sr(s + h) - sr(s - h)) / (2.0 * h);
            assert_abs_diff_eq!(lhs, sol.tau.eval(s) * w.eval(s), epsilon = 1e-8);
        }
        assert_eq!(
            weight_exponents(p.sigma(), &p.sigma().derivative()).unwrap(),
            (0.0, 0.0)
        );
        assert!(matches!(
            weight_exponents(&Poly::quadratic(1.0, 1.0, 1.0), &Poly::constant(0.0)),
            Err(NuError::UnsupportedShape)
        ));
    }

    #[test]
    fn laguerre_weight_and_rodrigues() {
        // σ = s, τ = 1 + a − s: ρ = s^a e^{−s}, y_n ∝ L_n^{(a)}
        let sigma = Poly::linear(0.0, 1.0);
        let a = 0.5;
        let w = weight(&sigma, &Poly::linear(1.0 + a, -1.0)).unwrap();
        assert_eq!(w, Weight::Laguerre { a, beta: -1.0 });
        // n! L_2^{(a)} = s² − 2(a+2)s + (a+1)(a+2)
        let y = rodrigues(&sigma, &w, 2).unwrap();
        assert_abs_diff_eq!(y.coeff(0), (a + 1.0) * (a + 2.0), epsilon = 1e-14);
        assert_abs_diff_eq!(y.coeff(1), -2.0 * (a + 2.0), epsilon = 1e-14);
        assert_abs_diff_eq!(y.coeff(2), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rodrigues_order_limit() {
        let w = Weight::Jacobi { a: 0.0, b: 0.0 };
        assert!(matches!(
            rodrigues(&Poly::quadratic(0.0, 1.0, -1.0), &w, 9),
            Err(NuError::RodriguesOrder(9))
        ));
        assert_eq!(
            rodrigues(&Poly::quadratic(0.0, 1.0, -1.0), &w, 0).unwrap(),
            Poly::constant(1.0)
        );
    }

    fn assert_proportional_to_jacobi(n: u32, a: f64, b: f64) {
        let sigma = Poly::quadratic(0.0, 2.0, -2.0);
        let y = rodrigues(&sigma, &Weight::Jacobi { a, b }, n).unwrap();
        assert_eq!(y.degree(), n as usize);
        let jp = JacobiParams::new(n, a, b).unwrap();
        let grid: Vec<f64> = (1..=9).map(|i| 0.1 * f64::from(i)).collect();
        let p: Vec<f64> = grid.iter().map(|&s| jacobi(&jp, 1.0 - 2.0 * s)).collect();
        // ratio fixed where |P| is largest, then checked everywhere relative to that size
        let (i_max, p_max) = p
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(i, v)| (i, v.abs()))
            .unwrap();
        let ratio = y.eval(grid[i_max]) / p[i_max];
        for (s, pv) in grid.iter().zip(&p) {
            let err = (y.eval(*s) - ratio * pv).abs();
            // monomial evaluation cancels terms far larger than the value
            let cond: f64 = y
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * s.powi(i as i32))
                .sum();
            let tol = 1e-10 * (ratio * p_max).abs() + 1e-14 * cond;
            assert!(err <= tol, "n={n} a={a} b={b} s={s}");
        }
    }

    #[test]
    fn rodrigues_small_cases() {
        assert_proportional_to_jacobi(1, 1.0, 2.0);
        assert_proportional_to_jacobi(2, 1.0, 1.0);
    }

    #[test]
    fn regression_grid_five_by_five() {
        for &k in &[3u32, 4, 5, 6, 7] {
            let gamma = f64::from((k - 1) * (k - 3)) / 4.0;
            for &delta in &[20.0f64, 30.0, 45.0, 60.0, 80.0] {
                let root = f64::from(k - 2);
                let closed = 0.5 * ((1.0 + 4.0 * delta).sqrt() - 2.0 - root);
                let eps = quantized_epsilon(k, delta, 0).unwrap();
                assert!((eps - closed).abs() < 1e-10);
                let p = pt_problem(gamma, delta, eps);
                let t = t_candidates(&p).unwrap();
                let t_minus = -0.5 * (gamma - delta + eps * eps) - 0.5 * eps * root;
                assert!((t[0] - t_minus).abs() < 1e-10 * t_minus.abs().max(1.0));
                let pi = pi_for(&p, t[0], Branch::Lower).unwrap();
                let (c0, c1) = lower_pi(gamma, eps);
                assert!((pi.coeff(0) - c0).abs() < 1e-10 && (pi.coeff(1) - c1).abs() < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn rodrigues_proportional_to_jacobi(n in 0u32..=8, a in -0.9f64..6.0, b in -0.9f64..6.0) {
            assert_proportional_to_jacobi(n, a, b);
        }

        #[test]
        fn solution_identities(gamma in 0.0f64..20.0, delta in 0.1f64..100.0, eps in 0.01f64..5.0) {
            let p = pt_problem(gamma, delta, eps);
            for sol in solutions(&p).unwrap() {
                let tau = p.tau_tilde() + &(&sol.pi * 2.0);
                prop_assert_eq!(&sol.tau, &tau);
                prop_assert_eq!(sol.lambda, sol.t + sol.pi.coeff(1));
                prop_assert!(sol.tau.coeff(1) < 0.0);
            }
        }

        #[test]
        fn quantized_epsilon_matches_closed_form(k in 1u32..12, delta in 0.5f64..200.0, n_r in 0u32..4) {
            let kf = f64::from(k);
            let closed = 0.5 * ((1.0 + 4.0 * delta).sqrt() - 2.0 * (2.0 * f64::from(n_r) + 1.0) - (kf - 2.0));
            match quantized_epsilon(k, delta, n_r) {
                Ok(eps) => prop_assert!((eps - closed).abs() < 1e-10, "{} vs {}", eps, closed),
                Err(_) => prop_assert!(closed <= 1e-9),
            }
        }
    }
}
