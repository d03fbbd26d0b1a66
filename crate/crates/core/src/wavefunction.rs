//! Hyperradial eigenfunctions in the variable `s = tanh²(αr)`
//!
//! ```text
//! R(s) = C s^p (1−s)^{ε/2} P_{n_r}^{(a, ε)}(1−2s)
//! ```
//!
//! In the corrected mode `p = v/2` and `a = v − ½`, which solves the reduced
//! equation and gives `R ~ r^{(k−1)/2}` at the origin. The as-printed mode
//! keeps `p = 2v`, `a = v` literally; it does not solve the equation and is
//! kept only so the discrepancy can be measured.
//!
//! `1 − s = sech²(αr)` is carried separately from `s` everywhere so the
//! exponential tail keeps full relative accuracy.

use crate::model::{reduce, ParamError, PhysicalParams, ReducedParams, StateLabel, Units};
use crate::oracle::quadrature::{integrate_unit, QuadError};
use crate::specfun::{self, jacobi, jacobi_derivative, DomainError, JacobiParams};
use crate::spectrum::critical_alpha;
use serde::Serialize;
use thiserror::Error;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error("state is not bound (epsilon = {0}); the norm integral diverges")]
    Unbound(f64),
    #[error("s must lie in (0, 1), got {0}")]
    OutsideUnitInterval(f64),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("states must share D, alpha and units")]
    Incompatible,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Special(#[from] DomainError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMode {
    /// `s^{v/2}` with `P^{(v−½, ε)}`
    #[default]
    Corrected,
    /// `s^{2v}` with `P^{(v, ε)}`
    AsPrinted,
}

impl ExponentMode {
    /// `(p, a)`: power of `s` and first Jacobi parameter.
    fn exponents(self, v: f64) -> (f64, f64) {
        match self {
            ExponentMode::Corrected => (0.5 * v, v - 0.5),
            ExponentMode::AsPrinted => (2.0 * v, v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialSolution {
    pub state: StateLabel,
    pub reduced: ReducedParams,
    pub norm_constant: f64,
    pub mode: ExponentMode,
    alpha: f64,
    #[serde(skip)]
    jacobi: JacobiParams,
    #[serde(skip)]
    p: f64,
}

impl RadialSolution {
    /// Bound state normalized with the closed-form series.
    pub fn new(params: &PhysicalParams, state: &StateLabel, mode: ExponentMode) -> Result<Self, WavefunctionError> {
        let mut sol = Self::unnormalized(params, state, mode)?;
        sol.norm_constant = normalization_series(params, state, mode)?;
        Ok(sol)
    }

    /// Bound state with `C = 1`.
    pub fn unnormalized(
        params: &PhysicalParams,
        state: &StateLabel,
        mode: ExponentMode,
    ) -> Result<Self, WavefunctionError> {
        let reduced = reduce(params, state);
        if !reduced.is_bound() {
            return Err(WavefunctionError::Unbound(reduced.epsilon));
        }
        let (p, a) = mode.exponents(reduced.v);
        Ok(Self {
            state: *state,
            reduced,
            norm_constant: 1.0,
            mode,
            alpha: params.alpha(),
            jacobi: JacobiParams::new(state.n_r(), a, reduced.epsilon)?,
            p,
        })
    }

    pub fn with_norm(mut self, c: f64) -> Self {
        self.norm_constant = c;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn q(&self) -> f64 {
        0.5 * self.reduced.epsilon
    }

    /// `R` at `(s, 1−s)`.
    pub fn eval_su(&self, s: f64, u: f64) -> f64 {
        self.norm_constant * s.powf(self.p) * u.powf(self.q()) * jacobi(&self.jacobi, u - s)
    }

    /// `dR/ds` at `(s, 1−s)`.
    pub fn ds_su(&self, s: f64, u: f64) -> f64 {
        let x = u - s;
        let p = jacobi(&self.jacobi, x);
        let dp = jacobi_derivative(&self.jacobi, x);
        self.norm_constant * s.powf(self.p) * u.powf(self.q()) * ((self.p / s - self.q() / u) * p - 2.0 * dp)
    }

    /// `R(s)` for `0 < s < 1`.
    pub fn radial_s(&self, s: f64) -> Result<f64, WavefunctionError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(WavefunctionError::OutsideUnitInterval(s));
        }
        Ok(self.eval_su(s, 1.0 - s))
    }

    fn su_at(&self, r: f64) -> Result<(f64, f64), WavefunctionError> {
        if !(r > 0.0) {
            return Err(WavefunctionError::NonPositiveRadius(r));
        }
        let x = self.alpha * r;
        let t = x.tanh();
        let c = x.cosh();
        Ok((t * t, 1.0 / (c * c)))
    }

    /// `R(r)`.
    pub fn radial_r(&self, r: f64) -> Result<f64, WavefunctionError> {
        let (s, u) = self.su_at(r)?;
        Ok(self.eval_su(s, u))
    }

    /// `dR/dr`, using `ds/dr = 2α√s(1−s)`.
    pub fn derivative_r(&self, r: f64) -> Result<f64, WavefunctionError> {
        let (s, u) = self.su_at(r)?;
        Ok(self.ds_su(s, u) * 2.0 * self.alpha * s.sqrt() * u)
    }

    /// `U(r) = r^{−(D−1)/2} R(r)`.
    pub fn hyperradial_u(&self, r: f64) -> Result<f64, WavefunctionError> {
        let d = f64::from(self.state.dim());
        Ok(r.powf(-0.5 * (d - 1.0)) * self.radial_r(r)?)
    }
}

/// Coefficients `c_k` of `₂F₁(−n, b; c; s) = Σ c_k s^k`.
fn hyp_coefficients(n: u32, b: f64, c: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut term = 1.0;
    out.push(term);
    for k in 0..n {
        let kf = f64::from(k);
        term *= (kf - f64::from(n)) * (b + kf) / ((c + kf) * (kf + 1.0));
        out.push(term);
    }
    out
}

/// Normalization constant from the finite double sum
/// `C² [(a+1)_n/n!]² Σ_{k,j} c_k c_j B(2p+½+k+j, ε) = 2α`.
pub fn normalization_series(
    params: &PhysicalParams,
    state: &StateLabel,
    mode: ExponentMode,
) -> Result<f64, WavefunctionError> {
    let red = reduce(params, state);
    let eps = red.epsilon;
    if !(eps > 0.0) {
        return Err(WavefunctionError::Unbound(eps));
    }
    let (p, a) = mode.exponents(red.v);
    let n = state.n_r();
    let prefactor = specfun::pochhammer(a + 1.0, n) / specfun::pochhammer(1.0, n);
    let c = hyp_coefficients(n, f64::from(n) + a + eps + 1.0, a + 1.0);
    let base = 2.0 * p + 0.5;
    let mut sum = 0.0;
    for (k, ck) in c.iter().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            sum += ck * cj * specfun::beta(base + (k + j) as f64, eps)?;
        }
    }
    Ok((2.0 * params.alpha() / (prefactor * prefactor * sum)).sqrt())
}

/// Closed-form ground-state constant `C₀ = √(2α / B(v+½, ε))` (corrected mode).
pub fn ground_state_constant(params: &PhysicalParams, state: &StateLabel) -> Result<f64, WavefunctionError> {
    let red = reduce(params, state);
    if !(red.epsilon > 0.0) {
        return Err(WavefunctionError::Unbound(red.epsilon));
    }
    Ok((2.0 * params.alpha() / specfun::beta(red.v + 0.5, red.epsilon)?).sqrt())
}

/// Normalization constant from adaptive quadrature of
/// `∫₀¹ R(s)² ds / (2α√s(1−s))` with `C = 1`.
pub fn normalization_quadrature(
    params: &PhysicalParams,
    state: &StateLabel,
    mode: ExponentMode,
) -> Result<f64, WavefunctionError> {
    let sol = RadialSolution::unnormalized(params, state, mode)?;
    Ok(1.0 / overlap(&sol, &sol)?.sqrt())
}

/// `∫₀^∞ R_a R_b dr` by quadrature in `s`.
pub fn overlap(a: &RadialSolution, b: &RadialSolution) -> Result<f64, WavefunctionError> {
    if a.alpha != b.alpha || a.state.dim() != b.state.dim() || a.reduced.delta != b.reduced.delta {
        return Err(WavefunctionError::Incompatible);
    }
    let two_alpha = 2.0 * a.alpha;
    let v = integrate_unit(
        |s, u| {
            if s == 0.0 || u == 0.0 {
                return 0.0;
            }
            a.eval_su(s, u) * b.eval_su(s, u) / (two_alpha * s.sqrt() * u)
        },
        NORM_TOL,
    )?;
    Ok(v)
}

/// `∫₀^∞ |R|² dr` of a solution as constructed.
pub fn norm_integral(sol: &RadialSolution) -> Result<f64, WavefunctionError> {
    overlap(sol, sol)
}

/// Largest `|4s²(1−s)²R'' + 2s(1−s)(1−3s)R' + σ̃(s)R|` over
/// `s = 0.05, 0.06, …, 0.95`, relative to the largest `|R|` there.
///
/// Derivatives are central differences at steps `h` and `2h`
/// (`h = 2.5e−4`) combined by Richardson extrapolation.
pub fn ode_residual(sol: &RadialSolution) -> f64 {
    let h = 2.5e-4;
    let ReducedParams {
        gamma, delta, epsilon, ..
    } = sol.reduced;
    let f = |s: f64| sol.eval_su(s, 1.0 - s);
    let central = |s: f64, h: f64| {
        let (fm, f0, fp) = (f(s - h), f(s), f(s + h));
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    };
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 5..=95 {
        let s = f64::from(i) / 100.0;
        let f0 = f(s);
        let ((a1, a2), (b1, b2)) = (central(s, h), central(s, 2.0 * h));
        let d1 = (4.0 * a1 - b1) / 3.0;
        let d2 = (4.0 * a2 - b2) / 3.0;
        let sigma = 2.0 * s * (1.0 - s);
        let sigma_tilde = -delta * s * s + (gamma + delta - epsilon * epsilon) * s - gamma;
        let res = sigma * sigma * d2 + sigma * (1.0 - 3.0 * s) * d1 + sigma_tilde * f0;
        worst = worst.max(res.abs());
        scale = scale.max(f0.abs());
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

/// `d ln R / d ln r` from `R` at `r/√2` and `r√2`.
pub fn small_r_slope(sol: &RadialSolution, r: f64) -> Result<f64, WavefunctionError> {
    let (r1, r2) = (r / std::f64::consts::SQRT_2, r * std::f64::consts::SQRT_2);
    let (a, b) = (sol.radial_r(r1)?, sol.radial_r(r2)?);
    Ok((b / a).abs().ln() / (r2 / r1).ln())
}

/// Sign changes of `R` on an interior grid of `(0, 1)`.
pub fn node_count(sol: &RadialSolution) -> u32 {
    let n = 4000;
    let mut nodes = 0;
    let mut prev = 0.0;
    for i in 0..n {
        let s = (f64::from(i) + 0.5) / f64::from(n);
        let v = sol.eval_su(s, 1.0 - s);
        if v != 0.0 {
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                nodes += 1;
            }
            prev = v;
        }
    }
    nodes
}

/// `|U(r)|` sampled on a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub state: StateLabel,
    pub alpha: f64,
    pub samples: Vec<(f64, f64)>,
}

impl RadialProfile {
    /// `r` of the largest sample.
    pub fn argmax(&self) -> f64 {
        self.samples
            .iter()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|s| s.0)
            .unwrap_or(f64::NAN)
    }

    /// Interior local maxima of `|U|`.
    pub fn local_maxima(&self) -> usize {
        self.samples
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
            .count()
    }

    /// Interior zeros: local minima of `|U|` that are far below the neighbouring peaks.
    pub fn interior_zeros(&self) -> usize {
        let peak = self.samples.iter().map(|s| s.1).fold(0.0, f64::max);
        self.samples
            .windows(3)
            .filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1 && w[1].1 < 0.05 * peak)
            .count()
    }
}

/// `|U(r)|` of each normalized state on `grid`.
pub fn figure_profiles(
    states: &[StateLabel],
    params: &PhysicalParams,
    grid: &[f64],
    mode: ExponentMode,
) -> Result<Vec<RadialProfile>, WavefunctionError> {
    if let Some(&r) = grid.iter().find(|&&r| !(r > 0.0)) {
        return Err(WavefunctionError::NonPositiveRadius(r));
    }
    states
        .iter()
        .map(|state| -> Result<RadialProfile, WavefunctionError> {
            let sol = RadialSolution::new(params, state, mode)?;
            let samples = grid
                .iter()
                .map(|&r| Ok((r, sol.hyperradial_u(r)?.abs())))
                .collect::<Result<Vec<_>, WavefunctionError>>()?;
            Ok(RadialProfile {
                state: *state,
                alpha: params.alpha(),
                samples,
            })
        })
        .collect()
}

/// `(D, ℓ)` plotted in figures 2 to 5.
pub fn figure_state(figure: u32) -> Option<(u32, u32)> {
    match figure {
        2 => Some((3, 1)),
        3 => Some((5, 1)),
        4 => Some((3, 2)),
        5 => Some((5, 2)),
        _ => None,
    }
}

/// Default α for a profile: 0.5 when the state is bound there, otherwise
/// 80% of its critical value.
pub fn figure_alpha(units: &Units, state: &StateLabel) -> Result<f64, WavefunctionError> {
    let preferred = 0.5;
    let at_preferred = reduce(&units.with_alpha(preferred)?, state);
    if at_preferred.is_bound() {
        return Ok(preferred);
    }
    let ac = critical_alpha(units, state.principal(), state.dim())
        .map_err(|_| WavefunctionError::Unbound(at_preferred.epsilon))?;
    Ok(0.8 * ac)
}

/// `count` points from `0.01/α` to `8/α`.
pub fn default_figure_grid(alpha: f64, count: usize) -> Vec<f64> {
    let (lo, hi) = (0.01 / alpha, 8.0 / alpha);
    let n = count.max(2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
