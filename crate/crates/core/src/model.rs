//! Physical parameters, quantum-number labels, the potential and the
//! reduction of the hyperradial equation to dimensionless form.
//!
//! The hyperradial equation for `R(r)` reads
//!
//! ```text
//! R'' + [ (2μ/ħ²)(E + V₀/cosh²(αr)) − (k−1)(k−3)/(4r²) ] R = 0,   k = D + 2ℓ
//! ```
//!
//! and after replacing `1/r²` by `α²/sinh²(αr)` and changing variable to
//! `s = tanh²(αr)` everything depends on the dimensionless numbers collected
//! in [`ReducedParams`].

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be finite and strictly positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("spatial dimension must be at least 1")]
    ZeroDimension,
    #[error("radius must be strictly positive, got {0}")]
    NonPositiveRadius(f64),
}

fn positive(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

/// Unit system and well depth: everything except the range parameter α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Units {
    v0: f64,
    mu: f64,
    hbar: f64,
}

impl Units {
    pub fn new(v0: f64, mu: f64, hbar: f64) -> Result<Self, ParamError> {
        Ok(Self {
            v0: positive("V0", v0)?,
            mu: positive("mu", mu)?,
            hbar: positive("hbar", hbar)?,
        })
    }

    /// `V₀ = μ = ħ = 1`.
    pub fn natural() -> Self {
        Self {
            v0: 1.0,
            mu: 1.0,
            hbar: 1.0,
        }
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_alpha(self, alpha: f64) -> Result<PhysicalParams, ParamError> {
        Ok(PhysicalParams {
            units: self,
            alpha: positive("alpha", alpha)?,
        })
    }
}

impl Default for Units {
    fn default() -> Self {
        Self::natural()
    }
}

/// Potential depth `V₀`, range `α`, reduced mass `μ` and `ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    #[serde(flatten)]
    units: Units,
    alpha: f64,
}

impl PhysicalParams {
    pub fn new(v0: f64, alpha: f64, mu: f64, hbar: f64) -> Result<Self, ParamError> {
        Units::new(v0, mu, hbar)?.with_alpha(alpha)
    }

    /// Natural units with the given α.
    pub fn natural(alpha: f64) -> Result<Self, ParamError> {
        Units::natural().with_alpha(alpha)
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn v0(&self) -> f64 {
        self.units.v0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu(&self) -> f64 {
        self.units.mu
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    /// `δ = 2μV₀/(ħ²α²)`.
    pub fn delta(&self) -> f64 {
        2.0 * self.mu() * self.v0() / (self.hbar() * self.hbar() * self.alpha * self.alpha)
    }

    /// `ħ²α²/(2μ)`, so that `E = −energy_scale·ε²`.
    pub fn energy_scale(&self) -> f64 {
        self.hbar() * self.hbar() * self.alpha * self.alpha / (2.0 * self.mu())
    }

    /// `√(1 + 8μV₀/(ħ²α²)) = √(1 + 4δ)`.
    pub fn depth_root(&self) -> f64 {
        (1.0 + 4.0 * self.delta()).sqrt()
    }
}

/// Quantum numbers `(D, ℓ, n_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateLabel {
    dim: u32,
    ell: u32,
    n_r: u32,
}

impl StateLabel {
    pub fn new(dim: u32, ell: u32, n_r: u32) -> Result<Self, ParamError> {
        if dim == 0 {
            return Err(ParamError::ZeroDimension);
        }
        Ok(Self { dim, ell, n_r })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    /// Principal quantum number `n = 2n_r + ℓ`.
    pub fn principal(&self) -> u32 {
        2 * self.n_r + self.ell
    }

    /// `k = D + 2ℓ`.
    pub fn k(&self) -> u32 {
        self.dim + 2 * self.ell
    }
}

/// Dimensionless quantities of the reduced hyperradial equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedParams {
    pub k: u32,
    /// Hyperangular separation constant `ℓ(ℓ+D−2)`.
    pub beta: f64,
    /// `(k−1)(k−3)/4`.
    pub gamma: f64,
    pub delta: f64,
    /// `(k−1)/2`.
    pub v: f64,
    pub epsilon: f64,
}

impl ReducedParams {
    /// `(k−1)(k−3)` as an exact integer; `1 + 4γ = (k−2)²`.
    pub fn four_gamma(&self) -> i64 {
        let k = i64::from(self.k);
        (k - 1) * (k - 3)
    }

    /// `√(1+4γ) = |k−2|`.
    pub fn sqrt_one_plus_four_gamma(&self) -> f64 {
        (f64::from(self.k) - 2.0).abs()
    }

    /// The positive root of the quantization quadratic taken with `√(1+4γ)`
    /// literally. Differs from [`ReducedParams::epsilon`] only at `k = 1`,
    /// where it selects the odd (node-at-origin) branch.
    pub fn epsilon_unsigned_root(&self, n_r: u32) -> f64 {
        0.5 * ((1.0 + 4.0 * self.delta).sqrt() - 2.0 * (2.0 * f64::from(n_r) + 1.0) - self.sqrt_one_plus_four_gamma())
    }

    /// Bound (normalizable) iff `ε > 0`; threshold `ε = 0` is unbound.
    pub fn is_bound(&self) -> bool {
        self.epsilon > 0.0
    }
}

/// Reduce `(params, state)` to the dimensionless quantities.
///
/// `ε = ½[√(1+4δ) − 2(2n_r+1) − (k−2)]`, which is the energy bracket of the
/// closed-form spectrum divided by two. For `k ≥ 2` this is the positive
/// root with `√(1+4γ) = k−2`; at `k = 1` the regular solution at the origin
/// is the even one and the signed `k−2 = −1` must be used.
pub fn reduce(params: &PhysicalParams, state: &StateLabel) -> ReducedParams {
    let k = state.k();
    let kf = f64::from(k);
    let d = f64::from(state.dim());
    let l = f64::from(state.ell());
    let delta = params.delta();
    let epsilon = 0.5 * ((1.0 + 4.0 * delta).sqrt() - 2.0 * (2.0 * f64::from(state.n_r()) + 1.0) - (kf - 2.0));
    ReducedParams {
        k,
        beta: l * (l + d - 2.0),
        gamma: ((kf - 1.0) * (kf - 3.0)) / 4.0,
        delta,
        v: (kf - 1.0) / 2.0,
        epsilon,
    }
}

/// `V(r) = −V₀/cosh²(αr)`.
pub fn potential_value(params: &PhysicalParams, r: f64) -> f64 {
    let c = (params.alpha() * r).cosh();
    -params.v0() / (c * c)
}

/// The centrifugal factor `1/r²` and its short-range replacement
/// `α²/sinh²(αr)`, returned as `(exact, approx)`.
pub fn centrifugal_pair(params: &PhysicalParams, r: f64) -> Result<(f64, f64), ParamError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(ParamError::NonPositiveRadius(r));
    }
    let a = params.alpha();
    let sh = (a * r).sinh();
    Ok((1.0 / (r * r), a * a / (sh * sh)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn reduce_threshold_state() {
        let p = PhysicalParams::natural(1.0).unwrap();
        let red = reduce(&p, &StateLabel::new(3, 0, 0).unwrap());
        assert_eq!(red.k, 3);
        assert_eq!(red.gamma, 0.0);
        assert_eq!(red.delta, 2.0);
        assert_eq!(red.v, 1.0);
        assert_eq!(red.epsilon, 0.0);
        assert!(!red.is_bound());
    }

    #[test]
    fn reduce_one_dimensional_ground_state() {
        let p = PhysicalParams::natural(1.0).unwrap();
        let red = reduce(&p, &StateLabel::new(1, 0, 0).unwrap());
        assert_eq!(red.k, 1);
        assert_eq!(red.gamma, 0.0);
        assert_eq!(red.delta, 2.0);
        assert_eq!(red.v, 0.0);
        assert_eq!(red.epsilon, 1.0);
        // the literal |k−2| root lands on the odd threshold state instead
        assert_eq!(red.epsilon_unsigned_root(0), 0.0);
    }

    #[test]
    fn reduce_half_range() {
        let p = PhysicalParams::natural(0.5).unwrap();
        let red = reduce(&p, &StateLabel::new(3, 0, 0).unwrap());
        assert_eq!(red.delta, 8.0);
        assert_relative_eq!(red.epsilon, (-3.0 + 33f64.sqrt()) / 2.0, max_relative = 1e-15);
        assert_relative_eq!(red.epsilon, 1.372281323, epsilon = 1e-9);
    }

    #[test]
    fn potential_examples() {
        let p = PhysicalParams::natural(1.0).unwrap();
        assert_eq!(potential_value(&p, 0.0), -1.0);
        assert!(potential_value(&p, 400.0).abs() < 1e-300);
        assert!(potential_value(&p, 40.0) < 0.0);
        let p = PhysicalParams::natural(0.5).unwrap();
        let x: f64 = 1.0;
        let cosh = (x.exp() + (-x).exp()) / 2.0;
        assert_relative_eq!(potential_value(&p, 2.0), -1.0 / (cosh * cosh), max_relative = 1e-14);
        assert_relative_eq!(potential_value(&p, 2.0), -0.419974341614, epsilon = 1e-11);
    }

    #[test]
    fn centrifugal_examples() {
        let p = PhysicalParams::natural(0.1).unwrap();
        let (exact, approx) = centrifugal_pair(&p, 0.5).unwrap();
        assert_eq!(exact, 4.0);
        // sinh x ≈ x + x³/6 gives a relative deficit ≈ x²/3
        assert_relative_eq!(approx, 4.0 * (1.0 - 0.05f64.powi(2) / 3.0), max_relative = 1e-6);
        assert_relative_eq!(1.0 - approx / exact, 8.33e-4, max_relative = 1e-3);

        let p = PhysicalParams::natural(1.0).unwrap();
        let (exact, approx) = centrifugal_pair(&p, 3.0).unwrap();
        assert_relative_eq!(exact, 1.0 / 9.0);
        let sh = (3f64.exp() - (-3f64).exp()) / 2.0;
        assert_relative_eq!(approx, 1.0 / (sh * sh), max_relative = 1e-14);
        assert!(approx < 0.1 * exact);

        let (exact, approx) = centrifugal_pair(&p, 1e-6).unwrap();
        assert_relative_eq!(approx / exact, 1.0, epsilon = 1e-11);
        assert!(centrifugal_pair(&p, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(StateLabel::new(0, 0, 0).is_err());
    }

    #[test]
    fn principal_number() {
        let s = StateLabel::new(3, 2, 1).unwrap();
        assert_eq!(s.principal(), 4);
        assert_eq!(s.k(), 7);
    }

    proptest! {
        #[test]
        fn one_plus_four_gamma_is_square(dim in 1u32..40, ell in 0u32..40) {
            let p = PhysicalParams::natural(0.3).unwrap();
            let red = reduce(&p, &StateLabel::new(dim, ell, 0).unwrap());
            let km2 = i64::from(red.k) - 2;
            prop_assert_eq!(1 + red.four_gamma(), km2 * km2);
            prop_assert_eq!(1.0 + 4.0 * red.gamma, (km2 * km2) as f64);
        }

        #[test]
        fn approx_centrifugal_below_exact(alpha in 1e-3f64..10.0, r in 1e-3f64..50.0) {
            let p = PhysicalParams::natural(alpha).unwrap();
            let (exact, approx) = centrifugal_pair(&p, r).unwrap();
            prop_assert!(approx < exact);
        }

        #[test]
        fn delta_invariant_under_rescaling(scale in 0.1f64..10.0, alpha in 0.05f64..3.0) {
            let a = PhysicalParams::new(1.0, alpha, 1.0, 1.0).unwrap();
            // ħ → sħ, μ → s²μ leaves 2μV₀/(ħ²α²) fixed
            let b = PhysicalParams::new(1.0, alpha, scale * scale, scale).unwrap();
            let state = StateLabel::new(3, 1, 0).unwrap();
            let (ra, rb) = (reduce(&a, &state), reduce(&b, &state));
            prop_assert!((ra.delta - rb.delta).abs() <= 1e-12 * ra.delta);
            prop_assert_eq!(ra.gamma, rb.gamma);
            prop_assert_eq!(ra.v, rb.v);
        }
    }
}
