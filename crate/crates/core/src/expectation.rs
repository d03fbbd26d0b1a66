//! Hellmann-Feynman expectation values and their quadrature counterparts.
//!
//! Differentiating the closed-form energy in `ℓ` gives `⟨α²/sinh²(αr)⟩`
//! exactly; it approximates `⟨r⁻²⟩` only up to `O(α²)`. Differentiating in
//! `V₀` gives `⟨V⟩`, and `⟨T⟩ = E − ⟨V⟩`.
//!
//! Quadratures run in `s = tanh²(αr)` against the normalized corrected
//! wavefunction, with `dr = ds / (2α√s(1−s))`.

use crate::model::{reduce, PhysicalParams, StateLabel};
use crate::oracle::quadrature::{integrate_unit, QuadError};
use crate::spectrum::{energy, SpectrumError};
use crate::wavefunction::{ExponentMode, RadialSolution, WavefunctionError};
use serde::Serialize;
use thiserror::Error;

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpectationError {
    #[error("no bound state: energy bracket is {0}")]
    Unbound(f64),
    #[error("Hellmann-Feynman form inapplicable: 2l + D - 2 = {0} is not positive")]
    Inapplicable(i64),
    #[error("expectation diverges at r = 0 for k = 2l + D = {0}")]
    Divergent(u32),
    #[error(transparent)]
    Wavefunction(#[from] WavefunctionError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

impl From<SpectrumError> for ExpectationError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Unbound { bracket } => ExpectationError::Unbound(bracket),
            SpectrumError::Param(p) => ExpectationError::Wavefunction(p.into()),
            SpectrumError::CriticalUndefined => unreachable!("not produced by energy()"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `r⁻²`
    InvR2,
    /// `α²/sinh²(αr)`
    SinhCentrifugal,
    /// `−V₀/cosh²(αr)`
    Potential,
    /// `(ħ²/2μ)(−d²/dr² + γα²/sinh²(αr))`
    Kinetic,
}

fn bound_bracket(params: &PhysicalParams, state: &StateLabel) -> Result<f64, ExpectationError> {
    let eps = reduce(params, state).epsilon;
    if !(eps > 0.0) {
        return Err(ExpectationError::Unbound(2.0 * eps));
    }
    Ok(2.0 * eps)
}

/// `α²B / (2ℓ+D−2)`.
pub fn inv_r2_hft(params: &PhysicalParams, state: &StateLabel) -> Result<f64, ExpectationError> {
    let divisor = i64::from(state.k()) - 2;
    if divisor <= 0 {
        return Err(ExpectationError::Inapplicable(divisor));
    }
    let b = bound_bracket(params, state)?;
    let a = params.alpha();
    Ok(a * a * b / divisor as f64)
}

/// `−V₀ B / √(1+8μV₀/ħ²α²)`.
pub fn potential_hft(params: &PhysicalParams, state: &StateLabel) -> Result<f64, ExpectationError> {
    let b = bound_bracket(params, state)?;
    Ok(-params.v0() * b / params.depth_root())
}

/// `E − ⟨V⟩`.
pub fn kinetic(params: &PhysicalParams, state: &StateLabel) -> Result<f64, ExpectationError> {
    let e = energy(params, state)?.energy;
    Ok(e - potential_hft(params, state)?)
}

/// `αr` from `(s, 1−s)` without cancellation near either end.
fn alpha_r(s: f64, u: f64) -> f64 {
    let rs = s.sqrt();
    0.5 * (2.0 * rs * (1.0 + rs) / u).ln_1p()
}

/// `∫₀^∞ f |R|² dr` for the normalized corrected wavefunction.
pub fn expectation_quadrature(
    params: &PhysicalParams,
    state: &StateLabel,
    observable: Observable,
) -> Result<f64, ExpectationError> {
    let sol = RadialSolution::new(params, state, ExponentMode::Corrected)?;
    let k = state.k();
    if matches!(observable, Observable::InvR2 | Observable::SinhCentrifugal) && k <= 2 {
        return Err(ExpectationError::Divergent(k));
    }
    let alpha = params.alpha();
    let jac = |s: f64, u: f64| 1.0 / (2.0 * alpha * s.sqrt() * u);
    let value = match observable {
        Observable::InvR2 => integrate_unit(
            |s, u| {
                if s == 0.0 || u == 0.0 {
                    return 0.0;
                }
                let r = alpha_r(s, u) / alpha;
                let f = sol.eval_su(s, u);
                f * f / (r * r) * jac(s, u)
            },
            QUAD_TOL,
        )?,
        Observable::SinhCentrifugal => integrate_unit(
            |s, u| {
                if s == 0.0 || u == 0.0 {
                    return 0.0;
                }
                let f = sol.eval_su(s, u);
                alpha * alpha * u / s * f * f * jac(s, u)
            },
            QUAD_TOL,
        )?,
        Observable::Potential => {
            let v0 = params.v0();
            integrate_unit(
                |s, u| {
                    if s == 0.0 || u == 0.0 {
                        return 0.0;
                    }
                    let f = sol.eval_su(s, u);
                    -v0 * u * f * f * jac(s, u)
                },
                QUAD_TOL,
            )?
        }
        Observable::Kinetic => {
            let gamma = sol.reduced.gamma;
            let integral = integrate_unit(
                |s, u| {
                    if s == 0.0 || u == 0.0 {
                        return 0.0;
                    }
                    let f = sol.eval_su(s, u);
                    let df = sol.ds_su(s, u);
                    let centrifugal = if gamma == 0.0 {
                        0.0
                    } else {
                        gamma * alpha * f * f / (2.0 * s * s.sqrt())
                    };
                    df * df * 2.0 * alpha * s.sqrt() * u + centrifugal
                },
                QUAD_TOL,
            )?;
            // −∫R R'' = ∫R'² + R R'(0⁺); nonzero only for R ~ √r, where
            // a = v − ½ = 0 makes P(1) = 1 and R R'(0⁺) = C²α/2
            let boundary = if k == 2 {
                0.5 * sol.norm_constant.powi(2) * alpha
            } else {
                0.0
            };
            params.hbar().powi(2) / (2.0 * params.mu()) * (integral + boundary)
        }
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub state: StateLabel,
    pub energy: f64,
    /// `None` when `2ℓ+D−2 ≤ 0`.
    pub inv_r2_hft: Option<f64>,
    pub potential_hft: f64,
    pub kinetic: f64,
    /// `None` when `⟨r⁻²⟩` diverges.
    pub inv_r2_quadrature: Option<f64>,
    pub sinh_centrifugal_quadrature: Option<f64>,
    pub potential_quadrature: f64,
    pub kinetic_quadrature: f64,
}

pub fn report(params: &PhysicalParams, state: &StateLabel) -> Result<ExpectationReport, ExpectationError> {
    let e = energy(params, state)?.energy;
    let optional = |r: Result<f64, ExpectationError>| match r {
        Ok(v) => Ok(Some(v)),
        Err(ExpectationError::Inapplicable(_) | ExpectationError::Divergent(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(ExpectationReport {
        state: *state,
        energy: e,
        inv_r2_hft: optional(inv_r2_hft(params, state))?,
        potential_hft: potential_hft(params, state)?,
        kinetic: kinetic(params, state)?,
        inv_r2_quadrature: optional(expectation_quadrature(params, state, Observable::InvR2))?,
        sinh_centrifugal_quadrature: optional(expectation_quadrature(params, state, Observable::SinhCentrifugal))?,
        potential_quadrature: expectation_quadrature(params, state, Observable::Potential)?,
        kinetic_quadrature: expectation_quadrature(params, state, Observable::Kinetic)?,
    })
}
