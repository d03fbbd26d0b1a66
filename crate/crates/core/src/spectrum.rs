//! Closed-form energy levels
//!
//! ```text
//! E = −(ħ²α²/8μ) [√(1+8μV₀/ħ²α²) − (4n_r + 2ℓ + D)]²
//! ```
//!
//! valid while the bracket is positive. With the principal number
//! `n = 2n_r + ℓ` the bracket depends on `(n, D)` only.

use crate::model::{reduce, ParamError, PhysicalParams, StateLabel, Units};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("no bound state: energy bracket is {bracket} (must be > 0)")]
    Unbound { bracket: f64 },
    #[error("critical alpha undefined for n = 0, D = 1: the level is bound for every alpha")]
    CriticalUndefined,
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub state: StateLabel,
    pub energy: f64,
    pub epsilon: f64,
}

/// `√(1+4δ) − (4n_r + 2ℓ + D)`, i.e. `2ε`; positive iff bound.
pub fn bracket(params: &PhysicalParams, state: &StateLabel) -> f64 {
    2.0 * reduce(params, state).epsilon
}

/// `√(1+4δ) − (2n + D)`.
pub fn principal_bracket(params: &PhysicalParams, n: u32, dim: u32) -> f64 {
    params.depth_root() - f64::from(2 * n + dim)
}

pub fn energy(params: &PhysicalParams, state: &StateLabel) -> Result<EnergyLevel, SpectrumError> {
    let eps = reduce(params, state).epsilon;
    if !(eps > 0.0) {
        return Err(SpectrumError::Unbound { bracket: 2.0 * eps });
    }
    Ok(EnergyLevel {
        state: *state,
        energy: -params.energy_scale() * eps * eps,
        epsilon: eps,
    })
}

pub fn energy_principal(params: &PhysicalParams, n: u32, dim: u32) -> Result<f64, SpectrumError> {
    let b = principal_bracket(params, n, dim);
    if !(b > 0.0) {
        return Err(SpectrumError::Unbound { bracket: b });
    }
    Ok(-0.25 * params.energy_scale() * b * b)
}

/// `−(ħ²α²/8μ)·B|B|`: the principal energy on the bound side, continued
/// with the opposite sign past threshold so that `α_c` is a sign change.
pub fn signed_energy_principal(params: &PhysicalParams, n: u32, dim: u32) -> f64 {
    let b = principal_bracket(params, n, dim);
    -0.25 * params.energy_scale() * b * b.abs()
}

/// `α_c = √(8μV₀ / (ħ²[(2n+D)² − 1]))`, where level `n` reaches zero energy.
pub fn critical_alpha(units: &Units, n: u32, dim: u32) -> Result<f64, SpectrumError> {
    let m = f64::from(2 * n + dim);
    let denom = m * m - 1.0;
    if denom == 0.0 {
        return Err(SpectrumError::CriticalUndefined);
    }
    let hbar = units.hbar();
    Ok((8.0 * units.mu() * units.v0() / (hbar * hbar * denom)).sqrt())
}

/// Number of bound `n_r` for the given `(D, ℓ)`.
pub fn count_bound_states(params: &PhysicalParams, dim: u32, ell: u32) -> Result<u32, SpectrumError> {
    let mut n_r = 0;
    while reduce(params, &StateLabel::new(dim, ell, n_r)?).is_bound() {
        n_r += 1;
    }
    Ok(n_r)
}

/// How the level index of a Figure-1 row is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Indexing {
    /// `n = 2n_r + ℓ`
    Principal,
    /// `n = n_r` at `ℓ = 0`
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure1Row {
    pub dim: u32,
    pub n: u32,
    pub alpha: f64,
    /// `None` marks an unbound cell.
    pub energy: Option<f64>,
}

/// `E(α)` for every `(D, n)` pair, in `D`-major, then `n`, then `α` order.
pub fn figure1_data(
    units: &Units,
    dims: &[u32],
    ns: &[u32],
    alphas: &[f64],
    indexing: Indexing,
) -> Result<Vec<Figure1Row>, SpectrumError> {
    let mut rows = Vec::with_capacity(dims.len() * ns.len() * alphas.len());
    for &dim in dims {
        for &n in ns {
            for &alpha in alphas {
                let params = units.with_alpha(alpha)?;
                let energy = match indexing {
                    Indexing::Principal => energy_principal(&params, n, dim).ok(),
                    Indexing::Radial => energy(&params, &StateLabel::new(dim, 0, n)?).ok().map(|l| l.energy),
                };
                rows.push(Figure1Row { dim, n, alpha, energy });
            }
        }
    }
    Ok(rows)
}
