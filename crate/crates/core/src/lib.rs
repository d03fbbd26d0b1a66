//! Bound states of the D-dimensional modified Pöschl-Teller well
//! `V(r) = −V₀/cosh²(αr)`.
//!
//! Closed forms for the spectrum, wavefunctions and expectation values live
//! in [`spectrum`], [`wavefunction`] and [`expectation`]. The [`oracle`]
//! module holds independent numerical solvers used to check them.

pub mod expectation;
pub mod model;
pub mod nu_core;
pub mod oracle;
pub mod specfun;
pub mod spectrum;
pub mod validation;
pub mod wavefunction;
