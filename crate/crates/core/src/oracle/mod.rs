//! Numerical references that never consult the closed forms.

pub mod numerov;
pub mod quadrature;

pub use numerov::{Centrifugal, EigenResult, Grid, OracleError, RadialOde};
pub use quadrature::{integrate_adaptive, integrate_half_line, integrate_unit, QuadError};
