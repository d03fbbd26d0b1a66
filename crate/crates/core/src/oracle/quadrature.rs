//! Composite Gauss-Legendre quadrature with dyadic refinement toward the
//! endpoints.
//!
//! Each half of the interval is cut into panels `[w/2^{j+1}, w/2^j]` measured
//! from its endpoint. Integrable power-law singularities make the panel
//! contributions decay geometrically; the remaining tail below the finest
//! panel is added by extrapolating that geometric ratio. Every panel is
//! itself integrated adaptively by bisection.
//!
//! Integrands are evaluated through the distance from the endpoint so that
//! factors like `(1−s)^{ε−1}` stay accurate as `s → 1`.

use std::sync::OnceLock;
use thiserror::Error;

/// Points of the per-panel Gauss-Legendre rule.
const GL_ORDER: usize = 20;
/// Dyadic levels per endpoint before giving up.
pub const MAX_LEVELS: u32 = 60;
const MAX_BISECTIONS: u32 = 40;
const MIN_LEVELS: u32 = 6;

pub const DEFAULT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature tolerance not met after {levels} refinement levels (best estimate {estimate})")]
    ToleranceNotMet { estimate: f64, levels: u32 },
    #[error("integrand is not finite at x = {0}")]
    NotFinite(f64),
    #[error("invalid interval [{0}, {1}]")]
    BadInterval(f64, f64),
}

struct Rule {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64, QuadError> {
    let r = rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
        let t = mid + half * x;
        let v = f(t);
        if !v.is_finite() {
            return Err(QuadError::NotFinite(t));
        }
        sum += w * v;
    }
    Ok(sum * half)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, abs_tol: f64, depth: u32) -> Result<f64, QuadError> {
    let mid = 0.5 * (a + b);
    let left = gauss(f, a, mid)?;
    let right = gauss(f, mid, b)?;
    let split = left + right;
    if (split - whole).abs() <= abs_tol || depth >= MAX_BISECTIONS || mid <= a || mid >= b {
        return Ok(split);
    }
    Ok(panel(f, a, mid, left, 0.5 * abs_tol, depth + 1)? + panel(f, mid, b, right, 0.5 * abs_tol, depth + 1)?)
}

fn adaptive_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64, QuadError> {
    let whole = gauss(f, a, b)?;
    panel(f, a, b, whole, abs_tol, 0)
}

/// Integrate `g(t)` over `(0, width]` with dyadic refinement toward `t = 0`.
fn sweep<F: Fn(f64) -> f64>(g: &F, width: f64, abs_tol: f64) -> Result<f64, QuadError> {
    let mut partial = 0.0;
    let mut prev_contrib: Option<f64> = None;
    let mut prev_estimate: Option<f64> = None;
    let mut stable_levels = 0;
    let mut hi = width;
    for level in 0..MAX_LEVELS {
        let lo = 0.5 * hi;
        let contrib = adaptive_panel(g, lo, hi, abs_tol / 64.0)?;
        partial += contrib;
        let tail = match prev_contrib {
            Some(p) if p != 0.0 => {
                let q = contrib / p;
                if q > 0.0 && q < 0.99 {
                    contrib * q / (1.0 - q)
                } else {
                    0.0
                }
            }
            _ => 0.0,
        };
        let estimate = partial + tail;
        match prev_estimate {
            Some(prev) if (estimate - prev).abs() <= abs_tol => stable_levels += 1,
            _ => stable_levels = 0,
        }
        if level + 1 >= MIN_LEVELS && stable_levels >= 2 {
            return Ok(estimate);
        }
        prev_contrib = Some(contrib);
        prev_estimate = Some(estimate);
        hi = lo;
    }
    Err(QuadError::ToleranceNotMet {
        estimate: prev_estimate.unwrap_or(partial),
        levels: MAX_LEVELS,
    })
}

/// `∫₀^h left(t) dt + ∫₀^h right(t) dt`, refining toward `t = 0` in both.
///
/// The caller maps `left(t) = f(a + t)` and `right(t) = f(b − t)`.
pub fn integrate_split<L, R>(left: L, right: R, half_width: f64, rel_tol: f64) -> Result<f64, QuadError>
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(QuadError::BadInterval(0.0, half_width));
    }
    // magnitude scale from a coarse pass over ∫|f|
    let abs_left = |t: f64| left(t).abs();
    let abs_right = |t: f64| right(t).abs();
    let mut scale = 0.0;
    let mut hi = half_width;
    for _ in 0..8 {
        scale += gauss(&abs_left, 0.5 * hi, hi)? + gauss(&abs_right, 0.5 * hi, hi)?;
        hi *= 0.5;
    }
    if scale == 0.0 {
        scale = f64::MIN_POSITIVE;
    }
    let abs_tol = 0.25 * rel_tol * scale;
    let l = sweep(&left, half_width, abs_tol)?;
    let r = sweep(&right, half_width, abs_tol)?;
    Ok(l + r)
}

/// `∫_a^b f(x) dx` for `f` with at worst integrable power-law endpoint
/// singularities.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64, QuadError> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::BadInterval(a, b));
    }
    let h = 0.5 * (b - a);
    integrate_split(|t| f(a + t), |t| f(b - t), h, rel_tol)
}

/// `∫₀¹ g(s, 1−s) ds` with both `s` and `1−s` supplied exactly.
pub fn integrate_unit<G: Fn(f64, f64) -> f64>(g: G, rel_tol: f64) -> Result<f64, QuadError> {
    integrate_split(|t| g(t, 1.0 - t), |t| g(1.0 - t, t), 0.5, rel_tol)
}

/// `∫_a^∞ f(x) dx` through `x = a + L·t/(1−t)`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, a: f64, length: f64, rel_tol: f64) -> Result<f64, QuadError> {
    if !a.is_finite() || !(length > 0.0) {
        return Err(QuadError::BadInterval(a, length));
    }
    let mapped = |t: f64, u: f64| {
        // t + u = 1, u = 1 − t
        let v = f(a + length * t / u);
        if v == 0.0 {
            0.0
        } else {
            v * length / (u * u)
        }
    };
    integrate_split(|t| mapped(t, 1.0 - t), |u| mapped(1.0 - u, u), 0.5, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let v = gauss(&|x: f64| x.powi(39) + 3.0 * x.powi(10), -1.0, 1.0).unwrap();
        assert_relative_eq!(v, 6.0 / 11.0, max_relative = 1e-14);
        let w: f64 = rule().weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let v = integrate_adaptive(|s: f64| 1.0 / s.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-11);
    }

    #[test]
    fn strong_endpoint_singularity() {
        // ∫₀¹ s^{-0.9} ds = 10
        let v = integrate_adaptive(|s: f64| s.powf(-0.9), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 10.0, max_relative = 1e-10);
    }

    #[test]
    fn beta_integrand_both_ends() {
        // B(1.5, 1.3723) reference
        let v = integrate_unit(|s, t| s.sqrt() * t.powf(0.3723), 1e-12).unwrap();
        assert_relative_eq!(v, 0.44180772734265100930, max_relative = 1e-11);
        // B(0.5, 0.18): exponents −½ and −0.82
        let v = integrate_unit(|s, t| s.powf(-0.5) * t.powf(-0.82), 1e-12).unwrap();
        let want = crate::specfun::beta(0.5, 0.18).unwrap();
        assert_relative_eq!(v, want, max_relative = 1e-10);
    }

    #[test]
    fn half_line_exponential() {
        let v = integrate_half_line(|r: f64| (-2.0 * r).exp(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-11);
        let v = integrate_half_line(|r: f64| (-0.05 * r).exp(), 3.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 20.0 * (-0.15f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate_adaptive(|x: f64| (40.0 * x).cos(), 0.0, 3.0, 1e-12).unwrap();
        assert_relative_eq!(v, (120.0f64).sin() / 40.0, max_relative = 1e-9);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        assert!(matches!(
            integrate_adaptive(|x: f64| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1e-10),
            Err(QuadError::NotFinite(_))
        ));
        assert!(integrate_adaptive(|x: f64| x, 1.0, 0.0, 1e-10).is_err());
    }

    #[test]
    fn non_integrable_singularity_fails() {
        // ∫₀¹ 1/s diverges: contributions never shrink
        assert!(matches!(
            integrate_adaptive(|s: f64| 1.0 / s, 0.0, 1.0, 1e-10),
            Err(QuadError::ToleranceNotMet { .. })
        ));
    }
}
