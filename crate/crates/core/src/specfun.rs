//! Special functions used by the closed-form solution: log-gamma, beta,
//! Pochhammer symbols, terminating Gauss hypergeometric sums and Jacobi
//! polynomials.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("{func} requires a strictly positive argument, got {value}")]
    NonPositive { func: &'static str, value: f64 },
    #[error("2F1 lower parameter c = {c} hits a pole at term {term}")]
    HypergeometricPole { c: f64, term: u32 },
    #[error("Jacobi parameters must exceed -1, got a = {a}, b = {b}")]
    JacobiParams { a: f64, b: f64 },
}

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Stirling coefficients `B_{2k} / (2k(2k−1))`, k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this the argument is shifted up with `Γ(x+1) = xΓ(x)`.
const STIRLING_MIN: f64 = 15.0;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64, DomainError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(DomainError::NonPositive {
            func: "ln_gamma",
            value: x,
        });
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series * inv
}

/// `ln B(x, y)`.
pub fn ln_beta(x: f64, y: f64) -> Result<f64, DomainError> {
    if !(x > 0.0) || !(y > 0.0) {
        return Err(DomainError::NonPositive {
            func: "beta",
            value: if x > 0.0 { y } else { x },
        });
    }
    Ok(ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?)
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64, DomainError> {
    ln_beta(x, y).map(f64::exp)
}

/// Rising factorial `(a)_n = a(a+1)…(a+n−1)`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

/// `₂F₁(−n, b; c; z)`, an `n+1` term polynomial in `z`.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, z: f64) -> Result<f64, DomainError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = f64::from(k);
        if c + kf == 0.0 {
            return Err(DomainError::HypergeometricPole { c, term: k + 1 });
        }
        term *= (kf - f64::from(n)) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Degree and parameters of `P_n^{(a,b)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    a: f64,
    b: f64,
    n: u32,
}

impl JacobiParams {
    pub fn new(n: u32, a: f64, b: f64) -> Result<Self, DomainError> {
        if a > -1.0 && b > -1.0 {
            Ok(Self { a, b, n })
        } else {
            Err(DomainError::JacobiParams { a, b })
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `P_n^{(a,b)}(x)` by the three-term recurrence in `n`.
pub fn jacobi(params: &JacobiParams, x: f64) -> f64 {
    let JacobiParams { a, b, n } = *params;
    if n == 0 {
        return 1.0;
    }
    let ab = a + b;
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for m in 2..=n {
        let m = f64::from(m);
        let two_m_ab = 2.0 * m + ab;
        let c0 = 2.0 * m * (m + ab) * (two_m_ab - 2.0);
        let c1 = (two_m_ab - 1.0) * (two_m_ab * (two_m_ab - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * two_m_ab;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx P_n^{(a,b)}(x) = ½(n+a+b+1) P_{n−1}^{(a+1,b+1)}(x)`.
pub fn jacobi_derivative(params: &JacobiParams, x: f64) -> f64 {
    let JacobiParams { a, b, n } = *params;
    if n == 0 {
        return 0.0;
    }
    let lower = JacobiParams {
        a: a + 1.0,
        b: b + 1.0,
        n: n - 1,
    };
    0.5 * (f64::from(n) + a + b + 1.0) * jacobi(&lower, x)
}

/// `P_n^{(a,b)}(x)` through its terminating hypergeometric form
/// `(a+1)_n/n! · ₂F₁(−n, n+a+b+1; a+1; (1−x)/2)`.
pub fn jacobi_series(params: &JacobiParams, x: f64) -> f64 {
    let JacobiParams { a, b, n } = *params;
    let prefactor = pochhammer(a + 1.0, n) / pochhammer(1.0, n);
    // a > −1 keeps a+1+k away from zero
    prefactor
        * hyp2f1_terminating(n, f64::from(n) + a + b + 1.0, a + 1.0, 0.5 * (1.0 - x)).expect("a > -1 excludes poles")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn ln_gamma_special_values() {
        // the upward shift cancels two numbers near 25, so only absolute accuracy
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-13);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-13);
        assert_relative_eq!(
            ln_gamma(0.5).unwrap(),
            std::f64::consts::PI.sqrt().ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.5723649429247001, max_relative = 1e-14);
    }

    #[test]
    fn ln_gamma_by_product_recursion() {
        // Γ(7.25) = Γ(1.25)·1.25·2.25·…·6.25
        let gamma_125 = 0.906_402_477_055_477_077_982_671_288_966_918;
        let mut g = gamma_125;
        for i in 0..6 {
            g *= 1.25 + f64::from(i);
        }
        assert_relative_eq!(ln_gamma(7.25).unwrap(), g.ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(7.25).unwrap(), 7.052185450738539, max_relative = 1e-14);
    }

    #[test]
    fn ln_gamma_reference_table() {
        // 40-digit reference evaluations
        let table = [
            (1e-8, 18.420680738180208905),
            (0.1, 2.2527126517342059599),
            (2.5, 0.28468287047291915963),
            (15.0, 25.191221182738681500),
            (37.5, 97.521775222888204198),
            (171.3, 708.11494703899682429),
            (1e5, 1051287.7089736568949),
        ];
        for (x, want) in table {
            let got = ln_gamma(x).unwrap();
            // relative error of exp(ln Γ) is the absolute error of ln Γ
            assert!(
                (got - want).abs() < 1e-12 * want.abs().max(1.0),
                "x = {x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn ln_gamma_domain() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn beta_values() {
        assert_relative_eq!(beta(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(beta(2.0, 3.0).unwrap(), 1.0 / 12.0, max_relative = 1e-14);
        // ∫₀¹ t^0.5 (1−t)^0.3723 dt, high-precision quadrature
        assert_relative_eq!(beta(1.5, 1.3723).unwrap(), 0.44180772734265100930, max_relative = 1e-13);
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(2.5, 4), 216.5625);
        let via_gamma = (ln_gamma(6.5).unwrap() - ln_gamma(2.5).unwrap()).exp();
        assert_relative_eq!(pochhammer(2.5, 4), via_gamma, max_relative = 1e-13);
    }

    #[test]
    fn hyp2f1_values() {
        assert_eq!(hyp2f1_terminating(0, 3.3, 1.7, 0.9).unwrap(), 1.0);
        let (b, c, z) = (2.2, 1.4, 0.35);
        assert_relative_eq!(hyp2f1_terminating(1, b, c, z).unwrap(), 1.0 - b * z / c);
        // 1 + (−2)(3)/(2)·½ + (−2)(−1)(3)(4)/((2)(3)·2!)·¼ = 1 − 1.5 + 0.5
        assert!(hyp2f1_terminating(2, 3.0, 2.0, 0.5).unwrap().abs() < 1e-15);
        assert!(hyp2f1_terminating(3, 1.0, -1.0, 0.5).is_err());
        // pole beyond the last term is harmless
        assert!(hyp2f1_terminating(1, 1.0, -1.0, 0.5).is_ok());
    }

    #[test]
    fn jacobi_low_orders() {
        let p0 = JacobiParams::new(0, 0.3, 0.9).unwrap();
        assert_eq!(jacobi(&p0, 0.2), 1.0);
        let p1 = JacobiParams::new(1, 1.0, 2.0).unwrap();
        assert_relative_eq!(jacobi(&p1, 0.0), -0.5);
        assert_relative_eq!(jacobi_series(&p1, 0.0), -0.5);
        // Rodrigues form expanded by hand: P₁ = ½[(a−b) + (a+b+2)x]
        assert_relative_eq!(jacobi(&p1, 0.0), 0.5 * (1.0 - 2.0));
    }

    #[test]
    fn jacobi_reflection() {
        let p = JacobiParams::new(3, 0.5, 1.5).unwrap();
        let q = JacobiParams::new(3, 1.5, 0.5).unwrap();
        assert_relative_eq!(jacobi(&p, -0.3), -jacobi(&q, 0.3), max_relative = 1e-14);
        assert_relative_eq!(jacobi(&p, -0.3), 0.79975, max_relative = 1e-13);
        let p5 = JacobiParams::new(5, 0.25, -0.5).unwrap();
        assert_relative_eq!(jacobi(&p5, 0.6), -0.35839125, max_relative = 1e-12);
    }

    #[test]
    fn jacobi_derivative_matches_difference() {
        let p = JacobiParams::new(4, -0.5, 2.3).unwrap();
        let h = 1e-6;
        for &x in &[-0.8, -0.1, 0.4, 0.9] {
            let fd = (jacobi(&p, x + h) - jacobi(&p, x - h)) / (2.0 * h);
            assert_relative_eq!(jacobi_derivative(&p, x), fd, max_relative = 1e-7);
        }
    }

    #[test]
    fn jacobi_rejects_bad_params() {
        assert!(JacobiParams::new(2, -1.0, 0.0).is_err());
        assert!(JacobiParams::new(2, 0.0, -1.5).is_err());
    }

    #[test]
    fn jacobi_recurrence_matches_series_on_grid() {
        let params = [-0.9, -0.5, 0.0, 0.7, 2.0, 5.0];
        for n in 0..=10 {
            for &a in &params {
                for &b in &params {
                    let p = JacobiParams::new(n, a, b).unwrap();
                    for i in 0..=20 {
                        let x = -1.0 + 0.1 * f64::from(i);
                        let rec = jacobi(&p, x);
                        let ser = jacobi_series(&p, x);
                        // the series alternates; its absolute sum sets the attainable accuracy
                        let abs_sum = pochhammer(a + 1.0, n) / pochhammer(1.0, n)
                            * hyp2f1_terminating(n, f64::from(n) + a + b + 1.0, a + 1.0, -0.5 * (1.0 - x))
                                .unwrap()
                                .abs();
                        let scale = abs_sum.max(1.0);
                        assert!(
                            (rec - ser).abs() <= 1e-10 * scale,
                            "n={n} a={a} b={b} x={x}: {rec} vs {ser}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn beta_gamma_ratio_identity(x in 0.1f64..20.0, y in 0.1f64..20.0, z in 0.1f64..20.0) {
            let lhs = beta(x, y).unwrap() * beta(x + y, z).unwrap();
            let rhs = beta(y, z).unwrap() * beta(y + z, x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }

        #[test]
        fn beta_symmetric(x in 0.01f64..50.0, y in 0.01f64..50.0) {
            let (a, b) = (beta(x, y).unwrap(), beta(y, x).unwrap());
            prop_assert!((a - b).abs() <= 1e-14 * a.abs());
        }

        #[test]
        fn ln_gamma_recurrence(x in 1e-3f64..100.0) {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + x.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
