//! The validation suite: closed forms against the Numerov oracle, the
//! quadrature engine and the NU engine.
//!
//! Every check records the worst measured value and the bound it must
//! satisfy. Reports contain no timings, so serializing the same run twice
//! gives identical bytes.

use crate::expectation::{self, Observable};
use crate::model::{ParamError, PhysicalParams, StateLabel, Units};
use crate::nu_core::{self, Branch};
use crate::oracle::numerov::{self, Centrifugal, RadialOde};
use crate::spectrum::{self, Indexing};
use crate::wavefunction::{self, ExponentMode, RadialSolution};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn at_most(criterion: u32, name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            criterion,
            name: name.to_owned(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail,
        }
    }

    fn at_least(criterion: u32, name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            passed: measured >= tolerance,
            ..Self::at_most(criterion, name, measured, tolerance, detail)
        }
    }

    fn failed(criterion: u32, name: &str, tolerance: f64, detail: String) -> Self {
        Self {
            criterion,
            name: name.to_owned(),
            measured: f64::NAN,
            tolerance,
            passed: false,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ValidationConfig {
    pub quick: bool,
    /// Exponent mode used where the corrected wavefunction is expected.
    pub mode: ExponentMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ValidationConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const FIXTURE_DIMS: [u32; 4] = [1, 2, 3, 5];
pub const FIXTURE_ELLS: [u32; 3] = [0, 1, 2];
pub const FIXTURE_ALPHAS: [f64; 2] = [0.25, 0.5];

fn natural(alpha: f64) -> PhysicalParams {
    PhysicalParams::natural(alpha).expect("positive alpha")
}

fn label(d: u32, l: u32, n: u32) -> StateLabel {
    StateLabel::new(d, l, n).expect("positive dimension")
}

/// Bound `(params, state)` over the fixture grid with the given `n_r`.
pub fn fixture_states(n_rs: &[u32]) -> Vec<(PhysicalParams, StateLabel)> {
    let mut out = Vec::new();
    for &alpha in &FIXTURE_ALPHAS {
        let p = natural(alpha);
        for &d in &FIXTURE_DIMS {
            for &l in &FIXTURE_ELLS {
                for &n in n_rs {
                    let s = label(d, l, n);
                    if spectrum::energy(&p, &s).is_ok() {
                        out.push((p, s));
                    }
                }
            }
        }
    }
    out
}

fn describe(p: &PhysicalParams, s: &StateLabel) -> String {
    format!("alpha={} D={} l={} n_r={}", p.alpha(), s.dim(), s.ell(), s.n_r())
}

/// Worst `(value, where)` over `items`, or the first error.
fn worst<T, F>(items: &[T], f: F) -> Result<(f64, String), String>
where
    T: Sync,
    F: Fn(&T) -> Result<(f64, String), String> + Sync,
{
    let results: Vec<Result<(f64, String), String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items.iter().map(|it| scope.spawn(|| f(it))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    let mut best = (f64::NEG_INFINITY, String::new());
    for r in results {
        let (v, at) = r?;
        if v > best.0 || v.is_nan() {
            best = (v, at);
        }
    }
    Ok(best)
}

fn from_worst(criterion: u32, name: &str, tolerance: f64, r: Result<(f64, String), String>) -> Check {
    match r {
        Ok((v, at)) => Check::at_most(criterion, name, v, tolerance, format!("worst at {at}")),
        Err(e) => Check::failed(criterion, name, tolerance, e),
    }
}

fn oracle_energy(mode: Centrifugal, p: &PhysicalParams, s: &StateLabel) -> Result<f64, String> {
    let ode = RadialOde::new(mode, *p, s.dim(), s.ell());
    numerov::find_eigenvalue(&ode, s.n_r())
        .map(|r| r.energy)
        .map_err(|e| format!("{}: {e}", describe(p, s)))
}

fn closed_energy(p: &PhysicalParams, s: &StateLabel) -> Result<f64, String> {
    spectrum::energy(p, s).map(|l| l.energy).map_err(|e| e.to_string())
}

pub fn criterion1(quick: bool) -> Check {
    let mut states = fixture_states(&[0, 1]);
    if quick {
        states.retain(|(p, s)| p.alpha() == 0.5 && s.n_r() == 0);
    }
    let r = worst(&states, |(p, s)| {
        let diff = (closed_energy(p, s)? - oracle_energy(Centrifugal::Approx, p, s)?).abs();
        Ok((diff, describe(p, s)))
    });
    let mut c = from_worst(1, "closed-form energy vs Numerov (approximated equation)", 1e-6, r);
    c.detail = format!("{} bound fixture states; {}", states.len(), c.detail);
    c
}

pub fn criterion2() -> Check {
    let (p, s) = (natural(1.0), label(1, 0, 0));
    let r = closed_energy(&p, &s).and_then(|e| Ok((e, oracle_energy(Centrifugal::Approx, &p, &s)?)));
    match r {
        Ok((cf, or)) => Check::at_most(
            2,
            "D=1 ground state at alpha=1 is -1/2",
            (cf + 0.5).abs().max((or + 0.5).abs()),
            1e-6,
            format!("closed form {cf}, Numerov {or}"),
        ),
        Err(e) => Check::failed(2, "D=1 ground state at alpha=1 is -1/2", 1e-6, e),
    }
}

pub fn criterion3() -> Check {
    let name = "approximation error shrinks: gap(0.2)/gap(0.4)";
    let s = label(3, 1, 0);
    let gap = |a: f64| -> Result<f64, String> {
        let p = natural(a);
        Ok((closed_energy(&p, &s)? - oracle_energy(Centrifugal::Exact, &p, &s)?).abs())
    };
    let r = std::thread::scope(|scope| {
        let h2 = scope.spawn(|| gap(0.2));
        let h4 = scope.spawn(|| gap(0.4));
        (h2.join().expect("thread"), h4.join().expect("thread"))
    });
    match r {
        (Ok(g2), Ok(g4)) => Check {
            passed: g2 < 0.35 * g4,
            ..Check::at_most(
                3,
                name,
                g2 / g4,
                0.35,
                format!("|dE| = {g2} at alpha=0.2, {g4} at alpha=0.4"),
            )
        },
        (Err(e), _) | (_, Err(e)) => Check::failed(3, name, 0.35, e),
    }
}

/// Root of the signed principal energy in `α` by bisection.
pub fn bisect_critical_alpha(units: &Units, n: u32, dim: u32) -> Result<f64, ParamError> {
    let f =
        |a: f64| -> Result<f64, ParamError> { Ok(spectrum::signed_energy_principal(&units.with_alpha(a)?, n, dim)) };
    let (mut lo, mut hi) = (1e-6, 1.0);
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn criterion4() -> Vec<Check> {
    let u = Units::natural();
    let mut worst_diff: f64 = 0.0;
    let mut detail = Vec::new();
    for (n, d) in [(0, 3), (1, 3), (0, 5)] {
        let closed = spectrum::critical_alpha(&u, n, d).expect("defined for D > 1");
        let root = bisect_critical_alpha(&u, n, d).expect("valid alpha");
        worst_diff = worst_diff.max((root - closed).abs());
        detail.push(format!("(n={n}, D={d}): {closed}"));
    }
    let bisect = Check::at_most(
        4,
        "critical alpha: bisection vs closed form",
        worst_diff,
        1e-10,
        detail.join("; "),
    );

    let name = "D=1 ground state: no critical alpha, bound at alpha=10";
    let undefined = matches!(
        spectrum::critical_alpha(&u, 0, 1),
        Err(spectrum::SpectrumError::CriticalUndefined)
    );
    let persistent = match oracle_energy(Centrifugal::Approx, &natural(10.0), &label(1, 0, 0)) {
        Ok(e) => Check {
            passed: undefined && e < 0.0,
            ..Check::at_most(
                4,
                name,
                e,
                0.0,
                format!("critical_alpha errors: {undefined}; Numerov energy {e}"),
            )
        },
        Err(e) => Check::failed(4, name, 0.0, e),
    };
    vec![bisect, persistent]
}

pub fn criterion5(mode: ExponentMode) -> Vec<Check> {
    let states = fixture_states(&[0, 1]);
    let residual = worst(&states, |(p, s)| {
        let sol = RadialSolution::new(p, s, mode).map_err(|e| e.to_string())?;
        Ok((wavefunction::ode_residual(&sol), describe(p, s)))
    });
    let slope = worst(&states, |(p, s)| {
        let sol = RadialSolution::new(p, s, mode).map_err(|e| e.to_string())?;
        let want = f64::from(s.ell()) + 0.5 * (f64::from(s.dim()) - 1.0);
        let got = wavefunction::small_r_slope(&sol, 1e-3).map_err(|e| e.to_string())?;
        Ok(((got - want).abs(), describe(p, s)))
    });
    let printed = worst(&states, |(p, s)| {
        if s.k() < 2 {
            return Ok((f64::NEG_INFINITY, String::new()));
        }
        let sol = RadialSolution::new(p, s, ExponentMode::AsPrinted).map_err(|e| e.to_string())?;
        // negated so that `worst` tracks the smallest residual
        Ok((-wavefunction::ode_residual(&sol), describe(p, s)))
    });
    let label = |what: &str| {
        format!(
            "{what} ({} mode)",
            serde_json::to_value(mode).expect("enum").as_str().unwrap_or("")
        )
    };
    let printed = match printed {
        Ok((v, at)) => Check::at_least(
            5,
            "as-printed exponents violate the equation",
            -v,
            1e-2,
            format!("smallest at {at}"),
        ),
        Err(e) => Check::failed(5, "as-printed exponents violate the equation", 1e-2, e),
    };
    vec![
        from_worst(5, &label("reduced-equation residual"), 1e-6, residual),
        from_worst(5, &label("small-r slope l+(D-1)/2"), 0.01, slope),
        printed,
    ]
}

pub fn criterion6() -> Vec<Check> {
    let states = fixture_states(&[0, 1, 2]);
    let series = worst(&states, |(p, s)| {
        let a = wavefunction::normalization_series(p, s, ExponentMode::Corrected).map_err(|e| e.to_string())?;
        let b = wavefunction::normalization_quadrature(p, s, ExponentMode::Corrected).map_err(|e| e.to_string())?;
        Ok(((a - b).abs() / b.abs(), describe(p, s)))
    });
    let unit = worst(&states, |(p, s)| {
        let sol = RadialSolution::new(p, s, ExponentMode::Corrected).map_err(|e| e.to_string())?;
        let n = wavefunction::norm_integral(&sol).map_err(|e| e.to_string())?;
        Ok(((n - 1.0).abs(), describe(p, s)))
    });
    let ground: Vec<_> = states.iter().copied().filter(|(_, s)| s.n_r() == 0).collect();
    let c0 = worst(&ground, |(p, s)| {
        let a = wavefunction::ground_state_constant(p, s).map_err(|e| e.to_string())?;
        let b = wavefunction::normalization_quadrature(p, s, ExponentMode::Corrected).map_err(|e| e.to_string())?;
        Ok(((a - b).abs() / b.abs(), describe(p, s)))
    });
    vec![
        from_worst(6, "normalization: series vs quadrature (relative)", 1e-8, series),
        from_worst(6, "normalized integral of |R|^2 is 1", 1e-8, unit),
        from_worst(6, "ground-state constant vs quadrature (relative)", 1e-10, c0),
    ]
}

pub fn criterion7() -> Vec<Check> {
    let states = fixture_states(&[0, 1]);
    let err = |e: expectation::ExpectationError| e.to_string();
    let potential = worst(&states, |(p, s)| {
        let hft = expectation::potential_hft(p, s).map_err(err)?;
        let quad = expectation::expectation_quadrature(p, s, Observable::Potential).map_err(err)?;
        Ok(((hft - quad).abs() / quad.abs(), describe(p, s)))
    });
    let derivative = worst(&states, |(p, s)| {
        let v0 = p.v0();
        let h = 1e-6 * v0;
        let e = |v: f64| -> Result<f64, String> {
            let q = PhysicalParams::new(v, p.alpha(), p.mu(), p.hbar()).map_err(|e| e.to_string())?;
            closed_energy(&q, s)
        };
        let fd = (e(v0 + h)? - e(v0 - h)?) / (2.0 * h);
        let hft = expectation::potential_hft(p, s).map_err(err)? / v0;
        // a positive derivative would mean the sign of ⟨V⟩ is wrong
        let miss = if fd < 0.0 { (fd - hft).abs() } else { f64::INFINITY };
        Ok((miss, describe(p, s)))
    });
    let centrifugal_states: Vec<_> = states.iter().copied().filter(|(_, s)| s.k() > 2).collect();
    let sinh = worst(&centrifugal_states, |(p, s)| {
        let hft = expectation::inv_r2_hft(p, s).map_err(err)?;
        let quad = expectation::expectation_quadrature(p, s, Observable::SinhCentrifugal).map_err(err)?;
        Ok(((hft - quad).abs() / quad.abs(), describe(p, s)))
    });
    let kinetic = worst(&states, |(p, s)| {
        let t = expectation::kinetic(p, s).map_err(err)?;
        let quad = expectation::expectation_quadrature(p, s, Observable::Kinetic).map_err(err)?;
        Ok(((t - quad).abs() / quad.abs(), describe(p, s)))
    });
    let identity = worst(&states, |(p, s)| {
        let e = closed_energy(p, s)?;
        let sum = expectation::kinetic(p, s).map_err(err)? + expectation::potential_hft(p, s).map_err(err)?;
        Ok(((e - sum).abs(), describe(p, s)))
    });

    let s = label(3, 1, 0);
    let gap = |a: f64| -> Result<f64, String> {
        let p = natural(a);
        let quad = expectation::expectation_quadrature(&p, &s, Observable::InvR2).map_err(err)?;
        Ok((quad - expectation::inv_r2_hft(&p, &s).map_err(err)?).abs())
    };
    let name = "<r^-2> gap shrinks: gap(0.2)/gap(0.4)";
    let trend = match (gap(0.2), gap(0.4)) {
        (Ok(g2), Ok(g4)) => Check {
            passed: g2 < 0.35 * g4,
            ..Check::at_most(
                7,
                name,
                g2 / g4,
                0.35,
                format!("gap {g2} at alpha=0.2, {g4} at alpha=0.4 (D=3, l=1, n_r=0)"),
            )
        },
        (Err(e), _) | (_, Err(e)) => Check::failed(7, name, 0.35, e),
    };
    vec![
        from_worst(7, "<V> closed form vs quadrature (relative)", 1e-6, potential),
        from_worst(7, "finite-difference dE/dV0 vs <V>/V0", 1e-6, derivative),
        from_worst(7, "<alpha^2/sinh^2> closed form vs quadrature (relative)", 1e-6, sinh),
        trend,
        from_worst(7, "<T> = E - <V> vs quadrature (relative)", 1e-6, kinetic),
        from_worst(7, "E = <T> + <V>", 1e-12, identity),
    ]
}

pub const NU_KS: [u32; 5] = [3, 4, 5, 6, 7];
pub const NU_DELTAS: [f64; 5] = [20.0, 30.0, 45.0, 60.0, 80.0];

/// Largest deviation of the NU engine from the closed forms at `(k, δ)`:
/// `t₋`, the lower-branch `π`, and the quantized `ε` for `n_r = 0`.
pub fn nu_deviation(k: u32, delta: f64) -> Result<f64, nu_core::NuError> {
    let kf = f64::from(k);
    let gamma = (kf - 1.0) * (kf - 3.0) / 4.0;
    let root = kf - 2.0;
    let closed = 0.5 * ((1.0 + 4.0 * delta).sqrt() - 2.0 - root);
    let eps = nu_core::quantized_epsilon(k, delta, 0)?;
    let problem = nu_core::pt_problem(gamma, delta, closed);
    let t = nu_core::t_candidates(&problem)?;
    let t_minus = -0.5 * (gamma - delta + closed * closed) - 0.5 * closed * root;
    let pi = nu_core::pi_for(&problem, t[0], Branch::Lower)?;
    let (c0, c1) = (0.5 + 0.5 * root, -0.5 - 0.5 * (2.0 * closed + root));
    Ok((eps - closed)
        .abs()
        .max((t[0] - t_minus).abs() / t_minus.abs().max(1.0))
        .max((pi.coeff(0) - c0).abs())
        .max((pi.coeff(1) - c1).abs()))
}

pub fn criterion8() -> Check {
    let mut worst_dev: f64 = 0.0;
    let mut at = String::new();
    for &k in &NU_KS {
        for &delta in &NU_DELTAS {
            match nu_deviation(k, delta) {
                Ok(d) if d > worst_dev || d.is_nan() => {
                    worst_dev = d;
                    at = format!("k={k} delta={delta}");
                }
                Ok(_) => {}
                Err(e) => {
                    return Check::failed(
                        8,
                        "NU engine reproduces epsilon",
                        1e-10,
                        format!("k={k} delta={delta}: {e}"),
                    )
                }
            }
        }
    }
    Check::at_most(
        8,
        "NU engine reproduces epsilon",
        worst_dev,
        1e-10,
        format!("5x5 grid; worst at {at}"),
    )
}

pub fn criterion9() -> Vec<Check> {
    let u = Units::natural();
    let ns = [0, 1, 2, 3];
    let dims = [1, 2, 3, 4, 5];
    let rows = spectrum::figure1_data(&u, &dims, &ns, &[0.1], Indexing::Principal).expect("valid grid");
    let e = |d: u32, n: u32| rows.iter().find(|r| r.dim == d && r.n == n).and_then(|r| r.energy);
    let mut violations = 0u32;
    for d in 1..5 {
        let gaps: Vec<Option<f64>> = ns.iter().map(|&n| Some((e(d + 1, n)? - e(d, n)?).abs())).collect();
        for w in gaps.windows(2) {
            match (w[0], w[1]) {
                (Some(a), Some(b)) if b < a => {}
                _ => violations += 1,
            }
        }
    }
    let fig1 = Check::at_most(
        9,
        "figure 1: |E(D+1,n) - E(D,n)| decreases in n at alpha=0.1",
        f64::from(violations),
        0.0,
        "D = 1..4, n = 0..3".to_owned(),
    );

    let mut bad = 0u32;
    let mut detail = Vec::new();
    let grid: Vec<f64> = (1..=4000).map(|i| f64::from(i) * 0.01).collect();
    for fig in 2..=5 {
        let (d, l) = wavefunction::figure_state(fig).expect("figures 2-5");
        let s = label(d, l, 0);
        // the peak turns outward again close to threshold (beyond ~0.7 α_c)
        let ac = spectrum::critical_alpha(&u, s.principal(), d).expect("D > 1");
        let mut peaks = Vec::new();
        for fraction in [0.2, 0.4, 0.6] {
            let p = u.with_alpha(fraction * ac).expect("positive alpha");
            match wavefunction::figure_profiles(&[s], &p, &grid, ExponentMode::Corrected) {
                Ok(profiles) => {
                    let prof = &profiles[0];
                    if prof.interior_zeros() != s.n_r() as usize || prof.local_maxima() != 1 {
                        bad += 1;
                    }
                    peaks.push(prof.argmax());
                }
                Err(e) => {
                    bad += 1;
                    detail.push(format!("figure {fig}: {e}"));
                }
            }
        }
        if !peaks.windows(2).all(|w| w[1] < w[0]) {
            bad += 1;
        }
        detail.push(format!("figure {fig} (D={d}, l={l}) peaks {peaks:?}"));
    }
    let profiles = Check::at_most(
        9,
        "figures 2-5: n_r nodes, single maximum moving inward as alpha grows to 0.6 alpha_c",
        f64::from(bad),
        0.0,
        detail.join("; "),
    );
    vec![fig1, profiles]
}

/// Reruns the inexpensive checks and compares serialized bytes.
pub fn criterion10() -> Check {
    let render = || {
        let mut checks = vec![criterion2(), criterion8()];
        checks.extend(criterion4());
        checks.extend(criterion6());
        serde_json::to_string(&checks).expect("checks serialize")
    };
    let (a, b) = (render(), render());
    Check {
        passed: a == b,
        ..Check::at_most(
            10,
            "repeated evaluation is byte-identical",
            if a == b { 0.0 } else { 1.0 },
            0.0,
            format!("{} bytes compared", a.len()),
        )
    }
}

pub fn run(config: ValidationConfig) -> Report {
    let mut checks = vec![criterion1(config.quick), criterion2()];
    if !config.quick {
        checks.push(criterion3());
    }
    checks.extend(criterion4());
    checks.extend(criterion5(config.mode));
    checks.extend(criterion6());
    checks.extend(criterion7());
    checks.push(criterion8());
    checks.extend(criterion9());
    if !config.quick {
        checks.push(criterion10());
    }
    let passed = checks.iter().all(|c| c.passed);
    Report { config, checks, passed }
}
