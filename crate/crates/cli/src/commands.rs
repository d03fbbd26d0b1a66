use crate::args::{
    AlphaArgs, Command, CriticalArgs, ExpectationArgs, FigureArgs, Linspace, OutputArgs, SpectrumArgs, UnitArgs,
    ValidateArgs, WavefunctionArgs,
};
use crate::output::{emit, Table};
use ptd_core::expectation::{self, ExpectationError};
use ptd_core::model::{ParamError, PhysicalParams, StateLabel, Units};
use ptd_core::spectrum::{self, Indexing};
use ptd_core::validation::{self, ValidationConfig};
use ptd_core::wavefunction::{self, ExponentMode, RadialSolution, WavefunctionError};
use serde::Serialize;
use serde_json::json;
use std::fmt;

pub const FIGURE1_DIMS: [u32; 5] = [1, 2, 3, 4, 5];
pub const FIGURE1_NS: [u32; 3] = [0, 1, 2];
pub const FIGURE1_ALPHAS: &str = "0.05:1.5:30";
pub const PROFILE_POINTS: usize = 400;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Physics(String),
    Validation(usize),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Physics(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Physics(m) => f.write_str(m),
            Failure::Validation(n) => write!(f, "{n} validation check(s) failed"),
            Failure::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn units(a: &UnitArgs) -> Result<Units, Failure> {
    Ok(Units::new(a.v0, a.mu, a.hbar)?)
}

fn sorted_alphas(a: &AlphaArgs) -> Option<Vec<f64>> {
    a.values().map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

fn required_alphas(a: &AlphaArgs) -> Result<Vec<f64>, Failure> {
    sorted_alphas(a).ok_or_else(|| Failure::Usage("one of --alpha or --alpha-grid is required".to_owned()))
}

fn unbound(units: &Units, state: &StateLabel, alpha: f64) -> Failure {
    let critical = spectrum::critical_alpha(units, state.principal(), state.dim())
        .map(|ac| format!("; its critical alpha is {ac}"))
        .unwrap_or_default();
    Failure::Physics(format!(
        "state D={} l={} n_r={} is not bound at alpha = {alpha}{critical}",
        state.dim(),
        state.ell(),
        state.n_r()
    ))
}

fn write_table<A: Serialize>(table: &Table, command: &str, args: &A, output: &OutputArgs) -> Result<(), Failure> {
    let config = json!({ "command": command, "args": args });
    emit(&table.render(output.format, config), output.out.as_deref())?;
    Ok(())
}

fn radii(grid: Option<&Linspace>, alpha: f64) -> Result<Vec<f64>, Failure> {
    let r = grid.map_or_else(
        || wavefunction::default_figure_grid(alpha, PROFILE_POINTS),
        Linspace::values,
    );
    if r.iter().any(|&x| !(x > 0.0)) {
        return Err(Failure::Usage("radii must be positive".to_owned()));
    }
    Ok(r)
}

fn level_table(units: &Units, dims: &[u32], ns: &[u32], alphas: &[f64], indexing: Indexing) -> Result<Table, Failure> {
    let mut t = Table::new(&["D", "n", "alpha", "energy", "bound"]);
    for &d in dims {
        StateLabel::new(d, 0, 0)?;
    }
    let rows = spectrum::figure1_data(units, dims, ns, alphas, indexing).map_err(|e| Failure::Usage(e.to_string()))?;
    for r in rows {
        t.push(vec![
            r.dim.into(),
            r.n.into(),
            r.alpha.into(),
            r.energy.into(),
            r.energy.is_some().into(),
        ]);
    }
    Ok(t)
}

pub fn spectrum_table(a: &SpectrumArgs) -> Result<Table, Failure> {
    let u = units(&a.units)?;
    let alphas = required_alphas(&a.alpha)?;
    match Indexing::from(a.indexing) {
        Indexing::Principal => level_table(&u, &a.dims, &a.n, &alphas, Indexing::Principal),
        Indexing::Radial => {
            let mut t = Table::new(&["D", "ell", "n_r", "n", "alpha", "energy", "bound"]);
            for &d in &a.dims {
                for &l in &a.ell {
                    for &nr in &a.nr {
                        let s = StateLabel::new(d, l, nr)?;
                        for &alpha in &alphas {
                            let e = spectrum::energy(&u.with_alpha(alpha)?, &s).ok().map(|l| l.energy);
                            t.push(vec![
                                d.into(),
                                l.into(),
                                nr.into(),
                                s.principal().into(),
                                alpha.into(),
                                e.into(),
                                e.is_some().into(),
                            ]);
                        }
                    }
                }
            }
            Ok(t)
        }
    }
}

pub fn critical_table(a: &CriticalArgs) -> Result<Table, Failure> {
    let u = units(&a.units)?;
    let mut t = Table::new(&["D", "n", "alpha_c"]);
    for &d in &a.dims {
        StateLabel::new(d, 0, 0)?;
        for &n in &a.n {
            let ac = spectrum::critical_alpha(&u, n, d).map_err(|e| Failure::Physics(e.to_string()))?;
            t.push(vec![d.into(), n.into(), ac.into()]);
        }
    }
    Ok(t)
}

fn solution(
    u: &Units,
    s: &StateLabel,
    alpha: f64,
    mode: ExponentMode,
) -> Result<(PhysicalParams, RadialSolution), Failure> {
    let p = u.with_alpha(alpha)?;
    match RadialSolution::new(&p, s, mode) {
        Ok(sol) => Ok((p, sol)),
        Err(WavefunctionError::Unbound(_)) => Err(unbound(u, s, alpha)),
        Err(e) => Err(Failure::Physics(e.to_string())),
    }
}

pub fn wavefunction_table(a: &WavefunctionArgs) -> Result<Table, Failure> {
    let u = units(&a.units)?;
    let given = sorted_alphas(&a.alpha);
    let mut t = Table::new(&["D", "ell", "n_r", "alpha", "r", "R", "U"]);
    for &d in &a.dims {
        for &l in &a.ell {
            for &nr in &a.nr {
                let s = StateLabel::new(d, l, nr)?;
                let alphas = match &given {
                    Some(v) => v.clone(),
                    None => vec![wavefunction::figure_alpha(&u, &s).map_err(|e| Failure::Physics(e.to_string()))?],
                };
                for alpha in alphas {
                    let (_, sol) = solution(&u, &s, alpha, a.mode.into())?;
                    for r in radii(a.r_grid.as_ref(), alpha)? {
                        let big_r = sol.radial_r(r).map_err(|e| Failure::Physics(e.to_string()))?;
                        let small_u = sol.hyperradial_u(r).map_err(|e| Failure::Physics(e.to_string()))?;
                        t.push(vec![
                            d.into(),
                            l.into(),
                            nr.into(),
                            alpha.into(),
                            r.into(),
                            big_r.into(),
                            small_u.into(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(t)
}

pub fn expectation_table(a: &ExpectationArgs) -> Result<Table, Failure> {
    let u = units(&a.units)?;
    let alphas = required_alphas(&a.alpha)?;
    let mut t = Table::new(&[
        "D",
        "ell",
        "n_r",
        "alpha",
        "energy",
        "inv_r2_hft",
        "sinh_centrifugal_quadrature",
        "inv_r2_quadrature",
        "potential_hft",
        "potential_quadrature",
        "kinetic",
        "kinetic_quadrature",
    ]);
    for &d in &a.dims {
        for &l in &a.ell {
            for &nr in &a.nr {
                let s = StateLabel::new(d, l, nr)?;
                for &alpha in &alphas {
                    let r = match expectation::report(&u.with_alpha(alpha)?, &s) {
                        Ok(r) => r,
                        Err(ExpectationError::Unbound(_)) => return Err(unbound(&u, &s, alpha)),
                        Err(e) => return Err(Failure::Physics(e.to_string())),
                    };
                    t.push(vec![
                        d.into(),
                        l.into(),
                        nr.into(),
                        alpha.into(),
                        r.energy.into(),
                        r.inv_r2_hft.into(),
                        r.sinh_centrifugal_quadrature.into(),
                        r.inv_r2_quadrature.into(),
                        r.potential_hft.into(),
                        r.potential_quadrature.into(),
                        r.kinetic.into(),
                        r.kinetic_quadrature.into(),
                    ]);
                }
            }
        }
    }
    Ok(t)
}

pub fn figure_table(a: &FigureArgs) -> Result<Table, Failure> {
    let u = units(&a.units)?;
    if a.id == 1 {
        let dims = a.dims.clone().unwrap_or_else(|| FIGURE1_DIMS.to_vec());
        let ns = a.n.clone().unwrap_or_else(|| FIGURE1_NS.to_vec());
        let alphas = match sorted_alphas(&a.alpha) {
            Some(v) => v,
            None => FIGURE1_ALPHAS.parse::<Linspace>().map_err(Failure::Usage)?.values(),
        };
        return level_table(&u, &dims, &ns, &alphas, a.indexing.into());
    }
    let (d, l) = wavefunction::figure_state(a.id).ok_or_else(|| Failure::Usage(format!("no figure {}", a.id)))?;
    let s = StateLabel::new(d, l, a.nr)?;
    let alphas = match sorted_alphas(&a.alpha) {
        Some(v) => v,
        None => vec![wavefunction::figure_alpha(&u, &s).map_err(|_| unbound(&u, &s, 0.5))?],
    };
    for &alpha in &alphas {
        solution(&u, &s, alpha, a.mode.into())?;
    }
    let grid = radii(a.r_grid.as_ref(), alphas[0])?;
    let mut t = Table::new(&["D", "ell", "n_r", "alpha", "r", "abs_U"]);
    for &alpha in &alphas {
        let p = u.with_alpha(alpha)?;
        let profiles = wavefunction::figure_profiles(&[s], &p, &grid, a.mode.into())
            .map_err(|e| Failure::Physics(e.to_string()))?;
        for &(r, v) in &profiles[0].samples {
            t.push(vec![d.into(), l.into(), a.nr.into(), alpha.into(), r.into(), v.into()]);
        }
    }
    Ok(t)
}

pub fn validate(a: &ValidateArgs) -> Result<(), Failure> {
    let report = validation::run(ValidationConfig {
        quick: a.quick,
        mode: a.mode.into(),
    });
    for c in &report.checks {
        eprintln!(
            "[{}] {:>2} {}: measured {} (limit {})",
            if c.passed { "PASS" } else { "FAIL" },
            c.criterion,
            c.name,
            c.measured,
            c.tolerance
        );
    }
    let mut bytes = report.to_json().into_bytes();
    bytes.push(b'\n');
    emit(&bytes, a.out.as_deref())?;
    match report.failures().count() {
        0 => Ok(()),
        n => Err(Failure::Validation(n)),
    }
}

pub fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Spectrum(a) => write_table(&spectrum_table(a)?, "spectrum", a, &a.output),
        Command::CriticalAlpha(a) => write_table(&critical_table(a)?, "critical-alpha", a, &a.output),
        Command::Wavefunction(a) => write_table(&wavefunction_table(a)?, "wavefunction", a, &a.output),
        Command::Expectations(a) => write_table(&expectation_table(a)?, "expectations", a, &a.output),
        Command::Figure(a) => write_table(&figure_table(a)?, "figure", a, &a.output),
        Command::Validate(a) => validate(a),
    }
}
