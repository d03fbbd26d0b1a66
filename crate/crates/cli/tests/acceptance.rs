//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use ptd_core::validation::{self, Check};
use ptd_core::wavefunction::ExponentMode;
use std::process::Command;
use std::time::{Duration, Instant};

const CRITERION1_BUDGET: Duration = Duration::from_secs(30);

struct Outcome {
    criterion: u32,
    title: &'static str,
    passed: bool,
    summary: String,
}

fn summarize(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let mark = if c.passed { "ok" } else { "FAILED" };
            format!("{} {:.3e} vs {:.1e} [{mark}]", c.name, c.measured, c.tolerance)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn outcome(criterion: u32, title: &'static str, checks: Vec<Check>) -> Outcome {
    Outcome {
        criterion,
        title,
        passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
        summary: summarize(&checks),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temporary directory");
    let bin = env!("CARGO_BIN_EXE_ptd-spectra");
    let mut reports = Vec::new();
    let mut codes = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args(["validate", "--out"])
            .arg(&path)
            .output()
            .expect("run ptd-spectra");
        codes.push(status.status.code());
        reports.push(std::fs::read(&path).unwrap_or_default());
    }
    let identical = !reports[0].is_empty() && reports[0] == reports[1];
    Outcome {
        criterion: 10,
        title: "validate reports are byte-identical",
        passed: identical && codes.iter().all(|c| *c == Some(0)),
        summary: format!(
            "{} bytes, identical: {identical}, exit codes {codes:?}",
            reports[0].len()
        ),
    }
}

fn main() {
    let mut outcomes = Vec::new();

    let start = Instant::now();
    let c1 = validation::criterion1(false);
    let elapsed = start.elapsed();
    let mut first = outcome(1, "closed form vs Numerov on the fixture grid", vec![c1]);
    first.passed &= elapsed <= CRITERION1_BUDGET;
    first.summary = format!(
        "{} ({:.1} s of {} s)",
        first.summary,
        elapsed.as_secs_f64(),
        CRITERION1_BUDGET.as_secs()
    );
    outcomes.push(first);

    outcomes.push(outcome(
        2,
        "D=1 ground state at alpha=1",
        vec![validation::criterion2()],
    ));
    outcomes.push(outcome(
        3,
        "approximation error trend in alpha",
        vec![validation::criterion3()],
    ));
    outcomes.push(outcome(4, "critical screening", validation::criterion4()));
    outcomes.push(outcome(
        5,
        "wavefunction equation, slope and as-printed defect",
        validation::criterion5(ExponentMode::Corrected),
    ));
    outcomes.push(outcome(6, "normalization", validation::criterion6()));
    outcomes.push(outcome(7, "expectation values", validation::criterion7()));
    outcomes.push(outcome(8, "NU engine regression", vec![validation::criterion8()]));
    outcomes.push(outcome(9, "figure properties", validation::criterion9()));
    outcomes.push(determinism());

    println!();
    for o in &outcomes {
        println!(
            "criterion {:>2} {}: {} -- {}",
            o.criterion,
            if o.passed { "PASS" } else { "FAIL" },
            o.title,
            o.summary
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("\nacceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
