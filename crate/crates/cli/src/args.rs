use crate::output::Format;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ptd_core::spectrum::Indexing;
use ptd_core::wavefunction::ExponentMode;
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "ptd-spectra",
    version,
    about = "Bound states of the D-dimensional modified Pöschl-Teller well"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy levels
    Spectrum(SpectrumArgs),
    /// Screening parameter at which a level unbinds
    CriticalAlpha(CriticalArgs),
    /// Normalized radial wavefunction on an r grid
    Wavefunction(WavefunctionArgs),
    /// Hellmann-Feynman expectation values with quadrature cross-checks
    Expectations(ExpectationArgs),
    /// Data behind figures 1 to 5
    Figure(FigureArgs),
    /// Run the validation suite
    Validate(ValidateArgs),
}

/// `lo:hi:count`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linspace {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Linspace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(format!("expected lo:hi:count, got '{s}'"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound '{lo}': {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound '{hi}': {e}"))?;
        let count: usize = count.trim().parse().map_err(|e| format!("bad count '{count}': {e}"))?;
        if count == 0 {
            return Err("count must be at least 1".to_owned());
        }
        if !(lo.is_finite() && hi.is_finite()) || hi < lo || (count > 1 && hi == lo) {
            return Err(format!("need finite lo < hi, got {lo}:{hi}"));
        }
        Ok(Self { lo, hi, count })
    }
}

impl Linspace {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct UnitArgs {
    /// Well depth V0
    #[arg(long = "V0", default_value_t = 1.0)]
    pub v0: f64,
    /// Reduced mass
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlphaArgs {
    /// Screening parameter(s), comma separated
    #[arg(long, value_delimiter = ',', conflicts_with = "alpha_grid")]
    pub alpha: Option<Vec<f64>>,
    /// Evenly spaced screening parameters, lo:hi:count
    #[arg(long = "alpha-grid")]
    pub alpha_grid: Option<Linspace>,
}

impl AlphaArgs {
    pub fn values(&self) -> Option<Vec<f64>> {
        match (&self.alpha, &self.alpha_grid) {
            (Some(a), _) => Some(a.clone()),
            (None, Some(g)) => Some(g.values()),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexingArg {
    Principal,
    Radial,
}

impl From<IndexingArg> for Indexing {
    fn from(v: IndexingArg) -> Self {
        match v {
            IndexingArg::Principal => Indexing::Principal,
            IndexingArg::Radial => Indexing::Radial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Corrected,
    AsPrinted,
}

impl From<ModeArg> for ExponentMode {
    fn from(v: ModeArg) -> Self {
        match v {
            ModeArg::Corrected => ExponentMode::Corrected,
            ModeArg::AsPrinted => ExponentMode::AsPrinted,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    /// Dimensions, comma separated
    #[arg(long = "D", value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
    /// Principal numbers n = 2n_r + l (principal indexing)
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub n: Vec<u32>,
    /// Angular momenta (radial indexing)
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub ell: Vec<u32>,
    /// Radial numbers (radial indexing)
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub nr: Vec<u32>,
    #[arg(long, value_enum, default_value_t = IndexingArg::Principal)]
    pub indexing: IndexingArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CriticalArgs {
    #[arg(long = "D", value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub n: Vec<u32>,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WavefunctionArgs {
    #[arg(long = "D", value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub ell: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub nr: Vec<u32>,
    /// Radii, lo:hi:count; defaults to 0.01/alpha..8/alpha with 400 points
    #[arg(long = "r-grid")]
    pub r_grid: Option<Linspace>,
    #[arg(long, value_enum, default_value_t = ModeArg::Corrected)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpectationArgs {
    #[arg(long = "D", value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub ell: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub nr: Vec<u32>,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5))]
    pub id: u32,
    /// Figure 1 dimensions (default 1,2,3,4,5)
    #[arg(long = "D", value_delimiter = ',')]
    pub dims: Option<Vec<u32>>,
    /// Figure 1 level numbers (default 0,1,2)
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Radial number of the profile in figures 2 to 5
    #[arg(long, default_value_t = 0)]
    pub nr: u32,
    #[arg(long, value_enum, default_value_t = IndexingArg::Principal)]
    pub indexing: IndexingArg,
    #[arg(long = "r-grid")]
    pub r_grid: Option<Linspace>,
    #[arg(long, value_enum, default_value_t = ModeArg::Corrected)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    /// Run the fast subset only
    #[arg(long)]
    pub quick: bool,
    /// Exponent mode checked against the reduced equation
    #[arg(long, value_enum, default_value_t = ModeArg::Corrected)]
    pub mode: ModeArg,
    /// JSON report path; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}
