use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use crate::output::{parse_assignment, parse_complex};

/// Finite-gap operators on elliptic curves: exact loci, numerical
/// monodromy and Calogero-Moser configurations.
#[derive(Parser, Debug)]
#[command(name = "fingap", version, about)]
pub struct Cli {
    /// Seed for every random choice (only `verify-paper` samples at random).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Write a run manifest (argv, version, seed, output hashes) as JSON.
    #[arg(long, global = true)]
    pub manifest: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Indicial polynomial and local indices at the pole.
    Indicial(IndicialArgs),
    /// Whether the homogeneous operator with these indices is integrable.
    HomogCheck(HomogArgs),
    /// Trivial-monodromy conditions of the third-order operator with gaps (q, r).
    Constraints(ConstraintsArgs),
    /// Solved loci over a range of (q, r), one row per branch.
    Locus(LocusArgs),
    /// Rebuild a branch quantity as a rational function of q.
    Reconstruct(ReconstructArgs),
    /// j-invariant of the exotic branch against the closed form, for each q.
    Jtable(JTableArgs),
    /// Search for an operator of the given order commuting with L.
    Commute(CommuteArgs),
    /// Residuals of the finite-gap (Lame-type) pole equations.
    Cm2Residuals(Cm2Args),
    /// Critical points of F + c H1 for the third-order Calogero-Moser system.
    Cm3Crit(Cm3Args),
    /// Critical points of the Z_3-crystallographic system on the hexagonal lattice.
    Cryst3Crit(Cryst3Args),
    /// Gradient of the Inozemtsev BC_1 potential.
    InozemtsevGrad(InozemtsevArgs),
    /// Numerical monodromy around a circle, with an integrability verdict.
    Monodromy(MonodromyArgs),
    /// Run the reproduction checks and print one line per criterion.
    VerifyPaper(VerifyArgs),
    /// Re-run the command stored in a manifest and compare output hashes.
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Middle,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Elliptic,
    Trigonometric,
    Rational,
}

fn complex(s: &str) -> Result<C64, String> {
    parse_complex(s)
}

fn assignment(s: &str) -> Result<(String, C64), String> {
    parse_assignment(s)
}

#[derive(Args, Debug)]
pub struct IndicialArgs {
    /// Operator order, with the leading pole coefficients --b2 .. --bN.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b4: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b5: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b6: Option<String>,
    /// An operator such as "D^2 - 6*P".
    #[arg(long, conflicts_with_all = ["n", "q", "r"])]
    pub operator: Option<String>,
    #[arg(long, conflicts_with = "n")]
    pub q: Option<i64>,
    #[arg(long, conflicts_with = "n")]
    pub r: Option<i64>,
}

#[derive(Args, Debug)]
pub struct HomogArgs {
    /// Comma-separated rational indices.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub indices: Option<Vec<String>>,
    #[arg(long)]
    pub q: Option<i64>,
    #[arg(long)]
    pub r: Option<i64>,
    /// Operator order (defaults to the number of indices).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ConstraintsArgs {
    #[arg(long)]
    pub q: i64,
    #[arg(long)]
    pub r: i64,
    /// `middle` keeps the conditions at the middle index, which cut out the
    /// locus; `full` adds the (implied) top-index ones.
    #[arg(long, value_enum, default_value_t = ModeArg::Middle)]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct LocusArgs {
    #[arg(long)]
    pub r: i64,
    /// Scan every r from --r to here.
    #[arg(long)]
    pub r_max: Option<i64>,
    /// A single cell (q, r) instead of a scan.
    #[arg(long)]
    pub q: Option<i64>,
    /// Scan q from r to r + span.
    #[arg(long, default_value_t = 9)]
    pub q_span: i64,
    /// Drop cells with q above this.
    #[arg(long)]
    pub q_max: Option<i64>,
    /// generic, nodal or cuspidal.
    #[arg(long, default_value = "generic")]
    pub curve: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub r: i64,
    /// One of c/e^2, g2/e^4, g3/e^6, g2/c^2, g3/c^3, c^2/g2, j.
    #[arg(long)]
    pub quantity: String,
    /// Comma-separated q values to interpolate through.
    #[arg(long, value_delimiter = ',')]
    pub samples: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
pub struct JTableArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub q_max: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CommuteArgs {
    #[arg(long)]
    pub operator: String,
    /// Order of the commuting operator sought.
    #[arg(long)]
    pub order: usize,
    /// Largest pole order allowed in its coefficients.
    #[arg(long)]
    pub pole_bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Cm2Args {
    /// JSON {"points": [[re,im],..], "multiplicities": [..]} or @file.
    #[arg(long)]
    pub config: String,
    #[arg(long, value_enum, default_value_t = KernelKind::Elliptic)]
    pub kernel: KernelKind,
    /// Period ratio of the lattice, as re,im.
    #[arg(long, value_parser = complex, default_value = "0,1", allow_hyphen_values = true)]
    pub tau: C64,
    /// Move the points to a solution by Newton's method first.
    #[arg(long)]
    pub solve: bool,
}

#[derive(Args, Debug)]
pub struct Cm3Args {
    /// JSON {"points": .., "momenta": .., "c": [re,im]} or @file.
    #[arg(long)]
    pub config: String,
    #[arg(long, value_enum, default_value_t = KernelKind::Elliptic)]
    pub kernel: KernelKind,
    #[arg(long, value_parser = complex, default_value = "0,1", allow_hyphen_values = true)]
    pub tau: C64,
    /// Unknowns for Newton's method: points, momenta, c (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub vary: Vec<String>,
}

#[derive(Args, Debug)]
pub struct Cryst3Args {
    /// JSON {"points", "momenta", "alpha": [3], "beta": [3]} or @file.
    #[arg(long)]
    pub config: String,
    #[arg(long)]
    pub solve: bool,
}

#[derive(Args, Debug)]
pub struct InozemtsevArgs {
    /// JSON list of [re,im] points, or @file.
    #[arg(long)]
    pub points: String,
    /// Coupling constants m0,m1,m2,m3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m: Vec<f64>,
    #[arg(long, value_parser = complex, default_value = "0,1", allow_hyphen_values = true)]
    pub tau: C64,
}

#[derive(Args, Debug)]
pub struct MonodromyArgs {
    #[arg(long)]
    pub operator: String,
    /// Spectral parameter, re,im; repeat the flag for several.
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub lambda: Vec<C64>,
    #[arg(long, value_parser = complex, default_value = "0,1", allow_hyphen_values = true)]
    pub tau: C64,
    /// Parameter value, name=re,im (e.g. c=-0.5,0); repeatable.
    #[arg(long, value_parser = assignment, allow_hyphen_values = true)]
    pub set: Vec<(String, C64)>,
    #[arg(long, value_parser = complex, default_value = "0,0", allow_hyphen_values = true)]
    pub center: C64,
    /// Circle radius as a fraction of the shortest period.
    #[arg(long, default_value_t = 0.4)]
    pub radius_fraction: f64,
    /// Deviation from the identity below which monodromy counts as trivial.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Step-size control tolerance of the integrator.
    #[arg(long)]
    pub integration_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated criterion numbers (default: all).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    /// csv gives one text line per criterion.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Manifest written by an earlier --manifest run.
    #[arg(long = "from")]
    pub from: String,
}
