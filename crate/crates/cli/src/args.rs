//! Command-line surface. The parsed command doubles as the job configuration
//! embedded in every report, so a run can be replayed from its own output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "bcfmop", version, about = "Branched continued fractions, production matrices and multiple orthogonal polynomials in exact arithmetic")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobConfig,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    /// Output format; CSV is offered for srpoly matrices and zeros.
    #[arg(long, value_enum, global = true, default_value = "json")]
    #[serde(default)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Generalized or modified m-Stieltjes–Rogers matrices of a weight sequence.
    Srpoly(SrpolyArgs),
    /// Production matrix of a weight sequence.
    Prodmat(ProdmatArgs),
    /// Branched-continued-fraction coefficients of a hypergeometric ratio.
    Bcf(BcfArgs),
    /// Multiple orthogonal polynomials, recurrence coefficients, and identity checks.
    Mop(MopArgs),
    /// Certified zeros and asymptotic checks.
    Zeros(ZerosArgs),
    /// Total positivity of a matrix read from JSON.
    Tp(TpArgs),
    /// The full cross-validation suite.
    Verify(VerifyArgs),
    /// Re-run the job embedded in a previous JSON report.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaPreset {
    /// `α_j = 1`; Fuss–Catalan path counts.
    #[default]
    Ones,
    /// `m = 1`, `α_j = 1`; Catalan numbers.
    Catalan,
    /// Coefficients of the constant-recurrence family with `r = m`.
    ConstantR,
    /// Seeded positive non-integer rationals.
    Random,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaArgs {
    /// Branching order.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, visible_alias = "alpha-preset", value_enum, default_value = "ones")]
    pub alpha: AlphaPreset,
    /// Explicit `α_m, α_{m+1}, …`; overrides the preset, later entries are zero.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub alphas: Vec<String>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamPreset {
    /// Constant recurrence coefficients, `r = 1`.
    ConstantR1,
    /// Constant recurrence coefficients, `r = 2`.
    ConstantR2,
    /// Constant recurrence coefficients, `r = 3`.
    ConstantR3,
    /// Jacobi–Piñeiro with `a = (1/2, 3/4)`.
    JpR2,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamArgs {
    /// Named parameter set; excludes the explicit parameter flags.
    #[arg(long, value_enum, conflicts_with_all = ["r", "s", "lambda", "a", "b"])]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<ParamPreset>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// `λ` when `r ≥ s`, otherwise `σ`.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub lambda: Vec<usize>,
    /// Upper parameters; with `r` values `a_{r+1} = 1` is appended.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub a: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub b: Vec<String>,
    /// Use `α_m = ∏a_i / ∏b_j` as the first coefficient.
    #[arg(long)]
    #[serde(default)]
    pub plain_first: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SrKindArg {
    Generalized,
    Modified,
    TypeJ,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrpolyArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    /// Truncation size.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// A single family; all three are emitted when omitted.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SrKindArg>,
    /// Offset `j` for the type-j family.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub j: usize,
    /// Check the factorization and the path-enumeration oracle.
    #[arg(long)]
    #[serde(default)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductionForm {
    ClosedForm,
    Bidiagonal,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProdmatArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub form: ProductionForm,
    /// Also emit the output matrix.
    #[arg(long)]
    #[serde(default)]
    pub output: bool,
    /// Check closed form against the bidiagonal product and the output matrix against S.
    #[arg(long)]
    #[serde(default)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcfAction {
    Verify,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcfArgs {
    /// `verify` is the same as `--verify`.
    #[arg(value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<BcfAction>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Emits `α_m, …, α_{m+count}`.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Check the contiguous-ratio recurrence as a series identity.
    #[arg(long)]
    #[serde(default)]
    pub verify: bool,
    #[arg(long, default_value_t = 10)]
    pub order: usize,
    #[arg(long, default_value_t = 6)]
    pub max_k: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MopCheck {
    All,
    Ortho,
    Ode,
    Dual,
    None,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MopArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Highest degree.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub check: MopCheck,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Degree.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Width of the isolating intervals.
    #[arg(long, default_value = "1/1099511627776")]
    pub tol: String,
    /// Kolmogorov–Smirnov tolerance against the limiting zero distribution (`s = r`).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<f64>,
    /// Mehler–Heine check at this point.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mh: Option<String>,
    /// Degrees for the Mehler–Heine check.
    #[arg(long, value_delimiter = ',', default_value = "40,80,160")]
    pub mh_degrees: Vec<usize>,
    /// Report the recurrence-coefficient limits at degree `n`.
    #[arg(long)]
    #[serde(default)]
    pub limits: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TpMethodArg {
    Auto,
    Minors,
    Neville,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpArgs {
    /// JSON array of rows; entries are integers or `"p/q"` strings.
    #[arg(long)]
    pub input: String,
    /// Highest minor order for the brute-force search.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: TpMethodArg,
    /// Also test for an oscillation matrix.
    #[arg(long)]
    #[serde(default)]
    pub oscillation: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Smaller sizes and fewer draws.
    #[arg(long)]
    #[serde(default)]
    pub quick: bool,
    /// Degree bound for the polynomial checks.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A JSON report written by an earlier run.
    pub report: String,
}
