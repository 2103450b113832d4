//! Command-line flags. Every flag is optional so that values can come from a
//! config file instead; [`crate::config`] merges the two.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "ciflab",
    version,
    about = "Singular-value asymptotics of truncated torus operators"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file with a [global] section and one section per command.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Directory for report files; reports go to stdout without it.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized trials, in hexadecimal (`0x` prefix optional).
    #[arg(long, global = true, value_parser = parse_hex)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extrapolate n·μ(n) of the truncated W M_f W along a cutoff ladder.
    Cif {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        ladder: LadderArgs,
        /// Relative tolerance on the extrapolated limits.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Use the closed-form diagonal spectrum for constant functions.
        #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
        fast_diagonal: Option<bool>,
        /// Grid oversampling factor for FFT coefficients.
        #[arg(long)]
        oversample: Option<usize>,
    },
    /// Run the seeded lemma suites.
    Lemmas {
        /// Comma-separated suite names; all suites when absent.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Trials per size for the product and Hölder suites.
        #[arg(long)]
        trials: Option<usize>,
        /// gaussian_hermitian or prescribed_profile.
        #[arg(long)]
        distribution: Option<String>,
        /// Sequence length for the tensor, direct-sum and transfer suites.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// L₂ and Orlicz norms of a function on a ladder of grids.
    Norms {
        #[command(flatten)]
        function: FunctionArgs,
        /// Comma-separated grid resolutions per axis.
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<usize>>,
    },
    /// Weak-L₂ Cwikel ratios or the Hilbert–Schmidt blow-up ladder.
    Probe {
        /// cwikel or blowup.
        probe: Option<String>,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Dump the singular values of one truncated operator.
    Spectrum {
        #[command(flatten)]
        function: FunctionArgs,
        /// Lattice cutoff R of the basis |k| ≤ R.
        #[arg(long)]
        cutoff: Option<f64>,
        /// symmetric, asymmetric, multiplication, commutator or half_weighted.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        oversample: Option<usize>,
        /// Also write the matrix as `matrix.bin` (needs --out).
        #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
        matrix: Option<bool>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cif { .. } => "cif",
            Command::Lemmas { .. } => "lemmas",
            Command::Norms { .. } => "norms",
            Command::Probe { .. } => "probe",
            Command::Spectrum { .. } => "spectrum",
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct LadderArgs {
    /// Comma-separated cutoffs R, increasing.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<f64>>,
}

/// A torus function: a family name plus its parameters.
#[derive(Debug, Default, Args)]
pub struct FunctionArgs {
    #[arg(long = "d", visible_alias = "dim")]
    pub d: Option<usize>,
    /// constant, cosine_mode, shifted_cosine, box_indicator, radial_logspike,
    /// plane_wave or custom_grid.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_key_value)]
    pub params: Vec<(String, String)>,
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mode: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub height: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub exponent: Option<String>,
    #[arg(long)]
    pub cap: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub scale: Option<String>,
    #[arg(long)]
    pub resolution: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
}

impl FunctionArgs {
    /// `--param` pairs followed by the named shorthands, which win on clashes.
    pub fn param_pairs(&self) -> Vec<(String, String)> {
        let named = [
            ("value", &self.value),
            ("shift", &self.shift),
            ("mode", &self.mode),
            ("amplitude", &self.amplitude),
            ("height", &self.height),
            ("exponent", &self.exponent),
            ("cap", &self.cap),
            ("lower", &self.lower),
            ("upper", &self.upper),
            ("scale", &self.scale),
            ("resolution", &self.resolution),
            ("values", &self.values),
        ];
        let mut out = self.params.clone();
        out.extend(
            named
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))),
        );
        out
    }
}

pub fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("'{s}' is not a hexadecimal seed: {e}"))
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected KEY=VALUE, got '{s}'")),
    }
}
