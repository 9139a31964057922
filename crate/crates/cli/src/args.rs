//! Flags and their config-file mirror.
//!
//! Every subcommand's flags double as the keys of an optional TOML config
//! file (`--k` ↔ `k`, `--q-max` ↔ `q-max`). A flag given on the command line
//! always wins over the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "orbsurf",
    version,
    about = "Exact invariants of surfaces, covers and orbifold pairs"
)]
pub struct Cli {
    /// TOML file whose keys mirror the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chern numbers of a cyclic cover branched in |mL|.
    Cover(CoverArgs),
    /// The P1/P2 positivity criteria for a branch class.
    P1p2(CoverArgs),
    /// Grid search over Bogomolov–Tschinkel parameters (k, a, b, m).
    BtSearch(SearchArgs),
    /// Section lower bounds LB(q) and the positivity threshold.
    Bound(BoundArgs),
    /// Contact order and m-tangency of a curve germ.
    Tangency(TangencyArgs),
    /// Runs the seeded invariant suite.
    Verify(VerifyArgs),
}

/// Output selection shared by all subcommands.
#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Format {
    #[arg(long, conflicts_with = "csv")]
    #[serde(default)]
    pub json: bool,
    #[arg(long)]
    #[serde(default)]
    pub csv: bool,
}

impl Format {
    fn merge(&mut self, file: Format) {
        if !self.json && !self.csv {
            *self = file;
        }
    }
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CoverArgs {
    /// p2, p1xp1, b0 or b (the last two need --k, --a, --b).
    #[arg(long)]
    pub surface: Option<String>,
    /// Surface model as JSON {basis, gram, canonical, c1_sq, c2}.
    #[arg(long, value_name = "FILE", conflicts_with = "surface")]
    pub surface_file: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
    /// Branch half-class, comma-separated coefficients in the surface basis.
    #[arg(long = "L", value_name = "COEFFS", allow_hyphen_values = true)]
    #[serde(rename = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub m: Option<i64>,
    /// Vouch for a smooth branch curve (enables the integrality check).
    #[arg(long)]
    #[serde(default)]
    pub smooth_branch: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub format: Format,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SearchArgs {
    /// Inclusive range "lo..hi" or a single value.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    /// Branch class: pencil-class (L = L0) or pencil-class-over-m (L = L0/m).
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub format: Format,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct BoundArgs {
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Last q scanned for LB(q) > 0.
    #[arg(long)]
    pub q_max: Option<u64>,
    /// Twist class A: `K` for the canonical class or comma-separated coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub format: Format,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TangencyArgs {
    /// Germ JSON {x: [...], y: [...], T}, inline or a file path.
    #[arg(long)]
    pub germ: Option<String>,
    /// Local equation as JSON {"i,j": coeff} for the monomial x^i y^j, inline or a file path.
    #[arg(long)]
    pub divisor: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    /// classical or nonclassical.
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub format: Format,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random samples per randomized property.
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub format: Format,
}

macro_rules! merge_options {
    ($dst:expr, $src:expr; $($field:ident),*) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field; } )*
    };
}

pub trait Merge: Sized {
    /// Fills unset flags from the config file.
    fn merge(&mut self, file: Self);
}

impl Merge for CoverArgs {
    fn merge(&mut self, file: Self) {
        if self.surface.is_none() && self.surface_file.is_none() {
            self.surface = file.surface;
            self.surface_file = file.surface_file;
        }
        merge_options!(self, file; k, a, b, l, m);
        self.smooth_branch |= file.smooth_branch;
        self.format.merge(file.format);
    }
}

impl Merge for SearchArgs {
    fn merge(&mut self, file: Self) {
        merge_options!(self, file; k, a, b, m, mode);
        self.format.merge(file.format);
    }
}

impl Merge for BoundArgs {
    fn merge(&mut self, file: Self) {
        merge_options!(self, file; k, a, b, m, q_max, twist);
        self.format.merge(file.format);
    }
}

impl Merge for TangencyArgs {
    fn merge(&mut self, file: Self) {
        merge_options!(self, file; germ, divisor, m, mode);
        self.format.merge(file.format);
    }
}

impl Merge for VerifyArgs {
    fn merge(&mut self, file: Self) {
        merge_options!(self, file; seed, samples);
        self.format.merge(file.format);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let mut flags = BoundArgs {
            k: Some(5),
            ..Default::default()
        };
        let file: BoundArgs = toml::from_str("k = 3\na = 36\nq-max = 90\ncsv = true").unwrap();
        flags.merge(file);
        assert_eq!(
            (flags.k, flags.a, flags.q_max),
            (Some(5), Some(36), Some(90))
        );
        assert!(flags.format.csv);
    }

    #[test]
    fn explicit_format_is_kept() {
        let mut flags = SearchArgs {
            format: Format {
                json: true,
                csv: false,
            },
            ..Default::default()
        };
        flags.merge(toml::from_str("csv = true").unwrap());
        assert!(flags.format.json && !flags.format.csv);
    }

    #[test]
    fn cover_keys_include_branch_class() {
        let file: CoverArgs = toml::from_str("surface = \"p2\"\nL = \"1\"\nm = 2").unwrap();
        assert_eq!(file.l.as_deref(), Some("1"));
    }
}
