use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use racah_core::{parse_scalar, ParameterSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Commutation,
    RankOne,
    Classical,
    Lind,
    Bispectral,
    Sigma,
    Spectrum,
    Orthogonality,
    Specialization,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Commutation,
        Suite::RankOne,
        Suite::Classical,
        Suite::Lind,
        Suite::Bispectral,
        Suite::Sigma,
        Suite::Spectrum,
        Suite::Orthogonality,
        Suite::Specialization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Commutation => "commutation",
            Suite::RankOne => "rank-one",
            Suite::Classical => "classical",
            Suite::Lind => "lind",
            Suite::Bispectral => "bispectral",
            Suite::Sigma => "sigma",
            Suite::Spectrum => "spectrum",
            Suite::Orthogonality => "orthogonality",
            Suite::Specialization => "specialization",
        }
    }

    /// Suites tied to the three-label case.
    fn needs_three_labels(self) -> bool {
        matches!(self, Suite::Classical | Suite::Specialization)
    }
}

/// Contents of a `--config` file; every field is optional and flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    pub beta: Option<Vec<String>>,
    pub mode: Option<Mode>,
    pub suites: Option<Vec<SuiteSelection>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum SuiteSelection {
    One(Suite),
    All(AllKeyword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllKeyword {
    All,
}

/// Parameter and output flags shared by the subcommands.
#[derive(Clone, Debug, Default, Args)]
pub struct ConfigArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of labels n.
    #[arg(short = 'n', long = "n")]
    pub n: Option<usize>,
    /// Total degree N.
    #[arg(short = 'N', long = "N")]
    pub big_n: Option<u32>,
    /// Comma-separated rational literals beta_0,...,beta_{n-1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Comma-separated suite names, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub suites: Option<Vec<String>>,
    /// Destination file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Check every ordered triple of disjoint label sets in the rank-one suite.
    #[arg(long)]
    pub full_rank_one: bool,
    /// Keep the spectrum suite in `all` for n >= 5.
    #[arg(long)]
    pub spectrum: bool,
}

/// A validated configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub beta: Vec<String>,
    pub mode: Mode,
    pub suites: Vec<Suite>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub format: Option<Format>,
    pub full_rank_one: bool,
    #[serde(skip)]
    pub params: ParameterSet,
}

fn read_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid configuration in {}", path.display()))
}

fn parse_suites(names: &[String]) -> Result<Vec<SuiteSelection>> {
    names
        .iter()
        .map(|name| {
            let name = name.trim();
            if name == "all" {
                return Ok(SuiteSelection::All(AllKeyword::All));
            }
            Suite::from_str(name, false)
                .map(SuiteSelection::One)
                .map_err(|_| anyhow::anyhow!("unknown suite {name:?}"))
        })
        .collect()
}

impl ConfigArgs {
    /// Merges flags over the config file and checks the parameters for genericity.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => read_file(path)?,
            None => ConfigFile::default(),
        };
        let n = self.n.or(file.n).context("missing n")?;
        let big_n = self.big_n.or(file.big_n).context("missing N")?;
        let beta_text = self.beta.clone().or(file.beta).context("missing beta")?;
        let beta = beta_text.iter().map(|b| parse_scalar(b)).collect::<Result<Vec<_>, _>>()?;
        let params = ParameterSet::new(n, big_n, beta)?;

        let selection = match &self.suites {
            Some(names) => parse_suites(names)?,
            None => file.suites.unwrap_or_else(|| vec![SuiteSelection::All(AllKeyword::All)]),
        };
        let mut suites = Vec::new();
        for s in selection {
            match s {
                SuiteSelection::One(suite) => {
                    if suite.needs_three_labels() && n != 3 {
                        bail!("suite {} needs n = 3, got n = {n}", suite.name());
                    }
                    suites.push(suite);
                }
                SuiteSelection::All(_) => suites.extend(Suite::ALL.into_iter().filter(|s| {
                    (!s.needs_three_labels() || n == 3) && (*s != Suite::Spectrum || n < 5 || self.spectrum)
                })),
            }
        }
        suites.sort();
        suites.dedup();

        Ok(RunConfig {
            n,
            big_n,
            beta: params.betas().iter().map(|b| b.to_string()).collect(),
            mode: self.mode.or(file.mode).unwrap_or(Mode::Both),
            suites,
            output: self.output.clone().or(file.output),
            format: self.format.or(file.format),
            full_rank_one: self.full_rank_one || n <= 4,
            params,
        })
    }
}
