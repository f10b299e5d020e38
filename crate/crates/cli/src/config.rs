//! Run configuration, shared by the argument parser and JSON config files.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motsheaf_core::hilb::DEFAULT_MAX_POINTS;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable overriding the default cap on Hilbert-scheme points.
pub const MAX_POINTS_ENV: &str = "MOTSHEAF_MAX_POINTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Latex => "latex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Check,
    Betti,
    Hilb,
    SParam,
    Audit,
    Table,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Check => "check",
            CommandKind::Betti => "betti",
            CommandKind::Hilb => "hilb",
            CommandKind::SParam => "s-param",
            CommandKind::Audit => "audit",
            CommandKind::Table => "table",
        }
    }
}

/// Inclusive integer range, written `lo..hi` or as a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad integer {x:?} in range {s:?}"))
        };
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Span {
                lo: parse(lo)?,
                hi: parse(hi.trim_start_matches('='))?,
            }),
            None => {
                let v = parse(s)?;
                Ok(Span { lo: v, hi: v })
            }
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Grid of classes and Euler characteristics for batch tables.
///
/// On the plane `first` ranges over degrees; on `F_e` it ranges over `a` and
/// `second` over `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub first: Span,
    pub second: Option<Span>,
    pub chis: Vec<i64>,
}

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default)]
    pub euler: bool,
    #[serde(default)]
    pub restricted: bool,
    pub format: Format,
    pub max_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
}

impl RunConfig {
    /// Command-line arguments (without the program name) that parse back to
    /// this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.name().to_string(), "--surface".into(), self.surface.clone()];
        if let Some(c) = &self.class {
            args.push("--L".into());
            args.push(join(c));
        }
        if let Some(chi) = self.chi {
            args.push(format!("--chi={chi}"));
        }
        if let Some(n) = self.points {
            args.push("--n".into());
            args.push(n.to_string());
        }
        if self.euler {
            args.push("--euler".into());
        }
        if self.restricted {
            args.push("--restricted".into());
        }
        if let Some(g) = &self.grid {
            let (first, second) = if self.surface == "p2" { ("--degrees", "--b") } else { ("--a", "--b") };
            args.push(format!("{first}={}", g.first));
            if let Some(b) = g.second {
                args.push(format!("{second}={b}"));
            }
            if !g.chis.is_empty() {
                args.push(format!("--chis={}", join(&g.chis)));
            }
        }
        args.push("--format".into());
        args.push(self.format.to_string());
        args.push("--max-points".into());
        args.push(self.max_points.to_string());
        args
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("config: {e}")))
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer {x:?}")))
        .collect()
}

/// Cap from the environment, falling back to the library default.
pub fn default_max_points() -> Result<usize, CliError> {
    match std::env::var(MAX_POINTS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("{MAX_POINTS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_POINTS),
    }
}

#[derive(Debug, Parser)]
#[command(name = "motsheaf", version, about = "Virtual Betti numbers of moduli of one-dimensional sheaves on P2, F0 and F1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest Hilbert scheme expanded; defaults to $MOTSHEAF_MAX_POINTS or 64.
    #[arg(long)]
    pub max_points: Option<usize>,
    /// Print the resolved configuration as JSON instead of running it.
    #[arg(long)]
    pub emit_config: bool,
}

#[derive(Debug, Args)]
pub struct Target {
    /// p2, f0 or f1
    #[arg(long)]
    pub surface: String,
    /// Divisor class: "d" on p2, "a,b" on f0/f1
    #[arg(long = "L", value_name = "CLASS", allow_hyphen_values = true)]
    pub class: String,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Hypothesis report for a class (and optionally chi).
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Controlled virtual Betti and Hodge numbers.
    Betti {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers or Euler number of the Hilbert scheme of n points.
    Hilb {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        euler: bool,
        #[command(flatten)]
        common: Common,
    },
    /// The splitting invariant s_L with a witnessing decomposition.
    SParam {
        #[command(flatten)]
        target: Target,
        /// Only use parts with an integral member.
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension bounds of the bad strata and the codimension audit.
    Audit {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// One row per (class, chi) over a grid.
    Table {
        #[arg(long)]
        surface: String,
        /// Degree range on p2, e.g. 8..10
        #[arg(long, allow_hyphen_values = true)]
        degrees: Option<Span>,
        /// Range of a on f0/f1
        #[arg(long, allow_hyphen_values = true)]
        a: Option<Span>,
        /// Range of b on f0/f1
        #[arg(long, allow_hyphen_values = true)]
        b: Option<Span>,
        /// Comma-separated Euler characteristics
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        chis: Vec<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON configuration file.
    Run {
        #[arg(long)]
        config: std::path::PathBuf,
    },
}

/// What `main` should do after parsing.
#[derive(Debug)]
pub enum Invocation {
    Run(RunConfig),
    EmitConfig(RunConfig),
}

fn parse_coords(s: &str) -> Result<Vec<i64>, CliError> {
    parse_list(s).map_err(|e| CliError::Parse(format!("--L {s:?}: {e}")))
}

impl Sub {
    pub fn into_invocation(self) -> Result<Invocation, CliError> {
        let (config, common) = match self {
            Sub::Run { config } => {
                let text = std::fs::read_to_string(&config)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", config.display())))?;
                return Ok(Invocation::Run(RunConfig::from_json(&text)?));
            }
            Sub::Check { target, chi, common } => (base(CommandKind::Check, &target, chi)?, common),
            Sub::Betti { target, chi, common } => (base(CommandKind::Betti, &target, Some(chi))?, common),
            Sub::SParam {
                target,
                restricted,
                common,
            } => (
                RunConfig {
                    restricted,
                    ..base(CommandKind::SParam, &target, None)?
                },
                common,
            ),
            Sub::Audit { target, chi, common } => (base(CommandKind::Audit, &target, chi)?, common),
            Sub::Hilb {
                surface,
                n,
                euler,
                common,
            } => (
                RunConfig {
                    points: Some(n),
                    euler,
                    ..empty(CommandKind::Hilb, surface)
                },
                common,
            ),
            Sub::Table {
                surface,
                degrees,
                a,
                b,
                chis,
                common,
            } => {
                let first = degrees.or(a).ok_or_else(|| {
                    CliError::Parse("table needs --degrees (p2) or --a/--b (f0, f1)".into())
                })?;
                let second = if degrees.is_some() { None } else { b };
                (
                    RunConfig {
                        grid: Some(Grid { first, second, chis }),
                        ..empty(CommandKind::Table, surface)
                    },
                    common,
                )
            }
        };
        let config = RunConfig {
            format: common.format,
            max_points: match common.max_points {
                Some(m) => m,
                None => default_max_points()?,
            },
            ..config
        };
        Ok(if common.emit_config {
            Invocation::EmitConfig(config)
        } else {
            Invocation::Run(config)
        })
    }
}

fn empty(command: CommandKind, surface: String) -> RunConfig {
    RunConfig {
        command,
        surface: surface.trim().to_ascii_lowercase(),
        class: None,
        chi: None,
        points: None,
        euler: false,
        restricted: false,
        format: Format::Text,
        max_points: DEFAULT_MAX_POINTS,
        grid: None,
    }
}

fn base(command: CommandKind, target: &Target, chi: Option<i64>) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        class: Some(parse_coords(&target.class)?),
        chi,
        ..empty(command, target.surface.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("motsheaf").chain(args.iter().copied())).unwrap();
        match cli.command.into_invocation().unwrap() {
            Invocation::Run(c) | Invocation::EmitConfig(c) => c,
        }
    }

    fn round_trip(c: &RunConfig) -> RunConfig {
        let args = c.to_args();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        parse(&refs)
    }

    #[test]
    fn spans() {
        assert_eq!("8..10".parse::<Span>().unwrap(), Span { lo: 8, hi: 10 });
        assert_eq!("-3..=2".parse::<Span>().unwrap(), Span { lo: -3, hi: 2 });
        assert_eq!("5".parse::<Span>().unwrap(), Span { lo: 5, hi: 5 });
        assert!("x..2".parse::<Span>().is_err());
        assert_eq!(parse_list("-1,-7").unwrap(), vec![-1, -7]);
    }

    #[test]
    fn configs_round_trip_through_arguments_and_json() {
        let cases: &[&[&str]] = &[
            &["betti", "--surface", "p2", "--L", "8", "--chi", "-7", "--format", "json"],
            &["check", "--surface", "f1", "--L", "2,3"],
            &["hilb", "--surface", "p2", "--n", "2", "--euler", "--max-points", "80"],
            &["s-param", "--surface", "f0", "--L", "3,3", "--restricted"],
            &["audit", "--surface", "p2", "--L", "9", "--chi", "-3", "--format", "csv"],
            &["table", "--surface", "p2", "--degrees", "8..10", "--chis", "-1,-7"],
            &["table", "--surface", "f1", "--a", "1..3", "--b", "2..5", "--chis", "1", "--format", "latex"],
            &["table", "--surface", "p2", "--degrees", "3..2"],
        ];
        for args in cases {
            let c = parse(args);
            assert_eq!(round_trip(&c), c, "{args:?}");
            assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c, "{args:?}");
        }
    }

    #[test]
    fn bad_arguments_are_rejected() {
        assert!(Cli::try_parse_from(["motsheaf", "betti", "--surface", "p2", "--L", "8"]).is_err());
        let cli = Cli::try_parse_from(["motsheaf", "check", "--surface", "p2", "--L", "x"]).unwrap();
        assert!(matches!(cli.command.into_invocation(), Err(CliError::Parse(_))));
        assert!(RunConfig::from_json("{").is_err());
    }
}
