//! Command-line flags and the optional `key = value` config file.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "nehari-ft", version, about = "Stationary states, ground states and stability for NLS with a Fuelop-Tsutsui point defect")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Both branches at one frequency, or their profiles with --profile.
    Stationary,
    /// Branch table over a frequency range.
    Bifurcation,
    /// Mass, its derivative and the stability verdict over a frequency range.
    MassCurve,
    /// Lowest eigenvalues of both linearized operators.
    Spectral,
    /// Which branch minimizes the action on the Nehari manifold.
    GroundState,
    /// Evolve the (perturbed) ground state and record drifts.
    Evolve,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stationary => "stationary",
            Command::Bifurcation => "bifurcation",
            Command::MassCurve => "mass-curve",
            Command::Spectral => "spectral",
            Command::GroundState => "ground-state",
            Command::Evolve => "evolve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Every flag is optional here so a config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Read `key = value` lines from this file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true)]
    pub v: Option<f64>,
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Grid half-width; defaults to a width suited to the frequency.
    #[arg(long = "grid-L", global = true)]
    pub grid_l: Option<f64>,
    /// Intervals per half-line.
    #[arg(long = "grid-N", global = true)]
    pub grid_n: Option<usize>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long = "t-final", global = true)]
    pub t_final: Option<f64>,
    #[arg(long = "omega-min", global = true)]
    pub omega_min: Option<f64>,
    #[arg(long = "omega-max", global = true)]
    pub omega_max: Option<f64>,
    #[arg(long = "omega-steps", global = true)]
    pub omega_steps: Option<usize>,
    /// Space the frequency grid evenly in log(omega).
    #[arg(long = "log-omega", global = true)]
    pub log_omega: bool,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Seed for the initial perturbation of `evolve`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Perturbation size for `evolve`, relative to the sup norm.
    #[arg(long, global = true)]
    pub amplitude: Option<f64>,
    /// Multiply the initial data of `evolve` by this factor.
    #[arg(long, global = true)]
    pub scale: Option<f64>,
    /// Steps between trajectory rows.
    #[arg(long = "snapshot-stride", global = true)]
    pub snapshot_stride: Option<usize>,
    /// `stationary`: emit sampled profiles instead of the branch summary.
    #[arg(long, global = true)]
    pub profile: bool,
    /// `ground-state`: also run the variational minimizer.
    #[arg(long, global = true)]
    pub variational: bool,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::usage(format!("config key {key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, Failure> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Failure::usage(format!("config key {key}: expected a boolean, got {value:?}"))),
    }
}

impl Options {
    /// Fill unset options from config-file text.
    pub fn merge_config(&mut self, text: &str) -> Result<(), Failure> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim().trim_start_matches("--"), value.trim());
            macro_rules! fill {
                ($field:ident) => {
                    if self.$field.is_none() {
                        self.$field = Some(parse(key, value)?);
                    }
                };
            }
            match key {
                "tau" => fill!(tau),
                "v" => fill!(v),
                "mu" => fill!(mu),
                "omega" => fill!(omega),
                "grid-L" => fill!(grid_l),
                "grid-N" => fill!(grid_n),
                "dt" => fill!(dt),
                "t-final" => fill!(t_final),
                "omega-min" => fill!(omega_min),
                "omega-max" => fill!(omega_max),
                "omega-steps" => fill!(omega_steps),
                "output" => fill!(output),
                "seed" => fill!(seed),
                "amplitude" => fill!(amplitude),
                "scale" => fill!(scale),
                "snapshot-stride" => fill!(snapshot_stride),
                "format" => {
                    if self.format.is_none() {
                        self.format = Some(Format::parse(value).ok_or_else(|| {
                            Failure::usage(format!("config key format: expected csv or json, got {value:?}"))
                        })?);
                    }
                }
                "log-omega" => self.log_omega |= parse_bool(key, value)?,
                "profile" => self.profile |= parse_bool(key, value)?,
                "variational" => self.variational |= parse_bool(key, value)?,
                _ => return Err(Failure::usage(format!("unknown config key {key:?}"))),
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Failure> {
        value.ok_or_else(|| Failure::usage(format!("missing required option --{flag}")))
    }

    /// `key=value` pairs of everything that was set, in a fixed order.
    pub fn describe(&self, command: Command) -> String {
        let mut s = format!("command={}", command.name());
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = write!(s, " {k}={v}");
            }
        };
        put("tau", self.tau.map(|x| x.to_string()));
        put("v", self.v.map(|x| x.to_string()));
        put("mu", self.mu.map(|x| x.to_string()));
        put("omega", self.omega.map(|x| x.to_string()));
        put("grid-L", self.grid_l.map(|x| x.to_string()));
        put("grid-N", self.grid_n.map(|x| x.to_string()));
        put("dt", self.dt.map(|x| x.to_string()));
        put("t-final", self.t_final.map(|x| x.to_string()));
        put("omega-min", self.omega_min.map(|x| x.to_string()));
        put("omega-max", self.omega_max.map(|x| x.to_string()));
        put("omega-steps", self.omega_steps.map(|x| x.to_string()));
        put("log-omega", Some(self.log_omega.to_string()));
        put("format", Some(self.format().name().to_string()));
        put("seed", self.seed.map(|x| x.to_string()));
        put("amplitude", self.amplitude.map(|x| x.to_string()));
        put("scale", self.scale.map(|x| x.to_string()));
        put("snapshot-stride", self.snapshot_stride.map(|x| x.to_string()));
        put("profile", Some(self.profile.to_string()));
        put("variational", Some(self.variational.to_string()));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        let mut o = Options {
            tau: Some(3.0),
            ..Default::default()
        };
        o.merge_config("tau = 2\nv=1 # comment\n\nlog-omega = true\nformat = json\n")
            .unwrap();
        assert_eq!(o.tau, Some(3.0));
        assert_eq!(o.v, Some(1.0));
        assert!(o.log_omega);
        assert_eq!(o.format(), Format::Json);
    }

    #[test]
    fn bad_config_is_a_usage_error() {
        let mut o = Options::default();
        assert_eq!(o.merge_config("colour = red").unwrap_err().exit_code(), 2);
        assert_eq!(o.merge_config("tau = two").unwrap_err().exit_code(), 2);
        assert_eq!(o.merge_config("tau").unwrap_err().exit_code(), 2);
    }
}
