//! Command-line front end.
//!
//! `stfix <command> [--config PATH] [--seed N] [--out PATH] [flags]`. Flags
//! override values read from the configuration file.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{config_error, run_command};
pub use config::{build_config, parse_config, parse_entries, Command, ConfigError, Entry, RunConfig, Source};
pub use report::{format_float, Report, ReportRecord, Value};

macro_rules! flag_set {
    ($name:ident { $($field:ident : $key:literal => $long:literal),* $(,)? }) => {
        #[derive(Args, Debug, Default)]
        pub struct $name {
            $(
                #[arg(long = $long, value_name = "VALUE")]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn entries(&self) -> Vec<Entry> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(Entry { key: $key.into(), value: v.clone(), source: Source::Flag });
                    }
                )*
                out
            }
        }
    };
}

flag_set!(AngleFlags { p: "p" => "p", n: "n" => "n", k: "k" => "k", d: "D" => "D", pair: "pair" => "pair", cap: "cap" => "cap" });
flag_set!(HeisenbergFlags { p: "p" => "p" });
flag_set!(EnumerateFlags {
    p: "p" => "p", n: "n" => "n", k: "k" => "k", d: "D" => "D",
    pair: "pair" => "pair", subgroup: "subgroup" => "subgroup", cap: "cap" => "cap",
});
flag_set!(RelationsFlags { p: "p" => "p", n: "n" => "n", k: "k" => "k", d: "D" => "D" });
flag_set!(SolveFlags {
    scenario: "scenario" => "scenario", model: "model" => "model", dim: "dim" => "dim",
    curvature: "curvature" => "curvature", tol: "tol" => "tol", max_iter: "max_iter" => "max-iter",
    p: "p" => "p", n: "n" => "n", k: "k" => "k", cap: "cap" => "cap",
    mirror_angle: "mirror_angle" => "mirror-angle", offset: "offset" => "offset", spread: "spread" => "spread",
});
flag_set!(FhCheckFlags { dim: "dim" => "dim", trials: "trials" => "trials" });
flag_set!(FlatnessFlags { scales: "scales" => "scales", dim: "dim" => "dim", curvature: "curvature" => "curvature" });
flag_set!(VerifyFlags {
    suite: "suite" => "suite", p: "p" => "p", n: "n" => "n", k: "k" => "k", d: "D" => "D",
    dim: "dim" => "dim", curvature: "curvature" => "curvature", trials: "trials" => "trials",
    samples: "samples" => "samples",
});

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Angle between the generating subgroups of a pairwise Steinberg subgroup.
    Angle(AngleFlags),
    /// Angles in every irreducible representation of the Heisenberg group.
    Heisenberg(HeisenbergFlags),
    /// Orders of the enumerated Steinberg subgroups.
    Enumerate(EnumerateFlags),
    /// Steinberg relations over all degree one coefficients.
    Relations(RelationsFlags),
    /// Minimize the triangle energy on a generated scenario.
    Solve(SolveFlags),
    /// Barycenter inequality on random triangles and the affine minimization.
    FhCheck(FhCheckFlags),
    /// CAT(0) defect of a unit probe under blow-up.
    Flatness(FlatnessFlags),
    /// Run a verification suite.
    Verify(VerifyFlags),
}

#[derive(Parser, Debug)]
#[command(name = "stfix", version, about = "Subgroup angles and fixed points of isometric actions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<String>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
}

/// What a run produced: the report and where to write it besides stdout.
#[derive(Debug)]
pub struct Invocation {
    pub report: Report,
    pub out: Option<PathBuf>,
    /// Help or version text; printed instead of a report.
    pub message: Option<String>,
}

/// Parse `args` (program name first), read the configuration file and run.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Invocation {
                    report: Report {
                        records: vec![],
                        status: "ok".into(),
                        exit_code: 0,
                    },
                    out: None,
                    message: Some(e.to_string()),
                };
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Invocation {
                report: config_error(first),
                out: None,
                message: None,
            };
        }
    };
    let (command, flags) = match &cli.command {
        Cmd::Angle(f) => (Command::Angle, f.entries()),
        Cmd::Heisenberg(f) => (Command::Heisenberg, f.entries()),
        Cmd::Enumerate(f) => (Command::Enumerate, f.entries()),
        Cmd::Relations(f) => (Command::Relations, f.entries()),
        Cmd::Solve(f) => (Command::Solve, f.entries()),
        Cmd::FhCheck(f) => (Command::FhCheck, f.entries()),
        Cmd::Flatness(f) => (Command::Flatness, f.entries()),
        Cmd::Verify(f) => (Command::Verify, f.entries()),
    };
    let mut entries = Vec::new();
    if let Some(path) = &cli.config {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                return Invocation {
                    report: config_error(&format!("cannot read {}: {e}", path.display())),
                    out: None,
                    message: None,
                };
            }
        };
        match parse_config(&text) {
            Ok(_) => entries = parse_entries(&text).expect("parsed above"),
            Err(e) => {
                return Invocation {
                    report: config_error(&e.to_string()),
                    out: None,
                    message: None,
                };
            }
        }
    }
    for (key, value) in [("seed", &cli.seed), ("out", &cli.out)] {
        if let Some(v) = value {
            entries.push(Entry {
                key: key.into(),
                value: v.clone(),
                source: Source::Flag,
            });
        }
    }
    entries.extend(flags);
    let cfg = match build_config(&entries) {
        Ok(cfg) => cfg,
        Err(e) => {
            return Invocation {
                report: config_error(&e.to_string()),
                out: None,
                message: None,
            };
        }
    };
    Invocation {
        report: run_command(command, &cfg),
        out: cfg.out.clone(),
        message: None,
    }
}
