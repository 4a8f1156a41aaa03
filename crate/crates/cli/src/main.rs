//! `nctriples`: build spectral triples from weighted groups and verify them.
//!
//! Exit codes: 0 when no selected check fails, 1 when one does, 2 on input errors.

mod commands;
mod report;
mod spec;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use commands::{FunctorArgs, MorphismArgs, Outcome, PhiSource, VerifyOptions, MORPHISM_CHECKS, VERIFY_CHECKS};
use report::{Report, RunConfig};
use spec::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "nctriples", version, about = "Spectral triples on weighted discrete groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble a truncated triple and run the axiom checks.
    BuildTriple {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        radius: u32,
        /// Comma-separated ball generators; defaults to the weight's or the group's canonical ones.
        #[arg(long)]
        gens: Option<String>,
        /// Build `(D, -D)` with the swap grading.
        #[arg(long)]
        double: bool,
        /// Write the triple spec (with summary) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites on a triple spec.
    Verify {
        #[arg(long)]
        triple: PathBuf,
        /// all, or a comma list of axioms, real, ko, regularity, heat (heat_trace), grading.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Heat-trace parameter.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Element for the regularity chain; defaults to the first generator.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Check a morphism between two triples.
    #[command(group(ArgGroup::new("map").required(true).args(["hom", "phi"])))]
    Morphism {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Group homomorphism; Φ is its ball matrix.
        #[arg(long)]
        hom: Option<PathBuf>,
        /// Explicit Φ.
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Comma list of base, real, even, pforms, fluctuation, or all.
        #[arg(long, default_value = "base")]
        checks: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        allow_non_spectral: bool,
    },
    /// Functor laws along a chain of homomorphisms; epimorphisms also get splittings.
    Functor {
        /// Comma-separated hom spec files, composable left to right.
        #[arg(long)]
        chain: String,
        /// One weight spec per group in the chain; word length by default.
        #[arg(long)]
        weights: Option<String>,
        /// Ball radius for infinite groups; targets grow as needed.
        #[arg(long, default_value_t = 8)]
        radius: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Splittings of an epimorphism and their triple morphisms.
    Relator {
        #[arg(long)]
        epi: PathBuf,
        /// WG.json, or WG.json,WH.json for a fixed quotient weight.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn display(p: &std::path::Path) -> String {
    p.display().to_string()
}

fn config(cli: &Cli) -> RunConfig {
    let mut inputs = BTreeMap::new();
    let mut parameters = BTreeMap::new();
    let mut radius = None;
    let mut generators = None;
    let mut checks = Vec::new();
    let mut output = None;
    let command = match &cli.command {
        Command::BuildTriple {
            group,
            weight,
            radius: r,
            gens,
            double,
            out,
        } => {
            inputs.insert("group".into(), display(group));
            inputs.insert("weight".into(), display(weight));
            radius = Some(*r);
            generators = gens.clone();
            parameters.insert("double".into(), double.to_string());
            output = out.as_deref().map(display);
            "build-triple"
        }
        Command::Verify {
            triple,
            checks: c,
            t,
            x,
            depth,
            samples,
        } => {
            inputs.insert("triple".into(), display(triple));
            checks = commands::parse_check_list(c, &VERIFY_CHECKS).unwrap_or_default();
            parameters.insert("t".into(), t.to_string());
            parameters.insert("depth".into(), depth.to_string());
            parameters.insert("samples".into(), samples.to_string());
            if let Some(x) = x {
                parameters.insert("x".into(), x.clone());
            }
            "verify"
        }
        Command::Morphism {
            source,
            target,
            hom,
            phi,
            checks: c,
            samples,
            allow_non_spectral,
        } => {
            inputs.insert("source".into(), display(source));
            inputs.insert("target".into(), display(target));
            if let Some(h) = hom {
                inputs.insert("hom".into(), display(h));
            }
            if let Some(p) = phi {
                inputs.insert("phi".into(), display(p));
            }
            checks = commands::parse_check_list(c, &MORPHISM_CHECKS).unwrap_or_default();
            parameters.insert("samples".into(), samples.to_string());
            parameters.insert("allow_non_spectral".into(), allow_non_spectral.to_string());
            "morphism"
        }
        Command::Functor {
            chain,
            weights,
            radius: r,
            samples,
        } => {
            inputs.insert("chain".into(), chain.clone());
            if let Some(w) = weights {
                inputs.insert("weights".into(), w.clone());
            }
            radius = Some(*r);
            parameters.insert("samples".into(), samples.to_string());
            "functor"
        }
        Command::Relator { epi, weights, samples } => {
            inputs.insert("epi".into(), display(epi));
            inputs.insert("weights".into(), weights.clone());
            parameters.insert("samples".into(), samples.to_string());
            "relator"
        }
    };
    RunConfig {
        command: command.into(),
        inputs,
        radius,
        generators,
        checks,
        parameters,
        seed: cli.seed,
        output,
        format: match cli.format {
            Format::Json => "json".into(),
            Format::Text => "text".into(),
        },
    }
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let seed = cli.seed;
    match &cli.command {
        Command::BuildTriple {
            group,
            weight,
            radius,
            gens,
            double,
            out,
        } => commands::build_triple(group, weight, *radius, gens.as_deref(), *double, out.as_deref()),
        Command::Verify {
            triple,
            checks,
            t,
            x,
            depth,
            samples,
        } => {
            let list = commands::parse_check_list(checks, &VERIFY_CHECKS)?;
            let opts = VerifyOptions {
                t: *t,
                x: x.clone(),
                depth: *depth,
                samples: *samples,
                seed,
            };
            commands::verify(triple, &list, &opts)
        }
        Command::Morphism {
            source,
            target,
            hom,
            phi,
            checks,
            samples,
            allow_non_spectral,
        } => {
            let phi = match (hom, phi) {
                (Some(h), None) => PhiSource::Hom(h.clone()),
                (None, Some(p)) => PhiSource::Phi(p.clone()),
                _ => return Err(InputError("pass exactly one of --hom and --phi".into())),
            };
            let args = MorphismArgs {
                source,
                target,
                phi,
                checks: commands::parse_check_list(checks, &MORPHISM_CHECKS)?,
                samples: *samples,
                seed,
                allow_non_spectral: *allow_non_spectral,
            };
            commands::morphism(&args)
        }
        Command::Functor {
            chain,
            weights,
            radius,
            samples,
        } => commands::functor(&FunctorArgs {
            chain,
            weights: weights.as_deref(),
            radius: *radius,
            samples: *samples,
            seed,
        }),
        Command::Relator { epi, weights, samples } => commands::relator(epi, weights, *samples, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let report = Report::new(config(&cli), outcome.checks, outcome.summary, elapsed_ms);
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    // A closed pipe on stdout does not change the verdict.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
