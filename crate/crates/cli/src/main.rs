//! Command-line front end: decompose specifications, synthesize them
//! modularly and check strategies.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modsynth::automata::hoa::{parse_hoa, write_hoa};
use modsynth::automata::{ltl_to_nba, AutomataError, ComplementLimits, Nba};
use modsynth::decomposition::{decompose_nba_with, decompose_spec, DecompositionError, Manifest, ManifestPart, Mode};
use modsynth::ltl::spec_file::{parse_spec, write_spec};
use modsynth::ltl::SpecContext;
use modsynth::modular::{modular_synthesize, modular_synthesize_ag, ModularError};
use modsynth::synthesis::json::{from_json, to_json};
use modsynth::synthesis::{
    verify, verify_counterstrategy, Builtin, BuiltinOptions, External, SynthesisBackend, SynthesisError,
    SynthesisResult, Verdict,
};

use report::RunReport;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NBA_BOUND: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_BACKEND: u8 = 5;

#[derive(Parser)]
#[command(name = "modsynth", version, about = "Specification decomposition and modular reactive synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a specification into subspecifications over disjoint outputs.
    ///
    /// Writes one file per part (`part_<k>.spec`, or `part_<k>.hoa` in nba
    /// mode) and `manifest.txt` into the output directory. The ltl-opt mode
    /// drops assumptions without checking their negation; `synth` performs
    /// that check.
    Decompose {
        /// Specification file, or an HOA automaton for `--mode nba`.
        spec: PathBuf,
        #[arg(long, default_value_t = Mode::LtlOpt)]
        mode: Mode,
        /// Output directory (created if missing).
        #[arg(long, default_value = "parts")]
        out: PathBuf,
        /// Largest automaton complemented during nba decomposition.
        #[arg(long, default_value_t = ComplementLimits::default().max_states)]
        nba_bound: usize,
    },
    /// Decide realizability modularly and emit a strategy or counterstrategy.
    Synth {
        spec: PathBuf,
        #[arg(long, default_value_t = Mode::LtlOpt)]
        mode: Mode,
        /// `builtin`, or `exec:<command>` to run an external tool as
        /// `<command> <spec file>`.
        #[arg(long, default_value = "builtin")]
        backend: String,
        /// Worker threads for the subtasks (0 uses all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Where to write the strategy or counterstrategy as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the run report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Largest machine the builtin backend searches for.
        #[arg(long, default_value_t = BuiltinOptions::default().max_states)]
        max_states: usize,
    },
    /// Check a strategy (or counterstrategy) JSON file against a specification.
    Check { spec: PathBuf, strategy: PathBuf },
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn is_hoa(text: &str) -> bool {
    text.trim_start().starts_with("HOA:")
}

fn load_spec(path: &Path) -> Result<SpecContext, Failure> {
    let text = read(path)?;
    if is_hoa(&text) {
        return Err(Failure::input(format!("{}: automata can only be decomposed with --mode nba", path.display())));
    }
    let ctx = parse_spec(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?.context();
    ctx.validate().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(ctx)
}

fn automata_failure(e: AutomataError) -> Failure {
    match e {
        AutomataError::ComplementBound { .. } | AutomataError::StateLimit { .. } | AutomataError::TooManyProps(_) => {
            Failure { code: EXIT_NBA_BOUND, message: e.to_string() }
        }
        other => Failure::input(other),
    }
}

fn decompose(spec: &Path, mode: Mode, out: &Path, nba_bound: usize) -> Result<(), Failure> {
    let text = read(spec)?;
    let (manifest, files) = if mode == Mode::Nba {
        let a: Nba = if is_hoa(&text) {
            parse_hoa(&text).map_err(|e| Failure::input(format!("{}: {e}", spec.display())))?
        } else {
            let ctx = load_spec(spec)?;
            let aps = ctx.variables();
            ltl_to_nba(&ctx.formula, &aps).and_then(|a| a.with_outputs(ctx.outputs.clone())).map_err(automata_failure)?
        };
        let limits = ComplementLimits { max_states: nba_bound, ..Default::default() };
        let parts = decompose_nba_with(&a, &limits).map_err(|e| match e {
            DecompositionError::Automata(e) => automata_failure(e),
            other => Failure::input(other),
        })?;
        let entries = parts
            .iter()
            .enumerate()
            .map(|(k, p)| ManifestPart {
                file: format!("part_{k}.hoa"),
                inputs: p.inputs(),
                outputs: p.outputs().clone(),
                origin: Vec::new(),
            })
            .collect();
        let files: Vec<String> = parts.iter().map(write_hoa).collect();
        (Manifest::new(mode.to_string(), a.inputs(), a.outputs().clone(), entries), files)
    } else {
        let ctx = load_spec(spec)?;
        let parts = decompose_spec(&ctx, mode);
        let entries = parts.iter().enumerate().map(|(k, p)| ManifestPart::for_subspec(k, p, "spec")).collect();
        let files = parts.iter().map(|p| write_spec(&p.ctx)).collect();
        (Manifest::new(mode.to_string(), ctx.inputs.clone(), ctx.outputs.clone(), entries), files)
    };
    fs::create_dir_all(out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    for (part, text) in manifest.parts.iter().zip(&files) {
        write(&out.join(&part.file), text)?;
    }
    write(&out.join("manifest.txt"), &manifest.render())?;
    println!("{} subspecifications", manifest.parts.len());
    Ok(())
}

fn backend_from(spec: &str, max_states: usize) -> Result<Box<dyn SynthesisBackend>, Failure> {
    if spec == "builtin" {
        Ok(Box::new(Builtin(BuiltinOptions::with_max_states(max_states))))
    } else if let Some(command) = spec.strip_prefix("exec:") {
        if command.trim().is_empty() {
            return Err(Failure::input("`exec:` needs a command"));
        }
        Ok(Box::new(External { command: command.to_string() }))
    } else {
        Err(Failure::input(format!("unknown backend `{spec}` (expected builtin or exec:<command>)")))
    }
}

fn modular_failure(e: ModularError) -> Failure {
    match e {
        ModularError::Synthesis(SynthesisError::Context(_)) => Failure::input(e),
        _ => Failure { code: EXIT_BACKEND, message: e.to_string() },
    }
}

fn synth(
    spec: &Path,
    mode: Mode,
    backend_spec: &str,
    jobs: usize,
    out: Option<&Path>,
    report: Option<&Path>,
    max_states: usize,
) -> Result<u8, Failure> {
    if mode == Mode::Nba {
        return Err(Failure::input("--mode nba is only available for `decompose`"));
    }
    let ctx = load_spec(spec)?;
    let backend = backend_from(backend_spec, max_states)?;
    let run = match mode {
        Mode::LtlOpt => modular_synthesize_ag(&ctx, backend.as_ref(), jobs),
        _ => modular_synthesize(&ctx, mode, backend.as_ref(), jobs),
    }
    .map_err(modular_failure)?;

    println!("{}", run.verdict());
    println!("subspecifications: {}", run.parts.len());
    if let SynthesisResult::Unknown(reason) = &run.result {
        println!("reason: {reason}");
    }
    if let Some(path) = out {
        write(path, &to_json(&run.result))?;
    }
    if let Some(path) = report {
        write(path, &RunReport::new(&spec.display().to_string(), backend_spec, &run).to_json())?;
    }
    Ok(if run.verdict() == Verdict::Unknown { EXIT_UNKNOWN } else { 0 })
}

fn check(spec: &Path, strategy: &Path) -> Result<u8, Failure> {
    let ctx = load_spec(spec)?;
    let text = read(strategy)?;
    let machine = from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", strategy.display())))?;
    let failure = |e: SynthesisError| Failure::input(format!("{}: {e}", strategy.display()));
    let counterexample = match &machine {
        SynthesisResult::Realizable(s) => verify(s, &ctx.formula).map_err(failure)?,
        SynthesisResult::Unrealizable(c) => verify_counterstrategy(c, &ctx.formula).map_err(failure)?,
        SynthesisResult::Unknown(_) => return Err(Failure::input(format!("{}: no machine to check", strategy.display()))),
    };
    match counterexample {
        None => {
            println!("OK");
            Ok(0)
        }
        Some(w) => {
            let what = if machine.verdict() == Verdict::Realizable { "violating" } else { "satisfying" };
            println!("FAILED");
            println!("{what} word: {w}");
            Ok(EXIT_FAILED_CHECK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Decompose { spec, mode, out, nba_bound } => decompose(spec, *mode, out, *nba_bound).map(|()| 0),
        Command::Synth { spec, mode, backend, jobs, out, report, max_states } => {
            synth(spec, *mode, backend, *jobs, out.as_deref(), report.as_deref(), *max_states)
        }
        Command::Check { spec, strategy } => check(spec, strategy),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names() {
        assert!(backend_from("builtin", 3).is_ok());
        assert!(backend_from("exec:tool --flag", 3).is_ok());
        assert_eq!(backend_from("exec:  ", 3).err().map(|f| f.code), Some(EXIT_INPUT));
        assert_eq!(backend_from("strix", 3).err().map(|f| f.code), Some(EXIT_INPUT));
    }

    #[test]
    fn hoa_detection() {
        assert!(is_hoa("  HOA: v1\nStates: 1\n"));
        assert!(!is_hoa("INPUTS: i;\n"));
    }

    #[test]
    fn bound_errors_map_to_their_exit_code() {
        let e = AutomataError::ComplementBound { states: 20, limit: 12 };
        assert_eq!(automata_failure(e).code, EXIT_NBA_BOUND);
        assert_eq!(automata_failure(AutomataError::Invalid("x".into())).code, EXIT_INPUT);
    }
}
