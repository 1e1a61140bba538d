//! `kamp`: decide K(A) validity, search for sequent proofs, check and
//! cut-eliminate proof files, translate K(Ł) formulas, run fuzz suites.

mod fuzz;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kamp::luk::{decide_luk, translate_star, LukVerdict};
use kamp::sequent::{
    check_derivation, derivation_from_str, derivation_to_string, eliminate_cuts, prove, ProofResult, RuleKind, RuleSet,
};
use kamp::tableau::{build_complete_tableau, decide_tableau, BranchCertificate, TableauOrigin};
use kamp::{parse_formula, parse_lformula, parse_sequent, Dialect, Mode, Verdict};

#[derive(Parser)]
#[command(name = "kamp", version, about = "Decision procedure and proof toolkit for the modal logic K(A)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DialectArg {
    Ka,
    Kac,
    Kl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Serial,
    General,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Serial => Mode::Serial,
            ModeArg::General => Mode::General,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide validity of a formula.
    Decide {
        formula: String,
        #[arg(long, value_enum, default_value = "ka")]
        dialect: DialectArg,
        /// Defaults to serial for ka and general for kac and kl.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Write the countermodel of an invalid formula here.
        #[arg(long, value_name = "PATH")]
        countermodel: Option<PathBuf>,
        /// Write the Farkas certificates of a valid formula here.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
        /// Print the numbered tableau lines of every branch.
        #[arg(long)]
        trace: bool,
    },
    /// Search for a cut-free proof of a modal-multiplicative sequent.
    ProveSeq {
        sequent: String,
        /// Write the proof file here instead of standard output.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        countermodel: Option<PathBuf>,
    },
    /// Check a proof file.
    CheckProof {
        file: PathBuf,
        /// Reject derivations that use cut.
        #[arg(long)]
        no_cut: bool,
    },
    /// Remove every cut from a proof file.
    CutElim {
        file: PathBuf,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Translate a K(Ł) formula into K(A^c).
    Translate {
        formula: String,
        /// Also decide the formula through the translation.
        #[arg(long)]
        decide: bool,
        #[arg(long, value_name = "PATH")]
        countermodel: Option<PathBuf>,
    },
    /// Run a seeded property suite.
    Fuzz {
        #[arg(long, value_enum)]
        suite: fuzz::Suite,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const VALID: u8 = 0;
const INVALID: u8 = 1;

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn certificates_json(certs: &[BranchCertificate]) -> Value {
    Value::Array(
        certs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let rows: Vec<String> = c.system.inequations.iter().map(|r| r.to_string()).collect();
                let mult: serde_json::Map<String, Value> =
                    c.certificate.multipliers.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
                json!({"branch": i, "system": rows, "multipliers": mult})
            })
            .collect(),
    )
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn report_luk(v: LukVerdict, countermodel: Option<&Path>) -> Result<u8> {
    match v {
        LukVerdict::Valid { .. } => {
            println!("VALID");
            eprintln!("note: K(L) verdicts go through the general-mode tableau, which is experimental");
            Ok(VALID)
        }
        LukVerdict::Invalid { countermodel: m, value } => {
            println!("INVALID");
            println!("value at w1: {}", kamp::rat::to_text(&value));
            if let Some(p) = countermodel {
                write(p, &m.to_json_string())?;
            }
            Ok(INVALID)
        }
    }
}

fn cmd_decide(
    text: &str,
    dialect: DialectArg,
    mode: Option<ModeArg>,
    countermodel: Option<&Path>,
    certificate: Option<&Path>,
    trace: bool,
) -> Result<u8> {
    if dialect == DialectArg::Kl {
        if mode == Some(ModeArg::Serial) {
            bail!("the kl dialect is decided in general mode only");
        }
        let f = parse_lformula(text)?;
        if trace {
            let t = build_complete_tableau(&TableauOrigin::Formula(translate_star(&f)), Mode::General, Dialect::KAc)?;
            print!("{}", t.trace());
        }
        return report_luk(decide_luk(&f)?, countermodel);
    }
    let d = if dialect == DialectArg::Ka { Dialect::KA } else { Dialect::KAc };
    let default = Mode::default_for(d);
    let mode = mode.map(Mode::from).unwrap_or(default);
    if mode != default {
        eprintln!("note: {mode} mode overrides the default {default} mode for this dialect");
    }
    let f = parse_formula(text, d)?;
    let t = build_complete_tableau(&TableauOrigin::Formula(f), mode, d)?;
    if trace {
        print!("{}", t.trace());
    }
    match decide_tableau(&t)? {
        Verdict::Valid { certificates } => {
            println!("VALID");
            if mode == Mode::General {
                eprintln!("note: general-mode verdicts are experimental");
            }
            if let Some(p) = certificate {
                write(p, &pretty(&certificates_json(&certificates)))?;
            }
            Ok(VALID)
        }
        Verdict::Invalid { countermodel: m, .. } => {
            println!("INVALID");
            if let Some(p) = countermodel {
                write(p, &m.to_json_string())?;
            }
            Ok(INVALID)
        }
    }
}

fn cmd_prove_seq(text: &str, output: Option<&Path>, countermodel: Option<&Path>) -> Result<u8> {
    let s = parse_sequent(text, Dialect::KA)?;
    match prove(&s)? {
        ProofResult::Proved(d) => {
            let text = derivation_to_string(&d);
            match output {
                Some(p) => {
                    write(p, &text)?;
                    println!("PROVED");
                }
                None => print!("{text}"),
            }
            Ok(VALID)
        }
        ProofResult::Invalid(m) => {
            println!("INVALID");
            if let Some(p) = countermodel {
                write(p, &m.to_json_string())?;
            }
            Ok(INVALID)
        }
    }
}

fn read_proof(path: &Path) -> Result<kamp::Derivation> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(derivation_from_str(&text)?)
}

fn cmd_check_proof(path: &Path, no_cut: bool) -> Result<u8> {
    let d = read_proof(path)?;
    let rules = if no_cut { RuleSet::cut_free() } else { RuleSet::all() };
    match check_derivation(&d, &rules) {
        Ok(()) => {
            println!("OK {}", d.conclusion);
            Ok(VALID)
        }
        Err(v) => {
            println!("{v}");
            Ok(INVALID)
        }
    }
}

fn cmd_cut_elim(path: &Path, output: Option<&Path>) -> Result<u8> {
    let d = read_proof(path)?;
    if let Err(v) = check_derivation(&d, &RuleSet::all()) {
        println!("{v}");
        return Ok(INVALID);
    }
    let out = eliminate_cuts(&d)?;
    debug_assert_eq!(out.count(RuleKind::Cut), 0);
    let text = derivation_to_string(&out);
    match output {
        Some(p) => {
            write(p, &text)?;
            println!("OK {}", out.conclusion);
        }
        None => print!("{text}"),
    }
    Ok(VALID)
}

fn cmd_translate(text: &str, decide: bool, countermodel: Option<&Path>) -> Result<u8> {
    let f = parse_lformula(text)?;
    println!("{}", translate_star(&f));
    if decide {
        return report_luk(decide_luk(&f)?, countermodel);
    }
    Ok(VALID)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Decide { formula, dialect, mode, countermodel, certificate, trace } => {
            cmd_decide(&formula, dialect, mode, countermodel.as_deref(), certificate.as_deref(), trace)
        }
        Command::ProveSeq { sequent, output, countermodel } => {
            cmd_prove_seq(&sequent, output.as_deref(), countermodel.as_deref())
        }
        Command::CheckProof { file, no_cut } => cmd_check_proof(&file, no_cut),
        Command::CutElim { file, output } => cmd_cut_elim(&file, output.as_deref()),
        Command::Translate { formula, decide, countermodel } => cmd_translate(&formula, decide, countermodel.as_deref()),
        Command::Fuzz { suite, iters, seed } => fuzz::run(suite, iters, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
