use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::SystemTime;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use k3lattice::fibration::FiberReport;
use k3lattice::fixtures;
use k3lattice::json::{fibration_input_from_json, lattice_from_json, FibrationInput};
use k3lattice::{
    analyze_k3, build_neron_severi, parse_lattice_expr, run_all, Error, FibrationModel, K3Analysis,
    Lattice, Perturb, WeierstrassModel,
};

macro_rules! outln {
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))
    };
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "k3lattice",
    version,
    about = "Exact lattice and K3 fibration checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, determinant, signature, parity and discriminant form of a lattice.
    LatticeInfo {
        /// Lattice expression such as `U+E8+A6`, a chain fixture, or a JSON file.
        lattice: String,
        #[arg(long)]
        json: bool,
    },
    /// Singular fibres, Euler sum and Shioda-Tate summary of an elliptic K3.
    Fibration {
        /// `AST`, `Ko`, or a Weierstrass / fibration JSON file.
        model: String,
        /// Picard number used for the implied Mordell-Weil rank.
        #[arg(long, default_value_t = 16)]
        picard: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run every built-in check.
    VerifyAll {
        #[arg(long)]
        json: bool,
        /// Corrupt an input on purpose; the run must then fail.
        #[arg(long, value_enum)]
        perturb: Option<PerturbArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbArg {
    Gram,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonMinimal { .. } => Failure::Check(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::LatticeInfo { lattice, json } => lattice_info(&lattice, json),
        Command::Fibration {
            model,
            picard,
            json,
        } => fibration(&model, picard, json),
        Command::VerifyAll { json, perturb } => verify_all(json, perturb),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn looks_like_path(arg: &str) -> bool {
    arg.ends_with(".json") || arg.contains('/') || Path::new(arg).exists()
}

fn resolve_lattice(arg: &str) -> Result<Lattice, Failure> {
    if looks_like_path(arg) {
        return Ok(lattice_from_json(&read_file(Path::new(arg))?)?);
    }
    if let Ok(chain) = fixtures::chain_fixture(arg) {
        let ns = build_neron_severi(&fixtures::ast_fibration())?;
        let sub = ns.extract_chain(&chain)?;
        return Ok(sub.induced_lattice().with_label(arg));
    }
    Ok(parse_lattice_expr(arg)?)
}

fn lattice_info(arg: &str, as_json: bool) -> Result<(), Failure> {
    let l = resolve_lattice(arg)?;
    let disc = l.discriminant_group().ok();
    if as_json {
        let group = disc.as_ref().map(|d| {
            json!({
                "invariant_factors": d.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "order": d.order().to_string(),
                "q": d.qvalues.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        });
        let out = json!({
            "label": l.label(),
            "rank": l.rank(),
            "det": l.det().to_string(),
            "signature": l.signature(),
            "even": l.is_even(),
            "discriminant_group": group,
        });
        outln!("{}", pretty(&out));
        return Ok(());
    }
    outln!("lattice       {}", l.label());
    outln!("rank          {}", l.rank());
    outln!("det           {}", l.det());
    outln!("signature     {}", l.signature());
    outln!("even          {}", if l.is_even() { "yes" } else { "no" });
    match disc {
        Some(d) => outln!("discriminant  {d}"),
        None => outln!("discriminant  undefined (degenerate)"),
    }
    Ok(())
}

fn fibration(arg: &str, picard: u32, as_json: bool) -> Result<(), Failure> {
    let input = if looks_like_path(arg) {
        fibration_input_from_json(&read_file(Path::new(arg))?)?
    } else {
        FibrationInput::Weierstrass(fixtures::weierstrass_fixture(arg)?)
    };
    match input {
        FibrationInput::Weierstrass(w) => weierstrass_report(&w, picard, as_json),
        FibrationInput::Fibration(f) => fibration_report(&f, as_json),
    }
}

fn weierstrass_report(w: &WeierstrassModel, picard: u32, as_json: bool) -> Result<(), Failure> {
    let a = analyze_k3(w)?;
    let mw = a.implied_mw_rank(picard);
    if as_json {
        let mut out = serde_json::to_value(&a).expect("serializable");
        out["configuration"] = json!(a.configuration());
        out["picard_number"] = json!(picard);
        out["implied_mw_rank"] = json!(mw);
        outln!("{}", pretty(&out));
    } else {
        print_analysis(&a, picard, mw);
    }
    if a.euler_ok {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "Euler numbers sum to {}, not 24",
            a.euler_sum
        )))
    }
}

fn print_analysis(a: &K3Analysis, picard: u32, mw: Option<u32>) {
    outln!("model         {}", a.label);
    outln!("discriminant  {}", a.discriminant);
    outln!("fibres        {}", a.configuration());
    outln!(
        "  {:<16} {:>5} {:<6} {:>5} {:>10}  {:<12} (v4, v6, vD)",
        "place",
        "count",
        "type",
        "euler",
        "components",
        "root lattice"
    );
    for f in &a.fibers {
        print_fiber(f);
    }
    let flag = if a.euler_ok { "ok" } else { "FLAGGED" };
    outln!("euler sum     {} ({flag})", a.euler_sum);
    outln!("trivial rank  {}", a.trivial_rank);
    match mw {
        Some(r) => outln!("MW rank       {r} (Picard number {picard})"),
        None => outln!("MW rank       none (trivial rank exceeds Picard number {picard})"),
    }
}

fn print_fiber(f: &FiberReport) {
    let v = |x: Option<u32>| x.map_or_else(|| "inf".to_string(), |x| x.to_string());
    outln!(
        "  {:<16} {:>5} {:<6} {:>5} {:>10}  {:<12} ({}, {}, {})",
        f.place.to_string(),
        f.count,
        f.kodaira.to_string(),
        f.euler,
        f.components,
        f.root_lattice.as_deref().unwrap_or("-"),
        v(f.valuations.0),
        v(f.valuations.1),
        f.valuations.2
    );
}

fn fibration_report(f: &FibrationModel, as_json: bool) -> Result<(), Failure> {
    let euler = f.euler_sum();
    let rank = f.shioda_tate_rank();
    let valid = f.validate();
    let ns = match (&valid, f.mw_rank) {
        (Ok(()), 0) => Some(build_neron_severi(f)?),
        _ => None,
    };
    if as_json {
        let lattice = ns.as_ref().map(|ns| {
            let l = ns.lattice();
            json!({
                "rank": l.rank(),
                "det": l.det().to_string(),
                "signature": l.signature(),
                "even": l.is_even(),
                "basis": ns.basis_labels(),
            })
        });
        let out = json!({
            "label": f.label,
            "fibers": f.fibers,
            "euler_sum": euler,
            "euler_ok": euler == 24,
            "shioda_tate_rank": rank,
            "neron_severi": lattice,
        });
        outln!("{}", pretty(&out));
    } else {
        outln!("model         {}", f.label);
        for s in &f.fibers {
            outln!("  {:<16} {:>3} x {}", s.place, s.count, s.kodaira);
        }
        outln!("euler sum     {euler}");
        outln!("Shioda-Tate   rank {rank} (MW rank {})", f.mw_rank);
        if let Some(ns) = &ns {
            let l = ns.lattice();
            outln!(
                "NS lattice    rank {}, det {}, signature {}, {}",
                l.rank(),
                l.det(),
                l.signature(),
                if l.is_even() { "even" } else { "odd" }
            );
        }
    }
    valid.map_err(|e| Failure::Check(e.to_string()))
}

fn verify_all(as_json: bool, perturb: Option<PerturbArg>) -> Result<(), Failure> {
    let perturb = perturb.map(|p| match p {
        PerturbArg::Gram => Perturb::Gram,
    });
    let stamp = humantime::format_rfc3339_seconds(SystemTime::now()).to_string();
    let report = run_all(perturb, stamp);
    if as_json {
        outln!("{}", report.to_json());
    } else {
        emit(&report.render_text());
    }
    let failing: Vec<String> = report
        .failed()
        .map(|c| format!("{} ({})", c.id, c.anchor))
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "failing checks: {}",
            failing.join("; ")
        )))
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Writes to stdout, ignoring a reader that has gone away.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}
