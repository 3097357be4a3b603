//! Command-line front end for the kernel: recorded-claim reproduction,
//! script execution, basis/dimension/jacobian queries, and the randomized
//! self-check suites.
//!
//! Exit status: 0 when everything verified, 1 when a check failed, 2 when
//! a budget left a verdict inconclusive, 3 for usage, parse, or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use charp_core::groebner::DEFAULT_BUDGET;
use charp_core::matrix::jacobian;
use charp_core::repro::{repro_bn_bookkeeping, run_claim, CLAIMS};
use charp_core::script::{evaluate, parse_script, run_script, Evaluated};
use charp_core::{
    canonical_json, run_property_suites, write_certificate, Certificate, CertificateDocument,
    ClaimPerf, GbError, Ideal, Overall, Perf, PropReport, StepStatus,
};

#[derive(Parser)]
#[command(
    name = "charp",
    version,
    about = "Characteristic-p kernel for Frobenius splittings of commutator ideals"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Pair/term budget for basis and product computations
    /// (defaults to $CHARP_BUDGET, then 4000000)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads; parallelism is across independent claims only
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for the randomized self-check suites
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the certificate for a recorded claim
    Repro {
        /// One of: T, A3, A4, splits5, splits6, Bn, known-fpurity
        #[arg(long)]
        claim: String,
        /// Comma-separated primes (each claim has its own default)
        #[arg(long)]
        p: Option<String>,
        /// Also write the certificate document (with timings) to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the check directives of a script and emit a certificate
    Check {
        /// Script file
        #[arg(long)]
        script: PathBuf,
        /// Also write the certificate document (with timings) to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the reduced basis of an ideal bound in a script
    Gb {
        #[arg(long)]
        script: PathBuf,
        /// Name of an ideal bound in the script
        #[arg(long)]
        ideal: String,
    },
    /// Print the Krull dimension of the quotient by a script ideal
    Dim {
        #[arg(long)]
        script: PathBuf,
        /// Name of an ideal bound in the script
        #[arg(long)]
        ideal: String,
    },
    /// Print the Jacobian matrix of bound polynomials
    Jac {
        #[arg(long)]
        script: PathBuf,
        /// Comma-separated bound polynomial names
        #[arg(long)]
        polys: String,
        /// Comma-separated variable names
        #[arg(long)]
        vars: String,
    },
    /// Run the randomized self-check suites
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let budget = resolve_budget(cli.global.budget)?;
    match cli.command {
        Command::Repro { claim, p, out } => {
            cmd_repro(&cli.global, budget, &claim, p.as_deref(), out.as_deref())
        }
        Command::Check { script, out } => cmd_check(&cli.global, budget, &script, out.as_deref()),
        Command::Gb { script, ideal } => cmd_gb(&cli.global, budget, &script, &ideal),
        Command::Dim { script, ideal } => cmd_dim(&cli.global, budget, &script, &ideal),
        Command::Jac {
            script,
            polys,
            vars,
        } => cmd_jac(&cli.global, &script, &polys, &vars),
        Command::Selfcheck => cmd_selfcheck(&cli.global),
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("CHARP_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| anyhow!("CHARP_BUDGET is set to {s:?}, which is not a number")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_prime_list(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let n: u32 = part
            .parse()
            .with_context(|| format!("{part:?} is not a number"))?;
        if !is_prime(n) {
            bail!("{n} is not prime");
        }
        out.push(n);
    }
    if out.is_empty() {
        bail!("the prime list is empty");
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// repro
// ---------------------------------------------------------------------------

// A unit of work that can run on its own thread. Multi-certificate claims
// split into one unit per certificate; everything else is a single unit.
enum ReproUnit {
    Claim {
        claim: String,
        p_list: Option<Vec<u32>>,
    },
    Bn(usize),
}

fn repro_units(claim: &str, p_list: Option<Vec<u32>>) -> Vec<ReproUnit> {
    match claim {
        "Bn" => vec![ReproUnit::Bn(2), ReproUnit::Bn(3), ReproUnit::Bn(4)],
        other => vec![ReproUnit::Claim {
            claim: other.to_string(),
            p_list,
        }],
    }
}

/// Certificates with their timings, one pair per characteristic or size.
type ClaimOutputs = Vec<(Certificate, ClaimPerf)>;

fn run_unit(unit: &ReproUnit, budget: u64) -> Result<ClaimOutputs> {
    let out = match unit {
        ReproUnit::Bn(n) => vec![repro_bn_bookkeeping(*n, budget)?],
        ReproUnit::Claim { claim, p_list } => run_claim(claim, p_list.as_deref(), budget)?,
    };
    Ok(out)
}

// Runs units across `threads` workers; results keep unit order, so output
// bytes do not depend on the thread count.
fn run_units(units: &[ReproUnit], threads: usize, budget: u64) -> Result<ClaimOutputs> {
    let threads = threads.max(1).min(units.len().max(1));
    let collected: Vec<(usize, Result<ClaimOutputs>)> = if threads <= 1 {
        units
            .iter()
            .enumerate()
            .map(|(i, u)| (i, run_unit(u, budget)))
            .collect()
    } else {
        let next = AtomicUsize::new(0);
        let results = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= units.len() {
                        break;
                    }
                    let r = run_unit(&units[i], budget);
                    results.lock().unwrap().push((i, r));
                });
            }
        });
        let mut v = results.into_inner().unwrap();
        v.sort_by_key(|(i, _)| *i);
        v
    };
    let mut out = Vec::new();
    for (_, r) in collected {
        out.extend(r?);
    }
    Ok(out)
}

fn cmd_repro(
    global: &Global,
    budget: u64,
    claim: &str,
    p: Option<&str>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if !CLAIMS.contains(&claim) {
        bail!("unknown claim {claim:?}; expected one of {CLAIMS:?}");
    }
    let p_list = p.map(parse_prime_list).transpose()?;
    let units = repro_units(claim, p_list);
    let results = run_units(&units, global.threads, budget)?;
    let (claims, perfs): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let doc = CertificateDocument::new(claims, Some(Perf { claims: perfs }));
    emit_document(global, &doc, out)
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn load_script(path: &Path) -> Result<(charp_core::Script, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read script {}", path.display()))?;
    let script = parse_script(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let claim_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "script".to_string());
    Ok((script, claim_id))
}

fn cmd_check(global: &Global, budget: u64, path: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let (script, claim_id) = load_script(path)?;
    let (cert, perf) =
        run_script(&script, &claim_id, budget).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let doc = CertificateDocument::new(vec![cert], Some(Perf { claims: vec![perf] }));
    emit_document(global, &doc, out)
}

// ---------------------------------------------------------------------------
// gb / dim / jac
// ---------------------------------------------------------------------------

fn evaluated_script(path: &Path) -> Result<Evaluated> {
    let (script, _) = load_script(path)?;
    evaluate(&script).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn named_ideal(eval: &Evaluated, name: &str) -> Result<Vec<charp_core::Poly>> {
    eval.ideals.get(name).cloned().ok_or_else(|| {
        let mut known: Vec<&String> = eval.ideals.keys().collect();
        known.sort();
        anyhow!("no ideal named {name:?} in the script (bound ideals: {known:?})")
    })
}

fn groebner_or_exit2(
    eval: &Evaluated,
    gens: Vec<charp_core::Poly>,
    budget: u64,
) -> Result<std::result::Result<charp_core::GroebnerBasis, ExitCode>> {
    match Ideal::new(&eval.ring, gens).groebner(budget) {
        Ok(gb) => Ok(Ok(gb)),
        Err(e @ GbError::Budget { .. }) => {
            eprintln!("inconclusive: {e}");
            Ok(Err(ExitCode::from(2)))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_gb(global: &Global, budget: u64, path: &Path, ideal: &str) -> Result<ExitCode> {
    let eval = evaluated_script(path)?;
    let gens = named_ideal(&eval, ideal)?;
    let gb = match groebner_or_exit2(&eval, gens, budget)? {
        Ok(gb) => gb,
        Err(code) => return Ok(code),
    };
    if global.json {
        let basis: Vec<String> = gb.polys().iter().map(|p| p.to_string()).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "ideal": ideal,
                "basis": basis,
            }))?
        );
    } else {
        println!("reduced basis of {ideal} ({} elements):", gb.polys().len());
        for p in gb.polys() {
            println!("  {p}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dim(global: &Global, budget: u64, path: &Path, ideal: &str) -> Result<ExitCode> {
    let eval = evaluated_script(path)?;
    let gens = named_ideal(&eval, ideal)?;
    let gb = match groebner_or_exit2(&eval, gens, budget)? {
        Ok(gb) => gb,
        Err(code) => return Ok(code),
    };
    let dim = gb.quotient_dim();
    if global.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "ideal": ideal,
                "krullDimension": dim,
                "zeroDimensional": gb.dim_is_zero(),
            }))?
        );
    } else {
        println!("Krull dimension of the quotient by {ideal}: {dim}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_jac(global: &Global, path: &Path, polys: &str, vars: &str) -> Result<ExitCode> {
    let eval = evaluated_script(path)?;
    let poly_names: Vec<&str> = polys
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let var_names: Vec<&str> = vars
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if poly_names.is_empty() || var_names.is_empty() {
        bail!("--polys and --vars must each name at least one entry");
    }
    let rows = poly_names
        .iter()
        .map(|n| eval.poly(n))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let jac = jacobian(&rows, &var_names)?;
    let det = if poly_names.len() == var_names.len() {
        Some(jac.det()?)
    } else {
        None
    };
    if global.json {
        let matrix: Vec<Vec<String>> = (0..poly_names.len())
            .map(|i| {
                (0..var_names.len())
                    .map(|j| jac.at(i, j).to_string())
                    .collect()
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "polys": poly_names,
                "vars": var_names,
                "matrix": matrix,
                "determinant": det.map(|d| d.to_string()),
            }))?
        );
    } else {
        println!(
            "jacobian of [{}] with respect to [{}]:",
            poly_names.join(", "),
            var_names.join(", ")
        );
        for i in 0..poly_names.len() {
            let row: Vec<String> = (0..var_names.len())
                .map(|j| jac.at(i, j).to_string())
                .collect();
            println!("  [{}]", row.join(", "));
        }
        if let Some(d) = det {
            println!("determinant: {d}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// selfcheck
// ---------------------------------------------------------------------------

fn cmd_selfcheck(global: &Global) -> Result<ExitCode> {
    let report: PropReport = run_property_suites(global.seed);
    if global.json {
        let suites: Vec<serde_json::Value> = report
            .suites
            .iter()
            .map(|s| {
                serde_json::json!({
                    "name": s.name,
                    "cases": s.cases,
                    "failures": s.failures,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "seed": report.seed,
                "suites": suites,
                "totalFailures": report.failures(),
            }))?
        );
    } else {
        print!("{}", report.render());
    }
    Ok(if report.failures() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

fn status_tag(s: StepStatus) -> &'static str {
    match s {
        StepStatus::Passed => "pass",
        StepStatus::Failed => "FAIL",
        StepStatus::Inconclusive => "????",
        StepStatus::Cited => "cite",
    }
}

fn emit_document(
    global: &Global,
    doc: &CertificateDocument,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if let Some(path) = out {
        std::fs::write(path, write_certificate(doc))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if global.json {
        // Canonical bytes only: timings vary run to run and live solely in
        // files written through --out.
        print!("{}", canonical_json(doc));
    } else {
        for cert in &doc.claims {
            let ps: Vec<String> = cert.characteristics.iter().map(u32::to_string).collect();
            println!(
                "claim {}: {} (p = {})",
                cert.claim_id,
                match cert.overall {
                    Overall::Verified => "verified",
                    Overall::Failed => "FAILED",
                    Overall::Inconclusive => "inconclusive",
                },
                ps.join(", ")
            );
            for step in &cert.steps {
                println!("  [{}] {}", status_tag(step.status), step.description);
                if step.status != StepStatus::Passed {
                    if let Some(note) = &step.note {
                        println!("         note: {note}");
                    }
                }
            }
        }
    }
    Ok(match doc.worst() {
        Overall::Verified => ExitCode::SUCCESS,
        Overall::Failed => ExitCode::from(1),
        Overall::Inconclusive => ExitCode::from(2),
    })
}
