//! `latgap`: lattice validation, single-function analysis and exhaustive
//! theorem-verification sweeps.
//!
//! Exit status: 0 on success, 1 on user error (bad input, invalid lattice,
//! budget exceeded), 2 when a classifier disagrees with the brute-force
//! oracle.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use latgap::{
    classify_boolean_gap, classify_polynomial_gap, ess_bruteforce, gap_bruteforce, parse_expr,
    verify_boolean, verify_gap_theorem, verify_pseudo_boolean, zhegalkin_from_table, FiniteFn, Lattice,
    LatticeError, PolyFn, StandardLattice, DEFAULT_BUDGET,
};
use serde::Serialize;

use output::{Analysis, BoolAnalysis, Coefficient, LatticeInfo, LatticeReport, OracleCheck, SweepReport, Verdict};

/// Largest `|L|^n` table the oracle is asked to scan.
const TABLE_LIMIT: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "latgap", version, about = "Arity gap of lattice polynomial functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a lattice file.
    LatticeCheck {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Analyse one polynomial expression.
    Analyze(AnalyzeArgs),
    /// Exhaustively compare a classifier with the brute-force oracle.
    Verify {
        #[command(subcommand)]
        sweep: Sweep,
    },
    /// Boolean truth tables.
    Bool {
        #[command(subcommand)]
        command: BoolCommand,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Lattice file, or a standard name: chainK, cubeD, A*B.
    #[arg(long)]
    lattice: String,
    #[arg(long)]
    arity: usize,
    /// Expression, e.g. "(x1 & x2) | (x2 & x3) | (x3 & x1)".
    #[arg(long, conflicts_with = "expr_file", required_unless_present = "expr_file")]
    expr: Option<String>,
    #[arg(long)]
    expr_file: Option<PathBuf>,
    /// Also compute the gap by brute force over the full value table.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Sweep {
    /// All Boolean functions of the given arity.
    Boolean {
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// All functions {0,1}^n -> {0..k-1} that depend on every variable.
    PseudoBoolean {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        codomain: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// All polynomial functions of the given arity on a lattice.
    GapTheorem {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BoolCommand {
    /// Zhegalkin polynomial, essential variables and arity gap of a truth table.
    Analyze {
        /// Truth table as 2^n characters 0/1, first coordinate least significant.
        #[arg(long, conflicts_with = "table_file", required_unless_present = "table_file")]
        table: Option<String>,
        /// Table file: header `n 2 2`, then the 2^n values.
        #[arg(long)]
        table_file: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
}

enum Status {
    Ok,
    UserError,
    Disagreement,
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text(value));
    }
    Ok(())
}

fn load_lattice(spec: &str) -> Result<Arc<Lattice>> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Ok(Arc::new(Lattice::parse_text(&text).with_context(|| format!("lattice file {spec}"))?));
    }
    let standard: StandardLattice = spec
        .parse()
        .map_err(|_| anyhow!("`{spec}` is neither a lattice file nor a standard lattice (chainK, cubeD, A*B)"))?;
    Ok(Arc::new(standard.build()?))
}

fn lattice_check(path: &Path, json: bool) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report = match Lattice::parse_text(&text) {
        Ok(l) => LatticeReport {
            valid: true,
            lattice: Some(LatticeInfo::of(&l)),
            error: None,
            witness: None,
        },
        Err(e) => LatticeReport {
            valid: false,
            lattice: None,
            witness: match &e {
                LatticeError::NotDistributive { x, y, z, .. } => Some([x.clone(), y.clone(), z.clone()]),
                _ => None,
            },
            error: Some(e.to_string()),
        },
    };
    emit(json, &report, LatticeReport::to_text)?;
    Ok(if report.valid { Status::Ok } else { Status::UserError })
}

fn analyze(args: &AnalyzeArgs) -> Result<Status> {
    let lattice = load_lattice(&args.lattice)?;
    let text = match (&args.expr, &args.expr_file) {
        (Some(e), _) => e.clone(),
        (None, Some(p)) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        (None, None) => bail!("one of --expr or --expr-file is required"),
    };
    let term = parse_expr(text.trim(), args.arity, lattice.clone())?;
    let f = PolyFn::canonicalize(&term)?;
    let essential = f.essential_variables();
    let (gap, verdict) = match classify_polynomial_gap(&f) {
        Ok(c) => (Some(c.gap()), Verdict::from_classification(&c, Some(&lattice))),
        Err(_) => (None, Verdict::Undefined),
    };

    let oracle = if args.verify {
        let full = f.to_finite_fn(TABLE_LIMIT)?;
        let oracle_essential = ess_bruteforce(&full);
        let oracle_gap = gap_bruteforce(&full).ok().map(|r| r.gap);
        Some(OracleCheck {
            agrees: oracle_essential == essential && oracle_gap == gap,
            essential: oracle_essential.iter().map(|p| p + 1).collect(),
            gap: oracle_gap,
        })
    } else {
        None
    };

    let analysis = Analysis {
        lattice: LatticeInfo::of(&lattice),
        arity: f.arity(),
        dnf: f.format_dnf(),
        coefficients: f
            .dump()
            .into_iter()
            .map(|(subset, value)| Coefficient { subset, value })
            .collect(),
        ess: essential.len(),
        essential: essential.iter().map(|p| p + 1).collect(),
        gap,
        oracle,
        verdict,
    };
    emit(args.json, &analysis, Analysis::to_text)?;
    Ok(match &analysis.oracle {
        Some(o) if !o.agrees => Status::Disagreement,
        _ => Status::Ok,
    })
}

fn bool_analyze(table: &Option<String>, table_file: &Option<PathBuf>, verify: bool, json: bool) -> Result<Status> {
    let f = match (table, table_file) {
        (Some(bits), _) => FiniteFn::from_bitstring(bits)?,
        (None, Some(p)) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let f = FiniteFn::parse_text(&text)?;
            if !f.is_boolean() {
                bail!("table file is not Boolean (expected domain and codomain 2)");
            }
            f
        }
        (None, None) => bail!("one of --table or --table-file is required"),
    };
    let poly = zhegalkin_from_table(&f)?;
    let essential = poly.variables();
    let (gap, verdict) = match classify_boolean_gap(&f) {
        Ok(c) => (Some(c.gap()), Verdict::from_classification(&c, None)),
        Err(_) => (None, Verdict::Undefined),
    };
    let oracle = verify.then(|| {
        let oracle_essential = ess_bruteforce(&f);
        let oracle_gap = gap_bruteforce(&f).ok().map(|r| r.gap);
        OracleCheck {
            agrees: oracle_essential == essential && oracle_gap == gap,
            essential: oracle_essential.iter().map(|p| p + 1).collect(),
            gap: oracle_gap,
        }
    });
    let analysis = BoolAnalysis {
        table: f.to_bitstring().unwrap_or_default(),
        arity: f.arity(),
        zhegalkin: poly.to_string(),
        ess: essential.len(),
        essential: essential.iter().map(|p| p + 1).collect(),
        gap,
        oracle,
        verdict,
    };
    emit(json, &analysis, BoolAnalysis::to_text)?;
    Ok(match &analysis.oracle {
        Some(o) if !o.agrees => Status::Disagreement,
        _ => Status::Ok,
    })
}

fn verify(sweep: &Sweep) -> Result<Status> {
    let (report, json) = match sweep {
        Sweep::Boolean { arity, budget, json } => {
            (SweepReport::new("boolean", *arity, verify_boolean(*arity, *budget)?), *json)
        }
        Sweep::PseudoBoolean {
            arity,
            codomain,
            budget,
            json,
        } => {
            if *codomain < 2 {
                bail!("--codomain must be at least 2");
            }
            let mut r = SweepReport::new(
                "pseudo-boolean",
                *arity,
                verify_pseudo_boolean(*arity, *codomain, *budget)?,
            );
            r.codomain = Some(*codomain);
            (r, *json)
        }
        Sweep::GapTheorem { lattice, arity, json } => {
            let l = load_lattice(lattice)?;
            let mut r = SweepReport::new("gap-theorem", *arity, verify_gap_theorem(l, *arity, TABLE_LIMIT)?);
            r.lattice = Some(lattice.clone());
            (r, *json)
        }
    };
    emit(json, &report, SweepReport::to_text)?;
    Ok(if report.passed { Status::Ok } else { Status::Disagreement })
}

fn run(cli: Cli) -> Result<Status> {
    match &cli.command {
        Command::LatticeCheck { path, json } => lattice_check(path, *json),
        Command::Analyze(args) => analyze(args),
        Command::Verify { sweep } => verify(sweep),
        Command::Bool {
            command: BoolCommand::Analyze {
                table,
                table_file,
                verify,
                json,
            },
        } => bool_analyze(table, table_file, *verify, *json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::UserError) => ExitCode::from(1),
        Ok(Status::Disagreement) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
