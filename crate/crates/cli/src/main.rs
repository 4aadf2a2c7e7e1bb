use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpshift::{run, summary, write_csv, Mode, Scenario, Status};
use uniaxial_cp::oracle::{builtin_pinned, format_pinned, generate_pinned, parse_pinned, validate, ValidateMode};
use uniaxial_cp::QuadSpec;

const EXIT_CONFIG: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "cpshift", version, about = "Casimir-Polder shifts near uniaxial half-spaces and slabs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario at a single point (no [sweep] table).
    Shift(RunArgs),
    /// Evaluate a scenario over its [sweep] table.
    Sweep(RunArgs),
    /// Evaluate a scenario with a closed-form expansion instead of quadrature.
    Asymptotics {
        #[command(flatten)]
        run: RunArgs,
        /// Expansion to use; defaults to the scenario's mode when that is not `exact`.
        #[arg(long, value_enum)]
        regime: Option<Regime>,
    },
    /// Cross-check the main paths against oracles and pinned values.
    Validate {
        /// Also rerun the dense-grid oracles.
        #[arg(long)]
        full: bool,
        /// Pinned-values table to check against instead of the built-in one.
        #[arg(long)]
        pinned: Option<PathBuf>,
        /// Regenerate the pinned-values table from the oracles and write it here.
        #[arg(long, value_name = "PATH")]
        write_pinned: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; overrides [output].path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Relative quadrature tolerance; overrides [quad].rel_tol.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    Nonretarded,
    Retarded,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run_scenario(args: &RunArgs, kind: &str, regime: Option<Option<Regime>>) -> ExitCode {
    let mut s = match Scenario::load(&args.config) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Some(t) = args.tol {
        s = match s.with_tol(t) {
            Ok(s) => s,
            Err(e) => return fail(EXIT_CONFIG, e),
        };
    }
    match kind {
        "shift" if s.sweep.is_some() => {
            return fail(EXIT_CONFIG, "`sweep`: shift evaluates one point; use the sweep subcommand")
        }
        "sweep" if s.sweep.is_none() => return fail(EXIT_CONFIG, "`sweep`: table missing from scenario"),
        _ => {}
    }
    let mode = match regime {
        None => s.mode,
        Some(Some(Regime::Nonretarded)) => Mode::Nonretarded,
        Some(Some(Regime::Retarded)) => Mode::RetardedAsymptotic,
        Some(None) if s.mode != Mode::Exact => s.mode,
        Some(None) => {
            return fail(
                EXIT_CONFIG,
                "`evaluation.mode`: is `exact`; pass --regime or set a nonretarded/retarded-asymptotic mode",
            )
        }
    };
    if mode == Mode::RetardedAsymptotic {
        // Catch unsupported material/geometry combinations as configuration errors.
        let p = &s.points[0];
        for t in &s.atom.transitions {
            if let Err(e) = uniaxial_cp::asymptotics::retarded_f(&p.material, &p.geometry, t.omega_mi.abs(), p.distance)
            {
                return fail(EXIT_CONFIG, format!("`evaluation.mode`: {e}"));
            }
        }
    }

    let rows = match run(&s, mode, args.threads) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_CONFIG, e),
    };

    let out = args.out.clone().or_else(|| s.output.clone());
    let text = summary(&s, mode, &rows);
    let written = match &out {
        Some(path) => File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| write_csv(&rows, BufWriter::new(f)).map_err(|e| e.to_string())),
        None if kind == "shift" => Ok(()),
        None => write_csv(&rows, io::stdout().lock()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail(EXIT_CONFIG, format!("writing CSV: {e}"));
    }
    match (&out, kind) {
        (None, "sweep" | "asymptotics") => eprint!("{text}"),
        _ => {
            print!("{text}");
            if let Some(p) = &out {
                println!("csv           {}", p.display());
            }
        }
    }
    if rows.iter().any(|r| r.status == Status::Budget) {
        eprintln!("warning: quadrature budget exhausted at flagged rows");
        return ExitCode::from(EXIT_BUDGET);
    }
    ExitCode::SUCCESS
}

fn run_validate(full: bool, pinned: Option<PathBuf>, write_pinned: Option<PathBuf>, tol: Option<f64>) -> ExitCode {
    if let Some(path) = write_pinned {
        let values = match generate_pinned() {
            Ok(v) => v,
            Err(e) => return fail(EXIT_VALIDATION, e),
        };
        if let Err(e) = std::fs::write(&path, format_pinned(&values)) {
            return fail(EXIT_CONFIG, format!("{}: {e}", path.display()));
        }
        println!("wrote {} pinned values to {}", values.len(), path.display());
        return ExitCode::SUCCESS;
    }
    let table = match pinned {
        None => builtin_pinned(),
        Some(p) => match std::fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| parse_pinned(&t).map_err(|e| e.to_string())) {
            Ok(t) => t,
            Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", p.display())),
        },
    };
    let mut spec = QuadSpec::default();
    if let Some(t) = tol {
        spec = match QuadSpec::new(t, spec.abs_tol, spec.max_subdivisions) {
            Ok(s) => s,
            Err(e) => return fail(EXIT_CONFIG, format!("`--tol`: {e}")),
        };
    }
    let mode = if full { ValidateMode::Full } else { ValidateMode::Quick };
    let reports = match validate(mode, &table, &spec) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_VALIDATION, e),
    };
    let mut stdout = io::stdout().lock();
    let _ = writeln!(
        stdout,
        "{:<44} {:>24} {:>24} {:>10} {:>10} {:>8} {:>10}  result",
        "quantity", "oracle", "main", "abs_diff", "rel_diff", "grid", "tolerance"
    );
    let mut failed = 0;
    for r in &reports {
        if !r.passed {
            failed += 1;
        }
        let _ = writeln!(
            stdout,
            "{:<44} {:>24.16e} {:>24.16e} {:>10.2e} {:>10.2e} {:>8} {:>10.2e}  {}",
            r.quantity_label,
            r.oracle_value,
            r.main_value,
            r.abs_diff,
            r.rel_diff,
            r.grid_size,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(stdout, "{} checks, {} failed", reports.len(), failed);
    if failed > 0 {
        ExitCode::from(EXIT_VALIDATION)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Shift(a) => run_scenario(&a, "shift", None),
        Command::Sweep(a) => run_scenario(&a, "sweep", None),
        Command::Asymptotics { run, regime } => run_scenario(&run, "asymptotics", Some(regime)),
        Command::Validate {
            full,
            pinned,
            write_pinned,
            tol,
        } => run_validate(full, pinned, write_pinned, tol),
    }
}
