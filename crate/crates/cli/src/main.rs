use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grosslat::cm::{cm_rows, find_row, recompute_ne, CmRow};
use grosslat::exact::is_prime;
use grosslat::gramgross::gram_gross;
use grosslat::oracle::supersingular_j_set;
use grosslat::orders::{default_ell, enumerate_types};
use grosslat::report;
use grosslat::verify::{verify, VerifyOptions, VerifyReport, EXTENDED_CM_D};
use grosslat::{Error, TypeCatalog};

#[derive(Parser)]
#[command(name = "grosslat", version)]
#[command(
    about = "Gross lattices of maximal orders in the quaternion algebra ramified at p and infinity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the types of maximal orders with their Gram matrices and classification.
    Types(TypesArgs),
    /// Run the Gram-matrix search for given p and first minimum D1.
    Gramgross(GramGrossArgs),
    /// Check every invariant over a range of primes.
    Verify(VerifyArgs),
    /// Reduce a CM curve at its supersingular primes and recompute N_E.
    Cm(CmArgs),
    /// List the supersingular j-invariants over F_(p^2).
    Oracle(OracleArgs),
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct Format {
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Emit CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct TypesArgs {
    #[arg(long)]
    p: u64,
    /// Norm of the connecting ideals used in the neighbor search.
    #[arg(long)]
    ell: Option<u64>,
    /// Largest norm listed among the embedded discriminants.
    #[arg(long, default_value_t = 64)]
    disc_bound: u64,
    #[command(flatten)]
    format: Format,
}

#[derive(Args)]
struct GramGrossArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    d1: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pmin: u64,
    #[arg(long, default_value_t = 300)]
    pmax: u64,
    /// Include the rows d = 43, 67, 163 whose N_E needs large primes.
    #[arg(long)]
    extended_cm: bool,
    /// Skip the finite-field cross-check above this prime.
    #[arg(long, default_value_t = 500)]
    oracle_cap: u64,
    /// Skip the second-ell enumeration above this prime.
    #[arg(long, default_value_t = 100)]
    ell_check_cap: u64,
    /// Emit the full JSON report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CmArgs {
    /// Row label such as 0, 1728 or -15^3.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "all",
        required_unless_present = "all"
    )]
    row: Option<String>,
    /// Every row of the table.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 300)]
    pmax: u64,
    /// With --all, include the rows d = 43, 67, 163.
    #[arg(long)]
    extended_cm: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    p: u64,
}

enum Outcome {
    Ok,
    Failed,
}

fn json_line(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values are serializable")
}

fn require_prime(p: u64) -> Result<(), Error> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn cmd_types(a: TypesArgs) -> Result<Outcome, Error> {
    require_prime(a.p)?;
    let ell = a.ell.unwrap_or_else(|| default_ell(a.p));
    let types = enumerate_types(a.p, ell)?;
    if a.format.json {
        println!(
            "{}",
            json_line(&report::types_json(a.p, ell, a.disc_bound, &types)?)
        );
    } else if a.format.csv {
        print!("{}", report::types_csv(a.p, &types));
    } else {
        println!(
            "p = {}: {} types, {} on the spine",
            a.p,
            types.len(),
            types.iter().filter(|t| t.classification.spine).count()
        );
        for (i, t) in types.iter().enumerate() {
            let c = &t.classification;
            println!(
                "{i:>4}  {:<20} {:<6} {:<6} {:<15} {}",
                t.minima().to_string(),
                if c.spine { "spine" } else { "-" },
                c.special_j,
                c.embedding,
                t.gram()
            );
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_gramgross(a: GramGrossArgs) -> Result<Outcome, Error> {
    let cands = gram_gross(a.p, a.d1)?;
    println!("{}", json_line(&report::gramgross_json(a.p, a.d1, &cands)));
    Ok(Outcome::Ok)
}

fn print_summary(rep: &VerifyReport, to_stderr: bool) {
    let mut lines = vec![format!(
        "verify p in [{}, {}]: {} primes, {} checks, {} failures",
        rep.options.pmin,
        rep.options.pmax,
        rep.primes.len(),
        rep.check_count(),
        rep.failure_count()
    )];
    for r in &rep.primes {
        for f in &r.failures {
            lines.push(format!("FAIL p={} {}: {}", r.p, f.rule, f.detail));
        }
    }
    let obs: Vec<_> = rep
        .primes
        .iter()
        .flat_map(|r| r.gramgross.iter().map(move |o| (r.p, o)))
        .collect();
    let multi: Vec<String> = obs
        .iter()
        .filter(|(_, o)| o.outputs > 1)
        .map(|(p, o)| format!("p={p} D1={} ({})", o.d1, o.outputs))
        .collect();
    lines.push(format!(
        "gramgross: {} spine types, {} with several outputs{}, {} matched at n = a",
        obs.len(),
        multi.len(),
        if multi.is_empty() {
            String::new()
        } else {
            format!(" [{}]", multi.join(", "))
        },
        obs.iter().filter(|(_, o)| o.n_equals_a).count()
    ));
    for c in &rep.cm {
        lines.push(format!(
            "cm {:<12} d={:<4} p_max={:<5} N_E expected {} computed {} {}",
            c.label,
            c.d,
            c.p_max,
            c.expected,
            c.computed.map_or("none".into(), |n| n.to_string()),
            if c.passed() { "ok" } else { "FAIL" }
        ));
    }
    for l in lines {
        if to_stderr {
            eprintln!("{l}");
        } else {
            println!("{l}");
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome, Error> {
    if a.pmin < 2 || a.pmax < a.pmin {
        return Err(Error::Precondition(format!(
            "need 2 <= pmin <= pmax, got {}..{}",
            a.pmin, a.pmax
        )));
    }
    let opts = VerifyOptions {
        pmin: a.pmin,
        pmax: a.pmax,
        oracle_cap: a.oracle_cap,
        ell_check_cap: a.ell_check_cap,
        extended_cm: a.extended_cm,
    };
    let rep = verify(&opts, &TypeCatalog::new())?;
    if a.json {
        println!("{}", json_line(&rep.to_json()));
    }
    print_summary(&rep, a.json);
    Ok(if rep.failure_count() == 0 {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn cmd_cm(a: CmArgs) -> Result<Outcome, Error> {
    let rows: Vec<&'static CmRow> = match &a.row {
        Some(label) => vec![find_row(label)?],
        None => cm_rows()
            .iter()
            .filter(|r| a.extended_cm || !EXTENDED_CM_D.contains(&r.d))
            .collect(),
    };
    let catalog = TypeCatalog::new();
    let mut failed = false;
    let mut json_rows = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let p_max = if a.all {
            a.pmax.max(((row.d + 1) * (row.d + 1)).div_ceil(4))
        } else {
            a.pmax
        };
        let rep = recompute_ne(row, p_max, &catalog)?;
        let mismatch = rep
            .points
            .iter()
            .any(|pt| pt.matches_closed_form == Some(false));
        failed |= mismatch || rep.n_e != Some(row.n_e);
        if a.json {
            json_rows.push(report::ne_json(&rep));
        } else {
            let csv = report::ne_csv(&rep);
            let body = if i == 0 {
                csv.as_str()
            } else {
                csv.split_once('\n').map_or("", |(_, b)| b)
            };
            print!("{body}");
        }
        eprintln!(
            "{}: N_E = {} (table {}) from p <= {p_max}",
            row.label,
            rep.n_e.map_or("none".into(), |n| n.to_string()),
            row.n_e
        );
    }
    if a.json {
        let v = if a.all {
            serde_json::json!({"schema": 1, "rows": json_rows})
        } else {
            json_rows.remove(0)
        };
        println!("{}", json_line(&v));
    }
    Ok(if failed { Outcome::Failed } else { Outcome::Ok })
}

fn cmd_oracle(a: OracleArgs) -> Result<Outcome, Error> {
    let set = supersingular_j_set(a.p)?;
    println!("{}", json_line(&report::oracle_json(&set)));
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Types(a) => cmd_types(a),
        Command::Gramgross(a) => cmd_gramgross(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Cm(a) => cmd_cm(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match res {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e @ (Error::NotPrime(_) | Error::Precondition(_) | Error::UnknownRow(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
