//! Command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical verification failure, 2 usage,
//! I/O, or format errors (including pipeline rejections).

use clap::{Parser, Subcommand};
use curveforge::arith::Rational;
use curveforge::cert::{read_certificate, write_certificate, CertError};
use curveforge::forge::{forge, ConstructionCertificate, CoverRole, ForgeOptions, PointRole};
use curveforge::verify::{
    check_certificate, lind_reichardt_check, local_solvability_report,
    rational_point_search, SEARCH_DISCLAIMER,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "curveforge",
    about = "Constructs curves over Q with an exact prescribed number of rational \
             points and points over every completion, and verifies the certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a certificate for a curve with exactly n rational points.
    Forge {
        /// Target number of rational points (nonnegative).
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Seed curve coefficients "a,b" for y^2 = x^3 + a x^2 + b x
        /// (integers; must certify as rank 0). Default: 0,-1.
        #[arg(long)]
        seed: Option<String>,
        /// Square-class representatives "a,b" (independent modulo squares).
        /// Default: 3,5.
        #[arg(long)]
        classes: Option<String>,
        /// Output file for the certificate JSON (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive every condition of a certificate and search for rational
    /// points up to a height bound.
    Verify {
        file: PathBuf,
        /// Height bound for the falsification point search.
        #[arg(long, default_value_t = 10_000)]
        height: u64,
        /// Certify local solvability at all primes up to this bound (the
        /// structural argument covers the rest).
        #[arg(long = "places-bound", default_value_t = 1_000)]
        places_bound: u64,
        /// Also run the classical everywhere-locally-solvable pointless
        /// quartic regression check.
        #[arg(long = "lind-reichardt")]
        lind_reichardt: bool,
    },
    /// Print a human-readable summary of a certificate.
    Inspect { file: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Forge { n, seed, classes, out } => cmd_forge(n, seed, classes, out),
        Command::Verify { file, height, places_bound, lind_reichardt } => {
            cmd_verify(&file, height, places_bound, lind_reichardt)
        }
        Command::Inspect { file } => cmd_inspect(&file),
    }
}

fn parse_pair(arg: &str, what: &str) -> Result<(Rational, Rational), String> {
    let (a, b) = arg
        .split_once(',')
        .ok_or_else(|| format!("{what} must be two comma-separated rationals"))?;
    let a = a.trim().parse().map_err(|e| format!("{what}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{what}: {e}"))?;
    Ok((a, b))
}

fn cmd_forge(
    n: i64,
    seed: Option<String>,
    classes: Option<String>,
    out: Option<PathBuf>,
) -> ExitCode {
    let build = || -> Result<ConstructionCertificate, String> {
        if n < 0 {
            return Err(format!("--n must be nonnegative, got {n}"));
        }
        let mut options = ForgeOptions::default();
        if let Some(s) = &seed {
            options.seed = Some(parse_pair(s, "--seed")?);
        }
        if let Some(c) = &classes {
            options.classes = Some(parse_pair(c, "--classes")?);
        }
        forge(n as u64, &options).map_err(|e| e.to_string())
    };
    let cert = match build() {
        Ok(cert) => cert,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let summary = summarize(&cert);
    match out {
        Some(path) => {
            if let Err(e) = write_certificate(&cert, &path) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            println!("{summary}");
            println!("certificate written to {}", path.display());
        }
        None => {
            print!("{}", curveforge::cert::certificate_to_json(&cert));
            eprintln!("{summary}");
        }
    }
    ExitCode::SUCCESS
}

fn summarize(cert: &ConstructionCertificate) -> String {
    let levels = cert.covers.len() - 1;
    let counts: Vec<String> = (0..=levels)
        .map(|l| (cert.mw.torsion_points.len() << l).to_string())
        .collect();
    let s: Vec<String> = cert.square_data.s.iter().map(|p| p.to_string()).collect();
    format!(
        "n = {}: seed {} with {} certified points; {} doubling cover(s) \
         ({} points below the final cover); S = {{{}}}, w = {}, c = {}",
        cert.n,
        cert.seed,
        cert.mw.torsion_points.len(),
        levels,
        counts.last().unwrap(),
        s.join(", "),
        cert.square_data.w,
        cert.square_data.c,
    )
}

#[derive(Serialize)]
struct PointSearchSummary {
    height: u64,
    found: u64,
    expected: u64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    certificate: curveforge::verify::VerificationReport,
    point_search: PointSearchSummary,
    local_solvability: curveforge::verify::LocalSolvabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    lind_reichardt: Option<curveforge::verify::LindReichardtReport>,
    passed: bool,
    note: String,
}

fn cmd_verify(
    file: &PathBuf,
    height: u64,
    places_bound: u64,
    with_lind_reichardt: bool,
) -> ExitCode {
    let cert = match read_certificate(file) {
        Ok(cert) => cert,
        Err(e) => return format_error(e),
    };
    let report = check_certificate(&cert);
    let points = rational_point_search(&cert, height);
    let search = PointSearchSummary {
        height,
        found: points.len() as u64,
        expected: cert.n,
        passed: points.len() as u64 == cert.n,
    };
    let local = local_solvability_report(&cert, places_bound);
    let lr = with_lind_reichardt.then(|| lind_reichardt_check(100_000, places_bound));
    let passed = report.passed()
        && search.passed
        && local.all_places_certified
        && lr.as_ref().is_none_or(|r| r.passed());
    let output = VerifyOutput {
        certificate: report,
        point_search: search,
        local_solvability: local,
        lind_reichardt: lr,
        passed,
        note: SEARCH_DISCLAIMER.to_string(),
    };
    println!("{}", serde_json::to_string_pretty(&output).expect("report serializes"));
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn format_error(e: CertError) -> ExitCode {
    match e {
        CertError::Schema { found, expected } => {
            eprintln!(
                "error: certificate has schema version {found}; this tool reads \
                 version {expected}"
            );
        }
        other => eprintln!("error: {other}"),
    }
    ExitCode::from(2)
}

fn cmd_inspect(file: &PathBuf) -> ExitCode {
    let cert = match read_certificate(file) {
        Ok(cert) => cert,
        Err(e) => return format_error(e),
    };
    println!("schema:          {}", cert.schema);
    println!("target count n:  {}", cert.n);
    println!("seed curve:      {}", cert.seed);
    println!(
        "seed points:     {} (rank bound {})",
        cert.mw.torsion_points.len(),
        cert.mw.rank_upper_bound
    );
    for (i, p) in cert.mw.torsion_points.iter().enumerate() {
        println!("  z{i} = {p}");
    }
    println!("covers:          {}", cert.covers.len());
    for (i, c) in cert.covers.iter().enumerate() {
        let role = match c.role {
            CoverRole::Doubling => "doubling",
            CoverRole::Final => "final",
        };
        println!(
            "  level {}: {role} cover, pole order {} over x0 = {} (fiber {})",
            i + 1,
            c.pole_order,
            c.ram_point.x0,
            c.ram_point.fiber
        );
    }
    let levels = cert.covers.len() - 1;
    println!(
        "certified counts: {}",
        (0..=levels)
            .map(|l| format!("level {l}: {}", cert.mw.torsion_points.len() << l))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("designated points ({}):", cert.designated_points.len());
    for (i, d) in cert.designated_points.iter().enumerate() {
        let role = match d.role {
            PointRole::Survivor => "survives with one rational point above",
            PointRole::ValueA => "carries value a",
            PointRole::ValueB => "carries value b",
            PointRole::ValueAb => "carries value ab",
            PointRole::ValueC => "carries value c",
        };
        println!("  y{} = {}: {role}", i + 1, d.point);
    }
    let s: Vec<String> = cert.square_data.s.iter().map(|p| p.to_string()).collect();
    println!(
        "square data:     a = {}, b = {}, c = {}, S = {{{}}}, w = {}",
        cert.square_data.a,
        cert.square_data.b,
        cert.square_data.c,
        s.join(", "),
        cert.square_data.w
    );
    println!("audit entries:   {}", cert.audit.len());
    ExitCode::SUCCESS
}
