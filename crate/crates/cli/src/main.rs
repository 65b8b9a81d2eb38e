//! `lpcoh` command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lpcoh::asymptotics::{self, Direction, Sl3Pattern};
use lpcoh::heis::{self, HeisForm};
use lpcoh::strips::{self, render_markdown, StripReport};
use lpcoh::structure::{self, StructureReport};
use lpcoh::verify::{self, Suite};
use lpcoh::{straight, EigProfile, Error, Rat, WeightConfig};

#[derive(Parser)]
#[command(
    name = "lpcoh",
    version,
    about = "L^p-cohomology strip tables and exponent checks for solvable Lie groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural report for a weight configuration.
    Analyze { weights: PathBuf },
    /// Canonical triple and critical exponent of a straight configuration.
    Palpha { weights: PathBuf },
    /// Compare two straight configurations up to quasi-isometry.
    Qi { first: PathBuf, second: PathBuf },
    /// Strip decomposition for an eigenvalue profile `{"lambdas": [...]}`.
    Strips {
        profile: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        /// The group is abelian-by-cyclic with abelian nilradical.
        #[arg(long)]
        abelian: bool,
    },
    /// Closed-form tables.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Heisenberg exterior calculus.
    Heis {
        #[command(subcommand)]
        cmd: HeisCmd,
    },
    /// Integrability conditions of the nonvanishing construction.
    Budget { weights: PathBuf },
    /// Minimize e^{-at}A + e^{bt}B in closed form.
    LemmaNum {
        #[arg(long)]
        a: Rat,
        #[arg(long)]
        b: Rat,
        #[arg(long = "A")]
        big_a: f64,
        #[arg(long = "B")]
        big_b: f64,
        /// Compare against a numeric minimizer.
        #[arg(long)]
        numeric_check: bool,
    },
    /// Decay certificate for the SL3 test forms.
    Sl3Decay {
        #[arg(long)]
        p: Rat,
        #[arg(long, value_parser = parse_pattern)]
        pattern: Sl3Pattern,
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        direction: Direction,
    },
    /// Seeded randomized verification suites.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum TableKind {
    /// Real hyperbolic space of dimension n+1.
    Real {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Complex hyperbolic space of complex dimension m.
    Complex {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// SL3(R)/SO(3), degree 2.
    Sl3 {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Straight group from a weight file, degree 2.
    Salpha {
        weights: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Subcommand)]
enum HeisCmd {
    /// Lefschetz, duality and differential identities.
    Verify {
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Comma-separated check name prefixes (all when omitted).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ranks of L_k: horizontal k-forms to horizontal (k+2)-forms.
    Lefschetz {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// The 2-form d(tau).
    DTau {
        #[arg(long)]
        m: usize,
    },
}

fn parse_pattern(s: &str) -> Result<Sl3Pattern, String> {
    match s.replace(' ', "").as_str() {
        "fdx" => Ok(Sl3Pattern::FDx),
        "gdy" => Ok(Sl3Pattern::GDy),
        _ => Err(format!("unknown pattern {s:?} (expected fdx or gdy)")),
    }
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    match s {
        "+" | "plus" => Ok(Direction::Plus),
        "-" | "minus" => Ok(Direction::Minus),
        _ => Err(format!("unknown direction {s:?} (expected + or -)")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Lib(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse(_) | Error::Domain(_)) | Failure::Io(_) => 2,
            Failure::Lib(Error::Contract(_) | Error::Unsupported(_)) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Verification(m) => m.clone(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Rendered output plus an optional verification failure to report after
/// writing it.
struct Output {
    json: Value,
    md: String,
    failed: Option<String>,
}

impl Output {
    fn new(json: Value, md: String) -> Output {
        Output {
            json,
            md,
            failed: None,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_weights(path: &Path) -> CliResult<WeightConfig> {
    Ok(WeightConfig::from_json(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn rats(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(Rat::to_string).collect();
    format!("({})", parts.join(", "))
}

fn structure_md(r: &StructureReport) -> String {
    let mut out = format!("# Structure (r = {}, n = {})\n\n", r.r, r.n);
    let _ = writeln!(out, "- center dimension: {}", r.center_basis.len());
    let _ = writeln!(
        out,
        "- derived algebra is all of R^n: {}",
        r.derived_is_full_rn
    );
    let _ = writeln!(out, "- abelian direct factor: {}", r.has_abelian_factor);
    match &r.reducible_partition {
        Some((a, b)) => {
            let _ = writeln!(out, "- reducible: {a:?} | {b:?}");
        }
        None => {
            let _ = writeln!(out, "- irreducible: {}", r.irreducible());
        }
    }
    let show = |w: &Option<Vec<Rat>>| w.as_deref().map(rats).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "- npc witness: {}", show(&r.npc_witness));
    let _ = writeln!(
        out,
        "- hyperbolic direction: {}",
        show(&r.hyperbolic_witness)
    );
    out
}

fn tables(title: &str, reports: Vec<StripReport>) -> Output {
    let md = render_markdown(title, &reports);
    Output::new(json!({ "title": title, "reports": reports }), md)
}

fn degrees(requested: Option<usize>, max: usize) -> Vec<usize> {
    requested.map_or_else(|| (1..=max).collect(), |k| vec![k])
}

fn only_degree_two(requested: Option<usize>) -> CliResult<()> {
    match requested {
        Some(k) if k != 2 => {
            Err(Error::Domain(format!("this table is only known in degree 2, not {k}")).into())
        }
        _ => Ok(()),
    }
}

fn run_table(kind: TableKind) -> CliResult<Output> {
    Ok(match kind {
        TableKind::Real { n, degree } => {
            let reports = degrees(degree, n)
                .into_iter()
                .map(|k| strips::real_hyperbolic_table(n, k))
                .collect::<Result<Vec<_>, _>>()?;
            tables(&format!("Real hyperbolic space, n = {n}"), reports)
        }
        TableKind::Complex { m, degree } => {
            let reports = degrees(degree, (2 * m).saturating_sub(1))
                .into_iter()
                .map(|k| strips::complex_hyperbolic_table(m, k))
                .collect::<Result<Vec<_>, _>>()?;
            tables(&format!("Complex hyperbolic space, m = {m}"), reports)
        }
        TableKind::Sl3 { degree } => {
            only_degree_two(degree)?;
            tables("SL(3,R)/SO(3)", vec![strips::sl3_degree2()])
        }
        TableKind::Salpha { weights, degree } => {
            only_degree_two(degree)?;
            let cfg = load_weights(&weights)?;
            let mu = straight::canonicalize(&cfg)?;
            let report = strips::s_alpha_degree2_mu(&mu)?;
            tables(
                &format!("Straight group, p_alpha = {}", mu.p_alpha),
                vec![report],
            )
        }
    })
}

fn verify_output(report: verify::VerifyReport) -> Output {
    let failed = report
        .checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| c.name.clone())
        .collect::<Vec<_>>();
    let md = report.to_markdown();
    let mut out = Output::new(to_value(&report), md);
    if !failed.is_empty() {
        out.failed = Some(format!("verification failed: {}", failed.join(", ")));
    }
    out
}

fn run_heis(cmd: HeisCmd) -> CliResult<Output> {
    Ok(match cmd {
        HeisCmd::Verify {
            m,
            checks,
            trials,
            seed,
        } => {
            let mut report = verify::run(Suite::Heis, seed, trials, m)?;
            if !checks.is_empty() {
                report
                    .checks
                    .retain(|c| checks.iter().any(|k| c.name.starts_with(k.as_str())));
                if report.checks.is_empty() {
                    return Err(Error::Parse(format!("no heis checks match {checks:?}")).into());
                }
                report.all_passed = report.checks.iter().all(|c| c.ok);
            }
            verify_output(report)
        }
        HeisCmd::Lefschetz { m, k } => {
            let ks = k.map_or_else(|| (0..=heis::hdim(m.max(1))).collect(), |k| vec![k]);
            let mut rows = Vec::new();
            let mut md = format!("# Lefschetz ranks, m = {m}\n\n| k | domain | kernel | image | codomain |\n|---|---|---|---|---|\n");
            for k in ks {
                let r = heis::lefschetz_rank(m, k)?;
                let _ = writeln!(
                    md,
                    "| {k} | {} | {} | {} | {} |",
                    r.dim_domain, r.dim_kernel, r.dim_image, r.dim_codomain
                );
                let mut v = to_value(&r);
                v["k"] = json!(k);
                v["injective"] = json!(r.dim_kernel == 0);
                v["surjective"] = json!(r.dim_image == r.dim_codomain);
                rows.push(v);
            }
            Output::new(json!({ "m": m, "ranks": rows }), md)
        }
        HeisCmd::DTau { m } => {
            if !(2..=12).contains(&m) {
                return Err(Error::Domain(format!("m={m} outside 2..=12")).into());
            }
            let form: HeisForm = heis::d_tau(m);
            Output::new(to_value(&form), format!("d tau = {form}\n"))
        }
    })
}

fn run(cmd: Cmd) -> CliResult<Output> {
    Ok(match cmd {
        Cmd::Analyze { weights } => {
            let report = structure::analyze(&load_weights(&weights)?)?;
            Output::new(to_value(&report), structure_md(&report))
        }
        Cmd::Palpha { weights } => {
            let mu = straight::canonicalize(&load_weights(&weights)?)?;
            let md = format!("mu = {}\np_alpha = {}\n", rats(&mu.mu), mu.p_alpha);
            Output::new(to_value(&mu), md)
        }
        Cmd::Qi { first, second } => {
            let a = straight::canonicalize(&load_weights(&first)?)?;
            let b = straight::canonicalize(&load_weights(&second)?)?;
            let same = a == b;
            let md = format!(
                "first: mu = {}, p_alpha = {}\nsecond: mu = {}, p_alpha = {}\nquasi-isometric: {same}\n",
                rats(&a.mu),
                a.p_alpha,
                rats(&b.mu),
                b.p_alpha
            );
            Output::new(
                json!({ "first": a, "second": b, "quasi_isometric": same }),
                md,
            )
        }
        Cmd::Strips {
            profile,
            degree,
            abelian,
        } => {
            let prof: EigProfile = serde_json::from_str(&read(&profile)?)
                .map_err(|e| Error::Parse(format!("profile: {e}")))?;
            let reports = degrees(degree, prof.n())
                .into_iter()
                .map(|k| strips::strip_report(&prof, k, abelian))
                .collect::<Result<Vec<_>, _>>()?;
            let lambdas: Vec<Rat> = prof.lambdas().to_vec();
            tables(&format!("Profile {}", rats(&lambdas)), reports)
        }
        Cmd::Table { kind } => run_table(kind)?,
        Cmd::Heis { cmd } => run_heis(cmd)?,
        Cmd::Budget { weights } => {
            let mu = straight::canonicalize(&load_weights(&weights)?)?;
            let b = asymptotics::budget_nonvanishing(&mu)?;
            let md = format!(
                "mu = {}\nplus condition: {} (p > {})\nminus condition: {} (p > {})\nfeasible p:\n\n{}",
                rats(&mu.mu),
                b.plus_condition,
                b.plus_threshold,
                b.minus_condition,
                b.minus_threshold,
                b.feasible_p.to_markdown()
            );
            Output::new(json!({ "mu": mu, "budget": b }), md)
        }
        Cmd::LemmaNum {
            a,
            b,
            big_a,
            big_b,
            numeric_check,
        } => {
            let res = asymptotics::lemma_num_min(&a, &b, big_a, big_b)?;
            let mut v = to_value(&res);
            let mut md = format!(
                "t_min = {} = {}\nf_min = {}\n",
                res.t_min_expr, res.t_min, res.f_min
            );
            let mut failed = None;
            if numeric_check {
                let (t, f) = asymptotics::numeric_num_min(a.to_f64(), b.to_f64(), big_a, big_b);
                let rel = (res.f_min - f).abs() / f;
                v["numeric"] = json!({ "t_min": t, "f_min": f, "relative_error": rel });
                let _ = writeln!(md, "numeric: t = {t}, f = {f}, relative error = {rel:e}");
                if rel > 1e-9 {
                    failed = Some(format!("closed form and numeric minimum differ by {rel:e}"));
                }
            }
            Output {
                json: v,
                md,
                failed,
            }
        }
        Cmd::Sl3Decay {
            p,
            pattern,
            direction,
        } => {
            let cert = asymptotics::sl3_decay(pattern, &p, direction)?;
            let md = match &cert {
                Some(c) => format!(
                    "a = {}, b = {}, c = {}, t = ({})*s\ndecay rates: {}\n",
                    c.a,
                    c.b,
                    c.c,
                    c.kappa,
                    rats(&c.rates)
                ),
                None => "no decay in this direction\n".to_string(),
            };
            Output::new(
                json!({ "p": p, "pattern": pattern, "direction": direction, "certificate": cert }),
                md,
            )
        }
        Cmd::Verify {
            suite,
            seed,
            trials,
            m,
        } => verify_output(verify::run(suite, seed, trials, m)?),
    })
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.cmd).and_then(|output| {
        let text = match cli.format {
            Format::Json => {
                serde_json::to_string_pretty(&output.json).expect("json values serialize") + "\n"
            }
            Format::Md => output.md,
        };
        emit(&text, cli.out.as_deref())?;
        match output.failed {
            Some(msg) => Err(Failure::Verification(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lpcoh: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
