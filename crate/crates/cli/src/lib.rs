//! Command-line front end: `expand`, `pattern`, `verify`, `identities`,
//! `measure`. Exit codes: 0 success, 1 verification failure, 2 usage or
//! parameter error.

pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hypercf_core::analytics;
use hypercf_core::cf::{cf_to_series, reachable_order};
use hypercf_core::construction::{
    self, build_spec_with, check_identities, equation3, equation4, verify_pattern, PatternVerification,
};
use hypercf_core::mkaouar::expand;
use hypercf_core::{BiPoly, Error, PrimeField, RDefinition, Triple};

use report::{list, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hypercf", version, about = "Hyperquadratic continued fractions over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial quotients of a root of an equation, one step at a time.
    Expand(ExpandArgs),
    /// Partial quotients predicted by the block construction.
    Pattern(PatternArgs),
    /// Compare pattern and engine, and check both series identities.
    Verify(VerifyArgs),
    /// Fibonacci-polynomial identities behind F and R.
    Identities(IdentitiesArgs),
    /// Degree positions, partial sums and the irrationality measure.
    Measure(MeasureArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum EquationKind {
    /// Degree p+1 equation of the block pattern (needs --u u1,u2,u3).
    #[default]
    Eq3,
    /// Mills–Robbins family (needs --u u1, p >= 5).
    Eq4,
    /// Coefficients read from --file, one `i: c0 c1 ...` line per x-power.
    File,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum RKind {
    /// R = T^p - T F
    #[default]
    Remainder,
    /// R = T^p
    Listing,
}

impl From<RKind> for RDefinition {
    fn from(r: RKind) -> Self {
        match r {
            RKind::Remainder => RDefinition::Remainder,
            RKind::Listing => RDefinition::ListingPower,
        }
    }
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Vec<i64>,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t)]
    equation: EquationKind,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    r: RKind,
    /// Number of quotients printed on the `cfe` line (default: all).
    #[arg(long)]
    cfe: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct PatternArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Vec<i64>,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One or more primes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Vec<i64>,
    /// Sweep every triple in (F_p^*)^3 for each p.
    #[arg(long)]
    all_triples: bool,
    /// Default: n_2 + p^2 + 2.
    #[arg(long)]
    steps: Option<usize>,
    /// Precision of the pattern series (default: deepest available).
    #[arg(long, allow_negative_numbers = true)]
    order: Option<i64>,
    #[arg(long, value_enum, default_value_t)]
    r: RKind,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7, 11, 13])]
    p: Vec<u64>,
    /// Check f_n/f_{n-1} = [T]*n for n up to this bound.
    #[arg(long, default_value_t = 12)]
    bound: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long)]
    p: u64,
    /// Closed forms are listed for k = 1..=K.
    #[arg(long, default_value_t = 4)]
    k: u32,
    /// Profile the pattern for this triple as well.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Vec<i64>,
    /// Pattern length to profile (default: n_k for the largest k listed, capped at k = 3).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Expand(a) => cmd_expand(a, out, err),
        Command::Pattern(a) => cmd_pattern(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Identities(a) => cmd_identities(a, out),
        Command::Measure(a) => cmd_measure(a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NoAdmissibleQuotient { .. } | Error::DegreeBoundExceeded { .. } => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            }
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn field(p: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn triple(f: PrimeField, u: &[i64]) -> Result<Triple, CliError> {
    match u {
        [a, b, c] => Ok(Triple::new(f.from_i64(*a), f.from_i64(*b), f.from_i64(*c))?),
        _ => Err(CliError::Usage(format!("--u needs three values u1,u2,u3 (got {})", u.len()))),
    }
}

fn default_steps(f: PrimeField) -> usize {
    let p = f.modulus();
    (analytics::closed_forms(f, 2).n_k + p * p + 2) as usize
}

fn require_steps(steps: usize) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    Ok(())
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_expand(a: ExpandArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let f = field(a.p)?;
    require_steps(a.steps)?;
    let (eq, u, is_pattern) = match a.equation {
        EquationKind::Eq3 => {
            let t = triple(f, &a.u)?;
            let spec = build_spec_with(f, t, a.r.into())?;
            (equation3(&spec), t.residues().to_vec(), true)
        }
        EquationKind::Eq4 => {
            let [u1] = a.u[..] else {
                return Err(CliError::Usage("equation eq4 needs a single --u u1".into()));
            };
            let u1 = f.from_i64(u1);
            (equation4(f, u1)?, vec![u1.value()], false)
        }
        EquationKind::File => {
            let path = a.file.ok_or_else(|| CliError::Usage("--equation file needs --file PATH".into()))?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            (BiPoly::parse(f, &text)?, a.u.iter().map(|&x| f.from_i64(x).value()).collect(), false)
        }
    };
    let expansion = expand(&eq, a.steps)?;
    let pqs = &expansion.quotients;
    let alpha = cf_to_series(pqs, reachable_order(pqs))?;
    let residual = construction::ResidualCheck::of(&eq.eval_at_series(&alpha));

    let mut report = Report::new(a.p, u).with_quotients(pqs);
    if is_pattern {
        report = report.with_nu(f);
    }
    report.verified = Some(residual.is_zero());
    report.residual_order = Some(residual.vanishing_order());

    match a.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => {
            let shown = a.cfe.unwrap_or(pqs.len()).min(pqs.len());
            writeln!(out, "p= {}", a.p)?;
            writeln!(out, "cfe {}", list(pqs.iter().take(shown)))?;
            writeln!(out, "degrees {}", list(&report.degrees))?;
            writeln!(out, "lead.coef. {}", list(&report.leading_coefficients))?;
            writeln!(
                err,
                "residual: {} down to t^{} (peak coefficient degree {} <= bound {}){}",
                if residual.is_zero() { "zero" } else { "nonzero" },
                residual.vanishing_order(),
                expansion.peak_coeff_degree,
                expansion.degree_bound,
                if expansion.terminated { ", rational root" } else { "" },
            )?;
        }
    }
    Ok(if residual.is_zero() { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_pattern(a: PatternArgs, out: &mut dyn Write) -> CliResult {
    let f = field(a.p)?;
    require_steps(a.steps)?;
    let t = triple(f, &a.u)?;
    let spec = construction::build_spec(f, t)?;
    let pqs = construction::pattern(&spec, a.steps);
    let report = Report::new(a.p, t.residues().to_vec()).with_quotients(&pqs).with_nu(f);
    match a.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => {
            writeln!(out, "p= {}", a.p)?;
            writeln!(out, "pattern {}", list(&pqs))?;
            writeln!(out, "degrees {}", list(&report.degrees))?;
            writeln!(out, "lead.coef. {}", list(&report.leading_coefficients))?;
        }
    }
    Ok(EXIT_OK)
}

struct VerifyJob {
    field: PrimeField,
    triple: Triple,
}

fn verify_report(job: &VerifyJob, v: &PatternVerification) -> Report {
    let mut r = Report::new(job.field.modulus(), job.triple.residues().to_vec())
        .with_quotients(&v.pattern)
        .with_nu(job.field);
    r.verified = Some(v.verified());
    r.residual_order = Some(v.residual_order());
    r
}

fn describe(job: &VerifyJob, v: &PatternVerification) -> String {
    let mut s = format!(
        "p= {} u= {} steps= {}\n",
        job.field.modulus(),
        list(job.triple.residues()),
        v.steps
    );
    match (&v.engine_error, v.first_mismatch) {
        (Some(e), _) => s.push_str(&format!("pattern/engine: engine aborted ({e})\n")),
        (None, Some(i)) => {
            let engine = v.engine.as_ref().and_then(|e| e.get(i)).map_or("-".into(), |a| a.to_string());
            let pat = v.pattern.get(i).map_or("-".into(), |a| a.to_string());
            s.push_str(&format!("pattern/engine: mismatch at a{i} (pattern {pat}, engine {engine})\n"));
        }
        (None, None) => s.push_str("pattern/engine: match\n"),
    }
    let line = |name: &str, r: &construction::ResidualCheck| {
        if r.is_zero() {
            format!("{name} residual: zero down to t^{}\n", r.valid_order)
        } else {
            format!("{name} residual: nonzero term at t^{}\n", r.leading_nonzero.unwrap_or(0))
        }
    };
    if let Some(r) = &v.eq2 {
        s.push_str(&line("eq2", r));
    }
    s.push_str(&line("eq3", &v.eq3));
    s.push_str(&format!("verified: {}\n", v.verified()));
    s
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    if let Some(s) = a.steps {
        require_steps(s)?;
    }
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let mut jobs = Vec::new();
    for &p in &a.p {
        let f = field(p)?;
        if a.all_triples {
            for u1 in f.units() {
                for u2 in f.units() {
                    for u3 in f.units() {
                        jobs.push(VerifyJob { field: f, triple: Triple::new(u1, u2, u3)? });
                    }
                }
            }
        } else if a.u.is_empty() {
            return Err(CliError::Usage("verify needs --u u1,u2,u3 or --all-triples".into()));
        } else {
            jobs.push(VerifyJob { field: f, triple: triple(f, &a.u)? });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", a.jobs)))?;
    let results: Vec<Result<PatternVerification, Error>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let spec = build_spec_with(job.field, job.triple, a.r.into())?;
                let steps = a.steps.unwrap_or_else(|| default_steps(job.field));
                verify_pattern(&spec, steps, a.order)
            })
            .collect()
    });
    let mut all_ok = true;
    let mut reports = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let v = res?;
        all_ok &= v.verified();
        match a.format {
            Format::Text => write!(out, "{}", describe(job, &v))?,
            Format::Json => reports.push(verify_report(job, &v)),
        }
    }
    if a.format == Format::Json {
        if reports.len() == 1 {
            emit_json(out, &reports[0])?;
        } else {
            emit_json(out, &reports)?;
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_identities(a: IdentitiesArgs, out: &mut dyn Write) -> CliResult {
    if a.bound == 0 {
        return Err(CliError::Usage("--bound must be at least 1".into()));
    }
    let mut all_ok = true;
    let mut reports = Vec::new();
    for &p in &a.p {
        let f = field(p)?;
        let r = check_identities(f, a.bound);
        all_ok &= r.all_pass();
        match a.format {
            Format::Text => writeln!(
                out,
                "p= {p} F=f_(p-1): {} f_p+f_(p-2)=T^p: {} R=2f_(p-2): {} f_n/f_(n-1)=[T]*n (n<={}): {}",
                r.f_is_fibonacci, r.fibonacci_sum_is_tp, r.r_is_twice_fibonacci, r.omega_bound, r.omega_prefixes
            )?,
            Format::Json => {
                let mut rep = Report::new(p, Vec::new());
                rep.verified = Some(r.all_pass());
                reports.push(rep);
            }
        }
    }
    if a.format == Format::Json {
        emit_json(out, &reports)?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_measure(a: MeasureArgs, out: &mut dyn Write) -> CliResult {
    let f = field(a.p)?;
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let observed = if a.u.is_empty() {
        None
    } else {
        let t = triple(f, &a.u)?;
        let steps = match a.steps {
            Some(s) => s,
            None => analytics::closed_forms(f, a.k.min(3)).n_k as usize,
        };
        require_steps(steps)?;
        let spec = construction::build_spec(f, t)?;
        Some((t, construction::pattern(&spec, steps)))
    };
    let profile = observed.as_ref().map(|(_, pqs)| analytics::profile(pqs, f));
    let irr = analytics::irrationality(f, a.k, profile.as_ref());
    let agree = profile.as_ref().is_none_or(|pr| pr.agrees_with_closed_forms());
    let ok = irr.consistent_with_liouville() && agree;

    match a.format {
        Format::Json => {
            let mut rep = match &observed {
                Some((t, pqs)) => Report::new(a.p, t.residues().to_vec()).with_quotients(pqs),
                None => Report::new(a.p, Vec::new()),
            };
            rep = rep.with_nu(f);
            rep.verified = Some(ok);
            emit_json(out, &rep)?;
        }
        Format::Text => {
            writeln!(out, "p= {}", a.p)?;
            writeln!(
                out,
                "nu {} (liouville bound {}, 2 < nu <= p+1: {})",
                irr.nu,
                irr.liouville_upper,
                irr.consistent_with_liouville()
            )?;
            for k in 1..=a.k {
                let c = analytics::closed_forms(f, k);
                writeln!(
                    out,
                    "k= {k} n_k= {} s_k= {} d= {} ratio= {}",
                    c.n_k,
                    c.s_k,
                    c.d_k,
                    irr.ratio_samples[k as usize - 1]
                )?;
            }
            if let Some(pr) = &profile {
                let bp: Vec<String> = pr
                    .big_positions
                    .iter()
                    .map(|b| format!("({}, {}, {}, s={})", b.k, b.n, b.degree, b.partial_sum))
                    .collect();
                writeln!(out, "observed {}", list(bp))?;
                writeln!(out, "closed forms agree: {}", pr.agrees_with_closed_forms())?;
                if let Some(e) = irr.empirical_nu {
                    writeln!(out, "empirical nu (finite max, not the limit) {e}")?;
                }
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}
