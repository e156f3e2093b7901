//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::base::BaseSolution;
use crate::certifier::{self, CertStatus, CertifyError, FailReason, Variant};
use crate::decomposer::{self, DecomposeError};
use crate::hensel::{self, HenselError};
use crate::pade::{self, PadeError};
use crate::report::{parse_ratio, ratio_string};
use crate::rigor::Precision;
use crate::survey::{self, Checkpoint, SurveyError, SurveyParams, SurveyRecord};
use crate::util::decimal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDECIDABLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "rnlab", version, about = "Exact tools for x^2 + D = p^n")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BaseArgs {
    #[arg(long = "D")]
    pub d: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = parse_big)]
    pub x0: BigUint,
    #[arg(long)]
    pub n0: u32,
}

impl BaseArgs {
    fn base(&self) -> BaseSolution {
        BaseSolution::new(self.d, self.p, self.x0.clone(), self.n0)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify the size condition for a base solution.
    Certify {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, value_parser = parse_sigma)]
        sigma: BigRational,
        #[arg(long, default_value = "5j", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Enclose the largest sigma for which the size condition holds.
    MaxSigma {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value = "5j", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Test m > x^sigma for every root of x^2 + D modulo p^n, n <= n-max.
    Survey {
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_sigma)]
        sigma: BigRational,
        #[arg(long)]
        n_max: u32,
        /// Checkpoint file: resumed from when present, rewritten while running.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Exponents between checkpoint writes.
        #[arg(long, default_value_t = 100)]
        checkpoint_every: u32,
        /// Include wall-clock time in the report (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
    /// Roots of x^2 + D modulo p^n.
    Hensel {
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Padé approximant identities and bounds.
    Pade {
        #[command(subcommand)]
        action: PadeAction,
    },
    /// Write a large solution as beta^k mu.
    Decompose {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        n: u32,
        /// A single root; all roots modulo p^n when omitted.
        #[arg(long, value_parser = parse_big)]
        x: Option<BigUint>,
    },
    /// Decompose and audit the cofactor inequality chain.
    Audit {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_big)]
        x: Option<BigUint>,
        #[arg(long, default_value = "1/10", value_parser = parse_sigma)]
        sigma: BigRational,
        #[arg(long, default_value = "5j", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Brute-force base solutions x0^2 + D = p^n0 for n0 <= n0-max.
    ScanHuge {
        #[arg(long = "D")]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n0_max: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum PadeAction {
    /// Exact identity sweep.
    Verify {
        #[arg(long, default_value_t = 8)]
        j_max: u32,
        #[arg(long, default_value_t = 6)]
        abc_max: u64,
    },
    /// Print one system.
    Build {
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 0)]
        g: u8,
        /// Divide by the content c_g(j).
        #[arg(long)]
        normalized: bool,
    },
    /// Content, E and (with a base solution) Q bounds for j in a range.
    Bounds {
        #[arg(long, default_value_t = 1)]
        j_from: u32,
        #[arg(long)]
        j_to: u32,
        #[arg(long = "D")]
        d: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_parser = parse_big)]
        x0: Option<BigUint>,
        #[arg(long)]
        n0: Option<u32>,
    },
    /// Kernel maximum and integral at b.
    Kernel {
        #[arg(long, default_value = "0.953")]
        b: String,
    },
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a nonnegative decimal integer"))
}

fn parse_sigma(s: &str) -> Result<BigRational, String> {
    if !s.contains('/') {
        return Err(format!("sigma must be a fraction a/b, got {s:?}"));
    }
    parse_ratio(s).ok_or_else(|| format!("{s:?} is not a fraction a/b"))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Undecidable(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Undecidable(_) => EXIT_UNDECIDABLE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "invalid_input",
            CliError::Undecidable(_) => "undecidable",
            CliError::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Undecidable(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Undecidable(_) => CliError::Undecidable(e.to_string()),
            CertifyError::NotMonotone { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<HenselError> for CliError {
    fn from(e: HenselError) -> Self {
        match e {
            HenselError::LiftFailure { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<PadeError> for CliError {
    fn from(e: PadeError) -> Self {
        match e {
            PadeError::InvalidParameters(_) | PadeError::BOutOfRange { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::PreconditionFail(_) => CliError::Invalid(e.to_string()),
            DecomposeError::Pade(p) => p.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SurveyError> for CliError {
    fn from(e: SurveyError) -> Self {
        match e {
            SurveyError::Hensel(h) => h.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Invalid(format!("i/o error: {e}"))
    }
}

/// Where reports go: standard output or the `--out` file.
struct Output {
    format: Format,
    sink: Box<dyn Write>,
}

impl Output {
    fn open(format: Format, out: Option<&Path>) -> Result<Self, CliError> {
        let sink: Box<dyn Write> = match out {
            Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout())),
        };
        Ok(Output { format, sink })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.sink, "{s}")?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<(), CliError> {
        let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
        self.line(&s)
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.sink.flush()?;
        Ok(())
    }
}

/// Parse `argv`, run, and return the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json_requested = argv
        .windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
        || argv.iter().any(|a| a == "--format=json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            if json_requested {
                print_error_json(&CliError::Invalid(e.to_string()));
            } else {
                let _ = e.print();
            }
            return EXIT_INVALID;
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if format == Format::Json {
                print_error_json(&e);
            } else {
                eprintln!("error: {}", e.message());
            }
            e.code()
        }
    }
}

fn print_error_json(e: &CliError) {
    let v = json!({
        "schema": "rnlab.error/1",
        "error": e.kind(),
        "message": e.message(),
        "exit_code": e.code(),
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("error serializes"));
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        // a global pool may already exist when called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let prec = Precision::from_env();
    let mut out = Output::open(cli.format, cli.out.as_deref())?;
    let code = match cli.command {
        Command::Certify { base, sigma, variant } => cmd_certify(&mut out, &base.base(), &sigma, variant, prec)?,
        Command::MaxSigma { base, variant } => {
            let iv = certifier::max_sigma(&base.base(), variant, prec)?;
            match out.format {
                Format::Json => out.json(&iv)?,
                Format::Tsv => {
                    out.line("lo\thi\tempty\tbeta_floor_ok\tquoted_sigma_certifiable")?;
                    out.line(&format!(
                        "{}\t{}\t{}\t{}\t{}",
                        iv.lo_decimal, iv.hi_decimal, iv.empty, iv.beta_floor_ok, iv.quoted_sigma_certifiable
                    ))?;
                }
                Format::Human => {
                    if iv.empty {
                        out.line(&format!("empty: {}", iv.reason.clone().unwrap_or_default()))?;
                    } else {
                        out.line(&format!("max sigma in [{}, {}]", iv.lo_decimal, iv.hi_decimal))?;
                    }
                    out.line(&format!("beta floor ok: {}", iv.beta_floor_ok))?;
                    out.line(&iv.note)?;
                }
            }
            EXIT_OK
        }
        Command::Survey {
            d,
            p,
            sigma,
            n_max,
            resume,
            checkpoint_every,
            timing,
        } => cmd_survey(&mut out, SurveyParams::new(d, p, sigma, n_max), resume.as_deref(), checkpoint_every, timing)?,
        Command::Hensel { d, p, n } => cmd_hensel(&mut out, d, p, n)?,
        Command::Pade { action } => cmd_pade(&mut out, action, prec)?,
        Command::Decompose { base, n, x } => {
            let b = base.base();
            let xs = roots_or(&b, n, x)?;
            let decs = xs
                .iter()
                .map(|x| decomposer::decompose(&b, x, n))
                .collect::<Result<Vec<_>, _>>()?;
            match out.format {
                Format::Json => out.json(&json!({
                    "schema": "rnlab.decompositions/1",
                    "decompositions": decs,
                }))?,
                Format::Tsv => {
                    out.line("n\tx\tj\tk\tl\tbranch\tsign\tm")?;
                    for d in &decs {
                        out.line(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{:?}\t{}\t{}",
                            d.n, d.x, d.j, d.k, d.l, d.branch, d.sign, d.m
                        ))?;
                    }
                }
                Format::Human => {
                    for d in &decs {
                        out.line(&d.to_string())?;
                        out.line("")?;
                    }
                }
            }
            EXIT_OK
        }
        Command::Audit {
            base,
            n,
            x,
            sigma,
            variant,
        } => {
            let b = base.base();
            let cert = certifier::certify(&b, &sigma, variant, prec)?;
            let xs = roots_or(&b, n, x)?;
            let reports = xs
                .iter()
                .map(|x| decomposer::decompose(&b, x, n).and_then(|d| decomposer::audit(&cert, &d)))
                .collect::<Result<Vec<_>, _>>()?;
            match out.format {
                Format::Json => out.json(&json!({
                    "schema": "rnlab.audits/1",
                    "certificate_status": cert.status,
                    "audits": reports,
                }))?,
                Format::Tsv => {
                    out.line("n\tx\tg\tnonzero\tsize_bound\tcofactor_bound")?;
                    for r in &reports {
                        for c in &r.chains {
                            out.line(&format!(
                                "{}\t{}\t{}\t{}\t{}\t{}",
                                r.decomposition.n, r.decomposition.x, c.g, c.nonzero, c.size_bound.holds, c.cofactor_bound.holds
                            ))?;
                        }
                    }
                }
                Format::Human => {
                    for r in &reports {
                        out.line(&r.to_string())?;
                    }
                }
            }
            EXIT_OK
        }
        Command::ScanHuge { d, p, n0_max } => cmd_scan(&mut out, d, p, n0_max, prec)?,
    };
    out.finish()?;
    Ok(code)
}

fn cmd_certify(out: &mut Output, base: &BaseSolution, sigma: &BigRational, variant: Variant, prec: Precision) -> Result<i32, CliError> {
    let cert = certifier::certify(base, sigma, variant, prec)?;
    match out.format {
        Format::Json => out.json(&cert)?,
        Format::Tsv => {
            out.line("status\tthreshold_lo\tthreshold_hi\tbeta_abs_lo\tbeta_abs_hi\tM")?;
            let status = match cert.status {
                CertStatus::Certified => "Certified".to_string(),
                CertStatus::Failed(r) => format!("{r:?}"),
            };
            out.line(&format!(
                "{status}\t{}\t{}\t{}\t{}\t{}",
                cert.threshold.lo, cert.threshold.hi, cert.beta_abs.lo, cert.beta_abs.hi, cert.m
            ))?;
        }
        Format::Human => out.line(&cert.to_string())?,
    }
    Ok(match cert.status {
        CertStatus::Failed(FailReason::NotExactPower | FailReason::SharedFactor | FailReason::SquareD | FailReason::SmallD) => {
            EXIT_INVALID
        }
        CertStatus::Failed(FailReason::Undecidable) => EXIT_UNDECIDABLE,
        _ => EXIT_OK,
    })
}

fn load_checkpoint(path: &Path) -> Result<Option<Checkpoint>, CliError> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(Checkpoint::from_json(&s)?)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn save_checkpoint(path: &Path, blob: &Checkpoint) -> Result<(), CliError> {
    // write-then-rename so an interrupted run never leaves a torn blob
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, blob.to_json())?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cmd_survey(out: &mut Output, params: SurveyParams, resume: Option<&Path>, every: u32, timing: bool) -> Result<i32, CliError> {
    let start = Instant::now();
    let blob = match resume {
        Some(p) => load_checkpoint(p)?,
        None => None,
    };
    let mut s = match &blob {
        Some(b) => survey::Survey::restore(params, b)?,
        None => survey::Survey::new(params)?,
    };
    let tsv = out.format == Format::Tsv;
    if tsv {
        out.line(SurveyRecord::tsv_header())?;
    }
    let mut write_err: Option<io::Error> = None;
    loop {
        let more = {
            let sink = &mut out.sink;
            s.advance(every.max(1), &mut |r| {
                if tsv && write_err.is_none() {
                    if let Err(e) = writeln!(sink, "{}", r.tsv()) {
                        write_err = Some(e);
                    }
                }
            })?
        };
        if let Some(e) = write_err.take() {
            return Err(e.into());
        }
        if let Some(p) = resume {
            save_checkpoint(p, &s.checkpoint())?;
        }
        if !more {
            break;
        }
    }
    let mut report = s.report();
    if timing {
        report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    }
    match out.format {
        Format::Json => out.json(&report)?,
        Format::Tsv => {}
        Format::Human => {
            out.line(&format!(
                "D={} p={} sigma={} n_max={}: {} records checked from n={}",
                report.d,
                report.p,
                ratio_string(&report.sigma),
                report.n_max,
                report.records_checked,
                report.n_start
            ))?;
            if let Some(n) = &report.note {
                out.line(n)?;
            }
            out.line(&format!("exceptions ({}):", report.exceptions.len()))?;
            for e in &report.exceptions {
                out.line(&format!("  n={} x={} m={}", e.n, e.x, e.m))?;
            }
            out.line(&format!("exception x values: {{{}}}", report.exception_x.join(", ")))?;
            if let Some(m) = &report.min_passing_margin {
                let x = m.x.to_string();
                let shown = if x.len() > 24 { format!("{}... ({} digits)", &x[..12], x.len()) } else { x };
                out.line(&format!(
                    "smallest passing ln(m / x^sigma) = {:.6} at n={} x={shown}",
                    m.log_margin, m.n
                ))?;
            }
            if let Some(t) = report.wall_time_secs {
                out.line(&format!("wall time {t:.2}s"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_hensel(out: &mut Output, d: u64, p: u64, n: u32) -> Result<i32, CliError> {
    let st = hensel::roots_mod_pn(d, p, n)?;
    if !st.verify() {
        return Err(CliError::Internal("lifted roots fail their congruence".into()));
    }
    let pairs = st.roots_with_cofactors();
    match out.format {
        Format::Json => out.json(&json!({
            "schema": "rnlab.hensel/1",
            "D": d,
            "p": p,
            "n": n,
            "roots": pairs.iter().map(|(x, _)| x.to_string()).collect::<Vec<_>>(),
            "cofactors": pairs.iter().map(|(_, m)| m.to_string()).collect::<Vec<_>>(),
        }))?,
        Format::Tsv => {
            out.line("x\tm")?;
            for (x, m) in &pairs {
                out.line(&format!("{x}\t{m}"))?;
            }
        }
        Format::Human => {
            for (x, m) in &pairs {
                out.line(&format!("x = {x}  (x^2 + {d} = {p}^{n} * {m})"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_pade(out: &mut Output, action: PadeAction, prec: Precision) -> Result<i32, CliError> {
    match action {
        PadeAction::Verify { j_max, abc_max } => {
            if j_max == 0 {
                return Err(CliError::Invalid("--j-max must be at least 1".into()));
            }
            let rep = pade::sweep::verify_sweep(j_max, abc_max);
            match out.format {
                Format::Json => out.json(&rep)?,
                _ => {
                    out.line(&format!(
                        "diagonal systems: {}  general systems: {}  cross pairs: {}",
                        rep.diagonal_checked, rep.general_checked, rep.cross_checked
                    ))?;
                    for f in &rep.failures {
                        out.line(&format!("FAIL {f}"))?;
                    }
                    out.line(if rep.all_pass { "all identities hold" } else { "identity failures" })?;
                }
            }
            Ok(if rep.all_pass { EXIT_OK } else { EXIT_INTERNAL })
        }
        PadeAction::Build { j, g, normalized } => {
            let sys = if normalized {
                pade::build_normalized(j, g)?
            } else {
                let s = pade::build_diagonal(j, g)?;
                s.verify_identity()?;
                s
            };
            match out.format {
                Format::Json => out.json(&json!({
                    "schema": "rnlab.pade-system/1",
                    "j": j,
                    "g": g,
                    "k": sys.k(),
                    "r": sys.r(),
                    "content": sys.content.to_string(),
                    "P": sys.p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "Q": sys.q.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "E": sys.e.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                }))?,
                _ => {
                    out.line(&format!("k = {}, r = {}, content divided out = {}", sys.k(), sys.r(), sys.content))?;
                    out.line(&format!("P = {}", sys.p))?;
                    out.line(&format!("Q = {}", sys.q))?;
                    out.line(&format!("E = {}", sys.e))?;
                }
            }
            Ok(EXIT_OK)
        }
        PadeAction::Bounds {
            j_from,
            j_to,
            d,
            p,
            x0,
            n0,
        } => {
            if j_from == 0 || j_to < j_from {
                return Err(CliError::Invalid("need 1 <= j-from <= j-to".into()));
            }
            let base = match (d, p, x0, n0) {
                (Some(d), Some(p), Some(x0), Some(n0)) => Some(BaseSolution::new(d, p, x0, n0)),
                (None, None, None, None) => None,
                _ => return Err(CliError::Invalid("give all of --D --p --x0 --n0 or none".into())),
            };
            let mut rows = Vec::new();
            for j in j_from..=j_to {
                for g in [0u8, 1] {
                    let content = pade::check_content_bound(j, g)?;
                    let e = pade::check_e_bound(j, g)?;
                    let q = match &base {
                        Some(b) => {
                            if !b.is_exact_power() {
                                return Err(CliError::Invalid("base solution is not an exact power".into()));
                            }
                            Some(pade::check_q_bound(j, g, &b.beta().map_err(|e| CliError::Invalid(e.to_string()))?, &b.lambda().map_err(|e| CliError::Invalid(e.to_string()))?)?)
                        }
                        None => None,
                    };
                    rows.push(json!({ "j": j, "g": g, "content": content, "e": e, "q": q }));
                }
            }
            let factorial = (j_from..=j_to)
                .map(|j| pade::diagonal_factorial_bound(j, prec))
                .collect::<Result<Vec<_>, _>>()?;
            match out.format {
                Format::Json => out.json(&json!({
                    "schema": "rnlab.pade-bounds/1",
                    "rows": rows,
                    "factorial": factorial,
                }))?,
                _ => {
                    out.line("j\tg\tcontent\tcontent_bound\tdivides\te_raw\te_normalized\tq_bound")?;
                    for r in &rows {
                        out.line(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            r["j"],
                            r["g"],
                            r["content"]["content"].as_str().unwrap_or(""),
                            r["content"]["status"].as_str().unwrap_or(""),
                            r["content"]["divides"],
                            r["e"]["raw_status"].as_str().unwrap_or(""),
                            r["e"]["normalized_status"].as_str().unwrap_or(""),
                            r["q"]["status"].as_str().unwrap_or("-"),
                        ))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        PadeAction::Kernel { b } => {
            let bq = parse_decimal(&b).ok_or_else(|| CliError::Invalid(format!("{b:?} is not a decimal or fraction")))?;
            let rep = pade::kernel_extrema(&bq)?;
            match out.format {
                Format::Json => out.json(&rep)?,
                _ => {
                    out.line(&format!("b = {}", rep.b))?;
                    out.line(&format!("max f in [{}, {}]  ({:?})", rep.max.lo, rep.max.hi, rep.max_status))?;
                    out.line(&format!("argmax in [{}, {}]", rep.argmax.lo, rep.argmax.hi))?;
                    out.line(&format!(
                        "integral = {} = {}  ({:?})",
                        rep.integral_exact, rep.integral_decimal, rep.integral_status
                    ))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        return parse_ratio(s);
    }
    let valid = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-')
        && s.matches('.').count() <= 1;
    valid.then(|| decimal(s))
}

fn roots_or(base: &BaseSolution, n: u32, x: Option<BigUint>) -> Result<Vec<BigUint>, CliError> {
    match x {
        Some(x) => Ok(vec![x]),
        None => Ok(hensel::roots_mod_pn(base.d, base.p, n)?.roots()),
    }
}

#[derive(Debug, Serialize)]
struct ScanHit {
    #[serde(serialize_with = "crate::report::ser_decimal")]
    x0: BigUint,
    n0: u32,
    beta_abs: f64,
    max_sigma_5j: Option<String>,
}

fn cmd_scan(out: &mut Output, d: u64, p: u64, n0_max: u32, prec: Precision) -> Result<i32, CliError> {
    if !hensel::is_prime(p) {
        return Err(CliError::Invalid(format!("p = {p} is not prime")));
    }
    if d == 0 {
        return Err(CliError::Invalid("D must be positive".into()));
    }
    let mut hits = Vec::new();
    let mut pn = BigUint::from(1u32);
    for n0 in 1..=n0_max {
        pn *= p;
        if pn <= BigUint::from(d) {
            continue;
        }
        let t = &pn - d;
        let s = t.sqrt();
        if &s * &s != t {
            continue;
        }
        let base = BaseSolution::new(d, p, s.clone(), n0);
        let beta_abs = certifier::beta_abs(&base).ln_f64().exp();
        let max_sigma_5j = match certifier::max_sigma(&base, Variant::FiveJ, prec) {
            Ok(iv) if !iv.empty => Some(iv.lo_decimal),
            _ => None,
        };
        hits.push(ScanHit {
            x0: s,
            n0,
            beta_abs,
            max_sigma_5j,
        });
    }
    match out.format {
        Format::Json => out.json(&json!({
            "schema": "rnlab.scan/1",
            "D": d,
            "p": p,
            "n0_max": n0_max,
            "solutions": hits,
        }))?,
        _ => {
            out.line("x0\tn0\t|beta|\tmax_sigma_5j")?;
            for h in &hits {
                out.line(&format!(
                    "{}\t{}\t{:.4}\t{}",
                    h.x0,
                    h.n0,
                    h.beta_abs,
                    h.max_sigma_5j.as_deref().unwrap_or("-")
                ))?;
            }
        }
    }
    Ok(EXIT_OK)
}
