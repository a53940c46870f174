//! Command dispatch for the `ksep` binary.
//!
//! Every invocation writes exactly one document to standard output: JSON for
//! `eval`, `threshold`, and `verify`, CSV for `scan`, plain lines for
//! `partitions`. Diagnostics go to standard error. Exit codes: 0 success,
//! 1 parameter or input error, 2 a verification run caught the criterion
//! firing on a separable state.
//!
//! Output is byte-identical across runs for identical inputs: summation
//! orders are fixed upstream, floats are printed at 17 significant digits,
//! and sampling is seeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksep::{
    bisection_threshold, density_json, detect, dicke_state, dicke_threshold,
    enumerate_partitions, format_f64, parse_basis_file, parse_state_file, soundness_scan,
    CriterionContext, CriterionKind, CriterionValue, DensityMatrix, Error, NoiseFamily,
    ProductBasis, Result, StateFile, ThresholdResult, DEFAULT_BISECTION_TOL,
};

#[derive(Parser)]
#[command(
    name = "ksep",
    version,
    about = "Decide k-nonseparability of N-qubit states with combinatorial criteria"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a criterion on a state and report the verdict
    Eval(EvalArgs),
    /// Locate the white-noise level where a family becomes detectable
    Threshold(ThresholdArgs),
    /// Tabulate criterion values over a uniform noise grid as CSV
    Scan(ScanArgs),
    /// Stress a criterion against random separable states
    Verify(VerifyArgs),
    /// List all splits of the qubit register into k blocks
    Partitions(PartitionsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionName {
    /// Two-excitation pattern pairs
    T1,
    /// Weight-m pattern pairs (needs --m)
    T2,
    /// Explicit basis with its distance-2 graph (needs --basis)
    T3,
}

impl CriterionName {
    fn as_str(self) -> &'static str {
        match self {
            CriterionName::T1 => "t1",
            CriterionName::T2 => "t2",
            CriterionName::T3 => "t3",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    /// Symmetric m-excitation state mixed with white noise
    Dicke,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodName {
    /// Exact rational root (symmetric families with matching criterion only)
    Closed,
    /// Grid-guarded bisection on the criterion verdict
    Bisect,
}

/// Flags picking the criterion; `--m` doubles as the family excitation count
/// when `--family dicke` is in play, so the weight-m criterion on such input
/// always matches the family.
#[derive(Args)]
struct CriterionFlags {
    /// Criterion to evaluate
    #[arg(long, value_enum)]
    criterion: CriterionName,
    /// Number of blocks k the state is tested against
    #[arg(long)]
    k: u32,
    /// Excitation count m (t2; also the dicke family parameter)
    #[arg(long)]
    m: Option<u32>,
    /// Basis file for t3: {"n": N, "states": ["0011", ...]}
    #[arg(long, value_name = "FILE")]
    basis: Option<PathBuf>,
}

/// Flags naming the input state or family.
#[derive(Args)]
struct InputFlags {
    /// State or family file in the qstate JSON format
    #[arg(long, value_name = "FILE")]
    state: Option<PathBuf>,
    /// Built-in family (with --n and --m)
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Register width for --family
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputFlags,
    /// Noise parameter realizing a family input
    #[arg(long)]
    a: Option<f64>,
    #[command(flatten)]
    criterion: CriterionFlags,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    criterion: CriterionFlags,
    /// How to locate the root
    #[arg(long, value_enum)]
    method: MethodName,
    /// Bisection interval tolerance
    #[arg(long, default_value_t = DEFAULT_BISECTION_TOL)]
    tol: f64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    criterion: CriterionFlags,
    /// Number of uniform grid points on [0, 1]
    #[arg(long, default_value_t = 11)]
    points: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Register width
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    criterion: CriterionFlags,
    /// Random separable pure states to sample (plus trials/10 mixtures)
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed for reproducible sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PartitionsArgs {
    /// Register width
    #[arg(long)]
    n: u32,
    /// Number of blocks
    #[arg(long)]
    k: u32,
}

/// Parses `argv` and runs one command, writing the result document to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.cmd {
        Cmd::Eval(args) => cmd_eval(args, out),
        Cmd::Threshold(args) => cmd_threshold(args, out, err),
        Cmd::Scan(args) => cmd_scan(args, out),
        Cmd::Verify(args) => cmd_verify(args, out, err),
        Cmd::Partitions(args) => cmd_partitions(args, out),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))
}

/// What the input flags resolved to.
enum Input {
    Fixed(DensityMatrix),
    Family(NoiseFamily),
}

fn load_input(flags: &InputFlags, m: Option<u32>) -> Result<Input> {
    match (&flags.state, flags.family) {
        (Some(path), None) => {
            if flags.n.is_some() {
                return Err(Error::Parameter(
                    "--n belongs to --family input, not --state".into(),
                ));
            }
            Ok(match parse_state_file(&read_file(path)?)? {
                StateFile::Density(rho) => Input::Fixed(rho),
                StateFile::Family(family) => Input::Family(family),
            })
        }
        (None, Some(FamilyName::Dicke)) => {
            let n = flags
                .n
                .ok_or_else(|| Error::Parameter("--family dicke needs --n".into()))?;
            let m = m.ok_or_else(|| Error::Parameter("--family dicke needs --m".into()))?;
            Ok(Input::Family(NoiseFamily::new(dicke_state(n, m)?)))
        }
        (Some(_), Some(_)) => {
            Err(Error::Parameter("give either --state or --family, not both".into()))
        }
        (None, None) => {
            Err(Error::Parameter("no input: give --state FILE or --family dicke".into()))
        }
    }
}

fn build_kind(flags: &CriterionFlags) -> Result<CriterionKind> {
    match flags.criterion {
        CriterionName::T1 => Ok(CriterionKind::TwoExcitation),
        CriterionName::T2 => {
            let m = flags
                .m
                .ok_or_else(|| Error::Parameter("criterion t2 needs --m".into()))?;
            Ok(CriterionKind::MExcitation { m })
        }
        CriterionName::T3 => {
            let path = flags
                .basis
                .as_ref()
                .ok_or_else(|| Error::Parameter("criterion t3 needs --basis FILE".into()))?;
            let states = parse_basis_file(&read_file(path)?)?;
            Ok(CriterionKind::ProductBasis(ProductBasis::new(states)?))
        }
    }
}

fn json_field_f64(doc: &mut String, key: &str, x: f64) {
    doc.push_str(&format!("\"{key}\": {}", format_f64(x)));
}

fn value_json(
    flags: &CriterionFlags,
    a: Option<f64>,
    ctx: &CriterionContext,
    cv: &CriterionValue,
) -> String {
    let mut doc = String::from("{\"schema\": 1, ");
    doc.push_str(&format!(
        "\"criterion\": \"{}\", \"n\": {}, \"k\": {}, ",
        flags.criterion.as_str(),
        ctx.n_qubits(),
        ctx.k()
    ));
    if let CriterionName::T2 = flags.criterion {
        doc.push_str(&format!("\"m\": {}, ", flags.m.expect("validated")));
    }
    doc.push_str(&format!("\"nk\": {}, ", ctx.nk()));
    if let Some(a) = a {
        json_field_f64(&mut doc, "a", a);
        doc.push_str(", ");
    }
    json_field_f64(&mut doc, "off_diagonal_part", cv.off_diagonal_part);
    doc.push_str(", ");
    json_field_f64(&mut doc, "diagonal_part", cv.diagonal_part);
    doc.push_str(", ");
    json_field_f64(&mut doc, "value", cv.value);
    doc.push_str(&format!(", \"verdict\": \"{}\"}}", cv.verdict));
    doc
}

fn cmd_eval(args: EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let input = load_input(&args.input, args.criterion.m)?;
    let (rho, a) = match input {
        Input::Fixed(rho) => {
            if args.a.is_some() {
                return Err(Error::Parameter(
                    "--a applies to family input; this file fixes the state".into(),
                ));
            }
            (rho, None)
        }
        Input::Family(family) => {
            let a = args.a.ok_or_else(|| {
                Error::Parameter("family input needs --a to realize a state".into())
            })?;
            (family.realize(a)?, Some(a))
        }
    };
    let ctx = CriterionContext::new(rho.n_qubits(), args.criterion.k, build_kind(&args.criterion)?)?;
    let cv = detect(&rho, &ctx)?;
    let _ = writeln!(out, "{}", value_json(&args.criterion, a, &ctx, &cv));
    Ok(0)
}

fn family_input(flags: &InputFlags, m: Option<u32>) -> Result<NoiseFamily> {
    match load_input(flags, m)? {
        Input::Family(family) => Ok(family),
        Input::Fixed(_) => Err(Error::Parameter(
            "thresholds and scans trace a noise family; this file fixes one state".into(),
        )),
    }
}

fn cmd_threshold(args: ThresholdArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match args.method {
        MethodName::Closed => cmd_threshold_closed(args, out, err),
        MethodName::Bisect => cmd_threshold_bisect(args, out, err),
    }
}

fn cmd_threshold_closed(args: ThresholdArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if args.input.family.is_none() {
        return Err(Error::Parameter(
            "--method closed applies to --family dicke input only".into(),
        ));
    }
    let n = args
        .input
        .n
        .ok_or_else(|| Error::Parameter("--family dicke needs --n".into()))?;
    let m = args
        .criterion
        .m
        .ok_or_else(|| Error::Parameter("--family dicke needs --m".into()))?;
    match args.criterion.criterion {
        // The pair criterion is the m = 2 pattern criterion; its closed form
        // exists on the matching family.
        CriterionName::T1 if m != 2 => {
            return Err(Error::Parameter(format!(
                "criterion t1 has a closed-form threshold on the m = 2 family, not m = {m}"
            )));
        }
        CriterionName::T1 | CriterionName::T2 => {}
        CriterionName::T3 => {
            return Err(Error::Parameter(
                "no closed form for t3; use --method bisect".into(),
            ));
        }
    }
    let head = format!(
        "{{\"schema\": 1, \"method\": \"closed_form\", \"family\": \"dicke\", \
         \"n\": {n}, \"m\": {m}, \"k\": {}, \"criterion\": \"{}\"",
        args.criterion.k,
        args.criterion.criterion.as_str()
    );
    match dicke_threshold(n, m, args.criterion.k) {
        Ok(found) => {
            let exact = found.exact.expect("closed form is exact");
            let mut doc = head;
            doc.push_str(&format!(
                ", \"a_star\": \"{}/{}\", ",
                exact.numer(),
                exact.denom()
            ));
            json_field_f64(&mut doc, "a_star_float", found.a_star.expect("root exists"));
            doc.push('}');
            let _ = writeln!(out, "{doc}");
            Ok(0)
        }
        Err(Error::Undetectable(why)) => {
            let _ = writeln!(err, "note: {why}");
            let _ = writeln!(
                out,
                "{head}, \"a_star\": null, \"note\": \"criterion cannot detect in this regime\"}}"
            );
            Ok(0)
        }
        Err(e) => Err(e),
    }
}

fn cmd_threshold_bisect(args: ThresholdArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let family = family_input(&args.input, args.criterion.m)?;
    let ctx = CriterionContext::new(
        family.n_qubits(),
        args.criterion.k,
        build_kind(&args.criterion)?,
    )?;
    let found: ThresholdResult = bisection_threshold(&family, &ctx, args.tol)?;
    let mut doc = format!(
        "{{\"schema\": 1, \"method\": \"bisection\", \"criterion\": \"{}\", \
         \"n\": {}, \"k\": {}, ",
        args.criterion.criterion.as_str(),
        ctx.n_qubits(),
        ctx.k()
    );
    json_field_f64(&mut doc, "tol", args.tol);
    match (found.a_star, found.residual) {
        (Some(a_star), Some(residual)) => {
            doc.push_str(", ");
            json_field_f64(&mut doc, "a_star", a_star);
            doc.push_str(", ");
            json_field_f64(&mut doc, "residual", residual);
            doc.push('}');
        }
        _ => {
            let _ = writeln!(err, "note: the criterion value never turns positive on [0, 1]");
            doc.push_str(", \"a_star\": null, \"note\": \"no crossing in [0, 1]\"}");
        }
    }
    let _ = writeln!(out, "{doc}");
    Ok(0)
}

fn cmd_scan(args: ScanArgs, out: &mut dyn Write) -> Result<i32> {
    if args.points < 2 {
        return Err(Error::Parameter(format!(
            "a scan needs at least 2 grid points, got {}",
            args.points
        )));
    }
    let family = family_input(&args.input, args.criterion.m)?;
    let ctx = CriterionContext::new(
        family.n_qubits(),
        args.criterion.k,
        build_kind(&args.criterion)?,
    )?;
    let grid: Vec<f64> = (0..args.points)
        .map(|i| i as f64 / (args.points - 1) as f64)
        .collect();
    let rows = ksep::scan(&family, &ctx, &grid)?;
    let _ = writeln!(out, "a,value,nk,verdict");
    for (a, cv) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_f64(a),
            format_f64(cv.value),
            ctx.nk(),
            cv.verdict
        );
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ctx = CriterionContext::new(args.n, args.criterion.k, build_kind(&args.criterion)?)?;
    let report = soundness_scan(&ctx, args.trials, args.seed)?;
    let mut doc = format!(
        "{{\"schema\": 1, \"criterion\": \"{}\", \"n\": {}, \"k\": {}, \
         \"pure_trials\": {}, \"mixed_trials\": {}, \"seed\": {}, ",
        args.criterion.criterion.as_str(),
        report.n_qubits,
        report.k,
        report.pure_trials,
        report.mixed_trials,
        args.seed
    );
    json_field_f64(&mut doc, "max_value", report.max_value);
    let code = match &report.violation {
        None => {
            doc.push_str(", \"violation\": null}");
            0
        }
        Some(v) => {
            let _ = writeln!(
                err,
                "violation: {} trial {} reached value {}",
                v.kind,
                v.trial,
                format_f64(v.value)
            );
            doc.push_str(&format!(
                ", \"violation\": {{\"kind\": \"{}\", \"trial\": {}, \"criterion\": \"{}\", \
                 \"k\": {}, ",
                v.kind,
                v.trial,
                args.criterion.criterion.as_str(),
                report.k
            ));
            json_field_f64(&mut doc, "value", v.value);
            doc.push_str(&format!(", \"state\": {}}}}}", density_json(&v.state)?));
            2
        }
    };
    let _ = writeln!(out, "{doc}");
    Ok(code)
}

fn cmd_partitions(args: PartitionsArgs, out: &mut dyn Write) -> Result<i32> {
    for p in enumerate_partitions(args.n, args.k)? {
        let _ = writeln!(out, "{p}");
    }
    Ok(0)
}
