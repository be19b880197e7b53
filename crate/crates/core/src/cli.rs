//! Command-line front end. Every output embeds the run configuration and the
//! crate version; all values are exact.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::characters::character_table;
use crate::dt_vertex::{
    enumerate_colored_3d, expand_closed, leg_ratio_check, verify_correspondence, CorrespondenceWindow, MAX_BOXES,
};
use crate::error::{usage, Error, Result};
use crate::exactnum::format_rational;
use crate::gw_vertex::{abelian_check, mv_a1_check, quantum_dim_check, r_bullet_tau, AbelianData};
use crate::hurwitz::{burnside_check, burnside_extract, hurwitz_oracle, phi, phi_compose_check};
use crate::localgw::{
    cap_block, cap_level0, glue, gluing_check, identity_block, read_block, tube_block, write_table, LocalBlock,
    TableFormat,
};
use crate::partitions::{partitions_of, Partition};
use crate::report::Report;

pub const MAX_CHARACTER_DEGREE: u32 = 8;
pub const MAX_ORACLE_DEGREE: u32 = 4;
pub const MAX_BRANCH_POINTS: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "orbivertex", version, about = "Exact one-leg orbifold vertex computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Character table of S_d (rows nu, columns mu).
    Char(CharArgs),
    /// Disconnected double Hurwitz numbers.
    Hurwitz(HurwitzArgs),
    /// Framed GW vertex series.
    Gw(GwArgs),
    /// Reduced DT vertex closed form, optionally against the box enumerator.
    Dt(DtArgs),
    /// Relative local invariants: the genus-zero cap or a glued block.
    LocalGw(LocalGwArgs),
    /// Runs a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CharArgs {
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct HurwitzArgs {
    #[arg(long)]
    pub nu: Partition,
    #[arg(long)]
    pub mu: Partition,
    /// Euler characteristics, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "2")]
    pub chi: Vec<i64>,
    /// Also run the factorization count.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct GwArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long)]
    pub mu: Partition,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tau: i64,
    #[arg(long, default_value_t = 6)]
    pub lambda_order: i64,
    #[arg(long, default_value_t = 2)]
    pub x_order: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct DtArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long)]
    pub nu: Partition,
    /// Total renormalized volume through which the closed form is expanded.
    #[arg(long, default_value_t = 6)]
    pub q_order: i64,
    /// Box budget for the enumerator.
    #[arg(long)]
    pub enumerate: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct LocalGwArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    /// Boundary partition of a single cap; all partitions of `--d` when absent.
    #[arg(long)]
    pub mu: Option<Partition>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 4)]
    pub lambda_order: i64,
    #[arg(long, default_value_t = 2)]
    pub x_order: i64,
    /// JSON file listing blocks and the gluing steps.
    #[arg(long)]
    pub glue: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Phi,
    Burnside,
    Correspondence,
    MvA1,
    QuantumDim,
    Gluing,
    Abelian,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        <Suite as ValueEnum>::from_str(s, true).map_err(|_| usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Number of simple branch points (burnside).
    #[arg(long, default_value_t = 4)]
    pub r: u32,
    /// Framings, comma separated (abelian).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1")]
    pub tau: Vec<i64>,
    #[arg(long, default_value_t = 5)]
    pub lambda_order: i64,
    #[arg(long, default_value_t = 4)]
    pub x_order: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        Error::Guard(_) | Error::Domain(_) | Error::Precision(_) | Error::Convention(_) => 3,
    }
}

/// Parses `args` (program name first), runs the command, and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 1;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "orbivertex: {e}");
            exit_code(&e)
        }
    }
}

fn envelope(command: &Command, result: Value) -> Result<Value> {
    Ok(json!({
        "artifact": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": serde_json::to_value(command)?,
        "result": result,
    }))
}

fn config_comment(command: &Command) -> Result<String> {
    Ok(format!("# {} {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"), serde_json::to_string(command)?))
}

fn write_out(output: &Output, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_json(command: &Command, output: &Output, stdout: &mut dyn Write, result: Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&envelope(command, result)?)?;
    text.push('\n');
    write_out(output, stdout, &text)
}

fn check_window(lambda_order: i64, x_order: i64) -> Result<()> {
    if lambda_order < 0 || x_order < 0 {
        return Err(usage("--lambda-order and --x-order must be nonnegative"));
    }
    Ok(())
}

fn check_degree(d: u32) -> Result<()> {
    if d > MAX_CHARACTER_DEGREE {
        return Err(Error::Guard(format!("character tables limited to d <= {MAX_CHARACTER_DEGREE}")));
    }
    Ok(())
}

fn check_a(a: u32) -> Result<()> {
    if a == 0 {
        return Err(usage("--a must be positive"));
    }
    Ok(())
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Char(args) => cmd_char(command, args, stdout).map(|_| true),
        Command::Hurwitz(args) => cmd_hurwitz(command, args, stdout).map(|_| true),
        Command::Gw(args) => cmd_gw(command, args, stdout).map(|_| true),
        Command::Dt(args) => cmd_dt(command, args, stdout),
        Command::LocalGw(args) => cmd_local_gw(command, args, stdout).map(|_| true),
        Command::Verify(args) => cmd_verify(command, args, stdout),
    }
}

fn cmd_char(command: &Command, args: &CharArgs, stdout: &mut dyn Write) -> Result<()> {
    check_degree(args.d)?;
    let table = character_table(args.d);
    let parts = table.partitions();
    match args.output.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let mut header = vec!["nu\\mu".to_string()];
            header.extend(parts.iter().map(Partition::label));
            w.write_record(&header)?;
            for nu in parts {
                let mut rec = vec![nu.label()];
                rec.extend(table.row(nu)?.iter().map(i64::to_string));
                w.write_record(&rec)?;
            }
            let body =
                String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv output is utf-8");
            write_out(&args.output, stdout, &(config_comment(command)? + &body))
        }
        Format::Json => {
            let rows: Vec<&[i64]> = parts.iter().map(|nu| table.row(nu)).collect::<Result<_>>()?;
            write_json(command, &args.output, stdout, json!({ "d": args.d, "partitions": parts, "table": rows }))
        }
    }
}

fn cmd_hurwitz(command: &Command, args: &HurwitzArgs, stdout: &mut dyn Write) -> Result<()> {
    require_json(&args.output)?;
    let (nu, mu) = (&args.nu, &args.mu);
    if nu.size() != mu.size() || nu.size() == 0 {
        return Err(usage("--nu and --mu must be partitions of the same positive d"));
    }
    check_degree(nu.size())?;
    if args.oracle && nu.size() > MAX_ORACLE_DEGREE {
        return Err(Error::Guard(format!("factorization oracle limited to d <= {MAX_ORACLE_DEGREE}")));
    }
    let mut rows = Vec::new();
    for &chi in &args.chi {
        let value = burnside_extract(chi, nu, mu)?;
        let r = nu.len() as i64 + mu.len() as i64 - chi;
        let mut row = json!({ "chi": chi, "r": r, "value_burnside": format_rational(&value) });
        if args.oracle {
            let o = hurwitz_oracle(nu, mu, u32::try_from(r).map_err(|_| usage("negative r"))?)?;
            row["value_oracle"] = json!(format_rational(&o));
        }
        rows.push(row);
    }
    write_json(command, &args.output, stdout, json!({ "nu": nu, "mu": mu, "rows": rows }))
}

fn require_json(output: &Output) -> Result<()> {
    if output.format != Format::Json {
        return Err(usage("this command only writes JSON"));
    }
    Ok(())
}

fn cmd_gw(command: &Command, args: &GwArgs, stdout: &mut dyn Write) -> Result<()> {
    require_json(&args.output)?;
    check_a(args.a)?;
    check_window(args.lambda_order, args.x_order)?;
    check_degree(args.mu.size())?;
    let f = r_bullet_tau(args.a, &args.mu, args.tau, args.x_order, args.lambda_order)?;
    let result = json!({ "a": f.a, "mu": f.mu, "tau": f.tau, "series": f.series.to_json() });
    write_json(command, &args.output, stdout, result)
}

fn cmd_dt(command: &Command, args: &DtArgs, stdout: &mut dyn Write) -> Result<bool> {
    require_json(&args.output)?;
    check_a(args.a)?;
    if args.q_order < 0 {
        return Err(usage("--q-order must be nonnegative"));
    }
    check_degree(args.nu.size())?;
    let closed = expand_closed(&args.nu, args.a, args.q_order)?;
    let mut result = json!({ "a": args.a, "nu": args.nu, "closed_form": closed.to_json() });
    let mut ok = true;
    if let Some(n) = args.enumerate {
        if n > MAX_BOXES {
            return Err(Error::Guard(format!("enumeration limited to {MAX_BOXES} boxes")));
        }
        let counts = enumerate_colored_3d(&args.nu, args.a, n)?;
        let table: Vec<Value> = counts.iter().map(|(k, c)| json!({ "colors": k, "count": c })).collect();
        let report = leg_ratio_check(&args.nu, args.a, n)?;
        ok = report.passed;
        result["enumeration"] = json!({ "budget": n, "counts": table, "report": report });
    }
    write_json(command, &args.output, stdout, result)?;
    Ok(ok)
}

/// Blocks and gluing steps for `local-gw --glue`.
#[derive(Debug, Deserialize)]
pub struct GluePlan {
    pub blocks: Vec<BlockSource>,
    pub steps: Vec<GlueStep>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlockSource {
    Cap { a: u32, d: u32 },
    Identity { d: u32 },
    Tube { d: u32, tau: i64 },
    File { path: PathBuf },
}

/// Glues block `left` at `left_slot` to block `right` at `right_slot` and
/// appends the result to the block list.
#[derive(Debug, Deserialize)]
pub struct GlueStep {
    pub left: usize,
    pub left_slot: usize,
    pub right: usize,
    pub right_slot: usize,
}

pub fn run_glue_plan(plan: &GluePlan, base: &Path, lambda_order: i64, x_order: i64) -> Result<LocalBlock> {
    let mut blocks = Vec::with_capacity(plan.blocks.len() + plan.steps.len());
    for b in &plan.blocks {
        blocks.push(match b {
            BlockSource::Cap { a, d } => {
                check_a(*a)?;
                cap_block(*a, *d, lambda_order, x_order)?
            }
            BlockSource::Identity { d } => identity_block(*d)?,
            BlockSource::Tube { d, tau } => tube_block(*d, *tau, lambda_order)?,
            BlockSource::File { path } => read_block(&base.join(path))?,
        });
    }
    for s in &plan.steps {
        let get = |i: usize| blocks.get(i).ok_or_else(|| usage(format!("gluing step refers to missing block {i}")));
        let g = glue(get(s.left)?, s.left_slot, get(s.right)?, s.right_slot)?;
        blocks.push(g);
    }
    blocks.pop().ok_or_else(|| usage("gluing plan has no blocks"))
}

fn cmd_local_gw(command: &Command, args: &LocalGwArgs, stdout: &mut dyn Write) -> Result<()> {
    check_a(args.a)?;
    check_window(args.lambda_order, args.x_order)?;
    let block = match (&args.glue, &args.mu, args.d) {
        (Some(path), _, _) => {
            let plan: GluePlan = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            run_glue_plan(&plan, path.parent().unwrap_or(Path::new(".")), args.lambda_order, args.x_order)?
        }
        (None, Some(mu), _) => {
            check_degree(mu.size()).and_then(|()| cap_level0(args.a, mu, args.lambda_order, args.x_order))?
        }
        (None, None, Some(d)) => {
            check_degree(d).and_then(|()| cap_block(args.a, d, args.lambda_order, args.x_order))?
        }
        (None, None, None) => return Err(usage("local-gw needs --mu, --d or --glue")),
    };
    match args.output.format {
        Format::Csv => {
            let mut body = config_comment(command)?.into_bytes();
            write_table(&block, TableFormat::Csv, &mut body)?;
            write_out(&args.output, stdout, &String::from_utf8(body).expect("csv output is utf-8"))
        }
        Format::Json => write_json(command, &args.output, stdout, serde_json::to_value(block.to_json())?),
    }
}

/// Runs one suite with the configured scale.
pub fn run_suite(args: &VerifyArgs) -> Result<(Report, Value)> {
    check_a(args.a)?;
    check_window(args.lambda_order, args.x_order)?;
    check_degree(args.d)?;
    let mut extra = Value::Null;
    let report = match args.suite {
        Suite::Phi => {
            let mut r = Report::new(format!("phi d={}", args.d));
            for nu in partitions_of(args.d) {
                for mu in partitions_of(args.d) {
                    let want = if nu == mu { crate::exactnum::rat(1, nu.z() as i64) } else { crate::exactnum::int(0) };
                    let got = phi(&nu, &mu)?.coefficient(0);
                    r.check(got == want, || format!("Phi_{{{nu},{mu}}}(0) = {got}, expected {want}"));
                }
            }
            r.absorb(phi_compose_check(args.d, args.lambda_order)?);
            r
        }
        Suite::Burnside => {
            if args.d > MAX_ORACLE_DEGREE {
                return Err(Error::Guard(format!("factorization oracle limited to d <= {MAX_ORACLE_DEGREE}")));
            }
            if args.r > MAX_BRANCH_POINTS {
                return Err(Error::Guard(format!("factorization oracle limited to r <= {MAX_BRANCH_POINTS}")));
            }
            let (r, rows) = burnside_check(args.d, args.r)?;
            extra = serde_json::to_value(rows)?;
            r
        }
        Suite::Correspondence => {
            let w = CorrespondenceWindow { lambda_max: args.lambda_order, x_deg: args.x_order };
            verify_correspondence(args.a, args.d, &w)?
        }
        Suite::MvA1 => {
            let mut r = Report::new(format!("mv-a1 d={}", args.d));
            for mu in partitions_of(args.d) {
                r.absorb(mv_a1_check(&mu, args.lambda_order)?);
            }
            r
        }
        Suite::QuantumDim => quantum_dim_check(args.d, args.lambda_order)?,
        Suite::Gluing => gluing_check(args.d, args.lambda_order)?,
        Suite::Abelian => {
            let mut r = Report::new(format!("abelian d<={}", args.d));
            let z4 = AbelianData { orders: vec![4], character: vec![2] };
            r.absorb(abelian_check(
                &z4,
                &[vec![vec![1]], vec![vec![3]], vec![vec![1], vec![3]]],
                &args.tau,
                args.d,
                args.lambda_order,
            )?);
            let v4 = AbelianData { orders: vec![2, 2], character: vec![1, 0] };
            r.absorb(abelian_check(
                &v4,
                &[vec![vec![1, 0]], vec![vec![1, 1]], vec![vec![1, 0], vec![1, 1]]],
                &args.tau,
                args.d,
                args.lambda_order,
            )?);
            r
        }
    };
    Ok((report, extra))
}

fn cmd_verify(command: &Command, args: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    require_json(&args.output)?;
    let (report, extra) = run_suite(args)?;
    let mut result = serde_json::to_value(&report)?;
    if !extra.is_null() {
        result["values"] = extra;
    }
    write_json(command, &args.output, stdout, result)?;
    Ok(report.passed)
}
