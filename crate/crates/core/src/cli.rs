//! The `eelkit` command line: construct curves, check them, bound their
//! length, certify the construction constants and export derived data.
//!
//! Exit codes: 0 when the run succeeded and the checked property holds, 1
//! when a property is violated, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde_json::json;

use crate::checks::{Checker, DirectionSource, Property};
use crate::config::{parse_lambda, OutputFormat, RunConfig};
use crate::constructions::{
    certify_lemma_with, cylinder_eel, derive_mu, eel_plan, example_curve_3d, gradient_descent_trajectory, helix,
    infinite_eel_with, spd_lambda_max, unit_length_crossings, CrossingPolicy, EelParams, InfiniteEelOptions, LemmaName,
    DEFAULT_SAMPLE_BUDGET,
};
use crate::curve::{
    diameter, read_csv, read_tangents_csv, reverse, total_length, write_csv, write_tangents_csv, SampledCurve,
};
use crate::error::{domain, EelError, Result};
use crate::geometry::{validate_coverage, Point};
use crate::par::{configure_threads, Execution};
use crate::rectifiability::{length_bound, verify_length_bound_with, width_profile_with, RepulsionConstants};

#[derive(Debug, Parser)]
#[command(name = "eelkit", version, about = "Constructions and property checks for λ-curves and λ-eels")]
struct Cli {
    /// Worker threads for the checkers (EELKIT_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every workload on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Sampling step of the constructions.
    #[arg(long, global = true, default_value_t = 1e-2)]
    step: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Format of reports printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a curve and write `<name>.csv`, `<name>.tangents.csv` and `<name>.meta.json`.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check a property of a CSV polyline and print the report.
    Check(CheckArgs),
    /// Universal length bound, optionally compared with a curve.
    Bound(BoundArgs),
    /// Certify one of the construction inequalities on a grid.
    Certify(CertifyArgs),
    /// Export width profiles or construction constants.
    Export {
        #[command(subcommand)]
        what: ExportKind,
    },
}

fn mu_arg(s: &str) -> std::result::Result<f64, String> {
    if s == "auto" {
        return Ok(derive_mu());
    }
    s.parse::<f64>().map_err(|e| format!("mu must be a number or auto: {e}"))
}

fn lambda_arg(s: &str) -> std::result::Result<f64, String> {
    parse_lambda(s).map_err(|e| e.to_string())
}

fn grid_arg(s: &str) -> std::result::Result<usize, String> {
    let v: f64 = s.parse().map_err(|e| format!("grid: {e}"))?;
    if v >= 2.0 && v.fract() == 0.0 && v <= 1e9 {
        Ok(v as usize)
    } else {
        Err(format!("grid must be an integer >= 2, got {s}"))
    }
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    /// Helix (r cos t, r sin t, μ r t) over a number of turns.
    Helix {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value = "auto", value_parser = mu_arg)]
        mu: f64,
        #[arg(long, default_value_t = 2.0)]
        turns: f64,
        #[arg(long, default_value = "helix")]
        name: String,
    },
    /// Eel inside one bounded cylinder.
    CylinderEel {
        #[arg(long, default_value_t = 0.25)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Odd number of crossings; defaults to the smallest giving length > 1.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value = "auto", value_parser = mu_arg)]
        mu: f64,
        #[arg(long, default_value = "cylinder_eel")]
        name: String,
    },
    /// Stacked eel in the unit ball, truncated after some stages.
    InfiniteEel {
        #[arg(long, default_value_t = 3)]
        stages: u32,
        /// `unit-length` or `fixed:<odd n>`.
        #[arg(long, default_value = "unit-length")]
        crossings: CrossingPolicy,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
        budget: usize,
        #[arg(long, default_value = "auto", value_parser = mu_arg)]
        mu: f64,
        #[arg(long, default_value = "infinite_eel")]
        name: String,
    },
    /// The five-piece curve that is not a λ-curve for any λ < 1.
    Example3d {
        #[arg(long, default_value = "example3d")]
        name: String,
    },
    /// Gradient descent on x ↦ xᵀQx.
    GradientDescent {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, default_value = "1,0;0,10")]
        q: String,
        #[arg(long, default_value = "1,1")]
        x0: String,
        /// Defaults to 0.4/λ_max(Q).
        #[arg(long)]
        step_size: Option<f64>,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// Write the reversed trajectory.
        #[arg(long)]
        reverse: bool,
        #[arg(long, default_value = "gd_traj")]
        name: String,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// lambda-curve, lambda-cone, self-expanded, self-contracted,
    /// noncollinear, conical-split or lyapunov.
    property: Property,
    input: PathBuf,
    #[arg(long, default_value = "0", value_parser = lambda_arg, allow_hyphen_values = true)]
    lambda: f64,
    /// Anchor sample of the Lyapunov check.
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Tangent sidecar; `<input stem>.tangents.csv` is picked up when present.
    #[arg(long)]
    tangents: Option<PathBuf>,
    #[arg(long)]
    no_tangents: bool,
    /// auto, chord, incoming or window:<k>.
    #[arg(long, default_value = "auto")]
    direction: DirectionSource,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, value_parser = lambda_arg, allow_hyphen_values = true)]
    lambda: f64,
    /// Ambient dimension; defaults to the curve's.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    diam: Option<f64>,
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    lemma: LemmaName,
    #[arg(long, default_value = "auto", value_parser = mu_arg)]
    mu: f64,
    /// Points per axis, scientific notation accepted.
    #[arg(long, default_value = "1000", value_parser = grid_arg)]
    grid: usize,
}

#[derive(Debug, Subcommand)]
enum ExportKind {
    /// Width profile of a curve along the η-net for λ, as CSV.
    Widths {
        input: PathBuf,
        #[arg(long, value_parser = lambda_arg, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Construction constants and the per-stage plan as JSON.
    Params {
        #[arg(long, default_value = "auto", value_parser = mu_arg)]
        mu: f64,
        #[arg(long, default_value_t = 5)]
        stages: u32,
    },
}

struct Ctx {
    cfg: RunConfig,
    exec: Execution,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = std::env::var("EELKIT_THREADS").ok().and_then(|v| v.parse().ok()).or(cli.threads);
    if let Some(n) = threads.filter(|&n| n > 0) {
        configure_threads(n);
    }
    let ctx = Ctx {
        cfg: RunConfig {
            tol: cli.tol,
            step: cli.step,
            seed: cli.seed,
            output_dir: cli.output_dir.clone(),
            format: cli.format,
        },
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let outcome = ctx.cfg.validate().and_then(|_| dispatch(&ctx, cli.command));
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("eelkit: {e}");
            2
        }
    }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<bool> {
    match cmd {
        Command::Construct { kind } => construct(ctx, kind),
        Command::Check(a) => check(ctx, a),
        Command::Bound(a) => bound(ctx, a),
        Command::Certify(a) => certify(ctx, a),
        Command::Export { what } => export(ctx, what),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn emit(ctx: &Ctx, value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match ctx.cfg.format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(value)?)?,
        OutputFormat::Csv => {
            let obj = value.as_object().ok_or_else(|| domain("report is not an object"))?;
            let keys: Vec<&str> = obj.iter().filter(|(_, v)| !v.is_object()).map(|(k, _)| k.as_str()).collect();
            writeln!(out, "{}", keys.join(","))?;
            let vals: Vec<String> = keys
                .iter()
                .map(|k| match &obj[*k] {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Array(a) => a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                    v => v.to_string(),
                })
                .collect();
            writeln!(out, "{}", vals.join(","))?;
        }
    }
    Ok(())
}

fn construct(ctx: &Ctx, kind: ConstructKind) -> Result<bool> {
    let step = ctx.cfg.step;
    let (name, curve, extra) = match kind {
        ConstructKind::Helix { r, mu, turns, name } => {
            let c = helix(r, mu, 0.0, 2.0 * std::f64::consts::PI * turns, step)?;
            (name, c, json!({ "r": r, "mu": mu, "turns": turns }))
        }
        ConstructKind::CylinderEel { r, a, n, mu, name } => {
            let params = EelParams::from_mu(mu)?;
            let n = match n {
                Some(n) => n,
                None => unit_length_crossings(r, mu)?,
            };
            let c = cylinder_eel(r, a, n, &params, step)?;
            (name, c, json!({ "params": params, "r": r, "a": a, "n": n }))
        }
        ConstructKind::InfiniteEel { stages, crossings, budget, mu, name } => {
            let params = EelParams::from_mu(mu)?;
            let plan = eel_plan(stages, &params, step, crossings)?;
            let opts = InfiniteEelOptions { crossings, sample_budget: budget };
            let c = infinite_eel_with(stages, &params, step, &opts)?;
            (name, c, json!({ "params": params, "plan": plan }))
        }
        ConstructKind::Example3d { name } => (name, example_curve_3d(step)?, json!({})),
        ConstructKind::GradientDescent { q, x0, step_size, iters, reverse: rev, name } => {
            let q = parse_matrix(&q)?;
            let x0 = Point::new(parse_vector(&x0)?)?;
            let s = match step_size {
                Some(s) => s,
                None => 0.4 / spd_lambda_max(&q)?,
            };
            let c = gradient_descent_trajectory(&q, &x0, s, iters)?;
            let c = if rev { reverse(&c) } else { c };
            (name, c, json!({ "step_size": s, "iters": iters, "reversed": rev }))
        }
    };
    std::fs::create_dir_all(&ctx.cfg.output_dir)?;
    let base = ctx.cfg.output_dir.join(&name);
    let csv_path = base.with_extension("csv");
    write_csv(&curve, create(&csv_path)?)?;
    let tangents_path = ctx.cfg.output_dir.join(format!("{name}.tangents.csv"));
    if curve.has_tangents() {
        write_tangents_csv(&curve, create(&tangents_path)?)?;
    }
    let length = total_length(&curve);
    let norms = curve.points().map(crate::geometry::norm).fold(0.0, f64::max);
    let meta = json!({
        "name": name,
        "kind": curve.meta().kind,
        "samples": curve.len(),
        "dim": curve.dim(),
        "step": step,
        "length": length,
        "diameter_upper": 2.0 * norms,
        "max_norm": norms,
        "values": curve.meta().values,
        "junctions": curve.meta().junctions,
        "tangents": curve.has_tangents(),
        "details": extra,
    });
    let meta_path = ctx.cfg.output_dir.join(format!("{name}.meta.json"));
    let mut w = create(&meta_path)?;
    serde_json::to_writer_pretty(&mut w, &meta)?;
    w.flush()?;
    emit(
        ctx,
        &json!({
            "csv": csv_path.display().to_string(),
            "meta": meta_path.display().to_string(),
            "samples": curve.len(),
            "length": length,
            "max_norm": norms,
        }),
    )?;
    Ok(true)
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| domain(format!("bad number {x:?}: {e}")))).collect()
}

fn parse_matrix(s: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = s.split(';').map(parse_vector).collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(domain("Q must be square"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn load_curve(input: &Path, tangents: Option<&Path>, no_tangents: bool) -> Result<SampledCurve> {
    let c = read_csv(BufReader::new(File::open(input)?))?;
    if no_tangents {
        return Ok(c);
    }
    let sidecar = match tangents {
        Some(p) => Some(p.to_path_buf()),
        None => {
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let p = input.with_file_name(format!("{stem}.tangents.csv"));
            p.exists().then_some(p)
        }
    };
    match sidecar {
        Some(p) => read_tangents_csv(BufReader::new(File::open(p)?), c),
        None => Ok(c),
    }
}

fn check(ctx: &Ctx, a: CheckArgs) -> Result<bool> {
    let c = load_curve(&a.input, a.tangents.as_deref(), a.no_tangents)?;
    let checker = Checker { tol: ctx.cfg.tol, execution: ctx.exec, directions: a.direction };
    let report = match a.property {
        Property::Lyapunov => checker.lyapunov(&c, a.lambda, a.start)?,
        p => checker.check(p, &c, a.lambda)?,
    };
    let mut v = serde_json::to_value(&report)?;
    if !report.witness.is_empty() {
        let params: Vec<f64> = report.witness.iter().map(|&i| c.param(i)).collect();
        v["witness_params"] = json!(params);
    }
    emit(ctx, &v)?;
    Ok(report.passed)
}

/// Random directions used to re-check the covering property of a net.
const NET_PROBES: usize = 10_000;

fn bound(ctx: &Ctx, a: BoundArgs) -> Result<bool> {
    match (&a.input, a.diam) {
        (Some(path), _) => {
            let c = load_curve(path, None, true)?;
            let d = a.d.unwrap_or(c.dim());
            let checker = Checker { tol: ctx.cfg.tol, execution: ctx.exec, ..Checker::default() };
            let r = verify_length_bound_with(&c, a.lambda, d, &checker)?;
            let cover = validate_coverage(&RepulsionConstants::new(a.lambda, d)?.net()?, NET_PROBES, ctx.cfg.seed);
            let mut v = serde_json::to_value(&r)?;
            v["net_coverage"] = serde_json::to_value(cover)?;
            emit(ctx, &v)?;
            Ok(r.holds && cover.covered)
        }
        (None, Some(diam)) => {
            let d = a.d.ok_or_else(|| domain("--d is required with --diam"))?;
            let k = RepulsionConstants::new(a.lambda, d)?;
            let b = length_bound(a.lambda, d, diam)?;
            let net = k.net()?;
            let cover = validate_coverage(&net, NET_PROBES, ctx.cfg.seed);
            emit(
                ctx,
                &json!({
                    "lambda": a.lambda,
                    "d": d,
                    "eta": k.eta,
                    "net_size": net.len(),
                    "diameter": diam,
                    "bound": b,
                    "net_coverage": cover,
                }),
            )?;
            Ok(cover.covered)
        }
        (None, None) => Err(domain("give a curve file or --diam")),
    }
}

fn certify(ctx: &Ctx, a: CertifyArgs) -> Result<bool> {
    let params = EelParams::from_mu(a.mu).or_else(|_| {
        // μ outside the derivation range still gets certified against the
        // default N and M, which is how a bad μ is exhibited.
        Ok::<_, EelError>(EelParams { mu: a.mu, ..EelParams::derived() })
    })?;
    let rec = certify_lemma_with(a.lemma, &params, a.grid, ctx.exec)?;
    emit(ctx, &serde_json::to_value(&rec)?)?;
    Ok(rec.certified)
}

fn export(ctx: &Ctx, what: ExportKind) -> Result<bool> {
    match what {
        ExportKind::Widths { input, lambda } => {
            let c = load_curve(&input, None, true)?;
            let k = RepulsionConstants::new(lambda, c.dim())?;
            let w = width_profile_with(&c, &k.net()?, ctx.exec)?;
            std::fs::create_dir_all(&ctx.cfg.output_dir)?;
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
            let path = ctx.cfg.output_dir.join(format!("{stem}.widths.csv"));
            w.write_csv(create(&path)?)?;
            let (margin, pair) = w.increment_margin(&c, k.eta, ctx.exec);
            emit(
                ctx,
                &json!({
                    "widths": path.display().to_string(),
                    "net_size": w.net.len(),
                    "eta": k.eta,
                    "final_total": w.total.last().copied().unwrap_or(0.0),
                    "cap": w.net.len() as f64 * diameter(&c),
                    "increment_margin": if margin.is_finite() { json!(margin) } else { json!(null) },
                    "increment_pair": [pair.0, pair.1],
                }),
            )?;
            Ok(true)
        }
        ExportKind::Params { mu, stages } => {
            let params = EelParams::from_mu(mu)?;
            params.validate()?;
            let plan = eel_plan(stages, &params, ctx.cfg.step, CrossingPolicy::UnitLength)?;
            let value = json!({ "params": params, "plan": plan });
            std::fs::create_dir_all(&ctx.cfg.output_dir)?;
            let path = ctx.cfg.output_dir.join("params.json");
            let mut w = create(&path)?;
            serde_json::to_writer_pretty(&mut w, &value)?;
            w.flush()?;
            emit(ctx, &json!({ "params": path.display().to_string(), "mu": params.mu, "N": params.n, "M": params.m }))?;
            Ok(true)
        }
    }
}
