use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hbl::bfunc::{
    check_delta3_nonneg, check_monotone, check_polytope_conditions, check_rho_conditions, check_scaling,
    monomial_exponents, BFunction, CheckReport, Extremum, Sampler,
};
use hbl::flag_box::{certify_with, sweep, sweep_csv};
use hbl::io::{config_hash, write_atomic};
use hbl::lab::ascent::{ascend, AscentOptions};
use hbl::lab::el::{el_flatness, flatness_table};
use hbl::lab::gaussian::{best_gaussian, geometric_grid};
use hbl::lab::Grid;
use hbl::polytope::{
    build_constraints, enumerate_vertices, generate_subspace_list, GenerationOptions, HblInstance, SubspaceList,
};
use hbl::HblError;

#[derive(Parser)]
#[command(name = "hbl", version, about = "HBL polytopes, box certificates and extremizer numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices of the HBL polytope and the inequalities that cut it out.
    Polytope {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dual LP, basic algorithm and parallelepiped certificate.
    Certify {
        #[command(flatten)]
        inst: InstanceArgs,
        /// `m=LO..HI`: certify k·m for k in LO..=HI and write a CSV.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sampled checks of the size-function conditions for B.
    CheckB {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(short = 'b', long = "bfunc")]
        bfunc: PathBuf,
        /// Comma-separated subset of condition2,condition3,scaling,delta3,rho,monotone.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e3)]
        threshold: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gaussian baseline, ascent and Euler-Lagrange flatness for I_B.
    Extremize(ExtremizeArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance JSON: {"d": .., "maps": [[[..]]], "m": [..], "depth": ..}.
    #[arg(short = 'c', long = "config")]
    config: PathBuf,
}

#[derive(Args)]
struct ExtremizeArgs {
    #[arg(short = 'b', long = "bfunc")]
    bfunc: PathBuf,
    #[arg(long, default_value = "1,1,1")]
    masses: String,
    /// `L=half-width,N=cells`.
    #[arg(long, default_value = "L=16,N=2048")]
    grid: String,
    /// `lo,hi,count` for the geometric σ-grid.
    #[arg(long, default_value = "0.5,2,15")]
    sigmas: String,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    rearrange: bool,
    /// Residual window in units of σ.
    #[arg(long, default_value_t = 3.0)]
    window: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(short, long, default_value = "extremize-out")]
    output: PathBuf,
}

enum Failure {
    Error(HblError),
    Check(String),
}

impl From<HblError> for Failure {
    fn from(e: HblError) -> Self {
        Failure::Error(e)
    }
}

type Run = std::result::Result<(), Failure>;

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Check(_) => 4,
        Failure::Error(e) => match e {
            HblError::EmptyPolytope | HblError::Infeasible | HblError::Unbounded => 2,
            HblError::Certificate(_) => 3,
            HblError::Numeric(_) => 5,
            _ => 1,
        },
    }
}

fn read(path: &Path) -> Result<Vec<u8>, HblError> {
    fs::read(path).map_err(|e| HblError::Parse(format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path, bytes: &[u8]) -> Result<Value, HblError> {
    serde_json::from_slice(bytes).map_err(|e| HblError::Parse(format!("{}: {e}", path.display())))
}

struct Loaded {
    inst: HblInstance,
    list: SubspaceList,
    depth: usize,
    bytes: Vec<u8>,
}

fn load_instance(args: &InstanceArgs) -> Result<Loaded, HblError> {
    let bytes = read(&args.config)?;
    let v = parse_json(&args.config, &bytes)?;
    let inst = HblInstance::from_json(&v)?;
    let depth = match v.get("depth") {
        None => 1,
        Some(d) => d
            .as_u64()
            .ok_or_else(|| HblError::Parse("field \"depth\" must be a nonnegative integer".into()))?
            as usize,
    };
    let list = generate_subspace_list(&inst, depth, &GenerationOptions::for_dimension(inst.d()))?;
    Ok(Loaded { inst, list, depth, bytes })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), HblError> {
    match output {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn cmd_polytope(inst: &InstanceArgs, output: Option<&Path>) -> Run {
    let l = load_instance(inst)?;
    let cs = build_constraints(&l.inst, &l.list)?;
    let vertices = enumerate_vertices(&cs)?;
    let inequalities: Vec<Value> = cs
        .inequalities
        .iter()
        .map(|row| json!({"subspace": row.subspace, "coeffs": row.coeffs, "rhs": row.rhs}))
        .collect();
    let report = json!({
        "command": "polytope",
        "config_hash": config_hash([b"polytope".as_slice(), &l.bytes]),
        "seed": Value::Null,
        "instance": l.inst.to_json(),
        "depth": l.depth,
        "subspace_count": l.list.len(),
        "equality": {"coeffs": cs.equality, "rhs": cs.d},
        "inequalities": inequalities,
        "vertices": vertices,
    });
    emit(output, &pretty(&report))?;
    Ok(())
}

fn parse_sweep(spec: &str) -> Result<(u64, u64), HblError> {
    let bad = || HblError::Parse(format!("--sweep \"{spec}\": expected m=LO..HI"));
    let range = spec.strip_prefix("m=").ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_certify(inst: &InstanceArgs, sweep_spec: Option<&str>, output: Option<&Path>) -> Run {
    let l = load_instance(inst)?;
    let hash = config_hash([b"certify".as_slice(), &l.bytes, sweep_spec.unwrap_or("").as_bytes()]);
    match sweep_spec {
        Some(spec) => {
            let (lo, hi) = parse_sweep(spec)?;
            let base = l.inst.scales().to_vec();
            let ms: Vec<Vec<u64>> = (lo..=hi).map(|k| base.iter().map(|b| k * b).collect()).collect();
            let rep = sweep(&l.inst, &l.list, &ms)?;
            let text = format!(
                "# config_hash={hash} seed=none log_ratio_min={:.12} log_ratio_max={:.12} within_bound={}\n{}",
                rep.log_ratio_min,
                rep.log_ratio_max,
                rep.within_bound,
                sweep_csv(&rep)
            );
            emit(output, text.trim_end())?;
            if !rep.within_bound {
                return Err(HblError::Certificate(format!(
                    "log ratio range [{}, {}] wider than 2d",
                    rep.log_ratio_min, rep.log_ratio_max
                ))
                .into());
            }
        }
        None => {
            let cert = certify_with(&l.inst, &l.list)?;
            let mut report = cert.to_json();
            let obj = report.as_object_mut().expect("certificate report is an object");
            obj.insert("command".into(), json!("certify"));
            obj.insert("config_hash".into(), json!(hash));
            obj.insert("seed".into(), Value::Null);
            obj.insert("trace_length".into(), json!(cert.trace.len()));
            emit(output, &pretty(&report))?;
        }
    }
    Ok(())
}

const ALL_CHECKS: [&str; 6] = ["condition2", "condition3", "scaling", "delta3", "rho", "monotone"];

#[allow(clippy::too_many_arguments)]
fn cmd_check_b(
    inst: &InstanceArgs,
    bfunc: &Path,
    checks: Option<&str>,
    seed: u64,
    samples: usize,
    threshold: f64,
    output: Option<&Path>,
) -> Run {
    let l = load_instance(inst)?;
    let b_bytes = read(bfunc)?;
    let b = BFunction::from_json(&parse_json(bfunc, &b_bytes)?)?;
    let arity = b.arity()?;
    if arity != l.inst.n() {
        return Err(HblError::Dimension(format!("B takes {arity} arguments but the instance has {} maps", l.inst.n())).into());
    }
    let requested: Vec<&str> = match checks {
        None => ALL_CHECKS.to_vec(),
        Some(s) => s.split(',').map(str::trim).filter(|c| !c.is_empty()).collect(),
    };
    if let Some(bad) = requested.iter().find(|c| !ALL_CHECKS.contains(c)) {
        return Err(HblError::Parse(format!("--checks: unknown check \"{bad}\"")).into());
    }
    let explicit = checks.is_some();
    let sampler = Sampler { samples, seed, threshold, ..Sampler::default() };
    let vertices = enumerate_vertices(&build_constraints(&l.inst, &l.list)?)?;
    let mut reports: Vec<CheckReport> = Vec::new();
    let mut skipped: Vec<Value> = Vec::new();
    for &c in &requested {
        match c {
            "condition2" => reports.push(check_polytope_conditions(&b, &vertices, Extremum::Max, &sampler)?),
            "condition3" => reports.push(check_polytope_conditions(&b, &vertices, Extremum::Min, &sampler)?),
            "scaling" => reports.push(check_scaling(&b, l.inst.d(), &l.inst.target_dims(), &sampler)?),
            "monotone" => reports.push(check_monotone(&b, &sampler)?),
            "delta3" if arity == 3 => reports.push(check_delta3_nonneg(&b, &sampler)?),
            "rho" => match &b {
                BFunction::Rho { rho, inner } => {
                    let r = check_rho_conditions(rho, inner.len(), &sampler)?;
                    reports.push(r.homogeneity);
                    reports.push(r.superadditivity);
                }
                _ if explicit => return Err(HblError::Precondition("rho check needs a B of kind \"rho\"".into()).into()),
                _ => skipped.push(json!({"check": c, "reason": "B is not of kind rho"})),
            },
            "delta3" if explicit => return Err(HblError::Precondition("Δ₃ needs a function of three variables".into()).into()),
            _ => skipped.push(json!({"check": c, "reason": "B does not take three arguments"})),
        }
    }
    let in_polytope = monomial_exponents(&b).map(|s| {
        let cs = build_constraints(&l.inst, &l.list).expect("constraints already built");
        cs.contains(&s.0)
    });
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.condition.clone()).collect();
    let report = json!({
        "command": "check-b",
        "config_hash": config_hash([
            b"check-b".as_slice(),
            &l.bytes,
            &b_bytes,
            requested.join(",").as_bytes(),
            format!("{samples}/{threshold}").as_bytes(),
        ]),
        "seed": seed,
        "samples": samples,
        "threshold": threshold,
        "monomial_in_polytope": in_polytope,
        "reports": reports,
        "skipped": skipped,
        "pass": failed.is_empty(),
    });
    emit(output, &pretty(&report))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn parse_floats(flag: &str, s: &str, n: usize) -> Result<Vec<f64>, HblError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| HblError::Parse(format!("--{flag} \"{s}\": expected {n} comma-separated numbers")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(HblError::Parse(format!("--{flag} \"{s}\": expected {n} comma-separated numbers")));
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<Grid, HblError> {
    let bad = |why: &str| HblError::Parse(format!("--grid \"{s}\": {why}"));
    let (mut half, mut n) = (None, None);
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| bad("expected L=..,N=.."))?;
        match k.trim() {
            "L" => half = Some(v.trim().parse::<f64>().map_err(|_| bad("L is not a number"))?),
            "N" => n = Some(v.trim().parse::<usize>().map_err(|_| bad("N is not a positive integer"))?),
            other => return Err(bad(&format!("unknown key {other}"))),
        }
    }
    let (half, n) = (half.ok_or_else(|| bad("missing L"))?, n.ok_or_else(|| bad("missing N"))?);
    Grid::symmetric(half, n)
}

fn cmd_extremize(a: &ExtremizeArgs) -> Run {
    let b_bytes = read(&a.bfunc)?;
    let b = BFunction::from_json(&parse_json(&a.bfunc, &b_bytes)?)?;
    if b.arity()? != 3 {
        return Err(HblError::Dimension("the trilinear functional needs a B of three arguments".into()).into());
    }
    let m = parse_floats("masses", &a.masses, 3)?;
    if m.iter().any(|x| *x <= 0.0) {
        return Err(HblError::Parse(format!("--masses \"{}\": masses must be positive", a.masses)).into());
    }
    let masses = [m[0], m[1], m[2]];
    let grid = parse_grid(&a.grid)?;
    let sg = parse_floats("sigmas", &a.sigmas, 3)?;
    if !(sg[0] > 0.0 && sg[1] >= sg[0] && sg[2] >= 1.0 && sg[2].fract() == 0.0) {
        return Err(HblError::Parse(format!("--sigmas \"{}\": need 0 < lo ≤ hi and an integer count", a.sigmas)).into());
    }
    let sigma_grid = geometric_grid(sg[0], sg[1], sg[2] as usize);
    let base = best_gaussian(&b, masses, grid, &sigma_grid)?;
    let opts = AscentOptions { iterations: a.iterations, eta: a.eta, tol: a.tol, rearrange: a.rearrange };
    let run = ascend(&b, &base.triple, &opts)?;
    let windows = base.sigmas.map(|s| a.window * s);
    let before = el_flatness(&b, &base.triple, windows)?;
    let after = el_flatness(&b, &run.triple, windows)?;
    let table = flatness_table(&b, masses, grid, &sigma_grid, a.window)?;

    fs::create_dir_all(&a.output).map_err(HblError::Io)?;
    run.triple.save(&a.output.join("triple"))?;
    let mut csv = String::from("sigma_f,sigma_g,sigma_h,flatness_f,flatness_g,flatness_h,flatness\n");
    for r in &table.rows {
        let [f, g, h] = r.flatness.slots;
        csv.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{:e}\n",
            r.sigmas[0], r.sigmas[1], r.sigmas[2], f, g, h, r.flatness.max
        ));
    }
    write_atomic(&a.output.join("flatness.csv"), csv.as_bytes())?;
    let final_value = *run.values.last().expect("ascent records the initial value");
    let report = json!({
        "command": "extremize",
        "config_hash": config_hash([
            b"extremize".as_slice(),
            &b_bytes,
            a.masses.as_bytes(),
            a.grid.as_bytes(),
            a.sigmas.as_bytes(),
            format!("{}/{}/{}/{}/{}", a.iterations, a.eta, a.tol, a.rearrange, a.window).as_bytes(),
        ]),
        "seed": a.seed,
        "b": b.to_json(),
        "masses": masses,
        "grid": grid,
        "sigma_grid": sigma_grid,
        "gaussian_baseline": {"value": base.value, "sigmas": base.sigmas, "flatness": before},
        "ascent": run.summary(),
        "final_value": final_value,
        "improvement": final_value - base.value,
        "final_flatness": after,
        "flatness_table": {"window_factor": table.window_factor, "min": table.min, "argmin": table.argmin, "file": "flatness.csv"},
        "triple_dir": "triple",
    });
    write_atomic(&a.output.join("report.json"), pretty(&report).as_bytes())?;
    println!(
        "baseline {:.12} final {:.12} min flatness {:.4e} -> {}",
        base.value,
        final_value,
        table.min,
        a.output.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Polytope { inst, output } => cmd_polytope(inst, output.as_deref()),
        Command::Certify { inst, sweep, output } => cmd_certify(inst, sweep.as_deref(), output.as_deref()),
        Command::CheckB { inst, bfunc, checks, seed, samples, threshold, output } => {
            cmd_check_b(inst, bfunc, checks.as_deref(), *seed, *samples, *threshold, output.as_deref())
        }
        Command::Extremize(a) => cmd_extremize(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Error(e) => e.to_string(),
                Failure::Check(s) => s.clone(),
            };
            eprintln!("hbl: {msg}");
            ExitCode::from(exit_code(&f))
        }
    }
}
