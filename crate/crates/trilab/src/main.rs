use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use trilab::bench::{bench, BenchKind};
use trilab::error::{Error, Result};
use trilab::experiment::{Generator, GeneratorSpec};
use trilab::formats::{
    read_points, read_profile, write_points, write_points_to, write_profile, write_signatures,
    write_tuples,
};
use trilab::incidence_file::{format_incidence, read_incidence};
use trilab::scales::parse_scales;
use trilab::{run_experiment, set_digest, ExperimentSpec, RunOptions};
use trilab_core::config::{delta_covering_profile, ordered_tuples, simplex_set, Guard};
use trilab_core::dims::{
    assouad_probe, box_dimension, energy_integral, verify_inequality, DimensionEstimate,
};
use trilab_core::grid::{covering_profile, CoveringProfile};
use trilab_core::lab::{
    bilinear_separation, check_incidence_hypotheses, gen_incidence, incidence_count,
    separated_points_bound, IncidenceParams,
};

#[derive(Parser)]
#[command(
    name = "trilab",
    version,
    about = "Distance and triangle configuration sets of finite point sets"
)]
struct Cli {
    /// Worker threads for parallel stages (0 = one per CPU).
    #[arg(long, global = true, env = "TRILAB_THREADS", default_value_t = 0)]
    threads: usize,
    /// PRNG seed for seeded generators and experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Disable the input-size caps on the cubic enumerations.
    #[arg(long, global = true)]
    override_guards: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cantor,
    Fourcorner,
    Grid,
    IntegerGrid,
    Circle,
    Random,
    Ifs,
    Incidence,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// IFS depth (cantor, fourcorner).
    #[arg(long)]
    depth: Option<u32>,
    /// Points per axis (grids) or on the circle.
    #[arg(long)]
    m: Option<usize>,
    /// Point count (random).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Zero-pad the result into this many dimensions.
    #[arg(long)]
    embed: Option<usize>,
    /// IFS spec file (kind ifs).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[command(flatten)]
    incidence: IncidenceArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IncidenceArgs {
    #[arg(long, default_value_t = 20.0)]
    r1: f64,
    #[arg(long, default_value_t = 30.0)]
    r2: f64,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
}

#[derive(Args)]
struct InScales {
    #[arg(long = "in")]
    input: PathBuf,
    /// Scale ladder, e.g. `3^-1..-6` or `0.5,0.25,1/8`.
    #[arg(long)]
    scales: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated point set as CSV.
    Generate(GenerateArgs),
    /// Covering profile `scale,count` of a point set.
    Cover {
        #[command(flatten)]
        io: InScales,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simplex signature set; prints count and digest without `--out`.
    Delta {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=4))]
        k: u8,
        /// Cell side for quantized signatures; 0 for exact.
        #[arg(long, default_value_t = 0.0)]
        quant: f64,
        /// Report ordered tuples rather than sorted signatures (exact only).
        #[arg(long)]
        ordered: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering profile of the triangle set.
    CoverDelta {
        #[command(flatten)]
        io: InScales,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting slope, optionally with an Assouad probe and an energy.
    Dims {
        #[command(flatten)]
        io: InScales,
        #[arg(long)]
        assouad: bool,
        #[arg(long, default_value_t = 4.0)]
        ratio_floor: f64,
        /// Energy exponent t, uniform weights.
        #[arg(long)]
        energy: Option<f64>,
        /// JSON report file; printed after the table when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check slope(Δ) ≥ factor·slope(F) + offset − tol.
    Verify(VerifyArgs),
    /// Hypotheses, incidence count and bounds for an instance file.
    Incidence {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum of |(x−y)×(y−z)| over F1×F2×F3 against r.
    Bilinear {
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
        #[arg(long)]
        f3: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment spec file.
    Run {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Time the naive and hashed triangle paths.
    Bench {
        #[arg(long, value_enum, default_value = "random")]
        kind: BenchKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0 / 1024.0)]
        quant: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Point set; the two profiles are computed from it.
    #[arg(long = "in", requires = "scales", conflicts_with_all = ["set_profile", "delta_profile"])]
    input: Option<PathBuf>,
    #[arg(long)]
    scales: Option<String>,
    /// Ladder for the triangle set (defaults to `--scales`).
    #[arg(long)]
    delta_scales: Option<String>,
    #[arg(long, requires = "delta_profile")]
    set_profile: Option<PathBuf>,
    #[arg(long, requires = "set_profile")]
    delta_profile: Option<PathBuf>,
    #[arg(long, default_value_t = 1.5)]
    factor: f64,
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Ctx {
    guard: Guard,
    seed: Option<u64>,
}

fn required<T>(v: Option<T>, flag: &'static str) -> Result<T> {
    v.ok_or_else(|| Error::invalid("arguments", format!("this kind needs `--{flag}`")))
}

fn emit_json(v: &impl Serialize, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Error::io(p, e)),
        None => match writeln!(std::io::stdout(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("stdout", e)),
            _ => Ok(()),
        },
    }
}

fn profile_out(p: &CoveringProfile, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_profile(p, path),
        None => {
            println!("scale,count");
            for (s, n) in p.entries() {
                println!("{s},{n}");
            }
            Ok(())
        }
    }
}

fn print_fit(label: &str, d: &DimensionEstimate) {
    println!(
        "{label:<8} slope {:.6}  intercept {:.6}  r² {:.6}  scales {}..{} ({})",
        d.slope, d.intercept, d.r_squared, d.scale_range.0, d.scale_range.1, d.n_scales
    );
}

fn generate(a: GenerateArgs, ctx: &Ctx) -> Result<()> {
    let seed = ctx.seed.unwrap_or(0);
    if let Kind::Incidence = a.kind {
        let i = &a.incidence;
        let inst = gen_incidence(&IncidenceParams {
            r1: i.r1,
            r2: i.r2,
            gamma: i.gamma,
            delta: i.delta,
            alpha: i.alpha,
            beta: i.beta,
            seed,
        })?;
        let text = format_incidence(&inst);
        return match &a.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        };
    }
    let kind = match a.kind {
        Kind::Cantor => Generator::Cantor {
            depth: required(a.depth, "depth")?,
        },
        Kind::Fourcorner => Generator::Fourcorner {
            depth: required(a.depth, "depth")?,
        },
        Kind::Grid => Generator::Grid {
            m: required(a.m, "m")?,
            dim: a.dim,
        },
        Kind::IntegerGrid => Generator::IntegerGrid {
            m: required(a.m, "m")?,
            dim: a.dim,
        },
        Kind::Circle => Generator::Circle {
            m: required(a.m, "m")?,
            radius: a.radius,
            center: [0.0, 0.0],
        },
        Kind::Random => Generator::Random {
            n: required(a.n, "n")?,
            dim: a.dim,
            seed: Some(seed),
        },
        Kind::Ifs => Generator::Ifs {
            file: required(a.spec, "spec")?,
        },
        Kind::Incidence => unreachable!(),
    };
    let ps = GeneratorSpec {
        kind,
        embed: a.embed,
    }
    .generate(seed)?;
    match &a.out {
        Some(p) => write_points(&ps, p),
        None => {
            let stdout = std::io::stdout();
            write_points_to(&ps, &mut stdout.lock()).map_err(|e| Error::io("stdout", e))
        }
    }
}

fn verify(a: VerifyArgs, ctx: &Ctx) -> Result<bool> {
    let (set, delta) = match (&a.input, &a.set_profile, &a.delta_profile) {
        (Some(input), _, _) => {
            let ps = read_points(input)?;
            let scales = parse_scales(a.scales.as_deref().unwrap_or_default())?;
            let dscales = match &a.delta_scales {
                Some(s) => parse_scales(s)?,
                None => scales.clone(),
            };
            let set = covering_profile(&ps, &scales)?;
            let delta = delta_covering_profile(&ps, &dscales, &ctx.guard)?;
            (set, delta)
        }
        (None, Some(sp), Some(dp)) => (read_profile(sp)?, read_profile(dp)?),
        _ => {
            return Err(Error::invalid(
                "arguments",
                "give `--in` with `--scales`, or `--set-profile` with `--delta-profile`",
            ))
        }
    };
    let r = verify_inequality(&set, &delta, a.factor, a.offset, a.tol)?;
    print_fit("set", &r.set);
    print_fit("delta", &r.delta);
    println!(
        "bound    {} * {:.6} + {} = {:.6}; 1 + s = {:.6}",
        a.factor,
        r.set.slope,
        a.offset,
        a.factor * r.set.slope + a.offset,
        1.0 + r.set.slope
    );
    println!(
        "margin   {:+.6} (tol {})  {}",
        r.margin,
        a.tol,
        if r.pass { "PASS" } else { "FAIL" }
    );
    if let Some(out) = &a.out {
        emit_json(
            &json!({ "report": r, "one_plus_s": 1.0 + r.set.slope }),
            Some(out),
        )?;
    }
    Ok(r.pass)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        guard: if cli.override_guards {
            Guard::off()
        } else {
            Guard::default()
        },
        seed: cli.seed,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Error::invalid("thread count", e.to_string()))?;
    match cli.cmd {
        Cmd::Generate(a) => generate(a, &ctx)?,
        Cmd::Cover { io, out } => {
            let ps = read_points(&io.input)?;
            profile_out(
                &covering_profile(&ps, &parse_scales(&io.scales)?)?,
                out.as_deref(),
            )?;
        }
        Cmd::Delta {
            input,
            k,
            quant,
            ordered,
            out,
        } => {
            let ps = read_points(&input)?;
            let k = usize::from(k);
            if ordered && quant != 0.0 {
                return Err(Error::invalid(
                    "arguments",
                    "`--ordered` needs exact mode (`--quant 0`)",
                ));
            }
            let set = simplex_set(&ps, k, quant, &ctx.guard)?;
            match (&out, ordered) {
                (Some(p), true) => write_tuples(&ordered_tuples(&ps, k, &ctx.guard)?, k, p)?,
                (Some(p), false) => write_signatures(&set, p)?,
                (None, _) => {}
            }
            println!("signatures {}", set.len());
            if let Some(c) = set.ordered_count() {
                println!("ordered    {c}");
            }
            println!("digest     {}", set_digest(&set));
        }
        Cmd::CoverDelta { io, out } => {
            let ps = read_points(&io.input)?;
            let p = delta_covering_profile(&ps, &parse_scales(&io.scales)?, &ctx.guard)?;
            profile_out(&p, out.as_deref())?;
        }
        Cmd::Dims {
            io,
            assouad,
            ratio_floor,
            energy,
            out,
        } => {
            let ps = read_points(&io.input)?;
            let scales = parse_scales(&io.scales)?;
            let d = box_dimension(&covering_profile(&ps, &scales)?)?;
            print_fit("box", &d);
            let mut report = json!({
                "slope": d.slope,
                "intercept": d.intercept,
                "r_squared": d.r_squared,
                "scales": scales,
                "per_step_slopes": d.per_step_slopes,
            });
            if assouad {
                let p = assouad_probe(&ps, &scales, ratio_floor)?;
                println!(
                    "assouad  exponent {:.6}  R {}  r {}  count {}  centres {}",
                    p.best_exponent, p.big_r, p.small_r, p.count, p.centers
                );
                report["assouad"] = serde_json::to_value(&p)?;
            }
            if let Some(t) = energy {
                let w = vec![1.0 / ps.len().max(1) as f64; ps.len()];
                let e = energy_integral(&ps, &w, t)?;
                println!("energy   t {t}  value {}", e.value());
                report["energy"] = json!({
                    "t": t,
                    "value": e,
                    "convention": "sum over ordered pairs i != j of w_i w_j |x_i - x_j|^-t, uniform weights",
                });
            }
            emit_json(&report, out.as_deref())?;
        }
        Cmd::Verify(a) => return verify(a, &ctx),
        Cmd::Incidence { spec, out } => {
            let inst = read_incidence(&spec)?;
            let hyp = check_incidence_hypotheses(&inst);
            let c = incidence_count(&inst, &ctx.guard)?;
            let sep = separated_points_bound(&inst)?;
            println!(
                "count {}  lower {}  upper {}  hypotheses {}  bounds {}",
                c.count,
                c.lower,
                c.upper,
                if hyp.holds() { "hold" } else { "violated" },
                match c.bounds_hold {
                    Some(true) => "hold",
                    Some(false) => "FAIL",
                    None => "n/a",
                }
            );
            let report: Value = json!({
                "count": c.count,
                "lower": c.lower,
                "upper": c.upper.to_string(),
                "a_const": c.a_const,
                "cells": c.cells,
                "bounds_hold": c.bounds_hold,
                "hypotheses": hyp,
                "separated": sep,
            });
            emit_json(&report, out.as_deref())?;
            return Ok(c.bounds_hold == Some(true));
        }
        Cmd::Bilinear { f1, f2, f3, r, out } => {
            let (a, b, c) = (read_points(&f1)?, read_points(&f2)?, read_points(&f3)?);
            let rep = bilinear_separation(&a, &b, &c, r, &ctx.guard)?;
            emit_json(&rep, out.as_deref())?;
            return Ok(rep.pass);
        }
        Cmd::Run { spec } => {
            let spec = ExperimentSpec::read(&spec)?;
            let report = run_experiment(
                &spec,
                &RunOptions {
                    guard: ctx.guard,
                    seed: ctx.seed,
                },
            )?;
            for c in &report.checks {
                let margin = c
                    .margin
                    .map_or(String::new(), |m| format!("  margin {m:+.6}"));
                println!(
                    "{:<10} {}{margin}",
                    c.kind,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            println!("report     {}", spec.out_dir.join("report.json").display());
            return Ok(report.pass);
        }
        Cmd::Bench {
            kind,
            n,
            quant,
            out,
        } => {
            let r = bench(kind, n, quant, ctx.seed.unwrap_or(0), &ctx.guard)?;
            eprintln!(
                "hashed {:.3}s ({} signatures){}",
                r.hashed.seconds,
                r.hashed.signatures,
                r.naive.as_ref().map_or(String::new(), |t| format!(
                    ", naive {:.3}s, equal",
                    t.seconds
                ))
            );
            emit_json(&r, out.as_deref())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    };
    ExitCode::from(code)
}
