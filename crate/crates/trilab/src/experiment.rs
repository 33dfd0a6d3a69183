//! Experiment recipes: generate → cover → delta → dims → verify.
//!
//! A spec file is `key = value` text with section headers:
//!
//! ```text
//! name = cantor-line
//! seed = 1
//! out_dir = out/cantor-line
//!
//! [generator]
//! kind = cantor
//! depth = 8
//! embed = 2
//!
//! [scales]
//! set = 3^-1..-6
//! delta = 3^-1..-5
//!
//! [check]
//! kind = inequality
//! factor = 2
//! tol = 0.15
//! ```
//!
//! Generator kinds and their keys:
//!
//! | kind | keys |
//! |---|---|
//! | `cantor`, `fourcorner` | `depth` |
//! | `grid`, `integer-grid` | `m`, `dim` |
//! | `circle` | `m`, `radius`, optional `cx`, `cy` |
//! | `random` | `n`, `dim`, optional `seed` (defaults to the top-level seed) |
//! | `ifs` | `file` (IFS spec text) |
//! | `csv` | `file` (point CSV) |
//!
//! Every kind accepts `embed = <dim>` to zero-pad into a larger space.
//!
//! Check kinds: `box` (`expected`, `tol`), `inequality` (`factor`, `offset`,
//! `tol`; needs `[scales] delta`), `assouad` (`ratio_floor`, optional
//! `expected` and `tol`), `energy` (`t`, optional `max`), and `incidence`
//! (`r1 r2 gamma delta alpha beta`, optional `seed`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use trilab_core::config::{delta_covering_profile, Guard};
use trilab_core::dims::{assouad_probe, box_dimension, energy_integral, verify_inequality, Energy};
use trilab_core::generators::{
    gen_circle, gen_grid, gen_ifs, gen_integer_grid, gen_random, IfsSpec,
};
use trilab_core::grid::{covering_profile, CoveringProfile};
use trilab_core::lab::{
    check_incidence_hypotheses, gen_incidence, incidence_count, IncidenceParams,
};
use trilab_core::point::PointSet;

use crate::error::{Error, Result};
use crate::formats::{read_points, read_text, write_points, write_profile};
use crate::scales::parse_scales;
use crate::sections::{self, Section};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Cantor {
        depth: u32,
    },
    Fourcorner {
        depth: u32,
    },
    Grid {
        m: usize,
        dim: usize,
    },
    IntegerGrid {
        m: usize,
        dim: usize,
    },
    Circle {
        m: usize,
        radius: f64,
        center: [f64; 2],
    },
    Random {
        n: usize,
        dim: usize,
        seed: Option<u64>,
    },
    Ifs {
        file: PathBuf,
    },
    Csv {
        file: PathBuf,
    },
}

impl Generator {
    pub const KINDS: [&'static str; 8] = [
        "cantor",
        "fourcorner",
        "grid",
        "integer-grid",
        "circle",
        "random",
        "ifs",
        "csv",
    ];

    /// Seed actually used by a seeded generator.
    pub fn seed(&self, default: u64) -> Option<u64> {
        match self {
            Generator::Random { seed, .. } => Some(seed.unwrap_or(default)),
            _ => None,
        }
    }

    pub fn generate(&self, default_seed: u64) -> Result<PointSet> {
        Ok(match self {
            Generator::Cantor { depth } => {
                gen_ifs(&IfsSpec::cantor(*depth))?.with_label(format!("cantor depth {depth}"))
            }
            Generator::Fourcorner { depth } => gen_ifs(&IfsSpec::four_corner(*depth))?
                .with_label(format!("four-corner depth {depth}")),
            Generator::Grid { m, dim } => {
                gen_grid(*m, *dim)?.with_label(format!("grid m={m} dim={dim}"))
            }
            Generator::IntegerGrid { m, dim } => {
                gen_integer_grid(*m, *dim)?.with_label(format!("integer grid m={m} dim={dim}"))
            }
            Generator::Circle { m, radius, center } => {
                gen_circle(center, *radius, *m)?.with_label(format!("circle m={m} r={radius}"))
            }
            Generator::Random { n, dim, .. } => {
                let seed = self.seed(default_seed).unwrap_or(default_seed);
                gen_random(*n, *dim, seed)?
                    .with_label(format!("random n={n} dim={dim} seed={seed}"))
            }
            Generator::Ifs { file } => {
                let spec =
                    crate::formats::parse_ifs(&file.display().to_string(), &read_text(file)?)?;
                gen_ifs(&spec)?
            }
            Generator::Csv { file } => read_points(file)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: Generator,
    pub embed: Option<usize>,
}

impl GeneratorSpec {
    pub fn generate(&self, default_seed: u64) -> Result<PointSet> {
        let ps = self.kind.generate(default_seed)?;
        match self.embed {
            Some(d) if d != ps.dim() => Ok(ps.embed(d)?),
            _ => Ok(ps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    Box {
        expected: f64,
        tol: f64,
    },
    Inequality {
        factor: f64,
        offset: f64,
        tol: f64,
    },
    Assouad {
        ratio_floor: f64,
        expected: Option<f64>,
        tol: f64,
    },
    Energy {
        t: f64,
        max: Option<f64>,
    },
    Incidence {
        r1: f64,
        r2: f64,
        gamma: f64,
        delta: f64,
        alpha: f64,
        beta: f64,
        seed: Option<u64>,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Box { .. } => "box",
            Check::Inequality { .. } => "inequality",
            Check::Assouad { .. } => "assouad",
            Check::Energy { .. } => "energy",
            Check::Incidence { .. } => "incidence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub generator: GeneratorSpec,
    pub set_scales: Vec<f64>,
    pub delta_scales: Option<Vec<f64>>,
    pub checks: Vec<Check>,
}

fn scales_of(origin: &str, sec: &mut Section, key: &str) -> Result<Option<Vec<f64>>> {
    match sec.raw(key) {
        None => Ok(None),
        Some((v, line)) => parse_scales(&v)
            .map(Some)
            .map_err(|e| Error::parse(origin, line, format!("`{key}` ladder: {e}"))),
    }
}

fn positive(origin: &str, line: u64, what: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(
            origin,
            line,
            format!("`{what}` must be positive, got {v}"),
        ))
    }
}

fn parse_generator(origin: &str, sec: &mut Section) -> Result<GeneratorSpec> {
    let line = sec.line;
    let kind: String = sec.require(origin, "kind")?;
    let kind = match kind.as_str() {
        "cantor" => Generator::Cantor {
            depth: sec.require(origin, "depth")?,
        },
        "fourcorner" => Generator::Fourcorner {
            depth: sec.require(origin, "depth")?,
        },
        "grid" => Generator::Grid {
            m: sec.require(origin, "m")?,
            dim: sec.require(origin, "dim")?,
        },
        "integer-grid" => Generator::IntegerGrid {
            m: sec.require(origin, "m")?,
            dim: sec.require(origin, "dim")?,
        },
        "circle" => Generator::Circle {
            m: sec.require(origin, "m")?,
            radius: positive(origin, line, "radius", sec.require(origin, "radius")?)?,
            center: [
                sec.get(origin, "cx")?.unwrap_or(0.0),
                sec.get(origin, "cy")?.unwrap_or(0.0),
            ],
        },
        "random" => Generator::Random {
            n: sec.require(origin, "n")?,
            dim: sec.require(origin, "dim")?,
            seed: sec.get(origin, "seed")?,
        },
        "ifs" => Generator::Ifs {
            file: sec.require::<String>(origin, "file")?.into(),
        },
        "csv" => Generator::Csv {
            file: sec.require::<String>(origin, "file")?.into(),
        },
        other => {
            return Err(Error::parse(
                origin,
                line,
                format!(
                    "unknown generator `{other}` (known: {})",
                    Generator::KINDS.join(", ")
                ),
            ))
        }
    };
    if let Generator::Grid { m, dim } | Generator::IntegerGrid { m, dim } = &kind {
        if *m == 0 || !(1..=3).contains(dim) {
            return Err(Error::parse(
                origin,
                line,
                "grids need m >= 1 and dim in 1..=3",
            ));
        }
    }
    if let Generator::Random { dim, .. } = &kind {
        if !(1..=3).contains(dim) {
            return Err(Error::parse(origin, line, "dim must be in 1..=3"));
        }
    }
    let embed = sec.get(origin, "embed")?;
    if let Some(d) = embed {
        if !(1..=3).contains(&d) {
            return Err(Error::parse(origin, line, "embed must be in 1..=3"));
        }
    }
    sec.finish(origin)?;
    Ok(GeneratorSpec { kind, embed })
}

fn parse_check(origin: &str, sec: &mut Section) -> Result<Check> {
    let line = sec.line;
    let kind: String = sec.require(origin, "kind")?;
    let check = match kind.as_str() {
        "box" => Check::Box {
            expected: sec.require(origin, "expected")?,
            tol: sec.require(origin, "tol")?,
        },
        "inequality" => Check::Inequality {
            factor: sec.require(origin, "factor")?,
            offset: sec.get(origin, "offset")?.unwrap_or(0.0),
            tol: sec.get(origin, "tol")?.unwrap_or(0.0),
        },
        "assouad" => Check::Assouad {
            ratio_floor: sec.require(origin, "ratio_floor")?,
            expected: sec.get(origin, "expected")?,
            tol: sec.get(origin, "tol")?.unwrap_or(0.0),
        },
        "energy" => Check::Energy {
            t: positive(origin, line, "t", sec.require(origin, "t")?)?,
            max: sec.get(origin, "max")?,
        },
        "incidence" => Check::Incidence {
            r1: sec.require(origin, "r1")?,
            r2: sec.require(origin, "r2")?,
            gamma: sec.require(origin, "gamma")?,
            delta: positive(origin, line, "delta", sec.require(origin, "delta")?)?,
            alpha: sec.get(origin, "alpha")?.unwrap_or(0.0),
            beta: sec.get(origin, "beta")?.unwrap_or(0.0),
            seed: sec.get(origin, "seed")?,
        },
        other => {
            return Err(Error::parse(
                origin,
                line,
                format!("unknown check `{other}`"),
            ))
        }
    };
    let tol = match &check {
        Check::Box { tol, .. } | Check::Inequality { tol, .. } | Check::Assouad { tol, .. } => *tol,
        _ => 0.0,
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::parse(
            origin,
            line,
            "`tol` must be a finite nonnegative number",
        ));
    }
    sec.finish(origin)?;
    Ok(check)
}

impl ExperimentSpec {
    /// Parses and validates a spec. Nothing is generated or written.
    pub fn parse(origin: &str, text: &str) -> Result<Self> {
        let mut secs = sections::parse(origin, text)?;
        let mut top = secs.remove(0);
        let name: String = top.require(origin, "name")?;
        let seed: u64 = top.get(origin, "seed")?.unwrap_or(0);
        let out_dir: String = top.require(origin, "out_dir")?;
        top.finish(origin)?;
        let (mut generator, mut scales) = (None, None);
        let mut checks = Vec::new();
        for mut sec in secs {
            match sec.name.as_str() {
                "generator" if generator.is_none() => {
                    generator = Some(parse_generator(origin, &mut sec)?)
                }
                "scales" if scales.is_none() => {
                    let set = scales_of(origin, &mut sec, "set")?
                        .ok_or_else(|| Error::parse(origin, sec.line, "[scales] needs `set`"))?;
                    let delta = scales_of(origin, &mut sec, "delta")?;
                    sec.finish(origin)?;
                    scales = Some((set, delta));
                }
                "check" => checks.push(parse_check(origin, &mut sec)?),
                "generator" | "scales" => {
                    return Err(Error::parse(
                        origin,
                        sec.line,
                        format!("duplicate [{}]", sec.name),
                    ))
                }
                other => {
                    return Err(Error::parse(
                        origin,
                        sec.line,
                        format!("unknown section [{other}]"),
                    ))
                }
            }
        }
        let generator = generator.ok_or_else(|| Error::parse(origin, 1, "missing [generator]"))?;
        let (set_scales, delta_scales) =
            scales.ok_or_else(|| Error::parse(origin, 1, "missing [scales]"))?;
        if delta_scales.is_none() && checks.iter().any(|c| matches!(c, Check::Inequality { .. })) {
            return Err(Error::parse(
                origin,
                1,
                "an inequality check needs `[scales] delta`",
            ));
        }
        Ok(Self {
            name,
            seed,
            out_dir: out_dir.into(),
            generator,
            set_scales,
            delta_scales,
            checks,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&path.display().to_string(), &read_text(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub kind: &'static str,
    pub pass: bool,
    /// Signed distance to the pass threshold where one exists.
    pub margin: Option<f64>,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Seeds {
    pub experiment: u64,
    pub generator: Option<u64>,
    pub incidence: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub version: String,
    pub spec: ExperimentSpec,
    pub seeds: Seeds,
    pub points: Option<usize>,
    pub set_profile: Option<Vec<(f64, usize)>>,
    pub delta_profile: Option<Vec<(f64, usize)>>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub error: Option<String>,
    /// Wall seconds per stage.
    pub timing: BTreeMap<&'static str, f64>,
}

impl Report {
    /// The report as JSON with the run-dependent `timing` and `version` removed.
    pub fn stable_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timing");
            m.remove("version");
        }
        v
    }
}

#[derive(Default)]
pub struct RunOptions {
    pub guard: Guard,
    /// Replaces the spec's top-level seed.
    pub seed: Option<u64>,
}

fn check_result(kind: &'static str, pass: bool, margin: Option<f64>, detail: Value) -> CheckResult {
    CheckResult {
        kind,
        pass,
        margin,
        detail,
    }
}

fn run_check(
    check: &Check,
    ps: &PointSet,
    set: &CoveringProfile,
    delta: Option<&CoveringProfile>,
    spec: &ExperimentSpec,
    seed: u64,
    guard: &Guard,
) -> Result<CheckResult> {
    Ok(match *check {
        Check::Box { expected, tol } => {
            let d = box_dimension(set)?;
            let margin = tol - (d.slope - expected).abs();
            check_result(
                "box",
                margin >= 0.0,
                Some(margin),
                json!({ "expected": expected, "tol": tol, "estimate": d }),
            )
        }
        Check::Inequality {
            factor,
            offset,
            tol,
        } => {
            let delta = delta.expect("validated: inequality has a delta ladder");
            let r = verify_inequality(set, delta, factor, offset, tol)?;
            let one_plus_s = 1.0 + r.set.slope;
            check_result(
                "inequality",
                r.pass,
                Some(r.margin + tol),
                json!({ "report": r, "one_plus_s": one_plus_s, "delta_minus_one_plus_s": r.delta.slope - one_plus_s }),
            )
        }
        Check::Assouad {
            ratio_floor,
            expected,
            tol,
        } => {
            let p = assouad_probe(ps, &spec.set_scales, ratio_floor)?;
            let margin = expected.map(|e| tol - (p.best_exponent - e).abs());
            check_result(
                "assouad",
                margin.is_none_or(|m| m >= 0.0),
                margin,
                json!({ "probe": p, "expected": expected, "tol": tol }),
            )
        }
        Check::Energy { t, max } => {
            let w = vec![1.0 / ps.len().max(1) as f64; ps.len()];
            let e = energy_integral(ps, &w, t)?;
            let margin = match (e, max) {
                (Energy::Finite(v), Some(m)) => Some(m - v),
                _ => None,
            };
            let pass = matches!(e, Energy::Finite(_)) && margin.is_none_or(|m| m >= 0.0);
            check_result(
                "energy",
                pass,
                margin,
                json!({ "t": t, "max": max, "energy": e, "weights": "uniform", "kernel": "|x-y|^-t" }),
            )
        }
        Check::Incidence {
            r1,
            r2,
            gamma,
            delta,
            alpha,
            beta,
            seed: s,
        } => {
            let params = IncidenceParams {
                r1,
                r2,
                gamma,
                delta,
                alpha,
                beta,
                seed: s.unwrap_or(seed),
            };
            let inst = gen_incidence(&params)?;
            let hyp = check_incidence_hypotheses(&inst);
            let c = incidence_count(&inst, guard)?;
            let pass = hyp.holds() && c.bounds_hold == Some(true);
            check_result(
                "incidence",
                pass,
                None,
                json!({
                    "params": params,
                    "centers": inst.centers.len(),
                    "count": c.count,
                    "lower": c.lower,
                    "upper": c.upper.to_string(),
                    "a_const": c.a_const,
                    "cells": c.cells,
                    "hypotheses_hold": hyp.holds(),
                    "violations": hyp.violations,
                    "bounds_hold": c.bounds_hold,
                }),
            )
        }
    })
}

struct Run<'a> {
    spec: &'a ExperimentSpec,
    opts: &'a RunOptions,
    report: Report,
}

impl Run<'_> {
    fn stage<T>(
        &mut self,
        name: &'static str,
        f: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        let t0 = Instant::now();
        let out = f(self).map_err(|e| e.in_stage(name));
        self.report.timing.insert(name, t0.elapsed().as_secs_f64());
        out
    }

    fn pipeline(&mut self) -> Result<()> {
        let spec = self.spec;
        let seed = self.report.seeds.experiment;
        let out = spec.out_dir.clone();
        let ps = self.stage("generate", |r| {
            let ps = spec.generator.generate(seed)?;
            r.report.points = Some(ps.len());
            write_points(&ps, &out.join("points.csv"))?;
            Ok(ps)
        })?;
        let set = self.stage("cover", |r| {
            let p = covering_profile(&ps, &spec.set_scales)?;
            r.report.set_profile = Some(p.entries().to_vec());
            write_profile(&p, &out.join("profile_set.csv"))?;
            Ok(p)
        })?;
        let delta = match &spec.delta_scales {
            None => None,
            Some(scales) => Some(self.stage("delta", |r| {
                let p = delta_covering_profile(&ps, scales, &r.opts.guard)?;
                r.report.delta_profile = Some(p.entries().to_vec());
                write_profile(&p, &out.join("profile_delta.csv"))?;
                Ok(p)
            })?),
        };
        self.stage("verify", |r| {
            for check in &spec.checks {
                let res = run_check(check, &ps, &set, delta.as_ref(), spec, seed, &r.opts.guard)?;
                r.report.checks.push(res);
            }
            Ok(())
        })
    }
}

/// Runs the pipeline and writes `points.csv`, `profile_set.csv`,
/// `profile_delta.csv` and `report.json` to the spec's `out_dir`.
///
/// On a stage error the outputs produced so far, including a report with
/// its `error` field set, are still written before the error is returned.
pub fn run_experiment(spec: &ExperimentSpec, opts: &RunOptions) -> Result<Report> {
    let seed = opts.seed.unwrap_or(spec.seed);
    let incidence = spec
        .checks
        .iter()
        .filter_map(|c| match c {
            Check::Incidence { seed: s, .. } => Some(s.unwrap_or(seed)),
            _ => None,
        })
        .collect();
    let mut run = Run {
        spec,
        opts,
        report: Report {
            name: spec.name.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            spec: spec.clone(),
            seeds: Seeds {
                experiment: seed,
                generator: spec.generator.kind.seed(seed),
                incidence,
            },
            points: None,
            set_profile: None,
            delta_profile: None,
            checks: Vec::new(),
            pass: false,
            error: None,
            timing: BTreeMap::new(),
        },
    };
    let result = run.pipeline();
    let mut report = run.report;
    report.pass = result.is_ok() && report.checks.iter().all(|c| c.pass);
    if let Err(e) = &result {
        report.error = Some(e.to_string());
    }
    let path = spec.out_dir.join("report.json");
    let mut w = crate::formats::create(&path)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    use std::io::Write;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&path, e))?;
    result.map(|_| report)
}
