//! Incidence instance files.
//!
//! A `key = value` parameter header (`r1 r2 gamma delta alpha beta`), then
//! three CSV blocks:
//!
//! ```text
//! r1 = 20
//! r2 = 30
//! gamma = 0.1
//! delta = 0.0625
//! alpha = 0
//! beta = 0.5
//! [centers]
//! 0,0
//! [c1]
//! 0,20,0
//! [c2]
//! 0,30,0
//! ```
//!
//! Rows of `[c1]` and `[c2]` are `center_index,x,y`. `alpha` and `beta`
//! default to 0 when absent.

use std::fmt::Write as _;
use std::path::Path;

use trilab_core::lab::IncidenceInstance;
use trilab_core::point::PointSet;

use crate::error::{Error, Result};
use crate::formats::{numeric_rows, read_text};

#[derive(Clone, Copy, PartialEq)]
enum Block {
    Header,
    Centers,
    C1,
    C2,
}

fn block_rows(origin: &str, lines: &[(u64, &str)]) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut out = Vec::new();
    for &(line, l) in lines {
        out.extend(numeric_rows(origin, l, line)?);
    }
    Ok(out)
}

pub fn parse_incidence(origin: &str, text: &str) -> Result<IncidenceInstance> {
    let mut block = Block::Header;
    let mut seen = [false; 3];
    let mut params: [Option<f64>; 6] = [None; 6];
    let names = ["r1", "r2", "gamma", "delta", "alpha", "beta"];
    let mut bodies: [Vec<(u64, &str)>; 3] = Default::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(name) = l.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let (b, slot) = match name.trim() {
                "centers" => (Block::Centers, 0),
                "c1" => (Block::C1, 1),
                "c2" => (Block::C2, 2),
                other => {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!("unknown block `[{other}]`"),
                    ))
                }
            };
            if seen[slot] {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("duplicate block `[{name}]`"),
                ));
            }
            seen[slot] = true;
            block = b;
            continue;
        }
        match block {
            Block::Header => {
                let (k, v) = l
                    .split_once('=')
                    .ok_or_else(|| Error::parse(origin, line, "expected `key = value`"))?;
                let k = k.trim();
                let slot = names.iter().position(|n| *n == k).ok_or_else(|| {
                    Error::parse(origin, line, format!("unknown parameter `{k}`"))
                })?;
                let v: f64 = v.trim().parse().map_err(|_| {
                    Error::parse(origin, line, format!("`{}` is not a number", v.trim()))
                })?;
                params[slot] = Some(v);
            }
            Block::Centers => bodies[0].push((line, l)),
            Block::C1 => bodies[1].push((line, l)),
            Block::C2 => bodies[2].push((line, l)),
        }
    }
    for (name, p) in names.iter().zip(&params).take(4) {
        if p.is_none() {
            return Err(Error::parse(
                origin,
                1,
                format!("missing parameter `{name}`"),
            ));
        }
    }
    if !seen[0] {
        return Err(Error::parse(origin, 1, "missing `[centers]` block"));
    }

    let mut centers = PointSet::new(2)?;
    for (line, row) in block_rows(origin, &bodies[0])? {
        if row.len() != 2 {
            return Err(Error::parse(origin, line, "centre rows are `x,y`"));
        }
        centers.push(&row)?;
    }
    let n = centers.len();
    let mut circles = vec![(PointSet::new(2)?, PointSet::new(2)?); n];
    for (which, body) in bodies[1..].iter().enumerate() {
        for (line, row) in block_rows(origin, body)? {
            let idx = row[0];
            if row.len() != 3 || idx.fract() != 0.0 || idx < 0.0 || idx as usize >= n {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("circle rows are `center_index,x,y` with an index below {n}"),
                ));
            }
            let c = &mut circles[idx as usize];
            let set = if which == 0 { &mut c.0 } else { &mut c.1 };
            set.push(&row[1..])?;
        }
    }
    let p = params.map(|v| v.unwrap_or(0.0));
    Ok(IncidenceInstance {
        r1: p[0],
        r2: p[1],
        gamma: p[2],
        delta: p[3],
        alpha: p[4],
        beta: p[5],
        centers,
        circles,
    })
}

pub fn read_incidence(path: &Path) -> Result<IncidenceInstance> {
    parse_incidence(&path.display().to_string(), &read_text(path)?)
}

pub fn format_incidence(inst: &IncidenceInstance) -> String {
    let mut s = String::new();
    let params = [
        ("r1", inst.r1),
        ("r2", inst.r2),
        ("gamma", inst.gamma),
        ("delta", inst.delta),
        ("alpha", inst.alpha),
        ("beta", inst.beta),
    ];
    for (k, v) in params {
        let _ = writeln!(s, "{k} = {v}");
    }
    s.push_str("[centers]\n");
    for c in inst.centers.iter() {
        let _ = writeln!(s, "{},{}", c[0], c[1]);
    }
    for (name, pick) in [("c1", 0), ("c2", 1)] {
        let _ = writeln!(s, "[{name}]");
        for (i, (a, b)) in inst.circles.iter().enumerate() {
            for p in if pick == 0 { a } else { b }.iter() {
                let _ = writeln!(s, "{i},{},{}", p[0], p[1]);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use trilab_core::lab::{gen_incidence, IncidenceParams};

    #[test]
    fn round_trip() {
        let inst = gen_incidence(&IncidenceParams {
            r1: 20.0,
            r2: 30.0,
            gamma: 0.1,
            delta: 1.0 / 32.0,
            alpha: 0.5,
            beta: 0.5,
            seed: 4,
        })
        .unwrap();
        let text = format_incidence(&inst);
        assert_eq!(parse_incidence("i", &text).unwrap(), inst);
    }

    #[test]
    fn errors() {
        let ok = "r1=1\nr2=2\ngamma=0.1\ndelta=0.5\n[centers]\n0,0\n[c1]\n0,1,0\n";
        let inst = parse_incidence("i", ok).unwrap();
        assert_eq!(inst.circles[0].0.len(), 1);
        assert!(inst.circles[0].1.is_empty());
        let e = parse_incidence("i", &ok.replace("0,1,0", "1,1,0")).unwrap_err();
        assert!(e.to_string().starts_with("i:8:"), "{e}");
        assert!(parse_incidence("i", &ok.replace("r1=1\n", "")).is_err());
        assert!(parse_incidence("i", &ok.replace("[c1]", "[c3]")).is_err());
        assert!(parse_incidence("i", "r1=1\nr2=2\ngamma=0.1\ndelta=0.5\n").is_err());
    }
}
