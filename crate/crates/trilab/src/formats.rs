//! Plain-text file formats.
//!
//! **Points** are CSV without a header, one point per row, one column per
//! coordinate; the first row fixes the dimension. `#` starts a comment
//! line and blank lines are skipped. Coordinates are written with Rust's
//! shortest round-trip float formatting, so write-then-read is lossless.
//!
//! **Profiles** are CSV with the header `scale,count`.
//!
//! **IFS specs** are a header line `dim=<n> depth=<k> seed=<c1>[,<c2>[,<c3>]]`
//! followed by one map per line, `ratio t1 [t2 [t3]]`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use trilab_core::config::SignatureSet;
use trilab_core::generators::{IfsSpec, SimilarityMap};
use trilab_core::grid::CoveringProfile;
use trilab_core::point::PointSet;

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::io(path, e))?;
    Ok(s)
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn field(origin: &str, line: u64, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(origin, line, format!("`{s}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(origin, line, format!("`{s}` is not finite")))
    }
}

/// Numeric CSV rows with their line numbers; blank rows are dropped.
pub(crate) fn numeric_rows(
    origin: &str,
    text: &str,
    first_line: u64,
) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut out = Vec::new();
    for rec in reader(text).records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line()) + first_line - 1;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec
            .iter()
            .map(|s| field(origin, line, s))
            .collect::<Result<Vec<_>>>()?;
        out.push((line, row));
    }
    Ok(out)
}

pub fn parse_points(origin: &str, text: &str) -> Result<PointSet> {
    let rows = numeric_rows(origin, text, 1)?;
    let Some((_, first)) = rows.first() else {
        return Err(Error::parse(origin, 1, "no points"));
    };
    let dim = first.len();
    let mut ps = PointSet::new(dim).map_err(|e| Error::parse(origin, rows[0].0, e.to_string()))?;
    for (line, row) in &rows {
        if row.len() != dim {
            return Err(Error::parse(
                origin,
                *line,
                format!("expected {dim} coordinates, found {}", row.len()),
            ));
        }
        ps.push(row)?;
    }
    Ok(ps)
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    parse_points(&path.display().to_string(), &read_text(path)?)
}

pub fn write_points_to(ps: &PointSet, out: &mut impl Write) -> std::io::Result<()> {
    if let Some(l) = ps.label() {
        writeln!(out, "# {l}")?;
    }
    for p in ps.iter() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_points(ps: &PointSet, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_points_to(ps, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_profile(p: &CoveringProfile, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["scale", "count"])?;
    for (s, n) in p.entries() {
        w.write_record([s.to_string(), n.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn parse_profile(origin: &str, text: &str) -> Result<CoveringProfile> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["scale", "count"] {
        return Err(Error::parse(origin, 1, "expected the header `scale,count`"));
    }
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::parse(origin, line, "expected two columns"));
        }
        let scale = field(origin, line, &rec[0])?;
        let count = rec[1]
            .parse::<usize>()
            .map_err(|_| Error::parse(origin, line, format!("`{}` is not a count", &rec[1])))?;
        entries.push((scale, count));
    }
    Ok(CoveringProfile::new(entries)?)
}

pub fn read_profile(path: &Path) -> Result<CoveringProfile> {
    parse_profile(&path.display().to_string(), &read_text(path)?)
}

/// Signature rows `d1,…,dm`: sorted distances (exact sets) or lower cell
/// corners `index·quant` (quantized sets).
pub fn write_signatures(set: &SignatureSet, path: &Path) -> Result<()> {
    let m = set.k() * (set.k() - 1) / 2;
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record((1..=m).map(|i| format!("d{i}")))?;
    for s in set.signatures() {
        w.write_record(s.dists().iter().map(|d| d.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Ordered tuples, one per row, in the same column layout.
pub fn write_tuples(tuples: &[Vec<f64>], k: usize, path: &Path) -> Result<()> {
    let m = k * (k - 1) / 2;
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record((1..=m).map(|i| format!("r{i}")))?;
    for t in tuples {
        w.write_record(t.iter().map(|d| d.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn parse_ifs(origin: &str, text: &str) -> Result<IfsSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "missing header"))?;
    let (mut dim, mut depth, mut seed) = (None, None, None);
    for kv in header.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::parse(origin, hl, format!("`{kv}` is not key=value")))?;
        match k {
            "dim" => {
                dim = Some(
                    v.parse::<usize>()
                        .map_err(|_| Error::parse(origin, hl, "bad dim"))?,
                )
            }
            "depth" => {
                depth = Some(
                    v.parse::<u32>()
                        .map_err(|_| Error::parse(origin, hl, "bad depth"))?,
                )
            }
            "seed" => {
                seed = Some(
                    v.split(',')
                        .map(|c| field(origin, hl, c.trim()))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => return Err(Error::parse(origin, hl, format!("unknown key `{k}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::parse(origin, hl, "missing dim"))?;
    let depth = depth.ok_or_else(|| Error::parse(origin, hl, "missing depth"))?;
    let seed_point = seed.unwrap_or_else(|| vec![0.0; dim]);
    let mut maps = Vec::new();
    for (line, l) in lines {
        let nums = l
            .split_whitespace()
            .map(|s| field(origin, line, s))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() != dim + 1 {
            return Err(Error::parse(
                origin,
                line,
                format!("expected a ratio and {dim} translation components"),
            ));
        }
        maps.push(SimilarityMap {
            ratio: nums[0],
            translation: nums[1..].to_vec(),
        });
    }
    let spec = IfsSpec {
        dim,
        maps,
        depth,
        seed_point,
    };
    spec.validate()
        .map_err(|e| Error::parse(origin, hl, e.to_string()))?;
    Ok(spec)
}

pub fn format_ifs(spec: &IfsSpec) -> String {
    let seed: Vec<String> = spec.seed_point.iter().map(|x| x.to_string()).collect();
    let mut s = format!(
        "dim={} depth={} seed={}\n",
        spec.dim,
        spec.depth,
        seed.join(",")
    );
    for m in &spec.maps {
        s.push_str(&m.ratio.to_string());
        for t in &m.translation {
            s.push(' ');
            s.push_str(&t.to_string());
        }
        s.push('\n');
    }
    s
}
