//! Scale-ladder syntax for the command line and spec files.
//!
//! A ladder is a comma-separated list of items, each one of
//!
//! * a decimal `0.125`,
//! * a fraction `1/27`,
//! * a power `3^-2`,
//! * a power range `3^-1..-5`, expanding to `3^-1, 3^-2, …, 3^-5`.

use trilab_core::grid::validate_scales;

use crate::error::{Error, Result};

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid("scale", format!("`{s}` is not a number")))
}

fn exponent(s: &str) -> Result<i32> {
    s.trim()
        .parse::<i32>()
        .map_err(|_| Error::invalid("scale", format!("`{s}` is not an integer exponent")))
}

fn item(s: &str, out: &mut Vec<f64>) -> Result<()> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let b = number(base)?;
        if let Some((from, to)) = exp.split_once("..") {
            let (from, to) = (exponent(from)?, exponent(to)?);
            let step = if to >= from { 1 } else { -1 };
            let mut e = from;
            loop {
                out.push(b.powi(e));
                if e == to {
                    break;
                }
                e += step;
            }
        } else {
            out.push(b.powi(exponent(exp)?));
        }
    } else if let Some((num, den)) = s.split_once('/') {
        out.push(number(num)? / number(den)?);
    } else {
        out.push(number(s)?);
    }
    Ok(())
}

/// Parses and validates a ladder (nonempty, positive, strictly decreasing).
pub fn parse_scales(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        item(part, &mut out)?;
    }
    validate_scales(&out)?;
    Ok(out)
}
