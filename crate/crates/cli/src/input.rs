//! Worldsheet input files: chains as weighted simplices, field
//! configurations as semicolon-separated form components.

use std::path::Path;
use std::sync::Arc;

use psigma_core::worldsheet::{worldsheet_vars, DeRhamSuperfield, FieldConfiguration, Superchain};
use psigma_core::{
    parse_expression, parse_rational, Error, OperationContext, Polynomial, Rational, Result,
    VariableSet,
};

fn io_err(msg: String) -> Error {
    Error::Io(msg)
}

/// Chain file: one simplex per line,
///
/// ```text
/// point 1 0 0
/// segment 1 0 0 1 1/2
/// triangle -2 0 0 1 0 0 1
/// ```
///
/// The first token names the simplex kind, the second is an integer
/// weight, the rest are rational vertex coordinates.
pub fn parse_chain(file: &str, text: &str) -> Result<Superchain> {
    let mut chain = Superchain::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let mut tok = stripped.split_whitespace();
        let kind = tok.next().unwrap();
        let fail = |msg: &str| io_err(format!("{file}:{line}: {msg}"));
        let weight: i64 = tok
            .next()
            .ok_or_else(|| fail("missing weight"))?
            .parse()
            .map_err(|_| fail("weight must be an integer"))?;
        let coords: Vec<Rational> = tok
            .map(parse_rational)
            .collect::<Result<_>>()
            .map_err(|e| fail(&e.to_string()))?;
        let vertex = |k: usize| [coords[2 * k].clone(), coords[2 * k + 1].clone()];
        match (kind, coords.len()) {
            ("point", 2) => chain = chain.point(weight, vertex(0)),
            ("segment", 4) => chain = chain.segment(weight, vertex(0), vertex(1)),
            ("triangle", 6) => {
                chain = chain.triangle(weight, vertex(0), vertex(1), vertex(2))
            }
            ("point" | "segment" | "triangle", _) => {
                return Err(fail("wrong number of coordinates"))
            }
            _ => return Err(fail("expected point, segment or triangle")),
        }
    }
    Ok(chain)
}

pub fn load_chain(path: &Path) -> Result<Superchain> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(e.to_string()))?;
    parse_chain(&path.display().to_string(), &text)
}

/// Parse `p0 ; p1_1 ; p1_2 ; p2` into a superfield of the given
/// degree; trailing components may be omitted and default to zero.
pub fn parse_superfield(
    text: &str,
    degree: i64,
    vars: &Arc<VariableSet>,
) -> Result<DeRhamSuperfield> {
    let mut parts: Vec<Polynomial> = text
        .split(';')
        .map(|s| parse_expression(s.trim(), vars))
        .collect::<Result<_>>()?;
    if parts.len() > 4 {
        return Err(io_err("a superfield has at most 4 components".into()));
    }
    while parts.len() < 4 {
        parts.push(Polynomial::zero(vars));
    }
    let p2 = parts.pop().unwrap();
    let p12 = parts.pop().unwrap();
    let p11 = parts.pop().unwrap();
    let p0 = parts.pop().unwrap();
    Ok(DeRhamSuperfield::from_components(degree, p0, [p11, p12], p2))
}

/// Configuration file: lines `name = "components"` assigning
/// superfields to base generators and parameters; everything not
/// mentioned stays zero.
pub fn parse_config(
    file: &str,
    text: &str,
    ctx: &OperationContext,
) -> Result<FieldConfiguration> {
    let vars = worldsheet_vars();
    let mut cfg = FieldConfiguration::zeros(ctx, &vars);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let fail = |msg: &str| io_err(format!("{file}:{line}: {msg}"));
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| fail("expected `name = \"components\"`"))?;
        let name = key.trim();
        let value = value
            .trim()
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .ok_or_else(|| fail("value must be double-quoted"))?;
        let table = ctx.table();
        let degree = table
            .index_of(name)
            .map(|i| i64::from(table.degree_of(i)))
            .ok_or_else(|| fail(&format!("unknown generator `{name}`")))?;
        let psi =
            parse_superfield(value, degree, &vars).map_err(|e| fail(&e.to_string()))?;
        cfg.assign(name, psi);
    }
    Ok(cfg)
}

pub fn load_config(path: &Path, ctx: &OperationContext) -> Result<FieldConfiguration> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(e.to_string()))?;
    parse_config(&path.display().to_string(), &text, ctx)
}
