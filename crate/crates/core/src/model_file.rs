//! Line-oriented sectioned model files.
//!
//! ```text
//! [model]
//! name = "sample"
//! coordinates = "x1 x2 x3"
//! parameters = "a1 a2"
//!
//! [varpi]
//! x1.x2 = "x3"
//!
//! [theta]
//! x1.x2 = "a1"
//!
//! [liealg]
//! generators = "t1 t2"
//! c.t1.t2.t1 = "1"
//!
//! [action]
//! type = "hamilton"
//! t1 = "x1*x2"
//! ```
//!
//! Bivector entries are keyed by ordered coordinate pairs; the lower
//! triangle is the antisymmetric completion and unspecified pairs are
//! zero. `#` starts a comment outside quotes. For a vector-field
//! action set `type = "vectorfield"` and give components as
//! `ta.xi = "expr"`, with missing components zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gallery::ModelBundle;
use crate::parser::{parse_expression, parse_rational};
use crate::poisson::PoissonModel;
use crate::polynomial::Polynomial;
use crate::symmetry::{ActionSpec, LieAlgebra};

fn file_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::ModelFile {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn split_sections(file: &str, text: &str) -> Result<Vec<(String, Vec<Entry>)>> {
    let mut sections: Vec<(String, Vec<Entry>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut stripped = String::new();
        let mut in_quotes = false;
        for c in raw.chars() {
            if c == '"' {
                in_quotes = !in_quotes;
            }
            if c == '#' && !in_quotes {
                break;
            }
            stripped.push(c);
        }
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| file_err(file, line, "unterminated section header"))?;
            sections.push((name.trim().to_string(), Vec::new()));
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| file_err(file, line, "expected `key = \"value\"`"))?;
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .ok_or_else(|| file_err(file, line, "value must be double-quoted"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| file_err(file, line, "entry before any section header"))?;
        section.1.push(Entry {
            line,
            key: key.trim().to_string(),
            value: value.to_string(),
        });
    }
    Ok(sections)
}

fn name_list(value: &str) -> Vec<String> {
    value.split_whitespace().map(String::from).collect()
}

/// Parse a model bundle from file text. `file` labels error messages.
pub fn load_model_str(file: &str, text: &str) -> Result<ModelBundle> {
    let sections = split_sections(file, text)?;
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, _) in &sections {
        match name.as_str() {
            "model" | "varpi" | "theta" | "liealg" | "action" => {
                *seen.entry(name.as_str()).or_insert(0) += 1;
            }
            other => {
                return Err(file_err(file, 0, format!("unknown section `[{other}]`")));
            }
        }
    }
    for (name, count) in &seen {
        if *count > 1 {
            return Err(file_err(file, 0, format!("duplicate section `[{name}]`")));
        }
    }
    let section = |name: &str| -> Option<&Vec<Entry>> {
        sections.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    };
    let model_sec =
        section("model").ok_or_else(|| file_err(file, 0, "missing `[model]` section"))?;

    let mut model_name = String::from("model");
    let mut coords: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut declared_dim: Option<usize> = None;
    for e in model_sec {
        match e.key.as_str() {
            "name" => model_name = e.value.clone(),
            "coordinates" => coords = name_list(&e.value),
            "parameters" => params = name_list(&e.value),
            "dimension" => {
                declared_dim = Some(
                    e.value
                        .trim()
                        .parse()
                        .map_err(|_| file_err(file, e.line, "dimension must be an integer"))?,
                )
            }
            other => {
                return Err(file_err(file, e.line, format!("unknown model key `{other}`")));
            }
        }
    }
    if coords.is_empty() {
        return Err(file_err(file, 0, "no coordinates declared"));
    }
    if let Some(d) = declared_dim {
        if d != coords.len() {
            return Err(file_err(
                file,
                0,
                format!("dimension {d} does not match {} coordinates", coords.len()),
            ));
        }
    }

    let vars = crate::polynomial::VariableSet::new(coords.clone(), params.clone());
    let coord_index = |file: &str, line: usize, name: &str| -> Result<usize> {
        coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| file_err(file, line, format!("unknown coordinate `{name}`")))
    };
    let read_bivector = |name: &str| -> Result<Option<Vec<(usize, usize, Polynomial)>>> {
        let Some(entries) = section(name) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for e in entries {
            let (a, b) = e
                .key
                .split_once('.')
                .ok_or_else(|| file_err(file, e.line, "expected key `xi.xj`"))?;
            let i = coord_index(file, e.line, a.trim())?;
            let j = coord_index(file, e.line, b.trim())?;
            if i == j {
                return Err(file_err(file, e.line, "diagonal bivector entry"));
            }
            let p = parse_expression(&e.value, &vars)
                .map_err(|err| file_err(file, e.line, err.to_string()))?;
            out.push((i, j, p));
        }
        Ok(Some(out))
    };
    let varpi = read_bivector("varpi")?.unwrap_or_default();
    let theta = read_bivector("theta")?;
    let model = PoissonModel::new(model_name, coords.clone(), params, &varpi, theta.as_deref())
        .map_err(|err| file_err(file, 0, err.to_string()))?;

    let mut gen_names: Vec<String> = Vec::new();
    let mut constants: Vec<(usize, usize, usize, crate::rational::Rational)> = Vec::new();
    if let Some(entries) = section("liealg") {
        for e in entries {
            if e.key == "generators" {
                gen_names = name_list(&e.value);
                continue;
            }
            let parts: Vec<&str> = e.key.split('.').collect();
            if parts.len() != 4 || parts[0] != "c" {
                return Err(file_err(file, e.line, "expected key `c.ta.tb.tc`"));
            }
            let idx = |name: &str| -> Result<usize> {
                gen_names
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| file_err(file, e.line, format!("unknown generator `{name}`")))
            };
            let (a, b, c) = (idx(parts[1])?, idx(parts[2])?, idx(parts[3])?);
            let v = parse_rational(&e.value)
                .map_err(|err| file_err(file, e.line, err.to_string()))?;
            constants.push((a, b, c, v));
        }
    }
    let liealg = LieAlgebra::new(gen_names.clone(), &constants);

    let mut action_type = String::from("hamilton");
    let mut hamilton: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut vf: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    if let Some(entries) = section("action") {
        for e in entries {
            if e.key == "type" {
                action_type = e.value.clone();
                continue;
            }
            let p = parse_expression(&e.value, &vars)
                .map_err(|err| file_err(file, e.line, err.to_string()))?;
            let gen_idx = |name: &str| -> Result<usize> {
                gen_names
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| file_err(file, e.line, format!("unknown generator `{name}`")))
            };
            if let Some((g, x)) = e.key.split_once('.') {
                let a = gen_idx(g.trim())?;
                let i = coord_index(file, e.line, x.trim())?;
                vf.insert((a, i), p);
            } else {
                hamilton.insert(gen_idx(e.key.as_str())?, p);
            }
        }
    }
    let m = gen_names.len();
    let action = match action_type.as_str() {
        "hamilton" => {
            if !vf.is_empty() {
                return Err(file_err(file, 0, "component keys in a hamilton action"));
            }
            let mut hs = Vec::with_capacity(m);
            for a in 0..m {
                let h = hamilton.remove(&a).ok_or_else(|| {
                    file_err(file, 0, format!("no action entry for `{}`", gen_names[a]))
                })?;
                hs.push(h);
            }
            ActionSpec::Hamilton(hs)
        }
        "vectorfield" => {
            if !hamilton.is_empty() {
                return Err(file_err(file, 0, "scalar keys in a vectorfield action"));
            }
            let mut vs = Vec::with_capacity(m);
            for a in 0..m {
                let mut elem = crate::super_poly::SuperPolynomial::zero(model.table());
                for (i, y) in model.y_names().iter().enumerate() {
                    let Some(p) = vf.remove(&(a, i)) else { continue };
                    let comp = model.lift(&p)?;
                    let ygen = crate::super_poly::SuperPolynomial::generator(model.table(), y)?;
                    elem = elem.add(&comp.mul(&ygen)?)?;
                }
                vs.push(elem);
            }
            ActionSpec::PoissonVF(vs)
        }
        other => {
            return Err(file_err(file, 0, format!("unknown action type `{other}`")));
        }
    };

    Ok(ModelBundle {
        model,
        liealg,
        action,
    })
}

pub fn load_model(path: &Path) -> Result<ModelBundle> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    load_model_str(&path.display().to_string(), &text)
}

/// Deterministic text form; load_model_str of the output reproduces
/// the bundle.
pub fn serialize_model(bundle: &ModelBundle) -> String {
    let mut out = String::new();
    let model = &bundle.model;
    writeln!(out, "[model]").unwrap();
    writeln!(out, "name = \"{}\"", model.name()).unwrap();
    writeln!(out, "dimension = \"{}\"", model.dimension()).unwrap();
    writeln!(out, "coordinates = \"{}\"", model.coords().join(" ")).unwrap();
    if !model.params().is_empty() {
        writeln!(out, "parameters = \"{}\"", model.params().join(" ")).unwrap();
    }
    let write_bivector = |out: &mut String, header: &str, m: &Vec<Vec<Polynomial>>| {
        writeln!(out, "\n[{header}]").unwrap();
        for i in 0..model.dimension() {
            for j in (i + 1)..model.dimension() {
                if m[i][j].is_zero() {
                    continue;
                }
                writeln!(
                    out,
                    "{}.{} = \"{}\"",
                    model.coords()[i],
                    model.coords()[j],
                    m[i][j]
                )
                .unwrap();
            }
        }
    };
    write_bivector(&mut out, "varpi", model.varpi_matrix());
    if let Some(theta) = model.theta_matrix() {
        write_bivector(&mut out, "theta", theta);
    }
    let l = &bundle.liealg;
    writeln!(out, "\n[liealg]").unwrap();
    writeln!(out, "generators = \"{}\"", l.names().join(" ")).unwrap();
    for a in 0..l.dimension() {
        for b in 0..l.dimension() {
            for c in 0..l.dimension() {
                let v = l.structure_constant(a, b, c);
                if v.is_zero() {
                    continue;
                }
                writeln!(
                    out,
                    "c.{}.{}.{} = \"{}\"",
                    l.names()[a],
                    l.names()[b],
                    l.names()[c],
                    v
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "\n[action]").unwrap();
    match &bundle.action {
        ActionSpec::Hamilton(hs) => {
            writeln!(out, "type = \"hamilton\"").unwrap();
            for (a, h) in hs.iter().enumerate() {
                writeln!(out, "{} = \"{}\"", l.names()[a], h).unwrap();
            }
        }
        ActionSpec::PoissonVF(vs) => {
            writeln!(out, "type = \"vectorfield\"").unwrap();
            for (a, v) in vs.iter().enumerate() {
                for i in 0..model.dimension() {
                    let comp = model.component(v, &[i]).expect("vector field component");
                    if comp.is_zero() {
                        continue;
                    }
                    writeln!(
                        out,
                        "{}.{} = \"{}\"",
                        l.names()[a],
                        model.coords()[i],
                        comp
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}
