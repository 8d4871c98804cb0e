//! JSON and CSV encodings of matrices, polygons, certificates and
//! formulations. Rationals are written as canonical "p/q" strings.

use serde_json::{json, Map, Value};

use nnrank::exact::{format_scalar, parse_scalar};
use nnrank::nmf::{Axis, Method, TraceEntry};
use nnrank::{ExtendedFormulation, Matrix, NNFactorization, Scalar, VerificationReport};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

type Parsed<T> = Result<T, ParseError>;

fn err<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(ParseError(msg.into()))
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

pub fn scalar_from_json(v: &Value, what: &str) -> Parsed<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return err(format!("{what}: expected a rational string, got {v}")),
    };
    parse_scalar(&text).map_err(|e| ParseError(format!("{what}: {}", e.0)))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Parsed<&'a Value> {
    obj.get(key)
        .ok_or_else(|| ParseError(format!("{what}: missing \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| ParseError(format!("{what}: expected an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| ParseError(format!("{what}: expected an array")))
}

fn as_count(v: &Value, what: &str) -> Parsed<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| ParseError(format!("{what}: expected a nonnegative integer")))
}

fn scalars(v: &Value, what: &str) -> Parsed<Vec<Scalar>> {
    as_array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(x, &format!("{what}[{i}]")))
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let entries: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(scalar_to_json).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn matrix_from_json(v: &Value, what: &str) -> Parsed<Matrix> {
    let obj = as_object(v, what)?;
    let rows = as_count(field(obj, "rows", what)?, &format!("{what}.rows"))?;
    let cols = as_count(field(obj, "cols", what)?, &format!("{what}.cols"))?;
    let entries = as_array(field(obj, "entries", what)?, &format!("{what}.entries"))?;
    if entries.len() != rows {
        return err(format!(
            "{what}: {} entry rows for {rows} rows",
            entries.len()
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in entries.iter().enumerate() {
        let row = scalars(row, &format!("{what}.entries[{i}]"))?;
        if row.len() != cols {
            return err(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            ));
        }
        data.extend(row);
    }
    Matrix::from_vec(rows, cols, data).map_err(|e| ParseError(e.to_string()))
}

/// Comma-separated rows; blank lines and lines starting with `#` are
/// skipped.
pub fn matrix_from_csv(text: &str) -> Parsed<Matrix> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| {
                parse_scalar(t.trim()).map_err(|e| ParseError(format!("line {}: {}", ln + 1, e.0)))
            })
            .collect::<Parsed<Vec<Scalar>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return err("CSV input has no rows");
    }
    Matrix::from_rows(rows).map_err(|e| ParseError(e.to_string()))
}

#[cfg(test)]
pub fn matrix_to_csv(m: &Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_scalar).collect::<Vec<_>>().join(","))
        .map(|l| l + "\n")
        .collect()
}

pub fn points_from_json(v: &Value) -> Parsed<Vec<(Scalar, Scalar)>> {
    let obj = as_object(v, "polygon")?;
    as_array(field(obj, "vertices", "polygon")?, "polygon.vertices")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let what = format!("polygon.vertices[{i}]");
            match scalars(p, &what)?.as_slice() {
                [x, y] => Ok((x.clone(), y.clone())),
                _ => err(format!("{what}: expected two coordinates")),
            }
        })
        .collect()
}

#[cfg(test)]
pub fn points_to_json(points: &[(Scalar, Scalar)]) -> Value {
    let vertices: Vec<Value> = points
        .iter()
        .map(|(x, y)| json!([scalar_to_json(x), scalar_to_json(y)]))
        .collect();
    json!({ "vertices": vertices })
}

fn method_to_json(m: &Method, obj: &mut Map<String, Value>) {
    obj.insert("method".into(), json!(m.name()));
    match *m {
        Method::Identity => {}
        Method::LowRank { rank } => {
            obj.insert("rank".into(), json!(rank));
        }
        Method::Section { vertices } => {
            obj.insert("vertices".into(), json!(vertices));
        }
        Method::Heptagon { steps, reversed } => {
            obj.insert("steps".into(), json!(steps));
            obj.insert("reversed".into(), json!(reversed));
        }
    }
}

fn method_from_json(obj: &Map<String, Value>, what: &str) -> Parsed<Method> {
    let name = field(obj, "method", what)?.as_str().unwrap_or_default();
    let count = |key: &str| as_count(field(obj, key, what)?, &format!("{what}.{key}"));
    Ok(match name {
        "identity" => Method::Identity,
        "low-rank" => Method::LowRank {
            rank: count("rank")?,
        },
        "section" => Method::Section {
            vertices: count("vertices")?,
        },
        "heptagon" => Method::Heptagon {
            steps: count("steps")?,
            reversed: field(obj, "reversed", what)?
                .as_bool()
                .ok_or_else(|| ParseError(format!("{what}.reversed: expected a boolean")))?,
        },
        other => return err(format!("{what}: unknown method \"{other}\"")),
    })
}

pub fn report_to_json(r: &VerificationReport) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|c| json!({ "check": c.name, "passed": c.passed, "detail": c.detail }))
            .collect(),
    )
}

pub fn certificate_to_json(f: &NNFactorization, report: Option<&VerificationReport>) -> Value {
    let trace: Vec<Value> = f
        .trace
        .iter()
        .map(|t| {
            let mut obj = Map::new();
            obj.insert("axis".into(), json!(t.axis.name()));
            obj.insert("indices".into(), json!(t.indices));
            obj.insert("inner_dim".into(), json!(t.inner_dim));
            method_to_json(&t.method, &mut obj);
            Value::Object(obj)
        })
        .collect();
    let mut out = json!({
        "left": matrix_to_json(&f.left),
        "right": matrix_to_json(&f.right),
        "inner_dim": f.inner_dim,
        "bound": f.bound,
        "trace": trace,
    });
    if let Some(r) = report {
        out["report"] = report_to_json(r);
    }
    out
}

pub fn certificate_from_json(v: &Value) -> Parsed<NNFactorization> {
    let what = "certificate";
    let obj = as_object(v, what)?;
    let trace = as_array(field(obj, "trace", what)?, "certificate.trace")?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let what = format!("certificate.trace[{i}]");
            let t = as_object(t, &what)?;
            let axis = match field(t, "axis", &what)?.as_str() {
                Some("rows") => Axis::Rows,
                Some("cols") => Axis::Cols,
                _ => return err(format!("{what}.axis: expected \"rows\" or \"cols\"")),
            };
            let indices = as_array(field(t, "indices", &what)?, &what)?
                .iter()
                .map(|x| as_count(x, &format!("{what}.indices")))
                .collect::<Parsed<Vec<usize>>>()?;
            Ok(TraceEntry {
                axis,
                indices,
                inner_dim: as_count(field(t, "inner_dim", &what)?, &what)?,
                method: method_from_json(t, &what)?,
            })
        })
        .collect::<Parsed<Vec<TraceEntry>>>()?;
    Ok(NNFactorization {
        left: matrix_from_json(field(obj, "left", what)?, "certificate.left")?,
        right: matrix_from_json(field(obj, "right", what)?, "certificate.right")?,
        inner_dim: as_count(field(obj, "inner_dim", what)?, "certificate.inner_dim")?,
        bound: as_count(field(obj, "bound", what)?, "certificate.bound")?,
        trace,
    })
}

pub fn formulation_to_json(ef: &ExtendedFormulation, report: Option<&VerificationReport>) -> Value {
    let mut out = json!({
        "k": ef.k,
        "T": matrix_to_json(&ef.t),
        "C": matrix_to_json(&ef.c),
        "beta": Value::Array(ef.beta.iter().map(scalar_to_json).collect()),
        "lifts": matrix_to_json(&ef.lifts),
    });
    if let Some(r) = report {
        out["report"] = report_to_json(r);
    }
    out
}

pub fn formulation_from_json(v: &Value) -> Parsed<ExtendedFormulation> {
    let what = "formulation";
    let obj = as_object(v, what)?;
    Ok(ExtendedFormulation {
        k: as_count(field(obj, "k", what)?, "formulation.k")?,
        t: matrix_from_json(field(obj, "T", what)?, "formulation.T")?,
        c: matrix_from_json(field(obj, "C", what)?, "formulation.C")?,
        beta: scalars(field(obj, "beta", what)?, "formulation.beta")?,
        lifts: matrix_from_json(field(obj, "lifts", what)?, "formulation.lifts")?,
    })
}
