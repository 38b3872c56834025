//! Input document schema: parsing, validation (reporting every violation,
//! not just the first), and the canonical serializer.

use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frames::LieFrameSpec;
use crate::linalg::Matrix;
use crate::scalar::{parse_polynomial, rational, Polynomial, Rational, ScalarField};
use crate::tensor::{Chart, Symmetry, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Tensor11,
    Form,
    Sym02,
    Sym20,
    Bivector,
    LieAlgebra,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Tensor11 => "tensor11",
            Kind::Form => "form",
            Kind::Sym02 => "sym02",
            Kind::Sym20 => "sym20",
            Kind::Bivector => "bivector",
            Kind::LieAlgebra => "lie_algebra",
        }
    }

    fn from_str(s: &str) -> Option<Kind> {
        Some(match s {
            "tensor11" => Kind::Tensor11,
            "form" => Kind::Form,
            "sym02" => Kind::Sym02,
            "sym20" => Kind::Sym20,
            "bivector" => Kind::Bivector,
            "lie_algebra" => Kind::LieAlgebra,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Tensor(TensorField),
    Lie(LieFrameSpec),
}

/// A validated analysis document.
#[derive(Clone, Debug)]
pub struct AnalysisSpec {
    pub kind: Kind,
    pub chart: Arc<Chart>,
    pub payload: Payload,
    pub samples: Vec<Vec<Rational>>,
    pub metric: Option<Matrix<Rational>>,
}

struct Violations(Vec<String>);

impl Violations {
    fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }
}

fn expected_shape(kind: Kind) -> ((usize, usize), Symmetry) {
    match kind {
        Kind::Tensor11 => ((1, 1), Symmetry::None),
        Kind::Form => ((0, 0), Symmetry::Antisymmetric), // q replaced after inference
        Kind::Sym02 => ((0, 2), Symmetry::Symmetric),
        Kind::Sym20 => ((2, 0), Symmetry::Symmetric),
        Kind::Bivector => ((2, 0), Symmetry::Antisymmetric),
        Kind::LieAlgebra => ((0, 0), Symmetry::None),
    }
}

fn parse_rational_value(v: &Value, what: &str, out: &mut Violations) -> Option<Rational> {
    match v {
        Value::String(s) => match rational::parse(s) {
            Ok(r) => Some(r),
            Err(e) => {
                out.push(format!("{what}: {e}"));
                None
            }
        },
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(rational::int(i))
            } else {
                out.push(format!(
                    "{what}: floats are not accepted, use rational strings"
                ));
                None
            }
        }
        _ => {
            out.push(format!("{what}: expected a rational string"));
            None
        }
    }
}

fn parse_scalar_value(
    v: &Value,
    coords: &[String],
    what: &str,
    out: &mut Violations,
) -> Option<ScalarField> {
    let poly = |text: &str, out: &mut Violations| -> Option<Polynomial> {
        match parse_polynomial(text, coords) {
            Ok(p) => Some(p),
            Err(e) => {
                out.push(format!("{what}: {e}"));
                None
            }
        }
    };
    match v {
        Value::String(s) => poly(s, out).map(ScalarField::from_poly),
        Value::Number(n) => n
            .as_i64()
            .map(|i| ScalarField::constant(rational::int(i), coords.len()))
            .or_else(|| {
                out.push(format!("{what}: floats are not accepted"));
                None
            }),
        Value::Array(parts) if parts.len() == 2 => {
            let num_text = parts[0].as_str();
            let den_text = parts[1].as_str();
            match (num_text, den_text) {
                (Some(ns), Some(ds)) => {
                    let n = poly(ns, out)?;
                    let d = poly(ds, out)?;
                    match ScalarField::new(n, d) {
                        Ok(f) => Some(f),
                        Err(e) => {
                            out.push(format!("{what}: {e}"));
                            None
                        }
                    }
                }
                _ => {
                    out.push(format!(
                        "{what}: numerator/denominator pair must be two strings"
                    ));
                    None
                }
            }
        }
        _ => {
            out.push(format!(
                "{what}: expected a polynomial string or a [numerator, denominator] pair"
            ));
            None
        }
    }
}

/// Parses "u1,u2;l1,l2" into 0-based upper and lower multi-indices.
fn parse_key(key: &str, dim: usize, out: &mut Violations) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut halves = key.split(';');
    let (up, lo) = match (halves.next(), halves.next(), halves.next()) {
        (Some(u), Some(l), None) => (u, l),
        _ => {
            out.push(format!(
                "component key {key:?} must contain exactly one ';'"
            ));
            return None;
        }
    };
    let parse_side = |side: &str, out: &mut Violations| -> Option<Vec<usize>> {
        if side.trim().is_empty() {
            return Some(Vec::new());
        }
        let mut idx = Vec::new();
        for part in side.split(',') {
            match part.trim().parse::<usize>() {
                Ok(i) if i >= 1 && i <= dim => idx.push(i - 1),
                _ => {
                    out.push(format!(
                        "component key {key:?}: index {part:?} is not in 1..={dim}"
                    ));
                    return None;
                }
            }
        }
        Some(idx)
    };
    let u = parse_side(up, out)?;
    let l = parse_side(lo, out)?;
    Some((u, l))
}

pub fn parse_spec(text: &str) -> Result<AnalysisSpec> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("not valid JSON: {e}")))?;
    let mut out = Violations(Vec::new());
    let obj = match doc.as_object() {
        Some(o) => o,
        None => {
            return Err(Error::InvalidInput(vec![
                "document must be a JSON object".into()
            ]))
        }
    };

    let kind = match obj
        .get("kind")
        .and_then(|v| v.as_str())
        .and_then(Kind::from_str)
    {
        Some(k) => k,
        None => {
            return Err(Error::InvalidInput(vec![
            "missing or unknown \"kind\" (expected tensor11|form|sym02|sym20|bivector|lie_algebra)"
                .into(),
        ]))
        }
    };

    // chart
    let coords: Vec<String> = match obj
        .get("chart")
        .and_then(|c| c.get("coords"))
        .and_then(|v| v.as_array())
    {
        Some(arr) => arr
            .iter()
            .filter_map(|v| v.as_str().map(|s| s.to_string()))
            .collect(),
        None => {
            if kind == Kind::LieAlgebra {
                Vec::new() // chart derived from the orbit lengths
            } else {
                return Err(Error::InvalidInput(vec![
                    "missing chart.coords (array of coordinate names)".into(),
                ]));
            }
        }
    };

    let (chart, payload) = match kind {
        Kind::LieAlgebra => {
            let spec = parse_lie(obj, &mut out);
            if !out.0.is_empty() {
                return Err(Error::InvalidInput(out.0));
            }
            let spec = spec.unwrap();
            let chart = Chart::standard(spec.n());
            (chart, Payload::Lie(spec))
        }
        _ => {
            let chart = match Chart::new(coords) {
                Ok(c) => c,
                Err(e) => return Err(Error::InvalidInput(vec![e.to_string()])),
            };
            let tensor = parse_tensor(obj, kind, &chart, &mut out);
            if !out.0.is_empty() {
                return Err(Error::InvalidInput(out.0));
            }
            (chart, Payload::Tensor(tensor.unwrap()))
        }
    };

    // sample points (default: the origin of the chart)
    let n = chart.dim();
    let mut samples: Vec<Vec<Rational>> = Vec::new();
    match obj.get("sample_points") {
        None => samples.push(vec![Rational::from_integer(0.into()); n]),
        Some(Value::Array(points)) => {
            for (pi, p) in points.iter().enumerate() {
                match p.as_array() {
                    Some(entries) if entries.len() == n => {
                        let mut tuple = Vec::with_capacity(n);
                        for (ei, e) in entries.iter().enumerate() {
                            if let Some(r) = parse_rational_value(
                                e,
                                &format!("sample_points[{pi}][{ei}]"),
                                &mut out,
                            ) {
                                tuple.push(r);
                            }
                        }
                        if tuple.len() == n {
                            samples.push(tuple);
                        }
                    }
                    _ => out.push(format!(
                        "sample_points[{pi}] must be an array of {n} rationals"
                    )),
                }
            }
            if points.is_empty() {
                out.push("sample_points must be nonempty when present");
            }
        }
        Some(_) => out.push("sample_points must be an array of rational tuples"),
    }

    // metric override
    let metric = match obj.get("options").and_then(|o| o.get("metric")) {
        None => None,
        Some(Value::Array(rows)) => {
            let mut mat = Vec::new();
            for (ri, row) in rows.iter().enumerate() {
                match row.as_array() {
                    Some(entries) if entries.len() == n => {
                        let mut r = Vec::new();
                        for (ci, e) in entries.iter().enumerate() {
                            if let Some(v) = parse_rational_value(
                                e,
                                &format!("options.metric[{ri}][{ci}]"),
                                &mut out,
                            ) {
                                r.push(v);
                            }
                        }
                        mat.push(r);
                    }
                    _ => out.push(format!(
                        "options.metric[{ri}] must be an array of {n} rationals"
                    )),
                }
            }
            if mat.len() == n && mat.iter().all(|r| r.len() == n) {
                Some(Matrix::from_rows(mat))
            } else {
                out.push(format!("options.metric must be {n}×{n}"));
                None
            }
        }
        Some(_) => {
            out.push("options.metric must be an array of rows");
            None
        }
    };

    if !out.0.is_empty() {
        return Err(Error::InvalidInput(out.0));
    }

    // poles at samples are schema violations
    if let Payload::Tensor(t) = &payload {
        for (pi, p) in samples.iter().enumerate() {
            if let Err(e) = t.evaluate_at_point(p) {
                out.push(format!("sample_points[{pi}]: {e}"));
            }
        }
    }
    if !out.0.is_empty() {
        return Err(Error::InvalidInput(out.0));
    }

    Ok(AnalysisSpec {
        kind,
        chart,
        payload,
        samples,
        metric,
    })
}

fn parse_tensor(
    obj: &Map<String, Value>,
    kind: Kind,
    chart: &Arc<Chart>,
    out: &mut Violations,
) -> Option<TensorField> {
    let n = chart.dim();
    let comps = match obj.get("components").and_then(|v| v.as_object()) {
        Some(c) => c,
        None => {
            out.push("missing \"components\" object");
            return None;
        }
    };
    let ((p_arity, mut q_arity), symmetry) = expected_shape(kind);
    // form degree is inferred from the keys (uniformly)
    if kind == Kind::Form {
        let mut degrees: Vec<usize> = Vec::new();
        for key in comps.keys() {
            if let Some((u, l)) = parse_key(key, n, out) {
                if !u.is_empty() {
                    out.push(format!("form component {key:?} must have no upper indices"));
                }
                degrees.push(l.len());
            }
        }
        degrees.sort_unstable();
        degrees.dedup();
        match degrees.as_slice() {
            [q] => q_arity = *q,
            [] => {
                out.push("form needs at least one component to fix its degree");
                return None;
            }
            _ => {
                out.push("form components have inconsistent degrees");
                return None;
            }
        }
        if q_arity > n {
            out.push(format!(
                "form degree {q_arity} exceeds the chart dimension {n}"
            ));
            return None;
        }
    }
    let mut tensor = TensorField::zero(chart.clone(), (p_arity, q_arity), symmetry);
    let mut seen: BTreeMap<(Vec<usize>, Vec<usize>), ScalarField> = BTreeMap::new();
    for (key, value) in comps {
        let Some((u, l)) = parse_key(key, n, out) else {
            continue;
        };
        if u.len() != p_arity || l.len() != q_arity {
            out.push(format!(
                "component key {key:?} has arity ({}, {}), expected ({p_arity}, {q_arity})",
                u.len(),
                l.len()
            ));
            continue;
        }
        if symmetry == Symmetry::Antisymmetric {
            let block = if q_arity >= 2 { &l } else { &u };
            if block.windows(2).any(|w| w[0] >= w[1]) {
                out.push(format!(
                    "antisymmetric component key {key:?} must have strictly increasing indices"
                ));
                continue;
            }
        }
        let Some(value) =
            parse_scalar_value(value, chart.coords(), &format!("components[{key}]"), out)
        else {
            continue;
        };
        // canonical collision check for symmetric storage
        let mut cu = u.clone();
        let mut cl = l.clone();
        if symmetry == Symmetry::Symmetric {
            if q_arity >= 2 {
                cl.sort_unstable();
            } else {
                cu.sort_unstable();
            }
        }
        if let Some(previous) = seen.get(&(cu.clone(), cl.clone())) {
            if *previous != value {
                out.push(format!(
                    "component key {key:?} conflicts with an equivalent earlier key"
                ));
                continue;
            }
        }
        seen.insert((cu, cl), value.clone());
        tensor.set(&u, &l, value);
    }
    if out.0.is_empty() {
        Some(tensor)
    } else {
        None
    }
}

fn parse_lie(obj: &Map<String, Value>, out: &mut Violations) -> Option<LieFrameSpec> {
    let orbits: Vec<usize> = match obj.get("orbits").and_then(|v| v.as_array()) {
        Some(arr) => arr
            .iter()
            .filter_map(|v| v.as_u64().map(|x| x as usize))
            .collect(),
        None => {
            out.push("lie_algebra needs \"orbits\": [d1, d2, …]");
            return None;
        }
    };
    let mut spec = match LieFrameSpec::new(orbits) {
        Ok(s) => s,
        Err(e) => {
            out.push(e.to_string());
            return None;
        }
    };
    let n = spec.n();
    if let Some(brackets) = obj.get("brackets") {
        let Some(entries) = brackets.as_object() else {
            out.push("\"brackets\" must be an object keyed by \"a,b\" pairs");
            return None;
        };
        for (key, value) in entries {
            let parts: Vec<&str> = key.split(',').collect();
            let pair: Option<(usize, usize)> = match parts.as_slice() {
                [a, b] => match (a.trim().parse::<usize>(), b.trim().parse::<usize>()) {
                    (Ok(x), Ok(y)) if (1..=n).contains(&x) && (1..=n).contains(&y) && x != y => {
                        Some((x - 1, y - 1))
                    }
                    _ => None,
                },
                _ => None,
            };
            let Some((a, b)) = pair else {
                out.push(format!(
                    "bracket key {key:?} must be \"a,b\" with distinct 1-based indices"
                ));
                continue;
            };
            let Some(targets) = value.as_object() else {
                out.push(format!(
                    "brackets[{key}] must map target indices to rationals"
                ));
                continue;
            };
            let mut coeffs = vec![Rational::from_integer(0.into()); n];
            let mut good = true;
            for (tk, tv) in targets {
                match tk.trim().parse::<usize>() {
                    Ok(t) if (1..=n).contains(&t) => {
                        if let Some(r) =
                            parse_rational_value(tv, &format!("brackets[{key}][{tk}]"), out)
                        {
                            coeffs[t - 1] = r;
                        } else {
                            good = false;
                        }
                    }
                    _ => {
                        out.push(format!("brackets[{key}]: target {tk:?} is not in 1..={n}"));
                        good = false;
                    }
                }
            }
            if good {
                if let Err(e) = spec.set_bracket(a, b, coeffs) {
                    out.push(format!("brackets[{key}]: {e}"));
                }
            }
        }
    }
    Some(spec)
}

/// Canonical serialization: maps are sorted, scalars render through the
/// graded-lex printer, rationals are strings. Parsing the output yields the
/// same spec.
pub fn serialize_spec(spec: &AnalysisSpec) -> Value {
    let mut root = Map::new();
    root.insert("kind".into(), Value::String(spec.kind.as_str().into()));
    match &spec.payload {
        Payload::Tensor(t) => {
            let mut chart = Map::new();
            chart.insert(
                "coords".into(),
                Value::Array(
                    spec.chart
                        .coords()
                        .iter()
                        .map(|c| Value::String(c.clone()))
                        .collect(),
                ),
            );
            root.insert("chart".into(), Value::Object(chart));
            let mut comps = Map::new();
            let names = spec.chart.coords().to_vec();
            for ((up, lo), v) in t.entries() {
                let ups: Vec<String> = up.iter().map(|i| (i + 1).to_string()).collect();
                let los: Vec<String> = lo.iter().map(|i| (i + 1).to_string()).collect();
                let key = format!("{};{}", ups.join(","), los.join(","));
                let den_is_one = v.den().is_constant()
                    && v.den()
                        .constant_value()
                        .map(|c| c == rational::int(1))
                        .unwrap_or(false);
                let val = if den_is_one {
                    Value::String(v.num().to_string_with(&names))
                } else {
                    Value::Array(vec![
                        Value::String(v.num().to_string_with(&names)),
                        Value::String(v.den().to_string_with(&names)),
                    ])
                };
                comps.insert(key, val);
            }
            root.insert("components".into(), Value::Object(comps));
        }
        Payload::Lie(spec_l) => {
            root.insert(
                "orbits".into(),
                Value::Array(
                    spec_l
                        .orbits()
                        .iter()
                        .map(|&d| Value::Number(d.into()))
                        .collect(),
                ),
            );
            let mut brackets = Map::new();
            for ((a, b), coeffs) in spec_l.bracket_entries() {
                let mut targets = Map::new();
                for (t, c) in coeffs.iter().enumerate() {
                    if !num_traits::Zero::is_zero(c) {
                        targets.insert((t + 1).to_string(), Value::String(c.to_string()));
                    }
                }
                brackets.insert(format!("{},{}", a + 1, b + 1), Value::Object(targets));
            }
            root.insert("brackets".into(), Value::Object(brackets));
        }
    }
    root.insert(
        "sample_points".into(),
        Value::Array(
            spec.samples
                .iter()
                .map(|p| Value::Array(p.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        ),
    );
    if let Some(metric) = &spec.metric {
        let mut options = Map::new();
        let rows: Vec<Value> = (0..metric.rows())
            .map(|r| {
                Value::Array(
                    (0..metric.cols())
                        .map(|c| Value::String(metric.get(r, c).to_string()))
                        .collect(),
                )
            })
            .collect();
        options.insert("metric".into(), Value::Array(rows));
        root.insert("options".into(), Value::Object(options));
    }
    Value::Object(root)
}
