//! Command dispatch: each analyzer computes the obstruction tensors and the
//! independent distribution-level route, cross-validates them, and asserts
//! the theorem-level verdict.

use serde_json::{json, Map, Value};
use std::sync::Arc;

use super::reports::{Report, Verdict};
use super::schema::{serialize_spec, AnalysisSpec, Kind, Payload};
use crate::constructions::{build_affine_tangent, build_nin_form, product_extension};
use crate::error::{Error, Result};
use crate::frames::{
    controlled_type_verifier, frame_nijenhuis_vanishes, jacobi_check, kernel_integrability_frame,
    realize_on_chart, realized_kernel_span, ControlledVerdict, EWitness,
};
use crate::linalg::{
    certified_nilpotent_profile, complex_diagonalizable, csd_predicate, distribution_integrability,
    minimal_polynomial, BracketWitness, JordanProfile, Matrix, VectorFieldSpan,
};
use crate::obstructions::{
    kernel_nijenhuis_family, kernel_span, n_double_prime, n_hat, n_prime, restriction_inverse,
    sym02_morphism, RiemannianBackground,
};
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{
    exterior_derivative, lie_derivative_02, Chart, ConnectionCoefficients, TensorField,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze11,
    AnalyzeForm,
    AnalyzeSym02,
    AnalyzeSym20,
    AnalyzeBivector,
    LieCheck,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze11 => "analyze-11",
            Command::AnalyzeForm => "analyze-form",
            Command::AnalyzeSym02 => "analyze-sym02",
            Command::AnalyzeSym20 => "analyze-sym20",
            Command::AnalyzeBivector => "analyze-bivector",
            Command::LieCheck => "lie-check",
        }
    }

    fn expected_kind(&self) -> Kind {
        match self {
            Command::Analyze11 => Kind::Tensor11,
            Command::AnalyzeForm => Kind::Form,
            Command::AnalyzeSym02 => Kind::Sym02,
            Command::AnalyzeSym20 => Kind::Sym20,
            Command::AnalyzeBivector => Kind::Bivector,
            Command::LieCheck => Kind::LieAlgebra,
        }
    }
}

fn background(spec: &AnalysisSpec) -> Result<RiemannianBackground> {
    match &spec.metric {
        None => Ok(RiemannianBackground::euclidean(spec.chart.clone())),
        Some(m) => RiemannianBackground::with_metric(spec.chart.clone(), m.clone()),
    }
}

fn key_string(up: &[usize], lo: &[usize]) -> String {
    let ups: Vec<String> = up.iter().map(|i| (i + 1).to_string()).collect();
    let los: Vec<String> = lo.iter().map(|i| (i + 1).to_string()).collect();
    format!("{};{}", ups.join(","), los.join(","))
}

fn tensor_witness(t: &TensorField, names: &[String]) -> Option<Value> {
    t.entries().next().map(|((up, lo), v)| {
        json!({
            "component": key_string(up, lo),
            "value": v.to_string_with(names),
        })
    })
}

fn slot_witness(w: &crate::obstructions::SlotWitness, names: &[String]) -> Value {
    json!({
        "slots": w.slots.iter().map(|s| s + 1).collect::<Vec<_>>(),
        "component": key_string(&[], &w.component),
        "value": w.value.to_string_with(names),
    })
}

fn bracket_witness(w: &BracketWitness, names: &[String]) -> Value {
    let comps: Map<String, Value> = w
        .bracket
        .entries()
        .map(|((up, lo), v)| (key_string(up, lo), Value::String(v.to_string_with(names))))
        .collect();
    json!({
        "generators": [w.generator_i + 1, w.generator_j + 1],
        "bracket": comps,
    })
}

fn e_witness(w: &EWitness) -> Value {
    json!({
        "orbit_triple": [w.triple.0 + 1, w.triple.1 + 1, w.triple.2 + 1],
        "i": w.i,
        "j": w.j,
        "s": w.s,
        "lhs": w.lhs.to_string(),
        "rhs": w.rhs.to_string(),
    })
}

fn expect_kind(spec: &AnalysisSpec, command: Command) -> Result<()> {
    if spec.kind != command.expected_kind() {
        return Err(Error::InvalidInput(vec![format!(
            "{} expects a {:?} document, got {:?}",
            command.name(),
            command.expected_kind().as_str(),
            spec.kind.as_str()
        )]));
    }
    Ok(())
}

pub fn run_command(spec: &AnalysisSpec, command: Command) -> Result<Report> {
    expect_kind(spec, command)?;
    match command {
        Command::Analyze11 => analyze_11(spec),
        Command::AnalyzeForm => analyze_form(spec),
        Command::AnalyzeSym02 => analyze_sym02(spec),
        Command::AnalyzeSym20 => analyze_sym20(spec),
        Command::AnalyzeBivector => analyze_bivector(spec),
        Command::LieCheck => lie_check(spec),
    }
}

fn tensor_payload(spec: &AnalysisSpec) -> &TensorField {
    match &spec.payload {
        Payload::Tensor(t) => t,
        Payload::Lie(_) => unreachable!("kind checked by expect_kind"),
    }
}

// ---- (1,1) tensors ------------------------------------------------------

/// Characteristic polynomial coefficients over the scalar field, ascending
/// by degree, via the trace recursion (exact; no eigenvalue numerics).
fn char_poly_coeffs(m: &Matrix<ScalarField>) -> Vec<ScalarField> {
    let n = m.rows();
    let one = m.proto().one_like();
    let mut cs = vec![ScalarField::zero(m.proto().nvars()); n + 1];
    cs[n] = one;
    let mut mk = m.clone();
    let mut coeff = Vec::with_capacity(n);
    for k in 1..=n {
        let mut tr = ScalarField::zero(m.proto().nvars());
        for i in 0..n {
            tr = &tr + mk.get(i, i);
        }
        let c = tr.scale(
            &(-Rational::from_integer(1.into()) / Rational::from_integer((k as i64).into())),
        );
        coeff.push(c.clone());
        if k < n {
            let mut shifted = mk.clone();
            for i in 0..n {
                shifted.set(i, i, &(shifted.get(i, i).clone()) + &c);
            }
            mk = m.matmul(&shifted);
        }
    }
    for (k, c) in coeff.into_iter().enumerate() {
        cs[n - 1 - k] = c;
    }
    cs
}

use crate::linalg::Entry as _;

fn analyze_11(spec: &AnalysisSpec) -> Result<Report> {
    let t = tensor_payload(spec);
    let names = spec.chart.coords().to_vec();
    let n = spec.chart.dim();
    let mut report = Report::new("analyze-11", serialize_spec(spec));
    let m = t.matrix11();

    let nij = crate::obstructions::nijenhuis_11(t)?;
    let n_vanishes = nij.is_zero();
    report.flag(
        "nijenhuis_vanishes",
        n_vanishes,
        tensor_witness(&nij, &names),
    );

    match certified_nilpotent_profile(&m, &spec.samples) {
        Ok(profile) => {
            report.invariant("tensor_type", json!("nilpotent"));
            report.invariant("jordan_profile", json!(profile.to_string()));
            let csd = csd_predicate(&profile);
            report.invariant("profile_block_condition", json!(csd));
            let ranks: Vec<usize> = (0..=n)
                .map(|i| crate::linalg::rank_from_profile(&profile, i))
                .collect();
            report.invariant("rank_sequence", json!(ranks));

            let bg = background(spec)?;
            let (_, family) = kernel_nijenhuis_family(t, &bg, &spec.samples)?;
            let mut kernels_ok = true;
            let mut first_witness: Option<Value> = None;
            for (i, member) in &family {
                let ok = member.kernel_integrability.integrable;
                let witness = member
                    .kernel_integrability
                    .witness
                    .as_ref()
                    .map(|w| bracket_witness(w, &names));
                if !ok && first_witness.is_none() {
                    first_witness = witness.clone();
                }
                kernels_ok &= ok;
                report.flag(&format!("kernel_involutive_{i}"), ok, witness.clone());
                report.flag(
                    &format!("kernel_obstruction_vanishes_{i}"),
                    member.obstruction.vanishes,
                    member
                        .obstruction
                        .witness
                        .as_ref()
                        .map(|w| slot_witness(w, &names)),
                );
            }

            if n_vanishes && kernels_ok {
                report
                    .verdicts
                    .push(Verdict::holds("nilpotent_integrability"));
            } else if !n_vanishes {
                report.verdicts.push(Verdict::fails(
                    "nilpotent_integrability",
                    tensor_witness(&nij, &names).unwrap(),
                ));
            } else {
                report.verdicts.push(Verdict::fails(
                    "nilpotent_integrability",
                    first_witness.unwrap_or(json!("kernel involutivity failed")),
                ));
            }
            if csd {
                report
                    .verdicts
                    .push(Verdict::holds("nijenhuis_controls_type"));
            } else {
                let b = profile.blocks();
                report.verdicts.push(Verdict::fails(
                    "nijenhuis_controls_type",
                    json!({
                        "blocks": [b[b.len()-1], b[b.len()-2], b[0]],
                        "note": "three block lengths p ≤ q < r admit a realization with vanishing Nijenhuis tensor and a non-involutive kernel",
                    }),
                ));
            }
        }
        Err(Error::NotNilpotent) => {
            report.invariant("tensor_type", json!("not nilpotent"));
            // constancy shadow: characteristic polynomial constant in the
            // chart, diagonalizability and equal minimal polynomials at all
            // samples
            let cp = char_poly_coeffs(&m);
            let char_constant = cp.iter().all(|c| c.is_constant());
            let mut diag_all = true;
            let mut minpolys = Vec::new();
            for p in &spec.samples {
                let at = m.eval(p)?;
                diag_all &= complex_diagonalizable(&at);
                minpolys.push(minimal_polynomial(&at));
            }
            let min_equal = minpolys.windows(2).all(|w| w[0] == w[1]);
            let constant_type = char_constant && min_equal;
            report.invariant("complex_diagonalizable_on_samples", json!(diag_all));
            report.invariant("algebraically_constant_certified", json!(constant_type));
            if let Some(mp) = minpolys.first() {
                report.invariant("minimal_polynomial_at_samples", json!(mp.to_string_in("t")));
            }
            if constant_type && diag_all {
                if n_vanishes {
                    report
                        .verdicts
                        .push(Verdict::holds("diagonalizable_integrability"));
                } else {
                    report.verdicts.push(Verdict::fails(
                        "diagonalizable_integrability",
                        tensor_witness(&nij, &names).unwrap(),
                    ));
                }
            } else {
                report.verdicts.push(Verdict::not_applicable(
                    "diagonalizable_integrability",
                    "the tensor is not certified algebraically constant and complex-diagonalizable on the sample set",
                ));
            }
            report.verdicts.push(Verdict::not_applicable(
                "nilpotent_integrability",
                "the tensor is not nilpotent",
            ));
        }
        Err(other) => return Err(other),
    }
    Ok(report)
}

// ---- forms ---------------------------------------------------------------

fn analyze_form(spec: &AnalysisSpec) -> Result<Report> {
    let t = tensor_payload(spec);
    let names = spec.chart.coords().to_vec();
    let n = spec.chart.dim();
    let q = t.valence().1;
    let mut report = Report::new("analyze-form", serialize_spec(spec));
    report.invariant("degree", json!(q));

    let d = exterior_derivative(t)?;
    let closed = d.is_zero();
    report.flag("closed", closed, tensor_witness(&d, &names));

    let good_degree = q <= 2 || q + 1 >= n;
    report.invariant("degree_decidable", json!(good_degree));

    // algebraic-constancy shadow per degree
    let constancy: Option<bool> = if q == 0 {
        Some(t.component(&[], &[]).is_constant())
    } else if q == 1 || q == 2 || q + 1 >= n {
        if t.is_zero() {
            Some(true)
        } else if q == 2 {
            let mat = Matrix::from_fn(n, n, |i, j| t.component(&[], &[i, j]));
            let generic = mat.rank();
            let mut ok = true;
            for p in &spec.samples {
                ok &= mat.eval(p)?.rank() == generic;
            }
            report.invariant("rank", json!(generic));
            Some(ok)
        } else {
            // nonvanishing at every sample
            let mut ok = true;
            for p in &spec.samples {
                let vals = t.evaluate_at_point(p)?;
                ok &= vals.iter().any(|(_, v)| !num_traits::Zero::is_zero(v));
            }
            Some(ok)
        }
    } else {
        None
    };
    if let Some(c) = constancy {
        report.invariant("algebraically_constant_certified", json!(c));
    } else {
        report.invariant(
            "algebraically_constant_certified",
            json!("not checked in this degree"),
        );
    }

    let verdict = if !closed {
        Verdict::fails(
            "closed_form_local_constancy",
            tensor_witness(&d, &names).unwrap(),
        )
    } else if t.is_zero() {
        // the zero form is constant in any degree
        Verdict::holds("closed_form_local_constancy")
    } else if !good_degree {
        Verdict::not_applicable(
            "closed_form_local_constancy",
            "closedness is necessary but not sufficient in degrees between 3 and n−2",
        )
    } else if constancy == Some(false) {
        Verdict::not_applicable(
            "closed_form_local_constancy",
            "algebraic constancy is not certified on the sample set",
        )
    } else {
        Verdict::holds("closed_form_local_constancy")
    };
    report.verdicts.push(verdict);
    Ok(report)
}

// ---- symmetric (0,2) ------------------------------------------------------

fn analyze_sym02(spec: &AnalysisSpec) -> Result<Report> {
    let g = tensor_payload(spec);
    let names = spec.chart.coords().to_vec();
    let mut report = Report::new("analyze-sym02", serialize_spec(spec));

    let mat = g.matrix02();
    let r = mat.rank();
    let morphism = sym02_morphism(g, r, &spec.samples)?;
    report.invariant("rank", json!(r));

    let prime = n_prime(g, r, &spec.samples)?;
    report.flag(
        "kernel_obstruction_vanishes",
        prime.obstruction.vanishes,
        prime
            .obstruction
            .witness
            .as_ref()
            .map(|w| slot_witness(w, &names)),
    );
    report.flag(
        "kernel_involutive",
        prime.kernel_integrability.integrable,
        prime
            .kernel_integrability
            .witness
            .as_ref()
            .map(|w| bracket_witness(w, &names)),
    );

    let dprime = n_double_prime(g, r, &spec.samples, None)?;
    report.flag(
        "projectability_obstruction_vanishes",
        dprime.vanishes,
        dprime.witness.as_ref().map(|w| slot_witness(w, &names)),
    );

    if prime.kernel_integrability.integrable {
        // second route: the Lie derivative along every kernel generator
        let span = kernel_span(&morphism)?;
        let mut lie_ok = true;
        let mut witness = None;
        for (gi, gen) in span.generators().iter().enumerate() {
            let l = lie_derivative_02(gen, g)?;
            if !l.is_zero() {
                lie_ok = false;
                witness = Some(json!({
                    "kernel_generator": gi + 1,
                    "lie_derivative": tensor_witness(&l, &names),
                }));
                break;
            }
        }
        report.flag("lie_derivative_vanishes_on_kernel", lie_ok, witness);
        if lie_ok != dprime.vanishes {
            return Err(Error::RankInconsistency(
                "projectability obstruction and Lie-derivative route disagree".into(),
            ));
        }
    }

    let integrable = prime.obstruction.vanishes && dprime.vanishes;
    if integrable {
        report
            .verdicts
            .push(Verdict::holds("symmetric_02_integrability"));
    } else {
        let witness = prime
            .obstruction
            .witness
            .as_ref()
            .or(dprime.witness.as_ref())
            .map(|w| slot_witness(w, &names))
            .unwrap_or(json!(null));
        report
            .verdicts
            .push(Verdict::fails("symmetric_02_integrability", witness));
    }
    Ok(report)
}

// ---- symmetric (2,0) and bivectors ----------------------------------------

fn analyze_sym20(spec: &AnalysisSpec) -> Result<Report> {
    let t = tensor_payload(spec);
    let names = spec.chart.coords().to_vec();
    let mut report = Report::new("analyze-sym20", serialize_spec(spec));
    let r = t.matrix20().rank();
    report.invariant("rank", json!(r));
    let bg = background(spec)?;
    let out = n_hat(t, r, &bg, &spec.samples)?;
    report.flag(
        "image_obstruction_vanishes",
        out.obstruction.vanishes,
        out.obstruction
            .witness
            .as_ref()
            .map(|w| slot_witness(w, &names)),
    );
    report.flag(
        "image_involutive",
        out.image_integrability.integrable,
        out.image_integrability
            .witness
            .as_ref()
            .map(|w| bracket_witness(w, &names)),
    );
    if out.image_integrability.integrable {
        report
            .verdicts
            .push(Verdict::holds("symmetric_20_integrability"));
    } else {
        report.verdicts.push(Verdict::fails(
            "symmetric_20_integrability",
            out.image_integrability
                .witness
                .as_ref()
                .map(|w| bracket_witness(w, &names))
                .unwrap_or(json!(null)),
        ));
    }
    Ok(report)
}

fn analyze_bivector(spec: &AnalysisSpec) -> Result<Report> {
    let t = tensor_payload(spec);
    let names = spec.chart.coords().to_vec();
    let mut report = Report::new("analyze-bivector", serialize_spec(spec));
    let r = t.matrix20().rank();
    report.invariant("rank", json!(r));
    let bg = background(spec)?;
    let out = n_hat(t, r, &bg, &spec.samples)?;
    report.flag(
        "image_obstruction_vanishes",
        out.obstruction.vanishes,
        out.obstruction
            .witness
            .as_ref()
            .map(|w| slot_witness(w, &names)),
    );
    report.flag(
        "image_involutive",
        out.image_integrability.integrable,
        out.image_integrability
            .witness
            .as_ref()
            .map(|w| bracket_witness(w, &names)),
    );
    if r == 0 {
        // the zero bivector is locally constant
        report
            .verdicts
            .push(Verdict::holds("bivector_integrability"));
        return Ok(report);
    }
    let rest = restriction_inverse(t, r, &spec.samples)?;
    report.invariant(
        "image_basis_columns",
        json!(rest.basis_columns.iter().map(|c| c + 1).collect::<Vec<_>>()),
    );
    match rest.leafwise_closed {
        Some(closed) => {
            let witness = rest.closedness_witness.as_ref().map(|(a, b, c, v)| {
                json!({
                    "basis_triple": [a + 1, b + 1, c + 1],
                    "value": v.to_string_with(&names),
                })
            });
            report.flag("inverse_leafwise_closed", closed, witness.clone());
            if closed {
                report
                    .verdicts
                    .push(Verdict::holds("bivector_integrability"));
            } else {
                let mut v =
                    Verdict::fails("bivector_integrability", witness.unwrap_or(json!(null)));
                v.reason = Some(
                    "the image obstruction is only necessary; integrability additionally needs the inverse of the restriction closed along each leaf"
                        .into(),
                );
                report.verdicts.push(v);
            }
        }
        None => {
            report.verdicts.push(Verdict::fails(
                "bivector_integrability",
                out.image_integrability
                    .witness
                    .as_ref()
                    .map(|w| bracket_witness(w, &names))
                    .unwrap_or(json!(null)),
            ));
        }
    }
    Ok(report)
}

// ---- Lie algebra frames ----------------------------------------------------

fn lie_check(spec: &AnalysisSpec) -> Result<Report> {
    let lie = match &spec.payload {
        Payload::Lie(l) => l,
        _ => unreachable!(),
    };
    let mut report = Report::new("lie-check", serialize_spec(spec));
    let profile = lie.profile();
    report.invariant("jordan_profile", json!(profile.to_string()));
    report.invariant("profile_block_condition", json!(csd_predicate(&profile)));

    let (jacobi, jw) = jacobi_check(lie);
    report.flag(
        "jacobi_identity",
        jacobi,
        jw.map(|(a, b, c)| json!({"basis_triple": [a + 1, b + 1, c + 1]})),
    );
    let (nv, nw) = frame_nijenhuis_vanishes(lie);
    report.flag("nijenhuis_vanishes", nv, nw.as_ref().map(e_witness));

    let d1 = profile.longest();
    let mut kernels_ok = true;
    let mut kernel_witness = None;
    for l in 1..d1 {
        let (ok, w) = kernel_integrability_frame(lie, Some(l));
        if !ok && kernel_witness.is_none() {
            kernel_witness = w.as_ref().map(e_witness);
        }
        kernels_ok &= ok;
        report.flag(
            &format!("kernel_involutive_{l}"),
            ok,
            w.as_ref().map(e_witness),
        );
    }
    let (all_ok, all_w) = kernel_integrability_frame(lie, None);
    report.flag(
        "kernel_involutive_all",
        all_ok,
        all_w.as_ref().map(e_witness),
    );

    // realization cross-check; only step-2 tables are supported, and the
    // whole command reports unsupported for a genuine algebra beyond that
    match realize_on_chart(lie) {
        Ok(real) => {
            let nij = crate::obstructions::nijenhuis_11(&real.theta)?;
            if nij.is_zero() != nv {
                return Err(Error::RankInconsistency(
                    "frame-level Nijenhuis condition disagrees with the realized tensor".into(),
                ));
            }
            for l in 1..d1 {
                let span = realized_kernel_span(lie, &real, l, &spec.samples)?;
                let verdict = distribution_integrability(&span)?;
                if verdict.integrable != kernel_integrability_frame(lie, Some(l)).0 {
                    return Err(Error::RankInconsistency(format!(
                        "frame-level kernel condition at level {l} disagrees with the realization"
                    )));
                }
            }
            report.flag("realization_cross_check", true, None);
            let mut theta = Map::new();
            for (key, text) in real.theta.render_components() {
                theta.insert(key, Value::String(text));
            }
            report.invariant("realized_tensor", Value::Object(theta));
        }
        Err(Error::Unsupported(reason)) => return Err(Error::Unsupported(reason)),
        // a table failing the Jacobi identity is not a Lie algebra; the
        // jacobi flag already carries the witness and the cross-check does
        // not apply
        Err(Error::Precondition(_)) if !jacobi => {
            report.flag(
                "realization_cross_check",
                false,
                Some(json!({ "skipped": "the bracket table is not a Lie algebra" })),
            );
        }
        Err(other) => return Err(other),
    }

    if jacobi && nv && kernels_ok && all_ok {
        report
            .verdicts
            .push(Verdict::holds("nilpotent_frame_integrability"));
    } else if !jacobi {
        report.verdicts.push(Verdict::not_applicable(
            "nilpotent_frame_integrability",
            "the bracket table is not a Lie algebra",
        ));
    } else {
        let witness = if !nv {
            nw.as_ref().map(e_witness)
        } else {
            kernel_witness.or(all_w.as_ref().map(e_witness))
        };
        report.verdicts.push(Verdict::fails(
            "nilpotent_frame_integrability",
            witness.unwrap_or(json!(null)),
        ));
    }
    Ok(report)
}

// ---- constructions ----------------------------------------------------------

/// The counterexample generator as a command: emits the bracket table as a
/// reusable lie_algebra document together with its three certified
/// assertions.
pub fn construct_prop81(p: usize, q: usize, r: usize) -> Result<Report> {
    let spec = crate::frames::build_counterexample(p, q, r)?;
    let analysis = AnalysisSpec {
        kind: Kind::LieAlgebra,
        chart: Chart::standard(spec.n()),
        payload: Payload::Lie(spec.clone()),
        samples: vec![vec![Rational::from_integer(0.into()); spec.n()]],
        metric: None,
    };
    let mut report = Report::new("construct-prop81", json!({"p": p, "q": q, "r": r}));
    report.invariant("document", serialize_spec(&analysis));
    report.invariant("jordan_profile", json!(spec.profile().to_string()));
    let (jacobi, _) = jacobi_check(&spec);
    report.flag("jacobi_identity", jacobi, None);
    let (nv, _) = frame_nijenhuis_vanishes(&spec);
    report.flag("nijenhuis_vanishes", nv, None);
    let (ker, kw) = kernel_integrability_frame(&spec, Some(p));
    report.flag(
        &format!("kernel_involutive_{p}"),
        ker,
        kw.as_ref().map(e_witness),
    );
    if jacobi && nv && !ker {
        report
            .verdicts
            .push(Verdict::holds("counterexample_certified"));
    } else {
        report
            .verdicts
            .push(Verdict::fails("counterexample_certified", json!(null)));
    }
    Ok(report)
}

/// Builds the square-zero tensor over a distribution document:
/// `{ "chart": {...}, "generators": [[...], ...], "sample_points": [...] }`.
pub fn construct_affine_tangent(doc_text: &str) -> Result<Report> {
    let doc: Value =
        serde_json::from_str(doc_text).map_err(|e| Error::Parse(format!("not valid JSON: {e}")))?;
    let coords: Vec<String> = doc
        .get("chart")
        .and_then(|c| c.get("coords"))
        .and_then(|v| v.as_array())
        .map(|arr| {
            arr.iter()
                .filter_map(|v| v.as_str().map(String::from))
                .collect()
        })
        .ok_or_else(|| Error::InvalidInput(vec!["missing chart.coords".into()]))?;
    let chart = Chart::new(coords).map_err(|e| Error::InvalidInput(vec![e.to_string()]))?;
    let dist = parse_span(&doc, &chart)?;
    let out = build_affine_tangent(&dist)?;

    let analysis = AnalysisSpec {
        kind: Kind::Tensor11,
        chart: out.chart.clone(),
        payload: Payload::Tensor(out.theta.clone()),
        samples: out.samples.clone(),
        metric: None,
    };
    let mut report = Report::new("construct-affine-tangent", doc);
    report.invariant("document", serialize_spec(&analysis));
    let names = out.chart.coords().to_vec();
    let ann: Vec<Vec<String>> = (0..out.annihilator.rows())
        .map(|r| {
            (0..out.annihilator.cols())
                .map(|c| out.annihilator.get(r, c).to_string_with(&names))
                .collect()
        })
        .collect();
    report.invariant("annihilator_rows", json!(ann));
    let m = out.theta.matrix11();
    report.flag("square_zero", m.matmul(&m).is_zero(), None);
    let nij = crate::obstructions::nijenhuis_11(&out.theta)?;
    report.flag(
        "nijenhuis_vanishes",
        nij.is_zero(),
        tensor_witness(&nij, &names),
    );
    let profile = certified_nilpotent_profile(&m, &out.samples)?;
    report.invariant("jordan_profile", json!(profile.to_string()));
    let base_verdict = distribution_integrability(&dist)?;
    report.flag(
        "base_distribution_involutive",
        base_verdict.integrable,
        None,
    );
    report.verdicts.push(if base_verdict.integrable {
        Verdict::holds("construction_integrable")
    } else {
        Verdict::fails(
            "construction_integrable",
            base_verdict
                .witness
                .as_ref()
                .map(|w| bracket_witness(w, dist.chart().coords()))
                .unwrap_or(json!(null)),
        )
    });
    Ok(report)
}

/// A scalar value in construction inputs: a polynomial string or a
/// [numerator, denominator] pair.
fn scalar_from_json(v: &Value, coords: &[String], what: &str) -> Result<ScalarField> {
    match v {
        Value::String(s) => Ok(ScalarField::from_poly(
            crate::scalar::parse_polynomial(s, coords)
                .map_err(|e| Error::InvalidInput(vec![format!("{what}: {e}")]))?,
        )),
        Value::Array(parts) if parts.len() == 2 => {
            let (Some(ns), Some(ds)) = (parts[0].as_str(), parts[1].as_str()) else {
                return Err(Error::InvalidInput(vec![format!(
                    "{what}: quotient must be two polynomial strings"
                )]));
            };
            let num = crate::scalar::parse_polynomial(ns, coords)
                .map_err(|e| Error::InvalidInput(vec![format!("{what}: {e}")]))?;
            let den = crate::scalar::parse_polynomial(ds, coords)
                .map_err(|e| Error::InvalidInput(vec![format!("{what}: {e}")]))?;
            ScalarField::new(num, den)
                .map_err(|e| Error::InvalidInput(vec![format!("{what}: {e}")]))
        }
        _ => Err(Error::InvalidInput(vec![format!(
            "{what}: expected a polynomial string or a [numerator, denominator] pair"
        )])),
    }
}

fn parse_span(doc: &Value, chart: &Arc<Chart>) -> Result<VectorFieldSpan> {
    let n = chart.dim();
    let mut violations = Vec::new();
    let gens_v = doc
        .get("generators")
        .and_then(|v| v.as_array())
        .cloned()
        .unwrap_or_default();
    let mut gens = Vec::new();
    for (gi, gen) in gens_v.iter().enumerate() {
        match gen.as_array() {
            Some(entries) if entries.len() == n => {
                let mut comps = Vec::new();
                for (ci, e) in entries.iter().enumerate() {
                    match scalar_from_json(e, chart.coords(), &format!("generators[{gi}][{ci}]")) {
                        Ok(f) => comps.push(f),
                        Err(Error::InvalidInput(mut v)) => violations.append(&mut v),
                        Err(other) => return Err(other),
                    }
                }
                if comps.len() == n {
                    gens.push(TensorField::from_vector(chart.clone(), comps));
                }
            }
            _ => violations.push(format!(
                "generators[{gi}] must be an array of {n} polynomials"
            )),
        }
    }
    let mut samples = Vec::new();
    if let Some(points) = doc.get("sample_points").and_then(|v| v.as_array()) {
        for (pi, p) in points.iter().enumerate() {
            match p.as_array() {
                Some(entries) if entries.len() == n => {
                    let mut tuple = Vec::new();
                    for e in entries {
                        match e {
                            Value::String(s) => match crate::scalar::rational::parse(s) {
                                Ok(r) => tuple.push(r),
                                Err(err) => violations.push(format!("sample_points[{pi}]: {err}")),
                            },
                            Value::Number(nn) if nn.is_i64() => {
                                tuple.push(crate::scalar::rational::int(nn.as_i64().unwrap()))
                            }
                            _ => violations.push(format!("sample_points[{pi}]: bad entry")),
                        }
                    }
                    if tuple.len() == n {
                        samples.push(tuple);
                    }
                }
                _ => violations.push(format!("sample_points[{pi}] must have {n} entries")),
            }
        }
    }
    if samples.is_empty() {
        samples.push(vec![Rational::from_integer(0.into()); n]);
    }
    if !violations.is_empty() {
        return Err(Error::InvalidInput(violations));
    }
    let rank = match gens.is_empty() {
        true => 0,
        false => {
            let cols: Vec<Vec<ScalarField>> = gens.iter().map(|g| g.to_vector()).collect();
            Matrix::from_fn(n, cols.len(), |r, c| cols[c][r].clone()).rank()
        }
    };
    VectorFieldSpan::new(chart.clone(), gens, rank, samples)
}

/// The closed non-integrable q-form generator; emits the form document and
/// certifies its four assertions.
pub fn construct_nin_form(n: usize, q: usize) -> Result<Report> {
    let out = build_nin_form(n, q)?;
    let analysis = AnalysisSpec {
        kind: Kind::Form,
        chart: out.chart.clone(),
        payload: Payload::Tensor(out.zeta.clone()),
        samples: vec![vec![Rational::from_integer(0.into()); n]],
        metric: None,
    };
    let mut report = Report::new("construct-nin-form", json!({"n": n, "q": q}));
    report.invariant("document", serialize_spec(&analysis));
    let names = out.chart.coords().to_vec();
    let d = exterior_derivative(&out.zeta)?;
    report.flag("closed", d.is_zero(), tensor_witness(&d, &names));
    let mut divisors_ok = true;
    for xi in &out.divisor_forms {
        divisors_ok &= crate::tensor::wedge_product(xi, &out.zeta)?.is_zero();
    }
    report.flag("divisor_forms_annihilate", divisors_ok, None);
    report.flag(
        "witness_form_nonzero",
        !out.witness.is_zero(),
        tensor_witness(&out.witness, &names),
    );
    let kernel = distribution_integrability(&out.kernel)?;
    report.flag(
        "divisor_kernel_involutive",
        kernel.integrable,
        kernel.witness.as_ref().map(|w| bracket_witness(w, &names)),
    );
    report.verdicts.push(
        if d.is_zero() && divisors_ok && !out.witness.is_zero() && !kernel.integrable {
            Verdict::holds("closed_but_not_integrable")
        } else {
            Verdict::fails("closed_but_not_integrable", json!(null))
        },
    );
    Ok(report)
}

/// Zero-padded leafwise-parallel extension. The document supplies the chart,
/// the leaf dimension, leaf tensors as matrices of polynomial strings, and
/// connection coefficients keyed "k;i,j".
pub fn construct_product_extension(doc_text: &str) -> Result<Report> {
    let doc: Value =
        serde_json::from_str(doc_text).map_err(|e| Error::Parse(format!("not valid JSON: {e}")))?;
    let coords: Vec<String> = doc
        .get("chart")
        .and_then(|c| c.get("coords"))
        .and_then(|v| v.as_array())
        .map(|arr| {
            arr.iter()
                .filter_map(|v| v.as_str().map(String::from))
                .collect()
        })
        .ok_or_else(|| Error::InvalidInput(vec!["missing chart.coords".into()]))?;
    let chart = Chart::new(coords).map_err(|e| Error::InvalidInput(vec![e.to_string()]))?;
    let n = chart.dim();
    let s = doc
        .get("leaf_dim")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::InvalidInput(vec!["missing leaf_dim".into()]))? as usize;
    let parse_matrix = |key: &str| -> Result<Matrix<ScalarField>> {
        let rows = doc
            .get(key)
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::InvalidInput(vec![format!("missing {key} matrix")]))?;
        let mut out = Vec::new();
        for (ri, row) in rows.iter().enumerate() {
            let entries = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput(vec![format!("{key} rows must be arrays")]))?;
            let mut r = Vec::new();
            for (ci, e) in entries.iter().enumerate() {
                r.push(scalar_from_json(
                    e,
                    chart.coords(),
                    &format!("{key}[{ri}][{ci}]"),
                )?);
            }
            out.push(r);
        }
        if out.len() != s || out.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidInput(vec![format!("{key} must be {s}×{s}")]));
        }
        Ok(Matrix::from_rows(out))
    };
    let g_leaf = parse_matrix("g_leaf")?;
    let theta_leaf = match doc.get("theta_leaf") {
        Some(_) => parse_matrix("theta_leaf")?,
        None => Matrix::zero(s, s, &ScalarField::zero(n)),
    };
    let mut gamma = ConnectionCoefficients::flat(chart.clone());
    if let Some(entries) = doc.get("gamma_leaf").and_then(|v| v.as_object()) {
        for (key, value) in entries {
            let parts: Vec<&str> = key.split([';', ',']).collect();
            let idx: Vec<usize> = parts
                .iter()
                .filter_map(|p| p.trim().parse::<usize>().ok())
                .collect();
            if idx.len() != 3 || idx.iter().any(|&i| i < 1 || i > s) {
                return Err(Error::InvalidInput(vec![format!(
                    "gamma_leaf key {key:?} must be \"k;i,j\" with 1-based leaf indices"
                )]));
            }
            let f = scalar_from_json(value, chart.coords(), &format!("gamma_leaf[{key}]"))?;
            gamma.set(idx[0] - 1, idx[1] - 1, idx[2] - 1, f);
        }
    }
    let out = product_extension(&chart, s, &g_leaf, &theta_leaf, &gamma)?;
    let mut report = Report::new("construct-product-extension", doc);
    let metric_doc = AnalysisSpec {
        kind: Kind::Sym02,
        chart: chart.clone(),
        payload: Payload::Tensor(out.metric.clone()),
        samples: vec![vec![Rational::from_integer(0.into()); n]],
        metric: None,
    };
    report.invariant("metric_document", serialize_spec(&metric_doc));
    let cometric_doc = AnalysisSpec {
        kind: Kind::Sym20,
        chart: chart.clone(),
        payload: Payload::Tensor(out.cometric.clone()),
        samples: vec![vec![Rational::from_integer(0.into()); n]],
        metric: None,
    };
    report.invariant("cometric_document", serialize_spec(&cometric_doc));
    let mut gamma_out = Map::new();
    for ((k, i, j), v) in out.connection.entries() {
        gamma_out.insert(
            format!("{};{},{}", k + 1, i + 1, j + 1),
            Value::String(v.to_string_with(chart.coords())),
        );
    }
    report.invariant("connection", Value::Object(gamma_out));
    let dg = crate::tensor::covariant_derivative(&out.metric, &out.connection)?;
    let dt = crate::tensor::covariant_derivative(&out.cometric, &out.connection)?;
    report.flag("metric_parallel", dg.is_zero(), None);
    report.flag("cometric_parallel", dt.is_zero(), None);
    report.verdicts.push(if dg.is_zero() && dt.is_zero() {
        Verdict::holds("extension_parallel")
    } else {
        Verdict::fails("extension_parallel", json!(null))
    });
    Ok(report)
}

/// Decides whether a Jordan profile is controlled by the Nijenhuis tensor.
pub fn verify_controlled(profile_text: &str, n_cap: usize) -> Result<Report> {
    let profile = JordanProfile::parse(profile_text)?;
    let mut report = Report::new(
        "verify-controlled",
        json!({"profile": profile.to_string(), "n_cap": n_cap}),
    );
    report.invariant("profile_block_condition", json!(csd_predicate(&profile)));
    match controlled_type_verifier(&profile, n_cap)? {
        ControlledVerdict::Controlled {
            solution_dim,
            constrained_dim,
        } => {
            report.invariant("nijenhuis_solution_dimension", json!(solution_dim));
            report.invariant("kernel_condition_dimension", json!(constrained_dim));
            report
                .verdicts
                .push(Verdict::holds("type_controlled_by_nijenhuis"));
        }
        ControlledVerdict::NotControlled {
            shortest_block,
            witness,
        } => {
            let analysis = AnalysisSpec {
                kind: Kind::LieAlgebra,
                chart: Chart::standard(witness.n()),
                payload: Payload::Lie(witness.clone()),
                samples: vec![vec![Rational::from_integer(0.into()); witness.n()]],
                metric: None,
            };
            report.invariant("witness_document", serialize_spec(&analysis));
            report.verdicts.push(Verdict::fails(
                "type_controlled_by_nijenhuis",
                json!({
                    "non_involutive_kernel_level": shortest_block,
                    "witness": "see witness_document",
                }),
            ));
        }
    }
    Ok(report)
}
