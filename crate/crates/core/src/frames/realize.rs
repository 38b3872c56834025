//! Realization of a step-2 nilpotent bracket table as an exact frame field
//! on a chart, with the orbit-shift tensor expressed in that frame.

use std::sync::Arc;

use super::spec::{jacobi_check, LieFrameSpec};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, VectorFieldSpan};
use crate::scalar::{rational, Rational, ScalarField};
use crate::tensor::{lie_bracket, Chart, Symmetry, TensorField};

/// A chart, a frame of exact vector fields reproducing the bracket table,
/// and the orbit-shift tensor written in coordinates.
#[derive(Clone, Debug)]
pub struct Realization {
    pub chart: Arc<Chart>,
    pub frame: Vec<TensorField>,
    pub theta: TensorField,
}

fn is_two_step(spec: &LieFrameSpec) -> bool {
    let n = spec.n();
    let mut value_support = vec![false; n];
    for (_, coeffs) in spec.bracket_entries() {
        for (t, c) in coeffs.iter().enumerate() {
            if !num_traits::Zero::is_zero(c) {
                value_support[t] = true;
            }
        }
    }
    for (t, &hit) in value_support.iter().enumerate() {
        if !hit {
            continue;
        }
        for b in 0..n {
            if spec
                .bracket(t, b)
                .iter()
                .any(|c| !num_traits::Zero::is_zero(c))
            {
                return false;
            }
        }
    }
    true
}

/// Builds the frame e_a = ∂_a − ½ Σ c^k_{am} x^m ∂_k on the standard chart
/// and verifies [e_a, e_b] = c^k_{ab} e_k exactly. Only step-2 nilpotent
/// tables (all bracket values central) are supported.
pub fn realize_on_chart(spec: &LieFrameSpec) -> Result<Realization> {
    let (jacobi, witness) = jacobi_check(spec);
    if !jacobi {
        return Err(Error::Precondition(format!(
            "bracket table violates the Jacobi identity on basis triple {witness:?}"
        )));
    }
    if !is_two_step(spec) {
        return Err(Error::Unsupported(
            "realization supports step-2 nilpotent algebras only (all bracket values central)"
                .into(),
        ));
    }
    let n = spec.n();
    let chart = Chart::standard(n);
    let half = rational::ratio(-1, 2);
    let mut frame = Vec::with_capacity(n);
    for a in 0..n {
        let mut comps = vec![ScalarField::zero(n); n];
        comps[a] = ScalarField::one(n);
        for m in 0..n {
            for (k, c) in spec.bracket(a, m).iter().enumerate() {
                if num_traits::Zero::is_zero(c) {
                    continue;
                }
                let term = ScalarField::variable(m, n).scale(&(&half * c));
                comps[k] = &comps[k] + &term;
            }
        }
        frame.push(TensorField::from_vector(chart.clone(), comps));
    }
    // exact verification of the bracket relations
    for a in 0..n {
        for b in a + 1..n {
            let got = lie_bracket(&frame[a], &frame[b])?;
            let mut expected = TensorField::zero(chart.clone(), (1, 0), Symmetry::None);
            for (k, c) in spec.bracket(a, b).iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    expected = expected.add(&frame[k].scale_rational(c))?;
                }
            }
            if got.sub(&expected)?.is_zero() {
                continue;
            }
            return Err(Error::Precondition(format!(
                "realized frame fails the bracket relation for basis pair ({a}, {b})"
            )));
        }
    }
    // Θ maps each frame vector to its orbit predecessor: T = F·S·F⁻¹
    let f = Matrix::from_fn(n, n, |row, col| frame[col].to_vector()[row].clone());
    let f_inv = f
        .inverse()
        .ok_or_else(|| Error::Precondition("frame matrix is singular".into()))?;
    let shift = spec.theta_matrix().to_fields(n);
    let theta_matrix = f.matmul(&shift).matmul(&f_inv);
    let theta = TensorField::from_matrix11(chart.clone(), &theta_matrix);
    Ok(Realization {
        chart,
        frame,
        theta,
    })
}

/// Ker Θˡ of a realization: the span of the frame vectors in positions ≤ l
/// of each orbit.
pub fn realized_kernel_span(
    spec: &LieFrameSpec,
    realization: &Realization,
    l: usize,
    samples: &[Vec<Rational>],
) -> Result<VectorFieldSpan> {
    let mut gens = Vec::new();
    let mut rank = 0;
    for (o, &d) in spec.orbits().iter().enumerate() {
        for pos in 1..=d.min(l) {
            gens.push(realization.frame[spec.global_index(o, pos)].clone());
            rank += 1;
        }
    }
    VectorFieldSpan::new(realization.chart.clone(), gens, rank, samples.to_vec())
}
