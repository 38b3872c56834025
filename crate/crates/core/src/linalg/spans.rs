//! Distributions as spans of vector fields, with the involutivity and
//! projectability predicates.
//!
//! Constant rank is certified in the decidable sense used throughout this
//! crate: the generic symbolic rank of the generator matrix must equal its
//! rank at every user-supplied sample point. When samples disagree with the
//! generic rank the span is rejected rather than guessed at.

use std::sync::Arc;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{lie_bracket, Chart, TensorField};

#[derive(Clone, Debug)]
pub struct VectorFieldSpan {
    chart: Arc<Chart>,
    generators: Vec<TensorField>,
    declared_rank: usize,
    sample_points: Vec<Vec<Rational>>,
}

/// Outcome of an involutivity test, with the offending bracket on failure.
#[derive(Clone, Debug)]
pub struct IntegrabilityVerdict {
    pub integrable: bool,
    pub witness: Option<BracketWitness>,
}

/// A pair of generators whose bracket escapes the span.
#[derive(Clone, Debug)]
pub struct BracketWitness {
    pub generator_i: usize,
    pub generator_j: usize,
    pub bracket: TensorField,
}

impl VectorFieldSpan {
    /// Builds a span and certifies its declared rank, generically and at
    /// every sample point.
    pub fn new(
        chart: Arc<Chart>,
        generators: Vec<TensorField>,
        declared_rank: usize,
        sample_points: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        for g in &generators {
            Chart::require_same(&chart, g.chart())?;
            if g.valence() != (1, 0) {
                return Err(Error::UnsupportedValence(g.valence().0, g.valence().1));
            }
        }
        let span = VectorFieldSpan {
            chart,
            generators,
            declared_rank,
            sample_points,
        };
        span.certify_rank()?;
        Ok(span)
    }

    /// The zero distribution.
    pub fn trivial(chart: Arc<Chart>) -> Self {
        VectorFieldSpan {
            chart,
            generators: Vec::new(),
            declared_rank: 0,
            sample_points: Vec::new(),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn generators(&self) -> &[TensorField] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.declared_rank
    }

    pub fn sample_points(&self) -> &[Vec<Rational>] {
        &self.sample_points
    }

    /// Generators as columns of an n×k matrix.
    pub fn generator_matrix(&self) -> Option<Matrix<ScalarField>> {
        if self.generators.is_empty() {
            return None;
        }
        let n = self.chart.dim();
        let cols: Vec<Vec<ScalarField>> = self.generators.iter().map(|g| g.to_vector()).collect();
        Some(Matrix::from_fn(n, cols.len(), |r, c| cols[c][r].clone()))
    }

    fn certify_rank(&self) -> Result<()> {
        let Some(m) = self.generator_matrix() else {
            return if self.declared_rank == 0 {
                Ok(())
            } else {
                Err(Error::RankInconsistency(
                    "empty generator list with nonzero declared rank".into(),
                ))
            };
        };
        let generic = m.rank();
        if generic != self.declared_rank {
            return Err(Error::RankInconsistency(format!(
                "declared rank {} but generic rank {generic}",
                self.declared_rank
            )));
        }
        for p in &self.sample_points {
            let at = m.eval(p)?.rank();
            if at != self.declared_rank {
                let pt = p
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::RankInconsistency(format!(
                    "declared rank {} but rank {at} at sample ({pt})",
                    self.declared_rank
                )));
            }
        }
        Ok(())
    }
}

/// Decides whether v is a ScalarField-linear combination of the span's
/// generators, by solving the exact linear system and checking the residual
/// is identically zero.
pub fn span_membership(v: &TensorField, span: &VectorFieldSpan) -> Result<bool> {
    Chart::require_same(v.chart(), span.chart())?;
    if v.valence() != (1, 0) {
        return Err(Error::UnsupportedValence(v.valence().0, v.valence().1));
    }
    if v.is_zero() {
        return Ok(true);
    }
    let Some(m) = span.generator_matrix() else {
        return Ok(false);
    };
    if m.rank() < span.rank() {
        return Err(Error::RankInconsistency("degenerate span".into()));
    }
    Ok(m.solve(&v.to_vector()).is_some())
}

/// Involutivity: every pairwise bracket of generators must lie back in the
/// span. On failure the offending pair and bracket are returned.
pub fn distribution_integrability(span: &VectorFieldSpan) -> Result<IntegrabilityVerdict> {
    let gens = span.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let b = lie_bracket(&gens[i], &gens[j])?;
            if !span_membership(&b, span)? {
                return Ok(IntegrabilityVerdict {
                    integrable: false,
                    witness: Some(BracketWitness {
                        generator_i: i,
                        generator_j: j,
                        bracket: b,
                    }),
                });
            }
        }
    }
    Ok(IntegrabilityVerdict {
        integrable: true,
        witness: None,
    })
}

/// Projectability of the distribution Z along the integrable distribution V:
/// the intersection Z ∩ V must have constant dimension (generic rank of the
/// stacked generator matrix agrees with its rank at every sample point) and
/// [V, Z] ⊆ V + Z.
pub fn distribution_projectability(v: &VectorFieldSpan, z: &VectorFieldSpan) -> Result<bool> {
    Chart::require_same(v.chart(), z.chart())?;
    let vi = distribution_integrability(v)?;
    if !vi.integrable {
        return Err(Error::Precondition(
            "projectability requires the base distribution to be integrable".into(),
        ));
    }
    let mut stacked: Vec<TensorField> = v.generators().to_vec();
    stacked.extend(z.generators().iter().cloned());
    if stacked.is_empty() {
        return Ok(true);
    }
    let mut samples: Vec<Vec<Rational>> = v.sample_points().to_vec();
    for p in z.sample_points() {
        if !samples.contains(p) {
            samples.push(p.clone());
        }
    }
    let n = v.chart().dim();
    let cols: Vec<Vec<ScalarField>> = stacked.iter().map(|g| g.to_vector()).collect();
    let m = Matrix::from_fn(n, cols.len(), |r, c| cols[c][r].clone());
    let generic = m.rank();
    for p in &samples {
        if m.eval(p)?.rank() != generic {
            return Err(Error::RankInconsistency(
                "intersection dimension is not constant on the sample set".into(),
            ));
        }
    }
    let sum_span = VectorFieldSpan::new(v.chart().clone(), stacked, generic, samples)?;
    for gv in v.generators() {
        for gz in z.generators() {
            let b = lie_bracket(gv, gz)?;
            if !span_membership(&b, &sum_span)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
