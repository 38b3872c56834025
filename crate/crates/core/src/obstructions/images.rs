//! Image-integrability obstruction for (2,0) tensors and the
//! restriction-inverse machinery deciding the bivector case.

use super::background::RiemannianBackground;
use super::hodge::{contraction_22, star_scaled};
use super::kernels::{SlotWitness, VanishingOutcome};
use crate::error::{Error, Result};
use crate::linalg::{distribution_integrability, IntegrabilityVerdict, Matrix, VectorFieldSpan};
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{increasing_tuples, lie_bracket, Chart, Symmetry, TensorField};

/// The image distribution of a (2,0) tensor: the span of its columns
/// ξ ↦ Θ(·,ξ) over the coordinate coframe.
pub fn image_span(
    theta: &TensorField,
    r: usize,
    samples: &[Vec<Rational>],
) -> Result<VectorFieldSpan> {
    if theta.valence() != (2, 0) {
        return Err(Error::UnsupportedValence(
            theta.valence().0,
            theta.valence().1,
        ));
    }
    let chart = theta.chart().clone();
    let n = chart.dim();
    let m = theta.matrix20();
    let generators: Vec<TensorField> = (0..n)
        .map(|j| TensorField::from_vector(chart.clone(), m.column(j)))
        .collect();
    let nonzero: Vec<TensorField> = generators.into_iter().filter(|g| !g.is_zero()).collect();
    VectorFieldSpan::new(chart, nonzero, r, samples.to_vec())
}

/// Result of the image obstruction.
#[derive(Clone, Debug)]
pub struct NHatOutcome {
    pub obstruction: VanishingOutcome,
    pub image_integrability: IntegrabilityVerdict,
}

/// N̂(ξ,ξ¹,…,ξʳ,η,η¹,…,ηʳ) = Ω[Θξ, Θη], where Ω is the metric contraction
/// of the starred r-vectors Θξ¹∧…∧Θξʳ and Θη¹∧…∧Θηʳ, viewed through the
/// background metric as an endomorphism applied to the bracket. Vanishing is
/// cross-validated against involutivity of the image distribution.
pub fn n_hat(
    theta: &TensorField,
    r: usize,
    bg: &RiemannianBackground,
    samples: &[Vec<Rational>],
) -> Result<NHatOutcome> {
    if theta.valence() != (2, 0) || theta.symmetry() == Symmetry::None {
        return Err(Error::Precondition(
            "expected a symmetric or antisymmetric (2,0) tensor".into(),
        ));
    }
    Chart::require_same(theta.chart(), bg.chart())?;
    let chart = theta.chart().clone();
    let n = chart.dim();
    let span = image_span(theta, r, samples)?;
    let image_integrability = distribution_integrability(&span)?;

    // the zero tensor has nothing to obstruct
    if r == 0 {
        return Ok(NHatOutcome {
            obstruction: VanishingOutcome {
                vanishes: true,
                witness: None,
            },
            image_integrability,
        });
    }
    let m = theta.matrix20();
    let columns: Vec<Vec<ScalarField>> = (0..n).map(|j| m.column(j)).collect();
    // brackets [Θ dx^a, Θ dx^b], a < b
    let mut brackets = std::collections::BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            let br = lie_bracket(
                &TensorField::from_vector(chart.clone(), columns[a].clone()),
                &TensorField::from_vector(chart.clone(), columns[b].clone()),
            )?;
            brackets.insert((a, b), br.to_vector());
        }
    }
    // full-rank case: the starred wedges are scalars and Ω projects onto a
    // zero-dimensional orthocomplement, so the obstruction is identically 0
    if r == n {
        if !image_integrability.integrable {
            return Err(Error::RankInconsistency(
                "full-rank image failed the involutivity test".into(),
            ));
        }
        return Ok(NHatOutcome {
            obstruction: VanishingOutcome {
                vanishes: true,
                witness: None,
            },
            image_integrability,
        });
    }
    let g = bg.metric();
    let tuples = increasing_tuples(n, r);
    // starred wedge of image columns per coframe tuple
    let mut stars = Vec::with_capacity(tuples.len());
    for tuple in &tuples {
        let mut wedge = TensorField::zero(chart.clone(), (r, 0), Symmetry::Antisymmetric);
        for key in increasing_tuples(n, r) {
            let minor = Matrix::from_fn(r, r, |p, q| columns[tuple[q]][key[p]].clone());
            wedge.set(&key, &[], minor.det());
        }
        stars.push(star_scaled(&wedge, bg)?);
    }

    let mut obstruction = VanishingOutcome {
        vanishes: true,
        witness: None,
    };
    'search: for (ti, tuple_xi) in tuples.iter().enumerate() {
        if stars[ti].is_zero() {
            continue;
        }
        for (tj, tuple_eta) in tuples.iter().enumerate() {
            if stars[tj].is_zero() {
                continue;
            }
            let omega = contraction_22(&stars[ti], &stars[tj], bg)?;
            if omega.is_zero() {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
                    let x = &brackets[&key];
                    // Ω♯ applied to the bracket: Ωⁱʲ g_{jk} Xᵏ
                    for i in 0..n {
                        let mut acc = ScalarField::zero(n);
                        for j in 0..n {
                            for k in 0..n {
                                let gjk = g.get(j, k);
                                if num_traits::Zero::is_zero(gjk) || x[k].is_zero() {
                                    continue;
                                }
                                let o = omega.component(&[i, j], &[]);
                                if o.is_zero() {
                                    continue;
                                }
                                acc = &acc + &(&o * &x[k]).scale(gjk);
                            }
                        }
                        if sign < 0 {
                            acc = -&acc;
                        }
                        if !acc.is_zero() {
                            let mut slots = vec![a];
                            slots.extend(tuple_xi.iter().copied());
                            slots.push(b);
                            slots.extend(tuple_eta.iter().copied());
                            obstruction = VanishingOutcome {
                                vanishes: false,
                                witness: Some(SlotWitness {
                                    slots,
                                    component: vec![i],
                                    value: acc,
                                }),
                            };
                            break 'search;
                        }
                    }
                }
            }
        }
    }

    if obstruction.vanishes != image_integrability.integrable {
        return Err(Error::RankInconsistency(
            "image obstruction and distribution involutivity disagree; the declared rank cannot be constant"
                .into(),
        ));
    }
    Ok(NHatOutcome {
        obstruction,
        image_integrability,
    })
}

/// Output of [`restriction_inverse`].
#[derive(Clone, Debug)]
pub struct RestrictionOutcome {
    /// Original column indices chosen as a basis of the image.
    pub basis_columns: Vec<usize>,
    /// The induced nondegenerate (2,0) tensor on the image, in that basis.
    pub restriction: Matrix<ScalarField>,
    /// Its inverse: a leafwise 2-form (antisymmetric case) or metric
    /// (symmetric case) on the image.
    pub inverse: Matrix<ScalarField>,
    pub image_integrable: bool,
    /// Leafwise exterior-derivative test of the inverse along the image
    /// distribution; None when the image is not integrable.
    pub leafwise_closed: Option<bool>,
    /// Basis triple and value witnessing non-closedness.
    pub closedness_witness: Option<(usize, usize, usize, ScalarField)>,
}

/// Restriction of a constant-rank (2,0) tensor to its image, the inverse of
/// the restriction, and the intrinsic leafwise-closedness test
/// dω(u,v,w) = Σ_cyc u·ω(v,w) − Σ_cyc ω([u,v],w) on spanning sections.
pub fn restriction_inverse(
    theta: &TensorField,
    r: usize,
    samples: &[Vec<Rational>],
) -> Result<RestrictionOutcome> {
    if theta.valence() != (2, 0) || theta.symmetry() == Symmetry::None {
        return Err(Error::Precondition(
            "expected a symmetric or antisymmetric (2,0) tensor".into(),
        ));
    }
    if r == 0 {
        return Err(Error::Precondition(
            "restriction needs positive rank".into(),
        ));
    }
    let chart = theta.chart().clone();
    let n = chart.dim();
    let span = image_span(theta, r, samples)?;
    let m = theta.matrix20();

    // deterministic basis: lowest-indexed independent columns
    let mut basis_columns = Vec::with_capacity(r);
    for j in 0..n {
        if basis_columns.len() == r {
            break;
        }
        let mut trial = basis_columns.clone();
        trial.push(j);
        let cand = Matrix::from_fn(n, trial.len(), |row, c| m.get(row, trial[c]).clone());
        if cand.rank() == trial.len() {
            basis_columns = trial;
        }
    }
    if basis_columns.len() != r {
        return Err(Error::RankInconsistency(
            "could not extract an image basis of the declared rank".into(),
        ));
    }
    let w = Matrix::from_fn(n, r, |row, c| m.get(row, basis_columns[c]).clone());

    // dual rows: invert an r×r row submatrix of W, zero elsewhere
    let wt = w.transpose();
    let mut rows_pick = Vec::with_capacity(r);
    for row in 0..n {
        if rows_pick.len() == r {
            break;
        }
        let mut trial = rows_pick.clone();
        trial.push(row);
        let cand = Matrix::from_fn(trial.len(), r, |a, b| wt.get(b, trial[a]).clone());
        if cand.transpose().rank() == trial.len() {
            rows_pick = trial;
        }
    }
    let w_rows = Matrix::from_fn(r, r, |a, b| w.get(rows_pick[a], b).clone());
    let w_rows_inv = w_rows
        .inverse()
        .ok_or_else(|| Error::RankInconsistency("image basis rows are singular".into()))?;
    let mut dual = Matrix::zero(r, n, &ScalarField::zero(n));
    for a in 0..r {
        for (b, &row) in rows_pick.iter().enumerate() {
            dual.set(a, row, w_rows_inv.get(a, b).clone());
        }
    }
    debug_assert_eq!(dual.matmul(&w), Matrix::identity(r, &ScalarField::zero(n)));

    let restriction = dual.matmul(&m).matmul(&dual.transpose());
    if restriction.det().is_zero() {
        return Err(Error::RankInconsistency(
            "restriction to the image is degenerate, contradicting constant rank".into(),
        ));
    }
    for p in samples {
        if restriction.eval(p)?.det() == Rational::from_integer(0.into()) {
            return Err(Error::RankInconsistency(
                "restriction is singular at a sample point, contradicting constant rank".into(),
            ));
        }
    }
    let inverse = restriction
        .inverse()
        .ok_or_else(|| Error::RankInconsistency("restriction is not invertible".into()))?;

    let verdict = distribution_integrability(&span)?;
    if !verdict.integrable {
        return Ok(RestrictionOutcome {
            basis_columns,
            restriction,
            inverse,
            image_integrable: false,
            leafwise_closed: None,
            closedness_witness: None,
        });
    }

    // sections w_a = basis columns; bracket coefficients in that basis
    let sections: Vec<Vec<ScalarField>> = (0..r).map(|a| w.column(a)).collect();
    let mut bracket_coeffs = std::collections::BTreeMap::new();
    for a in 0..r {
        for b in a + 1..r {
            let br = lie_bracket(
                &TensorField::from_vector(chart.clone(), sections[a].clone()),
                &TensorField::from_vector(chart.clone(), sections[b].clone()),
            )?
            .to_vector();
            let coeffs = w.solve(&br).ok_or_else(|| {
                Error::RankInconsistency(
                    "bracket of image sections left the image despite involutivity".into(),
                )
            })?;
            bracket_coeffs.insert((a, b), coeffs);
        }
    }
    let omega = |a: usize, b: usize| inverse.get(a, b).clone();
    let domega_on = |coeffs: &[ScalarField], d: usize| {
        let mut acc = ScalarField::zero(n);
        for (c, coeff) in coeffs.iter().enumerate() {
            if !coeff.is_zero() {
                acc = &acc + &(coeff * &omega(c, d));
            }
        }
        acc
    };
    let directional = |a: usize, f: &ScalarField| {
        let mut acc = ScalarField::zero(n);
        for k in 0..n {
            if !sections[a][k].is_zero() {
                acc = &acc + &(&sections[a][k] * &f.partial(k));
            }
        }
        acc
    };
    let mut leafwise_closed = true;
    let mut closedness_witness = None;
    'triples: for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                let mut val = directional(a, &omega(b, c));
                val = &val - &directional(b, &omega(a, c));
                val = &val + &directional(c, &omega(a, b));
                val = &val - &domega_on(&bracket_coeffs[&(a, b)], c);
                val = &val + &domega_on(&bracket_coeffs[&(a, c)], b);
                val = &val - &domega_on(&bracket_coeffs[&(b, c)], a);
                if !val.is_zero() {
                    leafwise_closed = false;
                    closedness_witness = Some((a, b, c, val));
                    break 'triples;
                }
            }
        }
    }
    Ok(RestrictionOutcome {
        basis_columns,
        restriction,
        inverse,
        image_integrable: true,
        leafwise_closed: Some(leafwise_closed),
        closedness_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;

    fn sf(c: i64, n: usize) -> ScalarField {
        ScalarField::constant(int(c), n)
    }

    fn x(i: usize, n: usize) -> ScalarField {
        ScalarField::variable(i, n)
    }

    fn origin(n: usize) -> Vec<Vec<Rational>> {
        vec![vec![int(0); n]]
    }

    fn bg(n: usize) -> RiemannianBackground {
        RiemannianBackground::euclidean(Chart::standard(n))
    }

    #[test]
    fn flat_symmetric_tensor_has_integrable_image() {
        // Θ = ∂1⊙∂1 + ∂2⊙∂2 on R³
        let n = 3;
        let chart = Chart::standard(n);
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Symmetric);
        t.set(&[0, 0], &[], sf(1, n));
        t.set(&[1, 1], &[], sf(1, n));
        let out = n_hat(&t, 2, &bg(n), &origin(n)).unwrap();
        assert!(out.obstruction.vanishes);
        assert!(out.image_integrability.integrable);
    }

    #[test]
    fn twisted_symmetric_tensor_fails() {
        // Θ = v⊙v + w⊙w with v = ∂1, w = ∂2 + x1 ∂3: [v,w] = ∂3 ∉ Im Θ
        let n = 3;
        let chart = Chart::standard(n);
        let v = [sf(1, n), sf(0, n), sf(0, n)];
        let w = [sf(0, n), sf(1, n), x(0, n)];
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Symmetric);
        for i in 0..n {
            for j in i..n {
                let val = &(&v[i] * &v[j]) + &(&w[i] * &w[j]);
                t.set(&[i, j], &[], val);
            }
        }
        let out = n_hat(&t, 2, &bg(n), &origin(n)).unwrap();
        assert!(!out.obstruction.vanishes);
        assert!(!out.image_integrability.integrable);
    }

    #[test]
    fn plane_bivector_is_closed_on_leaves() {
        // Θ = ∂1∧∂2 on R³
        let n = 3;
        let chart = Chart::standard(n);
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Antisymmetric);
        t.set(&[0, 1], &[], sf(1, n));
        let out = n_hat(&t, 2, &bg(n), &origin(n)).unwrap();
        assert!(out.obstruction.vanishes);
        let rest = restriction_inverse(&t, 2, &origin(n)).unwrap();
        assert!(rest.image_integrable);
        assert_eq!(rest.leafwise_closed, Some(true));
        // restriction in basis (col 1, col 2) is the standard symplectic 2x2
        assert_eq!(rest.restriction.get(0, 1), &sf(1, n));
    }

    #[test]
    fn inverse_of_nonclosed_form_is_not_integrable() {
        // Θ = inverse of ω = dx1∧dx2 + (1+x1) dx3∧dx4 on R⁴:
        // N̂ = 0 (image is everything) but dω ≠ 0
        let n = 4;
        let chart = Chart::standard(n);
        let one_plus = &sf(1, n) + &x(0, n);
        let inv = ScalarField::one(n).try_div(&one_plus).unwrap();
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Antisymmetric);
        t.set(&[0, 1], &[], sf(1, n));
        t.set(&[2, 3], &[], inv);
        let out = n_hat(&t, 4, &bg(n), &origin(n)).unwrap();
        assert!(out.obstruction.vanishes);
        assert!(out.image_integrability.integrable);
        let rest = restriction_inverse(&t, 4, &origin(n)).unwrap();
        assert_eq!(rest.leafwise_closed, Some(false));
        // sections are the Θ-columns (−∂2, ∂1, −f∂4, f∂3); the derivative of
        // the inverse form only sees x1, so the witness triple is (1,2,3)
        let (a, b, c, _) = rest.closedness_witness.unwrap();
        assert_eq!((a, b, c), (1, 2, 3));
    }

    #[test]
    fn rank_one_symmetric_restriction() {
        // Θ = ∂1⊙∂1: restriction (1), inverse (1)
        let n = 2;
        let chart = Chart::standard(n);
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Symmetric);
        t.set(&[0, 0], &[], sf(1, n));
        let rest = restriction_inverse(&t, 1, &origin(n)).unwrap();
        assert_eq!(rest.restriction.get(0, 0), &sf(1, n));
        assert_eq!(rest.inverse.get(0, 0), &sf(1, n));
        assert_eq!(rest.leafwise_closed, Some(true));
        assert_eq!(rest.basis_columns, vec![0]);
    }

    #[test]
    fn contact_bivector_image_detected_nonintegrable() {
        // Θ = v∧w with v = ∂1, w = ∂2 + x1∂3
        let n = 3;
        let chart = Chart::standard(n);
        let v = [sf(1, n), sf(0, n), sf(0, n)];
        let w = [sf(0, n), sf(1, n), x(0, n)];
        let mut t = TensorField::zero(chart, (2, 0), Symmetry::Antisymmetric);
        for i in 0..n {
            for j in i + 1..n {
                let val = &(&v[i] * &w[j]) - &(&v[j] * &w[i]);
                t.set(&[i, j], &[], val);
            }
        }
        let out = n_hat(&t, 2, &bg(n), &origin(n)).unwrap();
        assert!(!out.obstruction.vanishes);
        let rest = restriction_inverse(&t, 2, &origin(n)).unwrap();
        assert!(!rest.image_integrable);
        assert_eq!(rest.leafwise_closed, None);
    }
}
