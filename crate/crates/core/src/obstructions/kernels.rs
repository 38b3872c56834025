//! Kernel-integrability obstructions: the morphism tensor Ñ, its
//! specialization N′ to symmetric (0,2) tensors, the companion N″ testing
//! projectability, and the family Nⁱ attached to a nilpotent (1,1) tensor.

use std::sync::Arc;

use super::background::{MorphismField, RiemannianBackground};
use crate::error::{Error, Result};
use crate::linalg::{
    certified_nilpotent_profile, distribution_integrability, rank_from_profile,
    IntegrabilityVerdict, JordanProfile, Matrix, VectorFieldSpan,
};
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{
    exterior_derivative, increasing_tuples, lie_derivative_02, wedge_product, Chart, Symmetry,
    TensorField,
};

/// Whether an obstruction tensor vanishes, with the first nonzero slot and
/// component on failure.
#[derive(Clone, Debug)]
pub struct VanishingOutcome {
    pub vanishes: bool,
    pub witness: Option<SlotWitness>,
}

/// Slot assignment and form component exhibiting a nonzero value.
#[derive(Clone, Debug)]
pub struct SlotWitness {
    pub slots: Vec<usize>,
    pub component: Vec<usize>,
    pub value: ScalarField,
}

/// A kernel obstruction together with its independently computed
/// distribution-level verdict; the two routes are required to agree.
#[derive(Clone, Debug)]
pub struct KernelObstruction {
    pub obstruction: VanishingOutcome,
    pub kernel_rank: usize,
    pub kernel_integrability: IntegrabilityVerdict,
}

fn one_form(chart: &Arc<Chart>, comps: &[ScalarField]) -> TensorField {
    TensorField::from_one_form(chart.clone(), comps.to_vec())
}

/// Ñ(v, v₁,…,v_r) = d(Θ*v) ∧ Θ*v₁ ∧ … ∧ Θ*v_r over basis sections of the
/// domain bundle, as an (r+2)-form for each slot tuple.
fn n_tilde_components(morphism: &MorphismField) -> Result<VanishingOutcome> {
    let chart = morphism.chart().clone();
    let k = morphism.domain_rank();
    let r = morphism.rank();
    let images: Vec<TensorField> = (0..k)
        .map(|a| one_form(&chart, &morphism.one_form(a)))
        .collect();
    let differentials: Vec<TensorField> = images
        .iter()
        .map(exterior_derivative)
        .collect::<Result<_>>()?;
    for tuple in increasing_tuples(k, r) {
        let mut product: Option<TensorField> = None;
        for &a in &tuple {
            product = Some(match product {
                None => images[a].clone(),
                Some(p) => wedge_product(&p, &images[a])?,
            });
        }
        for v in 0..k {
            let form = match &product {
                None => differentials[v].clone(),
                Some(p) => wedge_product(&differentials[v], p)?,
            };
            let first = form
                .entries()
                .next()
                .map(|(key, value)| (key.clone(), value.clone()));
            if let Some((key, value)) = first {
                let mut slots = vec![v];
                slots.extend(tuple.iter().copied());
                return Ok(VanishingOutcome {
                    vanishes: false,
                    witness: Some(SlotWitness {
                        slots,
                        component: key.1,
                        value,
                    }),
                });
            }
        }
    }
    Ok(VanishingOutcome {
        vanishes: true,
        witness: None,
    })
}

/// The generic kernel of a morphism as a vector-field span, with
/// denominators cleared so sample evaluation stays pole-free.
pub fn kernel_span(morphism: &MorphismField) -> Result<VectorFieldSpan> {
    let chart = morphism.chart().clone();
    let n = chart.dim();
    let basis = morphism.rows().nullspace();
    let generators: Vec<TensorField> = basis
        .into_iter()
        .map(|v| TensorField::from_vector(chart.clone(), clear_denominators(v, n)))
        .collect();
    VectorFieldSpan::new(
        chart,
        generators,
        n - morphism.rank(),
        morphism.sample_points().to_vec(),
    )
}

fn clear_denominators(v: Vec<ScalarField>, n: usize) -> Vec<ScalarField> {
    let mut common = crate::scalar::Polynomial::one(n);
    for f in &v {
        if !f.den().is_constant() {
            common = &common * f.den();
        }
    }
    if common.is_constant() {
        return v;
    }
    let c = ScalarField::from_poly(common);
    v.into_iter().map(|f| &f * &c).collect()
}

/// Vanishing of Ñ, cross-validated against involutivity of the morphism's
/// kernel distribution; disagreement indicates an inconsistent rank
/// declaration and is reported as an error.
pub fn n_tilde(morphism: &MorphismField) -> Result<KernelObstruction> {
    let obstruction = n_tilde_components(morphism)?;
    let span = kernel_span(morphism)?;
    let kernel_integrability = distribution_integrability(&span)?;
    if obstruction.vanishes != kernel_integrability.integrable {
        return Err(Error::RankInconsistency(
            "kernel obstruction and distribution involutivity disagree; the declared rank cannot be constant"
                .into(),
        ));
    }
    Ok(KernelObstruction {
        obstruction,
        kernel_rank: span.rank(),
        kernel_integrability,
    })
}

/// Builds the morphism v ↦ g(v,·) of a symmetric (0,2) tensor of constant
/// rank r.
pub fn sym02_morphism(
    g: &TensorField,
    r: usize,
    samples: &[Vec<Rational>],
) -> Result<MorphismField> {
    if g.valence() != (0, 2) || g.symmetry() != Symmetry::Symmetric {
        return Err(Error::Precondition(
            "expected a symmetric (0,2) tensor".into(),
        ));
    }
    MorphismField::new(g.chart().clone(), g.matrix02(), r, samples.to_vec())
}

/// N′(v, v₁,…,v_r) = d[g(v,·)] ∧ g(v₁,·) ∧ … ∧ g(v_r,·): the kernel
/// obstruction of a constant-rank symmetric (0,2) tensor.
pub fn n_prime(g: &TensorField, r: usize, samples: &[Vec<Rational>]) -> Result<KernelObstruction> {
    n_tilde(&sym02_morphism(g, r, samples)?)
}

/// A trivialization of the tangent bundle containing a trivialization of
/// the morphism's kernel: the cleared kernel basis first, completed by the
/// lowest-indexed coordinate fields keeping the frame generically
/// invertible.
pub fn adapted_trivialization(morphism: &MorphismField) -> Result<Vec<Vec<ScalarField>>> {
    let chart = morphism.chart().clone();
    let n = chart.dim();
    let span = kernel_span(morphism)?;
    let mut frame: Vec<Vec<ScalarField>> =
        span.generators().iter().map(|g| g.to_vector()).collect();
    for k in 0..n {
        if frame.len() == n {
            break;
        }
        let mut trial = frame.clone();
        trial.push(TensorField::coordinate_vector(chart.clone(), k).to_vector());
        let m = Matrix::from_fn(n, trial.len(), |row, col| trial[col][row].clone());
        if m.rank() == trial.len() {
            frame = trial;
        }
    }
    if frame.len() != n {
        return Err(Error::RankInconsistency(
            "could not complete the kernel basis to a frame".into(),
        ));
    }
    Ok(frame)
}

/// N″(w, u, v₁,…,v_r) = {[£g](w,u)} ∧ g(v₁,·) ∧ … ∧ g(v_r,·), with the
/// hidden Lie-derivative slot ranging over a fixed trivialization of the
/// tangent bundle. The trivialization must contain a trivialization of
/// Ker g; a kernel-adapted frame is built when none is supplied, and the
/// vanishing flag does not depend on the admissible choice.
pub fn n_double_prime(
    g: &TensorField,
    r: usize,
    samples: &[Vec<Rational>],
    trivialization: Option<&[Vec<ScalarField>]>,
) -> Result<VanishingOutcome> {
    let morphism = sym02_morphism(g, r, samples)?;
    let chart = g.chart().clone();
    let n = chart.dim();
    let frame: Vec<Vec<ScalarField>> = match trivialization {
        Some(f) => f.to_vec(),
        None => adapted_trivialization(&morphism)?,
    };
    if frame.len() != n {
        return Err(Error::Precondition(
            "trivialization must contain dim-many fields".into(),
        ));
    }
    // the frame must contain a kernel trivialization: its fields annihilated
    // by g have to span the whole kernel
    let gm = morphism.rows();
    let in_kernel: Vec<&Vec<ScalarField>> = frame
        .iter()
        .filter(|f| gm.apply(f).iter().all(|c| c.is_zero()))
        .collect();
    if n > r {
        if in_kernel.is_empty() {
            return Err(Error::Precondition(
                "trivialization must contain a trivialization of the kernel".into(),
            ));
        }
        let km = Matrix::from_fn(n, in_kernel.len(), |row, col| in_kernel[col][row].clone());
        if km.rank() != n - r {
            return Err(Error::Precondition(
                "trivialization must contain a trivialization of the kernel".into(),
            ));
        }
    }
    let frame_matrix = Matrix::from_fn(n, n, |row, col| frame[col][row].clone());
    let coframe = frame_matrix.inverse().ok_or_else(|| {
        Error::Precondition("trivialization is not a frame (singular matrix)".into())
    })?;
    // £ of g along each trivialization field, once
    let lie: Vec<TensorField> = frame
        .iter()
        .map(|f| lie_derivative_02(&TensorField::from_vector(chart.clone(), f.clone()), g))
        .collect::<Result<_>>()?;
    let g_rows: Vec<TensorField> = (0..n)
        .map(|a| one_form(&chart, &morphism.one_form(a)))
        .collect();
    for tuple in increasing_tuples(n, r) {
        let mut product: Option<TensorField> = None;
        for &a in &tuple {
            product = Some(match product {
                None => g_rows[a].clone(),
                Some(p) => wedge_product(&p, &g_rows[a])?,
            });
        }
        for w in 0..n {
            for u in w..n {
                // the formal one-form v ↦ [£_v g](w,u) expanded in the coframe
                let mut lambda = vec![ScalarField::zero(n); n];
                for t in 0..n {
                    let val = lie[t].component(&[], &[w, u]);
                    if val.is_zero() {
                        continue;
                    }
                    for idx in 0..n {
                        lambda[idx] = &lambda[idx] + &(&val * coframe.get(t, idx));
                    }
                }
                let lf = one_form(&chart, &lambda);
                let form = match &product {
                    None => lf,
                    Some(p) => wedge_product(&lf, p)?,
                };
                let first = form
                    .entries()
                    .next()
                    .map(|(key, value)| (key.clone(), value.clone()));
                if let Some((key, value)) = first {
                    let mut slots = vec![w, u];
                    slots.extend(tuple.iter().copied());
                    return Ok(VanishingOutcome {
                        vanishes: false,
                        witness: Some(SlotWitness {
                            slots,
                            component: key.1,
                            value,
                        }),
                    });
                }
            }
        }
    }
    Ok(VanishingOutcome {
        vanishes: true,
        witness: None,
    })
}

/// The kernel obstructions Nⁱ, 1 ≤ i < d₁, of an algebraically constant
/// nilpotent (1,1) tensor: Ñ applied to the metric-lowered power Θⁱ. Each
/// flag is cross-validated against involutivity of Ker Θⁱ.
pub fn kernel_nijenhuis_family(
    theta: &TensorField,
    bg: &RiemannianBackground,
    samples: &[Vec<Rational>],
) -> Result<(JordanProfile, Vec<(usize, KernelObstruction)>)> {
    if theta.valence() != (1, 1) {
        return Err(Error::UnsupportedValence(
            theta.valence().0,
            theta.valence().1,
        ));
    }
    Chart::require_same(theta.chart(), bg.chart())?;
    let chart = theta.chart().clone();
    let n = chart.dim();
    let m = theta.matrix11();
    let profile = certified_nilpotent_profile(&m, samples)?;
    let g = bg.metric().to_fields(n);
    let mut members = Vec::new();
    let mut power = m.clone();
    for i in 1..profile.longest() {
        if i > 1 {
            power = power.matmul(&m);
        }
        let rank = rank_from_profile(&profile, i);
        let rows = g.matmul(&power);
        let morphism = MorphismField::new(chart.clone(), rows, rank, samples.to_vec())?;
        members.push((i, n_tilde(&morphism)?));
    }
    Ok((profile, members))
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

    #[test]
    fn identity_morphism_on_the_plane_vanishes_trivially() {
        // r = 2 on a 2-chart: the obstruction is a 4-form in dimension 2
        let chart = Chart::standard(2);
        let rows = Matrix::identity(2, &ScalarField::zero(2));
        let m = MorphismField::new(chart, rows, 2, origin(2)).unwrap();
        let out = n_tilde(&m).unwrap();
        assert!(out.obstruction.vanishes);
        assert!(out.kernel_integrability.integrable);
        assert_eq!(out.kernel_rank, 0);
    }

    #[test]
    fn contact_form_morphism_fails() {
        // rows spanned by θ⊗θ with θ = dx3 − x1 dx2, rank 1
        let n = 3;
        let chart = Chart::standard(n);
        let theta = [sf(0, n), -&x(0, n), sf(1, n)];
        let rows = Matrix::from_fn(1, n, |_, j| theta[j].clone());
        let m = MorphismField::new(chart, rows, 1, origin(n)).unwrap();
        let out = n_tilde(&m).unwrap();
        assert!(!out.obstruction.vanishes);
        assert!(!out.kernel_integrability.integrable);
        assert!(out.obstruction.witness.is_some());
    }

    #[test]
    fn constant_coefficient_rows_vanish() {
        // image spanned by dx1, dx2 in dimension 3
        let n = 3;
        let chart = Chart::standard(n);
        let rows = Matrix::from_fn(2, n, |a, j| if a == j { sf(1, n) } else { sf(0, n) });
        let m = MorphismField::new(chart, rows, 2, origin(n)).unwrap();
        assert!(n_tilde(&m).unwrap().obstruction.vanishes);
    }

    #[test]
    fn redundant_domain_sections_are_handled() {
        // three domain sections, rank two: a contact pair plus a functional
        // combination of it, on a 4-chart
        let n = 4;
        let chart = Chart::standard(n);
        let theta1 = [sf(0, n), -&x(0, n), sf(1, n), sf(0, n)];
        let theta2 = [sf(0, n), sf(0, n), sf(0, n), sf(1, n)];
        let rows = Matrix::from_fn(3, n, |a, j| match a {
            0 => theta1[j].clone(),
            1 => theta2[j].clone(),
            _ => &(&theta1[j] * &x(1, n)) + &theta2[j],
        });
        let m = MorphismField::new(chart, rows, 2, origin(n)).unwrap();
        let out = n_tilde(&m).unwrap();
        assert!(!out.obstruction.vanishes);
        assert!(!out.kernel_integrability.integrable);
        assert_eq!(out.kernel_rank, 2);
    }

    fn diag_g(chart: &std::sync::Arc<Chart>, entries: Vec<ScalarField>) -> TensorField {
        let n = chart.dim();
        let mut g = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        for (i, e) in entries.into_iter().enumerate().take(n) {
            g.set(&[], &[i, i], e);
        }
        g
    }

    #[test]
    fn n_prime_examples() {
        let n = 3;
        let chart = Chart::standard(n);
        // g = dx1⊗dx1, rank 1: kernel span{∂2,∂3} integrable, N' = 0
        let g = diag_g(&chart, vec![sf(1, n), sf(0, n), sf(0, n)]);
        assert!(n_prime(&g, 1, &origin(n)).unwrap().obstruction.vanishes);

        // g = θ⊗θ with contact θ = dx3 − x1 dx2: N' ≠ 0
        let mut gc = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        gc.set(&[], &[2, 2], sf(1, n));
        gc.set(&[], &[1, 2], -&x(0, n));
        gc.set(&[], &[1, 1], &x(0, n) * &x(0, n));
        let out = n_prime(&gc, 1, &origin(n)).unwrap();
        assert!(!out.obstruction.vanishes);
        assert!(!out.kernel_integrability.integrable);

        // rank 1 on a surface: the obstruction is a 3-form in dimension 2
        let chart2 = Chart::standard(2);
        let g2 = diag_g(&chart2, vec![sf(1, 2), sf(0, 2)]);
        let out2 = n_prime(&g2, 1, &origin(2)).unwrap();
        assert!(out2.obstruction.vanishes);
        assert_eq!(out2.kernel_rank, 1);
    }

    #[test]
    fn n_double_prime_examples() {
        let n = 3;
        let chart = Chart::standard(n);
        // constant g of rank 2: N'' = 0
        let g0 = diag_g(&chart, vec![sf(1, n), sf(1, n), sf(0, n)]);
        assert!(n_double_prime(&g0, 2, &origin(n), None).unwrap().vanishes);

        // g = dx1⊗dx1 + (1 + x3²) dx2⊗dx2: £_{∂3} g ≠ 0 and Ker g = span{∂3}
        let one_plus = &sf(1, n) + &(&x(2, n) * &x(2, n));
        let g1 = diag_g(&chart, vec![sf(1, n), one_plus, sf(0, n)]);
        let out = n_double_prime(&g1, 2, &origin(n), None).unwrap();
        assert!(!out.vanishes);

        // g = dx1⊗dx1 + x1 dx2⊗dx2 away from x1 = 0: ∂3-derivatives vanish
        let g2 = diag_g(&chart, vec![sf(1, n), x(0, n), sf(0, n)]);
        let pts = vec![vec![int(1), int(0), int(0)], vec![int(2), int(1), int(-1)]];
        assert!(n_double_prime(&g2, 2, &pts, None).unwrap().vanishes);
    }

    #[test]
    fn kernel_family_of_a_constant_jordan_tensor() {
        // profile 2 1: constant Jordan form, all kernels integrable
        let n = 3;
        let chart = Chart::standard(n);
        let mut theta = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        theta.set(&[0], &[1], sf(1, n));
        let bg = RiemannianBackground::euclidean(chart);
        let (profile, members) = kernel_nijenhuis_family(&theta, &bg, &origin(n)).unwrap();
        assert_eq!(profile.blocks(), &[2, 1]);
        assert_eq!(members.len(), 1);
        assert!(members[0].1.obstruction.vanishes);
    }

    #[test]
    fn kernel_family_detects_the_counterexample_realization() {
        // the realized three-orbit algebra has a nonzero first kernel
        // obstruction, while the almost-tangent output over the zero
        // distribution has every member vanishing
        let spec = crate::frames::build_counterexample(1, 1, 2).unwrap();
        let real = crate::frames::realize_on_chart(&spec).unwrap();
        let bg = RiemannianBackground::euclidean(real.chart.clone());
        let (profile, members) = kernel_nijenhuis_family(&real.theta, &bg, &origin(4)).unwrap();
        assert_eq!(profile.blocks(), &[2, 1, 1]);
        assert_eq!(members.len(), 1);
        assert!(!members[0].1.obstruction.vanishes);
        assert!(!members[0].1.kernel_integrability.integrable);

        let base = Chart::standard(2);
        let dist = crate::linalg::VectorFieldSpan::trivial(base);
        let out = crate::constructions::build_affine_tangent(&dist).unwrap();
        let bg = RiemannianBackground::euclidean(out.chart.clone());
        let (profile, members) = kernel_nijenhuis_family(&out.theta, &bg, &out.samples).unwrap();
        assert_eq!(profile.blocks(), &[2, 2]);
        assert!(members.iter().all(|(_, m)| m.obstruction.vanishes));
    }
}
