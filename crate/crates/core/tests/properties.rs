// index loops mirror the coordinate formulas
#![allow(clippy::needless_range_loop)]

//! Randomized exact property suites for the module-level invariants.

mod common;

use common::*;
use rand::Rng;

use nijenhuis::frames::{
    frame_nijenhuis_vanishes, kernel_integrability_frame, realize_on_chart, realized_kernel_span,
    LieFrameSpec,
};
use nijenhuis::linalg::{distribution_integrability, span_membership, VectorFieldSpan};
use nijenhuis::obstructions::nijenhuis_11;
use nijenhuis::scalar::{rational, Rational, ScalarField};
use nijenhuis::tensor::{
    lie_bracket, lie_derivative_02, wedge_product, Chart, Symmetry, TensorField,
};

#[test]
fn scalar_field_axioms() {
    let mut rng = rng(0x51);
    let nvars = 3;
    let mut cases = 0;
    while cases < 500 {
        let a = random_field(&mut rng, nvars, 3);
        let b = random_field(&mut rng, nvars, 3);
        let c = random_field(&mut rng, nvars, 3);
        // associativity and distributivity
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        // additive inverse
        assert!((&a - &a).is_zero());
        // multiplicative inverse off the zero locus
        if !a.is_zero() {
            assert!(a.try_div(&a).unwrap().is_one());
        }
        cases += 1;
    }
}

#[test]
fn mixed_partials_commute_and_leibniz() {
    let mut rng = rng(0x52);
    let nvars = 3;
    let mut cases = 0;
    while cases < 100 {
        let f = random_field(&mut rng, nvars, 3);
        let g = random_field(&mut rng, nvars, 3);
        for i in 0..nvars {
            for j in i + 1..nvars {
                assert_eq!(f.partial(i).partial(j), f.partial(j).partial(i));
            }
            let lhs = (&f * &g).partial(i);
            let rhs = &(&f.partial(i) * &g) + &(&f * &g.partial(i));
            assert_eq!(lhs, rhs);
        }
        cases += 1;
    }
}

#[test]
fn wedge_graded_commutativity_and_associativity() {
    let mut rng = rng(0x53);
    for n in 3..=5usize {
        let chart = Chart::standard(n);
        for _ in 0..10 {
            let q = rng.gen_range(0..=2usize);
            let r = rng.gen_range(0..=2usize);
            let s = rng.gen_range(0..=1usize);
            let a = random_form(&mut rng, &chart, q, 1);
            let b = random_form(&mut rng, &chart, r, 1);
            let c = random_form(&mut rng, &chart, s, 1);
            let ab = wedge_product(&a, &b).unwrap();
            let ba = wedge_product(&b, &a).unwrap();
            let sign = if (q * r) % 2 == 0 { 1 } else { -1 };
            assert!(ab
                .sub(&ba.scale_rational(&rational::int(sign)))
                .unwrap()
                .is_zero());
            let left = wedge_product(&ab, &c).unwrap();
            let right = wedge_product(&a, &wedge_product(&b, &c).unwrap()).unwrap();
            assert!(left.sub(&right).unwrap().is_zero());
        }
    }
}

#[test]
fn lie_derivative_bilinearity_and_commutator() {
    let mut rng = rng(0x54);
    let chart = Chart::standard(3);
    for _ in 0..25 {
        let u = random_vector_field(&mut rng, &chart, 1);
        let v = random_vector_field(&mut rng, &chart, 1);
        let mut g = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        for i in 0..3 {
            for j in i..3 {
                g.set(&[], &[i, j], random_field(&mut rng, 3, 1));
            }
        }
        // rational bilinearity in the vector slot
        let a = rational::ratio(2, 3);
        let combo = u.scale_rational(&a).add(&v).unwrap();
        let lhs = lie_derivative_02(&combo, &g).unwrap();
        let rhs = lie_derivative_02(&u, &g)
            .unwrap()
            .scale_rational(&a)
            .add(&lie_derivative_02(&v, &g).unwrap())
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().is_zero());
        // and in the tensor slot
        let mut g2 = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        for i in 0..3 {
            for j in i..3 {
                g2.set(&[], &[i, j], random_field(&mut rng, 3, 1));
            }
        }
        let combo_g = g.scale_rational(&a).add(&g2).unwrap();
        let lhs_g = lie_derivative_02(&u, &combo_g).unwrap();
        let rhs_g = lie_derivative_02(&u, &g)
            .unwrap()
            .scale_rational(&a)
            .add(&lie_derivative_02(&u, &g2).unwrap())
            .unwrap();
        assert!(lhs_g.sub(&rhs_g).unwrap().is_zero());
        // £_{[u,v]} = £_u £_v − £_v £_u
        let bracket = lie_bracket(&u, &v).unwrap();
        let left = lie_derivative_02(&bracket, &g).unwrap();
        let right = lie_derivative_02(&u, &lie_derivative_02(&v, &g).unwrap())
            .unwrap()
            .sub(&lie_derivative_02(&v, &lie_derivative_02(&u, &g).unwrap()).unwrap())
            .unwrap();
        assert!(left.sub(&right).unwrap().is_zero());
    }
}

#[test]
fn nijenhuis_antisymmetry_and_shift_invariance() {
    let mut rng = rng(0x55);
    for _ in 0..10 {
        let chart = Chart::standard(2);
        let theta = random_tensor11(&mut rng, &chart, 2);
        let n = nijenhuis_11(&theta).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(n.component(&[k], &[i, j]), -&n.component(&[k], &[j, i]));
                }
            }
        }
        let a = random_rational(&mut rng);
        let mut shifted = theta.clone();
        for k in 0..2 {
            let v = &theta.component(&[k], &[k]) - &ScalarField::constant(a.clone(), 2);
            shifted.set(&[k], &[k], v);
        }
        let m = nijenhuis_11(&shifted).unwrap();
        assert!(n.sub(&m).unwrap().is_zero());
    }
}

#[test]
fn involutivity_invariant_under_unimodular_recombination() {
    let mut rng = rng(0x56);
    let chart = Chart::standard(3);
    let fields: Vec<(TensorField, TensorField)> = vec![
        (coord(&chart, 0), coord(&chart, 1)),
        (
            coord(&chart, 0),
            TensorField::from_vector(chart.clone(), vec![sf(0, 3), sf(1, 3), x(0, 3)]),
        ),
        (
            TensorField::from_vector(chart.clone(), vec![sf(1, 3), x(1, 3), sf(0, 3)]),
            coord(&chart, 2),
        ),
    ];
    for (a, b) in fields {
        let before = distribution_integrability(
            &VectorFieldSpan::new(chart.clone(), vec![a.clone(), b.clone()], 2, origin(3)).unwrap(),
        )
        .unwrap()
        .integrable;
        for _ in 0..5 {
            // unimodular recombination: a' = a + f·b, b' = b
            let f = random_field(&mut rng, 3, 1);
            let a2 = a.add(&b.scale(&f)).unwrap();
            let span =
                VectorFieldSpan::new(chart.clone(), vec![a2, b.clone()], 2, origin(3)).unwrap();
            assert_eq!(
                distribution_integrability(&span).unwrap().integrable,
                before
            );
        }
    }
}

#[test]
fn power_shift_identity_holds_for_arbitrary_tensors() {
    // Θ^{i+1}(Θ[v,w] − [v,Θw]) = Θ^i(Θ[Θv,w] − [Θv,Θw]) − Θ^i N(v,w),
    // with N(v,w) contracted from the computed obstruction components
    let mut rng = rng(0x5a);
    for _ in 0..15 {
        let n = 2 + (rng.gen_range(0..2usize));
        let chart = Chart::standard(n);
        let theta = random_tensor11(&mut rng, &chart, 1);
        let m = theta.matrix11();
        let nij = nijenhuis_11(&theta).unwrap();
        let v = random_vector_field(&mut rng, &chart, 1).to_vector();
        let w = random_vector_field(&mut rng, &chart, 1).to_vector();
        let bracket = |a: &[ScalarField], b: &[ScalarField]| {
            nijenhuis::tensor::lie_bracket(
                &TensorField::from_vector(chart.clone(), a.to_vec()),
                &TensorField::from_vector(chart.clone(), b.to_vec()),
            )
            .unwrap()
            .to_vector()
        };
        let mut n_vw = vec![ScalarField::zero(n); n];
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let c = nij.component(&[k], &[a, b]);
                    if !c.is_zero() {
                        n_vw[k] = &n_vw[k] + &(&(&c * &v[a]) * &w[b]);
                    }
                }
            }
        }
        let mv = m.apply(&v);
        let mw = m.apply(&w);
        for i in 0..3usize {
            let mi = m.pow(i);
            let lhs = {
                let inner = sub_vec(&m.apply(&bracket(&v, &w)), &bracket(&v, &mw));
                mi.matmul(&m).apply(&inner)
            };
            let rhs = {
                let inner = sub_vec(&m.apply(&bracket(&mv, &w)), &bracket(&mv, &mw));
                sub_vec(&mi.apply(&inner), &mi.apply(&n_vw))
            };
            for k in 0..n {
                assert_eq!(lhs[k], rhs[k], "identity fails at power {i}, component {k}");
            }
        }
    }
}

fn sub_vec(a: &[ScalarField], b: &[ScalarField]) -> Vec<ScalarField> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// Central-valued random bracket tables: sources outside the first orbit,
/// values inside it. Always Jacobi and step-2.
fn random_central_spec(rng: &mut rand_chacha::ChaCha8Rng) -> LieFrameSpec {
    let shapes: Vec<Vec<usize>> = vec![
        vec![2, 1, 1],
        vec![2, 2, 1],
        vec![3, 1, 1],
        vec![2, 2, 2],
        vec![3, 2, 1],
    ];
    let orbits = shapes[rng.gen_range(0..shapes.len())].clone();
    let mut spec = LieFrameSpec::new(orbits.clone()).unwrap();
    let n = spec.n();
    let mut sources = Vec::new();
    for o in 1..orbits.len() {
        for pos in 1..=orbits[o] {
            sources.push(spec.global_index(o, pos));
        }
    }
    let targets: Vec<usize> = (1..=orbits[0]).map(|k| spec.global_index(0, k)).collect();
    for ai in 0..sources.len() {
        for bi in ai + 1..sources.len() {
            if rng.gen_bool(0.5) {
                let mut coeffs = vec![Rational::from_integer(0.into()); n];
                let t = targets[rng.gen_range(0..targets.len())];
                coeffs[t] = random_rational(rng);
                spec.set_bracket(sources[ai], sources[bi], coeffs).unwrap();
            }
        }
    }
    spec
}

#[test]
fn frame_conditions_match_realized_tensor() {
    let mut rng = rng(0x57);
    let mut agreements = 0;
    let mut vanishing_seen = 0;
    let mut nonvanishing_seen = 0;
    while agreements < 25 {
        let spec = random_central_spec(&mut rng);
        let real = realize_on_chart(&spec).unwrap();
        let frame_flag = frame_nijenhuis_vanishes(&spec).0;
        let tensor_flag = nijenhuis_11(&real.theta).unwrap().is_zero();
        assert_eq!(
            frame_flag, tensor_flag,
            "frame and tensor routes must agree"
        );
        if frame_flag {
            vanishing_seen += 1;
        } else {
            nonvanishing_seen += 1;
        }
        // kernel conditions level by level
        let d1 = spec.profile().longest();
        for l in 1..d1 {
            let frame_kernel = kernel_integrability_frame(&spec, Some(l)).0;
            let span = realized_kernel_span(&spec, &real, l, &origin(spec.n())).unwrap();
            let dist = distribution_integrability(&span).unwrap().integrable;
            assert_eq!(frame_kernel, dist, "kernel level {l} must agree");
        }
        agreements += 1;
    }
    assert!(vanishing_seen > 0 && nonvanishing_seen > 0);
}

#[test]
fn shape_closed_tables_satisfy_the_difference_equation() {
    // tables that are functions of i alone, of j alone, or i+j plus a
    // function of s satisfy E(i,j,s) + E(i−1,j−1,s) = E(i−1,j,s) + E(i,j−1,s)
    let mut rng = rng(0x58);
    for _ in 0..200 {
        let fi: Vec<Rational> = (0..12).map(|_| random_rational(&mut rng)).collect();
        let fs: Vec<Rational> = (0..12).map(|_| random_rational(&mut rng)).collect();
        let table_i = |i: i64, _j: i64, _s: i64| fi[(i.rem_euclid(12)) as usize].clone();
        let table_j = |_i: i64, j: i64, _s: i64| fi[(j.rem_euclid(12)) as usize].clone();
        let table_sum = |i: i64, j: i64, s: i64| {
            Rational::from_integer((i + j).into()) + fs[(s.rem_euclid(12)) as usize].clone()
        };
        let i = rng.gen_range(-2i64..6);
        let j = rng.gen_range(-2i64..6);
        let s = rng.gen_range(-2i64..6);
        for table in [
            &table_i as &dyn Fn(i64, i64, i64) -> Rational,
            &table_j,
            &table_sum,
        ] {
            let lhs = table(i, j, s) + table(i - 1, j - 1, s);
            let rhs = table(i - 1, j, s) + table(i, j - 1, s);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn abelian_realizations_have_constant_components_in_a_commuting_frame() {
    for orbits in [vec![3usize, 1], vec![2, 2], vec![4, 2, 1]] {
        let spec = LieFrameSpec::abelian(orbits).unwrap();
        let real = realize_on_chart(&spec).unwrap();
        // the frame commutes
        for a in 0..real.frame.len() {
            for b in a + 1..real.frame.len() {
                assert!(lie_bracket(&real.frame[a], &real.frame[b])
                    .unwrap()
                    .is_zero());
            }
        }
        // and the tensor has constant components
        for ((_, _), v) in real.theta.entries() {
            assert!(v.is_constant());
        }
        assert!(frame_nijenhuis_vanishes(&spec).0);
        assert!(kernel_integrability_frame(&spec, None).0);
    }
}

#[test]
fn constructed_form_is_pointwise_decomposable() {
    use nijenhuis::constructions::build_nin_form;
    for (n, q) in [(5usize, 3usize), (6, 4)] {
        let out = build_nin_form(n, q).unwrap();
        let samples = vec![
            vec![rational::int(0); n],
            (0..n)
                .map(|i| rational::int(i as i64 + 1))
                .collect::<Vec<_>>(),
            (0..n)
                .map(|i| rational::ratio(1, i as i64 + 2))
                .collect::<Vec<_>>(),
        ];
        for pt in &samples {
            // evaluate the factor forms and re-wedge them as constants
            let chart = out.chart.clone();
            let constant_form = |f: &TensorField| -> TensorField {
                let mut c =
                    TensorField::zero(chart.clone(), (0, f.valence().1), Symmetry::Antisymmetric);
                for (key, value) in f.evaluate_at_point(pt).unwrap() {
                    c.set(&key.0, &key.1, ScalarField::constant(value, n));
                }
                c
            };
            let mut omega = TensorField::zero(chart.clone(), (0, 2), Symmetry::Antisymmetric);
            omega.set(&[], &[0, 1], sf(1, n));
            omega.set(&[], &[2, 3], sf(1, n));
            let mut product = wedge_product(&omega, &constant_form(&out.eta)).unwrap();
            for i in 5..q + 2 {
                let mut dxi = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
                dxi.set(&[], &[i], sf(1, n));
                product = wedge_product(&product, &dxi).unwrap();
            }
            assert!(product.sub(&constant_form(&out.zeta)).unwrap().is_zero());
        }
    }
}

#[test]
fn affine_tangent_images_commute() {
    use nijenhuis::constructions::build_affine_tangent;
    let base = Chart::standard(3);
    let w = TensorField::from_vector(base.clone(), vec![sf(0, 3), sf(1, 3), x(0, 3)]);
    let dist = VectorFieldSpan::new(base.clone(), vec![coord(&base, 0), w], 2, origin(3)).unwrap();
    let out = build_affine_tangent(&dist).unwrap();
    let m = out.theta.matrix11();
    let n = out.chart.dim();
    for a in 0..n {
        for b in a + 1..n {
            let va = TensorField::from_vector(out.chart.clone(), m.column(a));
            let vb = TensorField::from_vector(out.chart.clone(), m.column(b));
            assert!(lie_bracket(&va, &vb).unwrap().is_zero());
        }
    }
}

#[test]
fn span_membership_handles_functional_combinations() {
    let mut rng = rng(0x59);
    let chart = Chart::standard(3);
    let span = VectorFieldSpan::new(
        chart.clone(),
        vec![coord(&chart, 0), coord(&chart, 1)],
        2,
        origin(3),
    )
    .unwrap();
    for _ in 0..20 {
        let f = random_field(&mut rng, 3, 2);
        let g = random_field(&mut rng, 3, 2);
        let v = coord(&chart, 0)
            .scale(&f)
            .add(&coord(&chart, 1).scale(&g))
            .unwrap();
        assert!(span_membership(&v, &span).unwrap());
        let outside = v.add(&coord(&chart, 2)).unwrap();
        assert!(!span_membership(&outside, &span).unwrap());
    }
}
