//! The differential-geometric primitives, all computed exactly in chart
//! components.

use super::chart::Chart;
use super::connection::ConnectionCoefficients;
use super::field::{Symmetry, TensorField};
use crate::error::{Error, Result};
use crate::scalar::ScalarField;

/// [v,w]ᵏ = vⁱ∂ᵢwᵏ − wⁱ∂ᵢvᵏ for vector fields on one chart.
pub fn lie_bracket(v: &TensorField, w: &TensorField) -> Result<TensorField> {
    Chart::require_same(v.chart(), w.chart())?;
    if v.valence() != (1, 0) || w.valence() != (1, 0) {
        return Err(Error::UnsupportedValence(v.valence().0, v.valence().1));
    }
    let chart = v.chart().clone();
    let n = chart.dim();
    let vc = v.to_vector();
    let wc = w.to_vector();
    let comps = bracket_components(&vc, &wc, n);
    Ok(TensorField::from_vector(chart, comps))
}

/// Bracket on raw component vectors; used in inner loops.
pub(crate) fn bracket_components(
    v: &[ScalarField],
    w: &[ScalarField],
    n: usize,
) -> Vec<ScalarField> {
    (0..n)
        .map(|k| {
            let mut acc = ScalarField::zero(n);
            for i in 0..n {
                if !v[i].is_zero() {
                    acc = &acc + &(&v[i] * &w[k].partial(i));
                }
                if !w[i].is_zero() {
                    acc = &acc - &(&w[i] * &v[k].partial(i));
                }
            }
            acc
        })
        .collect()
}

/// Exterior derivative of an antisymmetric (0,q) tensor:
/// (dω)_{i₀…i_q} = Σ_a (−1)ᵃ ∂_{i_a} ω_{i₀…î_a…i_q}.
pub fn exterior_derivative(omega: &TensorField) -> Result<TensorField> {
    if omega.valence().0 != 0 || omega.symmetry() != Symmetry::Antisymmetric {
        return Err(Error::Precondition(
            "exterior derivative needs an antisymmetric (0,q) input".into(),
        ));
    }
    let q = omega.valence().1;
    let chart = omega.chart().clone();
    let n = chart.dim();
    let mut out = TensorField::zero(chart, (0, q + 1), Symmetry::Antisymmetric);
    if q + 1 > n {
        return Ok(out);
    }
    for idx in increasing_tuples(n, q + 1) {
        let mut acc = ScalarField::zero(n);
        for (a, &ia) in idx.iter().enumerate() {
            let mut rest = idx.clone();
            rest.remove(a);
            let d = omega.component(&[], &rest).partial(ia);
            if a % 2 == 0 {
                acc = &acc + &d;
            } else {
                acc = &acc - &d;
            }
        }
        out.set(&[], &idx, acc);
    }
    Ok(out)
}

/// Wedge product of antisymmetric (0,q) tensors stored on increasing keys.
pub fn wedge_product(alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
    Chart::require_same(alpha.chart(), beta.chart())?;
    for t in [alpha, beta] {
        if t.valence().0 != 0 || t.symmetry() != Symmetry::Antisymmetric {
            return Err(Error::Precondition(
                "wedge product needs antisymmetric (0,q) inputs".into(),
            ));
        }
    }
    let chart = alpha.chart().clone();
    let n = chart.dim();
    let q = alpha.valence().1 + beta.valence().1;
    let mut out = TensorField::zero(chart, (0, q), Symmetry::Antisymmetric);
    if q > n {
        return Ok(out);
    }
    for ((_, ja), ca) in alpha.entries() {
        for ((_, jb), cb) in beta.entries() {
            if let Some((merged, sign)) = merge_sign(ja, jb) {
                let mut v = ca * cb;
                if sign < 0 {
                    v = -&v;
                }
                out.add_to(&[], &merged, v);
            }
        }
    }
    Ok(out)
}

/// (£_v g)_{ij} = vᵏ∂ₖg_{ij} + g_{kj}∂ᵢvᵏ + g_{ik}∂ⱼvᵏ.
pub fn lie_derivative_02(v: &TensorField, g: &TensorField) -> Result<TensorField> {
    Chart::require_same(v.chart(), g.chart())?;
    if v.valence() != (1, 0) || g.valence() != (0, 2) {
        return Err(Error::UnsupportedValence(g.valence().0, g.valence().1));
    }
    let chart = g.chart().clone();
    let n = chart.dim();
    let vc = v.to_vector();
    let mut out = TensorField::zero(chart, (0, 2), g.symmetry());
    for i in 0..n {
        for j in 0..n {
            if g.symmetry() != Symmetry::None && j < i {
                continue;
            }
            let mut acc = ScalarField::zero(n);
            for k in 0..n {
                if !vc[k].is_zero() {
                    acc = &acc + &(&vc[k] * &g.component(&[], &[i, j]).partial(k));
                }
                let dvi = vc[k].partial(i);
                if !dvi.is_zero() {
                    acc = &acc + &(&g.component(&[], &[k, j]) * &dvi);
                }
                let dvj = vc[k].partial(j);
                if !dvj.is_zero() {
                    acc = &acc + &(&g.component(&[], &[i, k]) * &dvj);
                }
            }
            out.set(&[], &[i, j], acc);
        }
    }
    Ok(out)
}

/// Covariant derivative for valences (1,1), (0,2) and (2,0); the derivative
/// index is the first lower index of the result.
pub fn covariant_derivative(t: &TensorField, conn: &ConnectionCoefficients) -> Result<TensorField> {
    Chart::require_same(t.chart(), conn.chart())?;
    let chart = t.chart().clone();
    let n = chart.dim();
    match t.valence() {
        (1, 1) => {
            let mut out = TensorField::zero(chart, (1, 2), Symmetry::None);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = t.component(&[k], &[j]).partial(i);
                        for l in 0..n {
                            acc = &acc + &(&conn.get(k, i, l) * &t.component(&[l], &[j]));
                            acc = &acc - &(&conn.get(l, i, j) * &t.component(&[k], &[l]));
                        }
                        out.set(&[k], &[i, j], acc);
                    }
                }
            }
            Ok(out)
        }
        (0, 2) => {
            let mut out = TensorField::zero(chart, (0, 3), Symmetry::None);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = t.component(&[], &[j, k]).partial(i);
                        for l in 0..n {
                            acc = &acc - &(&conn.get(l, i, j) * &t.component(&[], &[l, k]));
                            acc = &acc - &(&conn.get(l, i, k) * &t.component(&[], &[j, l]));
                        }
                        out.set(&[], &[i, j, k], acc);
                    }
                }
            }
            Ok(out)
        }
        (2, 0) => {
            let mut out = TensorField::zero(chart, (2, 1), Symmetry::None);
            for j in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        let mut acc = t.component(&[j, k], &[]).partial(i);
                        for l in 0..n {
                            acc = &acc + &(&conn.get(j, i, l) * &t.component(&[l, k], &[]));
                            acc = &acc + &(&conn.get(k, i, l) * &t.component(&[j, l], &[]));
                        }
                        out.set(&[j, k], &[i], acc);
                    }
                }
            }
            Ok(out)
        }
        (p, q) => Err(Error::UnsupportedValence(p, q)),
    }
}

/// Strictly increasing index tuples of length q drawn from 0..n.
pub fn increasing_tuples(n: usize, q: usize) -> Vec<Vec<usize>> {
    if q > n {
        return Vec::new();
    }
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..q).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (q - i) {
                cur[i] += 1;
                for j in i + 1..q {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Merges two strictly increasing index lists, returning the sorted union
/// and the shuffle sign; None when they intersect.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    let mut sign = 1;
    for i in 1..merged.len() {
        let mut j = i;
        while j > 0 && merged[j - 1] > merged[j] {
            merged.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in merged.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((merged, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;
    use std::sync::Arc;

    fn sf(c: i64, n: usize) -> ScalarField {
        ScalarField::constant(int(c), n)
    }

    fn x(i: usize, n: usize) -> ScalarField {
        ScalarField::variable(i, n)
    }

    fn coord(chart: &Arc<Chart>, k: usize) -> TensorField {
        TensorField::coordinate_vector(chart.clone(), k)
    }

    #[test]
    fn coordinate_fields_commute() {
        let chart = Chart::standard(3);
        let b = lie_bracket(&coord(&chart, 0), &coord(&chart, 1)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn bracket_hand_expansions() {
        let chart = Chart::standard(3);
        let n = 3;
        // [x1 ∂2, ∂1] = -∂2
        let v = TensorField::from_vector(chart.clone(), vec![sf(0, n), x(0, n), sf(0, n)]);
        let b = lie_bracket(&v, &coord(&chart, 0)).unwrap();
        assert_eq!(b.to_vector(), vec![sf(0, n), sf(-1, n), sf(0, n)]);

        // [∂1, ∂2 + x1 ∂3] = ∂3
        let w = TensorField::from_vector(chart.clone(), vec![sf(0, n), sf(1, n), x(0, n)]);
        let b2 = lie_bracket(&coord(&chart, 0), &w).unwrap();
        assert_eq!(b2.to_vector(), vec![sf(0, n), sf(0, n), sf(1, n)]);
    }

    #[test]
    fn exterior_derivative_examples() {
        let n = 5;
        let chart = Chart::standard(n);
        // d(x1 dx2) = dx1 ∧ dx2
        let mut w = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
        w.set(&[], &[1], x(0, n));
        let dw = exterior_derivative(&w).unwrap();
        assert_eq!(dw.component(&[], &[0, 1]), sf(1, n));
        assert_eq!(dw.entries().count(), 1);

        // d(dx5 + x1 dx2 - x3 dx4) = dx1∧dx2 - dx3∧dx4
        let mut eta = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
        eta.set(&[], &[4], sf(1, n));
        eta.set(&[], &[1], x(0, n));
        eta.set(&[], &[3], -&x(2, n));
        let deta = exterior_derivative(&eta).unwrap();
        assert_eq!(deta.component(&[], &[0, 1]), sf(1, n));
        assert_eq!(deta.component(&[], &[2, 3]), sf(-1, n));
        assert_eq!(deta.entries().count(), 2);

        // d(d(anything)) = 0
        let dd = exterior_derivative(&deta).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn wedge_basics() {
        let n = 4;
        let chart = Chart::standard(n);
        let dx = |i: usize| {
            let mut f = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
            f.set(&[], &[i], sf(1, n));
            f
        };
        assert!(wedge_product(&dx(0), &dx(0)).unwrap().is_zero());
        let ab = wedge_product(&dx(0), &dx(1)).unwrap();
        let ba = wedge_product(&dx(1), &dx(0)).unwrap();
        assert_eq!(ab.component(&[], &[0, 1]), sf(1, n));
        assert_eq!(ba.component(&[], &[0, 1]), sf(-1, n));

        // (dx1∧dx2 + dx3∧dx4) ∧ (dx1∧dx2 - dx3∧dx4) = 0
        let mut plus = TensorField::zero(chart.clone(), (0, 2), Symmetry::Antisymmetric);
        plus.set(&[], &[0, 1], sf(1, n));
        plus.set(&[], &[2, 3], sf(1, n));
        let mut minus = TensorField::zero(chart.clone(), (0, 2), Symmetry::Antisymmetric);
        minus.set(&[], &[0, 1], sf(1, n));
        minus.set(&[], &[2, 3], sf(-1, n));
        assert!(wedge_product(&plus, &minus).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let n = 3;
        let chart = Chart::standard(n);
        let mut g = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        g.set(&[], &[0, 0], sf(1, n));
        // £_{∂2} (dx1⊗dx1) = 0
        assert!(lie_derivative_02(&coord(&chart, 1), &g).unwrap().is_zero());

        // £_{x1 ∂1} (dx1⊗dx1) = 2 dx1⊗dx1
        let v = TensorField::from_vector(chart.clone(), vec![x(0, n), sf(0, n), sf(0, n)]);
        let l = lie_derivative_02(&v, &g).unwrap();
        assert_eq!(l.component(&[], &[0, 0]), sf(2, n));
        assert_eq!(l.entries().count(), 1);

        // £_{∂3} (dx1⊗dx1 + (1+x3²) dx2⊗dx2) = 2 x3 dx2⊗dx2
        let mut g2 = g.clone();
        let one_plus = &ScalarField::one(n) + &(&x(2, n) * &x(2, n));
        g2.set(&[], &[1, 1], one_plus);
        let l2 = lie_derivative_02(&coord(&chart, 2), &g2).unwrap();
        assert_eq!(l2.component(&[], &[1, 1]), x(2, n).scale(&int(2)));
        assert_eq!(l2.entries().count(), 1);
    }

    #[test]
    fn flat_covariant_derivative_of_constants_vanishes() {
        let n = 2;
        let chart = Chart::standard(n);
        let flat = ConnectionCoefficients::flat(chart.clone());
        let mut theta = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        theta.set(&[0], &[1], sf(3, n));
        assert!(covariant_derivative(&theta, &flat).unwrap().is_zero());

        let mut g = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
        g.set(&[], &[0, 0], sf(1, n));
        g.set(&[], &[1, 1], sf(1, n));
        assert!(covariant_derivative(&g, &flat).unwrap().is_zero());
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
        assert_eq!(merge_sign(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_sign(&[0, 2], &[1]), Some((vec![0, 1, 2], -1)));
        assert_eq!(merge_sign(&[0], &[0]), None);
    }
}
