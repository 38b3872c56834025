//! The Nijenhuis tensor of a (1,1) tensor field, its covariant-derivative
//! form, and the projection taking any torsion-free connection to one
//! parallelizing a square root of c·Id.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{
    covariant_derivative, lie_bracket, Chart, ConnectionCoefficients, Symmetry, TensorField,
};

/// N(v,w) = Θ[Θv,w] + Θ[v,Θw] − [Θv,Θw] − Θ²[v,w], evaluated on all
/// coordinate-field pairs. The result is a (1,2) tensor, antisymmetric in
/// the lower pair.
pub fn nijenhuis_11(theta: &TensorField) -> Result<TensorField> {
    if theta.valence() != (1, 1) {
        return Err(Error::UnsupportedValence(
            theta.valence().0,
            theta.valence().1,
        ));
    }
    let chart = theta.chart().clone();
    let n = chart.dim();
    let m = theta.matrix11();
    let columns: Vec<Vec<ScalarField>> = (0..n).map(|i| m.column(i)).collect();
    let mut out = TensorField::zero(chart.clone(), (1, 2), Symmetry::Antisymmetric);
    for i in 0..n {
        for j in i + 1..n {
            // [Θ∂i, ∂j] = −∂j(Θ∂i) and [∂i, Θ∂j] = ∂i(Θ∂j) componentwise
            let b1: Vec<ScalarField> = columns[i].iter().map(|c| -&c.partial(j)).collect();
            let b2: Vec<ScalarField> = columns[j].iter().map(|c| c.partial(i)).collect();
            let t1 = m.apply(&b1);
            let t2 = m.apply(&b2);
            let b3 = lie_bracket(
                &TensorField::from_vector(chart.clone(), columns[i].clone()),
                &TensorField::from_vector(chart.clone(), columns[j].clone()),
            )?
            .to_vector();
            // the Θ²[∂i,∂j] term vanishes for coordinate fields
            for k in 0..n {
                let v = &(&t1[k] + &t2[k]) - &b3[k];
                out.add_to(&[k], &[i, j], v);
            }
        }
    }
    Ok(out)
}

/// The same tensor computed through any torsion-free connection:
/// N(v,w) = [Θ∇_vΘ − ∇_{Θv}Θ]w + [∇_{Θw}Θ − Θ∇_wΘ]v.
pub fn nijenhuis_via_connection(
    theta: &TensorField,
    conn: &ConnectionCoefficients,
) -> Result<TensorField> {
    if theta.valence() != (1, 1) {
        return Err(Error::UnsupportedValence(
            theta.valence().0,
            theta.valence().1,
        ));
    }
    Chart::require_same(theta.chart(), conn.chart())?;
    let chart = theta.chart().clone();
    let n = chart.dim();
    let m = theta.matrix11();
    let nabla = covariant_derivative(theta, conn)?;
    // D[i] = ∇_{∂i}Θ as a matrix
    let d: Vec<Matrix<ScalarField>> = (0..n)
        .map(|i| Matrix::from_fn(n, n, |k, j| nabla.component(&[k], &[i, j])))
        .collect();
    let mut out = TensorField::zero(chart, (1, 2), Symmetry::Antisymmetric);
    for i in 0..n {
        for j in i + 1..n {
            // (Θ·D_i − Θ^l_i D_l)·e_j + (Θ^l_j D_l − Θ·D_j)·e_i
            for k in 0..n {
                let mut acc = ScalarField::zero(n);
                for l in 0..n {
                    acc = &acc + &(m.get(k, l) * d[i].get(l, j));
                    acc = &acc - &(m.get(l, i) * d[l].get(k, j));
                    acc = &acc + &(m.get(l, j) * d[l].get(k, i));
                    acc = &acc - &(m.get(k, l) * d[j].get(l, i));
                }
                out.add_to(&[k], &[i, j], acc);
            }
        }
    }
    Ok(out)
}

/// Output of [`connection_projection`].
#[derive(Clone, Debug)]
pub struct ConnectionProjection {
    /// B_v w in coordinates: B[k][(i,j)] with v = ∂i, w = ∂j.
    pub correction: TensorField,
    /// True iff B is symmetric in (v,w), equivalently iff the Nijenhuis
    /// tensor of J vanishes.
    pub symmetric: bool,
    /// ∇̂ = ∇ + B, present exactly when `symmetric`; it is then torsion-free
    /// and makes J parallel.
    pub projected: Option<ConnectionCoefficients>,
}

/// For J with J² = c·Id and a torsion-free ∇, forms
/// 4c·B_v w = 2J(∇_v J)w + J(∇_w J)v + (∇_{Jw} J)v and the projected
/// connection ∇ + B.
pub fn connection_projection(
    j: &TensorField,
    c: &Rational,
    conn: &ConnectionCoefficients,
) -> Result<ConnectionProjection> {
    use num_traits::Zero;
    if j.valence() != (1, 1) {
        return Err(Error::UnsupportedValence(j.valence().0, j.valence().1));
    }
    Chart::require_same(j.chart(), conn.chart())?;
    if c.is_zero() {
        return Err(Error::Precondition(
            "the square constant c must be nonzero".into(),
        ));
    }
    let chart = j.chart().clone();
    let n = chart.dim();
    let m = j.matrix11();
    let c_id = Matrix::identity(n, m.proto()).scale(&ScalarField::constant(c.clone(), n));
    if m.matmul(&m) != c_id {
        return Err(Error::Precondition("J² = c·Id fails exactly".into()));
    }
    let nabla = covariant_derivative(j, conn)?;
    let d: Vec<Matrix<ScalarField>> = (0..n)
        .map(|i| Matrix::from_fn(n, n, |k, jj| nabla.component(&[k], &[i, jj])))
        .collect();
    let quarter = ScalarField::constant((Rational::from_integer(4.into()) * c).recip(), n);
    let mut b = TensorField::zero(chart.clone(), (1, 2), Symmetry::None);
    for i in 0..n {
        let jd_i = Matrix::from_fn(n, n, |k, q| {
            let mut acc = ScalarField::zero(n);
            for l in 0..n {
                acc = &acc + &(m.get(k, l) * d[i].get(l, q));
            }
            acc
        });
        for jj in 0..n {
            for k in 0..n {
                let mut acc = jd_i.get(k, jj).scale(&crate::scalar::rational::int(2));
                // J(∇_w J)v with w = ∂j, v = ∂i
                for l in 0..n {
                    acc = &acc + &(m.get(k, l) * d[jj].get(l, i));
                    // (∇_{Jw} J)v = J^l_j (∇_l J) v
                    acc = &acc + &(m.get(l, jj) * d[l].get(k, i));
                }
                b.set(&[k], &[i, jj], &acc * &quarter);
            }
        }
    }
    let mut symmetric = true;
    'outer: for i in 0..n {
        for jj in i + 1..n {
            for k in 0..n {
                if b.component(&[k], &[i, jj]) != b.component(&[k], &[jj, i]) {
                    symmetric = false;
                    break 'outer;
                }
            }
        }
    }
    let projected = if symmetric {
        let mut hat = ConnectionCoefficients::flat(chart.clone());
        for k in 0..n {
            for i in 0..n {
                for jj in i..n {
                    let v = &conn.get(k, i, jj) + &b.component(&[k], &[i, jj]);
                    hat.set(k, i, jj, v);
                }
            }
        }
        Some(hat)
    } else {
        None
    };
    Ok(ConnectionProjection {
        correction: b,
        symmetric,
        projected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, ratio};
    use crate::scalar::Rational;

    fn sf(c: i64, n: usize) -> ScalarField {
        ScalarField::constant(int(c), n)
    }

    fn x(i: usize, n: usize) -> ScalarField {
        ScalarField::variable(i, n)
    }

    #[test]
    fn constant_tensors_have_zero_nijenhuis() {
        let chart = Chart::standard(3);
        let mut theta = TensorField::zero(chart, (1, 1), Symmetry::None);
        theta.set(&[0], &[1], sf(2, 3));
        theta.set(&[2], &[0], sf(-5, 3));
        assert!(nijenhuis_11(&theta).unwrap().is_zero());
    }

    #[test]
    fn hand_expanded_example_on_the_plane() {
        // Θ = x2 ∂1⊗dx1: N(∂1,∂2) = −x2 ∂1
        let chart = Chart::standard(2);
        let mut theta = TensorField::zero(chart, (1, 1), Symmetry::None);
        theta.set(&[0], &[0], x(1, 2));
        let n = nijenhuis_11(&theta).unwrap();
        assert_eq!(n.component(&[0], &[0, 1]), -&x(1, 2));
        assert_eq!(n.entries().count(), 1);
    }

    #[test]
    fn antisymmetry_and_shift_invariance() {
        let chart = Chart::standard(2);
        let mut theta = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        theta.set(&[0], &[0], x(1, 2));
        theta.set(&[1], &[0], &x(0, 2) * &x(1, 2));
        let n1 = nijenhuis_11(&theta).unwrap();
        assert_eq!(n1.component(&[0], &[0, 1]), -&n1.component(&[0], &[1, 0]));

        // Θ and Θ − a·Id share the Nijenhuis tensor
        let mut shifted = theta.clone();
        for k in 0..2 {
            let v = &theta.component(&[k], &[k]) - &ScalarField::constant(ratio(7, 3), 2);
            shifted.set(&[k], &[k], v);
        }
        let n2 = nijenhuis_11(&shifted).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(n1.component(&[k], &[i, j]), n2.component(&[k], &[i, j]));
                }
            }
        }
    }

    #[test]
    fn connection_route_agrees_with_bracket_route() {
        let chart = Chart::standard(2);
        let n = 2;
        let mut theta = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        theta.set(&[0], &[0], x(1, n));
        theta.set(&[1], &[1], &x(0, n) * &x(0, n));
        theta.set(&[0], &[1], sf(3, n));
        let mut conn = ConnectionCoefficients::flat(chart.clone());
        conn.set(0, 0, 1, x(0, n));
        conn.set(1, 1, 1, x(1, n));
        let a = nijenhuis_11(&theta).unwrap();
        let b = nijenhuis_via_connection(&theta, &conn).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(a.component(&[k], &[i, j]), b.component(&[k], &[i, j]));
                }
            }
        }
    }

    fn check_projection(j: TensorField, c: Rational, conn: ConnectionCoefficients) {
        let out = connection_projection(&j, &c, &conn).unwrap();
        assert!(out.symmetric);
        let hat = out.projected.unwrap();
        assert!(covariant_derivative(&j, &hat).unwrap().is_zero());
    }

    #[test]
    fn complex_structure_on_the_plane() {
        let chart = Chart::standard(2);
        let mut j = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        j.set(&[0], &[1], sf(-1, 2));
        j.set(&[1], &[0], sf(1, 2));
        check_projection(j, int(-1), ConnectionCoefficients::flat(chart));
    }

    #[test]
    fn variable_complex_structure_on_the_plane() {
        // J = [[0, −(1+x1²)], [1/(1+x1²), 0]], J² = −Id, flat ∇
        let chart = Chart::standard(2);
        let one_plus = &ScalarField::one(2) + &(&x(0, 2) * &x(0, 2));
        let mut j = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        j.set(&[0], &[1], -&one_plus);
        j.set(&[1], &[0], ScalarField::one(2).try_div(&one_plus).unwrap());
        assert!(nijenhuis_11(&j).unwrap().is_zero());
        check_projection(j, int(-1), ConnectionCoefficients::flat(chart));
    }

    #[test]
    fn paracomplex_structure_with_nonflat_connection() {
        let chart = Chart::standard(2);
        let mut j = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        j.set(&[0], &[0], sf(1, 2));
        j.set(&[1], &[1], sf(-1, 2));
        let mut conn = ConnectionCoefficients::flat(chart.clone());
        conn.set(0, 0, 1, x(1, 2));
        conn.set(1, 0, 0, &x(0, 2) + &sf(2, 2));
        check_projection(j, int(1), conn);
    }

    #[test]
    fn rejects_wrong_square() {
        let chart = Chart::standard(2);
        let mut j = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        j.set(&[0], &[1], sf(-1, 2));
        j.set(&[1], &[0], sf(1, 2));
        assert!(connection_projection(&j, &int(1), &ConnectionCoefficients::flat(chart)).is_err());
    }

    #[test]
    fn antisymmetrized_correction_recovers_the_obstruction() {
        // 4c(B_v w − B_w v) = N(v,w) even when N does not vanish: a twisted
        // square root of −Id in dimension 4
        let n = 4;
        let chart = Chart::standard(n);
        let f = &sf(1, n) + &(&x(1, n) * &x(1, n));
        let mut j = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
        j.set(&[0], &[1], sf(-1, n));
        j.set(&[1], &[0], sf(1, n));
        j.set(&[2], &[3], -&f);
        j.set(&[3], &[2], ScalarField::one(n).try_div(&f).unwrap());
        let nij = nijenhuis_11(&j).unwrap();
        assert!(!nij.is_zero());
        let out =
            connection_projection(&j, &int(-1), &ConnectionCoefficients::flat(chart)).unwrap();
        assert!(!out.symmetric);
        assert!(out.projected.is_none());
        let four_c = sf(-4, n);
        for i in 0..n {
            for jj in i + 1..n {
                for k in 0..n {
                    let anti = &out.correction.component(&[k], &[i, jj])
                        - &out.correction.component(&[k], &[jj, i]);
                    assert_eq!(&anti * &four_c, nij.component(&[k], &[i, jj]));
                }
            }
        }
    }
}
