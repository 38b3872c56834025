//! Hodge star on multivectors and the metric contraction of multivector
//! pairs, with the chart's coordinate order taken as positively oriented.

use num_traits::One;

use super::background::RiemannianBackground;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rational, Rational, ScalarField};
use crate::tensor::{Symmetry, TensorField};

use crate::tensor::increasing_tuples as increasing;

/// Lowers an antisymmetric (r,0) tensor with the background metric:
/// (α♭)_I = Σ_K α^K det(g[K,I]) over increasing K.
fn lower(alpha: &TensorField, bg: &RiemannianBackground) -> Vec<(Vec<usize>, ScalarField)> {
    let n = bg.dim();
    let r = alpha.valence().0;
    let g = bg.metric();
    let mut out = Vec::new();
    for i_idx in increasing(n, r) {
        let mut acc = ScalarField::zero(n);
        for (key, coeff) in alpha.entries() {
            let k_idx = &key.0;
            let minor = Matrix::from_fn(r.max(1), r.max(1), |a, b| {
                if r == 0 {
                    Rational::one()
                } else {
                    g.get(k_idx[a], i_idx[b]).clone()
                }
            });
            let d = if r == 0 { Rational::one() } else { minor.det() };
            acc = &acc + &coeff.scale(&d);
        }
        out.push((i_idx, acc));
    }
    out
}

/// Sign of the permutation sending (idx, complement) to (0,…,n−1).
fn complement_sign(idx: &[usize], n: usize) -> (Vec<usize>, i32) {
    let mut comp = Vec::with_capacity(n - idx.len());
    for k in 0..n {
        if !idx.contains(&k) {
            comp.push(k);
        }
    }
    let mut perm: Vec<usize> = idx.iter().chain(comp.iter()).copied().collect();
    let mut sign = 1;
    for i in 1..perm.len() {
        let mut j = i;
        while j > 0 && perm[j - 1] > perm[j] {
            perm.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (comp, sign)
}

/// The volume-scaled star: √det(g) times the metric Hodge star of an
/// antisymmetric (r,0) tensor. Always exact; for the Euclidean background it
/// is the Hodge star itself.
pub fn star_scaled(alpha: &TensorField, bg: &RiemannianBackground) -> Result<TensorField> {
    if alpha.valence().1 != 0 || alpha.symmetry() != Symmetry::Antisymmetric {
        return Err(Error::Precondition(
            "star needs an antisymmetric (r,0) input".into(),
        ));
    }
    let n = bg.dim();
    let r = alpha.valence().0;
    if r > n {
        return Err(Error::IndexRange(format!(
            "multivector degree {r} exceeds dimension {n}"
        )));
    }
    let chart = alpha.chart().clone();
    let mut out = TensorField::zero(chart, (n - r, 0), Symmetry::Antisymmetric);
    for (i_idx, low) in lower(alpha, bg) {
        if low.is_zero() {
            continue;
        }
        let (comp, sign) = complement_sign(&i_idx, n);
        let v = if sign < 0 { -&low } else { low };
        out.add_to(&comp, &[], v);
    }
    Ok(out)
}

/// The Hodge star. Exact only when det(g) is a perfect rational square
/// (always true for the Euclidean default); otherwise the volume
/// normalization is irrational and an error is returned.
pub fn hodge_star(alpha: &TensorField, bg: &RiemannianBackground) -> Result<TensorField> {
    let scaled = star_scaled(alpha, bg)?;
    let det = bg.det();
    let root = rational::exact_sqrt(&det).ok_or_else(|| {
        Error::Unsupported(format!(
            "volume normalization √{det} is irrational for this metric"
        ))
    })?;
    Ok(scaled.scale_rational(&root.recip()))
}

/// Metric contraction of two antisymmetric (s,0) tensors down to a (2,0)
/// tensor: βⁱʲ = Aⁱ ⁱ²…ⁱˢ Bʲ ʲ²…ʲˢ g_{i₂j₂}…g_{i_sj_s}, summed over all
/// indices as written. Evaluated through increasing-tuple minors; the
/// brute-force index sum is the test oracle for this code.
pub fn contraction_22(
    a: &TensorField,
    b: &TensorField,
    bg: &RiemannianBackground,
) -> Result<TensorField> {
    if a.valence() != b.valence() || a.valence().1 != 0 {
        return Err(Error::Precondition(
            "contraction needs two (s,0) multivectors".into(),
        ));
    }
    for t in [a, b] {
        if t.symmetry() != Symmetry::Antisymmetric {
            return Err(Error::Precondition(
                "contraction needs antisymmetric inputs".into(),
            ));
        }
    }
    let n = bg.dim();
    let s = a.valence().0;
    if s == 0 {
        return Err(Error::Precondition(
            "contraction needs degree at least one".into(),
        ));
    }
    let g = bg.metric();
    let chart = a.chart().clone();
    let mut out = TensorField::zero(chart, (2, 0), Symmetry::None);
    let tuples = increasing(n, s - 1);
    // (s-1)! from summing both sides over all permutations of the tuple
    let mut factorial = Rational::one();
    for k in 2..s {
        factorial *= Rational::from_integer(k.into());
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc = ScalarField::zero(n);
            for ti in &tuples {
                let mut ai = vec![i];
                ai.extend(ti.iter().copied());
                let av = a.component(&ai, &[]);
                if av.is_zero() {
                    continue;
                }
                for tj in &tuples {
                    let mut bj = vec![j];
                    bj.extend(tj.iter().copied());
                    let bv = b.component(&bj, &[]);
                    if bv.is_zero() {
                        continue;
                    }
                    let d = if s == 1 {
                        Rational::one()
                    } else {
                        Matrix::from_fn(s - 1, s - 1, |p, q| g.get(ti[p], tj[q]).clone()).det()
                    };
                    acc = &acc + &(&av * &bv).scale(&(&d * &factorial));
                }
            }
            out.set(&[i, j], &[], acc);
        }
    }
    Ok(out)
}
