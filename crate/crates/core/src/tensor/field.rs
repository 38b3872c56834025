//! Sparse tensor fields over a chart.
//!
//! Components are scalar fields keyed by (upper, lower) multi-indices,
//! 0-based internally. A symmetry tag applies to the valence block of
//! length ≥ 2 (lower for forms and (0,2) tensors, upper for multivectors
//! and (2,0) tensors). Antisymmetric tensors are stored on strictly
//! increasing multi-indices only, which makes the zero test componentwise.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Upper,
    Lower,
    Neither,
}

pub type CompKey = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug)]
pub struct TensorField {
    chart: Arc<Chart>,
    valence: (usize, usize),
    symmetry: Symmetry,
    components: BTreeMap<CompKey, ScalarField>,
}

impl TensorField {
    pub fn zero(chart: Arc<Chart>, valence: (usize, usize), symmetry: Symmetry) -> Self {
        TensorField {
            chart,
            valence,
            symmetry,
            components: BTreeMap::new(),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn valence(&self) -> (usize, usize) {
        self.valence
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|c| c.is_zero())
    }

    fn sym_block(&self) -> Block {
        match self.symmetry {
            Symmetry::None => Block::Neither,
            _ if self.valence.1 >= 2 => Block::Lower,
            _ if self.valence.0 >= 2 => Block::Upper,
            _ => Block::Neither,
        }
    }

    /// Canonical storage key and sign; None means the component is forced
    /// zero (repeated index in an antisymmetric block).
    fn canonical(&self, upper: &[usize], lower: &[usize]) -> Option<(CompKey, i32)> {
        assert_eq!(upper.len(), self.valence.0, "upper arity mismatch");
        assert_eq!(lower.len(), self.valence.1, "lower arity mismatch");
        let n = self.chart.dim();
        assert!(
            upper.iter().chain(lower.iter()).all(|&i| i < n),
            "index out of chart range"
        );
        let mut up = upper.to_vec();
        let mut lo = lower.to_vec();
        let mut sign = 1;
        let block = self.sym_block();
        let target: Option<&mut Vec<usize>> = match block {
            Block::Upper => Some(&mut up),
            Block::Lower => Some(&mut lo),
            Block::Neither => None,
        };
        if let Some(idx) = target {
            match self.symmetry {
                Symmetry::Symmetric => idx.sort_unstable(),
                Symmetry::Antisymmetric => {
                    sign = sort_sign(idx)?;
                }
                Symmetry::None => unreachable!(),
            }
        }
        Some(((up, lo), sign))
    }

    pub fn component(&self, upper: &[usize], lower: &[usize]) -> ScalarField {
        match self.canonical(upper, lower) {
            None => ScalarField::zero(self.chart.dim()),
            Some((key, sign)) => {
                let base = self
                    .components
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| ScalarField::zero(self.chart.dim()));
                if sign < 0 {
                    -&base
                } else {
                    base
                }
            }
        }
    }

    pub fn set(&mut self, upper: &[usize], lower: &[usize], value: ScalarField) {
        match self.canonical(upper, lower) {
            None => assert!(
                value.is_zero(),
                "repeated antisymmetric index with nonzero value"
            ),
            Some((key, sign)) => {
                let v = if sign < 0 { -&value } else { value };
                if v.is_zero() {
                    self.components.remove(&key);
                } else {
                    self.components.insert(key, v);
                }
            }
        }
    }

    pub fn add_to(&mut self, upper: &[usize], lower: &[usize], value: ScalarField) {
        if value.is_zero() {
            return;
        }
        let current = self.component(upper, lower);
        self.set(upper, lower, &current + &value);
    }

    /// Canonical stored components, zero entries skipped.
    pub fn entries(&self) -> impl Iterator<Item = (&CompKey, &ScalarField)> {
        self.components.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn add(&self, other: &TensorField) -> Result<TensorField> {
        Chart::require_same(&self.chart, &other.chart)?;
        if self.valence != other.valence || self.symmetry != other.symmetry {
            return Err(Error::Precondition(
                "tensor addition needs matching valence and symmetry".into(),
            ));
        }
        let mut out = self.clone();
        for ((up, lo), v) in other.entries() {
            out.add_to(up, lo, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorField) -> Result<TensorField> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorField {
        let mut out = self.clone();
        for v in out.components.values_mut() {
            *v = -&*v;
        }
        out
    }

    pub fn scale(&self, f: &ScalarField) -> TensorField {
        let mut out = TensorField::zero(self.chart.clone(), self.valence, self.symmetry);
        for ((up, lo), v) in self.entries() {
            out.set(up, lo, v * f);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> TensorField {
        self.scale(&ScalarField::constant(c.clone(), self.chart.dim()))
    }

    /// Exact componentwise evaluation; errors on a pole.
    pub fn evaluate_at_point(&self, point: &[Rational]) -> Result<Vec<(CompKey, Rational)>> {
        if point.len() != self.chart.dim() {
            return Err(Error::IndexRange(
                "sample point length must equal chart dimension".into(),
            ));
        }
        let mut out = Vec::new();
        for ((up, lo), v) in self.entries() {
            out.push(((up.clone(), lo.clone()), v.eval(point)?));
        }
        Ok(out)
    }

    // ---- vector fields -------------------------------------------------

    pub fn from_vector(chart: Arc<Chart>, comps: Vec<ScalarField>) -> TensorField {
        assert_eq!(comps.len(), chart.dim());
        let mut t = TensorField::zero(chart, (1, 0), Symmetry::None);
        for (k, c) in comps.into_iter().enumerate() {
            t.set(&[k], &[], c);
        }
        t
    }

    pub fn coordinate_vector(chart: Arc<Chart>, k: usize) -> TensorField {
        let n = chart.dim();
        let mut comps = vec![ScalarField::zero(n); n];
        comps[k] = ScalarField::one(n);
        TensorField::from_vector(chart, comps)
    }

    pub fn to_vector(&self) -> Vec<ScalarField> {
        assert_eq!(self.valence, (1, 0));
        let n = self.chart.dim();
        (0..n).map(|k| self.component(&[k], &[])).collect()
    }

    pub fn from_one_form(chart: Arc<Chart>, comps: Vec<ScalarField>) -> TensorField {
        assert_eq!(comps.len(), chart.dim());
        let mut t = TensorField::zero(chart, (0, 1), Symmetry::Antisymmetric);
        for (k, c) in comps.into_iter().enumerate() {
            t.set(&[], &[k], c);
        }
        t
    }

    pub fn to_one_form(&self) -> Vec<ScalarField> {
        assert_eq!(self.valence, (0, 1));
        let n = self.chart.dim();
        (0..n).map(|k| self.component(&[], &[k])).collect()
    }

    // ---- matrix views ---------------------------------------------------

    /// (1,1) tensor as the matrix M with M[k][i] = Θ^k_i, so M acts on
    /// column vectors of components.
    pub fn matrix11(&self) -> Matrix<ScalarField> {
        assert_eq!(self.valence, (1, 1));
        let n = self.chart.dim();
        Matrix::from_fn(n, n, |k, i| self.component(&[k], &[i]))
    }

    pub fn from_matrix11(chart: Arc<Chart>, m: &Matrix<ScalarField>) -> TensorField {
        let n = chart.dim();
        assert!(m.rows() == n && m.cols() == n);
        let mut t = TensorField::zero(chart, (1, 1), Symmetry::None);
        for k in 0..n {
            for i in 0..n {
                t.set(&[k], &[i], m.get(k, i).clone());
            }
        }
        t
    }

    pub fn matrix02(&self) -> Matrix<ScalarField> {
        assert_eq!(self.valence, (0, 2));
        let n = self.chart.dim();
        Matrix::from_fn(n, n, |i, j| self.component(&[], &[i, j]))
    }

    pub fn from_matrix02(
        chart: Arc<Chart>,
        m: &Matrix<ScalarField>,
        symmetry: Symmetry,
    ) -> TensorField {
        let n = chart.dim();
        assert!(m.rows() == n && m.cols() == n);
        let mut t = TensorField::zero(chart, (0, 2), symmetry);
        for i in 0..n {
            for j in 0..n {
                if symmetry != Symmetry::None && j < i {
                    continue;
                }
                t.set(&[], &[i, j], m.get(i, j).clone());
            }
        }
        t
    }

    pub fn matrix20(&self) -> Matrix<ScalarField> {
        assert_eq!(self.valence, (2, 0));
        let n = self.chart.dim();
        Matrix::from_fn(n, n, |i, j| self.component(&[i, j], &[]))
    }

    pub fn from_matrix20(
        chart: Arc<Chart>,
        m: &Matrix<ScalarField>,
        symmetry: Symmetry,
    ) -> TensorField {
        let n = chart.dim();
        assert!(m.rows() == n && m.cols() == n);
        let mut t = TensorField::zero(chart, (2, 0), symmetry);
        for i in 0..n {
            for j in 0..n {
                if symmetry != Symmetry::None && j < i {
                    continue;
                }
                t.set(&[i, j], &[], m.get(i, j).clone());
            }
        }
        t
    }

    /// Applies a (1,1) tensor to a vector field, componentwise.
    pub fn apply11(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        assert_eq!(self.valence, (1, 1));
        self.matrix11().apply(v)
    }

    /// Full antisymmetric evaluation of a q-form on q vector fields:
    /// ω(v₁,…,v_q) = Σ_{i₁<…<i_q} ω_I det(v_a^{i_b}).
    pub fn form_value(&self, vectors: &[Vec<ScalarField>]) -> ScalarField {
        assert_eq!(self.valence.0, 0);
        assert_eq!(self.symmetry, Symmetry::Antisymmetric);
        let q = self.valence.1;
        assert_eq!(vectors.len(), q);
        let n = self.chart.dim();
        let mut acc = ScalarField::zero(n);
        for ((_, lo), coeff) in self.entries() {
            let minor = Matrix::from_fn(q, q, |a, b| vectors[a][lo[b]].clone());
            acc = &acc + &(coeff * &minor.det());
        }
        acc
    }

    /// Renders components with the chart's coordinate names; keys are
    /// 1-based "u1,u2;l1,l2" strings sorted canonically.
    pub fn render_components(&self) -> BTreeMap<String, String> {
        let names = self.chart.coords();
        let names: Vec<String> = names.to_vec();
        self.entries()
            .map(|((up, lo), v)| {
                let ups: Vec<String> = up.iter().map(|i| (i + 1).to_string()).collect();
                let los: Vec<String> = lo.iter().map(|i| (i + 1).to_string()).collect();
                (
                    format!("{};{}", ups.join(","), los.join(",")),
                    v.to_string_with(&names),
                )
            })
            .collect()
    }
}

/// Sorts indices ascending, returning the permutation sign, or None when an
/// index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort with swap counting; index lists are tiny
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}
