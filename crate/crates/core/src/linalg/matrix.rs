//! Dense matrices over an exact field, with Gaussian elimination that
//! full-pivots on the cheapest nonzero entry to limit expression swell.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, ScalarField};

/// Exact field element usable as a matrix entry.
///
/// `zero_like`/`one_like` exist because a `ScalarField` zero must know its
/// variable count; every matrix is nonempty, so a prototype entry is always
/// at hand.
pub trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Pivot preference: smaller is chosen first.
    fn complexity(&self) -> u64;
}

impl Entry for Rational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if Zero::is_zero(o) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn complexity(&self) -> u64 {
        self.numer().abs().bits() + self.denom().bits()
    }
}

impl Entry for ScalarField {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.try_div(o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        ScalarField::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        ScalarField::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        ScalarField::one(self.nvars())
    }
    fn complexity(&self) -> u64 {
        ScalarField::complexity(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Entry> Matrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        assert!(
            !rows.is_empty() && !rows[0].is_empty(),
            "matrix must be nonempty"
        );
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize, proto: &K) -> Self {
        Matrix::from_fn(rows, cols, |_, _| proto.zero_like())
    }

    pub fn identity(n: usize, proto: &K) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                proto.one_like()
            } else {
                proto.zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn proto(&self) -> &K {
        &self.data[0]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<L: Entry>(&self, f: impl FnMut(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<L: Entry>(&self, mut f: impl FnMut(&K) -> Result<L>) -> Result<Matrix<L>> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(f(x)?);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).add(o.get(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).sub(o.get(r, c)))
    }

    pub fn scale(&self, k: &K) -> Self {
        self.map(|x| x.mul(k))
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimensions must agree");
        Matrix::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = self.proto().zero_like();
            for k in 0..self.cols {
                let t = self.get(r, k).mul(o.get(k, c));
                if !t.is_zero() {
                    acc = acc.add(&t);
                }
            }
            acc
        })
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = self.proto().zero_like();
                for c in 0..self.cols {
                    let t = self.get(r, c).mul(&v[c]);
                    if !t.is_zero() {
                        acc = acc.add(&t);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, self.proto());
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Reduced row echelon form with full pivoting on the lowest-complexity
    /// nonzero entry. Column pivoting is restricted to the first `pivot_cols`
    /// columns so augmented systems keep their right-hand side in place.
    fn rref(&self, pivot_cols: usize) -> Reduced<K> {
        let mut m = self.clone();
        let mut col_perm: Vec<usize> = (0..m.cols).collect();
        let mut rank = 0;
        while rank < m.rows && rank < pivot_cols {
            let mut best: Option<(usize, usize, u64)> = None;
            for r in rank..m.rows {
                for c in rank..pivot_cols {
                    let e = m.get(r, c);
                    if !e.is_zero() {
                        let cx = e.complexity();
                        if best.map(|(_, _, b)| cx < b).unwrap_or(true) {
                            best = Some((r, c, cx));
                        }
                    }
                }
            }
            let Some((pr, pc, _)) = best else { break };
            m.swap_rows(rank, pr);
            m.swap_cols(rank, pc);
            col_perm.swap(rank, pc);
            let pivot = m.get(rank, rank).clone();
            for c in rank..m.cols {
                let v = m.get(rank, c).div(&pivot).unwrap();
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r == rank || m.get(r, rank).is_zero() {
                    continue;
                }
                let factor = m.get(r, rank).clone();
                for c in rank..m.cols {
                    let v = m.get(r, c).sub(&factor.mul(m.get(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        Reduced {
            mat: m,
            rank,
            col_perm,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref(self.cols).rank
    }

    /// Basis of the right nullspace, deterministic for a given input.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let red = self.rref(self.cols);
        let zero = self.proto().zero_like();
        let one = self.proto().one_like();
        let mut basis = Vec::new();
        for free in red.rank..self.cols {
            let mut v = vec![zero.clone(); self.cols];
            v[red.col_perm[free]] = one.clone();
            for p in 0..red.rank {
                v[red.col_perm[p]] = red.mat.get(p, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `self · x = b`, or None when inconsistent.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let red = aug.rref(self.cols);
        aug = red.mat;
        for r in red.rank..self.rows {
            if !aug.get(r, self.cols).is_zero() {
                return None;
            }
        }
        let zero = self.proto().zero_like();
        let mut x = vec![zero; self.cols];
        for p in 0..red.rank {
            x[red.col_perm[p]] = aug.get(p, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                self.proto().one_like()
            } else {
                self.proto().zero_like()
            }
        });
        let red = aug.rref(n);
        if red.rank < n {
            return None;
        }
        let mut inv = Matrix::zero(n, n, self.proto());
        for p in 0..n {
            for j in 0..n {
                inv.set(red.col_perm[p], j, red.mat.get(p, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = m.proto().one_like();
        let mut negate = false;
        for step in 0..n {
            let mut best: Option<(usize, usize, u64)> = None;
            for r in step..n {
                for c in step..n {
                    let e = m.get(r, c);
                    if !e.is_zero() {
                        let cx = e.complexity();
                        if best.map(|(_, _, b)| cx < b).unwrap_or(true) {
                            best = Some((r, c, cx));
                        }
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                return m.proto().zero_like();
            };
            if pr != step {
                m.swap_rows(step, pr);
                negate = !negate;
            }
            if pc != step {
                m.swap_cols(step, pc);
                negate = !negate;
            }
            let pivot = m.get(step, step).clone();
            det = det.mul(&pivot);
            for r in step + 1..n {
                if m.get(r, step).is_zero() {
                    continue;
                }
                let factor = m.get(r, step).div(&pivot).unwrap();
                for c in step..n {
                    let v = m.get(r, c).sub(&factor.mul(m.get(step, c)));
                    m.set(r, c, v);
                }
            }
        }
        if negate {
            det.neg()
        } else {
            det
        }
    }
}

struct Reduced<K> {
    mat: Matrix<K>,
    rank: usize,
    col_perm: Vec<usize>,
}

impl Matrix<ScalarField> {
    /// Componentwise evaluation; fails on a pole.
    pub fn eval(&self, point: &[Rational]) -> Result<Matrix<Rational>> {
        self.try_map(|f| f.eval(point))
    }
}

impl Matrix<Rational> {
    pub fn to_fields(&self, nvars: usize) -> Matrix<ScalarField> {
        self.map(|c| ScalarField::constant(c.clone(), nvars))
    }
}
