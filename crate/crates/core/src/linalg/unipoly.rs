//! Univariate polynomials over the rationals, just enough for minimal
//! polynomials and the squarefree test behind complex diagonalizability.

use num_traits::{One, Zero};

use super::matrix::Matrix;
use crate::scalar::Rational;

/// Coefficients ascending by degree, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.0.last().unwrap().clone();
        UniPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Remainder of self divided by a nonzero divisor.
    pub fn rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lead = d.0.last().unwrap();
        while r.len() > dd && !r.is_empty() {
            let c = r.last().unwrap() / lead;
            if !c.is_zero() {
                let shift = r.len() - 1 - dd;
                for (j, b) in d.0.iter().enumerate() {
                    r[shift + j] -= &c * b;
                }
            }
            r.pop();
        }
        UniPoly::new(r)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = match k {
                0 => c.to_string(),
                1 if c.is_one() => var.to_string(),
                1 => format!("{c}*{var}"),
                _ if c.is_one() => format!("{var}^{k}"),
                _ => format!("{c}*{var}^{k}"),
            };
            parts.push(body);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Minimal polynomial of a square rational matrix, via Krylov spans started
/// from each standard basis vector.
pub fn minimal_polynomial(a: &Matrix<Rational>) -> UniPoly {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut min = UniPoly::one();
    for i in 0..n {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        let ann = krylov_annihilator(a, v);
        let g = min.gcd(&ann);
        min = min.mul(&ann.rem_free_div(&g));
        if min.degree() == Some(n) {
            break;
        }
    }
    min.monic()
}

impl UniPoly {
    /// Exact quotient by a known divisor: used only for lcm assembly.
    fn rem_free_div(&self, d: &Self) -> Self {
        // long division, asserting a zero remainder
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lead = d.0.last().unwrap();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd {
            let c = r.last().unwrap() / lead;
            let shift = r.len() - 1 - dd;
            q[shift] = c.clone();
            for (j, b) in d.0.iter().enumerate() {
                r[shift + j] -= &c * b;
            }
            r.pop();
        }
        debug_assert!(
            UniPoly::new(r).is_zero(),
            "rem_free_div requires exact divisibility"
        );
        UniPoly::new(q)
    }
}

/// The monic annihilator of the Krylov sequence v, Av, A²v, …
fn krylov_annihilator(a: &Matrix<Rational>, v: Vec<Rational>) -> UniPoly {
    let n = a.rows();
    let mut seq = vec![v.clone()];
    let mut cur = v;
    for _ in 0..n {
        cur = a.apply(&cur);
        // test dependence of cur on the sequence so far
        let mat = Matrix::from_fn(n, seq.len(), |r, c| seq[c][r].clone());
        if let Some(coeffs) = mat.solve(&cur) {
            // t^k - sum coeffs_j t^j
            let mut poly = vec![Rational::zero(); seq.len() + 1];
            for (j, c) in coeffs.iter().enumerate() {
                poly[j] = -c.clone();
            }
            poly[seq.len()] = Rational::one();
            return UniPoly::new(poly);
        }
        seq.push(cur.clone());
    }
    unreachable!("Krylov sequence of length n+1 is always dependent");
}

/// True iff the minimal polynomial over the rationals is squarefree, which
/// decides diagonalizability of the complex-linear extension.
pub fn complex_diagonalizable(a: &Matrix<Rational>) -> bool {
    let m = minimal_polynomial(a);
    m.gcd(&m.derivative()).is_constant()
}
