//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial knows how many chart variables exist (`nvars`) and stores a
//! map from exponent vectors to nonzero rational coefficients. Exponent
//! vectors always have length `nvars`. Canonical printing is graded
//! lexicographic on the chart's coordinate order, descending, which makes
//! serialized output deterministic.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(Rational::one(), nvars)
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Polynomial { nvars, terms }
    }

    /// The monomial c · x_var (0-based variable index).
    pub fn variable(var: usize, nvars: usize) -> Self {
        assert!(
            var < nvars,
            "variable index {var} out of range for {nvars} vars"
        );
        let mut exp = vec![0u32; nvars];
        exp[var] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Rational::one());
        Polynomial { nvars, terms }
    }

    pub fn from_terms(
        nvars: usize,
        entries: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (exp, c) in entries {
            assert_eq!(exp.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(exp, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The value of a constant polynomial, if it is one.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// ∂/∂x_var (0-based).
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (exp, c) in &self.terms {
            let k = exp[var];
            if k == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[var] = k - 1;
            out.add_term(e, c * Rational::from_integer(k.into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::IndexRange(format!(
                "point has {} entries, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Rational::zero();
        for (exp, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(exp.iter()) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Re-embeds into a chart with more variables (new trailing variables do
    /// not occur).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut terms = BTreeMap::new();
        for (exp, c) in &self.terms {
            let mut e = exp.clone();
            e.resize(nvars, 0);
            terms.insert(e, c.clone());
        }
        Polynomial { nvars, terms }
    }

    /// Positive rational c such that self/c has coprime integer coefficients.
    /// Returns 1 for the zero polynomial.
    pub fn content(&self) -> Rational {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.terms.is_empty() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Graded-lex–leading coefficient (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Rational {
        self.sorted_terms()
            .first()
            .map(|(_, c)| (*c).clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Terms sorted graded-lexicographically, descending.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(ea, _), (eb, _)| grlex(eb, ea));
        v
    }

    /// Canonical text form using the given coordinate names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (exp, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || exp.iter().all(|&k| k == 0) {
                factors.push(abs.to_string());
            }
            for (v, &k) in exp.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_string_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn x(i: usize, n: usize) -> Polynomial {
        Polynomial::variable(i, n)
    }

    #[test]
    fn arithmetic_keeps_no_zero_terms() {
        let p = &x(0, 2) + &x(1, 2);
        let q = &p - &x(1, 2);
        assert_eq!(q, x(0, 2));
        let z = &q - &x(0, 2);
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn schoolbook_square_expands() {
        // (x1 + x2)^2 = x1^2 + 2 x1 x2 + x2^2
        let s = &x(0, 2) + &x(1, 2);
        let sq = &s * &s;
        let expected = Polynomial::from_terms(
            2,
            vec![
                (vec![2, 0], rational::int(1)),
                (vec![1, 1], rational::int(2)),
                (vec![0, 2], rational::int(1)),
            ],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn partial_derivatives() {
        // d/dx1 (x1 x2) = x2, d/dx2 (x1) = 0
        let p = &x(0, 2) * &x(1, 2);
        assert_eq!(p.partial(0), x(1, 2));
        assert!(x(0, 2).partial(1).is_zero());
    }

    #[test]
    fn eval_is_exact() {
        let p = &(&x(0, 2) * &x(0, 2)) + &x(1, 2).scale(&rational::ratio(1, 2));
        let v = p.eval(&[rational::int(3), rational::int(4)]).unwrap();
        assert_eq!(v, rational::int(11));
    }

    #[test]
    fn canonical_printing_is_graded_lex() {
        let names = vec!["x1".to_string(), "x2".to_string()];
        let p = Polynomial::from_terms(
            2,
            vec![
                (vec![0, 0], rational::int(1)),
                (vec![1, 1], rational::int(-2)),
                (vec![0, 1], rational::ratio(3, 2)),
            ],
        );
        assert_eq!(p.to_string_with(&names), "-2*x1*x2 + 3/2*x2 + 1");
        assert_eq!(Polynomial::zero(2).to_string_with(&names), "0");
    }

    #[test]
    fn content_is_positive_and_integral() {
        let p = Polynomial::from_terms(
            1,
            vec![
                (vec![1], rational::ratio(4, 3)),
                (vec![0], rational::int(-2)),
            ],
        );
        // coefficients 4/3 and -2: content gcd(4,2)/lcm(3,1) = 2/3
        assert_eq!(p.content(), rational::ratio(2, 3));
    }
}
