//! The fraction field of multivariate polynomials, without multivariate GCD.
//!
//! Equality of a/b and c/d is decided by cross-multiplication (a·d − c·b = 0),
//! which is exact and needs no factorization. The only normalization applied
//! is opportunistic: the pair is scaled so the denominator has coprime
//! integer coefficients and a positive graded-lex leading coefficient, and
//! 0 is always stored as 0/1. Term growth is the accepted cost; degrees stay
//! small at the scales this crate targets.

use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ScalarField {
    num: Polynomial,
    den: Polynomial,
}

impl ScalarField {
    /// num/den. Errors if den is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            let n = num.nvars();
            return ScalarField {
                num: Polynomial::zero(n),
                den: Polynomial::one(n),
            };
        }
        let mut c = den.content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        ScalarField {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.nvars());
        ScalarField::normalized(p, one)
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        ScalarField::from_poly(Polynomial::constant(c, nvars))
    }

    pub fn zero(nvars: usize) -> Self {
        ScalarField::constant(Rational::zero(), nvars)
    }

    pub fn one(nvars: usize) -> Self {
        ScalarField::constant(Rational::one(), nvars)
    }

    pub fn variable(var: usize, nvars: usize) -> Self {
        ScalarField::from_poly(Polynomial::variable(var, nvars))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// True iff the field element is identically zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Constant-function test; true also for disguised constants like x/x.
    pub fn is_constant(&self) -> bool {
        (0..self.nvars()).all(|i| self.partial_zero(i))
    }

    /// The rational value of a constant field element.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if !self.is_constant() {
            return None;
        }
        let c = self.num.leading_coeff() / self.den.leading_coeff();
        debug_assert!((&self.num - &self.den.scale(&c)).is_zero());
        Some(c)
    }

    fn partial_zero(&self, var: usize) -> bool {
        let n = &self.num.partial(var) * &self.den;
        let d = &self.num * &self.den.partial(var);
        (&n - &d).is_zero()
    }

    /// ∂/∂x_var via the exact quotient rule.
    pub fn partial(&self, var: usize) -> Self {
        if self.den.is_constant() {
            let c = self.den.constant_value().unwrap();
            return ScalarField::normalized(
                self.num.partial(var).scale(&c.recip()),
                Polynomial::one(self.nvars()),
            );
        }
        let num = &(&self.num.partial(var) * &self.den) - &(&self.num * &self.den.partial(var));
        let den = &self.den * &self.den;
        ScalarField::normalized(num, den)
    }

    pub fn try_div(&self, rhs: &ScalarField) -> Result<ScalarField> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        ScalarField::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<ScalarField> {
        ScalarField::one(self.nvars()).try_div(self)
    }

    pub fn scale(&self, c: &Rational) -> ScalarField {
        ScalarField::normalized(self.num.scale(c), self.den.clone())
    }

    /// Exact evaluation; a vanishing denominator is a pole error, never a
    /// silent value.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            let pt = point
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::PoleAtSample(pt));
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn extend_vars(&self, nvars: usize) -> ScalarField {
        ScalarField {
            num: self.num.extend_vars(nvars),
            den: self.den.extend_vars(nvars),
        }
    }

    /// Combined size measure used for pivot selection.
    pub fn complexity(&self) -> u64 {
        (self.num.total_degree() + self.den.total_degree()) as u64 * 64
            + (self.num.num_terms() + self.den.num_terms()) as u64
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.den.is_constant()
            && self
                .den
                .constant_value()
                .map(|c| c.is_one())
                .unwrap_or(false)
        {
            self.num.to_string_with(names)
        } else {
            format!(
                "({}) / ({})",
                self.num.to_string_with(names),
                self.den.to_string_with(names)
            )
        }
    }
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return ScalarField::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        ScalarField::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self + &(-rhs)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() || rhs.is_zero() {
            return ScalarField::zero(self.nvars());
        }
        ScalarField::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_string_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn x(i: usize, n: usize) -> ScalarField {
        ScalarField::variable(i, n)
    }

    #[test]
    fn additive_and_multiplicative_inverses() {
        let a = x(0, 3);
        assert!((&a + &(-&a)).is_zero());
        let inv = a.recip().unwrap();
        assert!((&inv * &a).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let z = ScalarField::zero(2);
        assert_eq!(x(0, 2).try_div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn cross_multiplication_equality_detects_cancellation() {
        // (x1^2 - x1*x1)/(x2) == 0
        let num = &(&x(0, 3) * &x(0, 3)) - &(&x(0, 3) * &x(0, 3));
        let f = num.try_div(&x(1, 3)).unwrap();
        assert!(f.is_zero());

        // ((x1+x2)^2 - x1^2 - 2 x1 x2 - x2^2) / (1 + x3^2) == 0
        let s = &x(0, 3) + &x(1, 3);
        let lhs = &(&s * &s)
            - &(&(&(&x(0, 3) * &x(0, 3)) + &(&x(0, 3) * &x(1, 3)).scale(&rational::int(2)))
                + &(&x(1, 3) * &x(1, 3)));
        let den = &ScalarField::one(3) + &(&x(2, 3) * &x(2, 3));
        assert!(lhs.try_div(&den).unwrap().is_zero());
    }

    #[test]
    fn quotient_rule_by_hand() {
        // d/dx1 (1/x1) = -1/x1^2
        let f = ScalarField::one(2).try_div(&x(0, 2)).unwrap();
        let df = f.partial(0);
        let expected = ScalarField::constant(rational::int(-1), 2)
            .try_div(&(&x(0, 2) * &x(0, 2)))
            .unwrap();
        assert_eq!(df, expected);
    }

    #[test]
    fn normalization_signs_the_denominator() {
        // x1 / (-2 x2) stores the denominator with positive leading coeff
        let f = x(0, 2).try_div(&x(1, 2).scale(&rational::int(-2))).unwrap();
        assert!(f.den().leading_coeff() > rational::int(0));
        let g = x(0, 2)
            .scale(&rational::ratio(-1, 2))
            .try_div(&x(1, 2))
            .unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn disguised_constants_are_recognized() {
        let f = x(0, 2).try_div(&x(0, 2)).unwrap();
        assert!(f.is_constant());
        assert_eq!(f.constant_value().unwrap(), rational::int(1));
        assert!(!x(0, 2).is_constant());
    }

    #[test]
    fn pole_evaluation_is_an_error() {
        let f = ScalarField::one(2).try_div(&x(0, 2)).unwrap();
        assert!(matches!(
            f.eval(&[rational::int(0), rational::int(0)]),
            Err(Error::PoleAtSample(_))
        ));
        assert_eq!(
            f.eval(&[rational::int(2), rational::int(0)]).unwrap(),
            rational::ratio(1, 2)
        );
    }
}
