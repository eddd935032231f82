use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{ArithOp, PolyError, Polynomial, VarContext};
use crate::arith::Rational;

/// Quotient of two polynomials. The denominator is never zero and its
/// leading coefficient is normalized to 1; no gcd reduction is attempted,
/// so equality of values is decided with [`RationalFunction::equivalent`].
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.context() != den.context() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            let ctx = den.context().clone();
            return Self { num, den: Polynomial::one(&ctx) };
        }
        let (lc, den) = den.monic();
        let num = if lc.is_one() { num } else { num.scale(&lc.recip()) };
        Self { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let ctx = p.context().clone();
        Self { num: p, den: Polynomial::one(&ctx) }
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Self::from_poly(Polynomial::zero(ctx))
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::from_poly(Polynomial::one(ctx))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.num.context()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Self::new(self.num.checked_add(&other.num)?, self.den.clone());
        }
        let num = self
            .num
            .checked_mul(&other.den)?
            .checked_add(&other.num.checked_mul(&self.den)?)?;
        Self::new(num, self.den.checked_mul(&other.den)?)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        Self::new(
            self.num.checked_mul(&other.num)?,
            self.den.checked_mul(&other.den)?,
        )
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Self::new(
            self.num.checked_mul(&other.den)?,
            self.den.checked_mul(&other.num)?,
        )
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Self, PolyError> {
        if e >= 0 {
            Self::new(self.num.pow(e as u32), self.den.pow(e as u32))
        } else {
            self.recip()?.powi(-e)
        }
    }

    pub fn shift(&self, var: usize, c: i64) -> Self {
        Self::normalized(self.num.shift(var, c), self.den.shift(var, c))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(PolyError::Pole);
        }
        if self.num.is_zero() {
            return Ok(Rational::zero());
        }
        Ok(self.num.eval(point) / d)
    }

    /// Equality of values via cross-multiplication:
    /// `num(f) den(g) - num(g) den(f) == 0`.
    pub fn equivalent(&self, other: &Self) -> Result<bool, PolyError> {
        if self == other {
            return Ok(true);
        }
        let lhs = self.num.checked_mul(&other.den)?;
        let rhs = other.num.checked_mul(&self.den)?;
        Ok(lhs == rhs)
    }

    /// Numerator and denominator rescaled to integer coefficients (same
    /// ratio), for rendering.
    pub fn integer_parts(&self) -> (Polynomial, Polynomial) {
        let lcm = num_integer::Integer::lcm(&self.num.denominator_lcm(), &self.den.denominator_lcm());
        let s = Rational::from_integer(lcm);
        (self.num.scale(&s), self.den.scale(&s))
    }
}

pub fn ratfunc_equal(f: &RationalFunction, g: &RationalFunction) -> Result<bool, PolyError> {
    f.equivalent(g)
}

pub fn ratfunc_arith(
    f: &RationalFunction,
    g: &RationalFunction,
    op: ArithOp,
) -> Result<RationalFunction, PolyError> {
    match op {
        ArithOp::Add => f.checked_add(g),
        ArithOp::Sub => f.checked_sub(g),
        ArithOp::Mul => f.checked_mul(g),
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self)
    }
}

/// Renders as `NUM` or `NUM / (DEN)` with integer coefficients, which is
/// exactly the rational-expression syntax of the problem files.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_parts();
        if den.is_one() {
            write!(f, "{}", num)
        } else if num.len() > 1 {
            write!(f, "({}) / ({})", num, den)
        } else {
            write!(f, "{} / ({})", num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::poly::{K, L};

    fn setup() -> (Arc<VarContext>, Polynomial, Polynomial) {
        let c = VarContext::summation_only();
        let k = Polynomial::var(&c, K);
        let l = Polynomial::var(&c, L);
        (c, k, l)
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let (c, k, l) = setup();
        let one = Polynomial::one(&c);
        let f = RationalFunction::new(&(&k * &k) - &one, &k - &one).unwrap();
        let g = RationalFunction::from_poly(&k + &one);
        assert!(ratfunc_equal(&f, &g).unwrap());
        let kk = RationalFunction::from_poly(k.clone());
        let ll = RationalFunction::from_poly(l.clone());
        assert!(!ratfunc_equal(&kk, &ll).unwrap());
    }

    #[test]
    fn scaling_numerator_and_denominator_preserves_value() {
        let (c, k, l) = setup();
        let two = Polynomial::from_int(&c, 2);
        let nine = Polynomial::from_int(&c, 9);
        // (-2l + k)(3k - l - 2) / (k(9k + 5))
        let num = &(&k - &(&two * &l)) * &(&(&k * &Polynomial::from_int(&c, 3)) - &(&l + &two));
        let den = &k * &(&(&nine * &k) + &Polynomial::from_int(&c, 5));
        let r2 = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let lp1 = &l + &Polynomial::one(&c);
        let scaled = RationalFunction::new(&num * &lp1, &den * &lp1).unwrap();
        assert!(ratfunc_equal(&r2, &scaled).unwrap());
        assert_ne!(r2, scaled);
    }

    #[test]
    fn arithmetic_examples() {
        let (c, _, l) = setup();
        let one = Polynomial::one(&c);
        let lp1 = &l + &one;
        let f = RationalFunction::new(one.clone(), lp1.clone()).unwrap();
        let diff = ratfunc_arith(&f, &f, ArithOp::Sub).unwrap();
        assert!(diff.is_zero());
        assert!(diff.denom().is_one());
        let prod = ratfunc_arith(&f, &RationalFunction::from_poly(lp1), ArithOp::Mul).unwrap();
        assert!(ratfunc_equal(&prod, &RationalFunction::one(&c)).unwrap());
    }

    #[test]
    fn denominator_is_monic() {
        let (c, k, _) = setup();
        let f = RationalFunction::new(
            Polynomial::from_int(&c, 4),
            k.scale(&int(2)),
        )
        .unwrap();
        assert_eq!(f.numer(), &Polynomial::from_int(&c, 2));
        assert_eq!(f.denom(), &k);
        assert_eq!(f.to_string(), "2 / (k)");
        assert!(RationalFunction::new(k.clone(), Polynomial::zero(&c)).is_err());
    }

    #[test]
    fn pole_on_evaluation() {
        let (c, k, _) = setup();
        let f = RationalFunction::new(Polynomial::one(&c), k).unwrap();
        assert_eq!(f.eval(&[int(0), int(0)]), Err(PolyError::Pole));
        assert_eq!(f.eval(&[int(4), int(0)]), Ok(crate::arith::rat(1, 4)));
    }
}
