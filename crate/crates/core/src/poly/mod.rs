//! Exact multivariate polynomials over the rationals.
//!
//! Every polynomial lives in a [`VarContext`]: the summation variables `k`
//! and `l` (always at indices 0 and 1) followed by the declared parameters.
//! Exponent vectors are dense over the context and monomials are kept in
//! graded-lexicographic order, so equal polynomials have identical
//! representations.

mod ratfunc;

pub use ratfunc::{ratfunc_arith, ratfunc_equal, RationalFunction};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{binom, Integer, Rational};

/// Index of `k` in every context.
pub const K: usize = 0;
/// Index of `l` in every context.
pub const L: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live in different variable contexts")]
    ContextMismatch,
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("`{0}` is reserved for a summation variable")]
    ReservedName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no value at this point")]
    Unassigned(String),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator vanishes at this point")]
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Summation,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

/// Ordered variable set: `k`, `l`, then parameters in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    vars: Vec<Variable>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(params: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut vars = vec![
            Variable { name: "k".into(), kind: VarKind::Summation },
            Variable { name: "l".into(), kind: VarKind::Summation },
        ];
        for p in params {
            let name = p.as_ref();
            if name == "k" || name == "l" {
                return Err(PolyError::ReservedName(name.into()));
            }
            if vars.iter().any(|v| v.name == name) {
                return Err(PolyError::DuplicateVariable(name.into()));
            }
            vars.push(Variable { name: name.into(), kind: VarKind::Parameter });
        }
        Ok(Arc::new(Self { vars }))
    }

    /// Context with only `k` and `l`.
    pub fn summation_only() -> Arc<Self> {
        Self::new::<&str>(&[]).expect("no parameters")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.vars[idx].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.vars[2..].iter().map(|v| v.name.as_str())
    }
}

/// Dense exponent vector. Ordered graded-lexicographically: total degree
/// first, then the exponent of the earliest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients; zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> Self {
        Self::constant(ctx, Rational::from_integer(Integer::from(c)))
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> Self {
        let mut p = Self::zero(ctx);
        p.terms.insert(Monomial::var(ctx.len(), idx, 1), Rational::one());
        p
    }

    /// Variable by name; `None` if the name is not in the context.
    pub fn named(ctx: &Arc<VarContext>, name: &str) -> Option<Self> {
        ctx.index_of(name).map(|i| Self::var(ctx, i))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            assert_eq!(m.0.len(), ctx.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn same_context(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_context(other)?;
        let mut out = Self::zero(&self.ctx);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.terms = acc;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `var -> var + c` and expands.
    pub fn shift(&self, var: usize, c: i64) -> Self {
        if c == 0 || !self.involves(var) {
            return self.clone();
        }
        let cq = Rational::from_integer(Integer::from(c));
        let max = self.degree_in(var) as usize;
        let mut cpow = vec![Rational::one()];
        for i in 1..=max {
            cpow.push(&cpow[i - 1] * &cq);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, coef) in &self.terms {
            let e = m.0[var];
            for j in 0..=e {
                let factor = Rational::from_integer(binom(e as i64, j as i64))
                    * &cpow[(e - j) as usize];
                let mut exps = m.0.clone();
                exps[var] = j;
                out.add_term(Monomial(exps), coef * factor);
            }
        }
        out
    }

    /// Exact value at a dense point (one value per context variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        debug_assert_eq!(point.len(), self.ctx.len());
        if self.is_zero() {
            return Rational::zero();
        }
        let all_int = point.iter().all(|v| v.is_integer());
        let nvars = self.ctx.len();
        // Powers per variable, computed up to the degree actually needed.
        let mut powers: Vec<Vec<Integer>> = Vec::with_capacity(nvars);
        let mut rpowers: Vec<Vec<Rational>> = Vec::new();
        if all_int {
            for (i, v) in point.iter().enumerate() {
                let max = self.degree_in(i) as usize;
                let mut row = Vec::with_capacity(max + 1);
                row.push(Integer::one());
                for j in 1..=max {
                    let next = &row[j - 1] * v.numer();
                    row.push(next);
                }
                powers.push(row);
            }
        } else {
            for (i, v) in point.iter().enumerate() {
                let max = self.degree_in(i) as usize;
                let mut row = Vec::with_capacity(max + 1);
                row.push(Rational::one());
                for j in 1..=max {
                    let next = &row[j - 1] * v;
                    row.push(next);
                }
                rpowers.push(row);
            }
        }
        let mut int_acc = Integer::zero();
        let mut rat_acc = Rational::zero();
        for (m, c) in &self.terms {
            if all_int {
                let mut mono = Integer::one();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        mono *= &powers[i][e as usize];
                    }
                }
                if c.is_integer() {
                    int_acc += mono * c.numer();
                } else {
                    rat_acc += c * Rational::from_integer(mono);
                }
            } else {
                let mut mono = c.clone();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        mono *= &rpowers[i][e as usize];
                    }
                }
                rat_acc += mono;
            }
        }
        rat_acc + Rational::from_integer(int_acc)
    }

    /// Evaluation at a named point; every variable the polynomial actually
    /// uses must be assigned.
    pub fn eval_map(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        for name in point.keys() {
            if self.ctx.index_of(name).is_none() {
                return Err(PolyError::UnknownVariable(name.clone()));
            }
        }
        let mut dense = Vec::with_capacity(self.ctx.len());
        for (i, v) in self.ctx.vars().iter().enumerate() {
            match point.get(&v.name) {
                Some(x) => dense.push(x.clone()),
                None if self.involves(i) => return Err(PolyError::Unassigned(v.name.clone())),
                None => dense.push(Rational::zero()),
            }
        }
        Ok(self.eval(&dense))
    }

    /// Scales so the leading coefficient is 1; returns the factor removed.
    pub fn monic(&self) -> (Rational, Self) {
        match self.leading() {
            None => (Rational::one(), self.clone()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        self.terms
            .values()
            .fold(Integer::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Canonical text rendering, highest monomial first, e.g.
    /// `3*k*l + 4*l^2 - 3`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Substitutes `var -> value` (a constant), removing the variable's
    /// dependence.
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            let factor = num_traits::pow(value.clone(), e as usize);
            out.add_term(Monomial(exps), c * factor);
        }
        out
    }

    /// Integer coefficients if every coefficient is an integer.
    pub fn integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficient of `var` when the polynomial has total degree <= 1.
    pub fn linear_coefficient(&self, var: usize) -> Rational {
        self.coefficient(&Monomial::var(self.ctx.len(), var, 1))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

fn write_coefficient(out: &mut String, c: &Rational) {
    if c.is_integer() {
        out.push_str(&c.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", c.numer(), c.denom()));
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            for (idx, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.ctx.name(idx).to_string()),
                    _ => parts.push(format!("{}^{}", self.ctx.name(idx), e)),
                }
            }
            if parts.is_empty() {
                write_coefficient(&mut out, &abs);
            } else {
                if !abs.is_one() {
                    write_coefficient(&mut out, &abs);
                    out.push('*');
                }
                out.push_str(&parts.join("*"));
            }
        }
        f.write_str(&out)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial context mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

/// Converts a small integer-valued rational to `i64`.
pub(crate) fn rational_to_i64(v: &Rational) -> Option<i64> {
    if v.is_integer() {
        v.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn ctx() -> Arc<VarContext> {
        VarContext::new(&["n", "b"]).unwrap()
    }

    fn k(c: &Arc<VarContext>) -> Polynomial {
        Polynomial::var(c, K)
    }

    fn l(c: &Arc<VarContext>) -> Polynomial {
        Polynomial::var(c, L)
    }

    fn n(c: &Arc<VarContext>, v: i64) -> Polynomial {
        Polynomial::from_int(c, v)
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx();
        let p = &(&k(&c) + &n(&c, 1)) * &(&k(&c) - &n(&c, 1));
        assert_eq!(p, &(&k(&c) * &k(&c)) - &n(&c, 1));
        assert!((&p - &p).is_zero());
        let a = &(&(&k(&c) * &n(&c, 3)) + &(&l(&c) * &n(&c, 4))) - &n(&c, 3);
        let b = &l(&c) + &n(&c, 1);
        assert_eq!((&a * &b).to_string(), "3*k*l + 4*l^2 + 3*k + l - 3");
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Polynomial::var(&ctx(), K);
        let b = Polynomial::var(&VarContext::summation_only(), K);
        assert_eq!(poly_arith(&a, &b, ArithOp::Add), Err(PolyError::ContextMismatch));
        let same = Polynomial::var(&ctx(), L);
        assert!(poly_arith(&a, &same, ArithOp::Mul).is_ok());
    }

    #[test]
    fn shift_examples() {
        let c = ctx();
        let ksq = &k(&c) * &k(&c);
        assert_eq!(ksq.shift(K, 1).to_string(), "k^2 + 2*k + 1");
        assert_eq!(l(&c).shift(K, 1), l(&c));
        let p = &(&l(&c) * &n(&c, 2)) - &k(&c);
        assert_eq!(p.shift(K, 1).to_string(), "-k + 2*l - 1");
    }

    #[test]
    fn eval_examples() {
        let c = ctx();
        let mut pt = BTreeMap::new();
        pt.insert("k".to_string(), int(2));
        let p = &(&k(&c) * &k(&c)) + &n(&c, 1);
        assert_eq!(p.eval_map(&pt), Ok(int(5)));
        assert_eq!(Polynomial::zero(&c).eval_map(&pt), Ok(int(0)));
        let q = &(&(&k(&c) * &k(&c)) * &n(&c, 9)) + &(&k(&c) * &n(&c, 5));
        pt.insert("k".to_string(), int(1));
        assert_eq!(q.eval_map(&pt), Ok(int(14)));
        let with_l = &k(&c) + &l(&c);
        assert_eq!(with_l.eval_map(&pt), Err(PolyError::Unassigned("l".into())));
        pt.insert("zz".to_string(), int(1));
        assert_eq!(q.eval_map(&pt), Err(PolyError::UnknownVariable("zz".into())));
    }

    #[test]
    fn rendering_orders_monomials() {
        let c = ctx();
        let p = &l(&c) * &k(&c);
        assert_eq!(p.to_string(), "k*l");
        let q = &(&p - &n(&c, 3)).scale(&crate::arith::rat(-2, 9)) + &Polynomial::named(&c, "b").unwrap();
        assert_eq!(q.to_string(), "-2/9*k*l + b + 2/3");
    }

    #[test]
    fn context_rejects_duplicates() {
        assert_eq!(
            VarContext::new(&["n", "n"]).unwrap_err(),
            PolyError::DuplicateVariable("n".into())
        );
        assert_eq!(VarContext::new(&["k"]).unwrap_err(), PolyError::ReservedName("k".into()));
    }
}
