//! Factored bivariate hypergeometric terms.
//!
//! A [`HyperTerm`] is a product
//!
//! ```text
//! P(k, l, params) * (-1)^s * prod base_i^{e_i} * prod binom(u_j, w_j)^{m_j}
//! ```
//!
//! where `s`, `e_i`, `u_j`, `w_j` are integer-linear forms and every power
//! base depends on parameters only. This shape keeps both shift quotients
//! rational by construction.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{binom, Integer, Rational};
use crate::poly::{rational_to_i64, Monomial, PolyError, Polynomial, RationalFunction, VarContext, K, L};

/// Parameter assignment by name.
pub type ParamValues = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("term has a pole at this point")]
    PoleAtPoint,
    #[error("argument `{0}` is not an integer at this point")]
    NonIntegerArgument(String),
    #[error("parameter `{0}` has no value")]
    Unassigned(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("malformed term: {0}")]
    Structural(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `sum c_i x_i + d` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    ctx: Arc<VarContext>,
    coeffs: Vec<i64>,
    constant: i64,
}

impl LinForm {
    pub fn new(ctx: &Arc<VarContext>, coeffs: Vec<i64>, constant: i64) -> Self {
        assert_eq!(coeffs.len(), ctx.len());
        Self { ctx: ctx.clone(), coeffs, constant }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: i64) -> Self {
        Self::new(ctx, vec![0; ctx.len()], c)
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> Self {
        let mut coeffs = vec![0; ctx.len()];
        coeffs[idx] = 1;
        Self::new(ctx, coeffs, 0)
    }

    /// `None` unless `p` has total degree <= 1 and integer coefficients.
    pub fn from_polynomial(p: &Polynomial) -> Option<Self> {
        if p.degree().unwrap_or(0) > 1 || !p.integer_coefficients() {
            return None;
        }
        let ctx = p.context();
        let mut coeffs = vec![0; ctx.len()];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = rational_to_i64(&p.linear_coefficient(i))?;
        }
        let constant = rational_to_i64(&p.coefficient(&Monomial::one(ctx.len())))?;
        Some(Self::new(ctx, coeffs, constant))
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.ctx.len();
        let mut terms: Vec<(Monomial, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (Monomial::var(n, i, 1), Rational::from_integer(c.into())))
            .collect();
        terms.push((Monomial::one(n), Rational::from_integer(self.constant.into())));
        Polynomial::from_terms(&self.ctx, terms)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn coeff(&self, var: usize) -> i64 {
        self.coeffs[var]
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.coeffs[var] != 0
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self::new(&self.ctx, coeffs, self.constant + other.constant)
    }

    /// The form after `var -> var + c`.
    pub fn shifted(&self, var: usize, c: i64) -> Self {
        let mut out = self.clone();
        out.constant += self.coeffs[var] * c;
        out
    }

    pub fn eval(&self, pt: &EvalPoint) -> Result<i64, TermError> {
        let mut acc = self.constant;
        let mut exact = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match pt.ints[i] {
                Some(v) => acc += c * v,
                None => {
                    exact = false;
                    break;
                }
            }
        }
        if exact {
            return Ok(acc);
        }
        let v = self.to_polynomial().eval(&pt.values);
        rational_to_i64(&v).ok_or_else(|| TermError::NonIntegerArgument(self.to_string()))
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({})", self)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFactor {
    pub base: RationalFunction,
    pub exponent: LinForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialFactor {
    pub upper: LinForm,
    pub lower: LinForm,
    pub multiplicity: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperTerm {
    prefactor: Polynomial,
    sign: LinForm,
    powers: Vec<PowerFactor>,
    binomials: Vec<BinomialFactor>,
}

impl HyperTerm {
    pub fn new(
        prefactor: Polynomial,
        sign: LinForm,
        powers: Vec<PowerFactor>,
        binomials: Vec<BinomialFactor>,
    ) -> Result<Self, TermError> {
        let ctx = prefactor.context().clone();
        if sign.context() != &ctx {
            return Err(PolyError::ContextMismatch.into());
        }
        for p in &powers {
            if p.base.context() != &ctx || p.exponent.context() != &ctx {
                return Err(PolyError::ContextMismatch.into());
            }
            if p.base.involves(K) || p.base.involves(L) {
                return Err(TermError::Structural(format!(
                    "power base `{}` depends on a summation variable",
                    p.base
                )));
            }
            if p.base.is_zero() {
                return Err(TermError::Structural("power base is zero".into()));
            }
        }
        for b in &binomials {
            if b.upper.context() != &ctx || b.lower.context() != &ctx {
                return Err(PolyError::ContextMismatch.into());
            }
            if b.multiplicity == 0 {
                return Err(TermError::Structural("binomial multiplicity is zero".into()));
            }
        }
        Ok(Self { prefactor, sign, powers, binomials })
    }

    /// A term consisting of a polynomial only.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let ctx = p.context().clone();
        Self { prefactor: p, sign: LinForm::constant(&ctx, 0), powers: vec![], binomials: vec![] }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.prefactor.context()
    }

    pub fn prefactor(&self) -> &Polynomial {
        &self.prefactor
    }

    pub fn sign_exponent(&self) -> &LinForm {
        &self.sign
    }

    pub fn powers(&self) -> &[PowerFactor] {
        &self.powers
    }

    pub fn binomials(&self) -> &[BinomialFactor] {
        &self.binomials
    }

    /// Same term with the prefactor multiplied by `p`.
    pub fn with_prefactor(&self, p: Polynomial) -> Self {
        Self { prefactor: p, ..self.clone() }
    }
}

/// Integer `k`, `l` plus values for every parameter, aligned with the
/// context.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    values: Vec<Rational>,
    ints: Vec<Option<i64>>,
}

impl EvalPoint {
    pub fn new(ctx: &VarContext, k: i64, l: i64, params: &ParamValues) -> Result<Self, TermError> {
        for name in params.keys() {
            if ctx.index_of(name).is_none() {
                return Err(TermError::UnknownParameter(name.clone()));
            }
        }
        let mut values = Vec::with_capacity(ctx.len());
        values.push(Rational::from_integer(k.into()));
        values.push(Rational::from_integer(l.into()));
        for name in ctx.params() {
            let v = params
                .get(name)
                .ok_or_else(|| TermError::Unassigned(name.to_string()))?;
            values.push(v.clone());
        }
        let ints = values.iter().map(rational_to_i64).collect();
        Ok(Self { values, ints })
    }

    pub fn k(&self) -> i64 {
        self.ints[K].expect("k is integral")
    }

    pub fn l(&self) -> i64 {
        self.ints[L].expect("l is integral")
    }

    /// Same parameters, new summation indices.
    pub fn at(&self, k: i64, l: i64) -> Self {
        let mut out = self.clone();
        out.values[K] = Rational::from_integer(k.into());
        out.values[L] = Rational::from_integer(l.into());
        out.ints[K] = Some(k);
        out.ints[L] = Some(l);
        out
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Exact value of `t` at `pt`. `0^0 = 1`; a vanishing factor raised to a
/// negative power is a pole.
pub fn eval_term(t: &HyperTerm, pt: &EvalPoint) -> Result<Rational, TermError> {
    eval_with(t, pt, &mut |_, u, w| binom(u, w))
}

fn binomial_is_zero(u: i64, w: i64) -> bool {
    w < 0 || (u >= 0 && w > u)
}

fn eval_with(
    t: &HyperTerm,
    pt: &EvalPoint,
    binomial: &mut dyn FnMut(usize, i64, i64) -> Integer,
) -> Result<Rational, TermError> {
    // Pole-capable factors first so a pole is never masked by a zero.
    let mut rational_part = Rational::one();
    let mut vanishes = false;
    for p in &t.powers {
        let e = p.exponent.eval(pt)?;
        let b = p.base.eval(&pt.values).map_err(|_| TermError::PoleAtPoint)?;
        if b.is_zero() {
            match e.signum() {
                -1 => return Err(TermError::PoleAtPoint),
                1 => vanishes = true,
                _ => {}
            }
            continue;
        }
        if !vanishes && e != 0 {
            rational_part *= pow_rational(&b, e);
        }
    }
    let mut den = Integer::one();
    let mut args = Vec::with_capacity(t.binomials.len());
    for (i, b) in t.binomials.iter().enumerate() {
        let u = b.upper.eval(pt)?;
        let w = b.lower.eval(pt)?;
        args.push((u, w));
        if b.multiplicity < 0 {
            if binomial_is_zero(u, w) {
                return Err(TermError::PoleAtPoint);
            }
            let v = binomial(i, u, w);
            if v.is_zero() {
                return Err(TermError::PoleAtPoint);
            }
            den *= num_traits::pow(v, b.multiplicity.unsigned_abs() as usize);
        }
    }
    if vanishes {
        return Ok(Rational::zero());
    }
    if args
        .iter()
        .zip(&t.binomials)
        .any(|(&(u, w), b)| b.multiplicity > 0 && binomial_is_zero(u, w))
    {
        return Ok(Rational::zero());
    }
    let pre = t.prefactor.eval(&pt.values);
    if pre.is_zero() {
        return Ok(Rational::zero());
    }
    let mut num = Integer::one();
    for (i, (&(u, w), b)) in args.iter().zip(&t.binomials).enumerate() {
        if b.multiplicity > 0 {
            let v = binomial(i, u, w);
            if v.is_zero() {
                return Ok(Rational::zero());
            }
            num *= num_traits::pow(v, b.multiplicity as usize);
        }
    }
    let s = t.sign.eval(pt)?;
    if s.rem_euclid(2) == 1 {
        num = -num;
    }
    // Integer fast path: skips the gcd normalizations of rational products.
    if den.is_one() && rational_part.is_integer() && pre.is_integer() {
        return Ok(Rational::from_integer(num * rational_part.numer() * pre.numer()));
    }
    Ok(Rational::new(num, den) * rational_part * pre)
}

fn pow_rational(b: &Rational, e: i64) -> Rational {
    let r = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// Term evaluator that remembers the last value of every binomial factor and
/// reaches nearby arguments with exact unit-step ratios instead of
/// recomputing from scratch. Results are identical to [`eval_term`].
pub struct TermEvaluator<'a> {
    term: &'a HyperTerm,
    cache: Vec<Option<(i64, i64, Integer)>>,
    evaluations: u64,
}

const MAX_STEPS: i64 = 8;

impl<'a> TermEvaluator<'a> {
    pub fn new(term: &'a HyperTerm) -> Self {
        Self { term, cache: vec![None; term.binomials.len()], evaluations: 0 }
    }

    pub fn eval(&mut self, pt: &EvalPoint) -> Result<Rational, TermError> {
        self.evaluations += 1;
        let cache = &mut self.cache;
        eval_with(self.term, pt, &mut |i, u, w| {
            let v = match &cache[i] {
                Some((u0, w0, v0)) if (u - u0).abs() + (w - w0).abs() <= MAX_STEPS => {
                    step_binomial(v0.clone(), *u0, *w0, u, w).unwrap_or_else(|| binom(u, w))
                }
                _ => binom(u, w),
            };
            cache[i] = Some((u, w, v.clone()));
            v
        })
    }

    /// Number of [`TermEvaluator::eval`] calls so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }
}

/// Walks `binom(u, w)` to `binom(tu, tw)` one unit at a time. `None` when a
/// step would divide by zero or leave the range where the ratio identities
/// hold.
fn step_binomial(mut v: Integer, mut u: i64, mut w: i64, tu: i64, tw: i64) -> Option<Integer> {
    if w < 0 || tw < 0 {
        return None;
    }
    while u != tu {
        if u < tu {
            // binom(u+1, w) (u+1-w) = binom(u, w) (u+1)
            let d = u + 1 - w;
            if d == 0 {
                return None;
            }
            v *= u + 1;
            v /= d;
            u += 1;
        } else {
            // binom(u-1, w) u = binom(u, w) (u-w)
            if u == 0 {
                return None;
            }
            v *= u - w;
            v /= u;
            u -= 1;
        }
    }
    while w != tw {
        if w < tw {
            // binom(u, w+1) (w+1) = binom(u, w) (u-w)
            v *= u - w;
            v /= w + 1;
            w += 1;
        } else {
            // binom(u, w-1) (u-w+1) = binom(u, w) w
            let d = u - w + 1;
            if d == 0 {
                return None;
            }
            v *= w;
            v /= d;
            w -= 1;
        }
    }
    Some(v)
}

/// Product factor lists with cancellation of identical monic factors.
struct FactorBag {
    constant: Rational,
    num: Vec<Polynomial>,
    den: Vec<Polynomial>,
}

impl FactorBag {
    fn new() -> Self {
        Self { constant: Rational::one(), num: vec![], den: vec![] }
    }

    fn push(&mut self, p: &Polynomial, in_num: bool) -> Result<(), TermError> {
        if p.is_zero() {
            return Err(TermError::Structural("degenerate shift: factor vanishes identically".into()));
        }
        let (lc, monic) = p.monic();
        if in_num {
            self.constant *= lc;
        } else {
            self.constant /= lc;
        }
        if monic.is_one() {
            return Ok(());
        }
        let (same, other) = if in_num { (&mut self.num, &mut self.den) } else { (&mut self.den, &mut self.num) };
        if let Some(pos) = other.iter().position(|q| *q == monic) {
            other.swap_remove(pos);
        } else {
            same.push(monic);
        }
        Ok(())
    }

    fn push_ratio(&mut self, num: &Polynomial, den: &Polynomial, times: i64) -> Result<(), TermError> {
        let (a, b) = if times >= 0 { (num, den) } else { (den, num) };
        for _ in 0..times.abs() {
            self.push(a, true)?;
            self.push(b, false)?;
        }
        Ok(())
    }

    fn into_ratfunc(self, ctx: &Arc<VarContext>) -> Result<RationalFunction, TermError> {
        let num = self
            .num
            .iter()
            .fold(Polynomial::constant(ctx, self.constant), |acc, p| &acc * p);
        let den = self.den.iter().fold(Polynomial::one(ctx), |acc, p| &acc * p);
        Ok(RationalFunction::new(num, den)?)
    }
}

/// `t(v+1) / t(v)` as a rational function, assembled factor by factor.
pub fn shift_quotient(t: &HyperTerm, var: usize) -> Result<RationalFunction, TermError> {
    if var != K && var != L {
        return Err(TermError::Structural("shift quotients are taken in k or l only".into()));
    }
    let ctx = t.context().clone();
    if t.prefactor.is_zero() {
        return Err(TermError::Structural("zero term has no shift quotient".into()));
    }
    let mut bag = FactorBag::new();
    if t.prefactor.involves(var) {
        bag.push_ratio(&t.prefactor.shift(var, 1), &t.prefactor, 1)?;
    }
    if t.sign.coeff(var).rem_euclid(2) == 1 {
        bag.constant = -bag.constant;
    }
    for p in &t.powers {
        let a = p.exponent.coeff(var);
        if a != 0 {
            bag.push_ratio(p.base.numer(), p.base.denom(), a)?;
        }
    }
    for b in &t.binomials {
        let du = b.upper.coeff(var);
        let dw = b.lower.coeff(var);
        if du == 0 && dw == 0 {
            continue;
        }
        let steps = binomial_step_path(&b.upper.to_polynomial(), &b.lower.to_polynomial(), du, dw)
            .ok_or_else(|| {
                TermError::Structural(format!(
                    "no non-degenerate shift path for binom({}, {})",
                    b.upper, b.lower
                ))
            })?;
        for (n, d) in steps {
            bag.push_ratio(&n, &d, b.multiplicity as i64)?;
        }
    }
    bag.into_ratfunc(&ctx)
}

/// Unit-step ratios taking `binom(u, w)` to `binom(u + du, w + dw)`. Tries
/// orderings of upper/lower steps until every ratio is non-degenerate.
fn binomial_step_path(
    u: &Polynomial,
    w: &Polynomial,
    du: i64,
    dw: i64,
) -> Option<Vec<(Polynomial, Polynomial)>> {
    let ctx = u.context();
    let one = Polynomial::one(ctx);
    let mut out = Vec::new();
    fn go(
        u: Polynomial,
        w: Polynomial,
        du: i64,
        dw: i64,
        one: &Polynomial,
        out: &mut Vec<(Polynomial, Polynomial)>,
    ) -> bool {
        if du == 0 && dw == 0 {
            return true;
        }
        let mut moves: Vec<(Polynomial, Polynomial, Polynomial, Polynomial, i64, i64)> = Vec::new();
        if du > 0 {
            let n = &u + one;
            let d = &n - &w;
            moves.push((n.clone(), d, n, w.clone(), du - 1, dw));
        } else if du < 0 {
            let n = &u - &w;
            let nu = &u - one;
            moves.push((n, u.clone(), nu, w.clone(), du + 1, dw));
        }
        if dw > 0 {
            let n = &u - &w;
            let d = &w + one;
            moves.push((n, d.clone(), u.clone(), d, du, dw - 1));
        } else if dw < 0 {
            let d = &(&u - &w) + one;
            let nw = &w - one;
            moves.push((w.clone(), d, u.clone(), nw, du, dw + 1));
        }
        for (n, d, nu, nw, ndu, ndw) in moves {
            if n.is_zero() || d.is_zero() {
                continue;
            }
            out.push((n, d));
            if go(nu, nw, ndu, ndw, one, out) {
                return true;
            }
            out.pop();
        }
        false
    }
    go(u.clone(), w.clone(), du, dw, &one, &mut out).then_some(out)
}

/// A hypergeometric term times a rational function, evaluated pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledTerm {
    pub factor: RationalFunction,
    pub term: HyperTerm,
}

/// Pairs `r` with `t`; poles of `r` surface only when evaluated.
pub fn term_scale(t: &HyperTerm, r: &RationalFunction) -> ScaledTerm {
    ScaledTerm { factor: r.clone(), term: t.clone() }
}

impl ScaledTerm {
    pub fn eval(&self, pt: &EvalPoint) -> Result<Rational, TermError> {
        let r = self.factor.eval(&pt.values).map_err(|_| TermError::PoleAtPoint)?;
        if r.is_zero() {
            // The term may still hide a pole; surface it for consistency.
            eval_term(&self.term, pt)?;
            return Ok(Rational::zero());
        }
        Ok(r * eval_term(&self.term, pt)?)
    }
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.prefactor.is_one() {
            parts.push(format!("({})", self.prefactor));
        }
        if !self.sign.is_zero() {
            parts.push(format!("(-1)^{}", render_exponent(&self.sign)));
        }
        for p in &self.powers {
            parts.push(format!("({})^{}", p.base, render_exponent(&p.exponent)));
        }
        for b in &self.binomials {
            let mut s = format!("binom({}, {})", b.upper, b.lower);
            if b.multiplicity != 1 {
                s.push_str(&format!("^{}", b.multiplicity));
            }
            parts.push(s);
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

/// Exponents print bare only when they are a single variable; anything
/// else is parenthesized so it never reads back as a literal power.
fn render_exponent(e: &LinForm) -> String {
    let nonzero: Vec<usize> = (0..e.ctx.len()).filter(|&i| e.coeffs[i] != 0).collect();
    if e.constant == 0 && nonzero.len() == 1 && e.coeffs[nonzero[0]] == 1 {
        e.ctx.name(nonzero[0]).to_string()
    } else {
        format!("({})", e)
    }
}
