//! Telescoping certificates: symbolic and pointwise verification, the
//! boundary-sum reduction of the triangular double sum, and the ansatz
//! search for certificates.

mod search;

pub use search::{find_certificate, solve_linear_system, MAX_ANSATZ_DEGREE};

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{int, Integer, Rational};
use crate::poly::{PolyError, Polynomial, RationalFunction, VarContext, K, L};
use crate::term::{
    eval_term, shift_quotient, term_scale, EvalPoint, HyperTerm, ParamValues, ScaledTerm, TermError,
    TermEvaluator,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("boundary value {which}({k}, {l}) hits a pole; a closed form is needed there")]
    ReductionNeedsClosedForm { which: &'static str, k: i64, l: i64 },
    #[error("found only {found} of {wanted} pole-free sample points")]
    Sampling { found: usize, wanted: usize },
    #[error("no certificate of this shape exists")]
    NotFound,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub r1: RationalFunction,
    pub r2: RationalFunction,
}

/// A boundary function `G_i`: either written in closed form or obtained as
/// `R_i * F` and evaluated pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GTerm {
    Closed(HyperTerm),
    Scaled(ScaledTerm),
}

impl GTerm {
    pub fn eval(&self, pt: &EvalPoint) -> Result<Rational, TermError> {
        match self {
            GTerm::Closed(t) => eval_term(t, pt),
            GTerm::Scaled(s) => s.eval(pt),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, GTerm::Closed(_))
    }

    fn evaluator(&self) -> GEvaluator<'_> {
        match self {
            GTerm::Closed(t) => GEvaluator { factor: None, inner: TermEvaluator::new(t) },
            GTerm::Scaled(s) => GEvaluator { factor: Some(&s.factor), inner: TermEvaluator::new(&s.term) },
        }
    }
}

struct GEvaluator<'a> {
    factor: Option<&'a RationalFunction>,
    inner: TermEvaluator<'a>,
}

impl GEvaluator<'_> {
    fn eval(&mut self, pt: &EvalPoint) -> Result<Rational, TermError> {
        let Some(r) = self.factor else { return self.inner.eval(pt) };
        let rv = r.eval(pt.values()).map_err(|_| TermError::PoleAtPoint)?;
        let tv = self.inner.eval(pt)?;
        Ok(rv * tv)
    }

    fn evaluations(&self) -> u64 {
        self.inner.evaluations()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPair {
    pub g1: GTerm,
    pub g2: GTerm,
}

impl ClosedPair {
    pub fn closed(g1: HyperTerm, g2: HyperTerm) -> Self {
        Self { g1: GTerm::Closed(g1), g2: GTerm::Closed(g2) }
    }

    /// `G_i = R_i F`, evaluated pointwise.
    pub fn from_certificate(f: &HyperTerm, cert: &Certificate) -> Self {
        Self {
            g1: GTerm::Scaled(term_scale(f, &cert.r1)),
            g2: GTerm::Scaled(term_scale(f, &cert.r2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub f: HyperTerm,
    pub cert: Option<Certificate>,
    pub closed: Option<ClosedPair>,
}

impl Problem {
    pub fn context(&self) -> &Arc<VarContext> {
        self.f.context()
    }

    /// Closed forms when given, otherwise `R * F`.
    pub fn boundary(&self) -> Option<ClosedPair> {
        self.closed
            .clone()
            .or_else(|| self.cert.as_ref().map(|c| ClosedPair::from_certificate(&self.f, c)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub symbolic_pass: bool,
    pub numeric_pass: bool,
    pub checked_points: u64,
    pub skipped_poles: u64,
    pub details: String,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symbolic={} numeric={} checked={} skipped_poles={}",
            self.symbolic_pass, self.numeric_pass, self.checked_points, self.skipped_poles
        )?;
        if !self.details.is_empty() {
            write!(f, " ({})", self.details)?;
        }
        Ok(())
    }
}

/// Polynomial pieces of the certificate identity after clearing all
/// denominators. With `R1 = A/B`, `R2 = C/D`, `u = Un/Ud`, `v = Vn/Vd`
/// and primes marking the shifted copies `B' = B(k+1,l)`, `D'' = D(k,l+1)`:
///
/// ```text
/// A'*P1 - A*P2 + C''*P3 - C*P4 == L
/// P1 = Un B D'' Vd D      P2 = B' Ud D'' Vd D
/// P3 = Vn B' Ud B D       P4 = B' Ud B D'' Vd
/// L  = B' Ud B D'' Vd D
/// ```
pub(crate) struct ClearedIdentity {
    pub p1: Polynomial,
    pub p2: Polynomial,
    pub p3: Polynomial,
    pub p4: Polynomial,
    pub rhs: Polynomial,
}

impl ClearedIdentity {
    pub fn new(f: &HyperTerm, d1: &Polynomial, d2: &Polynomial) -> Result<Self, CertError> {
        let u = shift_quotient(f, K)?;
        let v = shift_quotient(f, L)?;
        let (un, ud) = (u.numer(), u.denom());
        let (vn, vd) = (v.numer(), v.denom());
        let b = d1;
        let bs = d1.shift(K, 1);
        let d = d2;
        let ds = d2.shift(L, 1);
        let bs_ud = bs.checked_mul(ud)?;
        let ds_vd = ds.checked_mul(vd)?;
        let ds_vd_d = ds_vd.checked_mul(d)?;
        let p1 = un.checked_mul(b)?.checked_mul(&ds_vd_d)?;
        let p2 = bs_ud.checked_mul(&ds_vd_d)?;
        let bs_ud_b = bs_ud.checked_mul(b)?;
        let p3 = vn.checked_mul(&bs_ud_b)?.checked_mul(d)?;
        let p4 = bs_ud_b.checked_mul(&ds_vd)?;
        let rhs = bs_ud_b.checked_mul(&ds_vd_d)?;
        Ok(Self { p1, p2, p3, p4, rhs })
    }

    pub fn residual(&self, a: &Polynomial, c: &Polynomial) -> Result<Polynomial, CertError> {
        let lhs = a
            .shift(K, 1)
            .checked_mul(&self.p1)?
            .checked_sub(&a.checked_mul(&self.p2)?)?
            .checked_add(&c.shift(L, 1).checked_mul(&self.p3)?)?
            .checked_sub(&c.checked_mul(&self.p4)?)?;
        Ok(lhs.checked_sub(&self.rhs)?)
    }
}

/// Decides `1 = R1(k+1,l) u - R1 + R2(k,l+1) v - R2` as an identity of
/// rational functions, `u`, `v` the shift quotients of `F`.
pub fn verify_symbolic(f: &HyperTerm, cert: &Certificate) -> VerifyReport {
    let outcome = (|| -> Result<Polynomial, CertError> {
        let id = ClearedIdentity::new(f, cert.r1.denom(), cert.r2.denom())?;
        id.residual(cert.r1.numer(), cert.r2.numer())
    })();
    match outcome {
        Ok(res) if res.is_zero() => VerifyReport {
            symbolic_pass: true,
            details: "telescoping identity holds".into(),
            ..Default::default()
        },
        Ok(res) => VerifyReport {
            details: format!("identity residual has {} nonzero terms", res.len()),
            ..Default::default()
        },
        Err(e) => VerifyReport { details: e.to_string(), ..Default::default() },
    }
}

/// Binds the parameter `n`, when the context has one, to the sum length.
pub fn bind_params(ctx: &VarContext, n: i64, params: &ParamValues) -> ParamValues {
    let mut out = params.clone();
    if ctx.index_of("n").is_some() {
        out.insert("n".into(), int(n));
    }
    out
}

/// Checks `F = G1(k+1,l) - G1(k,l) + G2(k,l+1) - G2(k,l)` on `0 <= l <= k <= kmax`.
pub fn verify_numeric(
    f: &HyperTerm,
    closed: &ClosedPair,
    kmax: i64,
    params: &ParamValues,
) -> Result<VerifyReport, CertError> {
    if kmax < 1 {
        return Err(CertError::InvalidArgument("kmax must be at least 1".into()));
    }
    let base = EvalPoint::new(f.context(), 0, 0, params)?;
    let mut report = VerifyReport { numeric_pass: true, ..Default::default() };
    for k in 0..=kmax {
        for l in 0..=k {
            let fv = eval_term(f, &base.at(k, l))?;
            let g = (|| -> Result<Rational, TermError> {
                Ok(closed.g1.eval(&base.at(k + 1, l))? - closed.g1.eval(&base.at(k, l))?
                    + closed.g2.eval(&base.at(k, l + 1))?
                    - closed.g2.eval(&base.at(k, l))?)
            })();
            match g {
                Ok(g) => {
                    report.checked_points += 1;
                    if g != fv && report.numeric_pass {
                        report.numeric_pass = false;
                        report.details = format!("mismatch at k={k}, l={l}: F={fv}, telescoped={g}");
                    }
                }
                Err(TermError::PoleAtPoint) => report.skipped_poles += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    if report.checked_points == 0 {
        report.numeric_pass = false;
        report.details = "no pole-free points".into();
    }
    Ok(report)
}

pub const DEFAULT_SEED: u64 = 0x7e1e_5c0f;

/// `G_i = R_i F` at `sample` random points where both sides are defined
/// and `F` does not vanish.
pub fn check_consistency(
    f: &HyperTerm,
    cert: &Certificate,
    closed: &ClosedPair,
    sample: usize,
) -> Result<bool, CertError> {
    check_consistency_seeded(f, cert, closed, sample, DEFAULT_SEED)
}

pub fn check_consistency_seeded(
    f: &HyperTerm,
    cert: &Certificate,
    closed: &ClosedPair,
    sample: usize,
    seed: u64,
) -> Result<bool, CertError> {
    let ctx = f.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    let max_attempts = sample.max(1) * 400;
    for _ in 0..max_attempts {
        if found == sample {
            break;
        }
        let k = rng.random_range(0..=40i64);
        let l = rng.random_range(0..=k);
        let params: ParamValues =
            ctx.params().map(|p| (p.to_string(), int(rng.random_range(-6..=9i64)))).collect();
        let pt = EvalPoint::new(ctx, k, l, &params)?;
        let Ok(fv) = eval_term(f, &pt) else { continue };
        if fv.is_zero() {
            continue;
        }
        let (Ok(r1), Ok(r2)) = (cert.r1.eval(pt.values()), cert.r2.eval(pt.values())) else {
            continue;
        };
        let (Ok(g1), Ok(g2)) = (closed.g1.eval(&pt), closed.g2.eval(&pt)) else { continue };
        found += 1;
        if g1 != r1 * &fv || g2 != r2 * &fv {
            return Ok(false);
        }
    }
    if found < sample {
        return Err(CertError::Sampling { found, wanted: sample });
    }
    Ok(true)
}

/// A sum value together with the number of term evaluations spent on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counted {
    pub value: Rational,
    pub evaluations: u64,
}

/// `S_n = sum_{k<n} sum_{l<=k} F(k,l)`.
pub fn naive_sum(f: &HyperTerm, n: i64, params: &ParamValues) -> Result<Rational, CertError> {
    Ok(naive_sum_counted(f, n, params)?.value)
}

pub fn naive_sum_counted(f: &HyperTerm, n: i64, params: &ParamValues) -> Result<Counted, CertError> {
    if n < 1 {
        return Err(CertError::InvalidArgument("n must be positive".into()));
    }
    let base = EvalPoint::new(f.context(), 0, 0, &bind_params(f.context(), n, params))?;
    let mut ev = TermEvaluator::new(f);
    // Integer values are summed apart from the rest to avoid a gcd per term.
    let mut whole = Integer::zero();
    let mut acc = Rational::zero();
    for k in 0..n {
        for l in 0..=k {
            let v = ev.eval(&base.at(k, l))?;
            if v.is_integer() {
                whole += v.numer();
            } else {
                acc += v;
            }
        }
    }
    Ok(Counted { value: acc + whole, evaluations: ev.evaluations() })
}

/// `S_n` through the boundary sums
/// `sum_{l<n} (G1(n,l) - G1(l,l)) + sum_{k<n} (G2(k,k+1) - G2(k,0))`.
pub fn reduce(f: &HyperTerm, closed: &ClosedPair, n: i64, params: &ParamValues) -> Result<Rational, CertError> {
    Ok(reduce_counted(f, closed, n, params)?.value)
}

pub fn reduce_counted(
    f: &HyperTerm,
    closed: &ClosedPair,
    n: i64,
    params: &ParamValues,
) -> Result<Counted, CertError> {
    if n < 1 {
        return Err(CertError::InvalidArgument("n must be positive".into()));
    }
    let base = EvalPoint::new(f.context(), 0, 0, &bind_params(f.context(), n, params))?;
    let sweeps: [(&GTerm, &'static str, bool, fn(i64, i64) -> (i64, i64)); 4] = [
        (&closed.g1, "G1", true, |n, i| (n, i)),
        (&closed.g1, "G1", false, |_, i| (i, i)),
        (&closed.g2, "G2", true, |_, i| (i, i + 1)),
        (&closed.g2, "G2", false, |_, i| (i, 0)),
    ];
    let mut acc = Rational::zero();
    let mut evaluations = 0;
    for (g, which, plus, at) in sweeps {
        let mut ev = g.evaluator();
        for i in 0..n {
            let (k, l) = at(n, i);
            let v = ev.eval(&base.at(k, l)).map_err(|e| match e {
                TermError::PoleAtPoint => CertError::ReductionNeedsClosedForm { which, k, l },
                e => e.into(),
            })?;
            if plus {
                acc += v;
            } else {
                acc -= v;
            }
        }
        evaluations += ev.evaluations();
    }
    Ok(Counted { value: acc, evaluations })
}
