//! The combinatorial sequences behind the double sums, computed from their
//! defining single sums, with a process-wide memo.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{LazyLock, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{binom, catalan as catalan_number, Integer, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceId {
    Franel,
    FranelStrehl,
    SunF,
    Domb,
    Apery,
    AperyAlt,
    AperyPoly,
    GPoly,
    G,
    Trinomial,
    Catalan,
}

impl SequenceId {
    pub const ALL: [SequenceId; 11] = [
        SequenceId::Franel,
        SequenceId::FranelStrehl,
        SequenceId::SunF,
        SequenceId::Domb,
        SequenceId::Apery,
        SequenceId::AperyAlt,
        SequenceId::AperyPoly,
        SequenceId::GPoly,
        SequenceId::G,
        SequenceId::Trinomial,
        SequenceId::Catalan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceId::Franel => "franel",
            SequenceId::FranelStrehl => "franel_strehl",
            SequenceId::SunF => "sunF",
            SequenceId::Domb => "domb",
            SequenceId::Apery => "apery",
            SequenceId::AperyAlt => "apery_alt",
            SequenceId::AperyPoly => "apery_poly",
            SequenceId::GPoly => "g_poly",
            SequenceId::G => "g",
            SequenceId::Trinomial => "trinomial",
            SequenceId::Catalan => "catalan",
        }
    }

    /// Names of the extra arguments, in order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            SequenceId::AperyPoly | SequenceId::GPoly => &["x"],
            SequenceId::Trinomial => &["b", "c"],
            _ => &[],
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("sequence `{id}` takes parameters {expected:?}, got {got}")]
    BadParams { id: SequenceId, expected: &'static [&'static str], got: usize },
    #[error("parameter `{0}` must be an integer")]
    NonInteger(String),
    #[error("malformed cache row: {0}")]
    BadRow(String),
}

impl FromStr for SequenceId {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SequenceId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| SeqError::UnknownSequence(s.to_string()))
    }
}

fn sum_over<F: Fn(i64) -> Integer>(lo: i64, hi: i64, f: F) -> Integer {
    (lo..=hi).map(f).sum()
}

/// `f_k = sum_l binom(k,l)^3`.
pub fn franel(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k, l), 3))
}

/// `sum_l binom(k,l)^2 binom(2l,k)`.
pub fn franel_strehl(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k, l), 2) * binom(2 * l, k))
}

/// `F_k = sum_l binom(k,l)^3 (-8)^l`.
pub fn sun_f(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k, l), 3) * num_traits::pow(Integer::from(-8), l as usize))
}

/// `D_k = sum_l binom(k,l)^2 binom(2l,l) binom(2(k-l),k-l)`.
pub fn domb(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k, l), 2) * binom(2 * l, l) * binom(2 * (k - l), k - l))
}

/// `A_k = sum_l binom(k,l)^2 binom(k+l,l)^2`.
pub fn apery(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k, l) * binom(k + l, l), 2))
}

/// `sum_l binom(k+l,2l)^2 binom(2l,l)^2`.
pub fn apery_alt(k: u64) -> Integer {
    let k = k as i64;
    sum_over(0, k, |l| num_traits::pow(binom(k + l, 2 * l) * binom(2 * l, l), 2))
}

fn poly_sum<F: Fn(i64) -> Integer>(n: u64, x: &Rational, coeff: F) -> Rational {
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    for j in 0..=n as i64 {
        acc += Rational::from_integer(coeff(j)) * &xp;
        xp *= x;
    }
    acc
}

/// `A_n(x) = sum_k binom(n,k)^2 binom(n+k,k)^2 x^k`.
pub fn apery_poly(n: u64, x: &Rational) -> Rational {
    let ni = n as i64;
    poly_sum(n, x, |k| num_traits::pow(binom(ni, k) * binom(ni + k, k), 2))
}

/// `g_n(x) = sum_k binom(n,k)^2 binom(2k,k) x^k`.
pub fn g_poly(n: u64, x: &Rational) -> Rational {
    let ni = n as i64;
    poly_sum(n, x, |k| num_traits::pow(binom(ni, k), 2) * binom(2 * k, k))
}

/// `g_n = g_n(1)`.
pub fn g(n: u64) -> Integer {
    let ni = n as i64;
    sum_over(0, ni, |k| num_traits::pow(binom(ni, k), 2) * binom(2 * k, k))
}

/// Coefficient of `x^n` in `(x^2 + b x + c)^n`, by repeated multiplication
/// truncated above degree `n`.
pub fn trinomial(n: u64, b: &Integer, c: &Integer) -> Integer {
    let n = n as usize;
    let base = [c.clone(), b.clone(), Integer::one()];
    let mut acc = vec![Integer::zero(); n + 1];
    acc[0] = Integer::one();
    for _ in 0..n {
        let mut next = vec![Integer::zero(); n + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, t) in base.iter().enumerate() {
                if i + j <= n && !t.is_zero() {
                    next[i + j] += a * t;
                }
            }
        }
        acc = next;
    }
    acc.swap_remove(n)
}

/// `sum_l binom(k+l,2l) binom(2l,l)^2 c^(2l) (b^2-4c^2)^(k-l)`, which equals
/// `T_k(b, c^2)^2`.
pub fn trinomial_sq_expansion(k: u64, b: &Integer, c: &Integer) -> Integer {
    let ki = k as i64;
    let d: Integer = b * b - Integer::from(4) * c * c;
    sum_over(0, ki, |l| {
        binom(ki + l, 2 * l)
            * num_traits::pow(binom(2 * l, l), 2)
            * num_traits::pow(c.clone(), 2 * l as usize)
            * num_traits::pow(d.clone(), (ki - l) as usize)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    id: SequenceId,
    params: String,
    k: u64,
}

static CACHE: LazyLock<RwLock<HashMap<Key, Rational>>> = LazyLock::new(Default::default);
static COMPUTED: AtomicU64 = AtomicU64::new(0);

/// Canonical text for a parameter list, e.g. `b=1;c=-2`. Empty when the
/// sequence takes none.
pub fn params_key(id: SequenceId, params: &[Rational]) -> String {
    id.param_names()
        .iter()
        .zip(params)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn integer_param(v: &Rational, name: &str) -> Result<Integer, SeqError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(SeqError::NonInteger(name.to_string()))
    }
}

fn compute(id: SequenceId, k: u64, params: &[Rational]) -> Result<Rational, SeqError> {
    let int = |v: Integer| Ok(Rational::from_integer(v));
    match id {
        SequenceId::Franel => int(franel(k)),
        SequenceId::FranelStrehl => int(franel_strehl(k)),
        SequenceId::SunF => int(sun_f(k)),
        SequenceId::Domb => int(domb(k)),
        SequenceId::Apery => int(apery(k)),
        SequenceId::AperyAlt => int(apery_alt(k)),
        SequenceId::AperyPoly => Ok(apery_poly(k, &params[0])),
        SequenceId::GPoly => Ok(g_poly(k, &params[0])),
        SequenceId::G => int(g(k)),
        SequenceId::Trinomial => {
            let b = integer_param(&params[0], "b")?;
            let c = integer_param(&params[1], "c")?;
            int(trinomial(k, &b, &c))
        }
        SequenceId::Catalan => int(catalan_number(k)),
    }
}

/// Memoized value. Concurrent callers may compute the same entry; the first
/// insertion wins and every caller sees the same value.
pub fn value(id: SequenceId, k: u64, params: &[Rational]) -> Result<Rational, SeqError> {
    if params.len() != id.param_names().len() {
        return Err(SeqError::BadParams { id, expected: id.param_names(), got: params.len() });
    }
    let key = Key { id, params: params_key(id, params), k };
    if let Some(v) = CACHE.read().expect("seq cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = compute(id, k, params)?;
    COMPUTED.fetch_add(1, Ordering::Relaxed);
    let mut w = CACHE.write().expect("seq cache poisoned");
    Ok(w.entry(key).or_insert(v).clone())
}

/// Number of values computed (not served from the memo) in this process.
pub fn computed_count() -> u64 {
    COMPUTED.load(Ordering::Relaxed)
}

/// One memo entry in the `sequence,params,k,value` layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRow {
    pub sequence: String,
    pub params: String,
    pub k: u64,
    pub value: String,
}

/// Snapshot of the memo, sorted by sequence, params, index.
pub fn cache_rows() -> Vec<CacheRow> {
    let r = CACHE.read().expect("seq cache poisoned");
    let mut rows: Vec<CacheRow> = r
        .iter()
        .map(|(key, v)| CacheRow {
            sequence: key.id.name().to_string(),
            params: key.params.clone(),
            k: key.k,
            value: v.to_string(),
        })
        .collect();
    rows.sort_by(|a, b| (&a.sequence, &a.params, a.k).cmp(&(&b.sequence, &b.params, b.k)));
    rows
}

/// Seeds the memo with previously exported rows.
pub fn load_rows(rows: impl IntoIterator<Item = CacheRow>) -> Result<usize, SeqError> {
    let mut w = CACHE.write().expect("seq cache poisoned");
    let mut n = 0;
    for row in rows {
        let id: SequenceId = row.sequence.parse()?;
        let v: Rational = row.value.parse().map_err(|_| SeqError::BadRow(row.value.clone()))?;
        w.entry(Key { id, params: row.params, k: row.k }).or_insert(v);
        n += 1;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!((0..4).map(franel).collect::<Vec<_>>(), ints(&[1, 2, 10, 56]));
        assert_eq!(franel_strehl(2), Integer::from(10));
        assert_eq!(franel_strehl(5), franel(5));
        assert_eq!(sun_f(0), Integer::from(1));
        assert_eq!(sun_f(1), Integer::from(-7));
        // 1 - 8*8 + 64 with binom(2,1)^3 = 8 and (-8)^2 = 64.
        assert_eq!(sun_f(2), Integer::from(1));
        assert_eq!((0..3).map(domb).collect::<Vec<_>>(), ints(&[1, 4, 28]));
        assert_eq!(apery(0), Integer::from(1));
        assert_eq!(apery(1), Integer::from(5));
        assert_eq!(apery_alt(2), apery(2));
        assert_eq!(g_poly(1, &int(1)), int(3));
        assert_eq!(g_poly(7, &int(0)), int(1));
        assert_eq!(apery_poly(1, &int(1)), int(5));
        assert_eq!(g(0), Integer::from(1));
        assert_eq!(g(2), Integer::from(15));
        assert_eq!(g(3), Integer::from(93));
        assert_eq!((0..4).map(catalan_number).collect::<Vec<_>>(), ints(&[1, 1, 2, 5]));
    }

    #[test]
    fn trinomial_examples() {
        let one = Integer::one();
        assert_eq!(trinomial(2, &one, &one), Integer::from(3));
        assert_eq!(trinomial(4, &one, &one), Integer::from(19));
        for n in 0..8 {
            assert_eq!(trinomial(n, &Integer::from(3), &Integer::zero()), Integer::from(3).pow(n as u32));
        }
        assert_eq!(trinomial_sq_expansion(0, &Integer::from(5), &Integer::from(2)), one);
        assert_eq!(trinomial_sq_expansion(2, &one, &one), Integer::from(9));
        let t = trinomial(3, &Integer::from(3), &Integer::from(4));
        assert_eq!(trinomial_sq_expansion(3, &Integer::from(3), &Integer::from(2)), &t * &t);
    }

    #[test]
    fn memo_serves_repeats() {
        let x = rat(1, 2);
        let a = value(SequenceId::GPoly, 9, std::slice::from_ref(&x)).unwrap();
        let before = computed_count();
        let b = value(SequenceId::GPoly, 9, &[x]).unwrap();
        assert_eq!(a, b);
        assert_eq!(computed_count(), before);
        assert!(cache_rows().iter().any(|r| r.sequence == "g_poly" && r.params == "x=1/2" && r.k == 9));
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(value(SequenceId::Trinomial, 3, &[int(1)]), Err(SeqError::BadParams { .. })));
        assert_eq!(
            value(SequenceId::Trinomial, 3, &[rat(1, 2), int(1)]),
            Err(SeqError::NonInteger("b".into()))
        );
        assert!("nope".parse::<SequenceId>().is_err());
        assert_eq!("sunF".parse::<SequenceId>(), Ok(SequenceId::SunF));
    }
}
