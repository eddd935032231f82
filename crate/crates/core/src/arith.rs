//! Exact integer and rational arithmetic, plus the number-theoretic helpers
//! (binomials, Legendre symbols, Fermat quotients, harmonic and Bernoulli
//! numbers, residues of rationals modulo prime powers) that the congruence
//! catalog is written in.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(Integer),
    #[error("{0} is not an odd prime")]
    NotOddPrime(Integer),
    #[error("prime power exponent must be at least 1")]
    ZeroExponent,
    #[error("denominator of {value} is not invertible modulo {prime}")]
    NonInvertibleDenominator { value: Rational, prime: Integer },
}

/// A modulus of the form `p^e` with `p` prime and `e >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    p: Integer,
    e: u32,
    modulus: Integer,
}

impl PrimePower {
    pub fn new(p: impl Into<Integer>, e: u32) -> Result<Self, ArithError> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(ArithError::NotPrime(p));
        }
        if e == 0 {
            return Err(ArithError::ZeroExponent);
        }
        let modulus = num_traits::pow(p.clone(), e as usize);
        Ok(Self { p, e, modulus })
    }

    pub fn prime(&self) -> &Integer {
        &self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// The modulus `p^e` itself.
    pub fn modulus(&self) -> &Integer {
        &self.modulus
    }
}

/// Deterministic primality by trial division up to the square root.
pub fn is_prime(n: &Integer) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => {
            if n.is_negative() {
                return false;
            }
            let two = Integer::from(2);
            if n.is_even() {
                return false;
            }
            let mut d = Integer::from(3);
            while &d * &d <= *n {
                if (n % &d).is_zero() {
                    return false;
                }
                d += &two;
            }
            true
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime_u64(p)).collect()
}

pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Generalized binomial coefficient `m (m-1) ... (m-r+1) / r!`.
///
/// Defined for every integer `m` (including negative upper indices) and is
/// zero whenever `r < 0`.
pub fn binomial(m: &Integer, r: i64) -> Integer {
    if let Some(m) = m.to_i64() {
        return binom(m, r);
    }
    if r < 0 {
        return Integer::zero();
    }
    if m.is_negative() {
        // binom(m, r) = (-1)^r binom(r - m - 1, r)
        let flipped = binomial(&(Integer::from(r) - m - 1), r);
        return if r % 2 == 0 { flipped } else { -flipped };
    }
    let mut acc = Integer::one();
    for i in 0..r {
        acc *= m - i;
        acc /= i + 1;
    }
    acc
}

/// [`binomial`] for machine-sized arguments; the hot path of term evaluation.
pub fn binom(m: i64, r: i64) -> Integer {
    if r < 0 {
        return Integer::zero();
    }
    if m < 0 {
        let flipped = binom(r - m - 1, r);
        return if r % 2 == 0 { flipped } else { -flipped };
    }
    if r > m {
        return Integer::zero();
    }
    let r = r.min(m - r) as u64;
    let m = m as u64;
    let mut acc = Integer::one();
    for i in 0..r {
        acc *= m - i;
        acc /= i + 1;
    }
    acc
}

/// The `l`-th Catalan number `binom(2l, l) / (l + 1)`.
pub fn catalan(l: u64) -> Integer {
    binom(2 * l as i64, l as i64) / (l + 1)
}

/// Legendre symbol `(a / p)` via Euler's criterion.
pub fn legendre(a: &Integer, p: &Integer) -> Result<i8, ArithError> {
    if p <= &Integer::from(2) || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p.clone()));
    }
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    Ok(if a.modpow(&e, p).is_one() { 1 } else { -1 })
}

/// Fermat quotient `(2^(p-1) - 1) / p` for an odd prime `p`.
pub fn fermat_quotient_2(p: &Integer) -> Result<Integer, ArithError> {
    if p <= &Integer::from(2) || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p.clone()));
    }
    let e = (p - 1u32)
        .to_usize()
        .ok_or_else(|| ArithError::NotOddPrime(p.clone()))?;
    let pow: Integer = num_traits::pow(Integer::from(2), e);
    Ok((pow - 1u32) / p)
}

/// `H_n = sum_{0 < k <= n} 1/k`; `H_0 = 0`.
pub fn harmonic(n: u64) -> Rational {
    // Accumulate over a running common denominator and reduce once.
    let mut num = Integer::zero();
    let mut den = Integer::one();
    for k in 1..=n {
        // num/den + 1/k = (num*k + den) / (den*k)
        num = num * k + &den;
        den *= k;
    }
    Rational::new(num, den)
}

/// Bernoulli numbers `B_0..=B_n` from `sum_{j=0}^{m} binom(m+1, j) B_j = 0`,
/// with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += b * Rational::from_integer(binom(m as i64 + 1, j as i64));
        }
        table.push(-acc / Rational::from_integer(Integer::from(m + 1)));
    }
    table
}

pub fn bernoulli(n: usize) -> Rational {
    if n > 1 && n % 2 == 1 {
        return Rational::zero();
    }
    bernoulli_table(n).pop().expect("table holds B_0")
}

/// Non-negative residue of `a` modulo `m`.
pub fn mod_floor(a: &Integer, m: &Integer) -> Integer {
    a.mod_floor(m)
}

/// Residue of `q = num/den` modulo `p^e`, i.e. `num * den^{-1} mod p^e`.
pub fn rational_mod(q: &Rational, m: &PrimePower) -> Result<Integer, ArithError> {
    let modulus = m.modulus();
    let den = q.denom();
    if (den % m.prime()).is_zero() {
        return Err(ArithError::NonInvertibleDenominator {
            value: q.clone(),
            prime: m.prime().clone(),
        });
    }
    let num = q.numer().mod_floor(modulus);
    if den.is_one() {
        return Ok(num);
    }
    let inv = mod_inverse(&den.mod_floor(modulus), modulus)
        .expect("denominator coprime to p is a unit mod p^e");
    Ok((num * inv).mod_floor(modulus))
}

fn mod_inverse(a: &Integer, m: &Integer) -> Option<Integer> {
    let egcd = a.extended_gcd(m);
    if !egcd.gcd.is_one() {
        return None;
    }
    Some(egcd.x.mod_floor(m))
}

/// Convenience constructor used throughout tests and case definitions.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}
