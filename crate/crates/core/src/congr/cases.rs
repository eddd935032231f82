//! The registered claims. Each evaluator computes its exact integer sum
//! first and only then reduces.

use std::collections::HashMap;
use std::sync::LazyLock;

use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::{CaseInfo, ClaimKind, DomainKind, Instance};
use crate::arith::{
    bernoulli, binomial, fermat_quotient_2, harmonic, is_power_of_two, legendre, mod_floor, rational_mod, Integer,
    PrimePower, Rational,
};
use crate::cert::{bind_params, naive_sum, reduce, CertError, ClosedPair, Problem};
use crate::problems;
use crate::seq;
use crate::term::ParamValues;

/// Result of one instance before it is stamped with a status.
pub(crate) struct Outcome {
    pub pass: bool,
    pub lhs_mod: String,
    pub rhs_mod: String,
    pub modulus: String,
    pub note: Option<String>,
}

impl Outcome {
    fn error(note: String) -> Self {
        Self { pass: false, lhs_mod: "-".into(), rhs_mod: "-".into(), modulus: "-".into(), note: Some(note) }
    }

    /// `lhs ≡ rhs (mod m)` for integers.
    fn congruence(lhs: &Integer, rhs: &Integer, m: &Integer) -> Self {
        let a = mod_floor(lhs, m);
        let b = mod_floor(rhs, m);
        Self { pass: a == b, lhs_mod: a.to_string(), rhs_mod: b.to_string(), modulus: m.to_string(), note: None }
    }

    /// Residues already reduced modulo `m`.
    fn residues(a: Integer, b: Integer, m: &Integer) -> Self {
        Self { pass: a == b, lhs_mod: a.to_string(), rhs_mod: b.to_string(), modulus: m.to_string(), note: None }
    }

    /// `m | lhs`, checked by exact division.
    fn divisibility(lhs: &Integer, m: &Integer) -> Self {
        let (_, r) = lhs.div_mod_floor(m);
        Self::residues(r, Integer::zero(), m)
    }
}

pub(crate) struct Case {
    pub info: CaseInfo,
    pub eval: fn(&Instance, bool) -> Outcome,
}

const fn info(
    id: &'static str,
    kind: ClaimKind,
    domain: DomainKind,
    claim: &'static str,
    lo: u64,
    full_max: u64,
    guard: u64,
) -> CaseInfo {
    CaseInfo { id, kind, domain, claim, lo, full_max, guard, conjecture: false, sweeps_bc: false }
}

use ClaimKind::*;
use DomainKind::*;

pub(crate) static CASES: &[Case] = &[
    Case {
        info: info("T1.1-n", Divisibility, Integers, "sum (9k^2+5k)(-1)^k f_k = 0 mod n^2(n-1)", 2, 200, 600),
        eval: t11_n,
    },
    Case {
        info: info("T1.1-p", Congruence, Primes, "sum (9k^2+5k)(-1)^k f_k = 3p^2(p-1) - 16p^3 q_p(2) mod p^4", 3, 60, 200),
        eval: t11_p,
    },
    Case {
        info: info("T1.2-odd", Parity, Integers, "(1/n^2) sum (8k^2+12k+5) g_k(-1) is an odd integer", 1, 200, 600),
        eval: t12_odd,
    },
    Case {
        info: info("T1.2-p", Congruence, Primes, "sum (8k^2+12k+5) g_k(-1) = 3p^2 mod p^3", 2, 60, 200),
        eval: t12_p,
    },
    Case {
        info: info("T1.3-odd", Parity, Integers, "(1/n) sum (6k+5)(-1)^k F_k is an odd integer", 1, 200, 600),
        eval: t13_odd,
    },
    Case {
        info: CaseInfo {
            sweeps_bc: true,
            ..info("T1.4-n", Divisibility, Integers, "sum (8ck+4c+b) T_k(b,c^2)^2 (b-2c)^(2(n-1-k)) = 0 mod n", 1, 80, 200)
        },
        eval: t14_n,
    },
    Case {
        info: CaseInfo {
            sweeps_bc: true,
            ..info(
                "T1.4-p",
                Congruence,
                Primes,
                "sum (8ck+4c+b) T_k(b,c^2)^2 / (b-2c)^(2k) = p(b+2c)((b^2-4c^2)/p) mod p^2",
                3,
                50,
                120,
            )
        },
        eval: t14_p,
    },
    Case {
        info: info("C1.5-n", Divisibility, Integers, "sum (8k+5) T_k^2 = 0 mod n", 1, 200, 600),
        eval: c15_n,
    },
    Case {
        info: info("C1.5-p", Congruence, Primes, "sum (8k+5) T_k^2 = 3p(p/3) mod p^2", 2, 60, 200),
        eval: c15_p,
    },
    Case {
        info: info(
            "T1.6-int",
            Characterization,
            Integers,
            "a_n = sum (3k^2+k) D_k 16^(n-1-k) / (2n^3(n-1)) is an integer, odd iff n is a power of two",
            2,
            300,
            600,
        ),
        eval: t16_int,
    },
    Case {
        info: info("T1.6-p", Congruence, Primes, "sum (3k^2+k) D_k / 16^k = -4p^4 q_p(2) mod p^5", 5, 50, 120),
        eval: t16_p,
    },
    Case {
        info: info(
            "T1.7i-n",
            Divisibility,
            Integers,
            "sum (12k^4+25k^3+21k^2+6k)(-1)^k f_k = 0 mod 4n^2(n-1)",
            2,
            120,
            400,
        ),
        eval: t17i_n,
    },
    Case {
        info: info("T1.7i-p", Congruence, Primes, "sum (12k^4+25k^3+21k^2+6k)(-1)^k f_k = -4p^3 mod p^4", 3, 60, 200),
        eval: t17i_p,
    },
    Case {
        info: info("T1.7ii-n", Divisibility, Integers, "sum (12k^3+34k^2+30k+9) g_k = 0 mod 3n^3", 1, 120, 400),
        eval: t17ii_n,
    },
    Case {
        info: info(
            "T1.7ii-p",
            Congruence,
            Primes,
            "sum (12k^3+34k^2+30k+9) g_k = 3p^3/2 (1 + 3(p/3)) mod p^4",
            3,
            60,
            200,
        ),
        eval: t17ii_p,
    },
    Case {
        info: info("T1.7iii-n", Divisibility, Integers, "sum (18k^5+...+1)(-1)^k A_k = 0 mod n^4", 1, 120, 400),
        eval: t17iii_n,
    },
    Case {
        info: info("T1.7iii-p", Congruence, Primes, "sum (18k^5+...+1)(-1)^k A_k = -2p^4 + 3p^5 mod p^7", 5, 40, 120),
        eval: t17iii_p,
    },
    Case {
        info: CaseInfo {
            conjecture: true,
            ..info(
                "CONJ-1.18",
                Congruence,
                Primes,
                "sum (18k^5+...+1)(-1)^k A_k = -2p^4 + 3p^5 + (6p-8)p^5 H_{p-1} - (12/5)p^9 B_{p-5} mod p^10",
                7,
                31,
                80,
            )
        },
        eval: conj_118,
    },
    Case {
        info: info("LEM-5.1", Characterization, Integers, "binom(2n-1, n) is odd iff n is a power of two", 1, 512, 4096),
        eval: lem51,
    },
    Case {
        info: info("LEM-6.2", Divisibility, Integers, "3 | n g_n", 0, 200, 1000),
        eval: lem62,
    },
    Case {
        info: info("GZ-1.9", Divisibility, Integers, "sum_{l<n} binom(n-1,l)^2 binom(-n-1,l)^2 = 0 mod n", 1, 120, 400),
        eval: gz19,
    },
    Case {
        info: info(
            "SUN-22",
            Divisibility,
            Integers,
            "sum_{l<n} (2l+1) binom(n-1,l)^2 binom(-n-1,l)^2 = 0 mod n^2",
            1,
            120,
            400,
        ),
        eval: sun22,
    },
];

/// Side conditions for the `(b, c)` sweeps.
pub(crate) fn bc_admissible(id: &str, index: u64, b: i64, c: i64) -> bool {
    match id {
        "T1.4-p" => {
            let p = index as i64;
            (b * (b - 2 * c)).rem_euclid(p) != 0
        }
        _ => true,
    }
}

static PROBLEMS: LazyLock<HashMap<&'static str, (Problem, Option<ClosedPair>)>> = LazyLock::new(|| {
    problems::sources()
        .iter()
        .map(|(name, _)| {
            let p = problems::load(name);
            let closed = p.boundary();
            (*name, (p, closed))
        })
        .collect()
});

/// `S_n = sum_{k<n} sum_l F(k, l)` for a bundled problem, via the
/// reduction when it applies. With `spot` set, the naive sum is computed as
/// well and any disagreement is an error.
pub(crate) fn problem_sum(name: &str, n: u64, bc: Option<(i64, i64)>, spot: bool) -> Result<Integer, String> {
    let (p, closed) = &PROBLEMS[name];
    let mut base = ParamValues::new();
    if let Some((b, c)) = bc {
        base.insert("b".into(), Rational::from_integer(b.into()));
        base.insert("c".into(), Rational::from_integer(c.into()));
    }
    let n = n as i64;
    let params = bind_params(p.context(), n, &base);
    let naive = || naive_sum(&p.f, n, &params).map_err(|e| format!("naive sum: {e}"));
    let value = match closed {
        Some(closed) => match reduce(&p.f, closed, n, &params) {
            Ok(v) => {
                if spot {
                    let check = naive()?;
                    if check != v {
                        return Err(format!("reduced sum {v} differs from naive sum {check}"));
                    }
                }
                v
            }
            Err(CertError::ReductionNeedsClosedForm { .. }) => naive()?,
            Err(e) => return Err(format!("reduction: {e}")),
        },
        None => naive()?,
    };
    if !value.is_integer() {
        return Err(format!("sum {value} is not an integer"));
    }
    Ok(value.to_integer())
}

fn pow(p: u64, e: u32) -> Integer {
    num_traits::pow(Integer::from(p), e as usize)
}

fn with_sum(name: &str, inst: &Instance, spot: bool, k: impl FnOnce(Integer) -> Outcome) -> Outcome {
    match problem_sum(name, inst.index, inst.bc, spot) {
        Ok(s) => k(s),
        Err(e) => Outcome::error(e),
    }
}

/// Rational right-hand sides reduced modulo `p^e`.
fn rat_congruence(lhs: &Rational, rhs: &Rational, p: u64, e: u32) -> Outcome {
    let m = match PrimePower::new(p, e) {
        Ok(m) => m,
        Err(err) => return Outcome::error(err.to_string()),
    };
    match (rational_mod(lhs, &m), rational_mod(rhs, &m)) {
        (Ok(a), Ok(b)) => Outcome::residues(a, b, m.modulus()),
        (Err(err), _) | (_, Err(err)) => Outcome::error(err.to_string()),
    }
}

/// `m | S` and the parity of `S / m`.
fn odd_quotient(s: &Integer, m: &Integer) -> Outcome {
    let (q, r) = s.div_mod_floor(m);
    if !r.is_zero() {
        return Outcome {
            note: Some(format!("{s} is not divisible by {m}")),
            ..Outcome::residues(r, Integer::zero(), m)
        };
    }
    Outcome::residues(mod_floor(&q, &Integer::from(2)), Integer::one(), &Integer::from(2))
}

fn legendre_of(a: &Integer, p: u64) -> Result<Integer, String> {
    legendre(a, &Integer::from(p)).map(Integer::from).map_err(|e| e.to_string())
}

fn t11_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::FRANEL_ALT_QUADRATIC, inst, spot, |s| {
        Outcome::divisibility(&s, &(pow(n, 2) * Integer::from(n - 1)))
    })
}

fn t11_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::FRANEL_ALT_QUADRATIC, inst, spot, |s| {
        let q = match fermat_quotient_2(&Integer::from(p)) {
            Ok(q) => q,
            Err(e) => return Outcome::error(e.to_string()),
        };
        let rhs = Integer::from(3) * pow(p, 2) * Integer::from(p - 1) - Integer::from(16) * pow(p, 3) * q;
        Outcome::congruence(&s, &rhs, &pow(p, 4))
    })
}

fn t12_odd(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::SUN_POLY_NEG1, inst, spot, |s| odd_quotient(&s, &pow(n, 2)))
}

fn t12_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::SUN_POLY_NEG1, inst, spot, |s| {
        Outcome::congruence(&s, &(Integer::from(3) * pow(p, 2)), &pow(p, 3))
    })
}

fn t13_odd(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::FRANEL_NEG8, inst, spot, |s| odd_quotient(&s, &Integer::from(n)))
}

fn t14_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::TRINOMIAL_SQ, inst, spot, |s| Outcome::divisibility(&s, &Integer::from(n)))
}

fn t14_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    let (b, c) = inst.bc.expect("swept case");
    with_sum(problems::TRINOMIAL_SQ, inst, spot, |s| {
        let d = Integer::from(b - 2 * c);
        let lhs = Rational::new(s, num_traits::pow(d, 2 * (p as usize - 1)));
        let chi = match legendre_of(&Integer::from(b * b - 4 * c * c), p) {
            Ok(x) => x,
            Err(e) => return Outcome::error(e),
        };
        let rhs = Integer::from(p) * Integer::from(b + 2 * c) * chi;
        rat_congruence(&lhs, &Rational::from_integer(rhs), p, 2)
    })
}

fn c15_inst(inst: &Instance) -> Instance {
    Instance { index: inst.index, bc: Some((1, 1)) }
}

fn c15_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::TRINOMIAL_SQ, &c15_inst(inst), spot, |s| Outcome::divisibility(&s, &Integer::from(n)))
}

fn c15_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::TRINOMIAL_SQ, &c15_inst(inst), spot, |s| {
        let chi = match legendre_of(&Integer::from(p), 3) {
            Ok(x) => x,
            Err(e) => return Outcome::error(e),
        };
        Outcome::congruence(&s, &(Integer::from(3 * p) * chi), &pow(p, 2))
    })
}

fn t16_int(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::DOMB_16, inst, spot, |s| {
        let m = Integer::from(2) * pow(n, 3) * Integer::from(n - 1);
        let (a, r) = s.div_mod_floor(&m);
        if !r.is_zero() {
            return Outcome { note: Some(format!("a_{n} is not an integer")), ..Outcome::residues(r, Integer::zero(), &m) };
        }
        // Both directions: the observed parity must equal the predicted one.
        let parity = mod_floor(&a, &Integer::from(2));
        let predicted = Integer::from(u8::from(is_power_of_two(n)));
        Outcome::residues(parity, predicted, &Integer::from(2))
    })
}

fn t16_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::DOMB_16, inst, spot, |s| {
        let lhs = Rational::new(s, pow(16, p as u32 - 1));
        let q = match fermat_quotient_2(&Integer::from(p)) {
            Ok(q) => q,
            Err(e) => return Outcome::error(e.to_string()),
        };
        let rhs = Integer::from(-4) * pow(p, 4) * q;
        rat_congruence(&lhs, &Rational::from_integer(rhs), p, 5)
    })
}

fn t17i_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::FRANEL_ALT_QUARTIC, inst, spot, |s| {
        Outcome::divisibility(&s, &(Integer::from(4) * pow(n, 2) * Integer::from(n - 1)))
    })
}

fn t17i_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::FRANEL_ALT_QUARTIC, inst, spot, |s| {
        Outcome::congruence(&s, &(Integer::from(-4) * pow(p, 3)), &pow(p, 4))
    })
}

fn t17ii_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::SUN_G_CUBIC, inst, spot, |s| Outcome::divisibility(&s, &(Integer::from(3) * pow(n, 3))))
}

fn t17ii_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::SUN_G_CUBIC, inst, spot, |s| {
        let chi = match legendre_of(&Integer::from(p), 3) {
            Ok(x) => x,
            Err(e) => return Outcome::error(e),
        };
        // p^3, not p^2: see the ledger.
        let rhs = Rational::new(Integer::from(3) * pow(p, 3) * (Integer::one() + Integer::from(3) * chi), 2.into());
        rat_congruence(&Rational::from_integer(s), &rhs, p, 4)
    })
}

fn t17iii_n(inst: &Instance, spot: bool) -> Outcome {
    let n = inst.index;
    with_sum(problems::APERY_ALT_QUINTIC, inst, spot, |s| Outcome::divisibility(&s, &pow(n, 4)))
}

fn t17iii_p(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::APERY_ALT_QUINTIC, inst, spot, |s| {
        let rhs = Integer::from(-2) * pow(p, 4) + Integer::from(3) * pow(p, 5);
        Outcome::congruence(&s, &rhs, &pow(p, 7))
    })
}

fn conj_118(inst: &Instance, spot: bool) -> Outcome {
    let p = inst.index;
    with_sum(problems::APERY_ALT_QUINTIC, inst, spot, |s| {
        let pr = |e: u32| Rational::from_integer(pow(p, e));
        let rhs = Rational::from_integer(Integer::from(-2) * pow(p, 4) + Integer::from(3) * pow(p, 5))
            + Rational::from_integer(Integer::from(6 * p as i64 - 8)) * pr(5) * harmonic(p - 1)
            - Rational::new(12.into(), 5.into()) * pr(9) * bernoulli(p as usize - 5);
        rat_congruence(&Rational::from_integer(s), &rhs, p, 10)
    })
}

fn lem51(inst: &Instance, _spot: bool) -> Outcome {
    let n = inst.index;
    let b = binomial(&Integer::from(2 * n - 1), n as i64);
    let parity = mod_floor(&b, &Integer::from(2));
    let predicted = Integer::from(u8::from(is_power_of_two(n)));
    Outcome::residues(parity, predicted, &Integer::from(2))
}

fn lem62(inst: &Instance, _spot: bool) -> Outcome {
    let n = inst.index;
    Outcome::divisibility(&(Integer::from(n) * seq::g(n)), &Integer::from(3))
}

/// `sum_{l<n} w(l) binom(n-1,l)^2 binom(-n-1,l)^2`.
fn gz_sum(n: u64, weight: impl Fn(u64) -> Integer) -> Integer {
    let top = Integer::from(n) - 1u32;
    let neg = -Integer::from(n) - 1u32;
    (0..n)
        .map(|l| {
            let a = binomial(&top, l as i64);
            let b = binomial(&neg, l as i64);
            weight(l) * &a * &a * &b * &b
        })
        .sum()
}

fn gz19(inst: &Instance, _spot: bool) -> Outcome {
    let n = inst.index;
    Outcome::divisibility(&gz_sum(n, |_| Integer::one()), &Integer::from(n))
}

fn sun22(inst: &Instance, _spot: bool) -> Outcome {
    let n = inst.index;
    Outcome::divisibility(&gz_sum(n, |l| Integer::from(2 * l + 1)), &pow(n, 2))
}
