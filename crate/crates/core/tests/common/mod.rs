//! Test-only oracles. Nothing here goes through the term, certificate or
//! sequence code of the crate: sums are taken straight from their
//! definitions with a separate binomial routine.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `binom(m, r)` for any integer `m`, zero for `r < 0`, by the falling
/// factorial.
pub fn c(m: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    if m >= 0 && r > m {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= m - i;
        den *= i + 1;
    }
    num / den
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn pw(b: i64, e: u64) -> BigInt {
    num_traits::pow(big(b), e as usize)
}

fn sign(k: i64) -> BigInt {
    if k % 2 == 0 { big(1) } else { big(-1) }
}

pub fn franel(k: i64) -> BigInt {
    (0..=k).map(|l| c(k, l).pow(3)).sum()
}

pub fn sun_f(k: i64) -> BigInt {
    (0..=k).map(|l| c(k, l).pow(3) * pw(-8, l as u64)).sum()
}

pub fn g_at(k: i64, x: i64) -> BigInt {
    (0..=k).map(|l| c(k, l).pow(2) * c(2 * l, l) * pw(x, l as u64)).sum()
}

pub fn domb(k: i64) -> BigInt {
    (0..=k).map(|l| c(k, l).pow(2) * c(2 * l, l) * c(2 * (k - l), k - l)).sum()
}

pub fn apery(k: i64) -> BigInt {
    (0..=k).map(|l| c(k, l).pow(2) * c(k + l, l).pow(2)).sum()
}

/// Coefficient of `x^n` in `(x^2 + b x + c)^n`, by repeated convolution.
pub fn trinomial(n: i64, b: i64, cc: i64) -> BigInt {
    let mut p = vec![BigInt::one()];
    for _ in 0..n {
        let mut q = vec![BigInt::zero(); p.len() + 2];
        for (i, a) in p.iter().enumerate() {
            q[i] += a * cc;
            q[i + 1] += a * b;
            q[i + 2] += a;
        }
        p = q;
    }
    p[n as usize].clone()
}

/// `sum_{k<n} w(k) s(k)`.
fn weighted(n: i64, w: impl Fn(i64) -> BigInt, s: impl Fn(i64) -> BigInt) -> BigInt {
    (0..n).map(|k| w(k) * s(k)).sum()
}

/// Direct value of the double sum behind each bundled problem. `bc` is only
/// read by the trinomial problem.
pub fn problem_sum(name: &str, n: i64, bc: (i64, i64)) -> BigInt {
    match name {
        "franel_alt_quadratic" => weighted(n, |k| big(9 * k * k + 5 * k) * sign(k), franel),
        "sun_poly_neg1" => weighted(n, |k| big(8 * k * k + 12 * k + 5), |k| g_at(k, -1)),
        "franel_neg8" => weighted(n, |k| big(6 * k + 5) * sign(k), sun_f),
        "trinomial_sq" => {
            let (b, cc) = bc;
            weighted(
                n,
                |k| big(8 * cc * k + 4 * cc + b) * pw(b - 2 * cc, (2 * (n - 1 - k)) as u64),
                |k| trinomial(k, b, cc * cc).pow(2),
            )
        }
        "domb_16" => weighted(n, |k| big(3 * k * k + k) * pw(16, (n - 1 - k) as u64), domb),
        "franel_alt_quartic" => weighted(
            n,
            |k| big(12 * k.pow(4) + 25 * k.pow(3) + 21 * k * k + 6 * k) * sign(k),
            franel,
        ),
        "sun_g_cubic" => weighted(n, |k| big(12 * k.pow(3) + 34 * k * k + 30 * k + 9), |k| g_at(k, 1)),
        "apery_alt_quintic" => weighted(
            n,
            |k| big(18 * k.pow(5) + 45 * k.pow(4) + 46 * k.pow(3) + 24 * k * k + 7 * k + 1) * sign(k),
            apery,
        ),
        other => panic!("no oracle for {other}"),
    }
}

/// `2 c^(2n-1) n^2 binom(2n-1, n)^2`, the sum at `b = -2c`.
pub fn minus_two_c_closed_form(n: i64, cc: i64) -> BigInt {
    big(2) * pw(cc, (2 * n - 1) as u64) * big(n * n) * c(2 * n - 1, n).pow(2)
}

/// Random well-formed problem files.
pub struct SpecGen {
    rng: ChaCha8Rng,
    params: Vec<&'static str>,
}

const PARAM_POOL: [&str; 4] = ["a", "b", "n", "x"];

impl SpecGen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), params: vec![] }
    }

    fn coef(&mut self) -> i64 {
        let v = self.rng.random_range(1..=9);
        if self.rng.random_bool(0.3) { -v } else { v }
    }

    /// Polynomial text in `vars` with distinct monomials, never zero.
    fn poly(&mut self, vars: &[&str], max_terms: usize) -> String {
        let mut seen = std::collections::BTreeSet::new();
        let mut parts = Vec::new();
        let terms = self.rng.random_range(1..=max_terms);
        for _ in 0..terms {
            let exps: Vec<u32> = vars.iter().map(|_| self.rng.random_range(0..=2)).collect();
            if !seen.insert(exps.clone()) {
                continue;
            }
            let mut s = self.coef().to_string();
            for (v, e) in vars.iter().zip(&exps) {
                match e {
                    0 => {}
                    1 => s.push_str(&format!("*{v}")),
                    e => s.push_str(&format!("*{v}^{e}")),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    fn all_vars(&self) -> Vec<&'static str> {
        let mut v = vec!["k", "l"];
        v.extend(self.params.iter().copied());
        v
    }

    /// Integer-linear form with at least one nonzero part.
    fn linform(&mut self, vars: &[&str]) -> String {
        let mut s = String::new();
        for v in vars {
            let c = self.rng.random_range(-2..=2);
            if c != 0 {
                s.push_str(&format!("{c:+}*{v}"));
            }
        }
        let c0 = self.rng.random_range(-3..=3);
        if c0 != 0 || s.is_empty() {
            s.push_str(&format!("{c0:+}"));
        }
        s.trim_start_matches('+').to_string()
    }

    fn term(&mut self) -> String {
        let vars = self.all_vars();
        let mut factors = vec![format!("({})", self.poly(&vars, 3))];
        if self.rng.random_bool(0.5) {
            factors.push(format!("(-1)^({})", self.linform(&["k", "l"])));
        }
        if self.rng.random_bool(0.4) {
            let base = if !self.params.is_empty() && self.rng.random_bool(0.5) {
                let p = self.params[self.rng.random_range(0..self.params.len())];
                format!("({p}+{})", self.rng.random_range(1..=4))
            } else {
                self.rng.random_range(2..=20).to_string()
            };
            factors.push(format!("({base})^({})", self.linform(&vars)));
        }
        for _ in 0..self.rng.random_range(1..=3) {
            let m = [1, 1, 2, 3, -1][self.rng.random_range(0..5)];
            let b = format!("binom({}, {})", self.linform(&vars), self.linform(&vars));
            factors.push(match m {
                1 => b,
                m if m < 0 => format!("{b}^({m})"),
                m => format!("{b}^{m}"),
            });
        }
        let body = factors.join(" * ");
        if self.rng.random_bool(0.2) { format!("-{body}") } else { body }
    }

    fn ratexpr(&mut self) -> String {
        let vars = self.all_vars();
        let num = self.poly(&vars, 3);
        if self.rng.random_bool(0.7) {
            format!("{num} / ({})", self.poly(&vars, 2))
        } else {
            num
        }
    }

    pub fn next_spec(&mut self) -> String {
        let count = self.rng.random_range(0..=PARAM_POOL.len());
        self.params = PARAM_POOL[..count].to_vec();
        let mut out = String::new();
        if self.rng.random_bool(0.5) {
            out.push_str(&format!("name gen{}\n", self.rng.random_range(0..1000)));
        }
        if !self.params.is_empty() {
            out.push_str(&format!("param {}\n", self.params.join(", ")));
        }
        out.push_str(&format!("F = {}\n", self.term()));
        if self.rng.random_bool(0.7) {
            out.push_str(&format!("R1 = {}\nR2 = {}\n", self.ratexpr(), self.ratexpr()));
        }
        if self.rng.random_bool(0.4) {
            out.push_str(&format!("G1 = {}\nG2 = {}\n", self.term(), self.term()));
        }
        out
    }
}
