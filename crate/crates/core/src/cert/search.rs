//! Bounded-degree ansatz for certificates with prescribed denominators.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::{verify_symbolic, CertError, Certificate, ClearedIdentity};
use crate::arith::{Integer, Rational};
use crate::poly::{Monomial, Polynomial, RationalFunction};
use crate::term::HyperTerm;

pub const MAX_ANSATZ_DEGREE: u32 = 6;

/// All exponent vectors over `nvars` variables with total degree `<= deg`,
/// in graded order.
fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out.sort();
    out
}

/// Solves `A x = b` exactly. Free variables are set to zero; `None` when
/// the system is inconsistent.
///
/// Rows are scaled to integers and reduced fraction-free (each row divided
/// by the gcd of its entries after every update), which keeps entries far
/// smaller than naive rational elimination on these sparse systems.
pub fn solve_linear_system(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    // Augmented integer rows: coefficients then right-hand side.
    let mut rows: Vec<Vec<Integer>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            let lcm = row.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
            let mut out: Vec<Integer> = row.iter().map(|x| (x * &lcm).to_integer()).collect();
            normalize(&mut out);
            out
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // Smallest nonzero pivot keeps growth down.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].bits())
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pv = &pivot_row[c];
        for row in rows[r + 1..].iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[c]);
            let mp = pv / &g;
            let mr = &row[c] / &g;
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = &*x * &mp - y * &mr;
            }
            normalize(row);
        }
        rows.retain(|row| row.iter().any(|x| !x.is_zero()));
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // Any remaining row is 0 = nonzero.
    if rows.len() > r {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate().rev() {
        let row = &rows[i];
        let mut acc = Rational::from_integer(row[cols].clone());
        for j in c + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(row[c].clone());
    }
    Some(x)
}

fn normalize(row: &mut [Integer]) {
    let g = row.iter().fold(Integer::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Searches for `R_i = N_i / d_i` with `deg N_i <= deg` over every variable
/// of the context. Returns the solution with all free coefficients zero.
pub fn find_certificate(
    f: &HyperTerm,
    d1: &Polynomial,
    d2: &Polynomial,
    deg: u32,
) -> Result<Certificate, CertError> {
    if deg > MAX_ANSATZ_DEGREE {
        return Err(CertError::InvalidArgument(format!(
            "ansatz degree {deg} exceeds the bound {MAX_ANSATZ_DEGREE}"
        )));
    }
    if d1.is_zero() || d2.is_zero() {
        return Err(CertError::InvalidArgument("denominators must be nonzero".into()));
    }
    let ctx = f.context();
    if d1.context() != ctx || d2.context() != ctx {
        return Err(crate::poly::PolyError::ContextMismatch.into());
    }
    let id = ClearedIdentity::new(f, d1, d2)?;
    let basis = monomials_up_to(ctx.len(), deg);
    let zero = Polynomial::zero(ctx);
    let mut columns = Vec::with_capacity(2 * basis.len());
    for m in &basis {
        let a = Polynomial::from_terms(ctx, [(m.clone(), Rational::one())]);
        columns.push(id.residual(&a, &zero)?.checked_add(&id.rhs)?);
    }
    for m in &basis {
        let c = Polynomial::from_terms(ctx, [(m.clone(), Rational::one())]);
        columns.push(id.residual(&zero, &c)?.checked_add(&id.rhs)?);
    }
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in columns.iter().chain(std::iter::once(&id.rhs)) {
        for (m, _) in p.terms() {
            let next = row_of.len();
            row_of.entry(m.clone()).or_insert(next);
        }
    }
    let mut a = vec![vec![Rational::zero(); columns.len()]; row_of.len()];
    for (j, p) in columns.iter().enumerate() {
        for (m, c) in p.terms() {
            a[row_of[m]][j] = c.clone();
        }
    }
    let mut b = vec![Rational::zero(); row_of.len()];
    for (m, c) in id.rhs.terms() {
        b[row_of[m]] = c.clone();
    }
    let x = solve_linear_system(a, b).ok_or(CertError::NotFound)?;
    let (x1, x2) = x.split_at(basis.len());
    let n1 = Polynomial::from_terms(ctx, basis.iter().cloned().zip(x1.iter().cloned()));
    let n2 = Polynomial::from_terms(ctx, basis.iter().cloned().zip(x2.iter().cloned()));
    let cert = Certificate {
        r1: RationalFunction::new(n1, d1.clone())?,
        r2: RationalFunction::new(n2, d2.clone())?,
    };
    if !verify_symbolic(f, &cert).symbolic_pass {
        return Err(CertError::NotFound);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(2, 0).len(), 1);
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        assert_eq!(solve_linear_system(a, vec![int(3), int(1)]), Some(vec![int(2), int(1)]));
    }

    #[test]
    fn free_variables_are_zero() {
        // x + 2y + z = 4 in three unknowns
        let a = vec![vec![int(1), int(2), int(1)]];
        assert_eq!(solve_linear_system(a, vec![int(4)]), Some(vec![int(4), int(0), int(0)]));
        let a = vec![vec![int(0), int(2), int(1)], vec![int(0), int(4), int(2)]];
        assert_eq!(
            solve_linear_system(a, vec![int(1), int(2)]),
            Some(vec![int(0), rat(1, 2), int(0)])
        );
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve_linear_system(a, vec![int(1), int(3)]), None);
    }
}
