//! The `.tel` problem format.
//!
//! ```text
//! # comment
//! name franel_alt
//! param n
//! F  = (9*k^2+5*k) * (-1)^k * binom(k,l)^2 * binom(2*l,k)
//! R1 = (k-l)^2*(3*k+4*l-3) / ((9*k+5)*(l+1)*(-2*l+k-1))
//! R2 = (-2*l+k)*(3*k-l-2) / (k*(9*k+5))
//! G1 = ...
//! G2 = ...
//! ```
//!
//! A term is a `*`-product of factors:
//!
//! * `(poly)` or `(poly)^N` with a literal `N >= 0`: folded into the
//!   polynomial prefactor (bare numbers and identifiers work the same way);
//! * `(-1)^e`: sign factor;
//! * `(ratexpr)^e`, `number^e`, `param^e` with a non-literal exponent:
//!   power factor, base free of `k` and `l`;
//! * `binom(u, w)` with an optional integer multiplicity `^m`, `m != 0`.
//!
//! Exponents `e` are `-N`, an identifier, or a parenthesized integer-linear
//! form. Polynomial expressions allow `+ - * ^` and division by integer
//! literals; `/ (` starts the denominator of a rational expression.

mod lexer;
mod parser;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cert::{Certificate, ClosedPair, Problem};
use crate::poly::{Polynomial, RationalFunction, VarContext};
use crate::term::HyperTerm;

pub use lexer::Pos;

pub(crate) const KEYWORDS: &[&str] = &["F", "R1", "R2", "G1", "G2", "param", "name", "binom"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
    Undeclared,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind:?} error at line {line}, column {col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub params: Vec<String>,
    pub ctx: Arc<VarContext>,
    pub f: HyperTerm,
    pub r1: Option<RationalFunction>,
    pub r2: Option<RationalFunction>,
    pub g1: Option<HyperTerm>,
    pub g2: Option<HyperTerm>,
}

impl ProblemSpec {
    pub fn certificate(&self) -> Option<Certificate> {
        Some(Certificate { r1: self.r1.clone()?, r2: self.r2.clone()? })
    }

    pub fn closed_pair(&self) -> Option<ClosedPair> {
        Some(ClosedPair::closed(self.g1.clone()?, self.g2.clone()?))
    }

    pub fn to_problem(&self) -> Problem {
        Problem {
            name: self.name.clone().unwrap_or_else(|| "problem".into()),
            f: self.f.clone(),
            cert: self.certificate(),
            closed: self.closed_pair(),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, ParseError> {
    parser::parse(text)
}

/// A polynomial expression over the variables of `ctx`, e.g. a
/// denominator for the certificate search.
pub fn parse_polynomial(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial, ParseError> {
    parser::parse_poly(text, ctx)
}

/// Canonical text; `parse_problem(&print_problem(s)) == Ok(s)`.
pub fn print_problem(spec: &ProblemSpec) -> String {
    spec.to_string()
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name {name}")?;
        }
        if !self.params.is_empty() {
            writeln!(f, "param {}", self.params.join(", "))?;
        }
        writeln!(f, "F = {}", self.f)?;
        if let Some(r) = &self.r1 {
            writeln!(f, "R1 = {r}")?;
        }
        if let Some(r) = &self.r2 {
            writeln!(f, "R2 = {r}")?;
        }
        if let Some(g) = &self.g1 {
            writeln!(f, "G1 = {g}")?;
        }
        if let Some(g) = &self.g2 {
            writeln!(f, "G2 = {g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
