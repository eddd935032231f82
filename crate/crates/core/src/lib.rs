//! Telescoping certificates for double sums of bivariate hypergeometric
//! terms, reduction of those double sums to single sums, and an exhaustive
//! exact-arithmetic checker for the congruences they imply.
pub mod arith;
pub mod cert;
pub mod congr;
pub mod dsl;
pub mod poly;
pub mod problems;
pub mod seq;
pub mod term;
