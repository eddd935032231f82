use super::*;
use crate::arith::int;
use crate::problems;
use crate::term::{eval_term, EvalPoint, ParamValues};

const FRANEL_F: &str = "F = (9*k^2+5*k) * (-1)^k * binom(k,l)^2 * binom(2*l,k)";

#[test]
fn parses_summand() {
    let spec = parse_problem(FRANEL_F).unwrap();
    assert_eq!(spec.f.binomials().len(), 2);
    assert_eq!(spec.f.binomials()[0].multiplicity, 2);
    assert_eq!(spec.f.prefactor().to_string(), "9*k^2 + 5*k");
    let pt = EvalPoint::new(&spec.ctx, 1, 1, &ParamValues::new()).unwrap();
    assert_eq!(eval_term(&spec.f, &pt), Ok(int(-28)));
}

#[test]
fn parses_certificate_line() {
    let spec = parse_problem(&format!("{FRANEL_F}\nR1 = 1\nR2 = (-2*l+k)*(3*k-l-2) / (k*(9*k+5))")).unwrap();
    let r2 = spec.r2.unwrap();
    assert_eq!(r2.to_string(), "(3*k^2 - 7*k*l + 2*l^2 - 2*k + 4*l) / (9*k^2 + 5*k)");
}

#[test]
fn unterminated_binomial() {
    let e = parse_problem("F = binom(k,l").unwrap_err();
    assert_eq!((e.line, e.col), (1, 14));
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert_eq!(e.found, "end of input");
}

#[test]
fn semantic_errors_carry_positions() {
    let e = parse_problem("F = binom(k*l, 1)").unwrap_err();
    assert_eq!((e.line, e.col, e.kind), (1, 11, ParseErrorKind::Semantic));
    let e = parse_problem("F = (k)^l").unwrap_err();
    assert_eq!((e.col, e.kind), (5, ParseErrorKind::Semantic));
    let e = parse_problem("F = binom(k,l)^0").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Semantic);
    let e = parse_problem("param b\nF = b *\n  x").unwrap_err();
    assert_eq!((e.line, e.col, e.kind), (3, 3, ParseErrorKind::Undeclared));
    let e = parse_problem("param k\nF = 1").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Semantic);
    let e = parse_problem("F = 1\nR1 = 1").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Semantic);
    let e = parse_problem("F = k^2^3").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Syntax);
}

#[test]
fn comments_and_whitespace() {
    let a = parse_problem("# header\nF=(9*k^2+5*k)*(-1)^k*binom(k,l)^2*binom(2*l,k) # tail").unwrap();
    let b = parse_problem(FRANEL_F).unwrap();
    assert_eq!(a, b);
}

#[test]
fn canonical_ordering() {
    let spec = parse_problem("F = (l*k)").unwrap();
    assert_eq!(print_problem(&spec), "F = (k*l)\n");
}

#[test]
fn factor_kinds() {
    let spec = parse_problem("param b, c\nF = -2 * (b^2-4*c^2)^(k-l) * 16^l * (-1)^(k+1) * (c)^2 * binom(l+1,1)^-1").unwrap();
    let f = &spec.f;
    assert_eq!(f.powers().len(), 2);
    assert_eq!(f.sign_exponent().to_string(), "k + 1");
    assert_eq!(f.prefactor().to_string(), "-2*c^2");
    assert_eq!(f.binomials()[0].multiplicity, -1);
    let bad = parse_problem("F = (k+1)^(l)").unwrap_err();
    assert_eq!(bad.kind, ParseErrorKind::Semantic);
}

#[test]
fn bundled_files_round_trip() {
    for (name, src) in problems::sources() {
        let spec = parse_problem(src).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(spec.name.as_deref(), Some(*name));
        let printed = print_problem(&spec);
        assert_eq!(parse_problem(&printed).as_ref(), Ok(&spec), "{printed}");
    }
}
