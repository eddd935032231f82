use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use super::lexer::{lex, Pos, Tok, Token};
use super::{ParseError, ParseErrorKind, ProblemSpec, KEYWORDS};
use crate::arith::{Integer, Rational};
use crate::poly::{PolyError, Polynomial, RationalFunction, VarContext, K, L};
use crate::term::{BinomialFactor, HyperTerm, LinForm, PowerFactor};

type PResult<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<Token>,
    at: usize,
    ctx: Arc<VarContext>,
}

/// Factors collected while reading a term.
struct TermAcc {
    prefactor: Polynomial,
    sign: LinForm,
    powers: Vec<PowerFactor>,
    binomials: Vec<BinomialFactor>,
}

enum Exponent {
    Literal(u32),
    Linear(LinForm),
}

pub(crate) fn parse(src: &str) -> PResult<ProblemSpec> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, ctx: VarContext::summation_only() };
    p.file()
}

pub(crate) fn parse_poly(src: &str, ctx: &Arc<VarContext>) -> PResult<Polynomial> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, ctx: ctx.clone() };
    let e = p.polyexpr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.syntax("end of input"));
    }
    Ok(e)
}

fn err(pos: Pos, kind: ParseErrorKind, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
    ParseError { line: pos.line, col: pos.col, expected: expected.into(), found: found.into(), kind }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, expected: &str) -> ParseError {
        err(self.pos(), ParseErrorKind::Syntax, expected, self.peek().to_string())
    }

    fn semantic(&self, pos: Pos, expected: &str, found: impl Into<String>) -> ParseError {
        err(pos, ParseErrorKind::Semantic, expected, found)
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == t {
            Ok(self.bump())
        } else {
            Err(self.syntax(what))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn file(&mut self) -> PResult<ProblemSpec> {
        let mut name = None;
        let mut params: Vec<String> = Vec::new();
        loop {
            match self.peek() {
                Tok::Ident(s) if s == "param" => {
                    self.bump();
                    loop {
                        let (p, pos) = self.ident("a parameter name")?;
                        if KEYWORDS.contains(&p.as_str()) || p == "k" || p == "l" {
                            return Err(self.semantic(pos, "a parameter name", format!("reserved word `{p}`")));
                        }
                        if params.contains(&p) {
                            return Err(self.semantic(pos, "a new parameter name", format!("duplicate `{p}`")));
                        }
                        params.push(p);
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.bump();
                    }
                }
                Tok::Ident(s) if s == "name" => {
                    let pos = self.bump().pos;
                    let (n, _) = self.ident("a problem name")?;
                    if name.is_some() {
                        return Err(self.semantic(pos, "a single name declaration", "second `name`"));
                    }
                    name = Some(n);
                }
                _ => break,
            }
        }
        self.ctx = VarContext::new(&params).map_err(|e| self.semantic(self.pos(), "valid parameters", e.to_string()))?;
        match self.peek() {
            Tok::Ident(s) if s == "F" => {}
            _ => return Err(self.syntax("`param`, `name` or `F`")),
        }
        self.bump();
        self.expect(Tok::Eq, "`=`")?;
        let f = self.term()?;
        let mut spec = ProblemSpec {
            name,
            params,
            ctx: self.ctx.clone(),
            f,
            r1: None,
            r2: None,
            g1: None,
            g2: None,
        };
        loop {
            let (key, pos) = match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) if ["R1", "R2", "G1", "G2"].contains(&s.as_str()) => {
                    let s = s.clone();
                    (s, self.bump().pos)
                }
                _ => return Err(self.syntax("`*`, `R1`, `R2`, `G1`, `G2` or end of input")),
            };
            self.expect(Tok::Eq, "`=`")?;
            let taken = match key.as_str() {
                "R1" => spec.r1.is_some(),
                "R2" => spec.r2.is_some(),
                "G1" => spec.g1.is_some(),
                _ => spec.g2.is_some(),
            };
            if taken {
                return Err(self.semantic(pos, &format!("a single `{key}` line"), format!("second `{key}`")));
            }
            match key.as_str() {
                "R1" => spec.r1 = Some(self.ratexpr()?),
                "R2" => spec.r2 = Some(self.ratexpr()?),
                "G1" => spec.g1 = Some(self.term()?),
                _ => spec.g2 = Some(self.term()?),
            }
        }
        let end = self.pos();
        if spec.r1.is_some() != spec.r2.is_some() {
            return Err(self.semantic(end, "both `R1` and `R2`", "only one of them"));
        }
        if spec.g1.is_some() != spec.g2.is_some() {
            return Err(self.semantic(end, "both `G1` and `G2`", "only one of them"));
        }
        Ok(spec)
    }

    // term := factor {"*" factor}
    fn term(&mut self) -> PResult<HyperTerm> {
        let mut acc = TermAcc {
            prefactor: Polynomial::one(&self.ctx),
            sign: LinForm::constant(&self.ctx, 0),
            powers: vec![],
            binomials: vec![],
        };
        self.factor(&mut acc)?;
        while *self.peek() == Tok::Star {
            self.bump();
            self.factor(&mut acc)?;
        }
        let pos = self.pos();
        HyperTerm::new(acc.prefactor, acc.sign, acc.powers, acc.binomials)
            .map_err(|e| self.semantic(pos, "a well-formed term", e.to_string()))
    }

    fn factor(&mut self, acc: &mut TermAcc) -> PResult<()> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                acc.prefactor = -&acc.prefactor;
                self.factor(acc)
            }
            Tok::Ident(s) if s == "binom" => self.binom_factor(acc),
            Tok::LParen => {
                self.bump();
                let base = self.ratexpr()?;
                self.expect(Tok::RParen, "`)`")?;
                self.finish_factor(acc, base, start, true)
            }
            Tok::Int(_) | Tok::Ident(_) => {
                let base = self.primary()?;
                self.finish_factor(acc, RationalFunction::from_poly(base), start, false)
            }
            _ => Err(self.syntax("a factor")),
        }
    }

    fn finish_factor(&mut self, acc: &mut TermAcc, base: RationalFunction, start: Pos, parens: bool) -> PResult<()> {
        if *self.peek() != Tok::Caret {
            if base.is_polynomial() {
                acc.prefactor = &acc.prefactor * base.numer();
                return Ok(());
            }
            return self.push_power(acc, base, LinForm::constant(&self.ctx, 1), start);
        }
        self.bump();
        let exp = self.exponent()?;
        if *self.peek() == Tok::Caret {
            return Err(self.syntax("no further `^` (parenthesize towers)"));
        }
        match exp {
            Exponent::Literal(e) if base.is_polynomial() => {
                acc.prefactor = &acc.prefactor * &base.numer().pow(e);
                Ok(())
            }
            Exponent::Literal(e) => self.push_power(acc, base, LinForm::constant(&self.ctx, e as i64), start),
            Exponent::Linear(e) => {
                let minus_one = Polynomial::from_int(&self.ctx, -1);
                if parens && base.is_polynomial() && *base.numer() == minus_one {
                    acc.sign = acc.sign.add(&e);
                    Ok(())
                } else {
                    self.push_power(acc, base, e, start)
                }
            }
        }
    }

    fn push_power(&self, acc: &mut TermAcc, base: RationalFunction, exponent: LinForm, pos: Pos) -> PResult<()> {
        if base.involves(K) || base.involves(L) {
            return Err(self.semantic(pos, "a power base free of k and l", format!("`{base}`")));
        }
        if base.is_zero() {
            return Err(self.semantic(pos, "a nonzero power base", "`0`"));
        }
        acc.powers.push(PowerFactor { base, exponent });
        Ok(())
    }

    // exponent := INT | "-" INT | ident | "(" polyexpr ")"
    fn exponent(&mut self) -> PResult<Exponent> {
        let pos = self.pos();
        let p = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let e = n
                    .to_u32()
                    .ok_or_else(|| self.semantic(pos, "an exponent below 2^32", n.to_string()))?;
                return Ok(Exponent::Literal(e));
            }
            Tok::Minus => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        Polynomial::constant(&self.ctx, Rational::from_integer(-n))
                    }
                    _ => return Err(self.syntax("an integer after `-` in an exponent")),
                }
            }
            Tok::Ident(_) => self.primary()?,
            Tok::LParen => {
                self.bump();
                let e = self.polyexpr()?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            _ => return Err(self.syntax("an exponent")),
        };
        self.linform_of(&p, pos).map(Exponent::Linear)
    }

    fn linform_of(&self, p: &Polynomial, pos: Pos) -> PResult<LinForm> {
        LinForm::from_polynomial(p)
            .ok_or_else(|| self.semantic(pos, "an integer-linear form", format!("`{p}`")))
    }

    fn linform(&mut self) -> PResult<LinForm> {
        let pos = self.pos();
        let p = self.polyexpr()?;
        self.linform_of(&p, pos)
    }

    // binomfac := "binom" "(" linform "," linform ")" ["^" mult]
    fn binom_factor(&mut self, acc: &mut TermAcc) -> PResult<()> {
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let upper = self.linform()?;
        self.expect(Tok::Comma, "`,`")?;
        let lower = self.linform()?;
        self.expect(Tok::RParen, "`)`")?;
        let mut multiplicity = 1i32;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            let parens = *self.peek() == Tok::LParen;
            if parens {
                self.bump();
            }
            let neg = *self.peek() == Tok::Minus;
            if neg {
                self.bump();
            }
            let Tok::Int(n) = self.peek().clone() else {
                return Err(self.syntax("an integer multiplicity"));
            };
            self.bump();
            if parens {
                self.expect(Tok::RParen, "`)`")?;
            }
            let m = n
                .to_i32()
                .ok_or_else(|| self.semantic(pos, "a small multiplicity", n.to_string()))?;
            multiplicity = if neg { -m } else { m };
            if multiplicity == 0 {
                return Err(self.semantic(pos, "a nonzero multiplicity", "`0`"));
            }
            if *self.peek() == Tok::Caret {
                return Err(self.syntax("no further `^` (parenthesize towers)"));
            }
        }
        acc.binomials.push(BinomialFactor { upper, lower, multiplicity });
        Ok(())
    }

    // ratexpr := polyexpr ["/" "(" polyexpr ")"]
    fn ratexpr(&mut self) -> PResult<RationalFunction> {
        let num = self.polyexpr()?;
        if *self.peek() == Tok::Slash && *self.peek2() == Tok::LParen {
            self.bump();
            self.bump();
            let pos = self.pos();
            let den = self.polyexpr()?;
            self.expect(Tok::RParen, "`)`")?;
            return RationalFunction::new(num, den).map_err(|e| match e {
                PolyError::ZeroDenominator => self.semantic(pos, "a nonzero denominator", "`0`"),
                e => self.semantic(pos, "a denominator", e.to_string()),
            });
        }
        Ok(RationalFunction::from_poly(num))
    }

    // polyexpr := mul {("+" | "-") mul}
    fn polyexpr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.mul()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.mul()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.mul()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // mul := unary {"*" unary | "/" INT}
    fn mul(&mut self) -> PResult<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match (self.peek().clone(), self.peek2().clone()) {
                (Tok::Star, _) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                (Tok::Slash, Tok::Int(d)) => {
                    self.bump();
                    let pos = self.pos();
                    self.bump();
                    if d.is_zero() {
                        return Err(self.semantic(pos, "a nonzero divisor", "`0`"));
                    }
                    acc = acc.scale(&Rational::new(Integer::one(), d));
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := "-" unary | power
    fn unary(&mut self) -> PResult<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    // power := primary ["^" INT]
    fn power(&mut self) -> PResult<Polynomial> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.syntax("a nonnegative integer exponent"));
        };
        self.bump();
        if *self.peek() == Tok::Caret {
            return Err(self.syntax("no further `^` (parenthesize towers)"));
        }
        let e = n
            .to_u32()
            .filter(|e| *e <= 4096)
            .ok_or_else(|| self.semantic(pos, "a small exponent", n.to_string()))?;
        Ok(base.pow(e))
    }

    // primary := INT | ident | "(" polyexpr ")"
    fn primary(&mut self) -> PResult<Polynomial> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Polynomial::constant(&self.ctx, Rational::from_integer(n)))
            }
            Tok::Ident(s) => {
                if KEYWORDS.contains(&s.as_str()) {
                    return Err(self.syntax("an expression"));
                }
                self.bump();
                Polynomial::named(&self.ctx, &s).ok_or_else(|| {
                    err(pos, ParseErrorKind::Undeclared, "k, l or a declared parameter", format!("`{s}`"))
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.polyexpr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.syntax("an expression")),
        }
    }
}
