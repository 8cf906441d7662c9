//! Parser for the text forms printed by this crate.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] int | '^' '(' ['-'] int ')']
//! atom   := int | name | '(' expr ')'
//! ```
//!
//! The name `q` denotes the generator of the coefficient ring unless the
//! registry has a variable of that name. Division is accepted by integers,
//! unit monomials, and products of binomial powers (which become denominators).

use super::laurent::{mono_scale, LaurentPoly, VarRegistry};
use super::ratfunc::FactoredRatFunc;
use crate::cyclotomic::{CycElem, CycRing};
use crate::error::{Error, Result};
use num::BigInt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[st..i].iter().collect();
                out.push(Tok::Int(txt.parse().map_err(|_| Error::Parse(format!("bad integer {txt}")))?));
            }
            a if a.is_alphabetic() || a == '_' => {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Name(cs[st..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Parsed value: a rational function, plus its factorization when it is a
/// product of powers of parenthesized polynomials.
#[derive(Clone)]
struct Val {
    f: FactoredRatFunc,
    factors: Option<Vec<(LaurentPoly, u32)>>,
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    reg: &'a Arc<VarRegistry>,
    ring: &'a CycRing,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.bump() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn poly(&self, p: LaurentPoly) -> Val {
        Val { f: FactoredRatFunc::from_poly(p), factors: None }
    }

    fn expr(&mut self) -> Result<Val> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = Val { f: acc.f.neg(), factors: None };
        }
        let mut single = !neg;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = Val { f: acc.f.add(&t.f), factors: None };
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = Val { f: acc.f.sub(&t.f), factors: None };
                }
                _ => break,
            }
            single = false;
        }
        if !single {
            acc.factors = None;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    let factors = match (acc.factors.take(), f.factors) {
                        (Some(mut a), Some(b)) => {
                            a.extend(b);
                            Some(a)
                        }
                        _ => None,
                    };
                    acc = Val { f: acc.f.mul(&f.f), factors };
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.factor()?;
                    acc = Val { f: self.divide(&acc.f, &d)?, factors: None };
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn divide(&self, a: &FactoredRatFunc, d: &Val) -> Result<FactoredRatFunc> {
        if let Ok(inv) = d.f.inv() {
            return Ok(a.mul(&inv));
        }
        let factors = d
            .factors
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("cannot divide by {}", d.f)))?;
        let mut out = a.clone();
        for (p, e) in factors {
            let inv = binomial_inverse(p)?;
            for _ in 0..*e {
                out = out.mul(&inv);
            }
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Val> {
        let (base, paren) = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let mut neg = false;
            let mut close = false;
            if self.peek() == Some(&Tok::LParen) {
                self.bump();
                close = true;
            }
            if self.peek() == Some(&Tok::Minus) {
                self.bump();
                neg = true;
            }
            let e = match self.bump() {
                Some(Tok::Int(v)) => {
                    i32::try_from(v).map_err(|_| Error::Parse("exponent out of range".into()))?
                }
                other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            };
            if close {
                self.expect(Tok::RParen)?;
            }
            let e = if neg { -e } else { e };
            return self.power(base, paren, e);
        }
        Ok(base)
    }

    fn power(&self, base: Val, paren: bool, e: i32) -> Result<Val> {
        if e >= 0 {
            let mut f = FactoredRatFunc::one(self.reg, self.ring);
            for _ in 0..e {
                f = f.mul(&base.f);
            }
            let factors = if paren {
                base.f.as_poly().map(|p| vec![(p.clone(), e as u32)])
            } else {
                None
            };
            return Ok(Val { f, factors });
        }
        let inv = match base.f.inv() {
            Ok(i) => i,
            Err(_) => {
                let p = base.f.as_poly().ok_or_else(|| Error::Parse("negative power of a fraction".into()))?;
                binomial_inverse(p)?
            }
        };
        let mut f = FactoredRatFunc::one(self.reg, self.ring);
        for _ in 0..(-e) {
            f = f.mul(&inv);
        }
        Ok(Val { f, factors: None })
    }

    fn atom(&mut self) -> Result<(Val, bool)> {
        match self.bump() {
            Some(Tok::Int(v)) => {
                let r = num::BigRational::from_integer(v);
                Ok((self.poly(LaurentPoly::constant(self.reg, self.ring.from_rational(r))), false))
            }
            Some(Tok::Name(n)) => {
                if let Some(i) = self.reg.index(&n) {
                    return Ok((self.poly(LaurentPoly::var_idx(self.reg, self.ring, i, 1)), false));
                }
                if n == "q" {
                    return Ok((self.poly(LaurentPoly::q_pow(self.reg, self.ring, 1)), false));
                }
                Err(Error::Parse(format!("unknown symbol '{n}'")))
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                let factors = match v.factors {
                    Some(f) => Some(f),
                    None => v.f.as_poly().map(|p| vec![(p.clone(), 1)]),
                };
                Ok((Val { f: v.f, factors }, true))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// `1 / p` for a two-term polynomial `u x^a + v x^b` with unit coefficients.
pub fn binomial_inverse(p: &LaurentPoly) -> Result<FactoredRatFunc> {
    let terms: Vec<_> = p.terms().iter().collect();
    if terms.len() != 2 {
        return Err(Error::Parse(format!("cannot divide by {p}")));
    }
    let (ma, ca) = terms[0];
    let (mb, cb) = terms[1];
    let cai = ca.unit_inverse().ok_or_else(|| Error::Parse(format!("cannot divide by {p}")))?;
    // p = c_a x^{m_a} (1 - (-c_b/c_a) x^{m_b - m_a})
    let c = cb.mul(&cai).neg();
    let m: Vec<i32> = mb.iter().zip(ma.iter()).map(|(x, y)| x - y).collect();
    let reg = p.registry();
    let one = LaurentPoly::term(reg, cai, mono_scale(ma, -1));
    FactoredRatFunc::with_denominator(one, &[(c, m)])
}

fn run(s: &str, reg: &Arc<VarRegistry>, ring: &CycRing) -> Result<FactoredRatFunc> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, reg, ring };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v.f)
}

/// Parse a rational function with binomial denominators.
pub fn parse_ratfunc(s: &str, reg: &Arc<VarRegistry>, ring: &CycRing) -> Result<FactoredRatFunc> {
    run(s, reg, ring)
}

/// Parse a Laurent polynomial.
pub fn parse_laurent(s: &str, reg: &Arc<VarRegistry>, ring: &CycRing) -> Result<LaurentPoly> {
    let f = run(s, reg, ring)?.cancel();
    f.as_poly().cloned().ok_or_else(|| Error::Parse(format!("'{s}' is not a Laurent polynomial")))
}

/// Parse an element of the coefficient ring (only the symbol `q`).
pub fn parse_cyc(s: &str, ring: &CycRing) -> Result<CycElem> {
    let reg = VarRegistry::new::<&str>(&[]);
    let p = parse_laurent(s, &reg, ring)?;
    Ok(p.constant_term())
}
