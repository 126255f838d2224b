//! Text grammar for polynomials.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! term   := coeff [ ['*'] factor (['*'] factor)* ] | factor (['*'] factor)*
//! coeff  := digits ['/' digits]
//! factor := (ident | '(' poly ')') ['^' digits]
//! ident  := [A-Za-z_][A-Za-z0-9_]* '\''*
//! ```
//!
//! Whitespace is insignificant except as a separator between factors.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return None,
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    /// Consumes an exponent token. Digits end the token unless a `.` or `/`
    /// follows, so `x^2y` reads as `x^2 * y` while `x^1.5` stays one token.
    fn raw_token(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let at = |p: usize| self.src.get(p).copied();
        let mut p = self.pos;
        if at(p) == Some(b'-') {
            p += 1;
        }
        let word = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
        let digits_start = p;
        while at(p).is_some_and(|c| c.is_ascii_digit()) {
            p += 1;
        }
        let stop_after_digits = p > digits_start && !matches!(at(p), Some(b'.') | Some(b'/'));
        if !stop_after_digits {
            while at(p).is_some_and(|c| word(c) || c == b'.' || c == b'/') {
                p += 1;
            }
        }
        self.pos = p;
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text.strip_prefix('+').unwrap_or(text).trim()),
    };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    let bad = || Error::syntax(0, format!("`{text}` is not a rational number"));
    if n.is_empty()
        || d.is_empty()
        || !n.bytes().all(|c| c.is_ascii_digit())
        || !d.bytes().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::syntax(0, "zero denominator"));
    }
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

impl Polynomial {
    pub fn parse(text: &str, ring: &Ring) -> Result<Polynomial> {
        if let Some(bad) = text.bytes().position(|b| !b.is_ascii()) {
            return Err(Error::syntax(bad, "non-ASCII character"));
        }
        let mut cur = Cursor {
            src: text.as_bytes(),
            pos: 0,
        };
        let p = parse_expr(&mut cur, ring)?;
        match cur.peek() {
            None => Ok(p),
            Some(b')') => Err(Error::syntax(cur.pos, "unbalanced `)`")),
            Some(_) => Err(Error::syntax(cur.pos, "expected `+` or `-`")),
        }
    }
}

fn parse_expr(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(ring);
    let mut first = true;
    loop {
        let negate = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') || first {
            false
        } else {
            break;
        };
        first = false;
        let t = parse_term(cur, ring)?;
        acc = if negate { &acc - &t } else { &acc + &t };
        if matches!(cur.peek(), None | Some(b')')) {
            break;
        }
    }
    Ok(acc)
}

fn parse_exponent(cur: &mut Cursor<'_>) -> Result<u64> {
    if !cur.eat(b'^') {
        return Ok(1);
    }
    let tok = cur.raw_token();
    if tok.is_empty() {
        return Err(Error::syntax(cur.pos, "expected exponent after `^`"));
    }
    match tok.parse::<u64>() {
        Ok(v) if tok.bytes().all(|c| c.is_ascii_digit()) => Ok(v),
        _ => Err(Error::NonIntegerExponent(tok.to_string())),
    }
}

fn parse_term(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    let start = cur.pos;
    let mut coeff = Rational::one();
    let mut have_any = false;
    if let Some(n) = cur.digits() {
        let mut text = n.to_string();
        if cur.eat(b'/') {
            let d = cur
                .digits()
                .ok_or_else(|| Error::syntax(cur.pos, "expected denominator"))?;
            text = format!("{n}/{d}");
        }
        if cur.peek() == Some(b'.') {
            return Err(Error::syntax(
                cur.pos,
                "decimal coefficients are not supported",
            ));
        }
        coeff = parse_rational(&text)?;
        have_any = true;
    }
    let cap = ring.exponent_cap();
    let mut exps = vec![0u64; ring.arity()];
    let mut groups: Vec<Polynomial> = Vec::new();
    loop {
        let had_star = cur.eat(b'*');
        if cur.eat(b'(') {
            let inner = parse_expr(cur, ring)?;
            if !cur.eat(b')') {
                return Err(Error::syntax(cur.pos, "expected `)`"));
            }
            let e = parse_exponent(cur)?;
            if e > cap as u64 {
                return Err(Error::ExponentCap { exponent: e, cap });
            }
            groups.push(inner.pow(e as u32)?);
            have_any = true;
            continue;
        }
        let save = cur.pos;
        let Some(name) = cur.ident() else {
            if had_star {
                return Err(Error::syntax(cur.pos, "expected factor after `*`"));
            }
            cur.pos = save;
            break;
        };
        let idx = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        exps[idx] += parse_exponent(cur)?;
        have_any = true;
    }
    if !have_any {
        return Err(Error::syntax(start, "expected a term"));
    }
    if let Some(&e) = exps.iter().find(|&&e| e > cap as u64) {
        return Err(Error::ExponentCap { exponent: e, cap });
    }
    let m = Monomial::new(exps.into_iter().map(|e| e as u32).collect());
    let mut acc = Polynomial::monomial(ring, m, coeff);
    for g in &groups {
        acc = acc.checked_mul(g)?;
    }
    Ok(acc)
}
