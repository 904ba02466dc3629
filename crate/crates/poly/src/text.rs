//! Text form: terms joined by `+`, each term `c*x<i>^<e>*...` with the
//! coefficient omitted when it is 1 and `^1` omitted. Parsing also accepts
//! `-` between terms and arbitrary whitespace.

use std::cmp::Reverse;
use std::fmt;

use crate::{FieldSpec, Monomial, PolyError, Polynomial, Result};

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", v + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    /// Highest degree first, graded order within a degree: `x1^3+1`, `x1^2+x1*x2+x2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(m, _)| Reverse(m.degree()));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (c, m.is_one()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{m}")?,
                (c, false) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

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

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| PolyError::Parse {
                pos: start,
                msg: "number too large".into(),
            })
    }
}

impl Polynomial {
    /// Parses the text form in `n_vars` variables over `field`.
    pub fn parse(text: &str, n_vars: usize, field: FieldSpec) -> Result<Polynomial> {
        let mut cur = Cursor {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut terms: Vec<(Monomial, i64)> = Vec::new();
        let mut negate = false;
        if cur.peek() == Some(b'-') {
            negate = true;
            cur.pos += 1;
        } else if cur.peek() == Some(b'+') {
            cur.pos += 1;
        }
        loop {
            let (m, c) = parse_term(&mut cur, n_vars, field)?;
            let c = if negate { field.neg(c) } else { c };
            terms.push((m, c as i64));
            match cur.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(ch) => return Err(cur.err(format!("unexpected `{}`", ch as char))),
            }
            cur.pos += 1;
        }
        Polynomial::from_terms(n_vars, field, terms)
    }
}

fn parse_term(cur: &mut Cursor<'_>, n_vars: usize, field: FieldSpec) -> Result<(Monomial, u32)> {
    let mut coeff = 1u32;
    let mut pairs: Vec<(usize, u32)> = Vec::new();
    loop {
        match cur.peek() {
            Some(b'x') => {
                cur.pos += 1;
                let start = cur.pos;
                let idx = cur.number()?;
                if idx == 0 || idx as usize > n_vars {
                    return Err(PolyError::Parse {
                        pos: start,
                        msg: format!("variable x{idx} outside x1..x{n_vars}"),
                    });
                }
                let mut exp = 1u64;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    exp = cur.number()?;
                    if exp > u32::MAX as u64 {
                        return Err(cur.err("exponent too large"));
                    }
                }
                pairs.push((idx as usize - 1, exp as u32));
            }
            Some(ch) if ch.is_ascii_digit() => {
                let n = cur.number()?;
                coeff = field.mul(coeff, (n % field.p() as u64) as u32);
            }
            _ => return Err(cur.err("expected a coefficient or variable")),
        }
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok((Monomial::from_pairs(pairs), coeff))
}
