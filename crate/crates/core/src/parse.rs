//! Polynomial literals: a small recursive-descent parser and a canonical
//! printer whose output parses back to the identical polynomial.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor (('*' | '/' number)? factor)*
//! factor := atom ('^' integer)?
//! atom   := number | 'i' | variable | '(' expr ')'
//! number := digits ('.' digits)? ('/' digits)?
//! ```
//!
//! Variables are a fixed prefix followed by a 1-based index, e.g. `r3`.
//! Adjacent factors multiply, so `3/2 i` and `2x1x2` are accepted.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{IasError, Result};
use crate::linalg::{Gaussian, Rational};
use crate::poly::{GPoly, QPoly};

pub fn parse_gpoly(text: &str, prefix: &str, nvars: usize) -> Result<GPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        prefix: prefix.as_bytes(),
        nvars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a real polynomial; imaginary coefficients are rejected.
pub fn parse_qpoly(text: &str, prefix: &str, nvars: usize) -> Result<QPoly> {
    let g = parse_gpoly(text, prefix, nvars)?;
    if !g.imag_part().is_zero() {
        return Err(IasError::Parse {
            pos: 0,
            msg: "imaginary coefficient in a real polynomial".into(),
        });
    }
    Ok(g.real_part())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    prefix: &'a [u8],
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> IasError {
        IasError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<GPoly> {
        let mut acc = GPoly::zero(self.nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'.')
    }

    fn term(&mut self) -> Result<GPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    let d = self.number()?;
                    if d.is_zero() {
                        self.pos = start;
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&Gaussian::new(d.recip(), Rational::zero()));
                }
                _ if self.starts_factor() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<GPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let q = self.number()?;
                Ok(GPoly::constant(self.nvars, Gaussian::new(q, Rational::zero())))
            }
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.err("expected a number, variable or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn identifier(&mut self) -> Result<GPoly> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let dstart = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.src[dstart..self.pos];
        if name == b"i" && digits.is_empty() {
            return Ok(GPoly::constant(
                self.nvars,
                Gaussian::new(Rational::zero(), Rational::one()),
            ));
        }
        if name != self.prefix || digits.is_empty() {
            self.pos = start;
            return Err(self.err(&format!(
                "unknown identifier '{}'; expected {}1..{}{}",
                String::from_utf8_lossy(&self.src[start..dstart + digits.len()]),
                String::from_utf8_lossy(self.prefix),
                String::from_utf8_lossy(self.prefix),
                self.nvars
            )));
        }
        let idx: usize = std::str::from_utf8(digits).unwrap().parse().unwrap_or(0);
        if idx == 0 || idx > self.nvars {
            self.pos = start;
            return Err(self.err(&format!(
                "variable index {idx} out of range 1..={}",
                self.nvars
            )));
        }
        Ok(GPoly::var(self.nvars, idx - 1))
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<u64> {
        let d = self.digits();
        if d.is_empty() {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(d).unwrap().to_string();
        s.parse().map_err(|_| self.err("integer too large"))
    }

    fn number(&mut self) -> Result<Rational> {
        let whole = self.digits().to_vec();
        let mut num = String::from_utf8(whole).unwrap();
        let mut den = BigInt::one();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits().to_vec();
            den = BigInt::from(10u32).pow(frac.len() as u32);
            num.push_str(std::str::from_utf8(&frac).unwrap());
        }
        if num.is_empty() {
            return Err(self.err("expected digits"));
        }
        let mut q = Rational::new(num.parse::<BigInt>().unwrap(), den);
        // a '/' directly after a literal binds as a fraction, `1/2x1` = x1/2
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits().to_vec();
            if d.is_empty() {
                self.pos = save;
                return Ok(q);
            }
            let d: BigInt = std::str::from_utf8(&d).unwrap().parse().unwrap();
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            q /= Rational::from_integer(d);
        } else {
            self.pos = save;
        }
        Ok(q)
    }
}

fn fmt_monomial(m: &[u32], prefix: &str) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{prefix}{}", v + 1)),
            _ => parts.push(format!("{prefix}{}^{e}", v + 1)),
        }
    }
    parts.join("*")
}

/// Canonical text: terms by descending total degree then exponent order.
pub fn format_gpoly(p: &GPoly, prefix: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        db.cmp(&da).then_with(|| b.0.cmp(a.0))
    });
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let mono = fmt_monomial(m, prefix);
        let (neg, coef) = fmt_gaussian(c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (coef.as_str(), mono.is_empty()) {
            ("1", true) => out.push('1'),
            ("1", false) => out.push_str(&mono),
            (c, true) => out.push_str(c),
            (c, false) => {
                out.push_str(c);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

pub fn format_qpoly(p: &QPoly, prefix: &str) -> String {
    format_gpoly(&p.to_gaussian(), prefix)
}

/// Returns (leading sign negative, magnitude text).
fn fmt_gaussian(c: &Gaussian) -> (bool, String) {
    let (re, im) = (&c.re, &c.im);
    if im.is_zero() {
        return (re.is_negative(), re.abs().to_string());
    }
    if re.is_zero() {
        let mag = im.abs();
        let s = if mag.is_one() { "i".to_string() } else { format!("{mag}*i") };
        return (im.is_negative(), s);
    }
    let sign = if im.is_negative() { "-" } else { "+" };
    let mag = im.abs();
    let ims = if mag.is_one() { "i".to_string() } else { format!("{mag}*i") };
    (false, format!("({re} {sign} {ims})"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn parses_fractions_powers_and_implicit_products() {
        let p = parse_qpoly("3/2 r1^2 r2 - r3 + 1", "r", 3).unwrap();
        let r = |i| QPoly::var(3, i);
        let expected = &(&(&r(0).pow(2) * &r(1)).scale(&rat(3, 2)) - &r(2)) + &QPoly::one(3);
        assert_eq!(p, expected);
    }

    #[test]
    fn parses_gaussian_coefficients() {
        let p = parse_gpoly("-z1^3 + z2^5 - i*z3^2 - 1/2 i z4^2", "z", 4).unwrap();
        assert_eq!(p.coeff(&[0, 0, 0, 2]), Gaussian::new(int(0), rat(-1, 2)));
        assert_eq!(p.coeff(&[3, 0, 0, 0]), Gaussian::new(int(-1), int(0)));
    }

    #[test]
    fn parses_parentheses_and_decimals() {
        let p = parse_qpoly("(u1 + 0.5)^2", "u", 1).unwrap();
        let u = QPoly::var(1, 0);
        let expected = &(&u.pow(2) + &u) + &QPoly::constant(1, rat(1, 4));
        assert_eq!(p, expected);
    }

    #[test]
    fn division_by_literal_after_factor() {
        let p = parse_qpoly("r1^2/3", "r", 1).unwrap();
        assert_eq!(p, QPoly::var(1, 0).pow(2).scale(&rat(1, 3)));
    }

    #[test]
    fn errors_carry_position() {
        match parse_qpoly("r1 + * r2", "r", 2) {
            Err(IasError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_qpoly("r1 + r9", "r", 2) {
            Err(IasError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_qpoly("i*r1", "r", 1).is_err());
        assert!(parse_qpoly("r1 )", "r", 1).is_err());
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "0",
            "1",
            "-r1",
            "-7/3*r1^2*r2 + r2 - 5",
            "(1 - 2/3*i)*z1*z2 + i*z2 - 4*i",
        ] {
            let prefix = if src.contains('z') { "z" } else { "r" };
            let p = parse_gpoly(src, prefix, 2).unwrap();
            let text = format_gpoly(&p, prefix);
            assert_eq!(parse_gpoly(&text, prefix, 2).unwrap(), p, "{text}");
        }
    }
}
