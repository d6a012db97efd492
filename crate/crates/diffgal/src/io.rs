//! Text file formats for operators and series, and the polynomial /
//! rational-function expression parser used by both the file formats and the
//! golden-data double-entry checks.
//!
//! Formats are line-based ASCII with explicit headers. Coefficients are kept
//! as exact decimal strings; there is no binary format.

use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, PrimeField, Rationals};
use crate::ore::DiffOp;
use crate::poly::{Poly, PolyOps};
use crate::ratfn::RatFn;
use crate::series::LogSeries;
use num_rational::BigRational;
use num_traits::Zero;

// ---------------------------------------------------------------------------
// expression parser
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn peek(&mut self) -> Result<Tok> {
        let save = self.pos;
        let t = self.next_tok()?;
        self.pos = save;
        Ok(t)
    }

    fn next_tok(&mut self) -> Result<Tok> {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.s.len() {
            return Ok(Tok::End);
        }
        let c = self.s[self.pos] as char;
        self.pos += 1;
        Ok(match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' => Tok::Var,
            d if d.is_ascii_digit() => {
                let start = self.pos - 1;
                while self.pos < self.s.len() && (self.s[self.pos] as char).is_ascii_digit() {
                    self.pos += 1;
                }
                Tok::Num(String::from_utf8_lossy(&self.s[start..self.pos]).to_string())
            }
            other => return Err(Error::Parse(format!("unexpected character '{}'", other))),
        })
    }
}

/// Parse a rational-function expression in `x` with integer literals and the
/// operators `+ - * / ^` and parentheses.
pub fn parse_ratfn<F: Field + PolyOps>(field: &F, input: &str) -> Result<RatFn<F>> {
    let mut lx = Lexer::new(input);
    let v = parse_expr(field, &mut lx)?;
    match lx.next_tok()? {
        Tok::End => Ok(v),
        t => Err(Error::Parse(format!("trailing input at {:?}", t))),
    }
}

/// Parse a polynomial expression; errors when the result has a denominator.
pub fn parse_poly<F: Field + PolyOps>(field: &F, input: &str) -> Result<Poly<F>> {
    let r = parse_ratfn(field, input)?;
    if !r.is_polynomial() {
        return Err(Error::Parse("expected a polynomial, found a denominator".into()));
    }
    if r.is_zero() {
        return Ok(Poly::zero());
    }
    let inv = field.inv(&r.den.coeffs[0]).unwrap();
    Ok(r.num.mul_scalar(field, &inv))
}

fn parse_expr<F: Field + PolyOps>(field: &F, lx: &mut Lexer) -> Result<RatFn<F>> {
    let mut acc = parse_term(field, lx)?;
    loop {
        match lx.peek()? {
            Tok::Plus => {
                lx.next_tok()?;
                let t = parse_term(field, lx)?;
                acc = acc.add(field, &t);
            }
            Tok::Minus => {
                lx.next_tok()?;
                let t = parse_term(field, lx)?;
                acc = acc.sub(field, &t);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_term<F: Field + PolyOps>(field: &F, lx: &mut Lexer) -> Result<RatFn<F>> {
    let mut acc = parse_factor(field, lx)?;
    loop {
        match lx.peek()? {
            Tok::Star => {
                lx.next_tok()?;
                let t = parse_factor(field, lx)?;
                acc = acc.mul(field, &t);
            }
            Tok::Slash => {
                lx.next_tok()?;
                let t = parse_factor(field, lx)?;
                acc = acc
                    .div(field, &t)
                    .ok_or_else(|| Error::Parse("division by zero".into()))?;
            }
            // implicit multiplication: `3x`, `x(1+x)`, `2(...)`
            Tok::Var | Tok::LParen | Tok::Num(_) => {
                let t = parse_factor(field, lx)?;
                acc = acc.mul(field, &t);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_factor<F: Field + PolyOps>(field: &F, lx: &mut Lexer) -> Result<RatFn<F>> {
    let base = parse_base(field, lx)?;
    if lx.peek()? == Tok::Caret {
        lx.next_tok()?;
        let e = match lx.next_tok()? {
            Tok::Num(n) => n
                .parse::<usize>()
                .map_err(|_| Error::Parse("bad exponent".into()))?,
            t => return Err(Error::Parse(format!("expected exponent, found {:?}", t))),
        };
        return base
            .pow_i64(field, e as i64)
            .ok_or_else(|| Error::Parse("bad power".into()));
    }
    Ok(base)
}

fn parse_base<F: Field + PolyOps>(field: &F, lx: &mut Lexer) -> Result<RatFn<F>> {
    match lx.next_tok()? {
        Tok::Num(n) => {
            let e = field
                .parse_elem(&n)
                .ok_or_else(|| Error::Parse(format!("bad number {}", n)))?;
            Ok(RatFn::constant(field, e))
        }
        Tok::Var => Ok(RatFn::x(field)),
        Tok::Minus => {
            let v = parse_factor(field, lx)?;
            Ok(v.neg(field))
        }
        Tok::LParen => {
            let v = parse_expr(field, lx)?;
            match lx.next_tok()? {
                Tok::RParen => Ok(v),
                t => Err(Error::Parse(format!("expected ')', found {:?}", t))),
            }
        }
        t => Err(Error::Parse(format!("unexpected token {:?}", t))),
    }
}

// ---------------------------------------------------------------------------
// field context helpers
// ---------------------------------------------------------------------------

pub fn parse_field_line(rest: &str) -> Result<FieldCtx> {
    let rest = rest.trim();
    if rest == "rational" {
        return Ok(FieldCtx::Rationals);
    }
    if let Some(p) = rest.strip_prefix("prime") {
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse("bad prime modulus".into()))?;
        return Ok(FieldCtx::PrimeField { modulus: p });
    }
    Err(Error::Parse(format!("unknown field '{}'", rest)))
}

// ---------------------------------------------------------------------------
// operator files
// ---------------------------------------------------------------------------

pub const OPERATOR_MAGIC: &str = "diffgal operator v1";
pub const SERIES_MAGIC: &str = "diffgal series v1";

/// Serialize an operator. The normalization tag records which presentation
/// the coefficients are in; coefficients print as `num / (den)` expressions.
pub fn write_operator<F: Field + PolyOps>(field: &F, l: &DiffOp<F>, normalization: &str) -> String {
    let mut out = String::new();
    out.push_str(OPERATOR_MAGIC);
    out.push('\n');
    out.push_str(&format!("field {}\n", field.ctx()));
    out.push_str("var x\n");
    out.push_str(&format!("order {}\n", l.order().map(|q| q as i64).unwrap_or(-1)));
    out.push_str(&format!("normalization {}\n", normalization));
    for (i, c) in l.coeffs.iter().enumerate() {
        out.push_str(&format!("coeff {}: {}\n", i, c.to_string_pretty(field, "x")));
    }
    out
}

/// Parse an operator file, checking the field matches.
pub fn read_operator<F: Field + PolyOps>(field: &F, text: &str) -> Result<DiffOp<F>> {
    let mut lines = text.lines();
    let magic = lines.next().ok_or(Error::Parse("empty file".into()))?;
    if magic.trim() != OPERATOR_MAGIC {
        return Err(Error::Parse("not an operator file".into()));
    }
    let mut order: Option<i64> = None;
    let mut coeffs: Vec<(usize, RatFn<F>)> = vec![];
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(|c: char| c.is_whitespace() || c == ':')
            .ok_or_else(|| Error::Parse(format!("bad line '{}'", line)))?;
        match key {
            "field" => {
                let ctx = parse_field_line(rest)?;
                if ctx != field.ctx() {
                    return Err(Error::FieldMismatch(format!(
                        "file is over {}, expected {}",
                        ctx,
                        field.ctx()
                    )));
                }
            }
            "var" => {
                if rest.trim() != "x" {
                    return Err(Error::Parse("only variable x is supported".into()));
                }
            }
            "order" => {
                order = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| Error::Parse("bad order".into()))?,
                );
            }
            "normalization" => {
                let v = rest.trim();
                if !["monic", "cleared", "asis"].contains(&v) {
                    return Err(Error::Parse(format!("unknown normalization '{}'", v)));
                }
            }
            "coeff" => {
                let (idx, expr) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("coeff line needs 'coeff i: expr'".into()))?;
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse("bad coefficient index".into()))?;
                coeffs.push((idx, parse_ratfn(field, expr)?));
            }
            other => {
                return Err(Error::Parse(format!("unknown header key '{}'", other)));
            }
        }
    }
    let max = coeffs.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let mut v = vec![RatFn::<F>::zero(); max + 1];
    for (i, c) in coeffs {
        v[i] = c;
    }
    let op = DiffOp::new(field, v);
    if let Some(o) = order {
        if o >= 0 && op.order() != Some(o as usize) {
            return Err(Error::Parse("declared order does not match coefficients".into()));
        }
    }
    Ok(op)
}

// ---------------------------------------------------------------------------
// series files
// ---------------------------------------------------------------------------

/// Serialize one log-level block of a series.
pub fn write_series<F: Field>(field: &F, s: &LogSeries<F>, level: usize) -> String {
    let mut out = String::new();
    out.push_str(SERIES_MAGIC);
    out.push('\n');
    out.push_str(&format!("field {}\n", field.ctx()));
    let rho = if s.rho.is_integer() {
        s.rho.numer().to_string()
    } else {
        format!("{}/{}", s.rho.numer(), s.rho.denom())
    };
    out.push_str(&format!("offset {}\n", rho));
    out.push_str(&format!("loglevel {}\n", level));
    out.push_str(&format!("truncation {}\n", s.trunc));
    for n in 0..s.trunc {
        out.push_str(&format!("{}: {}\n", n, field.fmt_elem(&s.coeff(field, level, n))));
    }
    out
}

/// Parse a series file into a single-block log series.
pub fn read_series<F: Field>(field: &F, text: &str) -> Result<LogSeries<F>> {
    let mut lines = text.lines();
    let magic = lines.next().ok_or(Error::Parse("empty file".into()))?;
    if magic.trim() != SERIES_MAGIC {
        return Err(Error::Parse("not a series file".into()));
    }
    let mut rho = BigRational::zero();
    let mut level = 0usize;
    let mut trunc: Option<usize> = None;
    let mut coeffs: Vec<(usize, F::Elem)> = vec![];
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, rest)) = line.split_once(' ') {
            match key {
                "field" => {
                    let ctx = parse_field_line(rest)?;
                    if ctx != field.ctx() {
                        return Err(Error::FieldMismatch(format!(
                            "file is over {}, expected {}",
                            ctx,
                            field.ctx()
                        )));
                    }
                    continue;
                }
                "offset" => {
                    rho = Rationals
                        .parse_elem(rest.trim())
                        .ok_or_else(|| Error::Parse("bad offset".into()))?;
                    continue;
                }
                "loglevel" => {
                    level = rest
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse("bad log level".into()))?;
                    continue;
                }
                "truncation" => {
                    trunc = Some(
                        rest.trim()
                            .parse()
                            .map_err(|_| Error::Parse("bad truncation".into()))?,
                    );
                    continue;
                }
                _ => {}
            }
        }
        if let Some((idx, val)) = line.split_once(':') {
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index '{}'", idx)))?;
            let v = field
                .parse_elem(val.trim())
                .ok_or_else(|| Error::Parse(format!("bad coefficient '{}'", val)))?;
            coeffs.push((idx, v));
        } else {
            return Err(Error::Parse(format!("unknown line '{}'", line)));
        }
    }
    let trunc = trunc.ok_or(Error::Parse("missing truncation".into()))?;
    let mut block = vec![field.zero(); trunc];
    for (i, (idx, v)) in coeffs.into_iter().enumerate() {
        if idx != i || idx >= trunc {
            return Err(Error::Parse("indices must be contiguous from 0".into()));
        }
        block[idx] = v;
    }
    let mut blocks = vec![vec![field.zero(); trunc]; level + 1];
    blocks[level] = block;
    Ok(LogSeries { rho, blocks, trunc })
}

/// Parse an operator over either field from the header.
pub fn sniff_field(text: &str) -> Result<FieldCtx> {
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("field ") {
            return parse_field_line(rest);
        }
    }
    Err(Error::Parse("no field header".into()))
}

/// Prime-field context from an env var override or default.
pub fn env_default_prime() -> u64 {
    std::env::var("DIFFGAL_PRIME")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(crate::field::DEFAULT_PRIME)
}

#[allow(unused_imports)]
use PrimeField as _PrimeFieldUsedInTests;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;

    #[test]
    fn parse_polynomials() {
        let f = Rationals;
        let p = parse_poly(&f, "1 + x - 24*x^2 - 145*x^3 - 192*x^4 + 96*x^5 + 128*x^7").unwrap();
        assert_eq!(p, Poly::from_i64(&f, &[1, 1, -24, -145, -192, 96, 0, 128]));
        // implicit multiplication and parentheses
        let q = parse_poly(&f, "x^2 (x - 1)^2 (1+2x)^2").unwrap();
        assert_eq!(q.deg(), 6);
        let r = parse_ratfn(&f, "(2 - 42x + 225x^2)/(1-16x)^7").unwrap();
        assert_eq!(r.den.deg(), 7);
    }

    #[test]
    fn parse_huge_integers_exactly() {
        let f = Rationals;
        let p = parse_poly(&f, "521686412421099571093753036800*x^2 - 1").unwrap();
        let c = &p.coeffs[2];
        assert_eq!(c.to_string(), "521686412421099571093753036800");
    }

    #[test]
    fn operator_roundtrip() {
        let f = Rationals;
        let l = DiffOp::new(
            &f,
            vec![
                parse_ratfn(&f, "(1+2x)/(3x^2)").unwrap(),
                parse_ratfn(&f, "5/x").unwrap(),
                RatFn::one(&f),
            ],
        );
        let text = write_operator(&f, &l, "asis");
        let back = read_operator(&f, &text).unwrap();
        assert_eq!(back, l);
        // print∘parse∘print = print
        let text2 = write_operator(&f, &back, "asis");
        assert_eq!(text, text2);
    }

    #[test]
    fn operator_rejects_unknown_keys() {
        let f = Rationals;
        let text = format!("{}\nfield rational\nbogus 1\ncoeff 0: 1\n", OPERATOR_MAGIC);
        assert!(read_operator(&f, &text).is_err());
    }

    #[test]
    fn series_roundtrip_mod_p() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        let s = LogSeries::from_coeffs(&fp, vec![1, 4, 36, 400], 4);
        let text = write_series(&fp, &s, 0);
        let back = read_series(&fp, &text).unwrap();
        assert_eq!(back.coeff(&fp, 0, 2), 36);
        assert_eq!(back.trunc, 4);
    }
}
