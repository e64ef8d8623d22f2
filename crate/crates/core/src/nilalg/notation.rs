//! Compact tuple and form notation, plus the JSON interchange formats.
//!
//! Algebras: `(0,0,12,13,14+35)`, entry `k` listing `de_k` with digit pairs
//! for `e_i∧e_j` and optional `n×`/`n*` integer coefficients.
//!
//! Forms: a product of parenthesized complex 1-forms followed by an
//! optional `exp` factor, or a bare real 2-form (`16 + 34 - 25`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::NilAlgebra;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::scalars::GaussianRational;

type G = GaussianRational;

struct Cursor {
    src: String,
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            src: text.to_string(),
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        let at: String = self.chars[self.pos.min(self.chars.len())..].iter().collect();
        Error::Parse(format!("{msg} at `{at}` in `{}`", self.src))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    /// `Some(true)` for `-`, `Some(false)` for `+`.
    fn sign(&mut self) -> Option<bool> {
        if self.eat('+') {
            Some(false)
        } else if self.eat('-') {
            Some(true)
        } else {
            None
        }
    }

    fn digit_run(&self, from: usize) -> usize {
        self.chars[from..].iter().take_while(|c| c.is_ascii_digit()).count()
    }

    /// An `n×` or `n/m×` prefix; consumes nothing unless the multiplication
    /// sign is present.
    fn coefficient(&mut self) -> Result<Option<G>> {
        let start = self.pos;
        let n = self.digit_run(start);
        if n == 0 {
            return Ok(None);
        }
        let mut end = start + n;
        if self.chars.get(end) == Some(&'/') {
            let m = self.digit_run(end + 1);
            if m == 0 {
                return Ok(None);
            }
            end += 1 + m;
        }
        if !matches!(self.chars.get(end), Some('×') | Some('*')) {
            return Ok(None);
        }
        let text: String = self.chars[start..end].iter().collect();
        self.pos = end + 1;
        text.parse::<G>().map(Some).map_err(|_| self.err("bad coefficient"))
    }

    fn index_group(&mut self, len: usize, dim: usize) -> Result<Vec<usize>> {
        let n = self.digit_run(self.pos);
        if n != len {
            return Err(self.err(&format!("expected {len} index digit(s)")));
        }
        let idx: Vec<usize> = self.chars[self.pos..self.pos + n]
            .iter()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        if let Some(bad) = idx.iter().find(|&&i| i == 0 || i > dim) {
            return Err(self.err(&format!("index {bad} outside 1..={dim}")));
        }
        self.pos += n;
        Ok(idx)
    }

    /// `[n×] [i] digits` with exactly `len` digits.
    fn term(&mut self, len: usize, dim: usize) -> Result<Form> {
        let c = self.coefficient()?.unwrap_or_else(G::one);
        let c = if self.eat('i') { c * G::i() } else { c };
        let idx = self.index_group(len, dim)?;
        Form::monomial(dim, &idx, c)
    }

    /// `[sign] item {sign item}` until a closing parenthesis or the end.
    fn sum(&mut self, dim: usize, item: impl Fn(&mut Self) -> Result<Form>) -> Result<Form> {
        let mut acc = Form::zero(dim);
        let mut first = true;
        loop {
            let sign = self.sign();
            if sign.is_none() && !first {
                return Ok(acc);
            }
            let t = item(self)?;
            acc = if sign == Some(true) { &acc - &t } else { &acc + &t };
            first = false;
        }
    }

    fn linsum(&mut self, dim: usize) -> Result<Form> {
        self.sum(dim, |c| c.term(1, dim))
    }

    fn twoform(&mut self, dim: usize) -> Result<Form> {
        self.sum(dim, |c| c.term(2, dim))
    }

    fn mixedsum(&mut self, dim: usize) -> Result<Form> {
        self.sum(dim, |c| {
            if c.peek() == Some('i') && c.peek_at(1) == Some('(') {
                c.pos += 2;
                let inner = c.twoform(dim)?;
                c.expect(')')?;
                return Ok(inner.scale(&G::i()));
            }
            let save = c.pos;
            if let Some(k) = c.coefficient()? {
                if c.peek() == Some('i') && c.peek_at(1) == Some('(') {
                    c.pos += 2;
                    let inner = c.twoform(dim)?;
                    c.expect(')')?;
                    return Ok(inner.scale(&(k * G::i())));
                }
                c.pos = save;
            }
            c.term(2, dim)
        })
    }

    fn exparg(&mut self, dim: usize) -> Result<Form> {
        if self.eat('i') {
            self.expect('(')?;
            let w = self.twoform(dim)?;
            self.expect(')')?;
            return Ok(w.scale(&G::i()));
        }
        self.expect('(')?;
        let save = self.pos;
        // `(linsum) digit`: a 1-form times a generator
        if let Ok(lin) = self.linsum(dim) {
            if self.eat(')') && self.digit_run(self.pos) == 1 {
                let tail = self.index_group(1, dim)?;
                return Ok(&lin ^ &Form::generator(dim, tail[0]));
            }
        }
        self.pos = save;
        let a = self.mixedsum(dim)?;
        self.expect(')')?;
        Ok(a)
    }
}

/// A parsed form, keeping the structure of the notation.
#[derive(Clone, Debug, PartialEq)]
pub enum FormExpr {
    /// `exp(A) ∧ θ_1 ∧ … ∧ θ_k` with `A` a complex 2-form (possibly zero).
    Spinor { thetas: Vec<Form>, exponent: Form },
    /// A bare 2-form, as in the symplectic column.
    TwoForm(Form),
}

impl FormExpr {
    /// The form the text denotes literally.
    pub fn to_form(&self) -> Form {
        match self {
            FormExpr::Spinor { thetas, exponent } => {
                let dim = exponent.dim();
                let wedge = thetas.iter().fold(Form::one(dim), |acc, t| &acc ^ t);
                &exponent.exp().expect("2-form exponent") ^ &wedge
            }
            FormExpr::TwoForm(w) => w.clone(),
        }
    }

    /// The spinor the text stands for: a bare 2-form `ω` is read as the
    /// symplectic spinor `exp(iω)`.
    pub fn spinor(&self) -> Form {
        match self {
            FormExpr::TwoForm(w) => w.scale(&G::i()).exp().expect("2-form exponent"),
            s => s.to_form(),
        }
    }
}

pub(super) fn parse_algebra(text: &str) -> Result<NilAlgebra> {
    let mut c = Cursor::new(text);
    c.expect('(')?;
    let mut raw: Vec<Vec<(G, usize, usize)>> = Vec::new();
    loop {
        let mut entry = Vec::new();
        let zero_entry = c.peek() == Some('0') && matches!(c.peek_at(1), Some(',') | Some(')'));
        if zero_entry {
            c.pos += 1;
        } else {
            let mut first = true;
            loop {
                let sign = c.sign();
                if sign.is_none() && !first {
                    break;
                }
                let k = c.coefficient()?.unwrap_or_else(G::one);
                if c.digit_run(c.pos) != 2 {
                    return Err(c.err("expected a digit pair"));
                }
                let i = c.chars[c.pos].to_digit(10).unwrap() as usize;
                let j = c.chars[c.pos + 1].to_digit(10).unwrap() as usize;
                c.pos += 2;
                entry.push((if sign == Some(true) { -k } else { k }, i, j));
                first = false;
            }
        }
        raw.push(entry);
        if c.eat(')') {
            break;
        }
        c.expect(',')?;
    }
    c.finish()?;
    let n = raw.len();
    if n > 9 {
        return Err(Error::Parse("compact notation is limited to 9 generators".into()));
    }
    let mut d_gen = Vec::with_capacity(n);
    for entry in raw {
        let mut de = Form::zero(n);
        for (k, i, j) in entry {
            de = &de + &Form::monomial(n, &[i, j], k)?;
        }
        d_gen.push(de);
    }
    NilAlgebra::new(d_gen)
}

pub fn parse_form_expr(text: &str, dim: usize) -> Result<FormExpr> {
    let mut c = Cursor::new(text);
    if c.at_end() {
        return Err(Error::Parse("empty form".into()));
    }
    if c.peek() != Some('(') && !c.chars.starts_with(&['e', 'x', 'p']) {
        let w = c.twoform(dim)?;
        c.finish()?;
        return Ok(FormExpr::TwoForm(w));
    }
    let mut thetas = Vec::new();
    while c.eat('(') {
        thetas.push(c.linsum(dim)?);
        c.expect(')')?;
    }
    let exponent = if c.eat_str("exp") { c.exparg(dim)? } else { Form::zero(dim) };
    c.finish()?;
    Ok(FormExpr::Spinor { thetas, exponent })
}

/// Parses compact form notation into the form it literally denotes.
pub fn parse_form(text: &str, g: &NilAlgebra) -> Result<Form> {
    Ok(parse_form_expr(text, g.dim())?.to_form())
}

/// One `{c, blade}` entry of the JSON formats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub blade: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    d: BTreeMap<String, Vec<TermJson>>,
}

fn terms_to_form(terms: &[TermJson], dim: usize) -> Result<Form> {
    let mut out = Form::zero(dim);
    for t in terms {
        let c: G = t.c.parse()?;
        out = &out + &Form::monomial(dim, &t.blade, c)?;
    }
    Ok(out)
}

fn form_to_terms(a: &Form) -> Vec<TermJson> {
    let mut terms: Vec<_> = a
        .terms()
        .map(|(b, c)| TermJson { c: c.to_string(), blade: b.indices() })
        .collect();
    terms.sort_by(|x, y| (x.blade.len(), &x.blade).cmp(&(y.blade.len(), &y.blade)));
    terms
}

pub fn form_from_json(text: &str, dim: usize) -> Result<Form> {
    let terms: Vec<TermJson> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    terms_to_form(&terms, dim)
}

pub fn form_to_json(a: &Form) -> String {
    serde_json::to_string(&form_to_terms(a)).expect("plain data serializes")
}

pub(super) fn algebra_from_json(text: &str) -> Result<NilAlgebra> {
    let raw: AlgebraJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.dim > crate::exterior::MAX_DIM {
        return Err(Error::TooLarge(raw.dim));
    }
    let mut d_gen = vec![Form::zero(raw.dim); raw.dim];
    for (key, terms) in &raw.d {
        let k: usize = key.parse().map_err(|_| Error::Parse(format!("bad generator key `{key}`")))?;
        if k == 0 || k > raw.dim {
            return Err(Error::Parse(format!("generator {k} outside 1..={}", raw.dim)));
        }
        d_gen[k - 1] = terms_to_form(terms, raw.dim)?;
    }
    NilAlgebra::new(d_gen)
}

pub(super) fn algebra_to_json(g: &NilAlgebra) -> String {
    let d = (1..=g.dim())
        .filter(|&k| !g.de(k).is_zero())
        .map(|k| (k.to_string(), form_to_terms(g.de(k))))
        .collect();
    serde_json::to_string(&AlgebraJson { dim: g.dim(), d }).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(idx: &[usize]) -> Form {
        Form::monomial(6, idx, G::one()).unwrap()
    }

    fn ie(idx: &[usize]) -> Form {
        Form::monomial(6, idx, G::i()).unwrap()
    }

    fn c(n: i64) -> G {
        G::from_integer(n)
    }

    #[test]
    fn algebra_examples() {
        let h: NilAlgebra = "(0,0,12)".parse().unwrap();
        assert_eq!(h.de(3), &Form::monomial(3, &[1, 2], G::one()).unwrap());
        let g: NilAlgebra = "(0,0,0,12,13,14+35)".parse().unwrap();
        assert_eq!(g.de(4), &e(&[1, 2]));
        assert_eq!(g.de(5), &e(&[1, 3]));
        assert_eq!(g.de(6), &(&e(&[1, 4]) + &e(&[3, 5])));
        let g: NilAlgebra = "(0,0,12,13,23,14-25)".parse().unwrap();
        assert_eq!(g.de(6), &(&e(&[1, 4]) - &e(&[2, 5])));
        let g: NilAlgebra = "(0, 0, 12, 13, 14, 34+52)".parse().unwrap();
        assert_eq!(g.de(6), &(&e(&[3, 4]) - &e(&[2, 5])));
        let g: NilAlgebra = "(0,0,0,12,14,15 + 23 + 24)".parse().unwrap();
        assert_eq!(g.de(6).num_terms(), 3);
        let g: NilAlgebra = "(0,0,0,0,12,2×34)".parse().unwrap();
        assert_eq!(g.de(6), &e(&[3, 4]).scale(&c(2)));
    }

    #[test]
    fn algebra_syntax_errors() {
        for bad in ["(0,0,1)", "(0,0,123)", "0,0,12", "(0,0,12", "(0,0,12)x", "(0,,12)", "(0,0,1a)"] {
            assert!(matches!(bad.parse::<NilAlgebra>(), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn form_examples() {
        let x = parse_form_expr("(1+i2)exp i(36-45)", 6).unwrap();
        let FormExpr::Spinor { thetas, exponent } = &x else { panic!() };
        assert_eq!(thetas, &vec![&e(&[1]) + &ie(&[2])]);
        assert_eq!(exponent, &(&ie(&[3, 6]) - &ie(&[4, 5])));
        let expect = &(&ie(&[3, 6]) - &ie(&[4, 5])).exp().unwrap() ^ &(&e(&[1]) + &ie(&[2]));
        assert_eq!(x.to_form(), expect);

        let w = parse_form_expr("16 + 34 - 25", 6).unwrap();
        assert_eq!(w, FormExpr::TwoForm(&(&e(&[1, 6]) + &e(&[3, 4])) - &e(&[2, 5])));

        let z = parse_form_expr("(1+i2)(3 - 2 × i4)(5 + 2 × i6)", 6).unwrap();
        let FormExpr::Spinor { thetas, exponent } = &z else { panic!() };
        assert!(exponent.is_zero());
        assert_eq!(thetas[1], &e(&[3]) - &ie(&[4]).scale(&c(2)));
        assert_eq!(thetas[2], &e(&[5]) + &ie(&[6]).scale(&c(2)));
    }

    #[test]
    fn exponent_variants() {
        let exp_of = |s: &str| match parse_form_expr(s, 6).unwrap() {
            FormExpr::Spinor { exponent, .. } => exponent,
            _ => panic!("{s}"),
        };
        assert_eq!(
            exp_of("(1+i2)exp(- 45 + 36 + i(36+ 45))"),
            &(&(&e(&[3, 6]) - &e(&[4, 5])) + &ie(&[3, 6])) + &ie(&[4, 5])
        );
        assert_eq!(
            exp_of("(1+i2)exp(2 × 35 + i(36- 45))"),
            &(&e(&[3, 5]).scale(&c(2)) + &ie(&[3, 6])) - &ie(&[4, 5])
        );
        assert_eq!(exp_of("(1+2+i3)(5+i4)exp(3+i1)6"), &e(&[3, 6]) + &ie(&[1, 6]));
        assert_eq!(exp_of("(1+i2)exp i(36)"), ie(&[3, 6]));
        assert_eq!(
            exp_of("(1+i2)exp(45-35+36+i(-36+45-16))"),
            &(&(&(&(&e(&[4, 5]) - &e(&[3, 5])) + &e(&[3, 6])) - &ie(&[3, 6])) + &ie(&[4, 5])) - &ie(&[1, 6])
        );
    }

    #[test]
    fn form_syntax_errors() {
        for bad in ["(12)", "(1+i2)exp(3)", "1", "(1+i2", "(1+i2)exp i36", "(7)", "16 +"] {
            assert!(parse_form_expr(bad, 6).is_err(), "{bad}");
        }
    }

    #[test]
    fn symplectic_reading() {
        let w = parse_form_expr("12", 2).unwrap();
        let rho = w.spinor();
        let e12 = Form::monomial(2, &[1, 2], G::i()).unwrap();
        assert_eq!(rho, &Form::one(2) + &e12);
    }

    #[test]
    fn json_round_trips() {
        let g: NilAlgebra = "(0,0,0,12,13,14+35)".parse().unwrap();
        let back = NilAlgebra::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let parsed = NilAlgebra::from_json(r#"{"dim":3,"d":{"3":[{"c":"1","blade":[1,2]}]}}"#).unwrap();
        assert_eq!(parsed, "(0,0,12)".parse().unwrap());
        let a = &e(&[1, 2]).scale(&"1/2-i".parse().unwrap()) + &e(&[3]);
        assert_eq!(form_from_json(&form_to_json(&a), 6).unwrap(), a);
        assert!(NilAlgebra::from_json(r#"{"dim":2,"d":{"2":[{"c":"1","blade":[1,2]}]}}"#).is_err());
    }
}
