use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::{GaussianRational, Pivot, Scalar};
use crate::error::Error;

/// A polynomial over ℚ(i) in named parameters.
///
/// Canonical form: `vars` is sorted, contains exactly the variables that
/// occur with a positive exponent in some term, and no stored coefficient is
/// zero. Structural equality is therefore polynomial equality.
///
/// Parameters are treated as real: [`Scalar::conj`] conjugates
/// coefficients only.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

/// `true` iff every coefficient of `p` is zero.
pub fn poly_is_zero(p: &ParamPolynomial) -> bool {
    p.terms.is_empty()
}

impl ParamPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ParamPolynomial { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], GaussianRational::one());
        ParamPolynomial {
            vars: vec![name.to_string()],
            terms,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Iterates `(exponents, coefficient)` with exponents aligned to
    /// [`variables`](Self::variables).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &GaussianRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 if self.vars.is_empty() => self.terms.values().next().cloned(),
            _ => None,
        }
    }

    /// Evaluates at the point given by `value(name)` for each variable.
    pub fn eval_with(&self, value: impl Fn(&str) -> GaussianRational) -> GaussianRational {
        let point: Vec<GaussianRational> = self.vars.iter().map(|v| value(v)).collect();
        let mut acc = GaussianRational::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval(&self, point: &BTreeMap<String, GaussianRational>) -> Result<GaussianRational, Error> {
        if let Some(missing) = self.vars.iter().find(|v| !point.contains_key(*v)) {
            return Err(Error::Parse(format!("no value for parameter `{missing}`")));
        }
        Ok(self.eval_with(|v| point[v].clone()))
    }

    fn from_raw(vars: Vec<String>, terms: BTreeMap<Vec<u32>, GaussianRational>) -> Self {
        let mut p = ParamPolynomial { vars, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|k| self.terms.keys().any(|e| e[k] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(e, c)| {
                let e = e.into_iter().zip(&used).filter(|(_, &u)| u).map(|(x, _)| x).collect();
                (e, c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    /// Terms of `self` re-indexed onto the variable list `vars`, which must
    /// be a sorted superset of `self.vars`.
    fn terms_over(&self, vars: &[String]) -> BTreeMap<Vec<u32>, GaussianRational> {
        if vars == self.vars.as_slice() {
            return self.terms.clone();
        }
        let slot: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; vars.len()];
                for (k, &x) in e.iter().enumerate() {
                    out[slot[k]] = x;
                }
                (out, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        if self.vars == other.vars {
            return self.vars.clone();
        }
        let mut v: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let vars = self.union_vars(other);
        let mut terms = self.terms_over(&vars);
        let neg = sign < 0;
        for (e, c) in other.terms_over(&vars) {
            let entry = terms.entry(e).or_insert_with(GaussianRational::zero);
            *entry = if neg { &*entry - &c } else { &*entry + &c };
        }
        Self::from_raw(vars, terms)
    }

    fn product(&self, other: &Self) -> Self {
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self::zero();
        }
        let vars = self.union_vars(other);
        let a = self.terms_over(&vars);
        let b = other.terms_over(&vars);
        let mut terms: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                let entry = terms.entry(e).or_insert_with(GaussianRational::zero);
                *entry = &*entry + &c;
            }
        }
        Self::from_raw(vars, terms)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        Self::from_raw(self.vars.clone(), terms)
    }
}

impl Scalar for ParamPolynomial {
    fn zero() -> Self {
        ParamPolynomial::zero()
    }

    fn one() -> Self {
        ParamPolynomial::constant(GaussianRational::one())
    }

    fn is_zero(&self) -> bool {
        poly_is_zero(self)
    }

    fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect();
        ParamPolynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn from_gaussian(g: GaussianRational) -> Self {
        ParamPolynomial::constant(g)
    }

    fn residue(&self) -> Option<u64> {
        self.as_constant()?.residue()
    }

    fn pivot(&self) -> Pivot<Self> {
        match self.as_constant() {
            Some(c) if c.is_zero() => Pivot::Zero,
            Some(c) => Pivot::Invertible(ParamPolynomial::constant(c.inv().expect("nonzero"))),
            None => Pivot::Ambiguous,
        }
    }
}

impl<'a> Add<&'a ParamPolynomial> for ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, o: &'a ParamPolynomial) -> ParamPolynomial {
        self.combine(o, 1)
    }
}

impl<'a> Sub<&'a ParamPolynomial> for ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, o: &'a ParamPolynomial) -> ParamPolynomial {
        self.combine(o, -1)
    }
}

impl<'a> Mul<&'a ParamPolynomial> for ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, o: &'a ParamPolynomial) -> ParamPolynomial {
        self.product(o)
    }
}

impl Add for ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, o: ParamPolynomial) -> ParamPolynomial {
        self.combine(&o, 1)
    }
}

impl Sub for ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, o: ParamPolynomial) -> ParamPolynomial {
        self.combine(&o, -1)
    }
}

impl Mul for ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, o: ParamPolynomial) -> ParamPolynomial {
        self.product(&o)
    }
}

impl Neg for ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        let terms = self.terms.into_iter().map(|(e, c)| (e, -c)).collect();
        ParamPolynomial {
            vars: self.vars,
            terms,
        }
    }
}

impl fmt::Debug for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let mono = mono.join("*");
            let zero = num_rational::BigRational::from_integer(0.into());
            let neg = if c.is_real() { c.re() < &zero } else { c.re() == &zero && c.im() < &zero };
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else if mag.is_real() || mag.re() == &zero {
                format!("{mag}*{mono}")
            } else {
                format!("({mag})*{mono}")
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Recursive-descent parser for polynomial expressions: sums and products
/// of rational literals, `i`, identifiers, parentheses and `^` powers.
/// Juxtaposition multiplies, so `3i` and `2z2` are accepted.
struct PolyParser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> PolyParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ParamPolynomial, Error> {
        let mut acc = ParamPolynomial::zero();
        let mut sign = 1;
        match self.peek() {
            Some('-') => {
                sign = -1;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc - t } else { acc + t };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<ParamPolynomial, Error> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() || c == '_' => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<ParamPolynomial, Error> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let e: u32 = self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| self.err("expected exponent"))?;
        let mut acc = ParamPolynomial::one();
        for _ in 0..e {
            acc = acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ParamPolynomial, Error> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let g: GaussianRational = lit.parse()?;
                Ok(ParamPolynomial::constant(g))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name == "i" {
                    Ok(ParamPolynomial::constant(GaussianRational::i()))
                } else {
                    Ok(ParamPolynomial::var(&name))
                }
            }
            _ => Err(self.err("expected a number, parameter or `(`")),
        }
    }
}

impl FromStr for ParamPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = PolyParser {
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            text: s,
        };
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParamPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn zero_checks() {
        assert!(poly_is_zero(&ParamPolynomial::zero()));
        assert!(poly_is_zero(&(p("t1*t2") - p("t2*t1"))));
        assert!(!poly_is_zero(&p("t1")));
    }

    // Expansion of a square checked against a term-by-term product.
    #[test]
    fn binomial_square_vanishes() {
        let lhs = p("(t1+t2)^2");
        let rhs = p("t1^2") + p("2*t1*t2") + p("t2^2");
        assert!(poly_is_zero(&(lhs.clone() - rhs)));
        assert_eq!(lhs.num_terms(), 3);
        assert_eq!(lhs.total_degree(), 2);
    }

    #[test]
    fn canonical_form_drops_cancelled_variables() {
        let q = p("z2 + 3") - p("z2");
        assert_eq!(q, ParamPolynomial::constant(GaussianRational::from_integer(3)));
        assert!(q.variables().is_empty());
        assert_eq!(q.as_constant(), Some(GaussianRational::from_integer(3)));
    }

    #[test]
    fn parse_scalar_syntax_and_identifiers() {
        assert_eq!(p("1/2+3/4i").as_constant(), Some("1/2+3/4i".parse().unwrap()));
        assert_eq!(p("-i").as_constant(), Some("-i".parse().unwrap()));
        let q = p("k34*z2 - 2i*k34");
        assert_eq!(q.variables(), &["k34".to_string(), "z2".to_string()]);
        assert!("k34 +".parse::<ParamPolynomial>().is_err());
    }

    #[test]
    fn evaluation() {
        let q = p("t1^2*t2 + i*t2");
        let v = q.eval_with(|name| match name {
            "t1" => GaussianRational::from_integer(2),
            _ => GaussianRational::from_integer(3),
        });
        assert_eq!(v, "12+3i".parse().unwrap());
        assert!(q.eval(&BTreeMap::new()).is_err());
    }

    #[test]
    fn conjugation_treats_parameters_as_real() {
        assert_eq!(p("i*t1 + 2").conj(), p("-i*t1 + 2"));
    }

    #[test]
    fn pivots() {
        assert_eq!(p("0").pivot(), Pivot::Zero);
        assert_eq!(p("2").pivot(), Pivot::Invertible(p("1/2")));
        assert_eq!(p("t1").pivot(), Pivot::Ambiguous);
    }

    #[test]
    fn display_is_parseable() {
        for s in ["t1^2 - 2*t1*t2", "(1+i)*z2 + 3", "-k34", "i*z2 - 1/2"] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q, "{s} -> {q}");
        }
    }
}
