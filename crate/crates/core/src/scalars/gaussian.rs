use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact element `re + im·i` of ℚ(i).
///
/// Both parts are reduced big rationals, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real scalar. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn real_part(&self) -> GaussianRational {
        GaussianRational::from_rational(self.re.clone())
    }

    pub fn imag_part(&self) -> GaussianRational {
        GaussianRational::from_rational(self.im.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        radd(&rmul(&self.re, &self.re), &rmul(&self.im, &self.im))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(rdiv(&self.re, &n), -rdiv(&self.im, &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    /// Image in 𝔽_p, p = [`RESIDUE_PRIME`], with i sent to a fixed square
    /// root of −1. `None` when a denominator vanishes mod p.
    pub fn residue(&self) -> Option<u64> {
        let p = RESIDUE_PRIME;
        let part = |r: &BigRational| -> Option<u64> {
            let m = BigInt::from(p);
            let num = (r.numer() % &m + &m) % &m;
            let den = (r.denom() % &m + &m) % &m;
            let (num, den) = (u64::try_from(num).ok()?, u64::try_from(den).ok()?);
            (den != 0).then(|| mul_mod(num, pow_mod(den, p - 2)))
        };
        let (re, im) = (part(&self.re)?, part(&self.im)?);
        Some((re + mul_mod(im, sqrt_minus_one())) % p)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

/// A prime ≡ 1 mod 4, so −1 is a square in 𝔽_p.
pub const RESIDUE_PRIME: u64 = 1_000_000_009;

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RESIDUE_PRIME as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn sqrt_minus_one() -> u64 {
    static ROOT: std::sync::OnceLock<u64> = std::sync::OnceLock::new();
    *ROOT.get_or_init(|| {
        let p = RESIDUE_PRIME;
        let a = (2..).find(|&a| pow_mod(a, (p - 1) / 2) == p - 1).expect("non-residue exists");
        pow_mod(a, (p - 1) / 4)
    })
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: &BigRational, lead: bool| -> fmt::Result {
            let sign = if im.is_negative() {
                "-"
            } else if lead {
                ""
            } else {
                "+"
            };
            let mag = im.abs();
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{}i", fmt_ratio(&mag))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_ratio(&self.re)),
            (true, false) => imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", fmt_ratio(&self.re))?;
                imag(f, &self.im, false)
            }
        }
    }
}

fn parse_ratio(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(body.parse::<BigInt>().map_err(|_| bad())?),
    };
    Ok(if neg { -value } else { value })
}

/// Accepts `a`, `a/b`, `i`, `3i`, `1/2+3/4i`, `-i` and similar.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = text.strip_suffix('i') else {
            return Ok(GaussianRational::from_rational(parse_ratio(&text)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_text.is_empty() {
            BigRational::zero()
        } else {
            parse_ratio(re_text)?
        };
        let im = match im_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_ratio(t)?,
        };
        Ok(GaussianRational::new(re, im))
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }
}

// zero-aware rational arithmetic with a machine-word path; big-integer gcds
// dominate elimination otherwise
fn small(r: &BigRational) -> Option<(i128, i128)> {
    Some((r.numer().to_i64()? as i128, r.denom().to_i64()? as i128))
}

fn ratio(n: i128, d: i128) -> BigRational {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    let (mut a, mut b) = (n.unsigned_abs(), d.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let g = a.max(1) as i128;
    BigRational::new_raw(BigInt::from(n / g), BigInt::from(d / g))
}

fn radd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => ratio(an * bd + bn * ad, ad * bd),
        _ => a + b,
    }
}

fn rsub(a: &BigRational, b: &BigRational) -> BigRational {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return -b.clone();
    }
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => ratio(an * bd - bn * ad, ad * bd),
        _ => a - b,
    }
}

fn rdiv(a: &BigRational, b: &BigRational) -> BigRational {
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => ratio(an * bd, ad * bn),
        _ => a / b,
    }
}

fn rmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => ratio(an * bn, ad * bd),
        _ => a * b,
    }
}

impl<'a, 'b> Add<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &'b GaussianRational) -> GaussianRational {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        GaussianRational::new(radd(&self.re, &o.re), radd(&self.im, &o.im))
    }
}

impl<'a, 'b> Sub<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &'b GaussianRational) -> GaussianRational {
        if o.is_zero() {
            return self.clone();
        }
        GaussianRational::new(rsub(&self.re, &o.re), rsub(&self.im, &o.im))
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &'b GaussianRational) -> GaussianRational {
        if self.is_zero() || o.is_zero() {
            return GaussianRational::zero();
        }
        GaussianRational::new(
            rsub(&rmul(&self.re, &o.re), &rmul(&self.im, &o.im)),
            radd(&rmul(&self.re, &o.im), &rmul(&self.im, &o.re)),
        )
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

/// Panics on division by zero, like the primitive numeric types.
impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &'b GaussianRational) -> GaussianRational {
        self.checked_div(o).expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational { (&self).$m(&o) }
        }
        impl<'b> $tr<&'b GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &'b GaussianRational) -> GaussianRational { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_documented_syntax() {
        assert_eq!(g("3"), GaussianRational::from_integer(3));
        assert_eq!(g("-2/4"), GaussianRational::from_ratio(-1, 2));
        assert_eq!(g("i"), GaussianRational::i());
        assert_eq!(g("-i"), -GaussianRational::i());
        assert_eq!(g("3i"), GaussianRational::from_parts((0, 1), (3, 1)));
        assert_eq!(g("1/2+3/4i"), GaussianRational::from_parts((1, 2), (3, 4)));
        assert_eq!(g("1-i"), GaussianRational::from_parts((1, 1), (-1, 1)));
        assert_eq!(g(" -1/3 - 2/5i "), GaussianRational::from_parts((-1, 3), (-2, 5)));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("x".parse::<GaussianRational>().is_err());
        assert!("".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "5", "-7/3", "i", "-i", "2/3i", "1/2+3/4i", "-1-i", "4-5/7i"] {
            assert_eq!(g(s).to_string(), s);
            assert_eq!(g(&g(s).to_string()), g(s));
        }
    }

    #[test]
    fn field_operations() {
        let a = g("1+2i");
        let b = g("3-i");
        assert_eq!(&a * &b, g("5+5i"));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(a.conj(), g("1-2i"));
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), g("-1"));
        assert!(g("5/2").is_real());
        assert!(!g("5/2+i").is_real());
    }

    #[test]
    fn residues_are_ring_maps() {
        let (a, b) = (g("1/2+3i"), g("-5/3-1/7i"));
        let p = RESIDUE_PRIME;
        assert_eq!((&a + &b).residue(), Some((a.residue().unwrap() + b.residue().unwrap()) % p));
        assert_eq!((&a * &b).residue(), Some(mul_mod(a.residue().unwrap(), b.residue().unwrap())));
        assert_eq!((&GaussianRational::i() * &GaussianRational::i()).residue(), Some(p - 1));
        assert_eq!(GaussianRational::from_ratio(1, p as i64).residue(), None);
    }

    #[test]
    fn denominators_are_normalized() {
        let x = g("6/-4");
        assert_eq!(x, g("-3/2"));
        assert!(x.re().denom() > &BigInt::zero());
    }
}
