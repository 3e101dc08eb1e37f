//! Exact arithmetic: arbitrary-precision rationals, the extended nonnegative
//! half-line `[0, ∞]`, extended endpoints for unbounded intervals, and
//! rational vectors under the sup-norm.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Rat> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// `2^-k`
    pub fn dyadic(k: u32) -> Rat {
        Rat(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn checked_recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn checked_div(&self, rhs: &Rat) -> Option<Rat> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rat(&self.0 / &rhs.0))
        }
    }

    pub fn pow(&self, exp: i32) -> Rat {
        Rat(Pow::pow(&self.0, exp))
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn midpoint(&self, other: &Rat) -> Rat {
        (self + other) / Rat::int(2)
    }

    /// Float rendering for reference comparisons only.
    /// Exact value of a finite float.
    pub fn from_f64(x: f64) -> Option<Rat> {
        BigRational::from_float(x).map(Rat)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer value when it fits an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Decimal rendering with `sig` significant digits, rounded half away
    /// from zero. Exact; no floating point involved.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let a = self.numer().abs();
        let b = self.denom().clone();
        let ten = BigInt::from(10);
        let digits = |x: &BigInt| x.to_string().len() as i64;
        let mut e = digits(&a) - digits(&b);
        let scaled_cmp = |e: i64| -> Ordering {
            // compare a/b with 10^e
            if e >= 0 {
                a.cmp(&(&b * Pow::pow(&ten, e as u32)))
            } else {
                (&a * Pow::pow(&ten, (-e) as u32)).cmp(&b)
            }
        };
        if scaled_cmp(e) == Ordering::Less {
            e -= 1;
        }
        let shift = sig as i64 - 1 - e;
        let (num, den) = if shift >= 0 {
            (&a * Pow::pow(&ten, shift as u32), b.clone())
        } else {
            (a.clone(), &b * Pow::pow(&ten, (-shift) as u32))
        };
        let two = BigInt::from(2);
        let mut m = (&num * &two + &den).div_floor(&(&den * &two));
        if m.to_string().len() > sig {
            m /= &ten;
            e += 1;
        }
        let ds = m.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if (0..12).contains(&e) {
            let split = (e + 1) as usize;
            let ds = format!("{ds:0<split$}");
            let (ip, fp) = ds.split_at(split);
            out.push_str(ip);
            let fp = fp.trim_end_matches('0');
            if !fp.is_empty() {
                out.push('.');
                out.push_str(fp);
            }
        } else if (-6..0).contains(&e) {
            out.push_str("0.");
            for _ in 0..(-e - 1) {
                out.push('0');
            }
            out.push_str(ds.trim_end_matches('0'));
        } else {
            let (h, t) = ds.split_at(1);
            out.push_str(h);
            let t = t.trim_end_matches('0');
            if !t.is_empty() {
                out.push('.');
                out.push_str(t);
            }
            out.push_str(&format!("e{e}"));
        }
        out
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p/q`, integers, and finite decimals such as `-1.25`.
    fn from_str(s: &str) -> Result<Rat> {
        let t = s.trim();
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Rat(BigRational::new(p, q)));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.starts_with('-');
            let ip_digits = ip.trim_start_matches(['-', '+']);
            if !ip_digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let whole = format!("{}{}", if ip_digits.is_empty() { "0" } else { ip_digits }, fp);
            let n = BigInt::from_str(&whole).map_err(|_| bad())?;
            let d = Pow::pow(&BigInt::from(10), fp.len() as u32);
            let r = Rat(BigRational::new(n, d));
            return Ok(if neg { -r } else { r });
        }
        let n = BigInt::from_str(t).map_err(|_| bad())?;
        Ok(Rat(BigRational::from_integer(n)))
    }
}

/// Visitor shared by the string-encoded numeric types: accepts JSON strings
/// and JSON integers.
struct TextualVisitor<T>(std::marker::PhantomData<T>);

impl<'de, T: FromStr<Err = Error>> Visitor<'de> for TextualVisitor<T> {
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational string such as \"3/4\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<T, E> {
        T::from_str(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<T, E> {
        T::from_str(&v.to_string()).map_err(E::custom)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<T, E> {
        T::from_str(&v.to_string()).map_err(E::custom)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        d.deserialize_any(TextualVisitor(std::marker::PhantomData))
    }
}

/// An element of `[0, ∞]`. `Infinity` is strictly greater than every finite
/// value, and `0 · ∞ = 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNonneg {
    Finite(Rat),
    Infinity,
}

impl ExtNonneg {
    pub fn finite(q: Rat) -> Result<ExtNonneg> {
        if q.is_negative() {
            Err(Error::Domain(format!("negative value {q} is not in [0, inf]")))
        } else {
            Ok(ExtNonneg::Finite(q))
        }
    }

    pub fn int(n: u64) -> ExtNonneg {
        ExtNonneg::Finite(Rat::from_bigint(BigInt::from(n)))
    }

    pub fn zero() -> ExtNonneg {
        ExtNonneg::Finite(Rat::zero())
    }

    pub fn one() -> ExtNonneg {
        ExtNonneg::Finite(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNonneg::Finite(q) if q.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNonneg::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtNonneg::Finite(q) => Some(q),
            ExtNonneg::Infinity => None,
        }
    }

    /// Division with the only divisors the library admits: finite and
    /// strictly positive.
    pub fn checked_div(&self, rhs: &ExtNonneg) -> Result<ExtNonneg> {
        match rhs {
            ExtNonneg::Finite(d) if d.is_positive() => match self {
                ExtNonneg::Finite(n) => Ok(ExtNonneg::Finite(n / d)),
                ExtNonneg::Infinity => Ok(ExtNonneg::Infinity),
            },
            _ => Err(Error::Domain(format!("division by {rhs} (divisor must be finite and positive)"))),
        }
    }

    /// `|a − b|`; infinite when exactly one side is infinite, zero when both are.
    pub fn abs_diff(&self, rhs: &ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite((a - b).abs()),
            (ExtNonneg::Infinity, ExtNonneg::Infinity) => ExtNonneg::zero(),
            _ => ExtNonneg::Infinity,
        }
    }

    pub fn scale(&self, c: &Rat) -> Result<ExtNonneg> {
        ExtNonneg::finite(c.clone()).map(|c| c * self.clone())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtNonneg::Finite(q) => q.to_f64(),
            ExtNonneg::Infinity => f64::INFINITY,
        }
    }
}

impl Add for ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite(a + b),
            _ => ExtNonneg::Infinity,
        }
    }
}

impl<'a> Add<&'a ExtNonneg> for &'a ExtNonneg {
    type Output = ExtNonneg;
    fn add(self, rhs: &ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite(a + b),
            _ => ExtNonneg::Infinity,
        }
    }
}

impl Mul for ExtNonneg {
    type Output = ExtNonneg;
    fn mul(self, rhs: ExtNonneg) -> ExtNonneg {
        &self * &rhs
    }
}

impl<'a> Mul<&'a ExtNonneg> for &'a ExtNonneg {
    type Output = ExtNonneg;
    fn mul(self, rhs: &ExtNonneg) -> ExtNonneg {
        match (self, rhs) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => ExtNonneg::Finite(a * b),
            (a, b) if a.is_zero() || b.is_zero() => ExtNonneg::zero(),
            _ => ExtNonneg::Infinity,
        }
    }
}

impl Sum for ExtNonneg {
    fn sum<I: Iterator<Item = ExtNonneg>>(iter: I) -> ExtNonneg {
        iter.fold(ExtNonneg::zero(), |a, b| a + b)
    }
}

impl From<Rat> for ExtNonneg {
    /// Panics on negative input; use [`ExtNonneg::finite`] for checked conversion.
    fn from(q: Rat) -> ExtNonneg {
        ExtNonneg::finite(q).expect("nonnegative rational")
    }
}

impl fmt::Display for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNonneg::Finite(q) => write!(f, "{q}"),
            ExtNonneg::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtNonneg {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExtNonneg> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtNonneg::Infinity),
            t => ExtNonneg::finite(t.parse()?),
        }
    }
}

impl Serialize for ExtNonneg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtNonneg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ExtNonneg, D::Error> {
        d.deserialize_any(TextualVisitor(std::marker::PhantomData))
    }
}

/// An interval endpoint on the extended rational line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Fin(Rat),
    PosInf,
}

impl Bound {
    pub fn fin(&self) -> Option<&Rat> {
        match self {
            Bound::Fin(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Fin(_))
    }

    pub fn shift(&self, g: &Rat) -> Bound {
        match self {
            Bound::Fin(q) => Bound::Fin(q + g),
            b => b.clone(),
        }
    }

    pub fn negate(&self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::Fin(q) => Bound::Fin(-q),
            Bound::PosInf => Bound::NegInf,
        }
    }
}

impl From<Rat> for Bound {
    fn from(q: Rat) -> Bound {
        Bound::Fin(q)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Fin(q) => write!(f, "{q}"),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Bound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bound> {
        match s.trim() {
            "-inf" | "-∞" => Ok(Bound::NegInf),
            "inf" | "+inf" | "∞" | "+∞" => Ok(Bound::PosInf),
            t => Ok(Bound::Fin(t.parse()?)),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Bound, D::Error> {
        d.deserialize_any(TextualVisitor(std::marker::PhantomData))
    }
}

/// A vector in `ℚ^d` normed by the max of absolute components.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecQ(Vec<Rat>);

impl VecQ {
    pub fn new(components: Vec<Rat>) -> Result<VecQ> {
        if components.is_empty() {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        Ok(VecQ(components))
    }

    pub fn zeros(dim: usize) -> VecQ {
        assert!(dim >= 1);
        VecQ(vec![Rat::zero(); dim])
    }

    pub fn from_ints(xs: &[i64]) -> VecQ {
        VecQ(xs.iter().map(|&x| Rat::int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn norm(&self) -> Rat {
        self.0.iter().map(Rat::abs).fold(Rat::zero(), Rat::max)
    }

    pub fn scale(&self, c: &Rat) -> VecQ {
        VecQ(self.0.iter().map(|x| x * c).collect())
    }

    pub fn checked_add(&self, rhs: &VecQ) -> Result<VecQ> {
        if self.dim() != rhs.dim() {
            return Err(Error::Domain(format!("dimension mismatch {} vs {}", self.dim(), rhs.dim())));
        }
        Ok(VecQ(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, rhs: &VecQ) -> Result<VecQ> {
        self.checked_add(&rhs.scale(&Rat::int(-1)))
    }
}

impl fmt::Debug for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn e(s: &str) -> ExtNonneg {
        s.parse().unwrap()
    }

    #[test]
    fn ext_add_examples() {
        assert_eq!(e("1/2") + e("1/3"), e("5/6"));
        assert_eq!(ExtNonneg::Infinity + e("7"), ExtNonneg::Infinity);
        assert_eq!(e("0") + e("0"), e("0"));
    }

    #[test]
    fn ext_mul_examples() {
        assert_eq!(e("0") * ExtNonneg::Infinity, e("0"));
        assert_eq!(ExtNonneg::Infinity * e("0"), e("0"));
        assert_eq!(e("2/3") * e("9/4"), e("3/2"));
        assert_eq!(ExtNonneg::Infinity * e("5"), ExtNonneg::Infinity);
    }

    #[test]
    fn ext_div_examples() {
        assert_eq!(e("3").checked_div(&e("6")).unwrap(), e("1/2"));
        assert_eq!(ExtNonneg::Infinity.checked_div(&e("2")).unwrap(), ExtNonneg::Infinity);
        assert!(matches!(e("1").checked_div(&e("0")), Err(Error::Domain(_))));
        assert!(matches!(e("1").checked_div(&ExtNonneg::Infinity), Err(Error::Domain(_))));
    }

    #[test]
    fn infinity_dominates_order() {
        assert!(ExtNonneg::Infinity > e("1000000000000"));
        assert!(e("0") < e("1/1000"));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-2/1").to_string(), "-2");
        assert_eq!(q("1.25"), q("5/4"));
        assert_eq!(q("-0.5"), q("-1/2"));
        assert!(matches!("1/0".parse::<Rat>(), Err(Error::Parse(_))));
        assert!("abc".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("-1".parse::<ExtNonneg>().is_err());
        assert_eq!("inf".parse::<ExtNonneg>().unwrap(), ExtNonneg::Infinity);
    }

    #[test]
    fn serde_strings() {
        let v: Rat = serde_json::from_str("\"3/4\"").unwrap();
        assert_eq!(v, q("3/4"));
        let v: Rat = serde_json::from_str("7").unwrap();
        assert_eq!(v, Rat::int(7));
        assert_eq!(serde_json::to_string(&ExtNonneg::Infinity).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Bound::NegInf).unwrap(), "\"-inf\"");
        assert!(serde_json::from_str::<Rat>("\"1/0\"").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("1025/513").to_decimal(12), "1.99805068226");
        assert_eq!(q("3").to_decimal(12), "3");
        assert_eq!(q("-1/4").to_decimal(12), "-0.25");
        assert_eq!(q("1/3").to_decimal(4), "0.3333");
        assert_eq!(q("2/3").to_decimal(3), "0.667");
        assert_eq!(q("999999/1000").to_decimal(3), "1000");
        assert_eq!(Rat::dyadic(30).to_decimal(3), "9.31e-10");
        assert_eq!(q("123456789012345").to_decimal(3), "1.23e14");
    }

    #[test]
    fn sup_norm() {
        let v = VecQ::new(vec![q("1"), q("-7/2"), q("3")]).unwrap();
        assert_eq!(v.norm(), q("7/2"));
        assert_eq!(VecQ::zeros(2).norm(), Rat::zero());
        assert!(VecQ::new(vec![]).is_err());
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_ext() -> impl Strategy<Value = ExtNonneg> {
        prop_oneof![
            4 => (0i64..50, 1i64..12).prop_map(|(n, d)| ExtNonneg::Finite(Rat::new(n, d))),
            1 => Just(ExtNonneg::Infinity),
        ]
    }

    proptest! {
        #[test]
        fn rat_stays_canonical(a in arb_rat(), b in arb_rat()) {
            let mut outs = vec![&a + &b, &a - &b, &a * &b];
            if let Some(d) = a.checked_div(&b) { outs.push(d); }
            for r in outs {
                prop_assert!(r.denom() > &BigInt::zero());
                prop_assert!(r.numer().abs().gcd(r.denom()) == BigInt::one() || r.is_zero());
                prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
            }
        }

        #[test]
        fn ext_ops_commute_and_associate(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            // total order
            prop_assert!(a <= b || b <= a);
        }

        #[test]
        fn norm_is_a_norm(xs in proptest::collection::vec(arb_rat(), 3), ys in proptest::collection::vec(arb_rat(), 3), c in arb_rat()) {
            let x = VecQ::new(xs).unwrap();
            let y = VecQ::new(ys).unwrap();
            prop_assert!(x.checked_add(&y).unwrap().norm() <= &x.norm() + &y.norm());
            prop_assert_eq!(x.scale(&c).norm(), &c.abs() * &x.norm());
        }
    }
}
