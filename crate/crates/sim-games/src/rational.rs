//! Exact rational arithmetic.
//!
//! Every payoff and probability in this crate is a [`Rational`]. Equilibrium
//! membership and argmax sets are discontinuous in the payoffs, so floating
//! point is banned from the solver path; values that fit a reduced `i64/i64`
//! fraction stay on a cheap inline representation and spill to an
//! arbitrary-precision fraction only when they outgrow it.
//!
//! ```
//! use sim_games::Rational;
//!
//! let third: Rational = "1/3".parse().unwrap();
//! let six = Rational::from(6);
//! assert_eq!((third * six).to_string(), "2");
//! assert_eq!(Rational::new(3, 6), Rational::new(1, 2));
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact fraction with value semantics.
///
/// Invariants: the denominator is positive and the fraction is stored in
/// lowest terms, so equality and hashing are plain value equality.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// `num/den` with `den > 0`, `gcd(num, den) == 1`.
    Small { num: i64, den: i64 },
    /// Canonical invariant: a `Big` value never fits `Small`.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce `num/den` (den != 0) given as i128s, demoting to `Small` if it fits.
fn from_i128(mut num: i128, mut den: i128) -> Rational {
    assert!(den != 0, "rational with zero denominator");
    if den < 0 {
        num = -num;
        den = -den;
    }
    if num == 0 {
        return Rational(Repr::Small { num: 0, den: 1 });
    }
    let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
    num /= g;
    den /= g;
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Rational(Repr::Small { num: n, den: d })
    } else {
        Rational(Repr::Big(Box::new(BigRational::new(num.into(), den.into()))))
    }
}

fn from_big(big: BigRational) -> Rational {
    if let (Some(n), Some(d)) = (big.numer().to_i64(), big.denom().to_i64()) {
        Rational(Repr::Small { num: n, den: d })
    } else {
        Rational(Repr::Big(Box::new(big)))
    }
}

impl Rational {
    /// Builds `num/den`, reducing to lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        from_i128(num as i128, den as i128)
    }

    /// Builds an exact fraction from arbitrary-precision parts.
    pub fn from_bigint(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        from_big(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                from_i128(*den as i128, *num as i128)
            }
            Repr::Big(b) => from_big(b.recip()),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new((*num).into(), (*den).into()),
            Repr::Big(b) => (**b).clone(),
        }
    }

    /// Numerator/denominator as big integers (denominator positive).
    pub fn into_parts(&self) -> (BigInt, BigInt) {
        let b = self.to_big();
        (b.numer().clone(), b.denom().clone())
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal approximation with 6 significant digits, round half to even.
    ///
    /// ```
    /// use sim_games::Rational;
    /// assert_eq!(Rational::new(2, 3).decimal(), "0.666667");
    /// assert_eq!(Rational::new(500, 29).decimal(), "17.2414");
    /// assert_eq!(Rational::from(-4).decimal(), "-4");
    /// ```
    pub fn decimal(&self) -> String {
        const DIGITS: u32 = 6;
        if self.is_zero() {
            return "0".to_string();
        }
        let (num, den) = self.into_parts();
        let negative = num.is_negative();
        let num = num.abs();

        // Order of magnitude e: 10^e <= |x| < 10^(e+1).
        let mut e: i64 = 0;
        let ten = BigInt::from(10);
        if num >= den {
            let mut scaled = den.clone();
            while &scaled * &ten <= num {
                scaled *= &ten;
                e += 1;
            }
        } else {
            let mut scaled = num.clone();
            loop {
                scaled *= &ten;
                e -= 1;
                if scaled >= den {
                    break;
                }
            }
        }

        // m = round_half_even(|x| * 10^(DIGITS - 1 - e)), a DIGITS-digit integer.
        let shift = DIGITS as i64 - 1 - e;
        let (mut scaled_num, scaled_den) = if shift >= 0 {
            (num * ten.pow(shift as u32), den)
        } else {
            (num, den * ten.pow((-shift) as u32))
        };
        let quot = &scaled_num / &scaled_den;
        let rem = scaled_num - &quot * &scaled_den;
        scaled_num = quot;
        let twice: BigInt = &rem * 2;
        let round_up = match twice.cmp(&scaled_den) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (&scaled_num % 2u8) == BigInt::one(),
        };
        if round_up {
            scaled_num += 1;
        }
        let mut digits = scaled_num.to_string();
        if digits.len() as u32 > DIGITS {
            // Rounding carried into a new leading digit, e.g. 999999.5 -> 1000000.
            digits.truncate(DIGITS as usize);
            e += 1;
        }

        let body = if (-4..=8).contains(&e) {
            if e >= 0 {
                let point = (e + 1) as usize;
                let (int_part, frac_part) = digits.split_at(point.min(digits.len()));
                let mut int_part = int_part.to_string();
                if point > int_part.len() {
                    int_part.push_str(&"0".repeat(point - int_part.len()));
                }
                let frac = frac_part.trim_end_matches('0');
                if frac.is_empty() {
                    int_part
                } else {
                    format!("{int_part}.{frac}")
                }
            } else {
                let zeros = "0".repeat((-e - 1) as usize);
                let frac = format!("{zeros}{digits}");
                let frac = frac.trim_end_matches('0');
                format!("0.{frac}")
            }
        } else {
            let (head, tail) = digits.split_at(1);
            let tail = tail.trim_end_matches('0');
            if tail.is_empty() {
                format!("{head}e{e}")
            } else {
                format!("{head}.{tail}e{e}")
            }
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(Repr::Small { num: v, den: 1 })
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from(v as i64)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                from_i128(a * d + c * b, b * d)
            }
            _ => from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                from_i128(a * d - c * b, b * d)
            }
            _ => from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                from_i128(a * c, b * d)
            }
            _ => from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                from_i128(a * d, b * c)
            }
            _ => from_big(self.to_big() / rhs.to_big()),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
        impl $assign_trait for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                *self = (&*self).$method(&rhs);
            }
        }
        impl $assign_trait<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);
forward_owned_binop!(Div, div, DivAssign, div_assign);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => from_i128(-(*num as i128), *den as i128),
            Repr::Big(b) => from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        // Both sides are canonical, so structural equality suffices.
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{literal}`: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: String,
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Parses `"p"` or `"p/q"` with arbitrary-precision parts; the result is
    /// normalized to lowest terms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| ParseRationalError {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str.parse().map_err(|_| fail("numerator is not an integer"))?;
        let den: BigInt = match den_str {
            Some(d) => d.parse().map_err(|_| fail("denominator is not an integer"))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(fail("denominator is zero"));
        }
        if den.sign() == Sign::Minus {
            return Err(fail("denominator must be positive"));
        }
        Ok(Rational::from_bigint(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small { num, den: 1 } => serializer.serialize_i64(*num),
            _ => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                i64::try_from(v)
                    .map(Rational::from)
                    .or_else(|_| Ok(Rational::from_bigint(v.into(), BigInt::one())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not exact; write it as \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(|e: ParseRationalError| E::custom(e.to_string()))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

/// Shorthand used across the crate's tests and examples.
#[macro_export]
macro_rules! rat {
    ($n:literal / $d:literal) => {
        $crate::Rational::new($n, $d)
    };
    ($n:expr) => {
        $crate::Rational::from($n as i64)
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_equality() {
        assert_eq!(Rational::new(3, 6), Rational::new(1, 2));
        assert_eq!(Rational::new(-3, 6), Rational::new(3, -6));
        assert_eq!(Rational::new(0, 7), Rational::zero());
        assert_eq!(Rational::new(-4, 2).to_string(), "-2");
    }

    #[test]
    fn arithmetic_stays_exact() {
        let a = rat!(1 / 3);
        let b = rat!(1 / 6);
        assert_eq!(&a + &b, rat!(1 / 2));
        assert_eq!(&a - &b, rat!(1 / 6));
        assert_eq!(&a * &b, rat!(1 / 18));
        assert_eq!(&a / &b, rat!(2));
        assert_eq!((-rat!(5 / 7)).abs(), rat!(5 / 7));
    }

    #[test]
    fn big_promotion_round_trips() {
        // 2^80 does not fit i64; arithmetic must spill and stay exact.
        let big: Rational = "1208925819614629174706176".parse().unwrap();
        let one = Rational::one();
        let x = &big + &one;
        assert_eq!(&x - &one, big);
        let half = &one / &Rational::from(2);
        let y = &big * &half;
        assert_eq!(&y + &y, big);
    }

    #[test]
    fn ordering_crosses_representations() {
        let big: Rational = "36893488147419103232".parse().unwrap(); // 2^65
        assert!(big > Rational::from(i64::MAX));
        assert!(Rational::new(-1, 2) < Rational::zero());
        assert!(rat!(2 / 3) < rat!(3 / 4));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/6".parse::<Rational>().unwrap().to_string(), "1/2");
        assert_eq!("-10/4".parse::<Rational>().unwrap().to_string(), "-5/2");
        assert_eq!("42".parse::<Rational>().unwrap().to_string(), "42");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_six_significant_digits() {
        assert_eq!(rat!(1 / 3).decimal(), "0.333333");
        assert_eq!(rat!(2 / 3).decimal(), "0.666667");
        assert_eq!(rat!(1 / 2).decimal(), "0.5");
        assert_eq!(rat!(100).decimal(), "100");
        assert_eq!(rat!(-1 / 8).decimal(), "-0.125");
        assert_eq!(Rational::new(15, 10_000_000).decimal(), "1.5e-6");
        // Ties at the sixth digit go to the even neighbour.
        assert_eq!(Rational::new(1_000_005, 1_000_000).decimal(), "1");
        assert_eq!(Rational::new(1_000_015, 1_000_000).decimal(), "1.00002");
    }

    #[test]
    fn serde_integer_and_string_forms() {
        let v: Vec<Rational> = serde_json::from_str(r#"[3, "1/2", "-7/3"]"#).unwrap();
        assert_eq!(v, vec![rat!(3), rat!(1 / 2), rat!(-7 / 3)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[3,"1/2","-7/3"]"#);
        assert!(serde_json::from_str::<Rational>("0.5").is_err());
    }
}
