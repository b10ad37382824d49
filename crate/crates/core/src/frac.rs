//! Non-negative exact rationals.
//!
//! Values are always stored in lowest terms. Anything whose numerator and
//! denominator fit in a `u64` uses the inline representation, which keeps the
//! catalog sweeps allocation free; larger values spill to `BigUint`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::LamError;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64, u64),
    Big(BigUint, BigUint),
}

/// An exact non-negative rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac(Repr);

impl Frac {
    pub fn zero() -> Self {
        Frac(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Frac(Repr::Small(1, 1))
    }

    /// `n / d`, reduced. Panics on a zero denominator.
    pub fn new(n: u64, d: u64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_u128(n as u128, d as u128)
    }

    /// `1 / d`.
    pub fn recip(d: u64) -> Self {
        Self::new(1, d)
    }

    fn from_u128(n: u128, d: u128) -> Self {
        let g = n.gcd(&d);
        let (n, d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        match (u64::try_from(n), u64::try_from(d)) {
            (Ok(n), Ok(d)) => Frac(Repr::Small(n, d)),
            _ => Frac(Repr::Big(BigUint::from(n), BigUint::from(d))),
        }
    }

    /// `n / d` from big integers, reduced. Panics on a zero denominator.
    pub fn from_biguint(n: BigUint, d: BigUint) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        let g = n.gcd(&d);
        let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
        match (n.to_u64(), d.to_u64()) {
            (Some(n), Some(d)) => Frac(Repr::Small(n, d)),
            _ => Frac(Repr::Big(n, d)),
        }
    }

    pub fn numer(&self) -> BigUint {
        match &self.0 {
            Repr::Small(n, _) => BigUint::from(*n),
            Repr::Big(n, _) => n.clone(),
        }
    }

    pub fn denom(&self) -> BigUint {
        match &self.0 {
            Repr::Small(_, d) => BigUint::from(*d),
            Repr::Big(_, d) => d.clone(),
        }
    }

    /// Numerator and denominator when both fit in a `u64`.
    pub fn to_u64_pair(&self) -> Option<(u64, u64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(..) => None,
        }
    }

    fn big_parts(&self) -> (BigUint, BigUint) {
        match &self.0 {
            Repr::Small(n, d) => (BigUint::from(*n), BigUint::from(*d)),
            Repr::Big(n, d) => (n.clone(), d.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn add(&self, other: &Frac) -> Frac {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &other.0) {
            let (a, b, c, d) = (*a as u128, *b as u128, *c as u128, *d as u128);
            if b == d {
                if let Some(n) = a.checked_add(c) {
                    return Frac::from_u128(n, b);
                }
            } else if let Some(n) = (a * d).checked_add(c * b) {
                if let Some(den) = b.checked_mul(d) {
                    return Frac::from_u128(n, den);
                }
            }
        }
        let (a, b) = self.big_parts();
        let (c, d) = other.big_parts();
        Frac::from_biguint(a * &d + c * &b, b * d)
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Frac) -> Option<Frac> {
        if self < other {
            return None;
        }
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &other.0) {
            let (a, b, c, d) = (*a as u128, *b as u128, *c as u128, *d as u128);
            if let Some(den) = b.checked_mul(d) {
                return Some(Frac::from_u128(a * d - c * b, den));
            }
        }
        let (a, b) = self.big_parts();
        let (c, d) = other.big_parts();
        Some(Frac::from_biguint(a * &d - c * &b, b * d))
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Frac) -> Frac {
        match self.checked_sub(other) {
            Some(x) => x,
            None => other.checked_sub(self).expect("ordered"),
        }
    }

    pub fn mul_u64(&self, k: u64) -> Frac {
        match &self.0 {
            Repr::Small(n, d) => Frac::from_u128(*n as u128 * k as u128, *d as u128),
            Repr::Big(n, d) => Frac::from_biguint(n * k, d.clone()),
        }
    }

    pub fn div_u64(&self, k: u64) -> Frac {
        assert!(k != 0, "division by zero");
        match &self.0 {
            Repr::Small(n, d) => Frac::from_u128(*n as u128, *d as u128 * k as u128),
            Repr::Big(n, d) => Frac::from_biguint(n.clone(), d * k),
        }
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &other.0) {
            return Frac::from_u128(*a as u128 * *c as u128, *b as u128 * *d as u128);
        }
        let (a, b) = self.big_parts();
        let (c, d) = other.big_parts();
        Frac::from_biguint(a * c, b * d)
    }

    /// The fractional part, in `[0, 1)`.
    pub fn fract(&self) -> Frac {
        match &self.0 {
            Repr::Small(n, d) => {
                if n < d {
                    self.clone()
                } else {
                    Frac::from_u128((*n % *d) as u128, *d as u128)
                }
            }
            Repr::Big(n, d) => Frac::from_biguint(n % d, d.clone()),
        }
    }

    /// Parses `p/q` (or a bare integer) without reducing; callers decide
    /// whether an unreduced input is acceptable via [`Frac::parse_reduced`].
    fn parse_parts(s: &str) -> Result<(BigUint, BigUint), LamError> {
        let s = s.trim();
        let bad = || LamError::Parse(format!("invalid fraction {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigUint = n.parse().map_err(|_| bad())?;
        let d: BigUint = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(LamError::ZeroDenominator);
        }
        Ok((n, d))
    }

    /// Parses `p/q`, rejecting fractions that are not in lowest terms.
    pub fn parse_reduced(s: &str) -> Result<Frac, LamError> {
        let (n, d) = Self::parse_parts(s)?;
        if !n.gcd(&d).is_one() && !(n.is_zero() && d.is_one()) {
            return Err(LamError::Unreduced(s.trim().to_string()));
        }
        Ok(Frac::from_biguint(n, d))
    }

    /// Signed `p / q` reduced modulo one, as used by angle construction.
    pub(crate) fn from_signed_mod1(p: &BigInt, q: &BigInt) -> Result<Frac, LamError> {
        if q.is_zero() {
            return Err(LamError::ZeroDenominator);
        }
        let q_abs = q.magnitude().clone();
        let p = if q.sign() == Sign::Minus { -p } else { p.clone() };
        let q_big = BigInt::from(q_abs.clone());
        let r = p.mod_floor(&q_big);
        Ok(Frac::from_biguint(r.magnitude().clone(), q_abs))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
            _ => {
                let (a, b) = self.big_parts();
                let (c, d) = other.big_parts();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(n, d) => write!(f, "{n}/{d}"),
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Frac {
    type Err = LamError;

    /// Accepts any non-negative fraction and reduces it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = Self::parse_parts(s)?;
        Ok(Frac::from_biguint(n, d))
    }
}

impl serde::Serialize for Frac {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Frac {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Frac::parse_reduced(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        assert_eq!(Frac::new(2, 4), Frac::new(1, 2));
        assert_eq!(Frac::new(0, 5), Frac::zero());
        assert_eq!(Frac::new(0, 5).to_string(), "0/1");
    }

    #[test]
    fn arithmetic_spills_to_big_and_back() {
        let big = Frac::new(1, u64::MAX - 58);
        let sq = big.mul(&big);
        assert!(sq.to_u64_pair().is_none());
        let back = sq.mul_u64(u64::MAX - 58);
        assert_eq!(back, big);
        assert_eq!(big.add(&big).checked_sub(&big), Some(big.clone()));
    }

    #[test]
    fn ordering_and_fract() {
        assert!(Frac::new(1, 3) < Frac::new(1, 2));
        assert_eq!(Frac::new(12, 5).fract(), Frac::new(2, 5));
        assert_eq!(Frac::new(1, 7).abs_diff(&Frac::new(2, 7)), Frac::new(1, 7));
        assert_eq!(Frac::new(1, 7).checked_sub(&Frac::new(2, 7)), None);
    }

    #[test]
    fn parse_rejects_unreduced() {
        assert!(matches!(
            Frac::parse_reduced("2/6"),
            Err(LamError::Unreduced(_))
        ));
        assert_eq!(Frac::parse_reduced("0/1").unwrap(), Frac::zero());
        assert!(matches!(
            Frac::parse_reduced("1/0"),
            Err(LamError::ZeroDenominator)
        ));
        assert_eq!("2/6".parse::<Frac>().unwrap(), Frac::new(1, 3));
    }
}
