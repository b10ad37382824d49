//! Points of the circle `R/Z` as exact fractions, the angle d-tupling map,
//! arcs, circular order and base-d expansions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LamError, Result};
use crate::frac::Frac;

/// A rational point of the circle, stored in lowest terms in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(Frac);

impl Angle {
    pub fn zero() -> Self {
        Angle(Frac::zero())
    }

    /// `(p mod q) / q` for machine-sized inputs.
    pub fn from_fraction(p: i64, q: i64) -> Result<Self> {
        Self::from_big(&BigInt::from(p), &BigInt::from(q))
    }

    /// `(p mod q) / q` for arbitrary integers.
    pub fn from_big(p: &BigInt, q: &BigInt) -> Result<Self> {
        Ok(Angle(Frac::from_signed_mod1(p, q)?))
    }

    /// `n / d` for `0 <= n < d`; panics otherwise. Intended for literals.
    pub fn new(n: u64, d: u64) -> Self {
        assert!(n < d, "angle {n}/{d} outside [0,1)");
        Angle(Frac::new(n, d))
    }

    /// Wraps a fraction modulo one.
    pub fn from_frac(f: &Frac) -> Self {
        Angle(f.fract())
    }

    pub fn as_frac(&self) -> &Frac {
        &self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom()
    }

    /// `d * t mod 1`.
    pub fn sigma(&self, d: u32) -> Angle {
        Angle(self.0.mul_u64(d as u64).fract())
    }

    /// `sigma_d` applied `n` times.
    pub fn sigma_n(&self, d: u32, n: usize) -> Angle {
        let mut t = self.clone();
        for _ in 0..n {
            t = t.sigma(d);
        }
        t
    }

    /// The `d` preimages `(t + j) / d`, in counterclockwise order.
    pub fn preimages(&self, d: u32) -> Vec<Angle> {
        (0..d as u64)
            .map(|j| Angle(self.0.add(&Frac::new(j, 1)).div_u64(d as u64)))
            .collect()
    }

    /// The angle rotated counterclockwise by `by`.
    pub fn rotate(&self, by: &Frac) -> Angle {
        Angle(self.0.add(by).fract())
    }

    /// The angle rotated clockwise by `by`.
    pub fn rotate_back(&self, by: &Frac) -> Angle {
        let by = by.fract();
        match self.0.checked_sub(&by) {
            Some(x) => Angle(x),
            None => Angle(self.0.add(&Frac::one()).checked_sub(&by).expect("wrapped")),
        }
    }

    /// Counterclockwise arc length from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> Frac {
        match other.0.checked_sub(&self.0) {
            Some(x) => x,
            None => other.0.add(&Frac::one()).checked_sub(&self.0).expect("wrapped"),
        }
    }

    /// Distance along the circle (the shorter way round).
    pub fn circle_distance(&self, other: &Angle) -> Frac {
        let a = self.ccw_to(other);
        let b = other.ccw_to(self);
        a.min(b)
    }

    /// True when `sigma_d^n` fixes this angle.
    pub fn is_fixed_by(&self, d: u32, n: usize) -> bool {
        self.sigma_n(d, n) == *self
    }

    /// True when the angle is periodic under `sigma_d`, i.e. its denominator is
    /// coprime to `d`.
    pub fn is_periodic(&self, d: u32) -> bool {
        use num_integer::Integer;
        self.denom().gcd(&BigUint::from(d)).is_one()
    }

    /// Least `n >= 1` with `sigma_d^n(t) = t`, or `None` for strictly
    /// preperiodic angles.
    pub fn period(&self, d: u32) -> Option<usize> {
        if !self.is_periodic(d) {
            return None;
        }
        let mut t = self.sigma(d);
        let mut n = 1;
        while t != *self {
            t = t.sigma(d);
            n += 1;
        }
        Some(n)
    }

    /// Approximate position in turns, for rendering only.
    pub fn to_f64(&self) -> f64 {
        match self.0.to_u64_pair() {
            Some((n, d)) => n as f64 / d as f64,
            None => {
                let n = self.numer().to_f64().unwrap_or(0.0);
                let d = self.denom().to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Angle {
    type Err = LamError;

    /// Strict parse: the fraction must be reduced and lie in `[0, 1)`.
    fn from_str(s: &str) -> Result<Self> {
        let f = Frac::parse_reduced(s)?;
        if f >= Frac::one() {
            return Err(LamError::OutOfRange(s.trim().to_string()));
        }
        Ok(Angle(f))
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        Err(LamError::InvalidDegree(d))
    } else {
        Ok(())
    }
}

/// `(p mod q) / q` in lowest terms.
pub fn angle_from_fraction(p: i64, q: i64) -> Result<Angle> {
    Angle::from_fraction(p, q)
}

/// The angle d-tupling map `t -> d t mod 1`.
pub fn sigma(d: u32, t: &Angle) -> Result<Angle> {
    check_degree(d)?;
    Ok(t.sigma(d))
}

/// Counterclockwise length from `a` to `b`.
pub fn arc_length(a: &Angle, b: &Angle) -> Frac {
    a.ccw_to(b)
}

/// True iff travelling counterclockwise from `a` one meets `b` strictly
/// before `c`.
pub fn ccw_order(a: &Angle, b: &Angle, c: &Angle) -> Result<bool> {
    if a == b || b == c || a == c {
        return Err(LamError::RepeatedPoints(format!("{a}, {b}, {c}")));
    }
    Ok(a.ccw_to(b) < a.ccw_to(c))
}

/// A counterclockwise arc of the circle from `start` to `end`.
///
/// Membership uses the half-open convention `[start, end)`; an arc with
/// `start == end` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
}

impl Arc {
    pub fn new(start: Angle, end: Angle) -> Self {
        Arc { start, end }
    }

    pub fn length(&self) -> Frac {
        self.start.ccw_to(&self.end)
    }

    /// `t` in `[start, end)`.
    pub fn contains(&self, t: &Angle) -> bool {
        self.start.ccw_to(t) < self.length()
    }

    /// `t` in the closed arc `[start, end]`.
    pub fn contains_closed(&self, t: &Angle) -> bool {
        self.start.ccw_to(t) <= self.length()
    }

    /// `t` in the open arc `(start, end)`.
    pub fn contains_open(&self, t: &Angle) -> bool {
        let x = self.start.ccw_to(t);
        !x.is_zero() && x < self.length()
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// An eventually periodic base-`d` expansion `0.preperiod (period)^inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnaryExpansion {
    pub base: u32,
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl DnaryExpansion {
    pub fn new(base: u32, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        check_degree(base)?;
        if period.is_empty() {
            return Err(LamError::Parse("empty period".into()));
        }
        if let Some(&digit) = preperiod.iter().chain(&period).find(|&&g| g >= base) {
            return Err(LamError::InvalidDigit { digit, base });
        }
        Ok(DnaryExpansion {
            base,
            preperiod,
            period,
        })
    }

    /// Parses the `preperiod_period` notation, e.g. `"1_0"` or `"_01"`.
    pub fn parse(base: u32, s: &str) -> Result<Self> {
        let (pre, per) = s
            .split_once('_')
            .ok_or_else(|| LamError::Parse(format!("missing '_' in {s:?}")))?;
        let digits = |part: &str| -> Result<Vec<u32>> {
            part.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| LamError::Parse(format!("bad digit {c:?}")))
                })
                .collect()
        };
        Self::new(base, digits(pre)?, digits(per)?)
    }
}

impl fmt::Display for DnaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digit = |g: &u32| std::char::from_digit(*g, 36).unwrap_or('?');
        let pre: String = self.preperiod.iter().map(digit).collect();
        let per: String = self.period.iter().map(digit).collect();
        write!(f, "{pre}_{per}")
    }
}

fn digits_value(digits: &[u32], base: u32) -> BigUint {
    digits
        .iter()
        .fold(BigUint::zero(), |acc, &g| acc * base + g)
}

/// Value of a base-`d` expansion as an exact angle (a period of all `d-1`
/// digits wraps to the next value, modulo one).
pub fn angle_from_dnary(e: &DnaryExpansion) -> Result<Angle> {
    let e = DnaryExpansion::new(e.base, e.preperiod.clone(), e.period.clone())?;
    let d = BigUint::from(e.base);
    let scale = num_traits::pow(d.clone(), e.preperiod.len());
    let cycle = num_traits::pow(d, e.period.len()) - BigUint::one();
    let pre = digits_value(&e.preperiod, e.base);
    let per = digits_value(&e.period, e.base);
    // pre / scale + per / (scale * cycle)
    let num = pre * &cycle + per;
    let den = scale * cycle;
    Ok(Angle::from_frac(&Frac::from_biguint(num, den)))
}

/// The base-`d` expansion of `t` with minimal preperiod and period.
pub fn angle_to_dnary(d: u32, t: &Angle) -> Result<DnaryExpansion> {
    check_degree(d)?;
    let q = t.denom();
    let mut rem = t.numer();
    let mut seen: HashMap<BigUint, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&rem) {
            let period = digits.split_off(start);
            return DnaryExpansion::new(d, digits, period);
        }
        seen.insert(rem.clone(), digits.len());
        let scaled = rem * d;
        let digit = (&scaled / &q).to_u32().expect("digit < base");
        digits.push(digit);
        rem = scaled % &q;
    }
}

/// All `d^n - 1` points fixed by `sigma_d^n`, namely `j / (d^n - 1)`, in
/// counterclockwise order from zero.
pub fn periodic_points(d: u32, n: u32) -> Result<Vec<Angle>> {
    check_degree(d)?;
    if n == 0 {
        return Err(LamError::InvalidArgument("period must be positive".into()));
    }
    let den = (d as u64)
        .checked_pow(n)
        .ok_or_else(|| LamError::InvalidArgument("d^n overflows".into()))?
        - 1;
    Ok((0..den).map(|j| Angle::new(j, den)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u64, d: u64) -> Angle {
        Angle::new(n, d)
    }

    #[test]
    fn from_fraction_reduces_and_wraps() {
        assert_eq!(angle_from_fraction(2, 4).unwrap(), a(1, 2));
        assert_eq!(angle_from_fraction(9, 7).unwrap(), a(2, 7));
        assert_eq!(angle_from_fraction(0, 5).unwrap().to_string(), "0/1");
        assert_eq!(angle_from_fraction(-1, 3).unwrap(), a(2, 3));
        assert_eq!(angle_from_fraction(1, 0), Err(LamError::ZeroDenominator));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(2, &a(1, 3)).unwrap(), a(2, 3));
        assert_eq!(sigma(3, &a(1, 4)).unwrap(), a(3, 4));
        assert_eq!(sigma(4, &a(3, 5)).unwrap(), a(2, 5));
        assert_eq!(sigma(1, &a(1, 3)), Err(LamError::InvalidDegree(1)));
    }

    #[test]
    fn arc_length_examples() {
        assert_eq!(arc_length(&a(1, 4), &a(3, 4)), Frac::new(1, 2));
        assert_eq!(arc_length(&a(3, 4), &a(1, 4)), Frac::new(1, 2));
        assert_eq!(arc_length(&a(6, 7), &a(1, 7)), Frac::new(2, 7));
    }

    #[test]
    fn ccw_order_examples() {
        let z = Angle::zero();
        assert!(ccw_order(&z, &a(1, 3), &a(2, 3)).unwrap());
        assert!(!ccw_order(&z, &a(2, 3), &a(1, 3)).unwrap());
        assert!(ccw_order(&a(6, 7), &a(1, 7), &a(2, 7)).unwrap());
        assert!(ccw_order(&z, &z, &a(1, 3)).is_err());
    }

    #[test]
    fn dnary_examples() {
        let e = DnaryExpansion::parse(2, "_01").unwrap();
        assert_eq!(angle_from_dnary(&e).unwrap(), a(1, 3));
        let e = DnaryExpansion::parse(4, "_1").unwrap();
        assert_eq!(angle_from_dnary(&e).unwrap(), a(1, 3));
        let e = DnaryExpansion::parse(4, "_0").unwrap();
        assert_eq!(angle_from_dnary(&e).unwrap(), Angle::zero());
        assert!(matches!(
            DnaryExpansion::parse(2, "_2"),
            Err(LamError::InvalidDigit { digit: 2, base: 2 })
        ));

        let e = angle_to_dnary(2, &a(1, 3)).unwrap();
        assert_eq!(e.to_string(), "_01");
        let e = angle_to_dnary(4, &a(1, 4)).unwrap();
        assert_eq!((e.preperiod.as_slice(), e.period.as_slice()), (&[1][..], &[0][..]));
        assert_eq!(e.to_string(), "1_0");
        assert_eq!(angle_to_dnary(2, &Angle::zero()).unwrap().to_string(), "_0");
    }

    #[test]
    fn periodic_point_examples() {
        assert_eq!(periodic_points(2, 1).unwrap(), vec![Angle::zero()]);
        assert_eq!(
            periodic_points(2, 2).unwrap(),
            vec![Angle::zero(), a(1, 3), a(2, 3)]
        );
        assert_eq!(periodic_points(3, 1).unwrap(), vec![Angle::zero(), a(1, 2)]);
    }

    #[test]
    fn arcs_are_half_open() {
        let arc = Arc::new(a(1, 3), a(5, 6));
        assert!(arc.contains(&a(1, 3)));
        assert!(!arc.contains(&a(5, 6)));
        assert!(arc.contains_closed(&a(5, 6)));
        assert!(!arc.contains_open(&a(1, 3)));
        let wrap = Arc::new(a(5, 6), a(1, 3));
        assert!(wrap.contains(&Angle::zero()));
        assert!(Arc::new(a(1, 3), a(1, 3)).length().is_zero());
    }

    #[test]
    fn periods() {
        assert_eq!(a(1, 7).period(2), Some(3));
        assert_eq!(a(1, 4).period(2), None);
        assert_eq!(a(3, 4).period(3), Some(2));
        assert!(a(1, 8).is_fixed_by(3, 2));
    }
}
