//! Forward orbits of polygons, rotation numbers and orbit classification.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circle::Angle;
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::{image_length, Polygon};

/// The forward orbit of a polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub preperiod: usize,
    /// First `n` with every vertex of the periodic part fixed by `sigma^n`.
    pub vertex_period: usize,
    /// First return of the polygon as a set.
    pub object_period: usize,
    /// `P_0, P_1, ...` up to (not including) the first repeat.
    pub orbit: Vec<Polygon>,
}

impl OrbitInfo {
    /// The periodic cycle of polygons.
    pub fn cycle(&self) -> &[Polygon] {
        &self.orbit[self.preperiod..]
    }
}

/// Iterates `p` until its vertex set repeats.
pub fn forward_orbit(d: u32, p: &Polygon, max_iter: usize) -> Result<OrbitInfo> {
    if d < 2 {
        return Err(LamError::InvalidDegree(d));
    }
    if max_iter == 0 {
        return Err(LamError::InvalidArgument("max_iter must be positive".into()));
    }
    let mut seen: HashMap<Polygon, usize> = HashMap::new();
    let mut orbit: Vec<Polygon> = Vec::new();
    let mut cur = p.clone();
    for step in 0..=max_iter {
        if let Some(&m) = seen.get(&cur) {
            let r = step - m;
            let vertex_period = orbit[m]
                .vertices()
                .iter()
                .map(|v: &Angle| v.period(d).unwrap_or(r))
                .fold(1usize, |acc, k| acc.lcm(&k));
            return Ok(OrbitInfo {
                preperiod: m,
                vertex_period,
                object_period: r,
                orbit,
            });
        }
        seen.insert(cur.clone(), step);
        let next = cur
            .image(d)
            .ok_or(LamError::CriticalCollapse { step: step + 1 })?;
        orbit.push(cur);
        cur = next;
    }
    Err(LamError::NotPeriodic(max_iter))
}

/// A rational rotation number `p/q` in lowest terms, `0 <= p/q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationNumber {
    pub p: u64,
    pub q: u64,
}

impl RotationNumber {
    /// `s / k`, reduced.
    pub fn new(s: u64, k: u64) -> Self {
        assert!(k > 0 && s < k, "rotation number out of range");
        let g = s.gcd(&k);
        RotationNumber { p: s / g, q: k / g }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn as_frac(&self) -> Frac {
        Frac::new(self.p, self.q)
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RotationNumber {
    type Err = LamError;

    fn from_str(s: &str) -> Result<Self> {
        let f = Frac::parse_reduced(s)?;
        match f.to_u64_pair() {
            Some((p, q)) if p < q || (p == 0 && q == 1) => Ok(RotationNumber { p, q }),
            _ => Err(LamError::OutOfRange(s.to_string())),
        }
    }
}

/// Index shift of `f` on the sorted set `pts`, if `f` permutes the set with
/// a constant shift.
fn constant_shift<F: Fn(&Angle) -> Angle>(pts: &[Angle], f: F) -> Option<u64> {
    let k = pts.len();
    let mut shift = None;
    for (j, x) in pts.iter().enumerate() {
        let i = pts.binary_search(&f(x)).ok()?;
        let s = (i + k - j) % k;
        match shift {
            None => shift = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    shift.map(|s| s as u64)
}

fn sorted_unique(s: &[Angle]) -> Option<Vec<Angle>> {
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    (v.len() == s.len() && !v.is_empty()).then_some(v)
}

/// The rotation number of `s` when `sigma_d` maps the set onto itself
/// preserving circular order; `None` otherwise.
pub fn is_rotational_set(d: u32, s: &[Angle]) -> Option<RotationNumber> {
    let pts = sorted_unique(s)?;
    let shift = constant_shift(&pts, |x| x.sigma(d))?;
    Some(RotationNumber::new(shift, pts.len() as u64))
}

/// Rotation number of a single rotational periodic orbit.
pub fn rotation_number(d: u32, o: &[Angle]) -> Result<RotationNumber> {
    let bad = || LamError::InvalidForwardSet(format!("{o:?} is not a rotational orbit"));
    let rho = is_rotational_set(d, o).ok_or_else(bad)?;
    // A single orbit: the cycle through the first point covers the set.
    let period = o[0].period(d).ok_or_else(bad)?;
    if period != o.len() {
        return Err(bad());
    }
    Ok(rho)
}

/// Orbit type of a periodic polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    Fixed,
    Rotational(RotationNumber),
    RotationReturn(RotationNumber),
    IdentityReturn,
    NotPeriodic,
}

impl OrbitClass {
    pub fn tag(&self) -> &'static str {
        match self {
            OrbitClass::Fixed => "Fixed",
            OrbitClass::Rotational(_) => "Rotational",
            OrbitClass::RotationReturn(_) => "RotationReturn",
            OrbitClass::IdentityReturn => "IdentityReturn",
            OrbitClass::NotPeriodic => "NotPeriodic",
        }
    }

    pub fn rotation(&self) -> Option<RotationNumber> {
        match self {
            OrbitClass::Rotational(r) | OrbitClass::RotationReturn(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rotation() {
            Some(r) => write!(f, "{}({r})", self.tag()),
            None => write!(f, "{}", self.tag()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TaggedClass {
    tag: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rotation: Option<String>,
}

impl Serialize for OrbitClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TaggedClass {
            tag: self.tag().to_string(),
            rotation: self.rotation().map(|r| r.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let t = TaggedClass::deserialize(d)?;
        let rot = || -> std::result::Result<RotationNumber, D::Error> {
            let r = t.rotation.as_deref().ok_or_else(|| D::Error::missing_field("rotation"))?;
            let r: RotationNumber = r.parse().map_err(D::Error::custom)?;
            if r.is_zero() {
                return Err(D::Error::custom("rotation number must be nonzero"));
            }
            Ok(r)
        };
        Ok(match t.tag.as_str() {
            "Fixed" => OrbitClass::Fixed,
            "Rotational" => OrbitClass::Rotational(rot()?),
            "RotationReturn" => OrbitClass::RotationReturn(rot()?),
            "IdentityReturn" => OrbitClass::IdentityReturn,
            "NotPeriodic" => OrbitClass::NotPeriodic,
            other => return Err(D::Error::custom(format!("unknown orbit class {other:?}"))),
        })
    }
}

/// Classifies a polygon by the dynamics of its orbit.
///
/// Orbit polygons that cross each other are an error; anything that is
/// periodic but fits none of the named types is `NotPeriodic`.
pub fn classify(d: u32, p: &Polygon, max_iter: usize) -> Result<OrbitClass> {
    if !p.vertices().iter().all(|v| v.is_periodic(d)) {
        return Ok(OrbitClass::NotPeriodic);
    }
    if p.vertices().iter().all(|v| v.sigma(d) == *v) {
        return Ok(OrbitClass::Fixed);
    }
    let info = match forward_orbit(d, p, max_iter) {
        Ok(i) => i,
        Err(LamError::NotPeriodic(_)) | Err(LamError::CriticalCollapse { .. }) => {
            return Ok(OrbitClass::NotPeriodic)
        }
        Err(e) => return Err(e),
    };
    let r = info.object_period;
    let verts = p.vertices();
    if r == 1 {
        return Ok(match is_rotational_set(d, verts) {
            Some(rho) if !rho.is_zero() => OrbitClass::Rotational(rho),
            _ => OrbitClass::NotPeriodic,
        });
    }
    let orbit = &info.orbit;
    for i in 0..orbit.len() {
        for j in i + 1..orbit.len() {
            if orbit[i].sides_cross(&orbit[j]) {
                return Err(LamError::InvalidForwardSet(format!(
                    "orbit polygons {} and {} cross",
                    orbit[i], orbit[j]
                )));
            }
        }
    }
    let Some(shift) = constant_shift(verts, |x| x.sigma_n(d, r)) else {
        return Ok(OrbitClass::NotPeriodic);
    };
    if shift == 0 {
        let disjoint = (0..orbit.len())
            .all(|i| (i + 1..orbit.len()).all(|j| orbit[i].is_disjoint_from(&orbit[j])));
        let order_kept = orbit.iter().all(|q| preserves_order(q, d));
        if disjoint && order_kept {
            return Ok(OrbitClass::IdentityReturn);
        }
        return Ok(OrbitClass::NotPeriodic);
    }
    if p.is_disjoint_from(&orbit[1]) {
        return Ok(OrbitClass::RotationReturn(RotationNumber::new(
            shift,
            verts.len() as u64,
        )));
    }
    Ok(OrbitClass::NotPeriodic)
}

/// `sigma_d` restricted to the vertices of `q` keeps their circular order.
fn preserves_order(q: &Polygon, d: u32) -> bool {
    let img = q.image_vertices(d);
    let k = img.len();
    if k <= 2 {
        return true;
    }
    let start = (0..k).min_by_key(|&i| &img[i]).expect("non-empty");
    (1..k).all(|i| img[(start + i - 1) % k] < img[(start + i) % k])
}

/// Number of distinct forward orbits among the sides of `p`.
pub fn side_orbit_count(d: u32, p: &Polygon) -> usize {
    let sides = p.sides();
    let mut class: Vec<usize> = (0..sides.len()).collect();
    for (i, s) in sides.iter().enumerate() {
        if class[i] != i {
            continue;
        }
        let mut cur = s.clone();
        // The orbit of a side is periodic with period at most the vertex period.
        let bound = s
            .a()
            .period(d)
            .unwrap_or(1)
            .lcm(&s.b().period(d).unwrap_or(1));
        for _ in 0..bound {
            if cur.is_critical(d) {
                break;
            }
            cur = cur.image_leaf(d);
            for (j, t) in sides.iter().enumerate().skip(i + 1) {
                if *t == cur {
                    class[j] = class[i];
                }
            }
        }
    }
    let mut c = class;
    c.sort();
    c.dedup();
    c.len()
}

/// The degree-`d` form of Kiwi's bound: at most `d` side orbits, and at most
/// `d` sides for an identity-return polygon.
pub fn kiwi_bound_check(d: u32, p: &Polygon, class: OrbitClass) -> bool {
    let d = d as usize;
    if side_orbit_count(d as u32, p) > d {
        return false;
    }
    if class == OrbitClass::IdentityReturn && p.side_pairs().len() > d {
        return false;
    }
    true
}

/// Steps until a leaf of length `len` reaches length `>= 1/(d+1)`.
pub fn growth_steps(d: u32, len: &Frac) -> Result<usize> {
    if len.is_zero() || *len > Frac::new(1, 2) {
        return Err(LamError::OutOfRange(len.to_string()));
    }
    let target = Frac::recip(d as u64 + 1);
    let mut cur = len.clone();
    let mut k = 0;
    while cur < target {
        cur = image_length(d, &cur);
        k += 1;
    }
    Ok(k)
}

/// The periodic orbit of `t` under `sigma_d`, starting at `t`.
pub fn periodic_orbit(d: u32, t: &Angle) -> Option<Vec<Angle>> {
    let n = t.period(d)?;
    let mut out = Vec::with_capacity(n);
    let mut cur = t.clone();
    for _ in 0..n {
        out.push(cur.clone());
        cur = cur.sigma(d);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(u64, u64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(n, d)| Angle::new(n, d)).collect()).unwrap()
    }

    #[test]
    fn forward_orbit_examples() {
        let o = forward_orbit(2, &poly(&[(1, 7), (2, 7), (4, 7)]), 10).unwrap();
        assert_eq!((o.object_period, o.vertex_period, o.preperiod), (1, 3, 0));
        let o = forward_orbit(4, &poly(&[(1, 15), (2, 15)]), 10).unwrap();
        assert_eq!((o.object_period, o.vertex_period), (2, 2));
        let o = forward_orbit(2, &poly(&[(1, 5), (2, 5)]), 10).unwrap();
        assert_eq!((o.object_period, o.vertex_period), (4, 4));
        let o = forward_orbit(2, &poly(&[(1, 6), (1, 3)]), 10).unwrap();
        assert_eq!(o.preperiod, 1);
        assert!(matches!(
            forward_orbit(2, &poly(&[(1, 4), (3, 4)]), 10),
            Err(LamError::CriticalCollapse { step: 1 })
        ));
    }

    #[test]
    fn rotation_examples() {
        let s = [Angle::new(1, 7), Angle::new(2, 7), Angle::new(4, 7)];
        assert_eq!(is_rotational_set(2, &s), Some(RotationNumber { p: 1, q: 3 }));
        assert_eq!(rotation_number(2, &s).unwrap().to_string(), "1/3");
        let s = [Angle::new(1, 7), Angle::new(2, 7), Angle::new(3, 7)];
        assert_eq!(is_rotational_set(2, &s), None);
        assert_eq!(is_rotational_set(3, &[Angle::zero()]), Some(RotationNumber { p: 0, q: 1 }));
        let s = [Angle::new(1, 3), Angle::new(2, 3)];
        assert_eq!(rotation_number(2, &s).unwrap(), RotationNumber { p: 1, q: 2 });
        let s = [Angle::new(1, 8), Angle::new(3, 8)];
        assert_eq!(rotation_number(3, &s).unwrap(), RotationNumber { p: 1, q: 2 });
    }

    #[test]
    fn classify_examples() {
        let tri = poly(&[(1, 7), (2, 7), (4, 7)]);
        assert_eq!(
            classify(2, &tri, 100).unwrap(),
            OrbitClass::Rotational(RotationNumber { p: 1, q: 3 })
        );
        assert_eq!(classify(4, &poly(&[(1, 15), (2, 15)]), 100).unwrap(), OrbitClass::IdentityReturn);
        assert_eq!(classify(3, &poly(&[(0, 1)]), 100).unwrap(), OrbitClass::Fixed);
        assert_eq!(classify(2, &poly(&[(1, 6), (1, 3)]), 100).unwrap(), OrbitClass::NotPeriodic);
    }

    #[test]
    fn class_json_is_tagged() {
        let c = OrbitClass::Rotational(RotationNumber { p: 1, q: 3 });
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"tag":"Rotational","rotation":"1/3"}"#);
        assert_eq!(serde_json::from_str::<OrbitClass>(&s).unwrap(), c);
        let s = serde_json::to_string(&OrbitClass::IdentityReturn).unwrap();
        assert_eq!(s, r#"{"tag":"IdentityReturn"}"#);
    }

    #[test]
    fn kiwi_examples() {
        assert!(kiwi_bound_check(2, &poly(&[(1, 3), (2, 3)]), OrbitClass::IdentityReturn));
        let pent = poly(&[(0, 1), (1, 5), (2, 5), (3, 5), (4, 5)]);
        assert!(!kiwi_bound_check(4, &pent, OrbitClass::IdentityReturn));
        let quad = poly(&[(1, 8), (1, 4), (3, 8), (3, 4)]);
        assert_eq!(side_orbit_count(3, &quad), 2);
        assert!(kiwi_bound_check(3, &quad, classify(3, &quad, 100).unwrap()));
    }

    #[test]
    fn growth_examples() {
        assert_eq!(growth_steps(2, &Frac::new(1, 8)).unwrap(), 2);
        for d in 2..6u32 {
            assert_eq!(growth_steps(d, &Frac::recip(d as u64 + 1)).unwrap(), 0);
        }
        assert_eq!(growth_steps(3, &Frac::new(1, 10)).unwrap(), 1);
    }
}
