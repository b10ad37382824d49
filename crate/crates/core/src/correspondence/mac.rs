//! Maximal-and-critical leaves and their co-roots.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::circle::{Angle, Arc};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::{find_crossing, Leaf, Polygon};
use crate::orbits::{classify, is_rotational_set, periodic_orbit, OrbitClass};
use crate::pullback::{leaf_orbit, mac_attachment};

use super::strip::{endcaps, sibling_portrait};

/// A MAC leaf with its minor, period, orbit type and co-roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MacData {
    pub degree: u32,
    pub major: Leaf,
    pub minor: Leaf,
    /// Period of the endpoints: the first return of the central gap.
    pub period: usize,
    /// First return of the leaf as a set.
    pub leaf_period: usize,
    pub orbit_class: OrbitClass,
    /// Endpoint of the major carrying the attached all-critical polygon.
    pub attachment: Angle,
    pub coroots: Vec<Angle>,
}

/// Distance of a length from critical length `1/d`.
fn critical_gap(d: u32, l: &Leaf) -> Frac {
    l.length().abs_diff(&Frac::recip(d as u64))
}

/// Orbit type of a major: rotational when the endpoint orbits together form
/// a rotational set, otherwise the classification of the leaf itself.
pub fn mac_orbit_class(d: u32, m: &Leaf) -> Result<OrbitClass> {
    let mut pts: BTreeSet<Angle> = BTreeSet::new();
    for e in [m.a(), m.b()] {
        pts.extend(periodic_orbit(d, e).ok_or(LamError::NotPeriodic(0))?);
    }
    let pts: Vec<Angle> = pts.into_iter().collect();
    if let Some(rho) = is_rotational_set(d, &pts) {
        if !rho.is_zero() {
            return Ok(OrbitClass::Rotational(rho));
        }
    }
    classify(d, &Polygon::from_leaf(m), 4096)
}

/// Checks the MAC conditions on `m` and assembles its data, explaining the
/// first condition that fails.
pub fn mac_data(d: u32, m: &Leaf) -> Result<MacData> {
    let not = |why: &str| LamError::NotMac(format!("{m} ({why})"));
    if d < 2 {
        return Err(LamError::InvalidDegree(d));
    }
    let (Some(pa), Some(pb)) = (m.a().period(d), m.b().period(d)) else {
        return Err(not("not periodic"));
    };
    if m.length() >= Frac::recip(d as u64) {
        return Err(not("not shorter than critical length"));
    }
    let orbit = leaf_orbit(d, m)?;
    if find_crossing(orbit.iter()).is_some() {
        return Err(not("orbit crosses itself"));
    }
    let gap = critical_gap(d, m);
    if orbit.iter().any(|l| critical_gap(d, l) < gap) {
        return Err(not("an orbit leaf is closer to critical length"));
    }
    let attachment = mac_attachment(d, m)?.ok_or_else(|| not("no compatible critical polygon"))?;
    // Ties: the smallest leaf admitting an attachment is the major.
    for l in &orbit {
        if l < m && critical_gap(d, l) == gap && mac_attachment(d, l)?.is_some() {
            return Err(not("tied with a smaller major"));
        }
    }
    let orbit_class = mac_orbit_class(d, m)?;
    if orbit_class == OrbitClass::NotPeriodic {
        return Err(not("orbit is neither rotational nor a return orbit"));
    }
    let mut data = MacData {
        degree: d,
        major: m.clone(),
        minor: m.image_leaf(d),
        period: num_integer::lcm(pa, pb),
        leaf_period: orbit.len(),
        orbit_class,
        attachment,
        coroots: Vec::new(),
    };
    if matches!(
        orbit_class,
        OrbitClass::IdentityReturn | OrbitClass::Rotational(_)
    ) {
        data.coroots = coroots(d, &data)?;
    }
    Ok(data)
}

/// The MAC data of `m`, or `None` if `m` is not MAC.
pub fn is_mac(d: u32, m: &Leaf) -> Option<MacData> {
    mac_data(d, m).ok()
}

/// `true` when `t` lies on the closed counterclockwise arc from `s` to `e`.
fn on_arc(s: &Angle, e: &Angle, t: &Angle) -> bool {
    Arc::new(s.clone(), e.clone()).contains_closed(t)
}

/// The `d - 2` co-roots: in each endcap not adjacent to the major, the
/// point fixed by `sigma^n` whose first `n - 1` images follow the orbit of
/// the central gap.
pub fn coroots(d: u32, mac: &MacData) -> Result<Vec<Angle>> {
    let n = mac.period;
    let den = BigUint::from(d).pow(n as u32) - BigUint::one();
    let den = den
        .to_u64()
        .ok_or_else(|| LamError::Unsupported(format!("period {n} too large for degree {d}")))?;
    let sp = sibling_portrait(d, &mac.major)?;
    let (a, b) = (mac.major.a(), mac.major.b());
    // For 0 < i < n the i-th image of the central gap lies in a single
    // sector of the attached critical polygon (the one holding sigma^i(M)),
    // on the arc from sigma^i(b) to sigma^i(a). A periodic point with that
    // itinerary is unique.
    let step = Frac::recip(d as u64);
    let sector_arcs: Vec<(Angle, Angle)> = (0..d as u64)
        .map(|k| {
            (
                mac.attachment.rotate(&step.mul_u64(k)),
                mac.attachment.rotate(&step.mul_u64(k + 1)),
            )
        })
        .collect();
    let mut itinerary = Vec::with_capacity(n);
    for i in 1..n {
        let (ai, bi) = (a.sigma_n(d, i), b.sigma_n(d, i));
        let k = sector_arcs
            .iter()
            .position(|(s, e)| on_arc(s, e, &ai) && on_arc(s, e, &bi))
            .ok_or_else(|| {
                LamError::CoRoot(format!("image {i} of {} spans two sectors", mac.major))
            })?;
        itinerary.push((bi, ai, k));
    }
    let follows_gap = |c: &Angle| {
        itinerary.iter().enumerate().all(|(i, (bi, ai, k))| {
            let t = c.sigma_n(d, i + 1);
            let (s, e) = &sector_arcs[*k];
            on_arc(bi, ai, &t) && on_arc(s, e, &t)
        })
    };
    let mut out = Vec::new();
    for cap in endcaps(&sp).into_iter().filter(|c| !c.adjacent_to_major) {
        let found: Vec<Angle> = grid_points_inside(&cap.interval, den)
            .into_iter()
            .filter(|c| follows_gap(c))
            .collect();
        if found.len() != 1 {
            return Err(LamError::CoRoot(format!(
                "endcap [{}, {}] of {} holds {} candidates",
                cap.interval.start,
                cap.interval.end,
                mac.major,
                found.len()
            )));
        }
        out.extend(found);
    }
    Ok(out)
}

/// Points `k/den` strictly inside the arc.
fn grid_points_inside(arc: &Arc, den: u64) -> Vec<Angle> {
    let len = arc.length();
    let start = arc.start.as_frac();
    // First grid index strictly after the start.
    let s = start.mul_u64(den);
    let (sn, sd) = s.to_u64_pair().expect("small grid");
    let mut k = sn / sd + 1;
    let mut out = Vec::new();
    loop {
        let t = Frac::new(k, den).fract();
        let off = arc.start.ccw_to(&Angle::from_frac(&t));
        if off.is_zero() || off >= len {
            break;
        }
        out.push(Angle::from_frac(&t));
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::RotationNumber;

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn mac_examples() {
        let m = is_mac(2, &leaf(2, 7, 5, 7)).unwrap();
        assert_eq!(m.minor, leaf(3, 7, 4, 7));
        assert_eq!(m.period, 3);
        assert_eq!(m.orbit_class, OrbitClass::IdentityReturn);
        assert!(m.coroots.is_empty());

        let m = is_mac(3, &leaf(1, 8, 3, 8)).unwrap();
        assert_eq!(m.orbit_class, OrbitClass::Rotational(RotationNumber { p: 1, q: 2 }));
        assert_eq!(m.period, 2);
        assert_eq!(m.coroots, vec![Angle::new(3, 4)]);

        assert!(is_mac(4, &leaf(4, 15, 8, 15)).is_none());
        assert!(is_mac(2, &leaf(3, 7, 4, 7)).is_none());
        let rabbit = is_mac(2, &leaf(1, 7, 4, 7)).unwrap();
        assert_eq!(rabbit.orbit_class, OrbitClass::Rotational(RotationNumber { p: 1, q: 3 }));
        assert!(is_mac(2, &leaf(1, 3, 2, 3)).is_some());
    }

    #[test]
    fn grid_points() {
        let arc = Arc::new(Angle::new(17, 24), Angle::new(19, 24));
        assert_eq!(grid_points_inside(&arc, 8), vec![Angle::new(3, 4)]);
        let arc = Arc::new(Angle::new(7, 8), Angle::new(1, 8));
        assert_eq!(grid_points_inside(&arc, 4), vec![Angle::zero()]);
        let arc = Arc::new(Angle::new(1, 4), Angle::new(1, 2));
        assert!(grid_points_inside(&arc, 4).is_empty());
    }
}
