//! Symmetric critical-major polygons and the two directions of the MAC/SCM
//! correspondence.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::circle::Angle;
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::{Leaf, Polygon};
use crate::orbits::{classify, forward_orbit, periodic_orbit, OrbitClass};
use crate::pullback::{
    is_maximal_sector, leaf_orbit, major_chain, scm_guiding_chords, sectors, CriticalPortrait,
    PullbackResult,
};

use super::mac::{mac_data, MacData};

/// An SCM polygon with its chain of `d - 1` adjacent majors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScmData {
    pub degree: u32,
    pub polygon: Polygon,
    /// Major sides in counterclockwise order along the chain.
    pub majors: Vec<Leaf>,
    /// Joins the free ends of the major chain.
    pub chain_chord: Leaf,
    pub guiding_chords: Vec<Leaf>,
    pub orbit_class: OrbitClass,
    pub period: usize,
}

/// Smallest deficit `|1/d - side arc|` over the sides of `p`.
fn closest_approach(d: u32, p: &Polygon) -> Frac {
    let step = Frac::recip(d as u64);
    p.side_arcs()
        .iter()
        .map(|a| a.abs_diff(&step))
        .min()
        .expect("at least one side")
}

/// Checks the SCM conditions on `p`, explaining the first that fails.
pub fn scm_data(d: u32, p: &Polygon) -> Result<ScmData> {
    let not = |why: String| LamError::NotScm(format!("{p}: {why}"));
    if d < 2 {
        return Err(LamError::InvalidDegree(d));
    }
    if p.len() < 2 {
        return Err(not("fewer than two vertices".into()));
    }
    let orbit_class = classify(d, p, 4096)?;
    if !matches!(
        orbit_class,
        OrbitClass::IdentityReturn | OrbitClass::Rotational(_)
    ) {
        return Err(not(format!("orbit type {orbit_class}")));
    }
    let step = Frac::recip(d as u64);
    let arcs = p.side_arcs();
    if d > 2 && arcs.iter().any(|a| *a > step && *a >= Frac::recip(d as u64 - 1)) {
        return Err(not("a side reaches 1/(d-1)".into()));
    }
    if !arcs.iter().any(|a| *a < step) {
        return Err(not("no side shorter than 1/d".into()));
    }
    let chain = major_chain(d, p)?;
    let guiding = scm_guiding_chords(d, p)?;
    let portrait = CriticalPortrait::new(d, guiding.clone())
        .map_err(|e| not(format!("guiding chords: {e}")))?;
    let in_maximal = sectors(&portrait)?.iter().any(|s| {
        is_maximal_sector(&portrait, s)
            && p.vertices()
                .iter()
                .all(|v| s.arcs.iter().any(|a| a.contains_closed(v)))
    });
    if !in_maximal {
        return Err(not("not inside a maximal critical sector".into()));
    }
    let info = forward_orbit(d, p, 4096)?;
    let here = closest_approach(d, p);
    if info.orbit[1..].iter().any(|q| closest_approach(d, q) <= here) {
        return Err(not("an orbit polygon comes closer to critical length".into()));
    }
    let chain_chord = Leaf::new(chain[0].1.clone(), chain[chain.len() - 1].2.clone())?;
    Ok(ScmData {
        degree: d,
        polygon: p.clone(),
        majors: chain.into_iter().map(|(l, _, _)| l).collect(),
        chain_chord,
        guiding_chords: portrait.chords().to_vec(),
        orbit_class,
        period: info.vertex_period,
    })
}

pub fn is_scm(d: u32, p: &Polygon) -> Option<ScmData> {
    scm_data(d, p).ok()
}

/// The SCM polygon of a MAC leaf: the major's endpoints with the co-roots
/// (identity return), or the orbits of both (rotational).
pub fn mac_to_scm(d: u32, mac: &MacData) -> Result<ScmData> {
    let mut verts: BTreeSet<Angle> = BTreeSet::new();
    match mac.orbit_class {
        OrbitClass::IdentityReturn => {
            verts.insert(mac.major.a().clone());
            verts.insert(mac.major.b().clone());
            verts.extend(mac.coroots.iter().cloned());
        }
        OrbitClass::Rotational(_) => {
            for t in [mac.major.a(), mac.major.b()]
                .into_iter()
                .chain(mac.coroots.iter())
            {
                verts.extend(periodic_orbit(d, t).ok_or(LamError::NotPeriodic(0))?);
            }
        }
        other => {
            return Err(LamError::Unsupported(format!(
                "correspondence for orbit type {other}"
            )))
        }
    }
    let p = Polygon::new(verts.into_iter().collect())?;
    scm_data(d, &p)
}

/// The MAC leaf recovered from an SCM polygon: the chord joining the free
/// ends of its major chain.
pub fn scm_to_mac(d: u32, scm: &ScmData) -> Result<MacData> {
    mac_data(d, &scm.chain_chord)
}

/// Compares a MAC lamination with an SCM lamination at depth `n` after
/// removing from the latter the grand orbit of the polygon sides other than
/// the major: a leaf of depth `t` is kept when `sigma^t` takes it into the
/// orbit of the major.
pub fn lamination_equal_at_depth(
    mac: &PullbackResult,
    scm: &PullbackResult,
    major: &Leaf,
    n: usize,
) -> Result<bool> {
    let d = mac.lamination.degree();
    if scm.lamination.degree() != d {
        return Ok(false);
    }
    let m_orbit: BTreeSet<Leaf> = leaf_orbit(d, major)?.into_iter().collect();
    let lhs: BTreeSet<&Leaf> = mac
        .lamination
        .leaves()
        .filter(|(_, t)| *t <= n)
        .map(|(l, _)| l)
        .collect();
    // A leaf of depth t lands in the orbit after t steps exactly when its
    // image (of depth t - 1) does; settle depths in increasing order.
    let mut by_depth: Vec<Vec<&Leaf>> = vec![Vec::new(); n + 1];
    for (l, t) in scm.lamination.leaves() {
        if t <= n {
            by_depth[t].push(l);
        }
    }
    let mut lands: HashSet<&Leaf> = by_depth[0]
        .iter()
        .copied()
        .filter(|l| m_orbit.contains(*l))
        .collect();
    for layer in &by_depth[1..] {
        let hits: Vec<&Leaf> = layer
            .iter()
            .copied()
            .filter(|l| !l.is_critical(d) && lands.contains(&l.image_leaf(d)))
            .collect();
        lands.extend(hits);
    }
    let rhs: BTreeSet<&Leaf> = lands.into_iter().collect();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::mac::is_mac;
    use crate::pullback::{canonical_mac_lamination, canonical_scm_lamination};

    fn poly(pts: &[(u64, u64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(n, d)| Angle::new(n, d)).collect()).unwrap()
    }

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn scm_examples() {
        let quad = poly(&[(1, 8), (1, 4), (3, 8), (3, 4)]);
        let s = is_scm(3, &quad).unwrap();
        assert_eq!(s.majors, vec![leaf(3, 8, 3, 4), leaf(3, 4, 1, 8)]);
        assert_eq!(s.chain_chord, leaf(1, 8, 3, 8));
        assert!(is_scm(3, &poly(&[(1, 26), (3, 26), (9, 26)])).is_none());
        let digon = poly(&[(2, 7), (5, 7)]);
        assert_eq!(is_scm(2, &digon).unwrap().chain_chord, leaf(2, 7, 5, 7));
    }

    #[test]
    fn correspondence_examples() {
        let mac = is_mac(3, &leaf(1, 8, 3, 8)).unwrap();
        let scm = mac_to_scm(3, &mac).unwrap();
        assert_eq!(scm.polygon, poly(&[(1, 8), (1, 4), (3, 8), (3, 4)]));
        assert_eq!(scm_to_mac(3, &scm).unwrap(), mac);

        let mac = is_mac(2, &leaf(2, 7, 5, 7)).unwrap();
        let scm = mac_to_scm(2, &mac).unwrap();
        assert_eq!(scm.polygon, poly(&[(2, 7), (5, 7)]));
        assert_eq!(scm_to_mac(2, &scm).unwrap().major, leaf(2, 7, 5, 7));
    }

    #[test]
    fn laminations_agree() {
        for (d, m) in [(2, leaf(2, 7, 5, 7)), (3, leaf(1, 8, 3, 8)), (2, leaf(1, 7, 4, 7))] {
            let mac = is_mac(d, &m).unwrap();
            let scm = mac_to_scm(d, &mac).unwrap();
            let a = canonical_mac_lamination(d, &m, 4).unwrap();
            let b = canonical_scm_lamination(d, &scm.polygon, 4).unwrap();
            assert!(lamination_equal_at_depth(&a, &b, &m, 4).unwrap(), "{m}");
        }
        let a = canonical_mac_lamination(2, &leaf(2, 7, 5, 7), 3).unwrap();
        let b = canonical_mac_lamination(2, &leaf(1, 3, 2, 3), 3).unwrap();
        assert!(!lamination_equal_at_depth(&a, &b, &leaf(2, 7, 5, 7), 3).unwrap());
    }
}
