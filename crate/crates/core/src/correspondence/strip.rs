//! Symmetric sibling portraits, central strips, endcaps and the Central
//! Strip Lemma check.

use serde::Serialize;

use crate::circle::{Angle, Arc};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::{Leaf, Polygon};
use crate::pullback::{all_critical_vertices, mac_attachment};

/// A leaf shorter than `1/d` with its `d - 1` translates by `j/d` and an
/// all-critical `d`-gon attached at one endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiblingPortrait {
    pub degree: u32,
    pub major: Leaf,
    /// `major + j/d` for `j = 1..d`.
    pub siblings: Vec<Leaf>,
    pub attachment: Polygon,
}

impl SiblingPortrait {
    /// The major followed by its siblings: `major + j/d` for `j = 0..d`.
    pub fn translates(&self) -> impl Iterator<Item = &Leaf> {
        std::iter::once(&self.major).chain(self.siblings.iter())
    }
}

pub fn sibling_portrait(d: u32, m: &Leaf) -> Result<SiblingPortrait> {
    let step = Frac::recip(d as u64);
    if m.length() >= step {
        return Err(LamError::InvalidArgument(format!(
            "{m} is not shorter than 1/{d}"
        )));
    }
    let siblings = (1..d as u64)
        .map(|j| m.rotate(&step.mul_u64(j)))
        .collect();
    let at = mac_attachment(d, m)
        .ok()
        .flatten()
        .unwrap_or_else(|| m.a().clone());
    Ok(SiblingPortrait {
        degree: d,
        major: m.clone(),
        siblings,
        attachment: all_critical_vertices(d, &at),
    })
}

/// The region between a leaf and its symmetric siblings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralStrip {
    pub degree: u32,
    pub bounding_leaves: Vec<Leaf>,
    /// `arcs[j]` runs from `b + j/d` to `a + (j+1)/d`.
    pub arcs: Vec<Arc>,
    pub eta: Frac,
}

impl CentralStrip {
    /// `eta < 1/(d(d+1))`.
    pub fn is_narrow(&self) -> bool {
        let d = self.degree as u64;
        self.eta < Frac::recip(d * (d + 1))
    }

    /// Index of the strip arc containing `t` (endpoints included).
    pub fn component_of(&self, t: &Angle) -> Option<usize> {
        self.arcs.iter().position(|a| a.contains_closed(t))
    }

    /// Both endpoints on the strip and not a bounding leaf.
    pub fn contains_leaf(&self, l: &Leaf) -> bool {
        self.component_of(l.a()).is_some()
            && self.component_of(l.b()).is_some()
            && !self.bounding_leaves.contains(l)
    }

    /// Inside the strip with both endpoints in a single component.
    pub fn contains_in_one_component(&self, l: &Leaf) -> bool {
        if !self.contains_leaf(l) {
            return false;
        }
        self.arcs
            .iter()
            .any(|a| a.contains_closed(l.a()) && a.contains_closed(l.b()))
    }
}

pub fn central_strip(sp: &SiblingPortrait) -> CentralStrip {
    strip_of(sp.degree, &sp.major)
}

/// The central strip of `m` and its translates, without building the
/// critical attachment.
pub fn strip_of(d: u32, m: &Leaf) -> CentralStrip {
    let step = Frac::recip(d as u64);
    let (a, b) = (m.a(), m.b());
    let arcs: Vec<Arc> = (0..d as u64)
        .map(|j| {
            Arc::new(
                b.rotate(&step.mul_u64(j)),
                a.rotate(&step.mul_u64(j + 1)),
            )
        })
        .collect();
    let eta = arcs.iter().map(|x| x.length()).max().expect("d >= 2");
    CentralStrip {
        degree: d,
        bounding_leaves: (0..d as u64).map(|j| m.rotate(&step.mul_u64(j))).collect(),
        arcs,
        eta,
    }
}

/// An arc of the circle between a free sibling endpoint and the next vertex
/// of the attached critical polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endcap {
    pub interval: Arc,
    pub adjacent_to_major: bool,
}

/// One endcap per translate, in counterclockwise order starting after the
/// major. Each maps one-to-one onto the arc subtended by the minor on the
/// far side from the critical polygon.
pub fn endcaps(sp: &SiblingPortrait) -> Vec<Endcap> {
    let d = sp.degree as usize;
    central_strip(sp)
        .arcs
        .into_iter()
        .enumerate()
        .map(|(j, interval)| Endcap {
            interval,
            adjacent_to_major: j == 0 || j == d - 1,
        })
        .collect()
}

/// Outcome of checking the three clauses of the Central Strip Lemma along
/// the orbit of a periodic leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CslReport {
    pub leaf: Leaf,
    pub period: usize,
    pub eta: Frac,
    pub narrow: bool,
    /// The first image is outside the strip.
    pub clause1: bool,
    /// The second image does not lie in a single strip component.
    pub clause2: bool,
    /// Every single-component re-entry has a witness.
    pub clause3: bool,
    /// Iterates `j` lying in a single strip component.
    pub reentries: Vec<usize>,
    /// `(j, k)`: re-entry at `j` explained by iterate `k` lying within
    /// `eta / d^(j-k)` of a critical chord in the endpoint metric.
    pub witnesses: Vec<(usize, usize)>,
}

impl CslReport {
    pub fn passed(&self) -> bool {
        self.clause1 && self.clause2 && self.clause3
    }
}

/// Endpoint distance from a leaf to the nearest critical chord: a chord of
/// length `j/d` centred on the leaf is `|len - j/d| / 2` away at each end.
pub fn critical_distance(d: u32, l: &Leaf) -> Frac {
    let len = l.length();
    let step = Frac::recip(d as u64);
    (1..=d as u64 / 2)
        .map(|j| len.abs_diff(&step.mul_u64(j)))
        .min()
        .expect("non-empty")
        .div_u64(2)
}

pub fn csl_check(d: u32, l: &Leaf, max_iter: usize) -> Result<CslReport> {
    let (Some(pa), Some(pb)) = (l.a().period(d), l.b().period(d)) else {
        return Err(LamError::NotPeriodic(0));
    };
    let period = num_integer::lcm(pa, pb);
    if period > max_iter {
        return Err(LamError::NotPeriodic(max_iter));
    }
    if l.length() >= Frac::recip(d as u64) {
        return Err(LamError::InvalidArgument(format!("{l} is not shorter than 1/{d}")));
    }
    let strip = strip_of(d, l);
    let mut orbit = Vec::with_capacity(period + 1);
    let mut cur = l.clone();
    orbit.push(cur.clone());
    for _ in 1..period {
        cur = cur.image_leaf(d);
        orbit.push(cur.clone());
    }
    let inside: Vec<bool> = orbit.iter().map(|x| strip.contains_leaf(x)).collect();
    let single: Vec<bool> = orbit
        .iter()
        .map(|x| strip.contains_in_one_component(x))
        .collect();
    let clause1 = period < 2 || !inside[1];
    let clause2 = period < 3 || !single[2];
    let mut reentries = Vec::new();
    let mut witnesses = Vec::new();
    let mut clause3 = true;
    for j in (1..period).filter(|&j| single[j]) {
        reentries.push(j);
        let found = (1..j).find(|&k| {
            let bound = strip.eta.div_u64((d as u64).pow((j - k) as u32));
            critical_distance(d, &orbit[k]) <= bound
        });
        match found {
            Some(k) => witnesses.push((j, k)),
            None => clause3 = false,
        }
    }
    Ok(CslReport {
        leaf: l.clone(),
        period,
        eta: strip.eta.clone(),
        narrow: strip.is_narrow(),
        clause1,
        clause2,
        clause3,
        reentries,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn portrait_and_strip() {
        let sp = sibling_portrait(2, &leaf(2, 7, 5, 7)).unwrap();
        assert_eq!(sp.siblings, vec![leaf(11, 14, 3, 14)]);
        let cs = central_strip(&sp);
        assert_eq!(cs.eta, Frac::new(1, 14));
        assert!(cs.arcs.iter().all(|a| a.length() == Frac::new(1, 14)));
        assert!(cs.is_narrow());

        let sp = sibling_portrait(3, &leaf(1, 8, 3, 8)).unwrap();
        assert_eq!(sp.siblings, vec![leaf(11, 24, 17, 24), leaf(19, 24, 1, 24)]);
        let cs = central_strip(&sp);
        assert_eq!(cs.eta, Frac::new(1, 12));
        assert!(!cs.is_narrow());
        assert!(sibling_portrait(3, &leaf(0, 1, 1, 3)).is_err());
    }

    #[test]
    fn endcap_examples() {
        let sp = sibling_portrait(3, &leaf(1, 8, 3, 8)).unwrap();
        let caps = endcaps(&sp);
        let a = |n, d| Angle::new(n, d);
        assert!(caps.contains(&Endcap {
            interval: Arc::new(a(3, 8), a(11, 24)),
            adjacent_to_major: true
        }));
        assert!(caps.contains(&Endcap {
            interval: Arc::new(a(17, 24), a(19, 24)),
            adjacent_to_major: false
        }));
        let sp = sibling_portrait(2, &leaf(2, 7, 5, 7)).unwrap();
        let caps = endcaps(&sp);
        assert_eq!(caps.len(), 2);
        assert!(caps.iter().all(|c| c.adjacent_to_major));
        let minor = leaf(2, 7, 5, 7).image_leaf(2);
        for c in caps {
            let s = c.interval.start.sigma(2);
            let e = c.interval.end.sigma(2);
            assert!(minor.has_endpoint(&s) && minor.has_endpoint(&e));
        }
    }

    #[test]
    fn csl_examples() {
        assert!(csl_check(2, &leaf(2, 7, 5, 7), 10).unwrap().passed());
        assert!(csl_check(3, &leaf(1, 8, 3, 8), 10).unwrap().passed());
        assert!(csl_check(2, &leaf(1, 6, 1, 3), 10).is_err());
    }
}
