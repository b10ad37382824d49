//! Theorem-verification suites over the MAC catalog and periodic leaves.
//!
//! Each check returns a [`SuiteReport`]: how many objects were examined, how
//! many were skipped as out of scope, and a capped sample of failures.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::catalog;
use crate::circle::{periodic_points, Angle, Arc};
use crate::correspondence::{
    csl_check, lamination_equal_at_depth, mac_to_scm, scm_to_mac, strip_of, MacData, ScmData,
};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::lamination::{check_invariance, gap_degree, gaps_of_leaves, Lamination};
use crate::leaf::Leaf;
use crate::orbits::OrbitClass;
use crate::pullback::{
    canonical_mac_lamination, canonical_scm_lamination, is_maximal_sector, sectors,
    CriticalPortrait,
};

/// Failures kept verbatim in a report; the rest are only counted.
const FAILURE_SAMPLE: usize = 20;

/// Depth used for lamination comparisons in the suites.
pub const SUITE_DEPTH: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Csl,
    Coroot,
    Roundtrip,
    Invariance,
    Scm,
    Kiwi,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Csl,
        Suite::Coroot,
        Suite::Roundtrip,
        Suite::Invariance,
        Suite::Scm,
        Suite::Kiwi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Csl => "csl",
            Suite::Coroot => "coroot",
            Suite::Roundtrip => "roundtrip",
            Suite::Invariance => "invariance",
            Suite::Scm => "scm",
            Suite::Kiwi => "kiwi",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LamError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| LamError::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub check: String,
    pub degree: u32,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    /// Out of scope for the check (e.g. rotation-return majors).
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(check: &str, degree: u32) -> Self {
        SuiteReport {
            check: check.to_string(),
            degree,
            ..Default::default()
        }
    }

    /// Folds in per-item verdicts: `None` skipped, `Some(Err(msg))` failed.
    fn tally<I: IntoIterator<Item = Option<std::result::Result<(), String>>>>(mut self, it: I) -> Self {
        for v in it {
            self.checked += 1;
            match v {
                None => self.skipped += 1,
                Some(Ok(())) => self.passed += 1,
                Some(Err(msg)) => {
                    self.failed += 1;
                    if self.failures.len() < FAILURE_SAMPLE {
                        self.failures.push(msg);
                    }
                }
            }
        }
        self
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} d={}: {} passed, {} failed, {} skipped of {}",
            self.check, self.degree, self.passed, self.failed, self.skipped, self.checked
        )
    }
}

/// Majors whose correspondence is defined: identity return or rotational.
pub fn in_scope(m: &MacData) -> bool {
    matches!(
        m.orbit_class,
        OrbitClass::IdentityReturn | OrbitClass::Rotational(_)
    )
}

/// Runs a suite against `catalog(d, max_period)`.
pub fn run_suite(suite: Suite, d: u32, max_period: u32) -> Result<Vec<SuiteReport>> {
    let macs = catalog(d, max_period)?;
    let mut out = Vec::new();
    let wanted: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let mut corr: Option<(SuiteReport, SuiteReport)> = None;
    for s in wanted {
        match s {
            Suite::Csl => {
                out.push(csl_sweep(d, &points_up_to(d, max_period)?));
                out.push(unicritical_check(d, &macs));
            }
            Suite::Coroot => out.push(coroot_check(d, &macs)),
            Suite::Roundtrip | Suite::Scm if corr.is_none() => {
                let (rt, sc) = correspondence_check(d, &macs, SUITE_DEPTH);
                out.push(if s == Suite::Roundtrip { rt.clone() } else { sc.clone() });
                corr = Some((rt, sc));
            }
            Suite::Roundtrip => out.push(corr.as_ref().expect("set").0.clone()),
            Suite::Scm => out.push(corr.as_ref().expect("set").1.clone()),
            Suite::Invariance => out.push(invariance_check(d, &macs, SUITE_DEPTH)),
            Suite::Kiwi => out.push(kiwi_search(d, max_period)?.into()),
            Suite::All => unreachable!(),
        }
    }
    Ok(out)
}

/// Points of period at most `n`, sorted and deduplicated.
pub fn points_up_to(d: u32, n: u32) -> Result<Vec<Angle>> {
    let mut pts = BTreeSet::new();
    for k in 1..=n {
        pts.extend(periodic_points(d, k)?);
    }
    Ok(pts.into_iter().collect())
}

/// The three clauses of the Central Strip Lemma for every leaf with
/// endpoints in `points` whose strip is narrow, i.e. `1/(d+1) < |l| < 1/d`.
pub fn csl_sweep(d: u32, points: &[Angle]) -> SuiteReport {
    let lo = Frac::recip(d as u64 + 1);
    let hi = Frac::recip(d as u64);
    let verdicts: Vec<_> = (0..points.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (lo, hi) = (lo.clone(), hi.clone());
            (1..points.len()).map_while(move |k| {
                let j = (i + k) % points.len();
                let len = points[i].ccw_to(&points[j]);
                (len < hi).then_some((j, len > lo))
            })
            .filter(|&(_, narrow)| narrow)
            .map(move |(j, _)| (i, j))
        })
        .map(|(i, j)| {
            let l = Leaf::new(points[i].clone(), points[j].clone())
                .expect("distinct points");
            Some(match csl_check(d, &l, 64) {
                Ok(r) if r.passed() => Ok(()),
                Ok(r) => Err(format!(
                    "{l}: clauses ({}, {}, {}), re-entries {:?}",
                    r.clause1, r.clause2, r.clause3, r.reentries
                )),
                Err(e) => Err(format!("{l}: {e}")),
            })
        })
        .collect();
    SuiteReport::new("csl", d).tally(verdicts)
}

/// No image of a MAC major lands in its central strip with both endpoints
/// in one component.
pub fn unicritical_check(d: u32, macs: &[MacData]) -> SuiteReport {
    let verdicts: Vec<_> = macs
        .par_iter()
        .map(|m| {
            let strip = strip_of(d, &m.major);
            let mut cur = m.major.clone();
            for j in 1..m.leaf_period {
                cur = cur.image_leaf(d);
                if strip.contains_in_one_component(&cur) {
                    return Some(Err(format!("{}: image {j} = {cur} re-enters", m.major)));
                }
            }
            Some(Ok(()))
        })
        .collect();
    SuiteReport::new("csl-unicritical", d).tally(verdicts)
}

/// Exactly `d - 2` co-roots, each fixed by `sigma^n`, pairwise more than
/// `1/d` apart.
pub fn coroot_check(d: u32, macs: &[MacData]) -> SuiteReport {
    let step = Frac::recip(d as u64);
    let verdicts = macs.iter().map(|m| {
        if !in_scope(m) {
            return None;
        }
        let c = &m.coroots;
        if c.len() != d as usize - 2 {
            return Some(Err(format!("{}: {} co-roots", m.major, c.len())));
        }
        if let Some(t) = c.iter().find(|t| !t.is_fixed_by(d, m.period)) {
            return Some(Err(format!("{}: co-root {t} not fixed", m.major)));
        }
        for (i, x) in c.iter().enumerate() {
            for y in &c[i + 1..] {
                if x.circle_distance(y) <= step {
                    return Some(Err(format!("{}: co-roots {x}, {y} too close", m.major)));
                }
            }
        }
        Some(Ok(()))
    });
    SuiteReport::new("coroot", d).tally(verdicts.collect::<Vec<_>>())
}

/// Verdicts of [`correspondence_one`].
type Verdict = std::result::Result<(), String>;

/// MAC -> SCM -> MAC recovers the major with `d - 1` majors on the polygon
/// and the canonical laminations agree to `depth` (first verdict); the
/// canonical SCM lamination has the structure of [`scm_properties`]
/// (second verdict). Both laminations are built once.
pub fn correspondence_one(d: u32, m: &MacData, depth: usize) -> (Verdict, Verdict) {
    let fail = |why: String| format!("{}: {why}", m.major);
    let scm = match mac_to_scm(d, m) {
        Ok(s) => s,
        Err(e) => return (Err(fail(e.to_string())), Err(fail(e.to_string()))),
    };
    let b = match canonical_scm_lamination(d, &scm.polygon, depth) {
        Ok(b) => b,
        Err(e) => return (Err(fail(e.to_string())), Err(fail(e.to_string()))),
    };
    let roundtrip = (|| {
        if scm.majors.len() != d as usize - 1 {
            return Err(format!("{} majors", scm.majors.len()));
        }
        let back = scm_to_mac(d, &scm).map_err(|e| e.to_string())?;
        if back != *m {
            return Err(format!("recovered {}", back.major));
        }
        let a = canonical_mac_lamination(d, &m.major, depth).map_err(|e| e.to_string())?;
        match lamination_equal_at_depth(&a, &b, &m.major, depth) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("laminations differ at depth {depth}")),
            Err(e) => Err(e.to_string()),
        }
    })()
    .map_err(fail);
    let props = scm_properties(d, &scm, &b.lamination).map_err(|e| format!("{}: {e}", scm.polygon));
    (roundtrip, props)
}

/// Roundtrip and SCM-structure reports over the in-scope majors.
pub fn correspondence_check(d: u32, macs: &[MacData], depth: usize) -> (SuiteReport, SuiteReport) {
    let verdicts: Vec<Option<(Verdict, Verdict)>> = macs
        .par_iter()
        .map(|m| in_scope(m).then(|| correspondence_one(d, m, depth)))
        .collect();
    let (rt, sc): (Vec<_>, Vec<_>) = verdicts
        .into_iter()
        .map(|v| match v {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        })
        .unzip();
    (
        SuiteReport::new("roundtrip", d).tally(rt),
        SuiteReport::new("scm", d).tally(sc),
    )
}

/// Canonical MAC laminations are crossing-free and sibling invariant up to
/// the generated depth.
pub fn invariance_check(d: u32, macs: &[MacData], depth: usize) -> SuiteReport {
    let verdicts: Vec<_> = macs
        .par_iter()
        .map(|m| {
            Some(match canonical_mac_lamination(d, &m.major, depth) {
                Ok(r) => {
                    let rep = check_invariance(&r.lamination);
                    if rep.passed() {
                        Ok(())
                    } else {
                        Err(format!(
                            "{}: {} failing leaves, crossing {:?}",
                            m.major,
                            rep.failures().count(),
                            rep.crossing
                        ))
                    }
                }
                Err(e) => Err(format!("{}: {e}", m.major)),
            })
        })
        .collect();
    SuiteReport::new("invariance", d).tally(verdicts)
}

/// Checks an SCM polygon and its canonical lamination `lam`:
/// exactly `d - 1` sides in `(1/d, 1/(d-1))`, one shorter than `1/d`, each
/// major within `1/(d(d+1))` of critical, a degree-2 gap across each major,
/// and (identity return) one arc of the maximal sector holding two vertices.
pub fn scm_properties(d: u32, scm: &ScmData, lam: &Lamination) -> Verdict {
    let p = &scm.polygon;
    let crit = Frac::recip(d as u64);
    let upper = Frac::recip(d as u64 - 1);
    let arcs = p.side_arcs();
    let long = arcs.iter().filter(|a| **a > crit && (d == 2 || **a < upper)).count();
    // For d = 2 the upper bound 1/(d-1) is the whole circle.
    if long != d as usize - 1 {
        return Err(format!("{long} sides in (1/d, 1/(d-1))"));
    }
    if !arcs.iter().any(|a| *a < crit) {
        return Err("no side shorter than 1/d".into());
    }
    // Majors are the sides whose outer arc exceeds 1/d.
    let majors: Vec<(&Angle, &Angle)> = p
        .side_pairs()
        .into_iter()
        .filter(|(x, y)| x.ccw_to(y) > crit)
        .collect();
    let bound = Frac::recip(d as u64 * (d as u64 + 1));
    for (x, y) in &majors {
        if x.ccw_to(y).abs_diff(&crit) > bound {
            return Err(format!("major ({x}, {y}) not within 1/(d(d+1)) of critical"));
        }
    }
    for (x, y) in &majors {
        let l = Leaf::new((*x).clone(), (*y).clone()).map_err(|e| e.to_string())?;
        let outer = Arc::new((*x).clone(), (*y).clone());
        // The gap across the major is bounded by it and the outermost
        // leaves under its arc.
        let mut under: Vec<(Frac, Frac, &Leaf)> = lam
            .leaf_set()
            .filter(|k| **k != l)
            .filter_map(|k| {
                let (u, v) = (x.ccw_to(k.a()), x.ccw_to(k.b()));
                let len = x.ccw_to(y);
                (u <= len && v <= len).then(|| if u < v { (u, v, k) } else { (v, u, k) })
            })
            .collect();
        under.sort_by(|p, q| p.0.cmp(&q.0).then_with(|| q.1.cmp(&p.1)));
        let mut bounding = vec![l.clone()];
        let mut reach: Option<&Frac> = None;
        for (u, v, k) in &under {
            if reach.is_none_or(|r| u >= r) {
                bounding.push((*k).clone());
                reach = Some(v);
            }
        }
        let across = gaps_of_leaves(&bounding)
            .into_iter()
            .find(|g| g.has_leaf(&l) && g.vertices().iter().all(|v| outer.contains_closed(v)));
        match across {
            Some(g) if gap_degree(d, &g) == 2 => {}
            Some(g) => return Err(format!("gap across {l} has degree {}", gap_degree(d, &g))),
            None => return Err(format!("no gap across {l}")),
        }
    }
    if scm.orbit_class == OrbitClass::IdentityReturn {
        let portrait = CriticalPortrait::new(d, scm.guiding_chords.clone()).map_err(|e| e.to_string())?;
        let secs = sectors(&portrait).map_err(|e| e.to_string())?;
        let max = secs
            .iter()
            .find(|s| {
                is_maximal_sector(&portrait, s)
                    && p.vertices().iter().all(|v| s.arcs.iter().any(|a| a.contains_closed(v)))
            })
            .ok_or("no maximal sector holds the polygon")?;
        let doubled: Vec<_> = max
            .arcs
            .iter()
            .filter(|a| p.vertices().iter().filter(|v| a.contains_closed(v)).count() >= 2)
            .collect();
        if doubled.len() != 1 {
            return Err(format!("{} sector arcs hold two vertices", doubled.len()));
        }
    }
    Ok(())
}

/// Outcome of the exhaustive identity-return polygon search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KiwiReport {
    pub degree: u32,
    pub max_period: u32,
    /// Identity-return vertex sets found, by number of vertices (2 = leaves).
    pub counts: std::collections::BTreeMap<usize, usize>,
    /// Identity-return polygons with more than `d` sides.
    pub violations: Vec<crate::leaf::Polygon>,
}

impl KiwiReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl From<KiwiReport> for SuiteReport {
    /// Every identity-return set found counts as checked; those with more
    /// than `d` vertices fail.
    fn from(k: KiwiReport) -> Self {
        let total: usize = k.counts.values().sum();
        let bad = k.violations.len();
        let mut r = SuiteReport::new("kiwi", k.degree).tally(
            k.violations
                .iter()
                .map(|p| Some(Err(format!("identity-return polygon {p} has more than {} sides", k.degree)))),
        );
        r.checked = total;
        r.passed = total - bad;
        r
    }
}

/// Searches every identity-return polygon with vertices of period at most
/// `max_period` for one with more than `d` sides.
///
/// The vertices of such a polygon all have the same exact period `r` (its
/// return time), it holds at most one point of each cycle, and every
/// subset of at least two of its vertices is again identity-return. So a
/// depth-first search that keeps every partial set valid and stops at
/// `d + 1` vertices is exhaustive. Work is on the integer grid
/// `k / (d^r - 1)` where `sigma_d` is multiplication by `d`.
pub fn kiwi_search(d: u32, max_period: u32) -> Result<KiwiReport> {
    if d < 2 {
        return Err(LamError::InvalidDegree(d));
    }
    let mut report = KiwiReport {
        degree: d,
        max_period,
        counts: Default::default(),
        violations: Vec::new(),
    };
    for r in 2..=max_period {
        let m = (d as u64)
            .checked_pow(r)
            .filter(|&x| x <= 1 << 32)
            .ok_or_else(|| LamError::Unsupported(format!("period {r} in degree {d}")))?
            - 1;
        let grid = KiwiGrid { d: d as u64, m, r: r as usize };
        let pts: Vec<u64> = (1..m).filter(|&k| grid.exact_period(k)).collect();
        let cap = d as usize + 1;
        // Two-point sets that are valid on their own; every pair inside a
        // larger valid set must be one.
        let compat: Vec<Vec<usize>> = (0..pts.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..pts.len())
                    .filter(|&j| {
                        grid.cycle_id(pts[i]) != grid.cycle_id(pts[j]) && grid.valid(&[pts[i], pts[j]])
                    })
                    .collect()
            })
            .collect();
        let found: Vec<(Vec<usize>, Vec<Vec<u64>>)> = (0..pts.len())
            .into_par_iter()
            .map(|i| {
                let mut counts = vec![0; cap + 1];
                counts[2] = compat[i].len();
                let mut big = Vec::new();
                for (n, &j) in compat[i].iter().enumerate() {
                    let rest: Vec<usize> =
                        compat[i][n + 1..].iter().copied().filter(|k| compat[j].binary_search(k).is_ok()).collect();
                    let mut chosen = vec![pts[i], pts[j]];
                    grid.extend(&pts, &compat, &rest, &mut chosen, cap, &mut counts, &mut big);
                }
                (counts, big)
            })
            .collect();
        for (counts, big) in found {
            for (size, c) in counts.into_iter().enumerate().filter(|&(_, c)| c > 0) {
                *report.counts.entry(size).or_default() += c;
            }
            for s in big {
                let verts = s.iter().map(|&k| Angle::new(k, m)).collect();
                report.violations.push(crate::leaf::Polygon::new(verts)?);
            }
        }
    }
    Ok(report)
}

struct KiwiGrid {
    d: u64,
    m: u64,
    r: usize,
}

impl KiwiGrid {
    fn sigma(&self, k: u64) -> u64 {
        k * self.d % self.m
    }

    fn exact_period(&self, k: u64) -> bool {
        let mut c = k;
        for i in 1..=self.r {
            c = self.sigma(c);
            if c == k {
                return i == self.r;
            }
        }
        false
    }

    /// Smallest point of the cycle through `k`.
    fn cycle_id(&self, k: u64) -> u64 {
        let mut best = k;
        let mut c = k;
        for _ in 1..self.r {
            c = self.sigma(c);
            best = best.min(c);
        }
        best
    }

    /// `sigma^i(V)` for `i = 0..r`, each with vertices in original order.
    fn images(&self, v: &[u64]) -> Vec<Vec<u64>> {
        let mut out = vec![v.to_vec()];
        for i in 1..self.r {
            let next = out[i - 1].iter().map(|&k| self.sigma(k)).collect();
            out.push(next);
        }
        out
    }

    /// Every image keeps the cyclic order of `v` and the images are
    /// pairwise unlinked.
    fn valid(&self, v: &[u64]) -> bool {
        let imgs = self.images(v);
        for img in &imgs[1..] {
            // v is sorted; the image must be a rotation of a sorted list.
            let descents = (0..img.len()).filter(|&j| img[j] > img[(j + 1) % img.len()]).count();
            if descents > 1 {
                return false;
            }
        }
        let sorted: Vec<Vec<u64>> = imgs
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                if !unlinked(&sorted[i], &sorted[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Counts valid supersets of `chosen` drawn from the candidate indices
    /// `rest` (each compatible with everything chosen), keeping those of
    /// size `cap`.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        pts: &[u64],
        compat: &[Vec<usize>],
        rest: &[usize],
        chosen: &mut Vec<u64>,
        cap: usize,
        counts: &mut [usize],
        big: &mut Vec<Vec<u64>>,
    ) {
        for (n, &k) in rest.iter().enumerate() {
            chosen.push(pts[k]);
            if self.valid(chosen) {
                counts[chosen.len()] += 1;
                if chosen.len() == cap {
                    big.push(chosen.clone());
                } else {
                    let next: Vec<usize> =
                        rest[n + 1..].iter().copied().filter(|j| compat[k].binary_search(j).is_ok()).collect();
                    self.extend(pts, compat, &next, chosen, cap, counts, big);
                }
            }
            chosen.pop();
        }
    }
}

/// All of `b` lies in one complementary arc of `a` (both sorted, disjoint).
fn unlinked(a: &[u64], b: &[u64]) -> bool {
    if a.len() < 2 || b.len() < 2 {
        return true;
    }
    let gap = |x: u64| a.partition_point(|&y| y < x) % a.len();
    let g = gap(b[0]);
    b.iter().all(|&x| gap(x) == g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf::Polygon;
    use crate::orbits::classify;

    /// Identity-return sets of size `k` found by running `classify` on every
    /// `k`-subset of points of period at most `n`.
    fn brute_force(d: u32, n: u32, k: usize) -> usize {
        let pts = points_up_to(d, n).unwrap();
        let mut count = 0;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let p = Polygon::new(idx.iter().map(|&i| pts[i].clone()).collect()).unwrap();
            if classify(d, &p, 64) == Ok(OrbitClass::IdentityReturn) {
                count += 1;
            }
            // Next k-subset in lexicographic order.
            let Some(i) = (0..k).rev().find(|&i| idx[i] < pts.len() - k + i) else {
                return count;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    #[test]
    fn kiwi_search_matches_classify() {
        let r = kiwi_search(3, 3).unwrap();
        assert_eq!(r.counts[&3], brute_force(3, 3, 3));
        assert!(r.counts[&3] > 0);
        assert_eq!(r.counts.get(&2).copied().unwrap_or(0), brute_force(3, 3, 2));
        let r = kiwi_search(2, 4).unwrap();
        assert_eq!(r.counts.get(&2).copied().unwrap_or(0), brute_force(2, 4, 2));
        assert_eq!(brute_force(2, 4, 3), 0);
        assert!(r.ok());
    }

    #[test]
    fn suites_parse() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
