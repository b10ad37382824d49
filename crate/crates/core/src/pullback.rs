//! Critical portraits, their sectors and branch inverses, and the pullback
//! scheme that grows a finite invariant set into a lamination.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{Angle, Arc};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::lamination::{gaps_of_leaves, Lamination};
use crate::leaf::{crosses, find_crossing, Leaf, Polygon};
use crate::orbits::forward_orbit;

/// `d - 1` units of criticality carried by non-crossing critical chords.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalPortrait {
    degree: u32,
    chords: Vec<Leaf>,
}

impl CriticalPortrait {
    pub fn new(degree: u32, chords: Vec<Leaf>) -> Result<Self> {
        if degree < 2 {
            return Err(LamError::InvalidDegree(degree));
        }
        let mut chords = chords;
        chords.sort();
        chords.dedup();
        for c in &chords {
            if !c.is_critical(degree) {
                return Err(LamError::InvalidPortrait(format!("{c} is not critical")));
            }
        }
        if let Some((x, y)) = find_crossing(chords.iter()) {
            return Err(LamError::Crossing(x.to_string(), y.to_string()));
        }
        let rank = forest_rank(&chords);
        if rank != degree as usize - 1 {
            return Err(LamError::InvalidPortrait(format!(
                "criticality {rank}, expected {}",
                degree - 1
            )));
        }
        Ok(CriticalPortrait { degree, chords })
    }

    /// The all-critical `d`-gon with a vertex at `t` (a diameter for `d = 2`).
    pub fn all_critical_polygon(d: u32, t: &Angle) -> Result<Self> {
        Self::new(d, all_critical_vertices(d, t).sides())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn chords(&self) -> &[Leaf] {
        &self.chords
    }
}

impl fmt::Display for CriticalPortrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.chords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// The polygon with vertices `t + j/d`.
pub fn all_critical_vertices(d: u32, t: &Angle) -> Polygon {
    let step = Frac::recip(d as u64);
    let mut v = Vec::with_capacity(d as usize);
    let mut cur = t.clone();
    for _ in 0..d {
        v.push(cur.clone());
        cur = cur.rotate(&step);
    }
    Polygon::new(v).expect("distinct vertices")
}

fn forest_rank(chords: &[Leaf]) -> usize {
    let mut parent: HashMap<Angle, Angle> = HashMap::new();
    fn find(p: &mut HashMap<Angle, Angle>, x: &Angle) -> Angle {
        let mut cur = x.clone();
        while let Some(n) = p.get(&cur) {
            if *n == cur {
                break;
            }
            cur = n.clone();
        }
        cur
    }
    let mut rank = 0;
    for c in chords {
        for e in [c.a(), c.b()] {
            parent.entry(e.clone()).or_insert_with(|| e.clone());
        }
        let ra = find(&mut parent, c.a());
        let rb = find(&mut parent, c.b());
        if ra != rb {
            parent.insert(ra, rb);
            rank += 1;
        }
    }
    rank
}

/// A component of the disk minus the portrait: half-open boundary arcs and
/// the chords between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalSector {
    pub arcs: Vec<Arc>,
    pub chords: Vec<Leaf>,
}

impl CriticalSector {
    pub fn contains(&self, t: &Angle) -> bool {
        self.arcs.iter().any(|a| a.contains(t))
    }

    pub fn arc_total(&self) -> Frac {
        self.arcs.iter().fold(Frac::zero(), |acc, a| acc.add(&a.length()))
    }
}

impl fmt::Display for CriticalSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "[{}, {})", a.start, a.end)?;
        }
        Ok(())
    }
}

/// The critical sectors of a portrait, ordered by their first arc.
pub fn sectors(c: &CriticalPortrait) -> Result<Vec<CriticalSector>> {
    let step = Frac::recip(c.degree as u64);
    let mut out = Vec::new();
    for g in gaps_of_leaves(&c.chords) {
        if g.is_whole_disk() {
            continue;
        }
        let mut arcs: Vec<Arc> = g.arcs().cloned().collect();
        if arcs.is_empty() {
            continue;
        }
        arcs.sort();
        let mut chords: Vec<Leaf> = g.leaves().cloned().collect();
        chords.sort();
        let s = CriticalSector { arcs, chords };
        if s.arc_total() != step {
            return Err(LamError::InvalidPortrait(format!(
                "sector {s} has arc length {}",
                s.arc_total()
            )));
        }
        out.push(s);
    }
    out.sort_by(|x, y| x.arcs[0].cmp(&y.arcs[0]));
    Ok(out)
}

/// A maximal sector has every critical chord, and a side of every
/// all-critical polygon, on its boundary.
pub fn is_maximal_sector(c: &CriticalPortrait, s: &CriticalSector) -> bool {
    let groups = chord_groups(&c.chords);
    groups.iter().all(|g| {
        if g.len() == 1 {
            s.chords.contains(&g[0])
        } else {
            g.iter().any(|x| s.chords.contains(x))
        }
    })
}

/// Chords grouped into connected components (all-critical polygons).
fn chord_groups(chords: &[Leaf]) -> Vec<Vec<Leaf>> {
    let mut groups: Vec<Vec<Leaf>> = Vec::new();
    for c in chords {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|x| x.shares_endpoint(c)))
            .map(|(i, _)| i)
            .collect();
        let mut merged = vec![c.clone()];
        for &i in hits.iter().rev() {
            merged.extend(groups.remove(i));
        }
        groups.push(merged);
    }
    groups
}

/// No chord of the portrait meets an element of `f` except at endpoints.
/// A chord joining two non-adjacent vertices of a polygon passes through its
/// interior and is also rejected.
pub fn is_compatible(c: &CriticalPortrait, leaves: &[Leaf], polygons: &[Polygon]) -> bool {
    let sides: Vec<Leaf> = polygons.iter().flat_map(|p| p.sides()).collect();
    for ch in &c.chords {
        if leaves.iter().chain(&sides).any(|l| crosses(ch, l)) {
            return false;
        }
        for p in polygons {
            if p.len() > 3
                && p.contains_vertex(ch.a())
                && p.contains_vertex(ch.b())
                && !p.sides().contains(ch)
            {
                return false;
            }
        }
    }
    true
}

/// One branch of `sigma_d^{-1}`, with image in a critical sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchInverse {
    pub sector: CriticalSector,
    pub degree: u32,
}

impl BranchInverse {
    pub fn apply(&self, t: &Angle) -> Angle {
        branch_apply(self, t)
    }
}

/// The unique `sigma_d` preimage of `t` in the branch's sector.
pub fn branch_apply(tau: &BranchInverse, t: &Angle) -> Angle {
    t.preimages(tau.degree)
        .into_iter()
        .find(|p| tau.sector.contains(p))
        .expect("each sector holds exactly one preimage")
}

pub fn branches(c: &CriticalPortrait) -> Result<Vec<BranchInverse>> {
    Ok(sectors(c)?
        .into_iter()
        .map(|sector| BranchInverse {
            sector,
            degree: c.degree,
        })
        .collect())
}

/// A leaf/polygon set being pulled back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PullbackSet {
    pub leaves: BTreeSet<Leaf>,
    pub polygons: BTreeSet<Polygon>,
}

impl PullbackSet {
    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty() && self.polygons.is_empty()
    }

    fn image_under(&self, taus: &[BranchInverse]) -> PullbackSet {
        let per_sector: Vec<PullbackSet> = taus
            .par_iter()
            .map(|tau| PullbackSet {
                leaves: self
                    .leaves
                    .iter()
                    .map(|l| {
                        Leaf::new(tau.apply(l.a()), tau.apply(l.b())).expect("branch is injective")
                    })
                    .collect(),
                polygons: self
                    .polygons
                    .iter()
                    .map(|p| {
                        Polygon::new(p.vertices().iter().map(|v| tau.apply(v)).collect())
                            .expect("branch is injective")
                    })
                    .collect(),
            })
            .collect();
        let mut out = PullbackSet::default();
        for s in per_sector {
            out.leaves.extend(s.leaves);
            out.polygons.extend(s.polygons);
        }
        out
    }
}

/// `F ∪ τ_1(F) ∪ ... ∪ τ_d(F)`.
pub fn pullback_step(f: &PullbackSet, c: &CriticalPortrait) -> Result<PullbackSet> {
    let leaves: Vec<Leaf> = f.leaves.iter().cloned().collect();
    let polys: Vec<Polygon> = f.polygons.iter().cloned().collect();
    if !is_compatible(c, &leaves, &polys) {
        return Err(LamError::Incompatible(format!("the set under portrait {c}")));
    }
    let img = f.image_under(&branches(c)?);
    let mut out = f.clone();
    out.leaves.extend(img.leaves);
    out.polygons.extend(img.polygons);
    Ok(out)
}

/// Outcome of an iterated pullback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackResult {
    pub lamination: Lamination,
    pub depth: usize,
    /// Leaf count of `F_0, ..., F_N`.
    pub stages: Vec<usize>,
    pub portrait: CriticalPortrait,
}

/// Pulls `f` back `n` times along `c`, tagging each leaf with its stage.
/// Aborts with the offending pair if any stage has crossing leaves.
pub fn pullback_lamination(
    f: &PullbackSet,
    c: &CriticalPortrait,
    n: usize,
) -> Result<PullbackResult> {
    pullback_with(f, c, n, true)
}

fn pullback_with(
    f: &PullbackSet,
    c: &CriticalPortrait,
    n: usize,
    use_grid: bool,
) -> Result<PullbackResult> {
    let d = c.degree;
    let all_leaves: Vec<Leaf> = f.leaves.iter().cloned().collect();
    let polys: Vec<Polygon> = f.polygons.iter().cloned().collect();
    if !is_compatible(c, &all_leaves, &polys) {
        return Err(LamError::Incompatible(format!("the seed set under portrait {c}")));
    }
    let taus = branches(c)?;
    let mut lam = Lamination::new(d)?;
    for l in &f.leaves {
        lam.insert_leaf(l.clone(), 0);
    }
    for p in &f.polygons {
        lam.insert_polygon(p.clone(), 0);
    }
    if let Some((x, y)) = lam.find_crossing() {
        return Err(LamError::Crossing(x.to_string(), y.to_string()));
    }
    let mut stages = vec![lam.len()];
    match Grid::new(f, c, &taus, n).filter(|_| use_grid) {
        Some(grid) => grid.pull(f, n, &mut lam, &mut stages)?,
        None => {
            let mut frontier = f.clone();
            for depth in 1..=n {
                let img = frontier.image_under(&taus);
                let mut next = PullbackSet::default();
                for l in img.leaves {
                    if !lam.contains(&l) {
                        lam.insert_leaf(l.clone(), depth);
                        next.leaves.insert(l);
                    }
                }
                for p in img.polygons {
                    if !lam.contains_polygon(&p) {
                        lam.insert_polygon(p.clone(), depth);
                        next.polygons.insert(p);
                    }
                }
                if let Some((x, y)) = lam.find_crossing() {
                    return Err(LamError::Crossing(x.to_string(), y.to_string()));
                }
                stages.push(lam.len());
                frontier = next;
            }
        }
    }
    Ok(PullbackResult {
        lamination: lam,
        depth: n,
        stages,
        portrait: c.clone(),
    })
}

/// Fixed-denominator form of a pullback: every angle that can arise within
/// `n` stages is `x / q` for an integer `x`, so branch inverses reduce to
/// integer division.
struct Grid {
    q: u64,
    d: u64,
    /// Half-open arcs `[s, e)` of each sector, as numerators.
    sectors: Vec<Vec<(u64, u64)>>,
}

type GridLeaf = (u64, u64);

impl Grid {
    /// `None` when the common denominator does not fit comfortably in `u64`.
    fn new(f: &PullbackSet, c: &CriticalPortrait, taus: &[BranchInverse], n: usize) -> Option<Grid> {
        let d = c.degree as u64;
        let angles = f
            .leaves
            .iter()
            .flat_map(|l| l.endpoints())
            .chain(f.polygons.iter().flat_map(|p| p.vertices()))
            .chain(c.chords.iter().flat_map(|l| l.endpoints()));
        let mut den = 1u64;
        for t in angles {
            let (_, k) = t.as_frac().to_u64_pair()?;
            let g = num_integer::gcd(den, k);
            den = den.checked_mul(k / g)?;
        }
        let q = den.checked_mul(d.checked_pow(n as u32)?)?;
        q.checked_mul(d)?;
        let grid = Grid { q, d, sectors: Vec::new() };
        let sectors = taus
            .iter()
            .map(|tau| {
                tau.sector
                    .arcs
                    .iter()
                    .map(|a| Some((grid.of(&a.start)?, grid.of(&a.end)?)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Grid { sectors, ..grid })
    }

    fn of(&self, t: &Angle) -> Option<u64> {
        let (x, k) = t.as_frac().to_u64_pair()?;
        self.q.is_multiple_of(k).then(|| x * (self.q / k))
    }

    fn angle(&self, x: u64) -> Angle {
        Angle::new(x, self.q)
    }

    fn leaf(&self, (x, y): GridLeaf) -> Leaf {
        Leaf::new(self.angle(x), self.angle(y)).expect("distinct endpoints")
    }

    fn in_sector(&self, sec: usize, t: u64) -> bool {
        let q = self.q;
        self.sectors[sec]
            .iter()
            .any(|&(s, e)| (t + q - s) % q < (e + q - s) % q)
    }

    /// The preimage of `x` in sector `sec`.
    fn branch(&self, sec: usize, x: u64) -> u64 {
        (0..self.d)
            .map(|k| x + k * self.q)
            .filter(|y| y % self.d == 0)
            .map(|y| y / self.d)
            .find(|&p| self.in_sector(sec, p))
            .expect("each sector holds exactly one preimage")
    }

    fn norm(x: u64, y: u64) -> GridLeaf {
        (x.min(y), x.max(y))
    }

    /// Runs stages `1..=n`, adding to `lam`; mirrors the exact path.
    fn pull(
        &self,
        f: &PullbackSet,
        n: usize,
        lam: &mut Lamination,
        stages: &mut Vec<usize>,
    ) -> Result<()> {
        let of = |t: &Angle| self.of(t).expect("on the grid");
        let mut seen: HashSet<GridLeaf> = lam
            .leaf_set()
            .map(|l| Grid::norm(of(l.a()), of(l.b())))
            .collect();
        let mut seen_polys: HashSet<Vec<u64>> = lam
            .polygons()
            .map(|(p, _)| p.vertices().iter().map(of).collect())
            .collect();
        let mut leaves: Vec<GridLeaf> = f
            .leaves
            .iter()
            .map(|l| Grid::norm(of(l.a()), of(l.b())))
            .collect();
        let mut polys: Vec<Vec<u64>> = f
            .polygons
            .iter()
            .map(|p| p.vertices().iter().map(of).collect())
            .collect();
        for depth in 1..=n {
            let mut next_leaves = Vec::new();
            let mut next_polys = Vec::new();
            for sec in 0..self.sectors.len() {
                for &(x, y) in &leaves {
                    let l = Grid::norm(self.branch(sec, x), self.branch(sec, y));
                    if seen.insert(l) {
                        next_leaves.push(l);
                    }
                }
                for p in &polys {
                    let mut v: Vec<u64> = p.iter().map(|&x| self.branch(sec, x)).collect();
                    v.sort_unstable();
                    let new = if v.len() >= 3 {
                        seen_polys.insert(v.clone())
                    } else {
                        v.len() == 2 && !seen.contains(&Grid::norm(v[0], v[1]))
                    };
                    if new {
                        for i in 0..v.len() {
                            if v.len() > 2 || i == 0 {
                                seen.insert(Grid::norm(v[i], v[(i + 1) % v.len()]));
                            }
                        }
                        next_polys.push(v);
                    }
                }
            }
            for &l in &next_leaves {
                lam.insert_leaf(self.leaf(l), depth);
            }
            for v in &next_polys {
                let p = Polygon::new(v.iter().map(|&x| self.angle(x)).collect())
                    .expect("distinct vertices");
                lam.insert_polygon(p, depth);
            }
            if let Some((x, y)) = grid_crossing(&seen) {
                return Err(LamError::Crossing(
                    self.leaf(x).to_string(),
                    self.leaf(y).to_string(),
                ));
            }
            stages.push(lam.len());
            leaves = next_leaves;
            polys = next_polys;
        }
        Ok(())
    }
}

/// Integer version of [`find_crossing`] on normalized `(lo, hi)` pairs.
fn grid_crossing(leaves: &HashSet<GridLeaf>) -> Option<(GridLeaf, GridLeaf)> {
    let mut iv: Vec<GridLeaf> = leaves.iter().copied().collect();
    iv.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let mut stack: Vec<GridLeaf> = Vec::new();
    for cur in iv {
        while stack.last().is_some_and(|top| top.1 <= cur.0) {
            stack.pop();
        }
        if let Some(&top) = stack.last() {
            if top.1 < cur.1 && top.0 < cur.0 {
                return Some((top, cur));
            }
        }
        stack.push(cur);
    }
    None
}

/// The forward orbit of `l` as a leaf list.
pub fn leaf_orbit(d: u32, l: &Leaf) -> Result<Vec<Leaf>> {
    let info = forward_orbit(d, &Polygon::from_leaf(l), 4096)?;
    Ok(info
        .orbit
        .iter()
        .map(|p| Leaf::new(p.vertices()[0].clone(), p.vertices()[1].clone()).expect("leaf"))
        .collect())
}

/// The endpoint of `m` where an all-critical `d`-gon can be attached without
/// meeting the orbit of `m`: `m.a()` is tried first, then `m.b()`.
pub fn mac_attachment(d: u32, m: &Leaf) -> Result<Option<Angle>> {
    let orbit = leaf_orbit(d, m)?;
    for e in [m.a(), m.b()] {
        let c = CriticalPortrait::all_critical_polygon(d, e)?;
        if is_compatible(&c, &orbit, &[]) {
            return Ok(Some(e.clone()));
        }
    }
    Ok(None)
}

/// Pullback of the orbit of a MAC leaf guided by the all-critical `d`-gon
/// attached at one of its endpoints.
pub fn canonical_mac_lamination(d: u32, m: &Leaf, n: usize) -> Result<PullbackResult> {
    let e = mac_attachment(d, m)?.ok_or_else(|| LamError::NotMac(m.to_string()))?;
    let c = CriticalPortrait::all_critical_polygon(d, &e)?;
    let seed = PullbackSet {
        leaves: leaf_orbit(d, m)?.into_iter().collect(),
        polygons: BTreeSet::new(),
    };
    pullback_lamination(&seed, &c, n)
}

/// Major sides of `p` (side arc longer than `1/d`) as `(side, arc start,
/// arc end)`, in counterclockwise order along a single adjacent chain.
pub fn major_chain(d: u32, p: &Polygon) -> Result<Vec<(Leaf, Angle, Angle)>> {
    let v = p.vertices();
    let k = v.len();
    if k < 2 {
        return Err(LamError::NotScm(format!("{p} has no sides")));
    }
    let step = Frac::recip(d as u64);
    let arcs = p.side_arcs();
    let major: Vec<bool> = arcs.iter().map(|a| *a > step).collect();
    let count = major.iter().filter(|&&m| m).count();
    if count != d as usize - 1 {
        return Err(LamError::NotScm(format!(
            "{p} has {count} sides longer than 1/{d}, expected {}",
            d - 1
        )));
    }
    // The chain starts at a major whose predecessor is not major.
    let start = (0..k)
        .find(|&i| major[i] && (count == k || !major[(i + k - 1) % k]))
        .expect("some major side");
    let mut chain = Vec::new();
    for j in 0..count {
        let i = (start + j) % k;
        if !major[i] {
            return Err(LamError::NotScm(format!("majors of {p} are not adjacent")));
        }
        let (x, y) = (v[i].clone(), v[(i + 1) % k].clone());
        chain.push((Leaf::new(x.clone(), y.clone())?, x, y));
    }
    Ok(chain)
}

/// Guiding chords of a canonical SCM lamination: under each major side, a
/// critical chord from the counterclockwise end `y` of the major arc back to
/// `y - 1/d`.
pub fn scm_guiding_chords(d: u32, p: &Polygon) -> Result<Vec<Leaf>> {
    let step = Frac::recip(d as u64);
    major_chain(d, p)?
        .into_iter()
        .map(|(_, _, y)| Leaf::new(y.rotate_back(&step), y))
        .collect()
}

/// Pullback of the orbit of an SCM polygon guided by critical chords under
/// its majors.
///
/// When the chord joining the free ends of the major chain is a diagonal
/// (the rotational case) its orbit is seeded as well, so the MAC leaf is
/// part of the result.
pub fn canonical_scm_lamination(d: u32, p: &Polygon, n: usize) -> Result<PullbackResult> {
    let chain = major_chain(d, p)?;
    let c = CriticalPortrait::new(d, scm_guiding_chords(d, p)?)?;
    let info = forward_orbit(d, p, 4096)?;
    let mut seed = PullbackSet::default();
    for q in info.orbit {
        if q.len() == 2 {
            seed.leaves.insert(q.sides().remove(0));
        } else {
            seed.polygons.insert(q);
        }
    }
    let m = Leaf::new(chain[0].1.clone(), chain[chain.len() - 1].2.clone())?;
    if !p.sides().contains(&m) {
        seed.leaves.extend(leaf_orbit(d, &m)?);
    }
    pullback_lamination(&seed, &c, n)
}
