//! Finite laminations: leaf sets with generation depth, their complementary
//! gaps, gap degrees, sibling collections and the invariance checker.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{Angle, Arc};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::{crosses, find_crossing, Leaf, LeafImage, Polygon};

/// A degree-`d` finite lamination. Each leaf carries the pullback stage at
/// which it first appeared (0 for generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lamination {
    degree: u32,
    leaves: BTreeMap<Leaf, usize>,
    polygons: BTreeMap<Polygon, usize>,
}

impl Lamination {
    pub fn new(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(LamError::InvalidDegree(degree));
        }
        Ok(Lamination {
            degree,
            leaves: BTreeMap::new(),
            polygons: BTreeMap::new(),
        })
    }

    /// Builds a depth-0 lamination from leaves, rejecting crossings.
    pub fn from_leaves<I: IntoIterator<Item = Leaf>>(degree: u32, leaves: I) -> Result<Self> {
        let mut lam = Lamination::new(degree)?;
        for l in leaves {
            lam.insert_leaf(l, 0);
        }
        if let Some((x, y)) = lam.find_crossing() {
            return Err(LamError::Crossing(x.to_string(), y.to_string()));
        }
        Ok(lam)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Inserts a leaf, keeping the smaller depth if already present.
    pub fn insert_leaf(&mut self, leaf: Leaf, depth: usize) {
        self.leaves
            .entry(leaf)
            .and_modify(|d| *d = (*d).min(depth))
            .or_insert(depth);
    }

    /// Inserts a polygon and its sides. One-vertex polygons are ignored.
    pub fn insert_polygon(&mut self, poly: Polygon, depth: usize) {
        if poly.len() < 2 {
            return;
        }
        for s in poly.sides() {
            self.insert_leaf(s, depth);
        }
        if poly.len() > 2 {
            self.polygons
                .entry(poly)
                .and_modify(|d| *d = (*d).min(depth))
                .or_insert(depth);
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&Leaf, usize)> {
        self.leaves.iter().map(|(l, d)| (l, *d))
    }

    pub fn leaf_set(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.keys()
    }

    /// Polygons with at least three vertices, with depth.
    pub fn polygons(&self) -> impl Iterator<Item = (&Polygon, usize)> {
        self.polygons.iter().map(|(p, d)| (p, *d))
    }

    pub fn contains(&self, l: &Leaf) -> bool {
        self.leaves.contains_key(l)
    }

    /// Polygons of two or fewer vertices are stored only as leaves.
    pub fn contains_polygon(&self, p: &Polygon) -> bool {
        if p.len() >= 3 {
            self.polygons.contains_key(p)
        } else {
            p.sides().iter().all(|l| self.contains(l))
        }
    }

    pub fn depth_of(&self, l: &Leaf) -> Option<usize> {
        self.leaves.get(l).copied()
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.leaves.values().copied().max().unwrap_or(0)
    }

    /// The sub-lamination of leaves with depth at most `n`.
    pub fn truncated(&self, n: usize) -> Lamination {
        Lamination {
            degree: self.degree,
            leaves: self
                .leaves
                .iter()
                .filter(|(_, &d)| d <= n)
                .map(|(l, &d)| (l.clone(), d))
                .collect(),
            polygons: self
                .polygons
                .iter()
                .filter(|(_, &d)| d <= n)
                .map(|(p, &d)| (p.clone(), d))
                .collect(),
        }
    }

    pub fn find_crossing(&self) -> Option<(Leaf, Leaf)> {
        find_crossing(self.leaves.keys())
    }

    /// All sorted, distinct leaf endpoints.
    pub fn vertices(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self
            .leaves
            .keys()
            .flat_map(|l| [l.a().clone(), l.b().clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

/// One piece of a gap boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundaryPiece {
    Leaf(Leaf),
    Arc(Arc),
}

/// Closure of a complementary region of a finite lamination. The boundary
/// alternates (possibly degenerate) circle arcs and leaves, listed
/// counterclockwise around the region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    boundary: Vec<BoundaryPiece>,
    whole_disk: bool,
}

impl Gap {
    pub fn whole_disk() -> Self {
        Gap {
            boundary: Vec::new(),
            whole_disk: true,
        }
    }

    pub fn boundary(&self) -> &[BoundaryPiece] {
        &self.boundary
    }

    pub fn is_whole_disk(&self) -> bool {
        self.whole_disk
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.boundary.iter().filter_map(|p| match p {
            BoundaryPiece::Leaf(l) => Some(l),
            BoundaryPiece::Arc(_) => None,
        })
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.boundary.iter().filter_map(|p| match p {
            BoundaryPiece::Arc(a) => Some(a),
            BoundaryPiece::Leaf(_) => None,
        })
    }

    pub fn has_leaf(&self, l: &Leaf) -> bool {
        self.leaves().any(|x| x == l)
    }

    /// Total length of the circle arcs in the boundary.
    pub fn arc_total(&self) -> Frac {
        if self.whole_disk {
            return Frac::one();
        }
        self.arcs().fold(Frac::zero(), |acc, a| acc.add(&a.length()))
    }

    /// True when the boundary has no circle arcs: a finite polygon gap.
    pub fn is_polygon(&self) -> bool {
        !self.whole_disk && self.arcs().next().is_none()
    }

    /// Sorted distinct boundary points on the circle.
    pub fn vertices(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self
            .boundary
            .iter()
            .flat_map(|p| match p {
                BoundaryPiece::Leaf(l) => [l.a().clone(), l.b().clone()],
                BoundaryPiece::Arc(a) => [a.start.clone(), a.end.clone()],
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// True when `t` lies on the gap's circle trace (a vertex or a point of
    /// a boundary arc).
    pub fn trace_contains(&self, t: &Angle) -> bool {
        if self.whole_disk {
            return true;
        }
        self.boundary.iter().any(|p| match p {
            BoundaryPiece::Leaf(l) => l.has_endpoint(t),
            BoundaryPiece::Arc(a) => a.contains_closed(t),
        })
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.whole_disk {
            return write!(f, "<disk>");
        }
        write!(f, "<")?;
        for (i, p) in self.boundary.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match p {
                BoundaryPiece::Leaf(l) => write!(f, "{l}")?,
                BoundaryPiece::Arc(a) => write!(f, "{a}")?,
            }
        }
        write!(f, ">")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum DirEdge {
    /// Circle arc from vertex `i` to vertex `i + 1`.
    Arc(usize),
    /// Leaf `k` traversed from its `a` endpoint (true) or `b` endpoint.
    Chord(usize, bool),
}

/// The complementary regions of a non-crossing finite leaf set.
///
/// Faces are traced with the region kept on the left: circle arcs are walked
/// counterclockwise, and at each vertex the walk turns onto the next edge
/// clockwise from the one it arrived on.
pub fn gaps(lam: &Lamination) -> Vec<Gap> {
    gaps_of_leaves(&lam.leaves.keys().cloned().collect::<Vec<_>>())
}

pub(crate) fn gaps_of_leaves(leaves: &[Leaf]) -> Vec<Gap> {
    if leaves.is_empty() {
        return vec![Gap::whole_disk()];
    }
    let mut verts: Vec<Angle> = leaves
        .iter()
        .flat_map(|l| [l.a().clone(), l.b().clone()])
        .collect();
    verts.sort();
    verts.dedup();
    let m = verts.len();
    let index = |t: &Angle| verts.binary_search(t).expect("endpoint is a vertex");

    // Chord neighbours per vertex, sorted by ccw distance from the vertex.
    let mut nbrs: Vec<Vec<(Frac, usize, DirEdge)>> = vec![Vec::new(); m];
    for (k, l) in leaves.iter().enumerate() {
        let ia = index(l.a());
        let ib = index(l.b());
        nbrs[ia].push((l.a().ccw_to(l.b()), ib, DirEdge::Chord(k, true)));
        nbrs[ib].push((l.b().ccw_to(l.a()), ia, DirEdge::Chord(k, false)));
    }
    for n in &mut nbrs {
        n.sort_by(|x, y| x.0.cmp(&y.0));
    }

    let target = |e: DirEdge| -> usize {
        match e {
            DirEdge::Arc(i) => (i + 1) % m,
            DirEdge::Chord(k, from_a) => {
                let l = &leaves[k];
                index(if from_a { l.b() } else { l.a() })
            }
        }
    };
    let next = |e: DirEdge| -> DirEdge {
        let v = target(e);
        let list = &nbrs[v];
        let pos = match e {
            DirEdge::Arc(_) => list.len(),
            DirEdge::Chord(k, from_a) => {
                let l = &leaves[k];
                let u = if from_a { l.a() } else { l.b() };
                let s = verts[v].ccw_to(u);
                list.partition_point(|x| x.0 < s)
            }
        };
        if pos == 0 {
            DirEdge::Arc(v)
        } else {
            list[pos - 1].2
        }
    };

    let mut all_edges: Vec<DirEdge> = (0..m).map(DirEdge::Arc).collect();
    for k in 0..leaves.len() {
        all_edges.push(DirEdge::Chord(k, true));
        all_edges.push(DirEdge::Chord(k, false));
    }
    let mut seen: HashSet<DirEdge> = HashSet::new();
    let mut out = Vec::new();
    for &start in &all_edges {
        if seen.contains(&start) {
            continue;
        }
        let mut boundary = Vec::new();
        let mut e = start;
        loop {
            seen.insert(e);
            boundary.push(match e {
                DirEdge::Arc(i) => {
                    BoundaryPiece::Arc(Arc::new(verts[i].clone(), verts[(i + 1) % m].clone()))
                }
                DirEdge::Chord(k, _) => BoundaryPiece::Leaf(leaves[k].clone()),
            });
            e = next(e);
            if e == start {
                break;
            }
        }
        out.push(Gap {
            boundary,
            whole_disk: false,
        });
    }
    out
}

/// The gap of `lam` containing `t` in its circle trace strictly inside a
/// boundary arc.
pub fn gap_containing(gaps: &[Gap], t: &Angle) -> Option<usize> {
    gaps.iter()
        .position(|g| g.is_whole_disk() || g.arcs().any(|a| a.contains_open(t)))
}

/// `1 +` the criticality a gap can hold: the largest number of independent
/// critical chords (counted as a forest, so an all-critical k-gon counts
/// `k - 1`) that fit inside the gap with endpoints on its circle trace.
///
/// Candidate endpoints are the gap's vertices and their `j/d` translates that
/// land on the gap's arcs. Among these an interval dynamic program finds the
/// best non-crossing configuration.
pub fn gap_degree(d: u32, g: &Gap) -> usize {
    if g.is_whole_disk() {
        return d as usize;
    }
    let step = Frac::recip(d as u64);
    let mut cands: Vec<Angle> = Vec::new();
    let arcs: Vec<&Arc> = g.arcs().collect();
    for v in g.vertices() {
        let mut t = v.clone();
        for _ in 0..d {
            if t == v || arcs.iter().any(|a| a.contains_closed(&t)) {
                cands.push(t.clone());
            }
            t = t.rotate(&step);
        }
    }
    cands.sort();
    cands.dedup();
    1 + max_critical_rank(d, &cands)
}

/// Maximum forest rank of a non-crossing set of chords joining points of
/// `pts` (sorted) that share a `sigma_d` image.
fn max_critical_rank(d: u32, pts: &[Angle]) -> usize {
    let m = pts.len();
    if m < 2 {
        return 0;
    }
    let mut class_of: HashMap<Angle, usize> = HashMap::new();
    let cls: Vec<usize> = pts
        .iter()
        .map(|p| {
            let n = class_of.len();
            *class_of.entry(p.sigma(d)).or_insert(n)
        })
        .collect();
    // same[i] = later indices sharing i's class.
    let mut same: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if cls[i] == cls[j] {
                same[i].push(j);
            }
        }
    }
    if same.iter().all(|s| s.is_empty()) {
        return 0;
    }
    // f[i][j] over the closed index interval [i, j]; 0 when empty.
    let mut f = vec![vec![0u16; m + 1]; m + 1];
    let get = |f: &Vec<Vec<u16>>, i: usize, j: isize| -> u16 {
        if j < i as isize {
            0
        } else {
            f[i][j as usize]
        }
    };
    for i in (0..m).rev() {
        for j in i..m {
            let mut best = get(&f, i + 1, j as isize);
            for &k in &same[i] {
                if k > j {
                    break;
                }
                let v = get(&f, i + 1, k as isize - 1) + 1 + get(&f, k, j as isize);
                best = best.max(v);
            }
            f[i][j] = best;
        }
    }
    f[0][m - 1] as usize
}

/// Every full sibling collection over `target`: `d` pairwise disjoint leaves
/// each mapping onto `target`.
pub fn sibling_collections(d: u32, target: &Leaf) -> Vec<Vec<Leaf>> {
    let xs = target.a().preimages(d);
    let ys = target.b().preimages(d);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..d as usize).collect();
    permute(&mut perm, 0, &mut |p| {
        let leaves: Vec<Leaf> = xs
            .iter()
            .zip(p)
            .map(|(x, &j)| Leaf::new(x.clone(), ys[j].clone()).expect("distinct fibres"))
            .collect();
        let ok = (0..leaves.len())
            .all(|i| (i + 1..leaves.len()).all(|j| !crosses(&leaves[i], &leaves[j])));
        if ok {
            let mut leaves = leaves;
            leaves.sort();
            out.push(leaves);
        }
    });
    out.sort();
    out
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Per-leaf result of [`check_invariance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafCheck {
    pub leaf: Leaf,
    pub depth: usize,
    pub forward: bool,
    /// `None` when the leaf is too deep for its preimages to exist yet.
    pub backward: Option<bool>,
    pub sibling: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub max_depth: usize,
    pub crossing: Option<(Leaf, Leaf)>,
    pub leaves: Vec<LeafCheck>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.crossing.is_none()
            && self.leaves.iter().all(|c| {
                c.forward && c.backward.unwrap_or(true) && c.sibling.unwrap_or(true)
            })
    }

    pub fn failures(&self) -> impl Iterator<Item = &LeafCheck> {
        self.leaves.iter().filter(|c| {
            !c.forward || c.backward == Some(false) || c.sibling == Some(false)
        })
    }
}

/// Checks forward, backward and sibling invariance, depth-aware: backward and
/// sibling conditions are only judged on leaves shallower than the deepest
/// generated stage.
pub fn check_invariance(lam: &Lamination) -> InvarianceReport {
    let d = lam.degree;
    let max_depth = lam.max_depth();
    let crossing = lam.find_crossing();
    let mut preimages: HashMap<Leaf, Vec<Leaf>> = HashMap::new();
    for l in lam.leaves.keys() {
        if let LeafImage::Leaf(img) = l.image(d) {
            preimages.entry(img).or_default().push(l.clone());
        }
    }
    let entries: Vec<(&Leaf, usize)> = lam.leaves().collect();
    let leaves = entries
        .par_iter()
        .map(|&(l, depth)| {
            let image = l.image(d);
            let forward = match &image {
                LeafImage::Point(_) => true,
                LeafImage::Leaf(img) => lam.contains(img),
            };
            let judged = depth < max_depth;
            let backward = judged.then(|| preimages.contains_key(l));
            let sibling = judged.then(|| match &image {
                LeafImage::Point(_) => true,
                LeafImage::Leaf(img) => {
                    has_full_collection(d as usize, l, preimages.get(img).map_or(&[][..], |v| v))
                }
            });
            LeafCheck {
                leaf: l.clone(),
                depth,
                forward,
                backward,
                sibling,
            }
        })
        .collect();
    InvarianceReport {
        max_depth,
        crossing,
        leaves,
    }
}

/// True when `cands` holds `d - 1` leaves that together with `l` are
/// pairwise disjoint.
fn has_full_collection(d: usize, l: &Leaf, cands: &[Leaf]) -> bool {
    let disjoint = |x: &Leaf, y: &Leaf| !x.shares_endpoint(y) && !crosses(x, y);
    let pool: Vec<&Leaf> = cands.iter().filter(|c| *c != l && disjoint(c, l)).collect();
    fn extend(need: usize, chosen: &mut Vec<usize>, pool: &[&Leaf], from: usize, ok: &dyn Fn(&Leaf, &Leaf) -> bool) -> bool {
        if need == 0 {
            return true;
        }
        for i in from..pool.len() {
            if chosen.iter().all(|&c| ok(pool[c], pool[i])) {
                chosen.push(i);
                if extend(need - 1, chosen, pool, i + 1, ok) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(d - 1, &mut Vec::new(), &pool, 0, &disjoint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn gap_counts() {
        let lam = Lamination::from_leaves(2, [leaf(1, 3, 2, 3)]).unwrap();
        assert_eq!(gaps(&lam).len(), 2);
        let lam = Lamination::from_leaves(2, [leaf(1, 3, 2, 3), leaf(5, 6, 1, 6)]).unwrap();
        let gs = gaps(&lam);
        assert_eq!(gs.len(), 3);
        let middle = gs
            .iter()
            .find(|g| g.leaves().count() == 2)
            .expect("middle gap");
        assert_eq!(middle.arcs().count(), 2);
        assert_eq!(middle.arc_total(), Frac::new(1, 3));
        assert_eq!(gaps(&Lamination::new(2).unwrap()), vec![Gap::whole_disk()]);
    }

    #[test]
    fn triangle_has_polygon_gap() {
        let lam = Lamination::from_leaves(
            2,
            [leaf(1, 7, 2, 7), leaf(2, 7, 4, 7), leaf(1, 7, 4, 7)],
        )
        .unwrap();
        let gs = gaps(&lam);
        assert_eq!(gs.len(), 4);
        assert_eq!(gs.iter().filter(|g| g.is_polygon()).count(), 1);
        let total = gs.iter().fold(Frac::zero(), |acc, g| acc.add(&g.arc_total()));
        assert_eq!(total, Frac::one());
    }

    #[test]
    fn gap_degree_examples() {
        let lam = Lamination::from_leaves(2, [leaf(1, 3, 2, 3), leaf(5, 6, 1, 6)]).unwrap();
        let gs = gaps(&lam);
        let middle = gs.iter().find(|g| g.leaves().count() == 2).unwrap();
        assert_eq!(gap_degree(2, middle), 2);
        let side = gs.iter().find(|g| g.has_leaf(&leaf(1, 3, 2, 3)) && g.leaves().count() == 1).unwrap();
        assert_eq!(gap_degree(2, side), 1);

        // A small triangle: every side and the total span are below 1/d.
        let lam = Lamination::from_leaves(
            3,
            [leaf(1, 26, 2, 26), leaf(2, 26, 4, 26), leaf(1, 26, 4, 26)],
        )
        .unwrap();
        let tri = gaps(&lam).into_iter().find(|g| g.is_polygon()).unwrap();
        assert_eq!(gap_degree(3, &tri), 1);
        assert_eq!(gap_degree(3, &Gap::whole_disk()), 3);
    }

    #[test]
    fn sibling_collection_examples() {
        let cols = sibling_collections(2, &leaf(1, 3, 2, 3));
        assert_eq!(
            cols,
            vec![
                vec![leaf(1, 6, 1, 3), leaf(2, 3, 5, 6)],
                vec![leaf(1, 3, 2, 3), leaf(5, 6, 1, 6)],
            ]
        );
        let cols = sibling_collections(2, &leaf(0, 1, 1, 2));
        assert!(cols.contains(&vec![leaf(0, 1, 1, 4), leaf(1, 2, 3, 4)]));
        let cols = sibling_collections(3, &leaf(1, 8, 3, 8));
        assert!(cols.contains(&vec![
            leaf(1, 24, 3, 24),
            leaf(9, 24, 11, 24),
            leaf(17, 24, 19, 24)
        ]));
        for c in &cols {
            assert_eq!(c.len(), 3);
            for l in c {
                assert_eq!(l.image_leaf(3), leaf(1, 8, 3, 8));
            }
        }
    }

    #[test]
    fn invariance_failures() {
        assert!(Lamination::from_leaves(2, [leaf(1, 3, 2, 3), leaf(0, 1, 1, 2)]).is_err());
        let mut lam = Lamination::new(2).unwrap();
        lam.insert_leaf(leaf(1, 3, 2, 3), 0);
        lam.insert_leaf(leaf(0, 1, 1, 2), 0);
        assert!(check_invariance(&lam).crossing.is_some());

        let lam = Lamination::from_leaves(2, [leaf(1, 7, 2, 7)]).unwrap();
        let rep = check_invariance(&lam);
        assert!(!rep.passed());
        assert!(!rep.leaves[0].forward);
    }
}
