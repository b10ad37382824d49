//! Leaves (chords of the closed disk) and polygons with vertices on the
//! circle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circle::{Angle, Arc};
use crate::error::{LamError, Result};
use crate::frac::Frac;

/// A chord between two distinct circle points.
///
/// Stored with the short arc first: travelling counterclockwise from `a` to
/// `b` covers the shorter of the two subtended arcs. Diameters put the
/// smaller endpoint first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf {
    a: Angle,
    b: Angle,
}

impl Leaf {
    pub fn new(x: Angle, y: Angle) -> Result<Self> {
        if x == y {
            return Err(LamError::RepeatedPoints(format!("leaf endpoints {x}, {y}")));
        }
        let fwd = x.ccw_to(&y);
        let back = y.ccw_to(&x);
        let keep = match fwd.cmp(&back) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => x < y,
        };
        Ok(if keep { Leaf { a: x, b: y } } else { Leaf { a: y, b: x } })
    }

    /// Literal constructor for tests and examples: `leaf(1,7, 2,7)`.
    pub fn from_fracs(n1: u64, d1: u64, n2: u64, d2: u64) -> Self {
        Leaf::new(Angle::new(n1, d1), Angle::new(n2, d2)).expect("distinct endpoints")
    }

    /// Clockwise end of the short arc.
    pub fn a(&self) -> &Angle {
        &self.a
    }

    /// Counterclockwise end of the short arc.
    pub fn b(&self) -> &Angle {
        &self.b
    }

    pub fn endpoints(&self) -> [&Angle; 2] {
        [&self.a, &self.b]
    }

    pub fn has_endpoint(&self, t: &Angle) -> bool {
        self.a == *t || self.b == *t
    }

    pub fn shares_endpoint(&self, other: &Leaf) -> bool {
        self.has_endpoint(&other.a) || self.has_endpoint(&other.b)
    }

    /// Length of the shorter subtended arc, in `(0, 1/2]`.
    pub fn length(&self) -> Frac {
        self.a.ccw_to(&self.b)
    }

    /// The short arc `[a, b]`.
    pub fn short_arc(&self) -> Arc {
        Arc::new(self.a.clone(), self.b.clone())
    }

    /// The long arc `[b, a]`.
    pub fn long_arc(&self) -> Arc {
        Arc::new(self.b.clone(), self.a.clone())
    }

    pub fn image(&self, d: u32) -> LeafImage {
        let x = self.a.sigma(d);
        let y = self.b.sigma(d);
        if x == y {
            LeafImage::Point(x)
        } else {
            LeafImage::Leaf(Leaf::new(x, y).expect("distinct"))
        }
    }

    /// Image leaf; panics for critical leaves.
    pub fn image_leaf(&self, d: u32) -> Leaf {
        match self.image(d) {
            LeafImage::Leaf(l) => l,
            LeafImage::Point(p) => panic!("critical leaf {self} collapses to {p}"),
        }
    }

    pub fn is_critical(&self, d: u32) -> bool {
        self.a.sigma(d) == self.b.sigma(d)
    }

    /// Rotates both endpoints counterclockwise by `by`.
    pub fn rotate(&self, by: &Frac) -> Leaf {
        Leaf::new(self.a.rotate(by), self.b.rotate(by)).expect("rotation keeps endpoints distinct")
    }

    pub fn crosses(&self, other: &Leaf) -> bool {
        crosses(self, other)
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p/q,r/s`, optionally in parentheses.
impl FromStr for Leaf {
    type Err = LamError;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        match inner.split(',').collect::<Vec<_>>()[..] {
            [x, y] => Leaf::new(x.trim().parse()?, y.trim().parse()?),
            _ => Err(LamError::Parse(format!("expected p/q,r/s, got {s:?}"))),
        }
    }
}

impl Serialize for Leaf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.a, &self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Leaf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[Angle; 2]>::deserialize(d)?;
        Leaf::new(x, y).map_err(serde::de::Error::custom)
    }
}

/// Image of a leaf: a leaf, or a single point when the leaf is critical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafImage {
    Leaf(Leaf),
    Point(Angle),
}

/// Length of the shorter subtended arc.
pub fn leaf_length(l: &Leaf) -> Frac {
    l.length()
}

pub fn image_leaf(d: u32, l: &Leaf) -> LeafImage {
    l.image(d)
}

/// Length of the image of any non-critical leaf of length `len`.
pub fn image_length(d: u32, len: &Frac) -> Frac {
    let x = len.mul_u64(d as u64).fract();
    let half = Frac::new(1, 2);
    if x <= half {
        x
    } else {
        Frac::one().checked_sub(&x).expect("x < 1")
    }
}

/// True iff the leaves cross in the open disk. Leaves sharing an endpoint
/// never cross.
pub fn crosses(l1: &Leaf, l2: &Leaf) -> bool {
    if l1.shares_endpoint(l2) {
        return false;
    }
    let arc = l1.short_arc();
    arc.contains_open(&l2.a) != arc.contains_open(&l2.b)
}

/// Sum of the two circle arcs separating disjoint leaves.
pub fn leaf_distance(l1: &Leaf, l2: &Leaf) -> Result<Frac> {
    if l1.shares_endpoint(l2) || crosses(l1, l2) {
        return Err(LamError::NotDisjoint(l1.to_string(), l2.to_string()));
    }
    // Label l1 as (a, b) so that l2 lies in the ccw arc (b, a).
    let (a, b) = if l1.short_arc().contains_open(&l2.a) {
        (&l1.b, &l1.a)
    } else {
        (&l1.a, &l1.b)
    };
    // l2's endpoints in ccw order after b.
    let (c, d) = if b.ccw_to(&l2.a) < b.ccw_to(&l2.b) {
        (&l2.a, &l2.b)
    } else {
        (&l2.b, &l2.a)
    };
    Ok(b.ccw_to(c).add(&d.ccw_to(a)))
}

pub fn is_critical(d: u32, l: &Leaf) -> bool {
    l.is_critical(d)
}

/// Finds a crossing pair among `leaves`, if any, in `O(n log n)`.
///
/// Each leaf is cut open at angle zero into an interval `[lo, hi]`; a family
/// of chords is non-crossing exactly when these intervals are laminar
/// (nested or disjoint, touching allowed).
pub fn find_crossing<'a, I>(leaves: I) -> Option<(Leaf, Leaf)>
where
    I: IntoIterator<Item = &'a Leaf>,
{
    let mut iv: Vec<(&Angle, &Angle, &Leaf)> = leaves
        .into_iter()
        .map(|l| {
            if l.a < l.b {
                (&l.a, &l.b, l)
            } else {
                (&l.b, &l.a, l)
            }
        })
        .collect();
    iv.sort_by(|x, y| x.0.cmp(y.0).then_with(|| y.1.cmp(x.1)));
    let mut stack: Vec<(&Angle, &Angle, &Leaf)> = Vec::new();
    for cur in iv {
        while let Some(top) = stack.last() {
            if top.1 <= cur.0 {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(top) = stack.last() {
            if top.1 < cur.1 && top.0 < cur.0 {
                return Some((top.2.clone(), cur.2.clone()));
            }
        }
        stack.push(cur);
    }
    None
}

/// A convex polygon with vertices on the circle, in counterclockwise order
/// starting from the smallest angle. One vertex is allowed and denotes a
/// point; two vertices denote a leaf.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon {
    vertices: Vec<Angle>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<Angle>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(LamError::InvalidArgument("polygon without vertices".into()));
        }
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(LamError::RepeatedPoints(format!("vertex {}", w[0])));
        }
        Ok(Polygon { vertices })
    }

    pub fn from_leaf(l: &Leaf) -> Self {
        Polygon::new(vec![l.a.clone(), l.b.clone()]).expect("distinct")
    }

    pub fn vertices(&self) -> &[Angle] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, t: &Angle) -> bool {
        self.vertices.binary_search(t).is_ok()
    }

    /// Consecutive vertex pairs `(v_i, v_{i+1})` in counterclockwise order.
    pub fn side_pairs(&self) -> Vec<(&Angle, &Angle)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        if n == 2 {
            return vec![
                (&self.vertices[0], &self.vertices[1]),
                (&self.vertices[1], &self.vertices[0]),
            ];
        }
        (0..n)
            .map(|i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
            .collect()
    }

    /// The distinct side leaves (a leaf-polygon has one).
    pub fn sides(&self) -> Vec<Leaf> {
        let mut sides: Vec<Leaf> = self
            .side_pairs()
            .into_iter()
            .map(|(x, y)| Leaf::new(x.clone(), y.clone()).expect("distinct"))
            .collect();
        sides.sort();
        sides.dedup();
        sides
    }

    /// Lengths of the arcs cut off by each side: the counterclockwise arc
    /// from `v_i` to `v_{i+1}`, which contains no other vertex.
    pub fn side_arcs(&self) -> Vec<Frac> {
        self.side_pairs()
            .into_iter()
            .map(|(x, y)| x.ccw_to(y))
            .collect()
    }

    pub fn image_vertices(&self, d: u32) -> Vec<Angle> {
        self.vertices.iter().map(|v| v.sigma(d)).collect()
    }

    /// Vertex-wise image, or `None` when two vertices collide.
    pub fn image(&self, d: u32) -> Option<Polygon> {
        let img = self.image_vertices(d);
        let p = Polygon::new(img).ok()?;
        (p.len() == self.len()).then_some(p)
    }

    /// True when the polygon, viewed as a closed convex region, meets
    /// `other` only in shared vertices (or not at all).
    pub fn is_disjoint_from(&self, other: &Polygon) -> bool {
        if self.vertices.iter().any(|v| other.contains_vertex(v)) {
            return false;
        }
        // Vertices on the circle cannot lie inside another hull, so distinct
        // vertices plus non-crossing sides means disjoint regions.
        !self.sides_cross(other)
    }

    /// True when any side of `self` crosses any side of `other`.
    pub fn sides_cross(&self, other: &Polygon) -> bool {
        let mine = self.sides();
        let theirs = other.sides();
        mine.iter().any(|x| theirs.iter().any(|y| crosses(x, y)))
    }

    /// Rotates every vertex counterclockwise by `by`.
    pub fn rotate(&self, by: &Frac) -> Polygon {
        Polygon::new(self.vertices.iter().map(|v| v.rotate(by)).collect()).expect("distinct")
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Comma-separated vertices, e.g. `1/7,2/7,4/7`; braces and spaces are
/// optional.
impl FromStr for Polygon {
    type Err = LamError;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let verts = inner.split(',').map(|v| v.trim().parse()).collect::<Result<Vec<Angle>>>()?;
        Polygon::new(verts)
    }
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Angle>::deserialize(d)?;
        Polygon::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u64, d: u64) -> Angle {
        Angle::new(n, d)
    }

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn parse_text() {
        assert_eq!("1/8,3/8".parse::<Leaf>().unwrap(), leaf(1, 8, 3, 8));
        assert_eq!("(3/8, 1/8)".parse::<Leaf>().unwrap(), leaf(1, 8, 3, 8));
        assert!("1/3".parse::<Leaf>().is_err());
        assert!("1/3,1/3".parse::<Leaf>().is_err());
        let p: Polygon = "{1/7, 4/7, 2/7}".parse().unwrap();
        assert_eq!(p.to_string(), "{1/7, 2/7, 4/7}");
        assert_eq!(p.to_string().parse::<Polygon>().unwrap(), p);
        assert!("1/7,2/14".parse::<Polygon>().is_err());
    }

    #[test]
    fn canonical_orientation() {
        let l = leaf(5, 7, 2, 7);
        assert_eq!((l.a(), l.b()), (&a(2, 7), &a(5, 7)));
        let l = leaf(6, 7, 1, 7);
        assert_eq!((l.a(), l.b()), (&a(6, 7), &a(1, 7)));
        let l = leaf(3, 4, 1, 4);
        assert_eq!((l.a(), l.b()), (&a(1, 4), &a(3, 4)));
        assert!(Leaf::new(a(1, 3), a(1, 3)).is_err());
    }

    #[test]
    fn leaf_length_examples() {
        assert_eq!(leaf_length(&leaf(1, 7, 2, 7)), Frac::new(1, 7));
        assert_eq!(leaf_length(&leaf(0, 1, 1, 2)), Frac::new(1, 2));
        assert_eq!(leaf_length(&leaf(1, 15, 11, 15)), Frac::new(1, 3));
    }

    #[test]
    fn image_leaf_examples() {
        assert_eq!(image_leaf(2, &leaf(1, 7, 2, 7)), LeafImage::Leaf(leaf(2, 7, 4, 7)));
        assert_eq!(image_leaf(2, &leaf(1, 4, 3, 4)), LeafImage::Point(a(1, 2)));
        assert_eq!(image_leaf(3, &leaf(1, 8, 3, 8)), LeafImage::Leaf(leaf(1, 8, 3, 8)));
    }

    #[test]
    fn image_length_examples() {
        assert_eq!(image_length(2, &Frac::new(2, 7)), Frac::new(3, 7));
        for d in 2..8u32 {
            let x = Frac::new(1, d as u64 + 1);
            assert_eq!(image_length(d, &x), x);
        }
        assert_eq!(image_length(3, &Frac::new(1, 4)), Frac::new(1, 4));
    }

    #[test]
    fn crossing_examples() {
        assert!(crosses(&leaf(0, 1, 1, 2), &leaf(1, 4, 3, 4)));
        assert!(!crosses(&leaf(0, 1, 1, 2), &leaf(0, 1, 1, 4)));
        assert!(!crosses(&leaf(6, 7, 1, 7), &leaf(5, 7, 2, 7)));
    }

    #[test]
    fn leaf_distance_examples() {
        let dist = |x: Leaf, y: Leaf| leaf_distance(&x, &y).unwrap();
        assert_eq!(dist(leaf(0, 1, 1, 4), leaf(1, 2, 3, 4)), Frac::new(1, 2));
        assert_eq!(dist(leaf(1, 7, 2, 7), leaf(4, 7, 5, 7)), Frac::new(5, 7));
        assert_eq!(dist(leaf(0, 1, 1, 8), leaf(1, 4, 3, 8)), Frac::new(3, 4));
        assert!(leaf_distance(&leaf(0, 1, 1, 2), &leaf(1, 4, 3, 4)).is_err());
        assert!(leaf_distance(&leaf(0, 1, 1, 2), &leaf(0, 1, 1, 4)).is_err());
    }

    #[test]
    fn critical_examples() {
        assert!(is_critical(2, &leaf(1, 4, 3, 4)));
        assert!(is_critical(3, &leaf(3, 8, 17, 24)));
        assert!(!is_critical(3, &leaf(1, 8, 3, 8)));
    }

    #[test]
    fn find_crossing_matches_pairwise() {
        let ls = vec![leaf(1, 3, 2, 3), leaf(5, 6, 1, 6), leaf(5, 12, 7, 12), leaf(11, 12, 1, 12)];
        assert!(find_crossing(&ls).is_none());
        let ls = vec![leaf(1, 3, 2, 3), leaf(0, 1, 1, 2)];
        assert!(find_crossing(&ls).is_some());
        let ls = vec![leaf(0, 1, 1, 2), leaf(0, 1, 1, 4), leaf(1, 4, 1, 2)];
        assert!(find_crossing(&ls).is_none());
    }

    #[test]
    fn polygon_sides_and_arcs() {
        let p = Polygon::new(vec![a(3, 4), a(1, 8), a(3, 8), a(1, 4)]).unwrap();
        assert_eq!(p.vertices()[0], a(1, 8));
        assert_eq!(
            p.side_arcs(),
            vec![Frac::new(1, 8), Frac::new(1, 8), Frac::new(3, 8), Frac::new(3, 8)]
        );
        let digon = Polygon::from_leaf(&leaf(2, 7, 5, 7));
        assert_eq!(digon.sides().len(), 1);
        assert_eq!(digon.side_arcs(), vec![Frac::new(3, 7), Frac::new(4, 7)]);
    }
}
