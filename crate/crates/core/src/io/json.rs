//! Canonical JSON documents for laminations.
//!
//! ```text
//! {"degree":2,"leaves":[["1/3","2/3",0],["5/6","1/6",1]],"metadata":{...},
//!  "polygons":[["1/7","2/7","4/7"]],"portrait":[["1/6","2/3"]]}
//! ```
//!
//! Keys are written in sorted order, leaves and polygons in their canonical
//! order, empty sections omitted. A leaf may carry its pullback depth as a
//! third element.

use std::collections::{BTreeMap, HashMap};

use serde_json::{Map, Value};

use crate::circle::Angle;
use crate::error::{LamError, Result};
use crate::lamination::Lamination;
use crate::leaf::{find_crossing, Leaf, Polygon};
use crate::pullback::{CriticalPortrait, PullbackResult};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DocLeaf {
    pub leaf: Leaf,
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LamDocument {
    pub degree: u32,
    pub leaves: Vec<DocLeaf>,
    pub polygons: Vec<Polygon>,
    pub portrait: Option<Vec<Leaf>>,
    pub metadata: BTreeMap<String, Value>,
}

impl LamDocument {
    pub fn new(degree: u32) -> Self {
        LamDocument {
            degree,
            ..Default::default()
        }
    }

    pub fn from_lamination(lam: &Lamination) -> Self {
        let mut doc = LamDocument::new(lam.degree());
        doc.leaves = lam
            .leaves()
            .map(|(l, t)| DocLeaf {
                leaf: l.clone(),
                depth: Some(t),
            })
            .collect();
        doc.polygons = lam.polygons().map(|(p, _)| p.clone()).collect();
        doc.canonicalize();
        doc
    }

    pub fn from_pullback(r: &PullbackResult) -> Self {
        let mut doc = LamDocument::from_lamination(&r.lamination);
        doc.portrait = Some(r.portrait.chords().to_vec());
        doc.canonicalize();
        doc
    }

    /// Sorts every list into canonical order.
    pub fn canonicalize(&mut self) {
        self.leaves.sort();
        self.polygons.sort();
        if let Some(p) = &mut self.portrait {
            p.sort();
        }
    }

    /// The leaves and polygons as a lamination; missing depths count as 0.
    pub fn to_lamination(&self) -> Result<Lamination> {
        let mut lam = Lamination::new(self.degree)?;
        for l in &self.leaves {
            lam.insert_leaf(l.leaf.clone(), l.depth.unwrap_or(0));
        }
        for p in &self.polygons {
            let depth = p
                .sides()
                .iter()
                .filter_map(|s| lam.depth_of(s))
                .min()
                .unwrap_or(0);
            lam.insert_polygon(p.clone(), depth);
        }
        if let Some((x, y)) = lam.find_crossing() {
            return Err(LamError::Crossing(x.to_string(), y.to_string()));
        }
        Ok(lam)
    }

    pub fn critical_portrait(&self) -> Result<Option<CriticalPortrait>> {
        self.portrait
            .as_ref()
            .map(|c| CriticalPortrait::new(self.degree, c.clone()))
            .transpose()
    }

    fn to_value(&self) -> Value {
        let angle = |t: &Angle| Value::String(t.to_string());
        let mut m = Map::new();
        m.insert("degree".into(), Value::from(self.degree));
        if !self.leaves.is_empty() {
            let leaves = self
                .leaves
                .iter()
                .map(|l| {
                    let mut v = vec![angle(l.leaf.a()), angle(l.leaf.b())];
                    if let Some(t) = l.depth {
                        v.push(Value::from(t));
                    }
                    Value::Array(v)
                })
                .collect();
            m.insert("leaves".into(), Value::Array(leaves));
        }
        if !self.polygons.is_empty() {
            let polys = self
                .polygons
                .iter()
                .map(|p| Value::Array(p.vertices().iter().map(angle).collect()))
                .collect();
            m.insert("polygons".into(), Value::Array(polys));
        }
        if let Some(p) = &self.portrait {
            let chords = p
                .iter()
                .map(|c| Value::Array(vec![angle(c.a()), angle(c.b())]))
                .collect();
            m.insert("portrait".into(), Value::Array(chords));
        }
        if !self.metadata.is_empty() {
            let meta = self
                .metadata
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            m.insert("metadata".into(), Value::Object(meta));
        }
        Value::Object(m)
    }
}

/// Canonical compact serialization.
pub fn write_lam_json(doc: &LamDocument) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    serde_json::to_string(&doc.to_value()).expect("values always serialize")
}

/// Indented form of [`write_lam_json`], for reading.
pub fn write_lam_json_pretty(doc: &LamDocument) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    serde_json::to_string_pretty(&doc.to_value()).expect("values always serialize")
}

/// Attaches a location to an angle error, keeping its kind.
fn located(e: LamError, at: &str) -> LamError {
    match e {
        LamError::Unreduced(s) => LamError::Unreduced(format!("{s} at {at}")),
        LamError::OutOfRange(s) => LamError::OutOfRange(format!("{s} at {at}")),
        other => LamError::Parse(format!("{at}: {other}")),
    }
}

fn parse_angle(v: &Value, at: &str) -> Result<Angle> {
    let s = v
        .as_str()
        .ok_or_else(|| LamError::Parse(format!("{at}: expected a fraction string")))?;
    s.parse().map_err(|e| located(e, at))
}

fn parse_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| LamError::Parse(format!("{at}: expected an array")))
}

fn parse_leaf(v: &[Value], at: &str) -> Result<Leaf> {
    let x = parse_angle(&v[0], &format!("{at}[0]"))?;
    let y = parse_angle(&v[1], &format!("{at}[1]"))?;
    Leaf::new(x, y).map_err(|e| LamError::Parse(format!("{at}: {e}")))
}

/// Parses and validates a document: reduced fractions in `[0, 1)`, no
/// repeated or crossing leaves, a valid portrait if present.
pub fn parse_lam_json(text: &str) -> Result<LamDocument> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| LamError::Parse(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| LamError::Parse("document must be an object".into()))?;
    if let Some(k) = obj
        .keys()
        .find(|k| !["degree", "leaves", "polygons", "portrait", "metadata"].contains(&k.as_str()))
    {
        return Err(LamError::Parse(format!("unknown key {k:?}")));
    }
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| LamError::Parse("degree: expected a positive integer".into()))?;
    let degree = u32::try_from(degree).map_err(|_| LamError::Parse("degree: too large".into()))?;
    if degree < 2 {
        return Err(LamError::InvalidDegree(degree));
    }
    let mut doc = LamDocument::new(degree);
    // Every leaf of the document with where it came from.
    let mut origin: HashMap<Leaf, String> = HashMap::new();

    if let Some(v) = obj.get("leaves") {
        for (i, item) in parse_array(v, "leaves")?.iter().enumerate() {
            let at = format!("leaves[{i}]");
            let parts = parse_array(item, &at)?;
            if !(2..=3).contains(&parts.len()) {
                return Err(LamError::Parse(format!("{at}: expected [a, b] or [a, b, depth]")));
            }
            let leaf = parse_leaf(parts, &at)?;
            let depth = match parts.get(2) {
                None => None,
                Some(t) => Some(t.as_u64().ok_or_else(|| {
                    LamError::Parse(format!("{at}[2]: depth must be a non-negative integer"))
                })? as usize),
            };
            if let Some(prev) = origin.insert(leaf.clone(), at.clone()) {
                return Err(LamError::Parse(format!("{at}: repeats {prev}")));
            }
            doc.leaves.push(DocLeaf { leaf, depth });
        }
    }
    if let Some(v) = obj.get("polygons") {
        for (i, item) in parse_array(v, "polygons")?.iter().enumerate() {
            let at = format!("polygons[{i}]");
            let verts = parse_array(item, &at)?
                .iter()
                .enumerate()
                .map(|(k, t)| parse_angle(t, &format!("{at}[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            if verts.len() < 3 {
                return Err(LamError::Parse(format!("{at}: needs at least three vertices")));
            }
            let p = Polygon::new(verts).map_err(|e| LamError::Parse(format!("{at}: {e}")))?;
            for s in p.sides() {
                origin.entry(s).or_insert_with(|| at.clone());
            }
            doc.polygons.push(p);
        }
    }
    if let Some((x, y)) = find_crossing(origin.keys()) {
        return Err(LamError::Crossing(
            format!("{x} at {}", origin[&x]),
            format!("{y} at {}", origin[&y]),
        ));
    }
    if let Some(v) = obj.get("portrait") {
        let chords = parse_array(v, "portrait")?
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let at = format!("portrait[{i}]");
                let parts = parse_array(c, &at)?;
                if parts.len() != 2 {
                    return Err(LamError::Parse(format!("{at}: expected [a, b]")));
                }
                parse_leaf(parts, &at)
            })
            .collect::<Result<Vec<_>>>()?;
        CriticalPortrait::new(degree, chords.clone())?;
        doc.portrait = Some(chords);
    }
    if let Some(v) = obj.get("metadata") {
        let m = v
            .as_object()
            .ok_or_else(|| LamError::Parse("metadata: expected an object".into()))?;
        doc.metadata = m.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    }
    doc.canonicalize();
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pullback::canonical_mac_lamination;

    #[test]
    fn minimal_roundtrip() {
        let text = r#"{"degree":2,"leaves":[["1/3","2/3"]]}"#;
        let doc = parse_lam_json(text).unwrap();
        assert_eq!(doc.leaves.len(), 1);
        assert_eq!(write_lam_json(&doc), text);
    }

    #[test]
    fn basilica_depths() {
        let r = canonical_mac_lamination(2, &Leaf::from_fracs(1, 3, 2, 3), 2).unwrap();
        let doc = LamDocument::from_pullback(&r);
        let mut depths: Vec<_> = doc.leaves.iter().map(|l| l.depth.unwrap()).collect();
        depths.sort();
        assert_eq!(depths, vec![0, 1, 2, 2]);
        let text = write_lam_json(&doc);
        assert_eq!(write_lam_json(&parse_lam_json(&text).unwrap()), text);
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse_lam_json(r#"{"degree":2,"leaves":[["2/6","2/3"]]}"#).unwrap_err();
        assert!(matches!(e, LamError::Unreduced(ref s) if s.contains("leaves[0][0]")), "{e}");
        let e = parse_lam_json(r#"{"degree":2,"leaves":[["1/3","4/3"]]}"#).unwrap_err();
        assert!(matches!(e, LamError::OutOfRange(_)), "{e}");
        let e = parse_lam_json(r#"{"degree":2,"leaves":[["0/1","1/2"],["1/4","3/4"]]}"#)
            .unwrap_err();
        assert!(matches!(e, LamError::Crossing(ref a, ref b)
            if a.contains("leaves[") && b.contains("leaves[")), "{e}");
        assert!(parse_lam_json(r#"{"degree":1}"#).is_err());
        assert!(parse_lam_json(r#"{"degree":2,"extra":1}"#).is_err());
        assert!(parse_lam_json(r#"{"degree":2,"portrait":[["0/1","1/4"]]}"#).is_err());
    }

    #[test]
    fn canonical_order_and_idempotence() {
        let text = r#"{"metadata":{"z":1,"a":[1,2]},"leaves":[["2/3","1/3",2],["1/6","5/6"]],"degree":2}"#;
        let once = write_lam_json(&parse_lam_json(text).unwrap());
        assert_eq!(
            once,
            r#"{"degree":2,"leaves":[["1/3","2/3",2],["5/6","1/6"]],"metadata":{"a":[1,2],"z":1}}"#
        );
        assert_eq!(write_lam_json(&parse_lam_json(&once).unwrap()), once);
    }
}
