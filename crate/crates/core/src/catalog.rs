//! Exhaustive enumeration of MAC leaves with periodic endpoints.
//!
//! Leaves are first screened on the integer grid `k / (d^n - 1)` (major,
//! orbit non-crossing and critical-polygon compatibility, all in integer
//! arithmetic); survivors are confirmed exactly with [`mac_data`].

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::circle::Angle;
use crate::correspondence::{mac_data, MacData};
use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::leaf::Leaf;

/// Largest supported `d^n - 1`.
const GRID_LIMIT: u64 = 1 << 26;

/// All MAC leaves whose endpoints have period dividing some `n <= max_period`,
/// one per orbit, sorted.
pub fn catalog(d: u32, max_period: u32) -> Result<Vec<MacData>> {
    if d < 2 {
        return Err(LamError::InvalidDegree(d));
    }
    let mut leaves: BTreeSet<Leaf> = BTreeSet::new();
    for n in 1..=max_period {
        let den = (d as u64)
            .checked_pow(n)
            .map(|x| x - 1)
            .filter(|&x| x <= GRID_LIMIT)
            .ok_or_else(|| LamError::Unsupported(format!("catalog grid {d}^{n} too large")))?;
        leaves.extend(grid_candidates(d, n, den));
    }
    // Anything other than a plain "not MAC" verdict is a real failure.
    let checked: Result<Vec<Option<MacData>>> = leaves
        .into_par_iter()
        .map(|l| match mac_data(d, &l) {
            Ok(m) => Ok(Some(m)),
            Err(LamError::NotMac(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut out: Vec<MacData> = checked?.into_iter().flatten().collect();
    out.sort_by(|x, y| x.major.cmp(&y.major));
    Ok(out)
}

fn grid_candidates(d: u32, n: u32, den: u64) -> Vec<Leaf> {
    let d64 = d as u64;
    (0..den)
        .into_par_iter()
        .flat_map_iter(move |i| {
            (1..)
                .take_while(move |len| len * d64 < den)
                .filter_map(move |len| {
                    let j = (i + len) % den;
                    screen(d64, n, den, i, j).then(|| {
                        let at = |k| Angle::from_frac(&Frac::new(k, den));
                        Leaf::new(at(i), at(j)).expect("distinct")
                    })
                })
        })
        .collect()
}

/// Integer screening of the leaf `(i/den, j/den)`, with `j - i` the short arc.
fn screen(d: u64, n: u32, den: u64, i: u64, j: u64) -> bool {
    let mut orbit = Vec::with_capacity(n as usize);
    let (mut x, mut y) = (i, j);
    let dist = |x: u64, y: u64| -> u64 {
        let l = (y + den - x) % den;
        let s = l.min(den - l);
        (s * d).abs_diff(den)
    };
    let here = dist(i, j);
    for _ in 0..n {
        orbit.push((x, y));
        x = x * d % den;
        y = y * d % den;
        if x == y {
            return false;
        }
        if dist(x, y) < here {
            return false;
        }
        if (x, y) == (i, j) || (y, x) == (i, j) {
            break;
        }
    }
    // Orbit must not cross itself.
    for p in 0..orbit.len() {
        for q in p + 1..orbit.len() {
            if crosses(den, orbit[p], orbit[q]) {
                return false;
            }
        }
    }
    // Critical polygon at an endpoint, on the grid 1/(d * den).
    let big = d * den;
    let scaled: Vec<(u64, u64)> = orbit.iter().map(|&(x, y)| (x * d, y * d)).collect();
    [i, j].iter().any(|&e| {
        let verts: Vec<u64> = (0..d).map(|k| (e * d + k * den) % big).collect();
        (0..d as usize).all(|k| {
            let side = (verts[k], verts[(k + 1) % d as usize]);
            scaled.iter().all(|&l| !crosses(big, side, l))
        })
    })
}

/// `true` when `t` lies strictly inside the counterclockwise arc `(s, e)`.
fn strictly_inside(m: u64, s: u64, e: u64, t: u64) -> bool {
    let off = (t + m - s) % m;
    off != 0 && off < (e + m - s) % m
}

fn crosses(m: u64, l1: (u64, u64), l2: (u64, u64)) -> bool {
    let (a, b) = l1;
    let (c, e) = l2;
    if a == c || a == e || b == c || b == e {
        return false;
    }
    strictly_inside(m, a, b, c) != strictly_inside(m, a, b, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_examples() {
        let leaf = |n1, d1, n2, d2| Leaf::from_fracs(n1, d1, n2, d2);
        let c = catalog(2, 3).unwrap();
        let majors: Vec<Leaf> = c.iter().map(|m| m.major.clone()).collect();
        assert!(majors.contains(&leaf(2, 7, 5, 7)));
        assert!(majors.contains(&leaf(1, 7, 4, 7)));
        assert!(majors.contains(&leaf(1, 3, 2, 3)));
        assert!(catalog(3, 2).unwrap().iter().any(|m| m.major == leaf(1, 8, 3, 8)));
        // Endpoints of period 2, though the leaf itself is fixed.
        assert!(catalog(2, 1).unwrap().is_empty());
        assert!(catalog(2, 2).unwrap().iter().any(|m| m.major == leaf(1, 3, 2, 3)));
    }

    #[test]
    fn no_sibling_duplicates() {
        let c = catalog(3, 3).unwrap();
        let step = Frac::new(1, 3);
        let majors: BTreeSet<Leaf> = c.iter().map(|m| m.major.clone()).collect();
        for m in &majors {
            for j in 1..3 {
                assert!(!majors.contains(&m.rotate(&step.mul_u64(j))));
            }
        }
    }
}
