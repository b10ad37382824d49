//! The central gap of a MAC lamination and its first return.

use serde::Serialize;

use crate::error::{LamError, Result};
use crate::frac::Frac;
use crate::lamination::{gaps, Gap, Lamination};
use crate::pullback::CriticalPortrait;

/// The gap whose circle trace holds every endpoint of the portrait.
pub fn central_gap(lam: &Lamination, portrait: &CriticalPortrait) -> Option<Gap> {
    gaps(lam)
        .into_iter()
        .filter(|g| {
            portrait
                .chords()
                .iter()
                .all(|c| g.trace_contains(c.a()) && g.trace_contains(c.b()))
        })
        .max_by_key(|g| g.vertices().len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FirstReturn {
    pub time: usize,
    pub degree: usize,
}

/// Least `k` with `sigma^k` taking the gap's vertices into themselves, and
/// the number of times the boundary then wraps around itself.
pub fn first_return(d: u32, g: &Gap, max_iter: usize) -> Result<FirstReturn> {
    let v = g.vertices();
    let m = v.len();
    if m < 2 {
        return Err(LamError::InvalidArgument("gap has fewer than two vertices".into()));
    }
    let arcs: Vec<_> = g.arcs().cloned().collect();
    let mut cur = v.clone();
    for k in 1..=max_iter {
        cur = cur.iter().map(|t| t.sigma(d)).collect();
        let idx: Option<Vec<usize>> = cur.iter().map(|t| v.binary_search(t).ok()).collect();
        let Some(idx) = idx else { continue };
        let scale = (d as u64).pow(k as u32);
        let mut steps = 0usize;
        for i in 0..m {
            let j = (i + 1) % m;
            let diff = (idx[j] + m - idx[i]) % m;
            let is_arc = arcs
                .iter()
                .any(|a| a.start == v[i] && a.end == v[j]);
            if is_arc {
                let len = v[i].ccw_to(&v[j]).mul_u64(scale);
                steps += m * whole_part(&len) + diff;
            } else {
                steps += diff;
            }
        }
        if !steps.is_multiple_of(m) {
            return Err(LamError::InvalidArgument(format!(
                "boundary of gap does not close up under sigma^{k}"
            )));
        }
        return Ok(FirstReturn { time: k, degree: steps / m });
    }
    Err(LamError::NotPeriodic(max_iter))
}

fn whole_part(x: &Frac) -> usize {
    let w = x.checked_sub(&x.fract()).expect("fract <= x");
    let (n, _) = w.to_u64_pair().expect("small");
    n as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf::Leaf;
    use crate::pullback::canonical_mac_lamination;

    fn leaf(n1: u64, d1: u64, n2: u64, d2: u64) -> Leaf {
        Leaf::from_fracs(n1, d1, n2, d2)
    }

    #[test]
    fn first_return_examples() {
        for (d, m, expect) in [
            (2, leaf(1, 3, 2, 3), (2, 2)),
            (2, leaf(2, 7, 5, 7), (3, 2)),
            (3, leaf(1, 8, 3, 8), (2, 3)),
        ] {
            let r = canonical_mac_lamination(d, &m, 7).unwrap();
            let g = central_gap(&r.lamination, &r.portrait).unwrap();
            let fr = first_return(d, &g, 20).unwrap();
            assert_eq!((fr.time, fr.degree), expect, "{m}");
        }
    }
}
