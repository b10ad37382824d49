use ::lamination::io::{parse_lam_json, write_lam_json, LamDocument};
use ::lamination::leaf::{crosses, find_crossing, image_length, leaf_distance};
use ::lamination::orbits::growth_steps;
use ::lamination::pullback::canonical_mac_lamination;
use ::lamination::{Angle, Frac, Leaf, LeafImage};
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = Angle> {
    (1u64..=600).prop_flat_map(|q| (0..q).prop_map(move |p| Angle::new(p, q)))
}

fn leaf() -> impl Strategy<Value = Leaf> {
    (angle(), angle())
        .prop_filter("distinct endpoints", |(a, b)| a != b)
        .prop_map(|(a, b)| Leaf::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn angle_text_roundtrip(t in angle()) {
        prop_assert_eq!(t.to_string().parse::<Angle>().unwrap(), t);
    }

    #[test]
    fn preimages_form_the_fiber(t in angle(), d in 2u32..=6) {
        let pre = t.preimages(d);
        prop_assert_eq!(pre.len(), d as usize);
        for p in &pre {
            prop_assert_eq!(p.sigma(d), t.clone());
        }
        // Consecutive preimages are 1/d apart.
        for w in pre.windows(2) {
            prop_assert_eq!(w[0].ccw_to(&w[1]), Frac::recip(d as u64));
        }
    }

    #[test]
    fn sigma_composes(t in angle(), d in 2u32..=5, m in 0usize..6, n in 0usize..6) {
        prop_assert_eq!(t.sigma_n(d, m).sigma_n(d, n), t.sigma_n(d, m + n));
        prop_assert_eq!(t.sigma_n(d, 2), t.sigma_n(d * d, 1));
    }

    #[test]
    fn image_length_formula(l in leaf(), d in 2u32..=6) {
        match l.image(d) {
            LeafImage::Leaf(m) => prop_assert_eq!(m.length(), image_length(d, &l.length())),
            LeafImage::Point(_) => prop_assert!(image_length(d, &l.length()).is_zero()),
        }
    }

    #[test]
    fn crossing_is_symmetric(l in leaf(), m in leaf()) {
        prop_assert_eq!(crosses(&l, &m), crosses(&m, &l));
        prop_assert!(!crosses(&l, &l));
        if !crosses(&l, &m) && !l.shares_endpoint(&m) {
            let dist = leaf_distance(&l, &m).unwrap();
            prop_assert_eq!(&dist, &leaf_distance(&m, &l).unwrap());
            prop_assert!(dist < Frac::one());
        } else {
            prop_assert!(leaf_distance(&l, &m).is_err());
        }
    }

    #[test]
    fn sweep_agrees_with_pairwise(ls in proptest::collection::vec(leaf(), 0..12)) {
        let pairwise = ls.iter().enumerate().any(|(i, l)| ls[i + 1..].iter().any(|m| crosses(l, m)));
        let found = find_crossing(ls.iter());
        prop_assert_eq!(found.is_some(), pairwise);
        if let Some((x, y)) = found {
            prop_assert!(crosses(&x, &y));
        }
    }

    #[test]
    fn rotation_preserves_length(l in leaf(), k in 0u64..12, q in 1u64..12) {
        let by = Frac::new(k % q, q);
        prop_assert_eq!(l.rotate(&by).length(), l.length());
    }

    #[test]
    fn short_leaves_grow(l in leaf(), d in 2u32..=4) {
        // A leaf shorter than 1/(d+1) strictly grows under sigma_d.
        let len = l.length();
        if len < Frac::recip(d as u64 + 1) {
            prop_assert!(image_length(d, &len) > len);
            let n = growth_steps(d, &len).unwrap();
            prop_assert!(n >= 1);
        }
    }

    #[test]
    fn json_roundtrip_of_truncations(depth in 0usize..5, keep in proptest::collection::vec(any::<bool>(), 32)) {
        let r = canonical_mac_lamination(2, &Leaf::from_fracs(1, 7, 4, 7), depth).unwrap();
        let mut doc = LamDocument::from_lamination(&r.lamination);
        let mut i = 0;
        doc.leaves.retain(|_| {
            i += 1;
            keep[i % keep.len()]
        });
        let text = write_lam_json(&doc);
        let back = parse_lam_json(&text).unwrap();
        prop_assert_eq!(write_lam_json(&back), text);
    }
}
