//! Central strips, co-roots, and the correspondence between MAC leaves and
//! SCM polygons.

mod gap;
mod mac;
mod scm;
mod strip;

pub use gap::{central_gap, first_return, FirstReturn};
pub use mac::{coroots, is_mac, mac_data, mac_orbit_class, MacData};
pub use scm::{is_scm, lamination_equal_at_depth, mac_to_scm, scm_data, scm_to_mac, ScmData};
pub use strip::{
    central_strip, critical_distance, csl_check, endcaps, sibling_portrait, strip_of,
    CentralStrip, CslReport, Endcap, SiblingPortrait,
};
