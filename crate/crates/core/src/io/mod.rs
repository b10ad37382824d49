//! JSON persistence and SVG rendering.

pub mod json;
pub mod svg;

pub use json::{parse_lam_json, write_lam_json, write_lam_json_pretty, DocLeaf, LamDocument};
pub use svg::{render_lamination, render_svg, ElementId, RenderOptions, Style};
