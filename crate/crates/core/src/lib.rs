//! Invariant laminations of the circle under `sigma_d(t) = d t mod 1`.
//!
//! Exact rational angles and leaves, finite laminations with their gaps,
//! orbit classification, pullback along critical portraits, and the
//! correspondence between maximal-and-critical leaves and symmetric
//! critical-major polygons.

pub mod catalog;
pub mod cli;
pub mod circle;
pub mod correspondence;
pub mod error;
pub mod frac;
pub mod io;
pub mod lamination;
pub mod leaf;
pub mod orbits;
pub mod pullback;
pub mod verify;

pub use circle::{Angle, Arc, DnaryExpansion};
pub use error::{LamError, Result};
pub use frac::Frac;
pub use lamination::{Gap, Lamination};
pub use leaf::{Leaf, LeafImage, Polygon};
pub use orbits::{OrbitClass, OrbitInfo, RotationNumber};
pub use pullback::{CriticalPortrait, CriticalSector, PullbackResult};
pub use correspondence::{MacData, ScmData};
