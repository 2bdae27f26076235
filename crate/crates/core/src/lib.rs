//! Codes from rank-two bundles over Deligne-Lusztig surfaces.

pub mod bundle_codes;
pub mod code;
pub mod dl_surfaces;
pub mod gf;
pub mod linalg;
pub mod mindist;
pub mod params;
pub mod projgeom;
pub mod rr_spaces;

pub use code::LinearCode;
pub use gf::{Fe, Field};
