//! Region classification for images of holomorphic maps.
//!
//! The crate evaluates a small catalog of maps (including a slowly
//! converging power series with certified truncation bounds), traces images
//! of domain boundaries, classifies the connected components of the
//! complement as filled or excluded using interior witnesses, and verifies
//! a family of sector-containment and modulus-principle claims with
//! explicit error radii.

pub mod classifier;
pub mod error;
pub mod geometry;
pub mod haagerup;
pub mod maps;
pub mod modulus;
pub mod real;
pub mod report;
pub mod svg;
pub mod xplane;

pub use error::{Error, Result};
pub use xplane::{arg_of, in_sector, principal_power_neg, AngleSector, PrecisionCtx, XPoint};
