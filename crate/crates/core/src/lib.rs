//! Uneven-light image enhancement built on a retinal center-surround model.
//!
//! An image is split in the log domain into a contrast image produced by a
//! shunting center-surround model and a residual that carries the lighting.
//! The residual is compressed with a power law, recombined with the contrast
//! image, and the per-scale results are fused with residual-derived weights.

pub mod denoise;
pub mod enhance;
pub mod error;
pub mod filters;
pub mod imgcore;
pub mod metrics;
pub mod retinal;

pub use error::{Error, Result};
pub use imgcore::{ColorImage, ColorSpace, ImagePlane, IntensityDomain};
