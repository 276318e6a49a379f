//! Image containers, color conversion, log-domain transforms and file IO.

mod color;
mod domain;
pub mod io;
mod plane;

pub use color::{hsv_to_rgb, hsv_to_rgb_pixel, rgb_to_hsv, rgb_to_hsv_pixel, ColorImage, ColorSpace};
pub use domain::{from_log_domain, to_log_domain, IntensityDomain};
pub use io::{dump_plane, load_image, read_pfm, save_image};
pub use plane::ImagePlane;
