//! Command-line surface: file formats, SVG output and the verification battery.

pub mod commands;
pub mod formats;
pub mod svg;
