//! Command-line surface for the stringy-invariant engine (placeholder).
pub mod placeholder {}
