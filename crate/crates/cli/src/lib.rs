//! Document schema, layout and command implementations behind the `gpdcoh`
//! binary.

pub mod commands;
pub mod render;
pub mod schema;
