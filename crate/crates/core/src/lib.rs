//! LRPC codes over Galois rings.

pub mod bounds;
pub mod decoder;
pub mod linalg;
pub mod lrpc;
pub mod modules;
pub mod rings;
pub mod sim;
