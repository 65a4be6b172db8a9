pub mod error;
pub mod featuremap;
pub mod gsi;
pub mod pipeline;
pub mod qml;
pub mod rng;
pub mod simcore;

pub use error::{Error, Result};
