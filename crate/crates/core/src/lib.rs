pub mod curves;
pub mod error;
pub mod frenet;
pub mod harmonic;
pub mod helix;
pub mod json;
pub mod numkit;
pub mod spaceform;

pub use error::{Error, Result};
