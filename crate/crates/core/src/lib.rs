//! Popular common independent sets of two ordered matroids.

pub mod elemset;
pub mod error;
pub mod gen;
pub mod instance;
pub mod kernel;
pub mod lexpop;
pub mod matching_engine;
pub mod matroids;
pub mod popular;
pub mod trials;
pub mod voting;

pub use elemset::ElemSet;
pub use error::{Error, Result};
