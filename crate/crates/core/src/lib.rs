//! Exact arithmetic and classification tools for twisted generalized
//! Reed-Solomon codes over finite fields.

pub mod census;
pub mod classify;
pub mod cli;
pub mod code;
pub mod config;
pub mod error;
pub mod ff;
pub mod grs;
pub mod matrix;
pub mod poly;
pub mod symbolic;

pub use census::{census, BPattern, CensusOptions, CensusReport, Strategy, Tier};
pub use code::{EvalParams, GeneratorMode, TgrsCode, TwistMatrix};
pub use error::{Error, Result};
pub use ff::{Felt, Field};
pub use grs::GrsStatus;
pub use matrix::Matrix;
pub use poly::MultiPoly;
