//! Laboratory for matrix games `max_w min_l (Aw)_l`: oracle access models,
//! the classical first-order solvers they power, resisting-oracle
//! adversaries that construct hard instances on the fly, and the
//! certification primitives that verify every finalized run.

pub mod adversary;
pub mod error;
pub mod game;
pub mod lowrank;
pub mod oracle;
pub mod ortho;
pub mod reduction;
pub mod rng;
pub mod solvers;
pub mod spectral;
pub mod vecmath;

pub use error::{Error, Result};
pub use game::{GameInstance, NormContract, WGeometry};
pub use lowrank::LowRankFactors;
pub use ortho::OrthoBasis;
