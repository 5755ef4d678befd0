//! Simulation and verification toolkit for oblivious mobile robots that must
//! permute their positions under a fully synchronous Look-Compute-Move
//! scheduler.

pub mod cli;
pub mod demo;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod ordering;
pub mod protocols;
pub mod render;
pub mod scenario;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Handedness, Point, Tolerance};
