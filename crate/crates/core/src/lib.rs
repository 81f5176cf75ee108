//! Exact partition calculus for easy quantum groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`partition`]: two-row set partitions, their categorical operations and
//!   the partition lattice;
//! * [`category`]: membership predicates for the named categories, bounded
//!   axiom checking and closure generation;
//! * [`tensor`]: the operators `T_p`, sampled classical group elements and
//!   Monte Carlo fixed-point dimensions;
//! * [`weingarten`]: exact Gram and Weingarten matrices, Haar integrals and
//!   moments of truncated characters;
//! * [`laws`]: reference moments of the limiting laws;
//! * [`classify`]: bounded verification of the classification machinery.

pub mod category;
pub mod classify;
pub mod error;
pub mod laws;
pub mod mc;
pub mod partition;
pub mod rational;
pub mod tensor;
pub mod weingarten;

pub use category::{Base, CategoryId, GeneratedCategory, Modulus, SpecialPartition};
pub use error::{Error, Result};
pub use partition::{Partition, Point, Row, Side};
pub use rational::RationalMatrix;
