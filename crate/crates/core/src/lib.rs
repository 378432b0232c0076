//! Simulation and analytics toolkit for adversarial noise against passively
//! protected quantum memories: toric-code anyon propagation on a ring, the
//! 3D compass majority-vote read-out, checkerboard-perturbed Ising storage,
//! and exact small-system dynamics (perfect state transfer, engineered
//! drives, mirror environments) used as oracles for the closed-form bounds.

pub mod analytics;
pub mod decode;
pub mod dynamics;
pub mod fmt;
pub mod linalg;
pub mod pauli;
pub mod ring;
pub mod rng;
pub mod toric;
