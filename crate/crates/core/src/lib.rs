//! Solver core for cell-by-cell models of excitable tissue.
//!
//! The library assembles and solves composite finite element systems in which
//! every compartment (an extracellular frame and a grid of elongated cells)
//! carries its own Q1 space, compartments meet only through interface jump
//! terms, and each implicit time step solves `(tau*A + M) u = f` with
//! preconditioned conjugate gradients. Preconditioners are one-level additive
//! Schwarz over minimally overlapped compartments and its two-level variant
//! with an energy-minimal vertex (or vertex-and-edge) coarse space.
//!
//! Module map:
//! - [`mesh`]: structured compartment grids, interface edges/vertices, DOF sets
//! - [`assembly`]: element stiffness, interface jump mass, composite operator
//! - [`ionic`]: membrane reaction model and gating update
//! - [`linalg`]: sparse storage, direct factorization, PCG, spectral estimates
//! - [`schwarz`]: coarse space, overlapping local spaces, preconditioner apply
//! - [`sim`]: IMEX time loop tying the above together
//!
//! The crate is `no_std` + `alloc`; everything that touches files, clocks or
//! command lines lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod error;
mod fp;
pub mod ionic;
pub mod linalg;
pub mod mesh;
pub mod schwarz;
pub mod sim;

pub use error::{Error, Result};
