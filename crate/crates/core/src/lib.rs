//! Numerical toolkit for relative capacity at a boundary point and half-plane
//! capacity: walk-on-spheres estimators, symmetrization transforms on
//! rasters, extremal conformal maps with their boundary jets, and seeded
//! verification suites for the capacity inequalities.

pub mod geometry;
pub mod harness;
pub mod capacity;
pub mod extremal;
pub mod potential;
pub mod symmetrize;
