//! Cone computations on finite abelian groups: exact Fourier analysis,
//! membership tests for positivity cones, extremal window constants via
//! linear programming with machine-checkable certificates, and atomic mass
//! recovery for measures on the circle.
//!
//! Numeric policy: all group-side computations are deterministic, including
//! the parallel reduction paths, so repeated runs produce bitwise identical
//! results regardless of thread count.

pub mod batch;
pub mod circle;
pub mod cones;
pub mod decomp;
pub mod extremal;
pub mod group;
pub mod lp;
pub mod spectral;
