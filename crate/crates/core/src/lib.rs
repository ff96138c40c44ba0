//! Space-time finite element solver for parabolic distributed optimal control
//! with energy regularization in anisotropic Sobolev spaces.
//!
//! The optimality system reduces to `u + rho * D u = target`, where `D` combines
//! the modified Hilbert transformation in time with the spatial Laplacian. After
//! a tensor-product Galerkin discretization the system matrix reads
//!
//! ```text
//! K_h = M_t (x) M_x + rho * [ A_t (x) M_x + M_t (x) A_x ]
//! ```
//!
//! and is solved by diagonalizing the temporal pencil `(A_t, M_t)` with its
//! closed-form sine eigenvectors. Applying the eigenvector matrix is a type-II
//! discrete sine transform, so the whole solve costs `O(M_x N_t log N_t)` plus
//! `N_t` independent spatial CG solves.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. The `parallel` feature runs fiber transforms and per-channel
//! solves on the rayon thread pool; results are bit-identical either way.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod assembly;
pub mod cg;
pub mod control;
pub mod dense;
pub mod dst;
mod error;
mod fft;
mod math;
mod par;
pub mod quadrature;
pub mod solver;
pub mod spatial;
pub mod targets;
pub mod temporal;
pub mod tridiag;

pub use assembly::{assemble_rhs, l2q_error, target_l2q_norm_sq, SpaceTimeField};
pub use control::reconstruct_control;
pub use dst::{dst2, idst2, DstPlan};
pub use error::Error;
pub use quadrature::{GaussLegendre, QuadratureRule};
pub use solver::{SolveReport, SolverConfig, SpaceTimeOperator};
pub use spatial::{SpatialGrid, SpatialOperator};
pub use targets::{reaction, TargetKind, TargetSpec};
pub use temporal::{TemporalEigenSystem, TemporalMesh};
pub use tridiag::TridiagonalSym;

pub type Result<T, E = Error> = core::result::Result<T, E>;
