//! Finite-truncation numerics for the restricted Siegel disc viewed as a
//! symplectic and Kähler quotient.
//!
//! Everything acts on dense complex matrices. The complex Hilbert space is
//! split as `H = H+ ⊕ H-` with a fixed orthonormal basis `{e_k}` of `H+` and
//! the conjugate basis `{ē_k}` of `H-`, so the bar operation on operators is
//! plain entrywise conjugation. Real-linear operators then take the block
//! form `[[g, h], [h̄, ḡ]]` and the complex structure is
//! `J = diag(i·id, -i·id)`.
//!
//! At finite truncation the trace-class and Hilbert–Schmidt conditions that
//! distinguish `Sp`, `Sp_res` and `Sp_{1,2}` are automatic, so the three
//! groups coincide here. The Schatten norms are still reported as
//! diagnostics ([`blockgroup::mixed_norm`]) so that truncation sweeps can show
//! which quantities converge.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blockgroup;
pub mod error;
pub mod findim;
pub mod linops;
pub mod matfun;
pub mod oracle;
pub mod reduction;
pub mod siegel;
pub mod tolerance;

pub use blockgroup::{BlockOperator, BlockTangent, MembershipReport};
pub use error::{Error, Result};
pub use linops::{C64, ComplexMatrix, HermitianEig, MatrixKind, Schatten};
pub use reduction::{FlatPoint, MomentumCoefficient};
pub use siegel::{SiegelPoint, SiegelTangent};
pub use tolerance::Tolerances;
