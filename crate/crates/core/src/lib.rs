//! Exact computation of vertex operator algebra characters, correlation
//! functions and the quasimodular forms they produce.
//!
//! Everything is done over the rationals. Truncated q-expansions live in
//! [`QSeries`], the ring of quasimodular forms `Q[P, Q, R]` in
//! [`QuasiModular`], and polynomials in the central charge in [`PolyC`].
//! The higher level modules build on these:
//!
//! - [`heisenberg`]: genus zero and genus one correlators of the rank one
//!   Heisenberg VOA (pairing sums, Zhu recursion, LiZ norms).
//! - [`virasoro`]: vacuum expectations, Gram matrices and Kac determinants.
//! - [`genus2`]: sewing two tori, `det(I - A1 A2)`, the period matrix and the
//!   genus two Heisenberg partition function.
//! - [`mlde`]: the second order modular linear differential equation and the
//!   exceptional dimension formulas.
//! - [`lattice`]: theta series of even lattices by certified enumeration.
//! - [`verify`]: the end-to-end identity checks exposed by the CLI.

pub mod error;
pub mod genus2;
pub mod heisenberg;
pub mod lattice;
pub mod mlde;
pub mod par;
pub mod poly;
pub mod polyc;
pub mod qseries;
pub mod quasimodular;
pub mod rational;
pub mod verify;
pub mod virasoro;

pub use error::{Error, Result};
pub use genus2::{EpsSeries, TwoVarQuasiModular};
pub use heisenberg::{Pairing, Partition};
pub use polyc::{PolyC, RatFnC};
pub use qseries::QSeries;
pub use quasimodular::QuasiModular;
pub use rational::Rational;
