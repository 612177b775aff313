//! Exact computational algebra for chains of ideals that are invariant
//! under column symmetries.
//!
//! The ambient rings are polynomial rings `K[x[k,j] : 1 <= k <= c, 1 <= j <= n]`
//! on a grid of variables with `c` rows and `n` columns, linked by the maps
//! that act on column indices: permutations of `1..=n` and strictly
//! increasing injections `1..=m -> 1..=n`. A chain is given by finitely many
//! orbit generators together with a horizon, and is materialized into one
//! concrete ideal per width `n`.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals or
//! integers modulo a prime, and all ranks, series, and fits are computed
//! without floating point.
//!
//! Module map:
//! - [`ring`]: variables, monomials, polynomials, term orders, column actions
//! - [`ideal`]: monomial ideals and their combinatorial invariants
//! - [`chain`]: chain specs, orbit expansion, materialization, stabilization
//! - [`hilbert`]: Hilbert series, equivariant series tables, degree growth
//! - [`groebner`]: normal forms, Buchberger, initial ideals of chains
//! - [`betti`]: simplicial homology, graded Betti tables, two independent engines
//! - [`asymptotics`]: exact eventual-linear fits and the stabilization laws
//! - [`linalg`]: exact matrix ranks over the supported fields

pub mod asymptotics;
pub mod betti;
pub mod chain;
pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod ring;

pub use error::{Error, Result};
