//! Exact computation with linear differential operators over ℚ(x) and 𝔽_p(x).
//!
//! The crate provides the full diagnostic toolchain for "special" Fuchsian
//! operators: noncommutative Ore arithmetic and adjoints, symmetric and
//! exterior squares through connection-matrix minimal annihilators, local
//! Frobenius log-series, rational solutions by exponent-bound ansatz and by
//! series combination, closed-form intertwiners with the adjoint for orders
//! three and four, self-adjoint decompositions, invariant first-integral
//! forms, exterior-square-driven right-factor extraction, and series-to-ODE
//! guessing with the (Q+1)(D+1)-f bookkeeping.
//!
//! Start with the runnable programs in `examples/`; each one exercises a
//! major capability end to end. The `diffgal` binary exposes the same
//! operations as subcommands over simple text file formats.

pub mod error;
pub mod field;
pub mod poly;
pub mod ratfn;
pub mod linalg;
pub mod ore;
pub mod series;
pub mod frobenius;
pub mod construct;
pub mod ratsol;
pub mod duality;
pub mod factor;
pub mod guess;
pub mod golden;
pub mod fixtures;
pub mod io;

pub use error::{Error, Result};
pub use field::{Field, FieldCtx, PrimeField, Rationals, DEFAULT_PRIME};
pub use ore::DiffOp;
pub use poly::Poly;
pub use ratfn::RatFn;
