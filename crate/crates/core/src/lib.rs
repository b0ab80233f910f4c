//! Exact algebra of differential operators on the 1|1 superline.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalars`]: Grassmann constants, truncated superfunctions and the
//!   symbolic jet model, all closed under `D = ∂_ξ + ξ∂_x`;
//! * [`superop`]: the operator ring, composition, division, factorization;
//! * [`supermatrix`]: format matrices and Berezinians;
//! * [`wronskian`]: super Wronskians and operators from their kernels;
//! * [`kernel`]: kernels of non-degenerate operators as series;
//! * [`darboux`]: Darboux transformations and dressing formulas;
//! * [`cli`]: the text format and command front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod darboux;
pub mod error;
pub mod kernel;
pub mod print;
pub mod scalars;
pub mod superop;
pub mod supermatrix;
pub mod wronskian;

pub use error::{Error, Result};
pub use scalars::{Parity, Scalar, SuperFunction, SymbolicScalar, Truncation, Q};
