//! Exact quantum and Alexander-type invariants of virtual and prismatic links.
//!
//! The crate is organised bottom-up:
//! - [`ring`]: Laurent polynomials and matrices over them;
//! - [`diagram`]: braid words, slice words, moves and the Zh constructions;
//! - [`burau`]: the prismatic Burau representation, Fox calculus and CSW polynomials;
//! - [`rt`]: the prismatic U_q(gl(m|n)) Reshetikhin–Turaev functor and the GAP;
//! - [`symplectic`]: coefficient vectors, symplectic ranks and genus bounds;
//! - [`bracket`]: the surface bracket and the Dye–Kauffman minimality test;
//! - [`catalog`]: the worked-example catalog shared by the CLI and tests;
//! - [`verify`]: randomized move-invariance checks.

pub mod bracket;
pub mod burau;
pub mod catalog;
pub mod diagram;
pub mod ring;
pub mod rt;
pub mod symplectic;
pub mod verify;

pub use ring::{LaurentPoly, RingContext, RingError, RingMatrix, UnitSpec};
