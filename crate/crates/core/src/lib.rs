//! Exact symbolic algebra for exponential maps (G_a-actions) on finitely
//! presented quotient algebras over finite fields.
//!
//! The crate provides:
//!
//! - exact arithmetic in `F_p` and `F_{p^a}` ([`field`]);
//! - sparse multivariate polynomials with a text parser ([`poly`]);
//! - quotient algebras with a single distinguished relation and canonical
//!   normal forms ([`algebra`]);
//! - weight gradings, filtrations, leading forms and associated graded
//!   presentations ([`grading`]);
//! - exponential maps, their axiom checker, truncated invariant rings, the
//!   induced map on the associated graded ring, and bounded exhaustive
//!   search ([`expmap`]);
//! - finite-field geometric certificates: point counts, Jacobian smoothness
//!   and singular-point checks ([`geometry`]).

pub mod algebra;
pub mod expmap;
pub mod field;
pub mod geometry;
pub mod grading;
pub mod input;
pub mod linalg;
pub mod poly;
pub mod sample;
pub mod selftest;
