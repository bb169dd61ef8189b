//! Invariants of graph links from splice diagrams, and twisted Alexander
//! polynomials of finitely presented groups over prime fields.
//!
//! The crate has five layers:
//!
//! * [`laurent`] — exact Laurent-polynomial and matrix arithmetic over `Z`
//!   and `F_p`, with Smith normal form over both.
//! * [`splice`] — splice diagrams of graph links: linking numbers, the
//!   multivariable Alexander polynomial by the vertex product formula,
//!   Thurston norm, fiberedness, and single-variable specializations.
//! * [`presentation`] — finitely presented groups: parsing, free reduction,
//!   Fox derivatives, abelianization, and Wirtinger presentations.
//! * [`twisted`] — twisted Alexander polynomials over `F_p[t^±1]` from a
//!   presentation, a permutation representation, and an integral character.
//! * [`search`] — enumeration of homomorphisms into symmetric groups and
//!   the sweep that produces non-fiberedness certificates.
//! * [`manifest`] — the declarative fixture manifest and the engine that
//!   checks every recorded invariant.

pub mod error;
pub mod laurent;
pub mod presentation;
pub mod search;
pub mod splice;
pub mod twisted;

pub mod manifest;
