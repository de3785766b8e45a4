//! Exact computation of special precovers and preenvelopes in categories of
//! quiver representations.
//!
//! The crate works over small concrete abelian base categories (finite
//! dimensional F_p vector spaces, and finite modules over the dual numbers
//! F_p[ε]/(ε²)) and realizes the cotorsion pairs induced on representation
//! categories of finite rooted quivers.  All exactness and membership claims
//! made by the construction engines are re-verified at runtime with exact
//! linear algebra; nothing is trusted on faith.
//!
//! Layout:
//! * [`fp`] — deterministic dense linear algebra over F_p
//! * [`quiver`] — finite quivers, rootedness filtrations, path enumeration
//! * [`base`] — pluggable base categories, short exact sequences, pair oracles
//! * [`rep`] — representations, structure maps, hom spaces, vertexwise lifts
//! * [`ext`] — Ext¹ via one-step projective syzygies, plus the Euler-form oracle
//! * [`construct`] — the level-by-level precover/preenvelope engines and traces
//! * [`sample`] — deterministic enumeration and seeded sampling of inputs
//! * [`io`] — JSON wire formats shared with the command-line front end

pub mod base;
pub mod construct;
pub mod error;
pub mod ext;
pub mod fp;
pub mod io;
pub mod quiver;
pub mod rep;
pub mod sample;

pub use error::Error;
