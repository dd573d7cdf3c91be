//! Exact-arithmetic Hall algebra engine.
//!
//! Everything is computed over `Q(sqrt(q))` with arbitrary-precision
//! rationals; there is no floating point anywhere.  The layers are:
//!
//! - [`coeff`]: the coefficient field `Q(sqrt(q))`.
//! - [`finfield`]: dense matrices over small prime fields, row reduction,
//!   subspace enumeration, `|GL_n(F_q)|`.
//! - [`quiver`], [`rep`], [`backend`]: finite-dimensional representations of
//!   small acyclic quivers, classified into isomorphism classes by brute
//!   force GL-orbit computation.  Plain vector spaces are the trivial quiver
//!   and double as a closed-form cross-check.
//! - [`hallcore`]: Hall numbers (two independent routes), the twisted Hall
//!   algebra, Green's coproduct, and Green's formula checkers.
//! - [`complexes`]: Z/2-graded complexes over a backend category, their
//!   classification, homology, the twisted complex Hall algebra and the
//!   quotient by the acyclic-complex ideal.
//! - [`sdh`]: the semi-derived Hall algebra on its triangular basis, with
//!   closed-form product/coproduct/counit and the structural verifiers.
//! - [`double`]: extended Hall bialgebras, the Hopf pairing and the Drinfeld
//!   double relations checked through the embedding into [`sdh`].
//! - [`report`]: machine-readable suite reports for the CLI.

pub mod backend;
pub mod coeff;
pub mod complexes;
pub mod double;
pub mod error;
pub mod finfield;
pub mod hallcore;
pub mod k0;
pub mod quiver;
pub mod rep;
pub mod report;
pub mod sdh;

pub use error::{Error, Result};
