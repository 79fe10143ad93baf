//! Evaluation codes over algebraic toric sets in projective space over a
//! finite field.
//!
//! A toric set `X ⊂ P^{s-1}` is the image of `(K*)^n` under a list of
//! monomials; the code `C_X(d)` is the image of the degree-`d` forms under
//! evaluation at the points of `X`. This crate builds `X` (projective tori,
//! clutter-parameterized sets), the generator matrix of `C_X(d)`, its
//! dimension and exact minimum distance, and the closed formulas known for
//! the torus and for complete bipartite clutters, so the two can be checked
//! against each other.

pub mod bounds;
pub mod codes;
pub mod error;
pub mod exec;
pub mod galois;
pub mod geometry;
pub mod invariants;
pub mod linalg;
pub mod polyeval;
pub mod verify;

pub use codes::{Caps, CodeParameters, EvaluationMatrix, Source};
pub use error::{ClutterError, Error, Result};
pub use exec::Strategy;
pub use galois::{FieldElement, FiniteField};
pub use geometry::{Clutter, ExponentVector, ProjectivePoint, ToricSet};
pub use polyeval::SparsePolynomial;
