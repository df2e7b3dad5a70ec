//! Exact-arithmetic calculus of marked ideals on affine charts: diagrams of
//! initial exponents, Hilbert-Samuel functions, controlled transforms under
//! blow-ups, derivative and coefficient ideals, descent of coefficients to a
//! model over Q, and a harness that machine-checks the functoriality of the
//! resulting resolution traces on desk-scale examples.

pub mod derive;
pub mod descent;
pub mod diagram;
pub mod error;
pub mod field;
pub mod ideal;
pub mod marked;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod resolve;
pub mod transform;

pub use diagram::{Diagram, HsFunction};
pub use error::{Error, Result};
pub use field::{FieldElem, GroundField, Rat};
pub use ideal::Ideal;
pub use marked::{Chart, Divisor, DivisorOrigin, MarkedIdeal, SmoothPullback};
pub use monomial::{deglex_compare, Monomial, TermOrder};
pub use poly::Polynomial;
pub use transform::{BlowupCenter, CandidatePolicy, Equivalence};
