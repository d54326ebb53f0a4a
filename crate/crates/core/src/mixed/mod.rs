//! Direct mixed elements: `H(div)`-conforming spaces built from curls of
//! serendipity functions and `x P_s`.

mod element;
mod interpolant;
mod vector_fn;

pub use element::{build_mixed_element, mixed_dimension, MixedElement, MixedKind, MixedScratch};
pub use interpolant::{dof_values, interpolant_degree, mixed_interpolant, MixedInterpolant};
pub use vector_fn::{curl_of, curl_vec, ScaledMonomials, ValueDiv, VectorBasisFn};
