//! Direct serendipity elements on convex polygons.

mod dump;
mod element;
mod fns;
mod generators;
mod high;
mod low;
mod low_supplement;
mod nodes;

pub use dump::{element_dump, ElementDump};
pub use element::{
    build_ds_element, build_ds_element_with, build_low_order, build_low_order_with,
    build_supplement, ds_dimension, supplement_fn, DsChoices, DsElement,
};
pub use fns::ScalarBasisFn;
pub use generators::{combine, monomial_exponents, Generator, GeneratorFamily, ValueGrad};
pub use high::EDGE_CONDITION_WARN;
pub use low::lagrange_1d;
pub use low_supplement::{build_low_order_supplement, LowOrderSupplement};
pub use nodes::{interior_triangle, triangle_lagrange_nodes, NodeKind, NodeSet};
