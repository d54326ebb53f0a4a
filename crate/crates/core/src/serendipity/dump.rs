use serde::Serialize;

use crate::serendipity::element::DsElement;
use crate::serendipity::nodes::NodeKind;
use crate::Real;

/// Per-element diagnostic record.
#[derive(Clone, Debug, Serialize)]
pub struct ElementDump {
    pub num_vertices: usize,
    pub order: usize,
    pub background_order: Option<usize>,
    pub dim: usize,
    pub nodes: Vec<[f64; 2]>,
    pub kinds: Vec<NodeKind>,
    /// Max-norm distance of the duality matrix to the identity.
    pub duality_residual: f64,
    pub edge_condition: f64,
}

pub fn element_dump<T: Real>(elem: &DsElement<T>) -> ElementDump {
    let nodes = elem.nodes();
    ElementDump {
        num_vertices: elem.polygon().num_vertices(),
        order: elem.order(),
        background_order: elem.background_order(),
        dim: elem.dim(),
        nodes: nodes
            .points
            .iter()
            .map(|p| [p.x.to_f64_lossy(), p.y.to_f64_lossy()])
            .collect(),
        kinds: nodes.kinds.clone(),
        duality_residual: elem.duality_matrix().identity_defect().to_f64_lossy(),
        edge_condition: elem.edge_condition(),
    }
}
