//! Staged linear-time multiple-source shortest paths for small integer
//! costs. Placeholder while the lower layers stabilize.

use crate::embedding::{EmbeddedGraph, FaceId};
use crate::mssp::reference::MsspError;
use crate::mssp::{MsspObserver, Pipeline, PivotEvent};

pub fn run_linear(
    _g: &EmbeddedGraph,
    _pipe: &Pipeline,
    _r: FaceId,
    _observer: &mut dyn MsspObserver,
) -> Result<Vec<PivotEvent>, MsspError> {
    unimplemented!("staged engine lands after the reference engine stabilizes")
}
