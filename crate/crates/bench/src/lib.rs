//! Benchmarks for `raag-core` live in `benches/`; this crate holds shared inputs.

use raag_core::PresentationGraph;

/// Graphs exercised by every benchmark group, with display labels.
pub fn graphs() -> Vec<(&'static str, PresentationGraph)> {
    vec![
        ("edgeless4", PresentationGraph::edgeless(4)),
        ("k22", PresentationGraph::complete_bipartite(2, 2)),
        ("path4", PresentationGraph::path(4)),
        ("star3", PresentationGraph::star(3)),
    ]
}
