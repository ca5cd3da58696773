//! Shared inputs for the benchmarks.

use jacobi_core::diagram::named;
use jacobi_core::{enumerate_diagrams, Diagram, Grading, Space};

/// Nonzero closed diagrams with `v` internal vertices.
pub fn closed(v: usize) -> Vec<Diagram> {
    enumerate_diagrams(Space::B, Grading::b(v, 0)).expect("enumeration fits the default limits").into_iter().map(|c| c.diagram).collect()
}

/// Chord diagrams and a few larger closed graphs, for evaluation.
pub fn evaluation_inputs() -> Vec<(&'static str, Diagram)> {
    vec![
        ("chord", Diagram::chord()),
        ("crossed_chords", named::crossed_chords()),
        ("theta", Diagram::theta()),
        ("tetrahedron", named::tetrahedron()),
        ("wagner", named::wagner()),
    ]
}
