//! DOT export of labeled graphs.

use std::fmt::Write as _;

use crate::graph::LabeledGraph;

/// Renders the graph in DOT format: one directed edge per stored edge,
/// labeled by the letter's lowercase character, with the basepoint drawn as
/// a double circle.
pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("digraph stallings {\n  rankdir=LR;\n");
    for v in 0..g.vertex_count() {
        if v == g.basepoint() {
            let _ = writeln!(out, "  v{v} [shape=doublecircle];");
        } else {
            let _ = writeln!(out, "  v{v} [shape=circle];");
        }
    }
    for e in g.edges() {
        let label = if e.letter <= 26 {
            ((b'a' + (e.letter - 1) as u8) as char).to_string()
        } else {
            e.letter.to_string()
        };
        let _ = writeln!(out, "  v{} -> v{} [label=\"{label}\"];", e.from, e.to);
    }
    out.push_str("}\n");
    out
}
