//! Canonical completion of a folded graph to a finite cover on the same
//! vertex set, and the finite-index separation witness built from it.
//!
//! In a folded graph the edges of a fixed letter form disjoint directed
//! paths and cycles. Completion closes every maximal path with one edge
//! from its terminal to its initial vertex and puts a loop at every vertex
//! the letter misses. The output is the unique completion that keeps the
//! graph folded, and distinct letter-set components of the input stay
//! distinct in it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoverGraph, Edge, LabeledGraph, Subgroup};
use crate::word::Word;

/// Outcome of completing a folded graph, with the added edges and, for
/// audit, the maximal single-letter paths each closing edge completed.
#[derive(Debug, Clone)]
pub struct CompletionReport {
    input: LabeledGraph,
    cover: CoverGraph,
    added: Vec<Edge>,
    closed_paths: Vec<(u32, Vec<Vec<usize>>)>,
}

impl CompletionReport {
    pub fn input(&self) -> &LabeledGraph {
        &self.input
    }

    pub fn cover(&self) -> &CoverGraph {
        &self.cover
    }

    pub fn into_cover(self) -> CoverGraph {
        self.cover
    }

    pub fn added(&self) -> &[Edge] {
        &self.added
    }

    /// For each letter, the vertex sequences of the maximal paths that were
    /// closed; single-vertex sequences record added loops.
    pub fn closed_paths(&self) -> &[(u32, Vec<Vec<usize>>)] {
        &self.closed_paths
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&ReportWire {
            cover: self.cover.graph().clone(),
            added: self
                .added
                .iter()
                .map(|e| (e.letter, e.from, e.to))
                .collect(),
        })
        .expect("report serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct ReportWire {
    cover: LabeledGraph,
    added: Vec<(u32, usize, usize)>,
}

/// Embeds a folded graph in a cover on the same vertices by completing each
/// letter to a permutation. Deterministic, idempotent on complete inputs,
/// and injective on letter-set components.
pub fn complete(g: &LabeledGraph) -> Result<CompletionReport> {
    let idx = g.try_folded_index()?;
    let n = g.vertex_count();
    let mut added = Vec::new();
    let mut closed_paths = Vec::new();
    for letter in g.alphabet().letters() {
        // folded: per vertex the letter has at most one edge out and one in,
        // so at most two incident, and its edges split into paths and cycles
        for v in 0..n {
            let incident = usize::from(idx.out(v, letter).is_some())
                + usize::from(idx.inn(v, letter).is_some());
            assert!(incident <= 2, "folded graph with letter degree > 2");
        }
        let mut paths = Vec::new();
        for start in 0..n {
            if idx.inn(start, letter).is_some() {
                continue; // mid-path, path end, or cycle vertex
            }
            if idx.out(start, letter).is_none() {
                // letter misses the vertex entirely
                added.push(Edge::new(letter, start, start));
                paths.push(vec![start]);
                continue;
            }
            let mut path = vec![start];
            let mut cur = start;
            while let Some(next) = idx.out(cur, letter) {
                path.push(next);
                cur = next;
            }
            added.push(Edge::new(letter, cur, start));
            paths.push(path);
        }
        closed_paths.push((letter, paths));
    }
    let mut edges = g.edges().to_vec();
    edges.extend(added.iter().copied());
    let completed = LabeledGraph::new(g.alphabet(), n, g.basepoint(), edges, g.marks().clone())
        .expect("completion preserves validity");
    let cover = CoverGraph::try_from(completed).expect("completion yields a cover");
    Ok(CompletionReport {
        input: g.clone(),
        cover,
        added,
        closed_paths,
    })
}

/// Finite-index witness that `f` avoids the subgroup: a cover `M` with
/// `H ≤ M`, `f ∉ M`, and index equal to the vertex count of the core plus
/// attached `f`-path.
pub fn hall_witness(h: &Subgroup, f: &Word) -> Result<CoverGraph> {
    if h.contains(f) {
        return Err(Error::MemberAlready);
    }
    let core = h.core();
    let gamma = core.with_path(core.basepoint(), f, "p_end")?;
    let p_end = gamma.mark("p_end").expect("path endpoint is marked");
    let gamma = gamma.trimmed(&BTreeSet::from([gamma.basepoint(), p_end]));
    let cover = complete(&gamma)?.into_cover();
    debug_assert!(h
        .generators()
        .iter()
        .all(|w| cover.read_total(cover.basepoint(), w) == cover.basepoint()));
    debug_assert_ne!(cover.read_total(cover.basepoint(), f), cover.basepoint());
    Ok(cover)
}
