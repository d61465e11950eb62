//! Labeled directed multigraphs over a ranked alphabet.
//!
//! This is the graph substrate of the library: Stallings folding, subgroup
//! cores, deterministic path reading, fiber products, spanning trees and
//! free bases, letter-set components, and coset orbits on finite covers.
//!
//! Edges carry positive letters only; a negative letter traverses an edge
//! backwards. A graph is *folded* when no vertex has two equally labeled
//! edges leaving it or two entering it, and *complete* when every letter
//! acts as a permutation of the vertices. All breadth-first orders are fixed
//! by (letter index, direction, vertex id), so every operation is
//! deterministic and structural operations return canonically numbered
//! graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, LetterSet, Word};

/// A directed edge labeled by the positive letter `letter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub letter: u32,
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub fn new(letter: u32, from: usize, to: usize) -> Edge {
        Edge { letter, from, to }
    }
}

/// A finite connected multigraph with labeled edges, a basepoint, and
/// optional named vertices. Values are immutable; every operation returns a
/// fresh graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    n: usize,
    basepoint: usize,
    edges: Vec<Edge>,
    marks: BTreeMap<String, usize>,
}

/// Deterministic reading tables of a folded graph: at most one outgoing and
/// one incoming edge per (vertex, letter).
pub(crate) struct FoldedIndex {
    rank: usize,
    out: Vec<Option<usize>>,
    inn: Vec<Option<usize>>,
}

impl FoldedIndex {
    #[inline]
    pub(crate) fn out(&self, v: usize, letter: u32) -> Option<usize> {
        self.out[v * self.rank + (letter as usize - 1)]
    }

    #[inline]
    pub(crate) fn inn(&self, v: usize, letter: u32) -> Option<usize> {
        self.inn[v * self.rank + (letter as usize - 1)]
    }

    /// One reading step: a positive letter follows the outgoing edge, a
    /// negative letter walks the incoming edge backwards.
    #[inline]
    pub(crate) fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.is_positive() {
            self.out(v, l.index())
        } else {
            self.inn(v, l.index())
        }
    }

    pub(crate) fn read(&self, start: usize, w: &Word) -> Option<usize> {
        let mut v = start;
        for l in w.letters() {
            v = self.step(v, *l)?;
        }
        Some(v)
    }
}

impl LabeledGraph {
    /// Builds a graph after validating vertex ids and letters. Edges are
    /// stored sorted; duplicates are allowed (folding removes them).
    pub fn new(
        alphabet: Alphabet,
        n: usize,
        basepoint: usize,
        mut edges: Vec<Edge>,
        marks: BTreeMap<String, usize>,
    ) -> Result<LabeledGraph> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have a vertex".into()));
        }
        if basepoint >= n {
            return Err(Error::InvalidGraph(format!(
                "basepoint {basepoint} out of range for {n} vertices"
            )));
        }
        for e in &edges {
            if !alphabet.contains(e.letter) {
                return Err(Error::InvalidGraph(format!(
                    "edge letter {} outside alphabet of rank {}",
                    e.letter,
                    alphabet.rank()
                )));
            }
            if e.from >= n || e.to >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}, {}) out of range for {n} vertices",
                    e.letter, e.from, e.to
                )));
            }
        }
        for (name, &v) in &marks {
            if v >= n {
                return Err(Error::InvalidGraph(format!(
                    "mark {name:?} points at missing vertex {v}"
                )));
            }
        }
        edges.sort_unstable();
        Ok(LabeledGraph {
            alphabet,
            n,
            basepoint,
            edges,
            marks,
        })
    }

    /// The one-vertex graph with no edges (core of the trivial subgroup).
    pub fn single_vertex(alphabet: Alphabet) -> LabeledGraph {
        LabeledGraph {
            alphabet,
            n: 1,
            basepoint: 0,
            edges: Vec::new(),
            marks: BTreeMap::new(),
        }
    }

    /// The one-vertex graph with a loop for every letter: the cover of the
    /// whole group.
    pub fn full_wedge(alphabet: Alphabet) -> LabeledGraph {
        let edges = alphabet.letters().map(|l| Edge::new(l, 0, 0)).collect();
        LabeledGraph {
            alphabet,
            n: 1,
            basepoint: 0,
            edges,
            marks: BTreeMap::new(),
        }
    }

    /// A wedge of loops at the basepoint, one loop per word; identity words
    /// contribute nothing.
    pub fn wedge(alphabet: Alphabet, words: &[Word]) -> LabeledGraph {
        let mut edges = Vec::new();
        let mut n = 1usize;
        for w in words {
            let mut cur = 0usize;
            let len = w.len();
            for (i, l) in w.letters().iter().enumerate() {
                let next = if i + 1 == len {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                if l.is_positive() {
                    edges.push(Edge::new(l.index(), cur, next));
                } else {
                    edges.push(Edge::new(l.index(), next, cur));
                }
                cur = next;
            }
        }
        edges.sort_unstable();
        LabeledGraph {
            alphabet,
            n,
            basepoint: 0,
            edges,
            marks: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn marks(&self) -> &BTreeMap<String, usize> {
        &self.marks
    }

    pub fn mark(&self, name: &str) -> Option<usize> {
        self.marks.get(name).copied()
    }

    pub fn is_folded(&self) -> bool {
        self.try_folded_index().is_ok()
    }

    pub(crate) fn try_folded_index(&self) -> Result<FoldedIndex> {
        let rank = self.alphabet.rank() as usize;
        let mut out = vec![None; self.n * rank];
        let mut inn = vec![None; self.n * rank];
        for e in &self.edges {
            let l = e.letter as usize - 1;
            let o = &mut out[e.from * rank + l];
            if o.is_some() {
                return Err(Error::NotFolded);
            }
            *o = Some(e.to);
            let i = &mut inn[e.to * rank + l];
            if i.is_some() {
                return Err(Error::NotFolded);
            }
            *i = Some(e.from);
        }
        Ok(FoldedIndex { rank, out, inn })
    }

    pub(crate) fn folded_index(&self) -> FoldedIndex {
        self.try_folded_index()
            .expect("operation requires a folded graph")
    }

    /// Follows `w` from `start`, returning the final vertex or `None` when
    /// some step has no edge. Requires a folded graph.
    pub fn read(&self, start: usize, w: &Word) -> Option<usize> {
        self.folded_index().read(start, w)
    }

    /// True when every (vertex, letter) has exactly one outgoing and one
    /// incoming edge, i.e. every letter acts as a permutation.
    pub fn is_complete(&self) -> bool {
        let rank = self.alphabet.rank() as usize;
        let mut out = vec![0u32; self.n * rank];
        let mut inn = vec![0u32; self.n * rank];
        for e in &self.edges {
            let l = e.letter as usize - 1;
            out[e.from * rank + l] += 1;
            inn[e.to * rank + l] += 1;
        }
        out.iter().all(|&c| c == 1) && inn.iter().all(|&c| c == 1)
    }

    /// True when every vertex is reachable from the basepoint ignoring edge
    /// directions.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; self.n];
        seen[self.basepoint] = true;
        let mut queue = VecDeque::from([self.basepoint]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }

    /// Vertices reachable from `v` along edges (in either direction) whose
    /// letter lies in `letters`: the letter-set component of `v`.
    pub fn component(&self, v: usize, letters: &LetterSet) -> BTreeSet<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            if letters.contains(e.letter) {
                adj[e.from].push(e.to);
                adj[e.to].push(e.from);
            }
        }
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &t in &adj[u] {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Stallings folding: repeatedly identifies equally labeled edges with a
    /// common source or a common target. The recognized subgroup (labels of
    /// closed paths at the basepoint) is unchanged, and the result does not
    /// depend on the processing order.
    pub fn fold(&self) -> LabeledGraph {
        let mut uf = UnionFind::new(self.n);
        // one representative edge per (vertex class, letter, direction);
        // registering a second schedules the merge of the two far endpoints
        let mut slots: Vec<HashMap<(u32, bool), usize>> = vec![HashMap::new(); self.n];
        let mut pending: Vec<(usize, usize)> = Vec::new();
        fn register(
            slots: &mut [HashMap<(u32, bool), usize>],
            pending: &mut Vec<(usize, usize)>,
            root: usize,
            key: (u32, bool),
            target: usize,
        ) {
            match slots[root].entry(key) {
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(target);
                }
                std::collections::hash_map::Entry::Occupied(slot) => {
                    pending.push((*slot.get(), target));
                }
            }
        }
        for e in &self.edges {
            register(&mut slots, &mut pending, e.from, (e.letter, true), e.to);
            register(&mut slots, &mut pending, e.to, (e.letter, false), e.from);
        }
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra == rb {
                continue;
            }
            let (root, dead) = uf.union(ra, rb);
            let moved = std::mem::take(&mut slots[dead]);
            for ((letter, dir), target) in moved {
                register(&mut slots, &mut pending, root, (letter, dir), target);
            }
        }

        let mut edges: Vec<Edge> = Vec::new();
        for (v, slot) in slots.iter().enumerate() {
            if uf.find(v) != v {
                continue;
            }
            for (&(letter, dir), &target) in slot {
                if dir {
                    edges.push(Edge::new(letter, v, uf.find(target)));
                }
            }
        }
        edges.sort_unstable();
        let roots: Vec<usize> = (0..self.n).filter(|&v| uf.find(v) == v).collect();
        let dense: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let folded = LabeledGraph {
            alphabet: self.alphabet,
            n: roots.len(),
            basepoint: dense[&uf.find(self.basepoint)],
            edges: edges
                .into_iter()
                .map(|e| Edge::new(e.letter, dense[&e.from], dense[&e.to]))
                .collect(),
            marks: self
                .marks
                .iter()
                .map(|(k, &v)| (k.clone(), dense[&uf.find(v)]))
                .collect(),
        }
        .sorted();
        debug_assert!(folded.is_folded());
        folded.canonicalize()
    }

    fn sorted(mut self) -> LabeledGraph {
        self.edges.sort_unstable();
        self
    }

    /// Removes unprotected vertices of total degree at most one until none
    /// remain. The basepoint is always kept; marks on removed vertices are
    /// dropped.
    pub fn trimmed(&self, protected: &BTreeSet<usize>) -> LabeledGraph {
        let mut protect = vec![false; self.n];
        protect[self.basepoint] = true;
        for &v in protected {
            protect[v] = true;
        }
        let mut degree = vec![0usize; self.n];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            degree[e.from] += 1;
            degree[e.to] += 1;
            incident[e.from].push(i);
            if e.to != e.from {
                incident[e.to].push(i);
            }
        }
        let mut dead_vertex = vec![false; self.n];
        let mut dead_edge = vec![false; self.edges.len()];
        let mut queue: VecDeque<usize> = (0..self.n)
            .filter(|&v| !protect[v] && degree[v] <= 1)
            .collect();
        while let Some(v) = queue.pop_front() {
            if dead_vertex[v] || protect[v] || degree[v] > 1 {
                continue;
            }
            dead_vertex[v] = true;
            for &i in &incident[v] {
                if dead_edge[i] {
                    continue;
                }
                dead_edge[i] = true;
                let e = self.edges[i];
                for u in [e.from, e.to] {
                    degree[u] -= 1;
                    if !dead_vertex[u] && !protect[u] && degree[u] <= 1 {
                        queue.push_back(u);
                    }
                }
            }
        }
        let alive: Vec<usize> = (0..self.n).filter(|&v| !dead_vertex[v]).collect();
        let dense: HashMap<usize, usize> = alive.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        LabeledGraph {
            alphabet: self.alphabet,
            n: alive.len(),
            basepoint: dense[&self.basepoint],
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| !dead_edge[i])
                .map(|(_, e)| Edge::new(e.letter, dense[&e.from], dense[&e.to]))
                .collect(),
            marks: self
                .marks
                .iter()
                .filter(|(_, &v)| !dead_vertex[v])
                .map(|(k, &v)| (k.clone(), dense[&v]))
                .collect(),
        }
        .sorted()
        .canonicalize()
    }

    /// Reads `w` from `from`, reusing existing edges as long as possible and
    /// appending a fresh chain for the unread suffix; the endpoint is
    /// recorded under `mark`. A folded input stays folded.
    pub fn with_path(&self, from: usize, w: &Word, mark: &str) -> Result<LabeledGraph> {
        let idx = self.try_folded_index()?;
        let mut g = self.clone();
        let mut cur = from;
        let mut rest = w.letters();
        while let Some((l, tail)) = rest.split_first() {
            match idx.step(cur, *l) {
                Some(next) => {
                    cur = next;
                    rest = tail;
                }
                None => break,
            }
        }
        for l in rest {
            let fresh = g.n;
            g.n += 1;
            if l.is_positive() {
                g.edges.push(Edge::new(l.index(), cur, fresh));
            } else {
                g.edges.push(Edge::new(l.index(), fresh, cur));
            }
            cur = fresh;
        }
        g.marks.insert(mark.to_string(), cur);
        Ok(g.sorted().canonicalize())
    }

    /// Neighbor lists sorted by (letter, direction, endpoint): the canonical
    /// exploration order used by every breadth-first traversal here.
    fn sorted_adjacency(&self) -> Vec<Vec<(u32, bool, usize, Edge)>> {
        let mut adj: Vec<Vec<(u32, bool, usize, Edge)>> = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.from].push((e.letter, true, e.to, *e));
            adj[e.to].push((e.letter, false, e.from, *e));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(l, dir, other, _)| (l, !dir, other));
        }
        adj
    }

    /// Relabels vertices by breadth-first discovery order from the
    /// basepoint. Two based folded connected graphs are isomorphic exactly
    /// when their canonical forms are equal.
    pub fn canonicalize(&self) -> LabeledGraph {
        let adj = self.sorted_adjacency();
        let mut new_id = vec![usize::MAX; self.n];
        let mut order = vec![self.basepoint];
        new_id[self.basepoint] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(_, _, u, _) in &adj[v] {
                if new_id[u] == usize::MAX {
                    new_id[u] = order.len();
                    order.push(u);
                }
            }
        }
        // unreachable leftovers (disconnected inputs) keep relative order
        for (v, id) in new_id.iter_mut().enumerate() {
            if *id == usize::MAX {
                *id = order.len();
                order.push(v);
            }
        }
        LabeledGraph {
            alphabet: self.alphabet,
            n: self.n,
            basepoint: 0,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(e.letter, new_id[e.from], new_id[e.to]))
                .collect(),
            marks: self
                .marks
                .iter()
                .map(|(k, &v)| (k.clone(), new_id[v]))
                .collect(),
        }
        .sorted()
    }

    /// Fiber product: the connected component of the basepoint pair in the
    /// synchronized product. Recognizes the intersection of the recognized
    /// subgroups; the pullback of two covers is a cover.
    pub fn pullback(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        if self.alphabet.rank() != other.alphabet.rank() {
            return Err(Error::AlphabetMismatch(
                self.alphabet.rank(),
                other.alphabet.rank(),
            ));
        }
        let a = self.try_folded_index()?;
        let b = other.try_folded_index()?;
        let start = (self.basepoint, other.basepoint);
        let mut ids: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
        let mut pairs = vec![start];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (u, v) = pairs[head];
            let source = head;
            head += 1;
            for l in self.alphabet.letters() {
                if let (Some(u2), Some(v2)) = (a.out(u, l), b.out(v, l)) {
                    let next_id = match ids.get(&(u2, v2)) {
                        Some(&id) => id,
                        None => {
                            pairs.push((u2, v2));
                            ids.insert((u2, v2), pairs.len() - 1);
                            pairs.len() - 1
                        }
                    };
                    edges.push(Edge::new(l, source, next_id));
                }
                if let (Some(u2), Some(v2)) = (a.inn(u, l), b.inn(v, l)) {
                    if let std::collections::hash_map::Entry::Vacant(slot) = ids.entry((u2, v2)) {
                        slot.insert(pairs.len());
                        pairs.push((u2, v2));
                    }
                }
            }
        }
        // every component edge starts at a component vertex, so recording
        // outgoing edges while sweeping the vertices captures each one once
        let g = LabeledGraph {
            alphabet: Alphabet::new(self.alphabet.rank()),
            n: pairs.len(),
            basepoint: 0,
            edges,
            marks: BTreeMap::new(),
        }
        .sorted();
        debug_assert!(g.is_folded());
        Ok(g.canonicalize())
    }

    /// Deterministic breadth-first spanning tree from `root`, exploring
    /// preferred edges first. When the preferred edges span all vertices
    /// connectedly, the tree uses only preferred edges.
    pub fn spanning_tree(&self, root: usize, prefer: &BTreeSet<Edge>) -> Result<BTreeSet<Edge>> {
        let adj = self.sorted_adjacency();
        let mut tree = BTreeSet::new();
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut order = vec![root];
        // pass 0 grows the tree inside the preferred subgraph; pass 1
        // restarts the sweep and extends it with the remaining edges
        for pass in 0..2 {
            let mut head = 0;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for preferred_first in [true, false] {
                    if pass == 0 && !preferred_first {
                        continue;
                    }
                    for &(_, _, u, e) in &adj[v] {
                        if prefer.contains(&e) != preferred_first {
                            continue;
                        }
                        if !seen[u] {
                            seen[u] = true;
                            order.push(u);
                            tree.insert(e);
                        }
                    }
                }
            }
        }
        if order.len() != self.n {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }

    /// Free basis of the recognized subgroup: one word per non-tree edge,
    /// `tree-path(basepoint → from) · letter · tree-path(to → basepoint)`,
    /// in sorted edge order. The basis count is `E − V + 1`.
    pub fn basis(&self, tree: &BTreeSet<Edge>) -> Vec<Word> {
        let paths = self.tree_paths(tree);
        self.edges
            .iter()
            .filter(|e| !tree.contains(e))
            .map(|e| basis_word(e, &paths))
            .collect()
    }

    /// For every vertex, the letter path read from the basepoint to it along
    /// the spanning tree.
    pub(crate) fn tree_paths(&self, tree: &BTreeSet<Edge>) -> Vec<Vec<Letter>> {
        let mut adj: Vec<Vec<(usize, Letter)>> = vec![Vec::new(); self.n];
        for e in tree {
            adj[e.from].push((e.to, Letter::positive(e.letter)));
            adj[e.to].push((e.from, Letter::negative(e.letter)));
        }
        let mut paths: Vec<Vec<Letter>> = vec![Vec::new(); self.n];
        let mut seen = vec![false; self.n];
        seen[self.basepoint] = true;
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(v) = queue.pop_front() {
            for &(u, l) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    let mut p = paths[v].clone();
                    p.push(l);
                    paths[u] = p;
                    queue.push_back(u);
                }
            }
        }
        paths
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<LabeledGraph> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

pub(crate) fn basis_word(e: &Edge, paths: &[Vec<Letter>]) -> Word {
    let into = paths[e.from].iter().copied();
    let back = paths[e.to].iter().rev().map(|l| l.inverse());
    Word::from_letters(
        into.chain(std::iter::once(Letter::positive(e.letter)))
            .chain(back),
    )
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    rank: u32,
    n: usize,
    basepoint: usize,
    edges: Vec<(u32, usize, usize)>,
    marks: BTreeMap<String, usize>,
}

impl Serialize for LabeledGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            rank: self.alphabet.rank(),
            n: self.n,
            basepoint: self.basepoint,
            edges: self
                .edges
                .iter()
                .map(|e| (e.letter, e.from, e.to))
                .collect(),
            marks: self.marks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = GraphWire::deserialize(deserializer)?;
        if !(1..=26).contains(&wire.rank) {
            return Err(D::Error::custom(format!(
                "graph rank {} outside 1..=26",
                wire.rank
            )));
        }
        LabeledGraph::new(
            Alphabet::new(wire.rank),
            wire.n,
            wire.basepoint,
            wire.edges
                .into_iter()
                .map(|(l, f, t)| Edge::new(l, f, t))
                .collect(),
            wire.marks,
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A finitely generated subgroup given by generators, with its Stallings
/// core graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Word>,
    core: LabeledGraph,
}

impl Subgroup {
    /// Folds the wedge of generator loops and trims hanging trees: the core
    /// recognizes exactly the subgroup spanned by the generators.
    pub fn new(alphabet: Alphabet, generators: Vec<Word>) -> Subgroup {
        let core = LabeledGraph::wedge(alphabet, &generators)
            .fold()
            .trimmed(&BTreeSet::new());
        Subgroup { generators, core }
    }

    pub fn trivial(alphabet: Alphabet) -> Subgroup {
        Subgroup::new(alphabet, Vec::new())
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn core(&self) -> &LabeledGraph {
        &self.core
    }

    pub fn alphabet(&self) -> Alphabet {
        self.core.alphabet()
    }

    /// Membership test: `w` belongs to the subgroup exactly when it reads a
    /// closed path at the basepoint of the folded core.
    pub fn contains(&self, w: &Word) -> bool {
        self.core.read(self.core.basepoint(), w) == Some(self.core.basepoint())
    }
}

/// A complete folded connected graph: every letter is a permutation of the
/// vertices, and the vertex count equals the index of the recognized
/// subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGraph {
    graph: LabeledGraph,
}

impl TryFrom<LabeledGraph> for CoverGraph {
    type Error = Error;

    fn try_from(graph: LabeledGraph) -> Result<CoverGraph> {
        if !graph.is_folded() {
            return Err(Error::NotFolded);
        }
        if !graph.is_complete() {
            return Err(Error::InvalidGraph("graph is not complete".into()));
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(CoverGraph { graph })
    }
}

impl std::ops::Deref for CoverGraph {
    type Target = LabeledGraph;

    fn deref(&self) -> &LabeledGraph {
        &self.graph
    }
}

impl CoverGraph {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    /// Index of the recognized subgroup.
    pub fn index(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Reading on a cover is total.
    pub fn read_total(&self, start: usize, w: &Word) -> usize {
        self.graph
            .read(start, w)
            .expect("reading on a cover is total")
    }

    /// Closure of `seed` under reading the generators and their inverses:
    /// the orbit of the seed cosets under the generated subgroup.
    pub fn orbit<I: IntoIterator<Item = usize>>(&self, seed: I, gens: &[Word]) -> BTreeSet<usize> {
        let idx = self.graph.folded_index();
        let mut seen: BTreeSet<usize> = seed.into_iter().collect();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        let inverses: Vec<Word> = gens.iter().map(|g| g.inverse()).collect();
        while let Some(v) = queue.pop_front() {
            for g in gens.iter().chain(inverses.iter()) {
                let u = idx.read(v, g).expect("reading on a cover is total");
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Same graph with the basepoint moved to `read(basepoint, w⁻¹)`; the
    /// recognized subgroup becomes the conjugate `w·M·w⁻¹`.
    pub fn with_basepoint_moved(&self, w: &Word) -> CoverGraph {
        let mut graph = self.graph.clone();
        graph.basepoint = self.read_total(self.graph.basepoint(), &w.inverse());
        CoverGraph { graph }
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns (surviving root, absorbed root); the arguments must be in
    /// different classes.
    fn union(&mut self, a: usize, b: usize) -> (usize, usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        debug_assert_ne!(ra, rb);
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        (big, small)
    }
}
