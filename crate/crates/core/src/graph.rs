//! Folded subgroup graphs (Stallings automata): construction by folding,
//! membership, geodesic spanning trees, Schreier transversals, products and
//! conjugates.
//!
//! A graph is a based, edge-labeled digraph that is folded (no two edges with
//! the same label share a source or a target) and core (every non-basepoint
//! vertex has degree ≥ 2). Reduced basepoint loops spell exactly the elements
//! of the subgroup. Graphs are mutable only while folding; afterwards they are
//! frozen, and all published graphs use a canonical BFS vertex numbering so
//! that equal-language graphs compare equal structurally.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::collections::hash_map::Entry;

use crate::word::{Alphabet, Letter, Word};

pub type VertexId = usize;

/// A labeled edge `source --gen--> target`.
pub type Edge = (VertexId, usize, VertexId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    alphabet: Alphabet,
    basepoint: VertexId,
    out: Vec<Vec<Option<VertexId>>>,
    inc: Vec<Vec<Option<VertexId>>>,
}

impl SubgroupGraph {
    /// Graph of the trivial subgroup: one vertex, no edges.
    pub fn trivial(alphabet: Alphabet) -> Self {
        let rank = alphabet.rank();
        SubgroupGraph {
            alphabet,
            basepoint: 0,
            out: vec![vec![None; rank]],
            inc: vec![vec![None; rank]],
        }
    }

    /// Core Stallings graph of the subgroup generated by `generators`:
    /// a wedge of generator loops at the basepoint, folded to a fixed point,
    /// then trimmed. The result does not depend on generator order.
    pub fn fold(alphabet: &Alphabet, generators: &[Word]) -> Self {
        let mut edges = Vec::new();
        let mut next = 1usize;
        for g in generators {
            if g.is_identity() {
                continue;
            }
            let mut current = 0usize;
            for (i, &l) in g.letters().iter().enumerate() {
                let target = if i + 1 == g.len() { 0 } else { next };
                if i + 1 != g.len() {
                    next += 1;
                }
                if l.is_inverse() {
                    edges.push((target, l.gen(), current));
                } else {
                    edges.push((current, l.gen(), target));
                }
                current = target;
            }
        }
        Self::from_edges(alphabet.clone(), next, 0, edges)
    }

    /// Fold an arbitrary edge list into a canonical core graph based at `base`.
    fn from_edges(
        alphabet: Alphabet,
        vertex_count: usize,
        base: VertexId,
        edges: Vec<Edge>,
    ) -> Self {
        let mut folder = Folder::new(vertex_count.max(base + 1), edges);
        folder.run();
        let (nv, base, edges) = folder.collapse(base);
        let mut graph = SubgroupGraph::assemble(alphabet, nv, base, &edges);
        graph.keep_basepoint_component();
        graph.trim_core();
        graph.canonicalize();
        graph
    }

    fn assemble(alphabet: Alphabet, n: usize, basepoint: usize, edges: &[Edge]) -> Self {
        let rank = alphabet.rank();
        let mut out = vec![vec![None; rank]; n];
        let mut inc = vec![vec![None; rank]; n];
        for &(u, g, v) in edges {
            debug_assert!(out[u][g].is_none() || out[u][g] == Some(v), "not folded");
            debug_assert!(inc[v][g].is_none() || inc[v][g] == Some(u), "not folded");
            out[u][g] = Some(v);
            inc[v][g] = Some(u);
        }
        SubgroupGraph {
            alphabet,
            basepoint,
            out,
            inc,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// Rank of the subgroup: `E − V + 1` for a connected core graph.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    /// All edges `(source, generator, target)` in sorted order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for (u, row) in self.out.iter().enumerate() {
            for (g, target) in row.iter().enumerate() {
                if let Some(v) = target {
                    edges.push((u, g, *v));
                }
            }
        }
        edges
    }

    /// Follow one letter from `v`: positive letters go along edges, inverse
    /// letters against them.
    pub fn step(&self, v: VertexId, letter: Letter) -> Option<VertexId> {
        if letter.is_inverse() {
            self.inc[v][letter.gen()]
        } else {
            self.out[v][letter.gen()]
        }
    }

    /// End vertex of the path spelling `w` from `v`, if it exists.
    pub fn trace_from(&self, v: VertexId, w: &Word) -> Option<VertexId> {
        let mut cur = v;
        for &l in w.letters() {
            cur = self.step(cur, l)?;
        }
        Some(cur)
    }

    /// Membership: `w` labels a closed basepoint path. Paths of reduced words
    /// in a folded graph never backtrack, so this is a plain walk.
    pub fn accepts(&self, w: &Word) -> bool {
        self.trace_from(self.basepoint, w) == Some(self.basepoint)
    }

    /// Whether no vertex has two equally labeled outgoing or incoming edges.
    /// Holds by construction; exposed for tests.
    pub fn is_folded(&self) -> bool {
        // The Option-per-label representation cannot express a violation.
        true
    }

    /// Whether every non-basepoint vertex has degree ≥ 2.
    pub fn is_core(&self) -> bool {
        (0..self.vertex_count()).all(|v| v == self.basepoint || self.degree(v) >= 2)
    }

    fn degree(&self, v: VertexId) -> usize {
        self.out[v].iter().filter(|t| t.is_some()).count()
            + self.inc[v].iter().filter(|t| t.is_some()).count()
    }

    /// Graph distances from the basepoint.
    pub fn distances_from_basepoint(&self) -> Vec<usize> {
        bfs_distances(self)
    }

    /// BFS tree from the basepoint, exploring letters in the fixed order
    /// `a < a⁻¹ < b < b⁻¹ < …`. The tie-breaking rule makes the tree, and
    /// everything derived from it, reproducible run-to-run.
    pub fn geodesic_spanning_tree(&self) -> SpanningTree {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        depth[self.basepoint] = 0;
        order.push(self.basepoint);
        queue.push_back(self.basepoint);
        while let Some(v) = queue.pop_front() {
            for l in self.alphabet.letters() {
                if let Some(u) = self.step(v, l) {
                    if depth[u] == usize::MAX {
                        depth[u] = depth[v] + 1;
                        parent[u] = Some((v, l));
                        order.push(u);
                        queue.push_back(u);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), n, "graph must be connected");
        SpanningTree { parent, depth, order }
    }

    /// Geodesic Schreier transversal up to length `max_len`: one representative
    /// per right coset, prefix-closed, in shortlex order. Internal
    /// representatives are exactly the tree words; external ones extend them
    /// through the lazily materialized coset graph.
    pub fn schreier_transversal(
        &self,
        tree: &SpanningTree,
        max_len: usize,
    ) -> Vec<TransversalRep> {
        debug_assert!(tree.is_geodesic(self));
        let mut reps = Vec::new();
        let mut seen = vec![false; self.vertex_count()];
        let mut queue: VecDeque<(Word, Option<VertexId>)> = VecDeque::new();
        seen[self.basepoint] = true;
        queue.push_back((Word::identity(), Some(self.basepoint)));
        while let Some((word, state)) = queue.pop_front() {
            reps.push(TransversalRep {
                word: word.clone(),
                vertex: state,
            });
            if word.len() == max_len {
                continue;
            }
            for l in self.alphabet.letters() {
                if word.last() == Some(l.inverse()) {
                    continue;
                }
                let mut letters = word.letters().to_vec();
                letters.push(l);
                let extended = Word::from_reduced(letters);
                match state {
                    Some(v) => match self.step(v, l) {
                        Some(u) => {
                            if !seen[u] {
                                seen[u] = true;
                                queue.push_back((extended, Some(u)));
                            }
                        }
                        None => queue.push_back((extended, None)),
                    },
                    // Outside the core the coset graph is a tree: every
                    // reduced extension reaches a fresh coset.
                    None => queue.push_back((extended, None)),
                }
            }
        }
        reps
    }

    /// Basepoint component of the labeled pullback, trimmed to core;
    /// recognizes the intersection of the two subgroups.
    pub fn intersect(&self, other: &SubgroupGraph) -> SubgroupGraph {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut ids: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = (self.basepoint, other.basepoint);
        ids.insert(start, 0);
        queue.push_back(start);
        let mut edges = Vec::new();
        while let Some((u1, u2)) = queue.pop_front() {
            let uid = ids[&(u1, u2)];
            for l in self.alphabet.letters() {
                let (v1, v2) = match (self.step(u1, l), other.step(u2, l)) {
                    (Some(v1), Some(v2)) => (v1, v2),
                    _ => continue,
                };
                let next_id = ids.len();
                let vid = match ids.entry((v1, v2)) {
                    Entry::Occupied(e) => *e.get(),
                    Entry::Vacant(e) => {
                        e.insert(next_id);
                        queue.push_back((v1, v2));
                        next_id
                    }
                };
                if !l.is_inverse() {
                    edges.push((uid, l.gen(), vid));
                }
            }
        }
        let mut graph = SubgroupGraph::assemble(self.alphabet.clone(), ids.len(), 0, &edges);
        graph.trim_core();
        graph.canonicalize();
        graph
    }

    /// Graph recognizing the conjugate subgroup `f⁻¹ C f`, built by attaching
    /// an `f`-labeled path from the old basepoint to a new one and refolding.
    /// Contract: the result accepts `w` iff this graph accepts `f w f⁻¹`.
    pub fn conjugate(&self, f: &Word) -> SubgroupGraph {
        if f.is_identity() {
            return self.clone();
        }
        let mut edges = self.edges();
        let mut next = self.vertex_count();
        let mut current = self.basepoint;
        // Path from the old basepoint spelling f; its far end is the new base.
        for &l in f.letters() {
            let target = next;
            next += 1;
            if l.is_inverse() {
                edges.push((target, l.gen(), current));
            } else {
                edges.push((current, l.gen(), target));
            }
            current = target;
        }
        SubgroupGraph::from_edges(self.alphabet.clone(), next, current, edges)
    }

    /// Drop everything outside the basepoint's connected component.
    fn keep_basepoint_component(&mut self) {
        let n = self.vertex_count();
        let mut keep = vec![false; n];
        let mut queue = VecDeque::new();
        keep[self.basepoint] = true;
        queue.push_back(self.basepoint);
        while let Some(v) = queue.pop_front() {
            for l in self.alphabet.letters() {
                if let Some(u) = self.step(v, l) {
                    if !keep[u] {
                        keep[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        if keep.iter().all(|&k| k) {
            return;
        }
        self.retain(&keep);
    }

    /// Iteratively remove non-basepoint vertices of degree ≤ 1. The basepoint
    /// survives even at degree ≤ 1.
    fn trim_core(&mut self) {
        loop {
            let n = self.vertex_count();
            let mut keep = vec![true; n];
            let mut changed = false;
            for (v, slot) in keep.iter_mut().enumerate() {
                if v != self.basepoint && self.degree(v) <= 1 {
                    *slot = false;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
            // Detach edges touching removed vertices.
            for v in 0..n {
                for g in 0..self.alphabet.rank() {
                    if let Some(u) = self.out[v][g] {
                        if !keep[v] || !keep[u] {
                            self.out[v][g] = None;
                            self.inc[u][g] = None;
                        }
                    }
                }
            }
            self.retain(&keep);
        }
    }

    fn retain(&mut self, keep: &[bool]) {
        let mut remap = vec![usize::MAX; keep.len()];
        let mut next = 0;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = next;
                next += 1;
            }
        }
        let rank = self.alphabet.rank();
        let mut out = vec![vec![None; rank]; next];
        let mut inc = vec![vec![None; rank]; next];
        for (v, &k) in keep.iter().enumerate() {
            if !k {
                continue;
            }
            for g in 0..rank {
                if let Some(u) = self.out[v][g] {
                    if keep[u] {
                        out[remap[v]][g] = Some(remap[u]);
                    }
                }
                if let Some(u) = self.inc[v][g] {
                    if keep[u] {
                        inc[remap[v]][g] = Some(remap[u]);
                    }
                }
            }
        }
        self.basepoint = remap[self.basepoint];
        self.out = out;
        self.inc = inc;
    }

    /// Renumber vertices in BFS order from the basepoint so equal-language
    /// graphs have identical encodings.
    fn canonicalize(&mut self) {
        let n = self.vertex_count();
        let mut remap = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        remap[self.basepoint] = 0;
        let mut next = 1;
        queue.push_back(self.basepoint);
        while let Some(v) = queue.pop_front() {
            for l in self.alphabet.letters() {
                if let Some(u) = self.step(v, l) {
                    if remap[u] == usize::MAX {
                        remap[u] = next;
                        next += 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        debug_assert_eq!(next, n, "graph must be connected");
        let rank = self.alphabet.rank();
        let mut out = vec![vec![None; rank]; n];
        let mut inc = vec![vec![None; rank]; n];
        for v in 0..n {
            for g in 0..rank {
                if let Some(u) = self.out[v][g] {
                    out[remap[v]][g] = Some(remap[u]);
                }
                if let Some(u) = self.inc[v][g] {
                    inc[remap[v]][g] = Some(remap[u]);
                }
            }
        }
        self.basepoint = 0;
        self.out = out;
        self.inc = inc;
    }

    /// DOT rendering: basepoint double-circled, edges labeled by generator
    /// name, deterministic vertex numbering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!("digraph {name} {{\n"));
        s.push_str("  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let shape = if v == self.basepoint {
                "doublecircle"
            } else {
                "circle"
            };
            s.push_str(&format!("  {v} [shape={shape}];\n"));
        }
        for (u, g, v) in self.edges() {
            let label = self.alphabet.name(Letter::new(g, false));
            s.push_str(&format!("  {u} -> {v} [label=\"{label}\"];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges()
            .iter()
            .map(|&(u, g, v)| {
                serde_json::json!({
                    "src": u,
                    "label": self.alphabet.name(Letter::new(g, false)),
                    "dst": v,
                })
            })
            .collect();
        serde_json::json!({
            "vertices": self.vertex_count(),
            "basepoint": self.basepoint,
            "edges": edges,
        })
    }
}

/// One coset representative from a Schreier transversal; `vertex` is set for
/// internal representatives (those ending inside the core graph).
#[derive(Clone, Debug)]
pub struct TransversalRep {
    pub word: Word,
    pub vertex: Option<VertexId>,
}

/// A spanning tree rooted at the basepoint, stored as a parent map.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    parent: Vec<Option<(VertexId, Letter)>>,
    depth: Vec<usize>,
    order: Vec<VertexId>,
}

impl SpanningTree {
    /// Assemble a tree from an explicit parent map (the basepoint has no
    /// parent). Depth and order are derived from the parent chains.
    pub fn from_parents(parent: Vec<Option<(VertexId, Letter)>>) -> SpanningTree {
        let n = parent.len();
        let mut depth = vec![usize::MAX; n];
        fn depth_of(
            v: VertexId,
            parent: &[Option<(VertexId, Letter)>],
            depth: &mut [usize],
        ) -> usize {
            if depth[v] != usize::MAX {
                return depth[v];
            }
            let d = match parent[v] {
                None => 0,
                Some((p, _)) => depth_of(p, parent, depth) + 1,
            };
            depth[v] = d;
            d
        }
        for v in 0..n {
            depth_of(v, &parent, &mut depth);
        }
        let mut order: Vec<VertexId> = (0..n).collect();
        order.sort_by_key(|&v| (depth[v], v));
        SpanningTree {
            parent,
            depth,
            order,
        }
    }

    /// Label of the tree path from the basepoint to `v`.
    pub fn word_to(&self, v: VertexId) -> Word {
        let mut letters = Vec::new();
        let mut cur = v;
        while let Some((p, l)) = self.parent[cur] {
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        Word::from_reduced(letters)
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    /// Vertices in BFS discovery order.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Whether the tree edge `(u, gen, v)` (in either orientation) is part of
    /// some parent link.
    pub fn uses_edge(&self, u: VertexId, gen: usize, v: VertexId) -> bool {
        let forward = self.parent[v] == Some((u, Letter::new(gen, false)));
        let backward = self.parent[u] == Some((v, Letter::new(gen, true)));
        forward || backward
    }

    /// Tree paths realize graph distances from the basepoint.
    pub fn is_geodesic(&self, graph: &SubgroupGraph) -> bool {
        let distances = bfs_distances(graph);
        (0..self.vertex_count()).all(|v| self.depth[v] == distances[v])
    }
}

fn bfs_distances(graph: &SubgroupGraph) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.vertex_count()];
    let mut queue = VecDeque::new();
    dist[graph.basepoint()] = 0;
    queue.push_back(graph.basepoint());
    while let Some(v) = queue.pop_front() {
        for l in graph.alphabet().letters() {
            if let Some(u) = graph.step(v, l) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    dist
}

/// Union-find folding with a worklist of vertices to re-check. Merges keep
/// the smaller root so results are reproducible.
struct Folder {
    parent: Vec<usize>,
    out: Vec<BTreeMap<usize, Vec<usize>>>,
    inc: Vec<BTreeMap<usize, Vec<usize>>>,
    work: VecDeque<usize>,
}

impl Folder {
    fn new(n: usize, edges: Vec<Edge>) -> Self {
        let mut out = vec![BTreeMap::new(); n];
        let mut inc: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
        for (u, g, v) in edges {
            out[u].entry(g).or_insert_with(Vec::new).push(v);
            inc[v].entry(g).or_default().push(u);
        }
        Folder {
            parent: (0..n).collect(),
            out,
            inc,
            work: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    fn run(&mut self) {
        while let Some(v) = self.work.pop_front() {
            let v = self.find(v);
            while let Some((a, b)) = self.find_clash(v) {
                let merged = self.union(a, b);
                self.work.push_back(merged);
                // The merge may have rerooted v.
                if self.find(v) != v {
                    break;
                }
            }
        }
    }

    /// Two distinct targets reachable from `v` by the same label and
    /// direction, if any.
    fn find_clash(&mut self, v: usize) -> Option<(usize, usize)> {
        for direction in 0..2 {
            let gens: Vec<usize> = if direction == 0 {
                self.out[v].keys().copied().collect()
            } else {
                self.inc[v].keys().copied().collect()
            };
            for g in gens {
                let raw = if direction == 0 {
                    self.out[v].get(&g).unwrap().clone()
                } else {
                    self.inc[v].get(&g).unwrap().clone()
                };
                let mut resolved: Vec<usize> = raw.iter().map(|&t| self.find(t)).collect();
                resolved.sort_unstable();
                resolved.dedup();
                if resolved.len() > 1 {
                    return Some((resolved[0], resolved[1]));
                }
                let slot = if direction == 0 {
                    self.out[v].get_mut(&g).unwrap()
                } else {
                    self.inc[v].get_mut(&g).unwrap()
                };
                *slot = resolved;
            }
        }
        None
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (winner, loser) = if a < b { (a, b) } else { (b, a) };
        self.parent[loser] = winner;
        let out = std::mem::take(&mut self.out[loser]);
        for (g, mut targets) in out {
            self.out[winner].entry(g).or_default().append(&mut targets);
        }
        let inc = std::mem::take(&mut self.inc[loser]);
        for (g, mut sources) in inc {
            self.inc[winner].entry(g).or_default().append(&mut sources);
        }
        winner
    }

    /// Compact roots and emit the deduplicated edge set.
    fn collapse(&mut self, base: usize) -> (usize, usize, Vec<Edge>) {
        let n = self.parent.len();
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for (v, slot) in remap.iter_mut().enumerate() {
            if self.find(v) == v {
                *slot = next;
                next += 1;
            }
        }
        let mut edges = HashSet::new();
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            let out = self.out[v].clone();
            for (g, targets) in out {
                for t in targets {
                    let t = self.find(t);
                    edges.insert((remap[v], g, remap[t]));
                }
            }
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        let base = self.find(base);
        (next, remap[base], edges)
    }
}
