//! Finite-state automata over the group alphabet `X ∪ X⁻¹` (plus ε):
//! determinization with canonical minimization, the reduced-word acceptor,
//! saturation (Benois) reduction, bounded-cancellation concatenation, cone
//! acceptors, and shortlex enumeration.
//!
//! Automata are partial: a missing transition stands for a dead state. Both
//! letters of an inverse pair are distinct symbols of the alphabet. The
//! canonical form is the minimal partial DFA with BFS state numbering, so two
//! automata accept the same language iff their canonical forms are equal.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::graph::SubgroupGraph;
use crate::word::{cn, Alphabet, Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    /// Sampling found factors cancelling more than the declared bound.
    #[error("sampled product cancels {found} letters, more than the bound {bound}")]
    KBoundViolated { found: usize, bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    states: usize,
    /// Arrows `(source, label, target)`; `None` is ε.
    arrows: Vec<(usize, Option<Letter>, usize)>,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
    deterministic: bool,
}

impl Automaton {
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        mut arrows: Vec<(usize, Option<Letter>, usize)>,
        initial: BTreeSet<usize>,
        finals: BTreeSet<usize>,
    ) -> Self {
        assert!(!initial.is_empty(), "automaton needs an initial state");
        arrows.sort_unstable();
        arrows.dedup();
        let deterministic = initial.len() == 1
            && arrows.iter().all(|(_, l, _)| l.is_some())
            && {
                let mut seen = BTreeSet::new();
                arrows.iter().all(|&(s, l, _)| seen.insert((s, l)))
            };
        Automaton {
            alphabet,
            states,
            arrows,
            initial,
            finals,
            deterministic,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn arrows(&self) -> &[(usize, Option<Letter>, usize)] {
        &self.arrows
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Identify a folded graph with an automaton: every edge is readable in
    /// both directions, and the basepoint is the unique initial and final
    /// state. Paths may backtrack, so the raw language also contains
    /// non-reduced spellings of subgroup elements.
    pub fn from_graph(graph: &SubgroupGraph) -> Self {
        let mut arrows = Vec::new();
        for (u, g, v) in graph.edges() {
            arrows.push((u, Some(Letter::new(g, false)), v));
            arrows.push((v, Some(Letter::new(g, true)), u));
        }
        let base = BTreeSet::from([graph.basepoint()]);
        Automaton::new(
            graph.alphabet().clone(),
            graph.vertex_count(),
            arrows,
            base.clone(),
            base,
        )
    }

    /// Canonical acceptor of exactly the reduced words of the subgroup.
    pub fn subgroup_acceptor(graph: &SubgroupGraph) -> Self {
        Automaton::from_graph(graph)
            .intersect(&Automaton::reduced_acceptor(graph.alphabet()))
    }

    /// The `2m+1`-state acceptor of freely reduced words: the state remembers
    /// the last letter and forbids its inverse.
    pub fn reduced_acceptor(alphabet: &Alphabet) -> Self {
        let letters: Vec<Letter> = alphabet.letters().collect();
        let states = 1 + letters.len();
        let mut arrows = Vec::new();
        for &l in &letters {
            arrows.push((0, Some(l), 1 + l.order_index()));
        }
        for &prev in &letters {
            for &next in &letters {
                if next != prev.inverse() {
                    arrows.push((1 + prev.order_index(), Some(next), 1 + next.order_index()));
                }
            }
        }
        let finals: BTreeSet<usize> = (0..states).collect();
        Automaton::new(
            alphabet.clone(),
            states,
            arrows,
            BTreeSet::from([0]),
            finals,
        )
    }

    /// Acceptor of the single word `w`.
    pub fn word_acceptor(alphabet: &Alphabet, w: &Word) -> Self {
        let mut arrows = Vec::new();
        for (i, &l) in w.letters().iter().enumerate() {
            arrows.push((i, Some(l), i + 1));
        }
        Automaton::new(
            alphabet.clone(),
            w.len() + 1,
            arrows,
            BTreeSet::from([0]),
            BTreeSet::from([w.len()]),
        )
    }

    /// Acceptor of a finite set of words (a union of chains, canonicalized).
    pub fn finite_language(alphabet: &Alphabet, words: &[Word]) -> Self {
        let mut arrows = Vec::new();
        let mut finals = BTreeSet::new();
        let mut next = 1usize;
        for w in words {
            if w.is_empty() {
                finals.insert(0);
                continue;
            }
            let mut cur = 0usize;
            for (i, &l) in w.letters().iter().enumerate() {
                let target = next;
                next += 1;
                arrows.push((cur, Some(l), target));
                cur = target;
                if i + 1 == w.len() {
                    finals.insert(cur);
                }
            }
        }
        Automaton::new(
            alphabet.clone(),
            next,
            arrows,
            BTreeSet::from([0]),
            finals,
        )
        .canonical_dfa()
    }

    fn eps_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.states];
        for &(s, l, t) in &self.arrows {
            if l.is_none() {
                adj[s].push(t);
            }
        }
        adj
    }

    fn letter_adjacency(&self) -> Vec<BTreeMap<Letter, Vec<usize>>> {
        let mut adj: Vec<BTreeMap<Letter, Vec<usize>>> = vec![BTreeMap::new(); self.states];
        for &(s, l, t) in &self.arrows {
            if let Some(l) = l {
                adj[s].entry(l).or_default().push(t);
            }
        }
        adj
    }

    fn closure(set: &BTreeSet<usize>, eps: &[Vec<usize>]) -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for &t in &eps[s] {
                if out.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        out
    }

    /// Run a word through the automaton (subset simulation, ε-aware).
    pub fn accepts(&self, w: &Word) -> bool {
        let eps = self.eps_adjacency();
        let letters = self.letter_adjacency();
        let mut current = Self::closure(&self.initial, &eps);
        for &l in w.letters() {
            let mut next = BTreeSet::new();
            for &s in &current {
                if let Some(ts) = letters[s].get(&l) {
                    next.extend(ts.iter().copied());
                }
            }
            if next.is_empty() {
                return false;
            }
            current = Self::closure(&next, &eps);
        }
        current.iter().any(|s| self.finals.contains(s))
    }

    /// Subset construction followed by partition refinement and BFS
    /// renumbering: the minimal partial DFA in canonical form.
    pub fn canonical_dfa(&self) -> Automaton {
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        let eps = self.eps_adjacency();
        let letter_adj = self.letter_adjacency();

        // Subset construction.
        let start = Self::closure(&self.initial, &eps);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        ids.insert(start.clone(), 0);
        subsets.push(start);
        let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            while trans.len() <= id {
                trans.push(vec![None; letters.len()]);
            }
            let subset = subsets[id].clone();
            for (li, &l) in letters.iter().enumerate() {
                let mut moved = BTreeSet::new();
                for &s in &subset {
                    if let Some(ts) = letter_adj[s].get(&l) {
                        moved.extend(ts.iter().copied());
                    }
                }
                if moved.is_empty() {
                    continue;
                }
                let closed = Self::closure(&moved, &eps);
                let next_id = ids.len();
                let tid = *ids.entry(closed.clone()).or_insert_with(|| {
                    subsets.push(closed);
                    queue.push_back(next_id);
                    next_id
                });
                trans[id][li] = Some(tid);
            }
        }
        while trans.len() < subsets.len() {
            trans.push(vec![None; letters.len()]);
        }
        let dfa_finals: BTreeSet<usize> = (0..subsets.len())
            .filter(|&i| subsets[i].iter().any(|s| self.finals.contains(s)))
            .collect();

        minimize_partial_dfa(&self.alphabet, &trans, 0, &dfa_finals)
    }

    /// Both languages, via the product of the canonical DFAs.
    pub fn intersect(&self, other: &Automaton) -> Automaton {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let a = self.canonical_form();
        let b = other.canonical_form();
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        let ta = a.transition_table(&letters);
        let tb = b.transition_table(&letters);
        let start = (*a.initial.first().unwrap(), *b.initial.first().unwrap());
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        ids.insert(start, 0);
        let mut order = vec![start];
        let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            while trans.len() <= id {
                trans.push(vec![None; letters.len()]);
            }
            let (p, q) = order[id];
            for li in 0..letters.len() {
                if let (Some(tp), Some(tq)) = (ta[p][li], tb[q][li]) {
                    let next_id = ids.len();
                    let tid = *ids.entry((tp, tq)).or_insert_with(|| {
                        order.push((tp, tq));
                        queue.push_back(next_id);
                        next_id
                    });
                    trans[id][li] = Some(tid);
                }
            }
        }
        while trans.len() < order.len() {
            trans.push(vec![None; letters.len()]);
        }
        let finals: BTreeSet<usize> = (0..order.len())
            .filter(|&i| a.finals.contains(&order[i].0) && b.finals.contains(&order[i].1))
            .collect();
        minimize_partial_dfa(&self.alphabet, &trans, 0, &finals)
    }

    fn canonical_form(&self) -> Automaton {
        if self.deterministic && self.initial.len() == 1 {
            self.clone()
        } else {
            self.canonical_dfa()
        }
    }

    fn transition_table(&self, letters: &[Letter]) -> Vec<Vec<Option<usize>>> {
        let mut table = vec![vec![None; letters.len()]; self.states];
        for &(s, l, t) in &self.arrows {
            if let Some(l) = l {
                table[s][l.order_index()] = Some(t);
            }
        }
        table
    }

    /// Plain concatenation: disjoint union with ε-arrows from the final
    /// states of the first factor to the initial states of the second.
    pub fn concat(&self, other: &Automaton) -> Automaton {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let shift = self.states;
        let mut arrows = self.arrows.clone();
        for &(s, l, t) in &other.arrows {
            arrows.push((s + shift, l, t + shift));
        }
        for &f in &self.finals {
            for &i in &other.initial {
                arrows.push((f, None, i + shift));
            }
        }
        let finals = other.finals.iter().map(|&f| f + shift).collect();
        Automaton::new(
            self.alphabet.clone(),
            self.states + other.states,
            arrows,
            self.initial.clone(),
            finals,
        )
    }

    /// Saturation reduction: repeatedly add ε-arrows `p → q` whenever some
    /// `x`-arrow `p → r` and `x⁻¹`-arrow `r′ → q` are joined by an ε-path
    /// `r ⇝ r′`, then intersect with the reduced-word acceptor. The result
    /// accepts exactly the reduced forms of the original language.
    pub fn benois_reduce(&self) -> Automaton {
        let mut eps: BTreeSet<(usize, usize)> = self
            .arrows
            .iter()
            .filter(|(_, l, _)| l.is_none())
            .map(|&(s, _, t)| (s, t))
            .collect();
        let mut by_label: BTreeMap<Letter, Vec<(usize, usize)>> = BTreeMap::new();
        for &(s, l, t) in &self.arrows {
            if let Some(l) = l {
                by_label.entry(l).or_default().push((s, t));
            }
        }
        loop {
            let reach = eps_reachability(self.states, &eps);
            let mut added = false;
            for (&l, arrows_l) in &by_label {
                let Some(arrows_inv) = by_label.get(&l.inverse()) else {
                    continue;
                };
                for &(p, r) in arrows_l {
                    for &(r2, q) in arrows_inv {
                        if reach[r][r2] && eps.insert((p, q)) {
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut arrows: Vec<(usize, Option<Letter>, usize)> = self
            .arrows
            .iter()
            .filter(|(_, l, _)| l.is_some())
            .copied()
            .collect();
        arrows.extend(eps.into_iter().map(|(s, t)| (s, None, t)));
        let saturated = Automaton::new(
            self.alphabet.clone(),
            self.states,
            arrows,
            self.initial.clone(),
            self.finals.clone(),
        );
        saturated.intersect(&Automaton::reduced_acceptor(&self.alphabet))
    }

    /// Concatenation of two reduced-word languages whose set product is
    /// `k`-reduced: beyond the plain ε-join, for every cancellation word `u`
    /// with `l(u) ≤ k` add ε-arrows from the states that read `u⁻¹` into a
    /// final state of the left factor to the states reached by `u` from the
    /// start of the right factor. Intersecting with the reduced-word acceptor
    /// then yields exactly the reduced forms of the products.
    ///
    /// Cancellation words are walked through pairs `(R, q)` of a state set of
    /// the left factor and a state of the right factor; a revisited pair adds
    /// nothing, so the walk terminates without enumerating all of the
    /// (possibly astronomically many) words up to length `k`.
    pub fn k_reduced_concat(
        a1: &Automaton,
        a2: &Automaton,
        k: u64,
    ) -> Result<Automaton, AutomatonError> {
        assert_eq!(a1.alphabet, a2.alphabet, "alphabet mismatch");
        let a1 = a1.canonical_form();
        let a2 = a2.canonical_form();

        // Validation sampling: short members of both languages must respect k.
        let sample1 = a1.enumerate(5);
        let sample2 = a2.enumerate(5);
        for u in sample1.iter().take(150) {
            for v in sample2.iter().take(150) {
                let found = cn(&[u.clone(), v.clone()]);
                if (found as u64) > k {
                    return Err(AutomatonError::KBoundViolated { found, bound: k });
                }
            }
        }

        let letters: Vec<Letter> = a1.alphabet.letters().collect();
        let t2 = a2.transition_table(&letters);
        let shift = a1.states;
        let s2_start = *a2.initial.first().unwrap();

        let mut arrows: Vec<(usize, Option<Letter>, usize)> = a1.arrows.clone();
        for &(s, l, t) in &a2.arrows {
            arrows.push((s + shift, l, t + shift));
        }
        for &f in &a1.finals {
            arrows.push((f, None, s2_start + shift));
        }

        // Reverse table of the left factor: pre[l][t] = sources reading l into t.
        let t1 = a1.transition_table(&letters);
        let mut pre: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); a1.states]; letters.len()];
        for (s, row) in t1.iter().enumerate() {
            for (li, target) in row.iter().enumerate() {
                if let Some(t) = target {
                    pre[li][*t].push(s);
                }
            }
        }

        // Walk cancellation words u: R = states of a1 reading u⁻¹ into a final,
        // q = state of a2 reached by u.
        type CutState = (BTreeSet<usize>, usize, Option<Letter>);
        let start: CutState = (a1.finals.clone(), s2_start, None);
        let mut seen: BTreeSet<CutState> = BTreeSet::from([start.clone()]);
        let mut queue: VecDeque<(CutState, u64)> = VecDeque::from([(start, 0)]);
        let mut shortcuts: BTreeSet<(usize, usize)> = BTreeSet::new();
        while let Some(((r_set, q, last), depth)) = queue.pop_front() {
            if depth >= k {
                continue;
            }
            for &z in &letters {
                if last == Some(z.inverse()) {
                    continue;
                }
                let Some(q_next) = t2[q][z.order_index()] else {
                    continue;
                };
                let mut r_next = BTreeSet::new();
                for &r in &r_set {
                    r_next.extend(pre[z.inverse().order_index()][r].iter().copied());
                }
                if r_next.is_empty() {
                    continue;
                }
                for &p in &r_next {
                    shortcuts.insert((p, q_next + shift));
                }
                let state = (r_next, q_next, Some(z));
                if seen.insert(state.clone()) {
                    queue.push_back((state, depth + 1));
                }
            }
        }
        arrows.extend(shortcuts.into_iter().map(|(p, q)| (p, None, q)));

        let joined = Automaton::new(
            a1.alphabet.clone(),
            a1.states + a2.states,
            arrows,
            a1.initial.clone(),
            a2.finals.iter().map(|&f| f + shift).collect(),
        );
        Ok(joined.intersect(&Automaton::reduced_acceptor(&a1.alphabet)))
    }

    /// Acceptor of the double-based cone: all reduced words `w₁ ∘ f ∘ w₂`
    /// with no cancellation at the seams. The middle is tracked by one state
    /// per last letter, each connected to every letter state except its
    /// inverse.
    pub fn cone(alphabet: &Alphabet, w1: &Word, w2: &Word) -> Automaton {
        let letters: Vec<Letter> = alphabet.letters().collect();
        let spine1_len = w1.len();
        let done1 = spine1_len; // state after reading all of w1
        let core_base = spine1_len + 1;
        let spine2_base = core_base + letters.len();
        let states = spine2_base + w2.len();
        let core = |l: Letter| core_base + l.order_index();

        let mut arrows = Vec::new();
        for (i, &l) in w1.letters().iter().enumerate() {
            arrows.push((i, Some(l), i + 1));
        }
        let seam1_ok = |z: Letter| w1.last().is_none_or(|l| z != l.inverse());
        for &z in &letters {
            if seam1_ok(z) {
                arrows.push((done1, Some(z), core(z)));
            }
        }
        for &z in &letters {
            for &z2 in &letters {
                if z2 != z.inverse() {
                    arrows.push((core(z), Some(z2), core(z2)));
                }
            }
        }
        let mut finals = BTreeSet::new();
        if let Some(first2) = w2.first() {
            if seam1_ok(first2) {
                arrows.push((done1, Some(first2), spine2_base));
            }
            for &z in &letters {
                if first2 != z.inverse() {
                    arrows.push((core(z), Some(first2), spine2_base));
                }
            }
            for (i, &l) in w2.letters().iter().enumerate().skip(1) {
                arrows.push((spine2_base + i - 1, Some(l), spine2_base + i));
            }
            finals.insert(spine2_base + w2.len() - 1);
        } else {
            finals.insert(done1);
            for &z in &letters {
                finals.insert(core(z));
            }
        }
        Automaton::new(
            alphabet.clone(),
            states,
            arrows,
            BTreeSet::from([0]),
            finals,
        )
        .canonical_dfa()
    }

    /// All accepted reduced words of length at most `max_len`, in shortlex
    /// order. Non-reduced spellings in the raw language are ignored.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let dfa = self.intersect(&Automaton::reduced_acceptor(&self.alphabet));
        let letters: Vec<Letter> = dfa.alphabet.letters().collect();
        let table = dfa.transition_table(&letters);
        let start = *dfa.initial.first().unwrap();
        let mut out = Vec::new();
        let mut frontier: Vec<(usize, Word)> = vec![(start, Word::identity())];
        for depth in 0..=max_len {
            let mut next = Vec::new();
            for (state, word) in &frontier {
                if dfa.finals.contains(state) {
                    out.push(word.clone());
                }
                if depth == max_len {
                    continue;
                }
                for &l in &letters {
                    if let Some(t) = table[*state][l.order_index()] {
                        let mut letters_vec = word.letters().to_vec();
                        letters_vec.push(l);
                        next.push((t, Word::from_reduced(letters_vec)));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Shortest accepted reduced word, shortlex-least among ties.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let dfa = self.intersect(&Automaton::reduced_acceptor(&self.alphabet));
        let letters: Vec<Letter> = dfa.alphabet.letters().collect();
        let table = dfa.transition_table(&letters);
        let start = *dfa.initial.first().unwrap();
        let mut seen = vec![false; dfa.states];
        seen[start] = true;
        let mut queue = VecDeque::from([(start, Word::identity())]);
        while let Some((state, word)) = queue.pop_front() {
            if dfa.finals.contains(&state) {
                return Some(word);
            }
            for &l in &letters {
                if let Some(t) = table[state][l.order_index()] {
                    if !seen[t] {
                        seen[t] = true;
                        let mut letters_vec = word.letters().to_vec();
                        letters_vec.push(l);
                        queue.push_back((t, Word::from_reduced(letters_vec)));
                    }
                }
            }
        }
        None
    }

    pub fn is_empty_language(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// Replace every letter arrow by a chain spelling `image(letter)` over a
    /// new alphabet; ε-arrows are kept. Accepts the (unreduced) images of the
    /// original language.
    pub fn substitute(&self, alphabet: &Alphabet, image: impl Fn(Letter) -> Word) -> Automaton {
        let mut arrows: Vec<(usize, Option<Letter>, usize)> = Vec::new();
        let mut states = self.states;
        for &(s, l, t) in &self.arrows {
            match l {
                None => arrows.push((s, None, t)),
                Some(l) => {
                    let w = image(l);
                    if w.is_empty() {
                        arrows.push((s, None, t));
                        continue;
                    }
                    let mut cur = s;
                    for (i, &x) in w.letters().iter().enumerate() {
                        let target = if i + 1 == w.len() {
                            t
                        } else {
                            states += 1;
                            states - 1
                        };
                        arrows.push((cur, Some(x), target));
                        cur = target;
                    }
                }
            }
        }
        Automaton::new(
            alphabet.clone(),
            states,
            arrows,
            self.initial.clone(),
            self.finals.clone(),
        )
    }

    /// Textual form: a header line, then one arrow per line with ε spelled
    /// `eps`.
    pub fn to_text(&self) -> String {
        let initial = self
            .initial
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let finals = self
            .finals
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut s = format!(
            "states {} initial {} final {}\n",
            self.states, initial, finals
        );
        for &(src, l, dst) in &self.arrows {
            let label = match l {
                None => "eps".to_string(),
                Some(l) => self.alphabet.name(l),
            };
            s.push_str(&format!("{src} {label} {dst}\n"));
        }
        s
    }

    /// DOT rendering: a tailed arrow into each initial state, final states
    /// double-circled.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n  rankdir=LR;\n");
        for (i, &init) in self.initial.iter().enumerate() {
            s.push_str(&format!("  __start{i} [shape=none,label=\"\"];\n"));
            s.push_str(&format!("  __start{i} -> {init};\n"));
        }
        for q in 0..self.states {
            let shape = if self.finals.contains(&q) {
                "doublecircle"
            } else {
                "circle"
            };
            s.push_str(&format!("  {q} [shape={shape}];\n"));
        }
        for &(src, l, dst) in &self.arrows {
            let label = match l {
                None => "ε".to_string(),
                Some(l) => self.alphabet.name(l),
            };
            s.push_str(&format!("  {src} -> {dst} [label=\"{label}\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn eps_reachability(states: usize, eps: &BTreeSet<(usize, usize)>) -> Vec<Vec<bool>> {
    let mut adj = vec![Vec::new(); states];
    for &(s, t) in eps {
        adj[s].push(t);
    }
    let mut reach = vec![vec![false; states]; states];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut queue = VecDeque::from([s]);
        row[s] = true;
        while let Some(v) = queue.pop_front() {
            for &t in &adj[v] {
                if !row[t] {
                    row[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    reach
}

/// Minimize a reachable partial DFA given by a transition table, and number
/// the result in BFS order. States that cannot reach a final state are
/// dropped first (the empty language keeps a lone initial state).
fn minimize_partial_dfa(
    alphabet: &Alphabet,
    trans: &[Vec<Option<usize>>],
    initial: usize,
    finals: &BTreeSet<usize>,
) -> Automaton {
    let n = trans.len();
    let letters: Vec<Letter> = alphabet.letters().collect();

    // Co-accessibility.
    let mut co = vec![false; n];
    {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, row) in trans.iter().enumerate() {
            for target in row.iter().flatten() {
                rev[*target].push(s);
            }
        }
        let mut queue: VecDeque<usize> = finals.iter().copied().collect();
        for &f in finals {
            co[f] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &s in &rev[v] {
                if !co[s] {
                    co[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
    if !co[initial] {
        // Empty language.
        return Automaton::new(
            alphabet.clone(),
            1,
            Vec::new(),
            BTreeSet::from([0]),
            BTreeSet::new(),
        );
    }

    let kept: Vec<usize> = (0..n).filter(|&s| co[s]).collect();
    let mut index_of = vec![usize::MAX; n];
    for (i, &s) in kept.iter().enumerate() {
        index_of[s] = i;
    }
    let m = kept.len();
    let table: Vec<Vec<Option<usize>>> = kept
        .iter()
        .map(|&s| {
            trans[s]
                .iter()
                .map(|t| t.filter(|&t| co[t]).map(|t| index_of[t]))
                .collect()
        })
        .collect();
    let is_final: Vec<bool> = kept.iter().map(|s| finals.contains(s)).collect();

    // Partition refinement to the coarsest congruence.
    let mut class: Vec<usize> = is_final.iter().map(|&f| usize::from(f)).collect();
    loop {
        let mut sig_ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(m);
        for s in 0..m {
            let sig: Vec<Option<usize>> = table[s].iter().map(|t| t.map(|t| class[t])).collect();
            let id = sig_ids.len();
            let c = *sig_ids.entry((class[s], sig)).or_insert(id);
            next.push(c);
        }
        if next == class {
            break;
        }
        class = next;
    }

    // Quotient, then BFS renumbering from the initial class.
    let class_count = class.iter().max().unwrap() + 1;
    let mut q_table: Vec<Vec<Option<usize>>> = vec![vec![None; letters.len()]; class_count];
    let mut q_final = vec![false; class_count];
    for s in 0..m {
        for (li, t) in table[s].iter().enumerate() {
            if let Some(t) = t {
                q_table[class[s]][li] = Some(class[*t]);
            }
        }
        if is_final[s] {
            q_final[class[s]] = true;
        }
    }
    let q_init = class[index_of[initial]];
    let mut remap = vec![usize::MAX; class_count];
    remap[q_init] = 0;
    let mut count = 1;
    let mut queue = VecDeque::from([q_init]);
    while let Some(c) = queue.pop_front() {
        for t in q_table[c].iter().flatten() {
            if remap[*t] == usize::MAX {
                remap[*t] = count;
                count += 1;
                queue.push_back(*t);
            }
        }
    }
    let mut arrows = Vec::new();
    let mut new_finals = BTreeSet::new();
    for c in 0..class_count {
        if remap[c] == usize::MAX {
            continue;
        }
        for (li, t) in q_table[c].iter().enumerate() {
            if let Some(t) = t {
                arrows.push((remap[c], Some(letters[li]), remap[*t]));
            }
        }
        if q_final[c] {
            new_finals.insert(remap[c]);
        }
    }
    Automaton::new(
        alphabet.clone(),
        count,
        arrows,
        BTreeSet::from([0]),
        new_finals,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ab() -> Alphabet {
        Alphabet::with_rank(2)
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn reduced_acceptor_basics() {
        let acc = Automaton::reduced_acceptor(&ab());
        assert!(acc.accepts(&Word::identity()));
        assert!(acc.accepts(&w("aBa")));
        assert_eq!(acc.state_count(), 5);
        assert_eq!(acc.enumerate(1).len(), 5);
        assert_eq!(acc.enumerate(8).len(), 13121);
    }

    #[test]
    fn enumerate_shortlex_order() {
        let acc = Automaton::reduced_acceptor(&ab());
        let names: Vec<String> = acc.enumerate(1).iter().map(|u| u.to_string()).collect();
        assert_eq!(names, ["1", "a", "A", "b", "B"]);
    }

    #[test]
    fn from_graph_cycle() {
        let g = SubgroupGraph::fold(&ab(), &words(&["aaa"]));
        let raw = Automaton::from_graph(&g);
        assert_eq!(raw.state_count(), 3);
        assert!(raw.accepts(&w("aaa")));
        let acc = Automaton::subgroup_acceptor(&g);
        let listed: Vec<String> = acc.enumerate(6).iter().map(|u| u.to_string()).collect();
        assert_eq!(listed, ["1", "aaa", "AAA", "aaaaaa", "AAAAAA"]);
    }

    #[test]
    fn subgroup_acceptor_single_state_graph() {
        let g = SubgroupGraph::fold(&ab(), &words(&["a"]));
        let acc = Automaton::subgroup_acceptor(&g);
        assert!(acc.accepts(&w("a^4")));
        assert!(acc.accepts(&w("A")));
        assert!(!acc.accepts(&w("b")));
    }

    #[test]
    fn canonical_dfa_idempotent_and_language_preserving() {
        let g = SubgroupGraph::fold(&ab(), &words(&["ab", "ba"]));
        let acc = Automaton::subgroup_acceptor(&g);
        let canon = acc.canonical_dfa();
        assert_eq!(canon, canon.canonical_dfa());
        assert_eq!(acc.enumerate(8), canon.enumerate(8));
    }

    #[test]
    fn canonical_dfa_eps_chain() {
        // Two-state ε-chain accepting {a}.
        let a = Automaton::new(
            ab(),
            3,
            vec![(0, None, 1), (1, Some(Letter::new(0, false)), 2)],
            BTreeSet::from([0]),
            BTreeSet::from([2]),
        );
        let canon = a.canonical_dfa();
        assert_eq!(canon.state_count(), 2);
        assert_eq!(canon.enumerate(3), vec![w("a")]);
    }

    #[test]
    fn canonical_dfa_matches_brute_language_on_random_nfas() {
        let mut rng = StdRng::seed_from_u64(11);
        let letters: Vec<Letter> = ab().letters().collect();
        for _ in 0..100 {
            let states = 5;
            let mut arrows = Vec::new();
            for _ in 0..rng.gen_range(4..10) {
                let s = rng.gen_range(0..states);
                let t = rng.gen_range(0..states);
                let label = if rng.gen_bool(0.15) {
                    None
                } else {
                    Some(letters[rng.gen_range(0..letters.len())])
                };
                arrows.push((s, label, t));
            }
            let finals: BTreeSet<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
            let nfa = Automaton::new(ab(), states, arrows, BTreeSet::from([0]), finals);
            let dfa = nfa.canonical_dfa();
            // Brute comparison over the tree of words of length ≤ 5.
            let mut stack = vec![Word::identity()];
            while let Some(word) = stack.pop() {
                assert_eq!(nfa.accepts(&word), dfa.accepts(&word), "word {word}");
                if word.len() < 5 {
                    for &l in &letters {
                        if word.last() != Some(l.inverse()) {
                            let mut ls = word.letters().to_vec();
                            ls.push(l);
                            stack.push(Word::from_reduced(ls));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn benois_collapses_cancellation() {
        let a = Automaton::word_acceptor(&ab(), &w("b"));
        // Acceptor of the unreduced spelling a a⁻¹ b via a 4-state chain.
        let chain = Automaton::new(
            ab(),
            4,
            vec![
                (0, Some(Letter::new(0, false)), 1),
                (1, Some(Letter::new(0, true)), 2),
                (2, Some(Letter::new(1, false)), 3),
            ],
            BTreeSet::from([0]),
            BTreeSet::from([3]),
        );
        assert_eq!(chain.benois_reduce(), a.canonical_dfa());
    }

    #[test]
    fn benois_power_cancellation() {
        // {aⁿ : n ≥ 0} · {a⁻ᵐ : m ≥ 0}: reduced forms are all powers of a.
        let powers = Automaton::new(
            ab(),
            1,
            vec![(0, Some(Letter::new(0, false)), 0)],
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        );
        let inv_powers = Automaton::new(
            ab(),
            1,
            vec![(0, Some(Letter::new(0, true)), 0)],
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        );
        let reduced = powers.concat(&inv_powers).benois_reduce();
        for word in ["1", "a", "aaa", "A", "AA"] {
            assert!(reduced.accepts(&w(word)), "missing {word}");
        }
        assert!(!reduced.accepts(&w("b")));
        assert!(!reduced.accepts(&w("ab")));
    }

    #[test]
    fn benois_coset_language() {
        let g = SubgroupGraph::fold(&ab(), &words(&["a"]));
        let c = Automaton::subgroup_acceptor(&g);
        let f = Automaton::word_acceptor(&ab(), &w("b"));
        let coset = c.concat(&f).concat(&c).benois_reduce();
        let listed = coset.enumerate(5);
        for word in &listed {
            assert_eq!(
                word.letters().iter().filter(|l| l.gen() == 1).count(),
                1,
                "exactly one b in {word}"
            );
            let mid = word.letters().iter().position(|l| l.gen() == 1).unwrap();
            assert_eq!(word.letters()[mid], Letter::new(1, false));
        }
        // aᵐ b aⁿ with |m| + 1 + |n| ≤ 5.
        assert_eq!(listed.len(), 41);
    }

    #[test]
    fn k_concat_single_cancellation() {
        let a1 = Automaton::finite_language(&ab(), &words(&["a"]));
        let a2 = Automaton::finite_language(&ab(), &words(&["Ab"]));
        let joined = Automaton::k_reduced_concat(&a1, &a2, 1).unwrap();
        assert_eq!(joined.enumerate(4), vec![w("b")]);
    }

    #[test]
    fn k_concat_two_member_languages() {
        let a1 = Automaton::finite_language(&ab(), &words(&["ab", "a"]));
        let a2 = Automaton::finite_language(&ab(), &words(&["Ba"]));
        let joined = Automaton::k_reduced_concat(&a1, &a2, 1).unwrap();
        assert_eq!(joined.enumerate(4), vec![w("aa"), w("aBa")]);
    }

    #[test]
    fn k_concat_violation_detected() {
        let a1 = Automaton::finite_language(&ab(), &words(&["abb"]));
        let a2 = Automaton::finite_language(&ab(), &words(&["BBA"]));
        let err = Automaton::k_reduced_concat(&a1, &a2, 1).unwrap_err();
        assert!(matches!(err, AutomatonError::KBoundViolated { .. }));
    }

    #[test]
    fn k_concat_agrees_with_benois_on_random_finite_pairs() {
        let mut rng = StdRng::seed_from_u64(23);
        let letters: Vec<Letter> = ab().letters().collect();
        for _ in 0..30 {
            let mut sample = |n: usize| -> Vec<Word> {
                (0..n)
                    .map(|_| {
                        let len = rng.gen_range(0..5);
                        Word::reduce((0..len).map(|_| letters[rng.gen_range(0..letters.len())]))
                    })
                    .collect()
            };
            let lang1 = sample(3);
            let lang2 = sample(3);
            let a1 = Automaton::finite_language(&ab(), &lang1);
            let a2 = Automaton::finite_language(&ab(), &lang2);
            let k = 5; // max word length bounds any cancellation
            let fast = Automaton::k_reduced_concat(&a1, &a2, k).unwrap();
            let slow = a1.concat(&a2).benois_reduce();
            assert_eq!(fast, slow, "languages {lang1:?} × {lang2:?}");
        }
    }

    #[test]
    fn cone_small_languages() {
        let cone_ab = Automaton::cone(&ab(), &w("a"), &w("b"));
        let by_len = |n: usize| -> Vec<String> {
            cone_ab
                .enumerate(n)
                .into_iter()
                .filter(|u| u.len() == n)
                .map(|u| u.to_string())
                .collect()
        };
        assert_eq!(by_len(2), ["ab"]);
        assert_eq!(by_len(3), ["aab", "abb"]);
    }

    #[test]
    fn cone_with_inverse_bases() {
        let cone = Automaton::cone(&ab(), &w("a"), &w("A"));
        let listed: Vec<String> = cone.enumerate(3).iter().map(|u| u.to_string()).collect();
        assert_eq!(listed, ["abA", "aBA"]);
    }

    #[test]
    fn cone_empty_bases_is_reduced_acceptor() {
        let cone = Automaton::cone(&ab(), &Word::identity(), &Word::identity());
        assert_eq!(cone, Automaton::reduced_acceptor(&ab()).canonical_dfa());
    }

    #[test]
    fn cone_brute_force_cross_check() {
        let cone = Automaton::cone(&ab(), &w("a"), &w("b"));
        let accepted: BTreeSet<String> = cone.enumerate(6).iter().map(|u| u.to_string()).collect();
        let all = Automaton::reduced_acceptor(&ab()).enumerate(6);
        let expected: BTreeSet<String> = all
            .iter()
            .filter(|u| {
                u.len() >= 2
                    && u.first() == Some(Letter::new(0, false))
                    && u.last() == Some(Letter::new(1, false))
            })
            .map(|u| u.to_string())
            .collect();
        assert_eq!(accepted, expected);
    }

    #[test]
    fn shortest_accepted_prefers_shortlex() {
        let lang = Automaton::finite_language(&ab(), &words(&["ba", "ab", "b"]));
        assert_eq!(lang.shortest_accepted(), Some(w("b")));
        let empty = Automaton::finite_language(&ab(), &[]);
        assert!(empty.is_empty_language());
    }

    #[test]
    fn text_format() {
        let a = Automaton::word_acceptor(&ab(), &w("aB"));
        let text = a.to_text();
        assert!(text.starts_with("states 3 initial 0 final 2\n"));
        assert!(text.contains("0 a 1\n"));
        assert!(text.contains("1 B 2\n"));
    }

    #[test]
    fn dot_marks_initial_and_final() {
        let a = Automaton::word_acceptor(&ab(), &w("a"));
        let dot = a.to_dot("m");
        assert!(dot.contains("__start0 -> 0"));
        assert!(dot.contains("1 [shape=doublecircle]"));
    }

    #[test]
    fn substitute_expands_letters() {
        let y = Alphabet::prefixed('h', 1);
        let chain = Automaton::word_acceptor(&y, &y.parse_word("h1h1").unwrap());
        let x = ab();
        let expanded = chain.substitute(&x, |l| {
            let base = w("aaa");
            if l.is_inverse() {
                base.inverse()
            } else {
                base
            }
        });
        let reduced = expanded.benois_reduce();
        assert!(reduced.accepts(&w("a^6")));
        assert!(!reduced.accepts(&w("a^3")));
    }
}
