//! Nielsen bases read off a geodesic spanning tree, the piece alphabet of
//! surviving subwords, and admissible factorizations of subgroup elements.
//!
//! Every generator extracted from a non-tree edge splits as
//! `h = s₁ ∘ μ(h) ∘ s₂⁻¹` around a central letter that survives in all legal
//! two- and three-fold products. Extended indices `1..=2r` name the basis and
//! its inverses, with `h_{r+i} = h_i⁻¹`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{SpanningTree, SubgroupGraph};
use crate::word::{cn, reduce_with_survivors, Alphabet, Letter, Word};

/// One basis generator with its decomposition around the central letter.
#[derive(Clone, Debug)]
pub struct NielsenGenerator {
    pub word: Word,
    pub s1: Word,
    pub mu: Letter,
    pub s2: Word,
    /// The non-tree edge `(source, generator, target)` this element came from.
    pub edge: (usize, usize, usize),
}

/// A property violation discovered while validating a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NielsenFinding {
    /// `|l(s₁) − l(s₂)| > 1` for the given base generator (1-based).
    LengthImbalance { index: usize },
    /// A central letter cancels in a two-fold product of extended indices.
    PairCentralCancelled { i: usize, j: usize },
    /// The middle central letter cancels in a three-fold product.
    TripleCentralCancelled { i: usize, j: usize, k: usize },
    /// A coset-minimal word cancels more than `M` letters against a generator.
    CosetBoundExceeded { f: Word, index: usize, cancelled: usize, bound: usize },
}

impl std::fmt::Display for NielsenFinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NielsenFinding::LengthImbalance { index } => {
                write!(f, "generator {index}: |l(s1) - l(s2)| > 1")
            }
            NielsenFinding::PairCentralCancelled { i, j } => {
                write!(f, "central letter cancels in h{i}·h{j}")
            }
            NielsenFinding::TripleCentralCancelled { i, j, k } => {
                write!(f, "central letter of h{j} cancels in h{i}·h{j}·h{k}")
            }
            NielsenFinding::CosetBoundExceeded { f: w, index, cancelled, bound } => {
                write!(
                    f,
                    "cn({w}, h{index}) = {cancelled} exceeds bound {bound}"
                )
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum NielsenError {
    #[error("spanning tree is not geodesic")]
    NotGeodesic,
    #[error("generating set violates a Nielsen property: {0}")]
    NielsenViolation(NielsenFinding),
}

/// Validation report; empty findings means the set passed every check.
#[derive(Clone, Debug, Default)]
pub struct NielsenReport {
    pub findings: Vec<NielsenFinding>,
}

impl NielsenReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// A Nielsen basis with its derived constants.
///
/// `m_bound` is `⌊½·max generator length⌋ + 1`, `ball` the number of reduced
/// words of length ≤ 2M, and `k_bound = 2·ball·m_bound`.
#[derive(Clone, Debug)]
pub struct NielsenBasis {
    alphabet: Alphabet,
    gens: Vec<NielsenGenerator>,
    m_bound: usize,
    ball: u64,
    k_bound: u64,
}

impl NielsenBasis {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[NielsenGenerator] {
        &self.gens
    }

    pub fn m_bound(&self) -> usize {
        self.m_bound
    }

    pub fn ball(&self) -> u64 {
        self.ball
    }

    pub fn k_bound(&self) -> u64 {
        self.k_bound
    }

    /// Extended index of the inverse of `idx` (both 1-based in `1..=2r`).
    pub fn inverse_index(&self, idx: usize) -> usize {
        let r = self.rank();
        if idx <= r {
            idx + r
        } else {
            idx - r
        }
    }

    /// Word of the extended generator `h_idx`, `idx ∈ 1..=2r`.
    pub fn ext_word(&self, idx: usize) -> Word {
        let r = self.rank();
        if idx <= r {
            self.gens[idx - 1].word.clone()
        } else {
            self.gens[idx - r - 1].word.inverse()
        }
    }

    /// Position of the central letter inside `ext_word(idx)`.
    pub fn ext_mu_position(&self, idx: usize) -> usize {
        let r = self.rank();
        if idx <= r {
            self.gens[idx - 1].s1.len()
        } else {
            self.gens[idx - r - 1].s2.len()
        }
    }

    pub fn ext_mu(&self, idx: usize) -> Letter {
        let r = self.rank();
        if idx <= r {
            self.gens[idx - 1].mu
        } else {
            self.gens[idx - r - 1].mu.inverse()
        }
    }
}

/// Read the Nielsen basis off the non-tree edges: one generator per edge
/// `(u, x, v)`, namely `h = path(1→u) · x · path(1→v)⁻¹`. Validates the
/// Nielsen properties and computes the derived constants. A violation means
/// the tie-breaking is broken, since geodesic trees always satisfy them.
pub fn nielsen_basis(
    graph: &SubgroupGraph,
    tree: &SpanningTree,
) -> Result<NielsenBasis, NielsenError> {
    if !tree.is_geodesic(graph) {
        return Err(NielsenError::NotGeodesic);
    }
    let mut gens = Vec::new();
    for (u, g, v) in graph.edges() {
        if tree.uses_edge(u, g, v) {
            continue;
        }
        let s1 = tree.word_to(u);
        let s2 = tree.word_to(v);
        let mu = Letter::new(g, false);
        let mut letters = s1.letters().to_vec();
        letters.push(mu);
        letters.extend(s2.inverse().letters());
        let word = Word::from_reduced(letters);
        gens.push(NielsenGenerator {
            word,
            s1,
            mu,
            s2,
            edge: (u, g, v),
        });
    }
    gens.sort_by(|a, b| {
        a.s1.shortlex_cmp(&b.s1)
            .then(a.mu.cmp(&b.mu))
            .then(a.s2.shortlex_cmp(&b.s2))
    });
    debug_assert_eq!(gens.len(), graph.rank());

    let max_len = gens.iter().map(|g| g.word.len()).max().unwrap_or(0);
    let m_bound = max_len / 2 + 1;
    let ball = graph.alphabet().ball_size(2 * m_bound);
    let k_bound = 2 * ball * m_bound as u64;
    let basis = NielsenBasis {
        alphabet: graph.alphabet().clone(),
        gens,
        m_bound,
        ball,
        k_bound,
    };

    let table: Vec<(Word, usize)> = (1..=2 * basis.rank())
        .map(|i| (basis.ext_word(i), basis.ext_mu_position(i)))
        .collect();
    let mut findings = Vec::new();
    property_findings(&table, basis.rank(), &mut findings);
    if let Some(first) = findings.into_iter().next() {
        return Err(NielsenError::NielsenViolation(first));
    }
    Ok(basis)
}

/// Check properties (i)–(iii) over an extended table of `(word, μ-position)`
/// entries; the first `r` entries are the base generators.
fn property_findings(table: &[(Word, usize)], r: usize, findings: &mut Vec<NielsenFinding>) {
    let ext = table.len();
    debug_assert_eq!(ext, 2 * r);
    let inv = |i: usize| if i < r { i + r } else { i - r };
    for (i, (word, pos)) in table.iter().take(r).enumerate() {
        if word.is_empty() {
            continue;
        }
        let s1 = *pos;
        let s2 = word.len() - 1 - pos;
        if s1.abs_diff(s2) > 1 {
            findings.push(NielsenFinding::LengthImbalance { index: i + 1 });
        }
    }
    for i in 0..ext {
        for j in 0..ext {
            if j == inv(i) {
                continue;
            }
            let (_, masks) = reduce_with_survivors(&[&table[i].0, &table[j].0]);
            if !masks[0][table[i].1] || !masks[1][table[j].1] {
                findings.push(NielsenFinding::PairCentralCancelled { i: i + 1, j: j + 1 });
            }
        }
    }
    for i in 0..ext {
        for j in 0..ext {
            if j == inv(i) {
                continue;
            }
            for k in 0..ext {
                if j == inv(k) {
                    continue;
                }
                let (_, masks) =
                    reduce_with_survivors(&[&table[i].0, &table[j].0, &table[k].0]);
                if !masks[1][table[j].1] {
                    findings.push(NielsenFinding::TripleCentralCancelled {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
            }
        }
    }
}

/// A folded subgroup graph together with its geodesic tree and Nielsen basis;
/// the working context for everything above plain membership.
#[derive(Clone, Debug)]
pub struct SubgroupAnalysis {
    graph: SubgroupGraph,
    tree: SpanningTree,
    basis: NielsenBasis,
    edge_index: BTreeMap<(usize, usize, usize), usize>,
}

impl SubgroupAnalysis {
    pub fn new(alphabet: &Alphabet, generators: &[Word]) -> Result<Self, NielsenError> {
        Self::from_graph(SubgroupGraph::fold(alphabet, generators))
    }

    pub fn from_graph(graph: SubgroupGraph) -> Result<Self, NielsenError> {
        let tree = graph.geodesic_spanning_tree();
        let basis = nielsen_basis(&graph, &tree)?;
        let edge_index = basis
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.edge, i))
            .collect();
        Ok(SubgroupAnalysis {
            graph,
            tree,
            basis,
            edge_index,
        })
    }

    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn basis(&self) -> &NielsenBasis {
        &self.basis
    }

    /// Alphabet of basis indices, used for words over the Nielsen generators.
    /// Only meaningful for nontrivial subgroups.
    pub fn y_alphabet(&self) -> Alphabet {
        assert!(self.basis.rank() >= 1, "trivial subgroup has no basis alphabet");
        Alphabet::prefixed('h', self.basis.rank())
    }

    /// The unique expression of `c` over the Nielsen basis, recovered by
    /// tracing `c` through the graph and splitting at non-tree edges.
    /// Returns `None` when `c` is not in the subgroup.
    pub fn y_word(&self, c: &Word) -> Option<Word> {
        let mut current = self.graph.basepoint();
        let mut letters = Vec::new();
        for &l in c.letters() {
            let next = self.graph.step(current, l)?;
            let edge = if l.is_inverse() {
                (next, l.gen(), current)
            } else {
                (current, l.gen(), next)
            };
            if !self.tree.uses_edge(edge.0, edge.1, edge.2) {
                let idx = self.edge_index[&edge];
                letters.push(Letter::new(idx, l.is_inverse()));
            }
            current = next;
        }
        if current != self.graph.basepoint() {
            return None;
        }
        let y = Word::from_reduced(letters);
        debug_assert_eq!(&self.expand_y(&y), c);
        Some(y)
    }

    /// Substitute basis words for basis letters and reduce.
    pub fn expand_y(&self, y: &Word) -> Word {
        let mut out = Word::identity();
        for &l in y.letters() {
            let h = &self.basis.generators()[l.gen()].word;
            let factor = if l.is_inverse() { h.inverse() } else { h.clone() };
            out = out.multiply(&factor);
        }
        out
    }

    /// Extended 1-based index for a basis letter.
    pub fn ext_index_of_letter(&self, l: Letter) -> usize {
        if l.is_inverse() {
            l.gen() + 1 + self.basis.rank()
        } else {
            l.gen() + 1
        }
    }
}

/// One symbol of the piece alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PieceRef {
    /// A whole generator `h_i`.
    Generator(usize),
    /// Initial survivor `a_{ij}` of `h_i` in `h_i h_j`.
    Initial(usize, usize),
    /// Terminal survivor `b_{ij}` of `h_j` in `h_i h_j`.
    Terminal(usize, usize),
    /// Middle survivor `m_{ijk}` of `h_j` in `h_i h_j h_k`.
    Middle(usize, usize, usize),
}

impl std::fmt::Display for PieceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PieceRef::Generator(i) => write!(f, "h{i}"),
            PieceRef::Initial(i, j) => write!(f, "a{i},{j}"),
            PieceRef::Terminal(i, j) => write!(f, "b{i},{j}"),
            PieceRef::Middle(i, j, k) => write!(f, "m{i},{j},{k}"),
        }
    }
}

/// A middle piece subdivided around the central letter: `word = α ∘ μ ∘ β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddlePiece {
    pub word: Word,
    pub alpha: Word,
    pub mu: Letter,
    pub beta: Word,
}

/// The piece alphabet over a Nielsen basis: for every admissible pair the
/// initial and terminal survivors, and for every admissible triple the middle
/// survivor with its `α|μ|β` split. Symbols are kept distinct even when their
/// underlying words coincide.
#[derive(Clone, Debug)]
pub struct PieceAlphabet {
    rank: usize,
    a: BTreeMap<(usize, usize), Word>,
    b: BTreeMap<(usize, usize), Word>,
    m: BTreeMap<(usize, usize, usize), MiddlePiece>,
}

/// Errors from admissible factorization.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PieceError {
    #[error("word is not in the subgroup")]
    NotInSubgroup,
    #[error("the identity word has no admissible factorization")]
    IdentityWord,
}

pub fn piece_alphabet(basis: &NielsenBasis) -> PieceAlphabet {
    let r = basis.rank();
    let ext = 2 * r;
    let word = |i: usize| basis.ext_word(i);
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    let mut m = BTreeMap::new();
    for i in 1..=ext {
        for j in 1..=ext {
            if j == basis.inverse_index(i) {
                continue;
            }
            let (hi, hj) = (word(i), word(j));
            let t = cn(&[hi.clone(), hj.clone()]);
            let a_ij = hi.subword(0..hi.len() - t);
            let b_ij = hj.subword(t..hj.len());
            debug_assert!(!a_ij.is_empty() && !b_ij.is_empty());
            debug_assert_eq!(a_ij.multiply(&b_ij), hi.multiply(&hj));
            a.insert((i, j), a_ij);
            b.insert((i, j), b_ij);
        }
    }
    for i in 1..=ext {
        for j in 1..=ext {
            if j == basis.inverse_index(i) {
                continue;
            }
            let left = cn(&[word(i), word(j)]);
            for k in 1..=ext {
                if j == basis.inverse_index(k) {
                    continue;
                }
                let hj = word(j);
                let right = cn(&[hj.clone(), word(k)]);
                // Central letters block cancellation across factors, so the
                // two junction cancellations act on disjoint ends of h_j.
                let survivor = hj.subword(left..hj.len() - right);
                let pos = basis.ext_mu_position(j);
                debug_assert!(left <= pos && pos < hj.len() - right);
                let piece = MiddlePiece {
                    alpha: hj.subword(left..pos),
                    mu: basis.ext_mu(j),
                    beta: hj.subword(pos + 1..hj.len() - right),
                    word: survivor,
                };
                debug_assert!(!piece.word.is_empty());
                m.insert((i, j, k), piece);
            }
        }
    }
    PieceAlphabet { rank: r, a, b, m }
}

impl PieceAlphabet {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn initial(&self, i: usize, j: usize) -> Option<&Word> {
        self.a.get(&(i, j))
    }

    pub fn terminal(&self, i: usize, j: usize) -> Option<&Word> {
        self.b.get(&(i, j))
    }

    pub fn middle(&self, i: usize, j: usize, k: usize) -> Option<&MiddlePiece> {
        self.m.get(&(i, j, k))
    }

    pub fn initials(&self) -> impl Iterator<Item = (&(usize, usize), &Word)> {
        self.a.iter()
    }

    pub fn terminals(&self) -> impl Iterator<Item = (&(usize, usize), &Word)> {
        self.b.iter()
    }

    pub fn middles(&self) -> impl Iterator<Item = (&(usize, usize, usize), &MiddlePiece)> {
        self.m.iter()
    }

    pub fn word_of(&self, piece: &PieceRef, basis: &NielsenBasis) -> Word {
        match *piece {
            PieceRef::Generator(i) => basis.ext_word(i),
            PieceRef::Initial(i, j) => self.a[&(i, j)].clone(),
            PieceRef::Terminal(i, j) => self.b[&(i, j)].clone(),
            PieceRef::Middle(i, j, k) => self.m[&(i, j, k)].word.clone(),
        }
    }
}

/// A subgroup element factored into pieces that concatenate without
/// cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleWord {
    pub pieces: Vec<PieceRef>,
    pub underlying: Word,
}

/// The unique admissible factorization of a nontrivial subgroup element,
/// following its expression over the Nielsen basis.
pub fn admissible_factorization(
    analysis: &SubgroupAnalysis,
    pieces: &PieceAlphabet,
    c: &Word,
) -> Result<AdmissibleWord, PieceError> {
    if c.is_identity() {
        return Err(PieceError::IdentityWord);
    }
    let y = analysis.y_word(c).ok_or(PieceError::NotInSubgroup)?;
    let idx: Vec<usize> = y
        .letters()
        .iter()
        .map(|&l| analysis.ext_index_of_letter(l))
        .collect();
    let refs: Vec<PieceRef> = match idx.len() {
        0 => unreachable!("identity handled above"),
        1 => vec![PieceRef::Generator(idx[0])],
        2 => vec![
            PieceRef::Initial(idx[0], idx[1]),
            PieceRef::Terminal(idx[0], idx[1]),
        ],
        n => {
            let mut refs = Vec::with_capacity(n);
            refs.push(PieceRef::Initial(idx[0], idx[1]));
            for window in idx.windows(3) {
                refs.push(PieceRef::Middle(window[0], window[1], window[2]));
            }
            refs.push(PieceRef::Terminal(idx[n - 2], idx[n - 1]));
            refs
        }
    };
    let mut letters = Vec::with_capacity(c.len());
    for piece in &refs {
        letters.extend_from_slice(pieces.word_of(piece, analysis.basis()).letters());
    }
    debug_assert!(
        letters.windows(2).all(|w| w[0] != w[1].inverse()),
        "pieces must concatenate without cancellation"
    );
    let underlying = Word::from_reduced(letters);
    debug_assert_eq!(&underlying, c);
    Ok(AdmissibleWord {
        pieces: refs,
        underlying,
    })
}

/// Full validation of the analysis' basis: properties (i)–(iii) plus the
/// single-generator cancellation bound `cn(f, h) ≤ M` for coset-minimal `f`
/// sampled from the geodesic transversal.
pub fn validate_nielsen(analysis: &SubgroupAnalysis) -> NielsenReport {
    let basis = analysis.basis();
    let r = basis.rank();
    let mut findings = Vec::new();
    if r == 0 {
        return NielsenReport { findings };
    }
    let table: Vec<(Word, usize)> = (1..=2 * r)
        .map(|i| (basis.ext_word(i), basis.ext_mu_position(i)))
        .collect();
    property_findings(&table, r, &mut findings);

    // Geodesic transversal words are minimal in their right coset Cs, so
    // their inverses are minimal in the left coset sC; cancellation against
    // any single generator is then bounded by M.
    let tree = analysis.tree();
    let bound = basis.m_bound();
    let reps = analysis
        .graph()
        .schreier_transversal(tree, (2 * bound).min(4));
    for rep in reps.iter().take(200) {
        let f = rep.word.inverse();
        for (i, (h, _)) in table.iter().enumerate() {
            let cancelled = cn(&[f.clone(), h.clone()]);
            if cancelled > bound {
                findings.push(NielsenFinding::CosetBoundExceeded {
                    f: f.clone(),
                    index: i + 1,
                    cancelled,
                    bound,
                });
            }
        }
    }
    NielsenReport { findings }
}

/// Property check for an ad-hoc candidate generating set, with central
/// letters placed at the midpoint of each word. Used to reject sets that are
/// not Nielsen; graph-derived bases are checked by [`nielsen_basis`] itself.
pub fn validate_candidate(words: &[Word]) -> NielsenReport {
    let r = words.len();
    let mut table = Vec::with_capacity(2 * r);
    for w in words {
        let pos = if w.is_empty() { 0 } else { (w.len() - 1) / 2 };
        table.push((w.clone(), pos));
    }
    for w in words {
        let inv = w.inverse();
        let pos = if w.is_empty() {
            0
        } else {
            w.len() - 1 - (w.len() - 1) / 2
        };
        table.push((inv, pos));
    }
    let mut findings = Vec::new();
    property_findings(&table, r, &mut findings);
    NielsenReport { findings }
}
