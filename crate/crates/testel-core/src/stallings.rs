//! Folded subgroup graphs (Stallings graphs) over a free-group basis:
//! membership, index, Schreier transversals and generators, coset rewriting,
//! and surjectivity checks for endomorphisms.
//!
//! Graphs are immutable once built and carry a canonical vertex numbering
//! (breadth-first from the basepoint in letter order, basepoint = 0), so
//! structural equality is meaningful.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::mem;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StallingsError {
    /// The subgroup has infinite index (some vertex is missing an edge).
    InfiniteIndex,
    /// The queried word does not spell a basepoint loop.
    NotInSubgroup,
    /// A per-letter action was not a bijection on the vertex set.
    NonBijectiveAction,
    /// Broken text serialization.
    Malformed(String),
}

impl fmt::Display for StallingsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StallingsError::InfiniteIndex => write!(f, "subgroup has infinite index"),
            StallingsError::NotInSubgroup => write!(f, "word is not in the subgroup"),
            StallingsError::NonBijectiveAction => write!(f, "letter action is not bijective"),
            StallingsError::Malformed(msg) => write!(f, "malformed graph text: {msg}"),
        }
    }
}

/// Folding arena: union-find over provisional vertices with per-class edge
/// maps keyed by letter order slot.
struct Folder {
    parent: Vec<u32>,
    size: Vec<u32>,
    adj: Vec<BTreeMap<u16, u32>>,
}

impl Folder {
    fn new() -> Folder {
        Folder {
            parent: Vec::new(),
            size: Vec::new(),
            adj: Vec::new(),
        }
    }

    fn new_vertex(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        self.adj.push(BTreeMap::new());
        id
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = v;
        while self.parent[cur as usize] != root {
            cur = mem::replace(&mut self.parent[cur as usize], root);
        }
        root
    }

    /// Merges the classes of `a` and `b`, cascading folds of clashing edges.
    fn identify(&mut self, a: u32, b: u32) {
        let mut stack = alloc::vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
                (a, b)
            } else {
                (b, a)
            };
            self.parent[small as usize] = big;
            self.size[big as usize] += self.size[small as usize];
            let small_adj = mem::take(&mut self.adj[small as usize]);
            for (slot, target) in small_adj {
                match self.adj[big as usize].get(&slot) {
                    Some(&existing) => stack.push((existing, target)),
                    None => {
                        self.adj[big as usize].insert(slot, target);
                    }
                }
            }
        }
    }

    fn insert_edge(&mut self, from: u32, letter: Letter, to: u32) {
        let u = self.find(from);
        let v = self.find(to);
        let fwd = letter.ord() as u16;
        let bwd = letter.inverse().ord() as u16;
        if let Some(&t) = self.adj[u as usize].get(&fwd) {
            self.identify(t, v);
            return;
        }
        self.adj[u as usize].insert(fwd, v);
        if let Some(&s) = self.adj[v as usize].get(&bwd) {
            self.identify(s, u);
        } else {
            self.adj[v as usize].insert(bwd, u);
        }
    }

    /// Removes non-basepoint vertices of degree <= 1 until none remain.
    fn trim(&mut self, basepoint: u32) {
        let base = self.find(basepoint);
        let roots: Vec<u32> = (0..self.parent.len() as u32)
            .filter(|&v| self.parent[v as usize] == v)
            .collect();
        let mut queue: Vec<u32> = roots
            .into_iter()
            .filter(|&v| v != base && self.adj[v as usize].len() <= 1)
            .collect();
        while let Some(v) = queue.pop() {
            if v == base || self.adj[v as usize].len() > 1 {
                continue;
            }
            let edges = mem::take(&mut self.adj[v as usize]);
            for (slot, target) in edges {
                let t = self.find(target);
                if t == v {
                    continue;
                }
                let back = slot ^ 1;
                let back_target = self.adj[t as usize].get(&back).copied();
                if back_target.map(|w| self.find(w)) == Some(v) {
                    self.adj[t as usize].remove(&back);
                }
                if t != base && self.adj[t as usize].len() <= 1 {
                    queue.push(t);
                }
            }
        }
    }
}

/// A folded, trimmed, basepointed subgroup graph with canonical numbering.
///
/// `edges[v][slot]` is the endpoint of the edge labeled with the slot's
/// letter leaving `v`, with `slot = Letter::ord()`; inverse letters are
/// stored explicitly so traversal never branches.
#[derive(Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    rank: usize,
    edges: Vec<Vec<Option<u32>>>,
}

impl SubgroupGraph {
    pub const BASEPOINT: usize = 0;

    /// Folded core graph of the subgroup generated by `generators`.
    pub fn build(rank: usize, generators: &[Word]) -> SubgroupGraph {
        assert!(rank >= 1, "rank must be at least 1");
        let mut folder = Folder::new();
        let base = folder.new_vertex();
        for gen in generators {
            assert_eq!(gen.rank(), rank, "rank mismatch");
            if gen.is_identity() {
                continue;
            }
            let mut prev = base;
            let last = gen.len() - 1;
            for (i, &letter) in gen.letters().iter().enumerate() {
                let next = if i == last {
                    folder.find(base)
                } else {
                    folder.new_vertex()
                };
                folder.insert_edge(prev, letter, next);
                prev = folder.find(next);
            }
        }
        folder.trim(base);
        SubgroupGraph::from_folder(rank, folder, base)
    }

    /// Covering graph of the orbit of vertex 0 under a right action given by
    /// `positive_step(vertex, generator_index)` (0-based generator index).
    /// Every generator must act bijectively on `0..degree`.
    pub fn from_action<F>(
        rank: usize,
        degree: usize,
        positive_step: F,
    ) -> Result<SubgroupGraph, StallingsError>
    where
        F: Fn(usize, usize) -> usize,
    {
        assert!(rank >= 1 && degree >= 1);
        let mut forward = alloc::vec![alloc::vec![0usize; degree]; rank];
        let mut backward = alloc::vec![alloc::vec![usize::MAX; degree]; rank];
        for i in 0..rank {
            for v in 0..degree {
                let t = positive_step(v, i);
                if t >= degree || backward[i][t] != usize::MAX {
                    return Err(StallingsError::NonBijectiveAction);
                }
                forward[i][v] = t;
                backward[i][t] = v;
            }
        }
        // BFS orbit of 0 in slot order, numbering vertices on discovery.
        let mut number: BTreeMap<usize, u32> = BTreeMap::new();
        number.insert(0, 0);
        let mut order = alloc::vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for slot in 0..2 * rank {
                let i = slot / 2;
                let t = if slot % 2 == 0 {
                    forward[i][v]
                } else {
                    backward[i][v]
                };
                if let alloc::collections::btree_map::Entry::Vacant(e) = number.entry(t) {
                    e.insert(order.len() as u32);
                    order.push(t);
                }
            }
        }
        let mut edges = alloc::vec![alloc::vec![None; 2 * rank]; order.len()];
        for (new_v, &old_v) in order.iter().enumerate() {
            for slot in 0..2 * rank {
                let i = slot / 2;
                let t = if slot % 2 == 0 {
                    forward[i][old_v]
                } else {
                    backward[i][old_v]
                };
                edges[new_v][slot] = Some(number[&t]);
            }
        }
        Ok(SubgroupGraph { rank, edges })
    }

    fn from_folder(rank: usize, mut folder: Folder, basepoint: u32) -> SubgroupGraph {
        let base = folder.find(basepoint);
        let mut number: BTreeMap<u32, u32> = BTreeMap::new();
        number.insert(base, 0);
        let mut order = alloc::vec![base];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let slots: Vec<(u16, u32)> = folder.adj[v as usize]
                .iter()
                .map(|(&s, &t)| (s, t))
                .collect();
            for (_, target) in slots {
                let t = folder.find(target);
                if let alloc::collections::btree_map::Entry::Vacant(e) = number.entry(t) {
                    e.insert(order.len() as u32);
                    order.push(t);
                }
            }
        }
        let mut edges = alloc::vec![alloc::vec![None; 2 * rank]; order.len()];
        for (new_v, &old_v) in order.iter().enumerate() {
            let slots: Vec<(u16, u32)> = folder.adj[old_v as usize]
                .iter()
                .map(|(&s, &t)| (s, t))
                .collect();
            for (slot, target) in slots {
                let t = folder.find(target);
                edges[new_v][slot as usize] = Some(number[&t]);
            }
        }
        SubgroupGraph { rank, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    /// Follows the edge labeled `letter` out of `v`, if present.
    pub fn step(&self, v: usize, letter: Letter) -> Option<usize> {
        self.edges[v][letter.ord()].map(|t| t as usize)
    }

    /// Endpoint of the path spelling `w` from `from`, if the whole path exists.
    pub fn trace(&self, from: usize, w: &Word) -> Option<usize> {
        let mut v = from;
        for &l in w.letters() {
            v = self.step(v, l)?;
        }
        Some(v)
    }

    /// Membership: true iff `w` spells a basepoint loop.
    pub fn contains(&self, w: &Word) -> bool {
        assert_eq!(w.rank(), self.rank, "rank mismatch");
        self.trace(Self::BASEPOINT, w) == Some(Self::BASEPOINT)
    }

    /// `Some(l)` when the graph is a degree-`l` covering (finite index),
    /// `None` for infinite index.
    pub fn index(&self) -> Option<usize> {
        let full = self
            .edges
            .iter()
            .all(|slots| slots.iter().all(|e| e.is_some()));
        full.then_some(self.edges.len())
    }

    /// True for the rose on `rank` petals: one vertex with every loop.
    pub fn is_rose(&self) -> bool {
        self.edges.len() == 1 && self.edges[0].iter().all(|e| *e == Some(0))
    }

    /// Breadth-first spanning tree in letter order; `parents[v]` is the
    /// (vertex, letter) edge that discovered `v`, `None` for the basepoint.
    fn bfs_tree(&self) -> Vec<Option<(usize, Letter)>> {
        let mut parents = alloc::vec![None; self.edges.len()];
        let mut seen = alloc::vec![false; self.edges.len()];
        seen[0] = true;
        let mut queue = alloc::vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for slot in 0..2 * self.rank {
                if let Some(t) = self.edges[v][slot] {
                    let t = t as usize;
                    if !seen[t] {
                        seen[t] = true;
                        parents[t] = Some((v, Letter::from_ord(slot)));
                        queue.push(t);
                    }
                }
            }
        }
        parents
    }

    /// Schreier transversal from the breadth-first spanning tree: geodesic
    /// (in the tree) coset representatives, basepoint mapped to the identity.
    pub fn schreier_transversal(&self) -> Result<Transversal, StallingsError> {
        if self.index().is_none() {
            return Err(StallingsError::InfiniteIndex);
        }
        let parents = self.bfs_tree();
        let mut words: Vec<Word> = Vec::with_capacity(self.edges.len());
        words.push(Word::identity(self.rank));
        for v in 1..self.edges.len() {
            let (p, l) = parents[v].expect("covering graph is connected");
            let rep = words[p].multiply(&Word::from_letters(self.rank, [l]).unwrap());
            words.push(rep);
        }
        Ok(Transversal { words })
    }

    /// The Schreier generating data for this (finite-index) subgroup with
    /// respect to the given transversal: one generator per non-tree positive
    /// edge, in (coset index, letter index) order.
    pub fn schreier_basis(&self, transversal: &Transversal) -> SchreierBasis {
        assert_eq!(transversal.len(), self.vertex_count());
        let parents = self.bfs_tree();
        // Mark tree edges by their positive orientation (vertex, letter index).
        let mut is_tree = alloc::vec![alloc::vec![false; self.rank]; self.edges.len()];
        for (v, parent) in parents.iter().enumerate() {
            if let Some((p, l)) = parent {
                if l.is_positive() {
                    is_tree[*p][l.index() - 1] = true;
                } else {
                    is_tree[v][l.index() - 1] = true;
                }
            }
        }
        let mut generators = Vec::new();
        let mut edge_ids = alloc::vec![alloc::vec![None; self.rank]; self.edges.len()];
        for v in 0..self.edges.len() {
            for i in 0..self.rank {
                if is_tree[v][i] {
                    continue;
                }
                let letter = Letter::new(i + 1, true);
                let Some(target) = self.step(v, letter) else {
                    continue;
                };
                let gen = transversal
                    .word(v)
                    .multiply(&Word::from_letters(self.rank, [letter]).unwrap())
                    .multiply(&transversal.word(target).inverse());
                edge_ids[v][i] = Some(generators.len());
                generators.push(gen);
            }
        }
        SchreierBasis {
            generators,
            edge_ids,
        }
    }

    /// Serializes to the text edge-list format: a `rank` line, a `basepoint`
    /// line, then one `(vertex, letter, vertex)` line per positive edge.
    pub fn to_edge_list(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "rank {}", self.rank);
        let _ = writeln!(out, "basepoint {}", Self::BASEPOINT);
        for v in 0..self.edges.len() {
            for i in 0..self.rank {
                if let Some(t) = self.edges[v][2 * i] {
                    let _ = writeln!(out, "{v} x{} {t}", i + 1);
                }
            }
        }
        out
    }

    /// Parses the text edge-list format. The graph is renumbered canonically;
    /// the input must be deterministic (no duplicate `(vertex, letter)` keys)
    /// and connected from its basepoint.
    pub fn parse_edge_list(text: &str) -> Result<SubgroupGraph, StallingsError> {
        let mut rank = None;
        let mut basepoint = None;
        let mut raw_edges: Vec<(u64, usize, u64)> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("rank") => {
                    rank = parts
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .filter(|&r| r >= 1);
                    if rank.is_none() {
                        return Err(StallingsError::Malformed(String::from("bad rank line")));
                    }
                }
                Some("basepoint") => {
                    basepoint = parts.next().and_then(|t| t.parse::<u64>().ok());
                    if basepoint.is_none() {
                        return Err(StallingsError::Malformed(String::from(
                            "bad basepoint line",
                        )));
                    }
                }
                Some(v) => {
                    let (v, l, t) = (|| {
                        let v = v.parse::<u64>().ok()?;
                        let l = parts.next()?.strip_prefix('x')?.parse::<usize>().ok()?;
                        let t = parts.next()?.parse::<u64>().ok()?;
                        parts.next().is_none().then_some((v, l, t))
                    })()
                    .ok_or_else(|| StallingsError::Malformed(String::from("bad edge line")))?;
                    raw_edges.push((v, l, t));
                }
                None => {}
            }
        }
        let rank = rank.ok_or_else(|| StallingsError::Malformed(String::from("missing rank")))?;
        let base = basepoint
            .ok_or_else(|| StallingsError::Malformed(String::from("missing basepoint")))?;
        let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
        fn intern(ids: &mut BTreeMap<u64, usize>, v: u64) -> usize {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        }
        let b = intern(&mut ids, base);
        let mut edges: Vec<Vec<Option<u32>>> = alloc::vec![alloc::vec![None; 2 * rank]];
        for (v, l, t) in raw_edges {
            if l < 1 || l > rank {
                return Err(StallingsError::Malformed(String::from(
                    "letter out of range",
                )));
            }
            let v = intern(&mut ids, v);
            let t = intern(&mut ids, t);
            while edges.len() < ids.len() {
                edges.push(alloc::vec![None; 2 * rank]);
            }
            let fwd = Letter::new(l, true).ord();
            let bwd = Letter::new(l, false).ord();
            if edges[v][fwd].is_some() || edges[t][bwd].is_some() {
                return Err(StallingsError::Malformed(String::from(
                    "duplicate edge key",
                )));
            }
            edges[v][fwd] = Some(t as u32);
            edges[t][bwd] = Some(v as u32);
        }
        let graph = SubgroupGraph { rank, edges };
        // renumber from the declared basepoint
        let mut number: BTreeMap<usize, usize> = BTreeMap::new();
        number.insert(b, 0);
        let mut order = alloc::vec![b];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for slot in 0..2 * rank {
                if let Some(t) = graph.edges[v][slot] {
                    let t = t as usize;
                    if let alloc::collections::btree_map::Entry::Vacant(e) = number.entry(t) {
                        e.insert(order.len());
                        order.push(t);
                    }
                }
            }
        }
        if order.len() != graph.edges.len() {
            return Err(StallingsError::Malformed(String::from(
                "unreachable vertices",
            )));
        }
        let mut renumbered = alloc::vec![alloc::vec![None; 2 * rank]; order.len()];
        for (new_v, &old_v) in order.iter().enumerate() {
            for slot in 0..2 * rank {
                renumbered[new_v][slot] =
                    graph.edges[old_v][slot].map(|t| number[&(t as usize)] as u32);
            }
        }
        Ok(SubgroupGraph {
            rank,
            edges: renumbered,
        })
    }
}

impl fmt::Debug for SubgroupGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubgroupGraph(rank {}, {} vertices)",
            self.rank,
            self.edges.len()
        )
    }
}

/// Coset representatives indexed by graph vertex; the basepoint maps to the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    words: Vec<Word>,
}

impl Transversal {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, vertex: usize) -> &Word {
        &self.words[vertex]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// Nontrivial Schreier generators of a finite-index subgroup, one per
/// non-tree positive edge, in (coset index, letter index) order.
#[derive(Debug, Clone)]
pub struct SchreierBasis {
    generators: Vec<Word>,
    /// `edge_ids[v][i]` is the generator id of the non-tree edge
    /// `(v, x_{i+1})`, or `None` for tree edges.
    edge_ids: Vec<Vec<Option<usize>>>,
}

impl SchreierBasis {
    pub fn count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn edge_id(&self, vertex: usize, letter_index: usize) -> Option<usize> {
        self.edge_ids[vertex][letter_index - 1]
    }

    /// Walks `w` through the coset graph from an arbitrary start vertex,
    /// reporting the signed Schreier letter of every non-tree edge traversal,
    /// and returns the end vertex.
    pub fn walk_from<F>(
        &self,
        graph: &SubgroupGraph,
        start: usize,
        w: &Word,
        mut emit: F,
    ) -> Result<usize, StallingsError>
    where
        F: FnMut(usize, bool),
    {
        let mut v = start;
        for &l in w.letters() {
            if l.is_positive() {
                let t = graph.step(v, l).ok_or(StallingsError::NotInSubgroup)?;
                if let Some(id) = self.edge_id(v, l.index()) {
                    emit(id, true);
                }
                v = t;
            } else {
                let u = graph.step(v, l).ok_or(StallingsError::NotInSubgroup)?;
                if let Some(id) = self.edge_id(u, l.index()) {
                    emit(id, false);
                }
                v = u;
            }
        }
        Ok(v)
    }

    /// Basepoint-loop walk: errors unless `w` lies in the subgroup.
    pub fn walk<F>(&self, graph: &SubgroupGraph, w: &Word, emit: F) -> Result<(), StallingsError>
    where
        F: FnMut(usize, bool),
    {
        let end = self.walk_from(graph, SubgroupGraph::BASEPOINT, w, emit)?;
        if end == SubgroupGraph::BASEPOINT {
            Ok(())
        } else {
            Err(StallingsError::NotInSubgroup)
        }
    }
}

/// The nontrivial Schreier generators `t_v x (overline{t_v x})^-1` for the
/// finite-index subgroup carried by `graph`.
pub fn schreier_generators(
    graph: &SubgroupGraph,
    transversal: &Transversal,
) -> Result<Vec<Word>, StallingsError> {
    if graph.index().is_none() {
        return Err(StallingsError::InfiniteIndex);
    }
    Ok(graph.schreier_basis(transversal).generators)
}

/// Rewrites a subgroup element as a word over the Schreier generator
/// alphabet (rank = number of generators; a trivial subgroup yields rank 1).
pub fn rewrite_in_schreier(
    graph: &SubgroupGraph,
    transversal: &Transversal,
    w: &Word,
) -> Result<Word, StallingsError> {
    let basis = graph.schreier_basis(transversal);
    let out_rank = basis.count().max(1);
    let mut letters: Vec<Letter> = Vec::new();
    basis.walk(graph, w, |id, positive| {
        letters.push(Letter::new(id + 1, positive))
    })?;
    Ok(Word::from_letters(out_rank, letters).expect("schreier letters in range"))
}

/// Evaluates a word over an auxiliary alphabet by substituting `images`
/// (one image per auxiliary generator), reducing the result.
pub fn substitute(target_rank: usize, images: &[Word], w: &Word) -> Word {
    assert!(
        w.rank() <= images.len() || w.is_identity(),
        "not enough images"
    );
    let mut acc = Word::identity(target_rank);
    for &l in w.letters() {
        let img = &images[l.index() - 1];
        acc = if l.is_positive() {
            acc.multiply(img)
        } else {
            acc.multiply(&img.inverse())
        };
    }
    acc
}

/// An endomorphism of the rank-`n` free group (or of a surface group on the
/// same alphabet), stored as one image word per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Endomorphism {
        let rank = images.len();
        assert!(rank >= 1, "rank must be at least 1");
        assert!(images.iter().all(|w| w.rank() == rank), "rank mismatch");
        Endomorphism { images }
    }

    pub fn identity(rank: usize) -> Endomorphism {
        Endomorphism::new((1..=rank).map(|i| Word::generator(rank, i)).collect())
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Homomorphic image of `w`, freely reduced.
    pub fn apply(&self, w: &Word) -> Word {
        assert_eq!(w.rank(), self.rank(), "rank mismatch");
        substitute(self.rank(), &self.images, w)
    }

    /// Surjectivity onto the free group: the folded graph of the image set
    /// must be the rose on `rank` petals.
    pub fn is_surjective(&self) -> bool {
        SubgroupGraph::build(self.rank(), &self.images).is_rose()
    }

    /// Free groups of finite rank are Hopfian, so surjective and bijective
    /// coincide.
    pub fn is_automorphism(&self) -> bool {
        self.is_surjective()
    }

    /// Induced matrix on the abelianization: entry `(i, j)` is the exponent
    /// sum of `x_{i+1}` in the image of `x_{j+1}`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = alloc::vec![alloc::vec![0i64; n]; n];
        for (j, img) in self.images.iter().enumerate() {
            for (i, e) in img.exponent_vector().into_iter().enumerate() {
                m[i][j] = e;
            }
        }
        m
    }
}
