//! Surface-group presentations, a desk-scale word-problem oracle (Dehn
//! reduction plus finite-quotient separation), and the exponent functionals
//! used by the surface net constructions.
//!
//! Orientable genus `n >= 2` uses the relator `[x1,x2]...[x_{2n-1},x_{2n}]`;
//! non-orientable genus `n >= 3` uses `x1^2...x_n^2`. Dehn's algorithm is
//! complete for orientable genus >= 2 and non-orientable genus >= 4; for
//! non-orientable genus 3 answers are three-valued.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    /// Genus below the supported range for the requested kind.
    GenusTooSmall { kind: SurfaceKind, genus: usize },
    /// The modulus must be prime (and odd in the non-orientable case).
    BadModulus(u32),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::GenusTooSmall { kind, genus } => {
                write!(f, "genus {genus} too small for {kind:?} surface")
            }
            SurfaceError::BadModulus(p) => write!(f, "modulus {p} is not an admissible prime"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Orientable,
    NonOrientable,
}

/// A closed-surface presentation, identified by kind and genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfacePresentation {
    pub kind: SurfaceKind,
    pub genus: usize,
}

impl SurfacePresentation {
    pub fn orientable(genus: usize) -> Result<SurfacePresentation, SurfaceError> {
        if genus < 2 {
            return Err(SurfaceError::GenusTooSmall {
                kind: SurfaceKind::Orientable,
                genus,
            });
        }
        Ok(SurfacePresentation {
            kind: SurfaceKind::Orientable,
            genus,
        })
    }

    pub fn non_orientable(genus: usize) -> Result<SurfacePresentation, SurfaceError> {
        if genus < 3 {
            return Err(SurfaceError::GenusTooSmall {
                kind: SurfaceKind::NonOrientable,
                genus,
            });
        }
        Ok(SurfacePresentation {
            kind: SurfaceKind::NonOrientable,
            genus,
        })
    }

    /// Number of generators in the presentation alphabet.
    pub fn alphabet_rank(&self) -> usize {
        match self.kind {
            SurfaceKind::Orientable => 2 * self.genus,
            SurfaceKind::NonOrientable => self.genus,
        }
    }

    /// The defining relator as a word over the presentation alphabet.
    pub fn relator(&self) -> Word {
        let rank = self.alphabet_rank();
        let mut codes: Vec<i32> = Vec::new();
        match self.kind {
            SurfaceKind::Orientable => {
                for h in 0..self.genus {
                    let a = (2 * h + 1) as i32;
                    let b = (2 * h + 2) as i32;
                    codes.extend_from_slice(&[a, b, -a, -b]);
                }
            }
            SurfaceKind::NonOrientable => {
                for i in 1..=self.genus {
                    codes.extend_from_slice(&[i as i32, i as i32]);
                }
            }
        }
        Word::from_codes(rank, &codes).expect("relator letters in range")
    }

    /// Dehn's algorithm decides the word problem here.
    pub fn dehn_complete(&self) -> bool {
        match self.kind {
            SurfaceKind::Orientable => true,
            SurfaceKind::NonOrientable => self.genus >= 4,
        }
    }

    /// Number of mod-p exponent functionals: `2n` for orientable genus `n`,
    /// `n - 1` for the non-orientable working basis.
    pub fn functional_count(&self) -> usize {
        match self.kind {
            SurfaceKind::Orientable => 2 * self.genus,
            SurfaceKind::NonOrientable => self.genus - 1,
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a functional modulus: 0 (integers) or a prime; the
/// non-orientable working basis additionally needs the prime to be odd.
pub fn check_modulus(pres: Option<&SurfacePresentation>, modulus: u32) -> Result<(), SurfaceError> {
    if modulus == 0 {
        return Ok(());
    }
    if !is_prime(modulus) {
        return Err(SurfaceError::BadModulus(modulus));
    }
    if let Some(p) = pres {
        if p.kind == SurfaceKind::NonOrientable && modulus == 2 {
            return Err(SurfaceError::BadModulus(modulus));
        }
    }
    Ok(())
}

/// A vector of exponent-functional values; `modulus == 0` means integer
/// values, otherwise entries are reduced to `0..modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub entries: Vec<i64>,
    pub modulus: u32,
}

impl ExponentVector {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

/// Evaluates the exponent functionals of `w`.
///
/// Free and orientable contexts return the raw signed letter counts (the
/// orientable relator has zero exponent sums, so these descend to the
/// group). The non-orientable working basis returns `e_i(w) - e_n(w)` for
/// `i < n`, the functionals that survive the relator constraint.
pub fn exponent_sums(
    w: &Word,
    pres: Option<&SurfacePresentation>,
    modulus: u32,
) -> Result<ExponentVector, SurfaceError> {
    check_modulus(pres, modulus)?;
    let raw = w.exponent_vector();
    let mut entries: Vec<i64> = match pres {
        Some(p) if p.kind == SurfaceKind::NonOrientable => {
            let n = p.genus;
            (0..n - 1).map(|i| raw[i] - raw[n - 1]).collect()
        }
        _ => raw,
    };
    if modulus != 0 {
        let m = modulus as i64;
        for e in &mut entries {
            *e = e.rem_euclid(m);
        }
    }
    Ok(ExponentVector { entries, modulus })
}

/// Dehn reduction against the symmetrized relator table (all cyclic shifts
/// of the relator and its inverse). A subword strictly longer than half the
/// relator is replaced by the inverse of its complement; matches are chosen
/// leftmost-longest for reproducibility.
pub struct DehnReducer {
    relator_len: usize,
    half: usize,
    table: Vec<Vec<Letter>>,
}

impl DehnReducer {
    pub fn new(pres: &SurfacePresentation) -> DehnReducer {
        let relator = pres.relator();
        let len = relator.len();
        let mut table = Vec::with_capacity(2 * len);
        for base in [relator.clone(), relator.inverse()] {
            let ls = base.letters();
            for shift in 0..len {
                let mut conj: Vec<Letter> = Vec::with_capacity(len);
                conj.extend_from_slice(&ls[shift..]);
                conj.extend_from_slice(&ls[..shift]);
                if !table.contains(&conj) {
                    table.push(conj);
                }
            }
        }
        DehnReducer {
            relator_len: len,
            half: len / 2,
            table,
        }
    }

    /// Longest table-entry prefix of `buf[pos..]` exceeding half the relator
    /// length. Small cancellation makes the match unique at that length.
    fn longest_match(&self, buf: &[Letter], pos: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (entry_idx, entry) in self.table.iter().enumerate() {
            let max = entry.len().min(buf.len() - pos);
            let mut h = 0;
            while h < max && entry[h] == buf[pos + h] {
                h += 1;
            }
            if h > self.half && best.map(|(bh, _)| h > bh).unwrap_or(true) {
                best = Some((h, entry_idx));
            }
        }
        best
    }

    pub fn reduce(&self, w: &Word) -> Word {
        let rank = w.rank();
        let mut buf: Vec<Letter> = w.letters().to_vec();
        let mut pos = 0usize;
        while pos < buf.len() {
            let Some((h, entry_idx)) = self.longest_match(&buf, pos) else {
                pos += 1;
                continue;
            };
            // entry = s t with |s| = h; s = t^-1 in the group, so the match
            // is replaced by the strictly shorter complement inverse
            let entry = &self.table[entry_idx];
            let replacement: Vec<Letter> = entry[h..].iter().rev().map(|l| l.inverse()).collect();
            let tail: Vec<Letter> = buf.split_off(pos + h);
            buf.truncate(pos);
            let mut lowest = buf.len();
            for l in replacement.into_iter().chain(tail) {
                if buf.last().is_some_and(|&last| last == l.inverse()) {
                    buf.pop();
                } else {
                    buf.push(l);
                }
                lowest = lowest.min(buf.len().saturating_sub(1));
            }
            // a replacement can enable matches overlapping the edited window
            pos = lowest.saturating_sub(self.relator_len);
        }
        Word::from_letters(rank, buf).expect("letters stay in range")
    }
}

/// One-shot Dehn reduction; build a [`DehnReducer`] to amortize the table.
pub fn dehn_reduce(w: &Word, pres: &SurfacePresentation) -> Word {
    DehnReducer::new(pres).reduce(w)
}

/// Three-valued answer of the word-problem oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Search budget for finite-quotient separation.
#[derive(Debug, Clone, Copy)]
pub struct QuotientBudget {
    pub max_degree: usize,
    pub candidates_per_degree: usize,
}

impl Default for QuotientBudget {
    fn default() -> QuotientBudget {
        QuotientBudget {
            max_degree: 8,
            candidates_per_degree: 2000,
        }
    }
}

/// Is `w` the identity of the surface group?
///
/// `Yes` is always sound (Dehn reduction to the empty word). `No` is sound
/// where Dehn's algorithm is complete, and otherwise must be backed by a
/// separating finite quotient; failing that the answer is `Unknown`.
pub fn is_trivial(w: &Word, pres: &SurfacePresentation) -> Verdict {
    is_trivial_budget(w, pres, &QuotientBudget::default())
}

pub fn is_trivial_budget(w: &Word, pres: &SurfacePresentation, budget: &QuotientBudget) -> Verdict {
    let reducer = DehnReducer::new(pres);
    is_trivial_with(&reducer, w, pres, budget)
}

/// As [`is_trivial`], reusing a prepared reducer.
pub fn is_trivial_with(
    reducer: &DehnReducer,
    w: &Word,
    pres: &SurfacePresentation,
    budget: &QuotientBudget,
) -> Verdict {
    let reduced = reducer.reduce(w);
    if reduced.is_identity() {
        return Verdict::Yes;
    }
    if pres.dehn_complete() {
        return Verdict::No;
    }
    match quotient_separate(&reduced, pres, budget) {
        Some(_) => Verdict::No,
        None => Verdict::Unknown,
    }
}

pub fn are_equal(u: &Word, v: &Word, pres: &SurfacePresentation) -> Verdict {
    is_trivial(&u.multiply(&v.inverse()), pres)
}

// ---------------------------------------------------------------------------
// permutations and finite-quotient search

/// A permutation of `0..degree`, composed left-to-right (`(a * b)(x) =
/// b(a(x))`), matching the right action used by coset graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!((1..=255).contains(&degree), "degree out of range");
        Perm {
            map: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles over `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Option<Perm> {
        let mut p = Perm::identity(degree);
        let mut used = alloc::vec![false; degree];
        for cycle in cycles {
            for pos in 0..cycle.len() {
                let from = cycle[pos];
                let to = cycle[(pos + 1) % cycle.len()];
                if from >= degree || to >= degree || used[from] {
                    return None;
                }
                used[from] = true;
                p.map[from] = to as u8;
            }
        }
        Some(p)
    }

    /// The full cycle `(0 1 2 ... degree-1)`.
    pub fn full_cycle(degree: usize) -> Perm {
        let mut p = Perm::identity(degree);
        for x in 0..degree {
            p.map[x] = ((x + 1) % degree) as u8;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            map: self.map.iter().map(|&v| other.map[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = alloc::vec![0u8; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v as usize] = i as u8;
        }
        Perm { map }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Sorted cycle lengths, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().into_iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        lens
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = alloc::vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// A permutation `r` with `r * r = self`, when one exists: odd cycles
    /// root individually, even cycles must pair up by length.
    pub fn square_root(&self) -> Option<Perm> {
        let mut by_len: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for c in self.cycles() {
            by_len.entry(c.len()).or_default().push(c);
        }
        let mut root = Perm::identity(self.degree());
        for (len, group) in by_len {
            if len % 2 == 1 {
                // c = r^2 with r = c^{(len+1)/2}
                for cycle in group {
                    let k = len.div_ceil(2);
                    for (i, &x) in cycle.iter().enumerate() {
                        root.map[x] = cycle[(i + k) % len] as u8;
                    }
                }
            } else {
                if group.len() % 2 != 0 {
                    return None;
                }
                for pair in group.chunks(2) {
                    let (a, b) = (&pair[0], &pair[1]);
                    // interleave the two cycles into one of twice the length
                    for i in 0..len {
                        root.map[a[i]] = b[i] as u8;
                        root.map[b[i]] = a[(i + 1) % len] as u8;
                    }
                }
            }
        }
        Some(root)
    }

    fn random(degree: usize, rng: &mut ChaCha8Rng) -> Perm {
        let mut map: Vec<u8> = (0..degree as u8).collect();
        for i in (1..degree).rev() {
            let j = rng.gen_range(0..=i);
            map.swap(i, j);
        }
        Perm { map }
    }
}

/// Conjugator `s` with `s^-1 p s = q`, when `p` and `q` share a cycle type.
pub fn conjugator(p: &Perm, q: &Perm) -> Option<Perm> {
    if p.cycle_type() != q.cycle_type() {
        return None;
    }
    let mut by_len_p: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    let mut by_len_q: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for c in p.cycles() {
        by_len_p.entry(c.len()).or_default().push(c);
    }
    for c in q.cycles() {
        by_len_q.entry(c.len()).or_default().push(c);
    }
    let mut s = Perm::identity(p.degree());
    for (len, ps) in by_len_p {
        let qs = &by_len_q[&len];
        for (cp, cq) in ps.iter().zip(qs) {
            for i in 0..len {
                s.map[cp[i]] = cq[i] as u8;
            }
        }
    }
    Some(s)
}

/// Evaluates `w` through generator images.
pub fn evaluate_word(images: &[Perm], w: &Word) -> Perm {
    let degree = images[0].degree();
    let mut acc = Perm::identity(degree);
    for &l in w.letters() {
        let img = &images[l.index() - 1];
        acc = if l.is_positive() {
            acc.compose(img)
        } else {
            acc.compose(&img.inverse())
        };
    }
    acc
}

/// Order of the subgroup generated by `images`, or `None` past `cap`.
pub fn group_order(images: &[Perm], cap: usize) -> Option<usize> {
    let degree = images[0].degree();
    let mut elements: BTreeSet<Perm> = BTreeSet::new();
    elements.insert(Perm::identity(degree));
    let mut frontier = alloc::vec![Perm::identity(degree)];
    while let Some(g) = frontier.pop() {
        for img in images {
            let next = g.compose(img);
            if elements.insert(next.clone()) {
                if elements.len() > cap {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(elements.len())
}

/// A homomorphism to a finite permutation group separating a word from the
/// identity: the images satisfy the relator and send the word to a
/// non-identity permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWitness {
    pub images: Vec<Perm>,
}

impl QuotientWitness {
    /// Re-checks the defining contract against a presentation and word.
    pub fn verify(&self, pres: &SurfacePresentation, w: &Word) -> bool {
        evaluate_word(&self.images, &pres.relator()).is_identity()
            && !evaluate_word(&self.images, w).is_identity()
    }
}

fn checked(
    witness: QuotientWitness,
    pres: &SurfacePresentation,
    w: &Word,
) -> Option<QuotientWitness> {
    witness.verify(pres, w).then_some(witness)
}

/// Searches for a finite quotient separating `w` from the identity, trying
/// abelian functionals first and then a deterministic seeded search over
/// relator-compatible permutation tuples.
pub fn quotient_separate(
    w: &Word,
    pres: &SurfacePresentation,
    budget: &QuotientBudget,
) -> Option<QuotientWitness> {
    if w.is_identity() {
        return None;
    }
    let rank = pres.alphabet_rank();
    let e = w.exponent_vector();

    // abelian witnesses straight from the exponent functionals
    match pres.kind {
        SurfaceKind::Orientable => {
            for i in 0..rank {
                if e[i] != 0 {
                    let m = (e[i].unsigned_abs() as usize + 1).clamp(2, 255);
                    if e[i].rem_euclid(m as i64) != 0 {
                        let mut images = alloc::vec![Perm::identity(m); rank];
                        images[i] = Perm::full_cycle(m);
                        if let Some(found) = checked(QuotientWitness { images }, pres, w) {
                            return Some(found);
                        }
                    }
                }
            }
        }
        SurfaceKind::NonOrientable => {
            let n = pres.genus;
            for i in 0..n - 1 {
                let sigma = e[i] - e[n - 1];
                if sigma != 0 {
                    let m = (sigma.unsigned_abs() as usize + 1).clamp(2, 255);
                    if sigma.rem_euclid(m as i64) != 0 {
                        let mut images = alloc::vec![Perm::identity(m); rank];
                        images[i] = Perm::full_cycle(m);
                        images[n - 1] = Perm::full_cycle(m).inverse();
                        if let Some(found) = checked(QuotientWitness { images }, pres, w) {
                            return Some(found);
                        }
                    }
                }
            }
            if let Some(j) = e.iter().position(|&x| x % 2 != 0) {
                let swap = Perm::from_cycles(2, &[alloc::vec![0, 1]]).unwrap();
                let mut images = alloc::vec![Perm::identity(2); rank];
                images[j] = swap;
                if let Some(found) = checked(QuotientWitness { images }, pres, w) {
                    return Some(found);
                }
            }
        }
    }

    // seeded non-abelian search, deterministic per degree
    let relator = pres.relator();
    for degree in 3..=budget.max_degree.min(255) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_e1e0 ^ degree as u64);
        for _ in 0..budget.candidates_per_degree {
            let Some(images) = relator_candidate(pres, degree, &mut rng) else {
                continue;
            };
            if !evaluate_word(&images, &relator).is_identity() {
                continue;
            }
            if !evaluate_word(&images, w).is_identity() {
                return Some(QuotientWitness { images });
            }
        }
    }
    None
}

/// One seeded candidate tuple built to satisfy the relator by construction
/// (callers still re-check).
fn relator_candidate(
    pres: &SurfacePresentation,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Perm>> {
    let rank = pres.alphabet_rank();
    match pres.kind {
        SurfaceKind::Orientable => {
            let a = Perm::random(degree, rng);
            let b = Perm::random(degree, rng);
            let mut images = alloc::vec![Perm::identity(degree); rank];
            if rng.gen_bool(0.5) {
                // [a,b][b,a] = 1: swap pattern on the first two handles
                images[0] = a.clone();
                images[1] = b.clone();
                images[2] = b;
                images[3] = a;
            } else {
                // solve [c,d] = [b,a] by conjugation when cycle types allow
                let z = commutator(&b, &a);
                let d = Perm::random(degree, rng);
                let zd = z.compose(&d);
                let s = conjugator(&d, &zd)?;
                images[0] = a;
                images[1] = b;
                images[2] = s.inverse();
                images[3] = d;
            }
            Some(images)
        }
        SurfaceKind::NonOrientable => {
            // random first n-1 images; the last one must square to the
            // inverse of the accumulated squares
            let mut images: Vec<Perm> = (0..rank - 1).map(|_| Perm::random(degree, rng)).collect();
            let mut prod = Perm::identity(degree);
            for img in &images {
                prod = prod.compose(img).compose(img);
            }
            let last = prod.inverse().square_root()?;
            images.push(last);
            Some(images)
        }
    }
}

/// Deterministic sample of nontrivial homomorphisms to `S_degree` (generator
/// images satisfying the relator), used as probe quotients.
pub fn sample_quotients(
    pres: &SurfacePresentation,
    degree: usize,
    count: usize,
    seed: u64,
) -> Vec<Vec<Perm>> {
    let relator = pres.relator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..200 * count.max(1) {
        if out.len() >= count {
            break;
        }
        let Some(images) = relator_candidate(pres, degree, &mut rng) else {
            continue;
        };
        if evaluate_word(&images, &relator).is_identity() && images.iter().any(|p| !p.is_identity())
        {
            out.push(images);
        }
    }
    out
}

fn commutator(a: &Perm, b: &Perm) -> Perm {
    a.compose(b).compose(&a.inverse()).compose(&b.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, codes: &[i32]) -> Word {
        Word::from_codes(rank, codes).unwrap()
    }

    #[test]
    fn relators_have_the_presented_shape() {
        let or2 = SurfacePresentation::orientable(2).unwrap();
        assert_eq!(or2.relator(), w(4, &[1, 2, -1, -2, 3, 4, -3, -4]));
        let nonor3 = SurfacePresentation::non_orientable(3).unwrap();
        assert_eq!(nonor3.relator(), w(3, &[1, 1, 2, 2, 3, 3]));
        assert!(SurfacePresentation::orientable(1).is_err());
        assert!(SurfacePresentation::non_orientable(2).is_err());
    }

    #[test]
    fn exponent_functionals_kill_the_relator() {
        // free: commutator has zero sums
        let free = exponent_sums(&w(2, &[1, 2, -1, -2]), None, 0).unwrap();
        assert_eq!(free.entries, alloc::vec![0, 0]);

        let or2 = SurfacePresentation::orientable(2).unwrap();
        let on_rel = exponent_sums(&or2.relator(), Some(&or2), 0).unwrap();
        assert_eq!(on_rel.entries, alloc::vec![0, 0, 0, 0]);

        let nonor3 = SurfacePresentation::non_orientable(3).unwrap();
        let x1 = Word::generator(3, 1);
        let v = exponent_sums(&x1, Some(&nonor3), 3).unwrap();
        assert_eq!(v.entries, alloc::vec![1, 0]);
        let on_rel = exponent_sums(&nonor3.relator(), Some(&nonor3), 3).unwrap();
        assert!(on_rel.is_zero());

        // the working basis rejects p = 2 and composite moduli
        assert!(exponent_sums(&x1, Some(&nonor3), 2).is_err());
        assert!(exponent_sums(&x1, None, 4).is_err());
    }

    #[test]
    fn dehn_reduction_kills_the_relator_and_its_conjugates() {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let reducer = DehnReducer::new(&pres);
        assert!(reducer.reduce(&pres.relator()).is_identity());
        let x3 = Word::generator(4, 3);
        let conj = x3.multiply(&pres.relator()).multiply(&x3.inverse());
        assert!(reducer.reduce(&conj).is_identity());
        assert_eq!(
            reducer.reduce(&Word::generator(4, 1)),
            Word::generator(4, 1)
        );
    }

    #[test]
    fn dehn_reduction_shrinks_majority_subwords() {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let reducer = DehnReducer::new(&pres);
        // first five letters of the relator followed by an arbitrary tail
        let prefix = w(4, &[1, 2, -1, -2, 3]);
        let tail = Word::generator(4, 2);
        let input = prefix.multiply(&tail);
        let reduced = reducer.reduce(&input);
        assert!(reduced.len() < input.len());
        // the replacement preserves the group element
        assert_eq!(
            is_trivial(&input.multiply(&reduced.inverse()), &pres),
            Verdict::Yes
        );
    }

    #[test]
    fn triviality_verdicts_on_the_orientable_surface() {
        let pres = SurfacePresentation::orientable(2).unwrap();
        assert_eq!(is_trivial(&pres.relator(), &pres), Verdict::Yes);
        assert_eq!(is_trivial(&Word::generator(4, 1), &pres), Verdict::No);
        let u = w(4, &[1, 2]);
        let v = w(4, &[2, 1]);
        assert_eq!(are_equal(&u, &v, &pres), Verdict::No);
        assert_eq!(are_equal(&u, &u, &pres), Verdict::Yes);
    }

    #[test]
    fn quotient_separation_finds_witnesses() {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let budget = QuotientBudget::default();

        // nonzero exponent vector: abelian witness
        let x1 = Word::generator(4, 1);
        let witness = quotient_separate(&x1, &pres, &budget).unwrap();
        assert!(witness.verify(&pres, &x1));

        // the relator is trivial: no witness can exist
        assert!(quotient_separate(&dehn_reduce(&pres.relator(), &pres), &pres, &budget).is_none());

        // commutator: needs a non-abelian witness of degree <= 8
        let comm = w(4, &[1, 2, -1, -2]);
        let witness = quotient_separate(&comm, &pres, &budget).unwrap();
        assert!(witness.verify(&pres, &comm));
        assert!(witness.images[0].degree() <= 8);
    }

    #[test]
    fn genus_three_nonorientable_verdicts_are_three_valued_but_sound() {
        let pres = SurfacePresentation::non_orientable(3).unwrap();
        assert_eq!(is_trivial(&pres.relator(), &pres), Verdict::Yes);
        // x1 has a nonzero functional: sound "No" via an abelian quotient
        assert_eq!(is_trivial(&Word::generator(3, 1), &pres), Verdict::No);
        // commutator of x1, x2: zero functionals, needs the seeded search
        let comm = w(3, &[1, 2, -1, -2]);
        assert_eq!(is_trivial(&comm, &pres), Verdict::No);
    }

    #[test]
    fn perm_square_roots_square_back() {
        let p = Perm::from_cycles(6, &[alloc::vec![0, 1, 2], alloc::vec![3, 4]]).unwrap();
        assert!(p.square_root().is_none()); // lone 2-cycle

        let reused = Perm::from_cycles(6, &[alloc::vec![2, 3], alloc::vec![4, 5, 4]]);
        assert!(reused.is_none()); // malformed cycle reuses a point

        let ok = Perm::from_cycles(
            7,
            &[alloc::vec![0, 1], alloc::vec![2, 3], alloc::vec![4, 5, 6]],
        )
        .unwrap();
        let root = ok.square_root().unwrap();
        assert_eq!(root.compose(&root), ok);
    }

    #[test]
    fn group_order_closes_small_groups() {
        let tau = Perm::from_cycles(2, &[alloc::vec![0, 1]]).unwrap();
        assert_eq!(group_order(&[tau], 100), Some(2));
        let s3 = [
            Perm::from_cycles(3, &[alloc::vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[alloc::vec![0, 1, 2]]).unwrap(),
        ];
        assert_eq!(group_order(&s3, 100), Some(6));
        assert_eq!(group_order(&s3, 3), None);
    }

    #[test]
    fn conjugator_conjugates() {
        let p = Perm::from_cycles(5, &[alloc::vec![0, 1, 2]]).unwrap();
        let q = Perm::from_cycles(5, &[alloc::vec![2, 3, 4]]).unwrap();
        let s = conjugator(&p, &q).unwrap();
        assert_eq!(s.inverse().compose(&p).compose(&s), q);
        let r = Perm::from_cycles(5, &[alloc::vec![0, 1]]).unwrap();
        assert!(conjugator(&p, &r).is_none());
    }
}
