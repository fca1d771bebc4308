//! Mod-p Frattini-layer calculus.
//!
//! The first layer is decided by exponent functionals. The second layer is
//! decided inside the layer-one preimage subgroup: build its covering graph
//! (one coset per functional vector), rewrite in Schreier generators, and
//! test the resulting exponent vector against the span of the relator
//! boundaries. For surface presentations that span is nontrivial, and its
//! complement cuts the raw Schreier generating set down to a minimal one.

use alloc::vec::Vec;

use crate::stallings::{SchreierBasis, StallingsError, SubgroupGraph, Transversal};
use crate::surface::{exponent_sums, SurfaceKind, SurfacePresentation};
use crate::word::Word;

use super::TestelError;

/// Desk-scale cap on covering degree (the cost driver is the boundary-row
/// elimination, quadratic in this).
pub const DEFAULT_MAX_COSETS: usize = 5000;

/// Is every mod-p exponent functional of `w` zero?
pub fn in_frattini(
    w: &Word,
    p: u32,
    pres: Option<&SurfacePresentation>,
) -> Result<bool, TestelError> {
    if p < 2 {
        return Err(TestelError::BadParameter("prime must be at least 2"));
    }
    Ok(exponent_sums(w, pres, p)?.is_zero())
}

/// Outcome of the layer-one adjustment `u = w * x1^a1 ... xm^am`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustResult {
    pub word: Word,
    /// Chosen residues in `0..p`, one per functional.
    pub alpha: Vec<u8>,
    /// Index (1-based) where the free-group sign trick replaced `a_j` by
    /// `a_j - p` to dodge a trivial product.
    pub flipped: Option<usize>,
}

impl AdjustResult {
    /// Letters appended on top of the input word; the flipped exponent
    /// `a_j - p` contributes `p - a_j`.
    pub fn cost(&self, p: u32) -> u64 {
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if self.flipped == Some(i + 1) {
                    p as u64 - a as u64
                } else {
                    a as u64
                }
            })
            .sum()
    }
}

/// Multiplies `w` on the right by generator powers so every mod-p functional
/// vanishes. In the free case a trivial product is dodged by flipping the
/// sign of the lowest nonzero exponent (`a_j - p` has the same residue), so
/// the output is never the identity when `w` is not.
pub fn frattini_adjust(
    w: &Word,
    p: u32,
    pres: Option<&SurfacePresentation>,
) -> Result<AdjustResult, TestelError> {
    if p < 2 {
        return Err(TestelError::BadParameter("prime must be at least 2"));
    }
    let sums = exponent_sums(w, pres, p)?;
    let alpha: Vec<u8> = sums
        .entries
        .iter()
        .map(|&e| ((p as i64 - e) % p as i64) as u8)
        .collect();

    let build = |flip: Option<usize>| -> Word {
        let mut u = w.clone();
        for (i, &a) in alpha.iter().enumerate() {
            let exponent = if flip == Some(i + 1) {
                a as i64 - p as i64
            } else {
                a as i64
            };
            if exponent != 0 {
                u = u.multiply(&Word::generator(w.rank(), i + 1).pow(exponent));
            }
        }
        u
    };

    let first = build(None);
    if pres.is_none() && !w.is_identity() && first.is_identity() {
        let j = alpha
            .iter()
            .position(|&a| a != 0)
            .map(|i| i + 1)
            .expect("w = product of powers");
        let second = build(Some(j));
        return Ok(AdjustResult {
            word: second,
            alpha,
            flipped: Some(j),
        });
    }
    Ok(AdjustResult {
        word: first,
        alpha,
        flipped: None,
    })
}

fn add_mod(a: u8, b: u8, p: u8) -> u8 {
    let s = a as u16 + b as u16;
    (s % p as u16) as u8
}

fn sub_mod(a: u8, b: u8, p: u8) -> u8 {
    ((a as i16 - b as i16).rem_euclid(p as i16)) as u8
}

fn mul_mod(a: u8, b: u8, p: u8) -> u8 {
    ((a as u16 * b as u16) % p as u16) as u8
}

fn inv_mod(a: u8, p: u8) -> u8 {
    // p is a small prime: a^(p-2)
    let mut acc = 1u8;
    for _ in 0..p - 2 {
        acc = mul_mod(acc, a, p);
    }
    acc
}

/// The layer-one preimage subgroup with everything needed for layer-two
/// tests: covering graph, transversal, raw Schreier generators, the mod-p
/// span of the relator boundaries in echelon form, and the minimal
/// generating set (raw generators at non-pivot columns).
#[derive(Debug)]
pub struct FrattiniLayer {
    p: u32,
    rank: usize,
    graph: SubgroupGraph,
    transversal: Transversal,
    basis: SchreierBasis,
    /// Row-echelon basis of the boundary span: (pivot column, row) with rows
    /// normalized to a leading 1, sorted by pivot.
    echelon: Vec<(usize, Vec<u8>)>,
    /// Raw generator ids whose classes form a basis of the layer quotient.
    minimal: Vec<usize>,
}

impl FrattiniLayer {
    /// Builds the layer for the free group of the given rank (`pres` absent)
    /// or for a surface presentation (whose alphabet rank must match).
    pub fn new(
        pres: Option<&SurfacePresentation>,
        rank: usize,
        p: u32,
    ) -> Result<FrattiniLayer, TestelError> {
        FrattiniLayer::with_max_cosets(pres, rank, p, DEFAULT_MAX_COSETS)
    }

    pub fn with_max_cosets(
        pres: Option<&SurfacePresentation>,
        rank: usize,
        p: u32,
        max_cosets: usize,
    ) -> Result<FrattiniLayer, TestelError> {
        crate::surface::check_modulus(pres, p)?;
        if p < 2 {
            return Err(TestelError::BadParameter("prime must be at least 2"));
        }
        if let Some(s) = pres {
            if s.alphabet_rank() != rank {
                return Err(TestelError::BadParameter(
                    "rank does not match presentation",
                ));
            }
        }
        let functionals = match pres {
            None => rank,
            Some(s) => s.functional_count(),
        };
        let degree = (p as usize)
            .checked_pow(functionals as u32)
            .filter(|&d| d <= max_cosets)
            .ok_or(TestelError::ResourceCap {
                what: "coset count",
                limit: max_cosets,
            })?;

        // per-letter displacement on the functional vectors
        let deltas: Vec<Vec<u8>> = (0..rank)
            .map(|i| {
                let mut d = alloc::vec![0u8; functionals];
                match pres {
                    Some(s) if s.kind == SurfaceKind::NonOrientable => {
                        if i < functionals {
                            d[i] = 1;
                        } else {
                            // the last generator shifts every working
                            // functional by -1
                            for entry in &mut d {
                                *entry = (p - 1) as u8;
                            }
                        }
                    }
                    _ => d[i] = 1,
                }
                d
            })
            .collect();

        let pu = p as usize;
        let graph = SubgroupGraph::from_action(rank, degree, |v, i| {
            let mut out = 0usize;
            let mut stride = 1usize;
            let mut rest = v;
            for &d in &deltas[i] {
                let digit = rest % pu;
                rest /= pu;
                out += ((digit + d as usize) % pu) * stride;
                stride *= pu;
            }
            out
        })?;
        let transversal = graph.schreier_transversal()?;
        let basis = graph.schreier_basis(&transversal);
        let raw = basis.count();

        let mut layer = FrattiniLayer {
            p,
            rank,
            graph,
            transversal,
            basis,
            echelon: Vec::new(),
            minimal: Vec::new(),
        };

        if let Some(s) = pres {
            let relator = s.relator();
            let pb = p as u8;
            for v in 0..degree {
                let mut row = alloc::vec![0u8; raw];
                let end = layer
                    .basis
                    .walk_from(&layer.graph, v, &relator, |id, positive| {
                        row[id] = if positive {
                            add_mod(row[id], 1, pb)
                        } else {
                            sub_mod(row[id], 1, pb)
                        };
                    })
                    .expect("covering graph is complete");
                debug_assert_eq!(end, v, "relator loops at every coset");
                layer.insert_echelon(row);
            }
        }

        let mut pivots = layer.echelon.iter().map(|(pivot, _)| *pivot).peekable();
        for id in 0..raw {
            if pivots.peek() == Some(&id) {
                pivots.next();
            } else {
                layer.minimal.push(id);
            }
        }
        Ok(layer)
    }

    fn insert_echelon(&mut self, mut row: Vec<u8>) {
        let pb = self.p as u8;
        self.reduce_vector(&mut row);
        let Some(lead) = row.iter().position(|&c| c != 0) else {
            return;
        };
        let inv = inv_mod(row[lead], pb);
        for c in &mut row {
            *c = mul_mod(*c, inv, pb);
        }
        let at = self.echelon.partition_point(|(pivot, _)| *pivot < lead);
        self.echelon.insert(at, (lead, row));
    }

    /// Subtracts echelon rows (ascending pivots) so every pivot coordinate of
    /// `vector` becomes zero.
    fn reduce_vector(&self, vector: &mut [u8]) {
        let pb = self.p as u8;
        for (pivot, row) in &self.echelon {
            let c = vector[*pivot];
            if c == 0 {
                continue;
            }
            for (x, &r) in vector.iter_mut().zip(row.iter()) {
                *x = sub_mod(*x, mul_mod(c, r, pb), pb);
            }
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    /// All non-tree-edge Schreier generators (free-subgroup count).
    pub fn raw_count(&self) -> usize {
        self.basis.count()
    }

    /// Size of the minimal generating set of the layer subgroup.
    pub fn minimal_count(&self) -> usize {
        self.minimal.len()
    }

    pub fn minimal_generator(&self, j: usize) -> &Word {
        &self.basis.generators()[self.minimal[j]]
    }

    pub fn minimal_generators(&self) -> Vec<Word> {
        self.minimal
            .iter()
            .map(|&id| self.basis.generators()[id].clone())
            .collect()
    }

    pub fn max_generator_len(&self) -> usize {
        self.minimal
            .iter()
            .map(|&id| self.basis.generators()[id].len())
            .max()
            .unwrap_or(0)
    }

    /// Rewriting exponent vector of `w` over the raw Schreier alphabet,
    /// mod p. Errors if `w` is not in the layer subgroup.
    fn raw_vector(&self, w: &Word) -> Result<Vec<u8>, TestelError> {
        let pb = self.p as u8;
        let mut vector = alloc::vec![0u8; self.raw_count()];
        self.basis
            .walk(&self.graph, w, |id, positive| {
                vector[id] = if positive {
                    add_mod(vector[id], 1, pb)
                } else {
                    sub_mod(vector[id], 1, pb)
                };
            })
            .map_err(|e| match e {
                StallingsError::NotInSubgroup => TestelError::NotInFrattini,
                other => TestelError::Stallings(other),
            })?;
        Ok(vector)
    }

    /// Coordinates of `w` in the layer quotient, in the minimal generator
    /// basis: the residual after reducing the rewriting vector by the
    /// boundary span. All zero exactly when `w` lies in the second layer.
    pub fn coordinates(&self, w: &Word) -> Result<Vec<u8>, TestelError> {
        let mut vector = self.raw_vector(w)?;
        self.reduce_vector(&mut vector);
        debug_assert!(self.echelon.iter().all(|(pivot, _)| vector[*pivot] == 0));
        Ok(self.minimal.iter().map(|&id| vector[id]).collect())
    }

    pub fn in_second_layer(&self, w: &Word) -> Result<bool, TestelError> {
        Ok(self.coordinates(w)?.iter().all(|&c| c == 0))
    }
}

/// Is `w` in the second Frattini layer? Requires `w` to be in the first.
pub fn in_frattini2(
    w: &Word,
    p: u32,
    pres: Option<&SurfacePresentation>,
) -> Result<bool, TestelError> {
    let layer = FrattiniLayer::new(pres, w.rank(), p)?;
    layer.in_second_layer(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, codes: &[i32]) -> Word {
        Word::from_codes(rank, codes).unwrap()
    }

    #[test]
    fn first_layer_membership_is_the_functional_test() {
        assert!(in_frattini(&w(2, &[1, 2, -1, -2]), 2, None).unwrap());
        assert!(!in_frattini(&Word::generator(2, 1), 2, None).unwrap());

        let or2 = SurfacePresentation::orientable(2).unwrap();
        let fifth_powers = super::super::canonical_test_word(4, 5);
        assert!(in_frattini(&fifth_powers, 5, Some(&or2)).unwrap());
        assert!(!in_frattini(&Word::generator(4, 1), 5, Some(&or2)).unwrap());
    }

    #[test]
    fn adjustment_lands_in_the_layer_and_dodges_trivial_products() {
        // already inside: untouched
        let inside = w(2, &[1, 2, -1, -2]);
        let adj = frattini_adjust(&inside, 2, None).unwrap();
        assert_eq!(adj.word, inside);
        assert_eq!(adj.alpha, alloc::vec![0, 0]);

        // w = x1: u = x1^2
        let adj = frattini_adjust(&Word::generator(2, 1), 2, None).unwrap();
        assert_eq!(adj.word, w(2, &[1, 1]));
        assert_eq!(adj.flipped, None);

        // w = x1^-1: the first product cancels, the sign trick flips it
        let adj = frattini_adjust(&w(2, &[-1]), 2, None).unwrap();
        assert_eq!(adj.word, w(2, &[-1, -1]));
        assert_eq!(adj.flipped, Some(1));
        assert!(in_frattini(&adj.word, 2, None).unwrap());

        // surface case appends plain residues
        let or2 = SurfacePresentation::orientable(2).unwrap();
        let adj = frattini_adjust(&Word::generator(4, 1), 5, Some(&or2)).unwrap();
        assert!(in_frattini(&adj.word, 5, Some(&or2)).unwrap());
        assert_eq!(adj.alpha, alloc::vec![4, 0, 0, 0]);
    }

    #[test]
    fn free_layer_counts_match_nielsen_schreier() {
        let layer = FrattiniLayer::new(None, 2, 2).unwrap();
        assert_eq!(layer.graph().vertex_count(), 4);
        assert_eq!(layer.raw_count(), 5);
        assert_eq!(layer.minimal_count(), 5); // no relator rows for free groups

        let layer3 = FrattiniLayer::new(None, 2, 3).unwrap();
        assert_eq!(layer3.raw_count(), 1 + 9);
    }

    #[test]
    fn second_layer_membership_in_the_free_group() {
        assert!(in_frattini2(&Word::identity(2), 2, None).unwrap());
        assert!(!in_frattini2(&w(2, &[1, 1]), 2, None).unwrap());
        assert!(in_frattini2(&w(2, &[1, 1, 1, 1]), 2, None).unwrap());
        assert_eq!(
            in_frattini2(&Word::generator(2, 1), 2, None).unwrap_err(),
            TestelError::NotInFrattini
        );
    }

    #[test]
    fn basis_letter_powers_straddle_the_second_layer() {
        for p in [2u32, 3] {
            for rank in [2usize, 3] {
                let layer = FrattiniLayer::new(None, rank, p).unwrap();
                for i in 1..=rank {
                    let xp = Word::generator(rank, i).pow(p as i64);
                    let xpp = Word::generator(rank, i).pow((p * p) as i64);
                    assert!(!layer.in_second_layer(&xp).unwrap());
                    assert!(layer.in_second_layer(&xpp).unwrap());
                }
            }
        }
    }

    #[test]
    fn orientable_layer_matches_the_subgroup_rank_formula() {
        // genus 2 at p = 3: 81 cosets, raw 1 + 81*3, minimal 2 + 81*(4-2)
        let or2 = SurfacePresentation::orientable(2).unwrap();
        let layer = FrattiniLayer::new(Some(&or2), 4, 3).unwrap();
        assert_eq!(layer.graph().vertex_count(), 81);
        assert_eq!(layer.raw_count(), 1 + 81 * 3);
        assert_eq!(layer.minimal_count(), 2 + 81 * 2);
        // relator boundaries satisfy exactly one relation (orientable cover)
        assert_eq!(layer.echelon.len(), 81 - 1);
    }

    #[test]
    fn nonorientable_layer_matches_the_free_prop_rank_formula() {
        // genus 3 at p = 3: working rank 2, 9 cosets, raw 1 + 9*2,
        // minimal 1 + 9*(2-1); the boundary rows are independent
        let nonor3 = SurfacePresentation::non_orientable(3).unwrap();
        let layer = FrattiniLayer::new(Some(&nonor3), 3, 3).unwrap();
        assert_eq!(layer.graph().vertex_count(), 9);
        assert_eq!(layer.raw_count(), 19);
        assert_eq!(layer.minimal_count(), 10);
        assert_eq!(layer.echelon.len(), 9);
    }

    #[test]
    fn layer_coordinates_are_dual_to_the_minimal_generators() {
        let or2 = SurfacePresentation::orientable(2).unwrap();
        let layer = FrattiniLayer::new(Some(&or2), 4, 3).unwrap();
        for j in [0usize, 1, 57, layer.minimal_count() - 1] {
            let y = layer.minimal_generator(j).clone();
            let coords = layer.coordinates(&y).unwrap();
            for (i, c) in coords.iter().enumerate() {
                assert_eq!(*c, u8::from(i == j), "generator {j} coordinate {i}");
            }
        }
    }

    #[test]
    fn resource_cap_is_enforced() {
        let err = FrattiniLayer::with_max_cosets(None, 2, 101, 5000).unwrap_err();
        assert!(matches!(err, TestelError::ResourceCap { .. }));
    }
}
