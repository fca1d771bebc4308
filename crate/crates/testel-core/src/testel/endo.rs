//! Exhaustive endomorphism search for fixers: endomorphisms fixing a word
//! without being automorphisms. A found witness yields a negative
//! certificate; exhaustion yields unknown at the recorded bound.
//!
//! The free case enumerates all image tuples up to the length bound and
//! tests surjectivity by folding. The surface case enumerates only tuples
//! that provably kill the relator, and proves non-automorphy through the
//! abelianization determinant or a finite quotient, reporting unknown
//! otherwise.

use alloc::vec::Vec;

use crate::stallings::Endomorphism;
use crate::surface::{
    evaluate_word, group_order, sample_quotients, DehnReducer, Perm, SurfaceKind,
    SurfacePresentation,
};
use crate::word::{ball, Word};

use super::{Certificate, TestelError};

/// Tuple-count guard for the surface enumeration.
pub const DEFAULT_MAX_TUPLES: usize = 30_000_000;

/// Searches endomorphisms with image lengths at most `bound` for one fixing
/// `w` without being an automorphism.
pub fn endo_fixer_search(
    w: &Word,
    bound: usize,
    pres: Option<&SurfacePresentation>,
) -> Certificate {
    let witness = match pres {
        None => free_fixer(w, bound),
        Some(p) => {
            let vetter =
                SurfaceEndoVetter::new(p, bound).expect("surface vetting within desk scale");
            vetter.find_fixer(w)
        }
    };
    match witness {
        Some(witness) => Certificate::Negative {
            witness,
            search_bound: bound,
        },
        None => Certificate::Unknown {
            search_bound: bound,
        },
    }
}

/// Steps a mixed-radix index vector in row-major order (last coordinate
/// fastest); false once exhausted.
fn next_tuple(indices: &mut [usize], radix: usize) -> bool {
    for slot in indices.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// First fixer of `w` in the free group, scanning image tuples in
/// lexicographic (ball) order so the reported witness is least.
pub(crate) fn free_fixer(w: &Word, bound: usize) -> Option<Endomorphism> {
    let rank = w.rank();
    let pool: Vec<Word> = ball(rank, bound).collect();
    let mut indices = alloc::vec![0usize; rank];
    loop {
        let mut image = Word::identity(rank);
        for &l in w.letters() {
            let img = &pool[indices[l.index() - 1]];
            image = if l.is_positive() {
                image.multiply(img)
            } else {
                image.multiply(&img.inverse())
            };
        }
        if image == *w {
            let endo = Endomorphism::new(indices.iter().map(|&i| pool[i].clone()).collect());
            if !endo.is_surjective() {
                return Some(endo);
            }
        }
        if !next_tuple(&mut indices, pool.len()) {
            return None;
        }
    }
}

fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    // fraction-free Gaussian elimination (Bareiss)
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Relator-respecting endomorphisms with short images, cached once and
/// replayed against many candidate words.
///
/// Fix checks run through two sound filters (induced abelianization map,
/// probe quotients) before the full word-problem comparison.
pub struct SurfaceEndoVetter {
    pres: SurfacePresentation,
    bound: usize,
    reducer: DehnReducer,
    pool: Vec<Word>,
    /// exponent vector of each pool word
    pool_exponents: Vec<Vec<i64>>,
    /// per probe, image of each pool word
    pool_probe_images: Vec<Vec<Perm>>,
    probes: Vec<Vec<Perm>>,
    /// image tuples (pool indices) whose relator image is provably trivial
    endos: Vec<Vec<u16>>,
}

impl SurfaceEndoVetter {
    pub fn new(pres: &SurfacePresentation, bound: usize) -> Result<SurfaceEndoVetter, TestelError> {
        SurfaceEndoVetter::with_max_tuples(pres, bound, DEFAULT_MAX_TUPLES)
    }

    pub fn with_max_tuples(
        pres: &SurfacePresentation,
        bound: usize,
        max_tuples: usize,
    ) -> Result<SurfaceEndoVetter, TestelError> {
        let rank = pres.alphabet_rank();
        let reducer = DehnReducer::new(pres);
        let pool: Vec<Word> = ball(rank, bound).collect();
        let tuple_count = pool
            .len()
            .checked_pow(rank as u32)
            .filter(|&c| c <= max_tuples);
        if tuple_count.is_none() {
            return Err(TestelError::ResourceCap {
                what: "endomorphism tuples",
                limit: max_tuples,
            });
        }

        let probes = sample_quotients(pres, 6, 3, 0xbead_5eed);
        let pool_exponents: Vec<Vec<i64>> = pool.iter().map(Word::exponent_vector).collect();
        let pool_probe_images: Vec<Vec<Perm>> = probes
            .iter()
            .map(|probe| pool.iter().map(|img| evaluate_word(probe, img)).collect())
            .collect();

        // relator image per tuple, assembled from per-handle pieces
        let endos = match pres.kind {
            SurfaceKind::Orientable => {
                // piece table: Dehn-reduced commutators of pool pairs
                let m = pool.len();
                let mut com: Vec<Word> = Vec::with_capacity(m * m);
                for a in &pool {
                    for b in &pool {
                        let raw = a.multiply(b).multiply(&a.inverse()).multiply(&b.inverse());
                        com.push(reducer.reduce(&raw));
                    }
                }
                let mut endos = Vec::new();
                let mut indices = alloc::vec![0usize; rank];
                loop {
                    let mut trivial = true;
                    let mut acc: Option<Word> = None;
                    for h in 0..pres.genus {
                        let piece = &com[indices[2 * h] * m + indices[2 * h + 1]];
                        if piece.is_identity() {
                            continue;
                        }
                        acc = Some(match acc {
                            None => piece.clone(),
                            Some(word) => word.multiply(piece),
                        });
                        trivial = false;
                    }
                    if !trivial {
                        trivial = match acc {
                            Some(word) => reducer.reduce(&word).is_identity(),
                            None => true,
                        };
                    }
                    if trivial {
                        endos.push(indices.iter().map(|&i| i as u16).collect());
                    }
                    if !next_tuple(&mut indices, m) {
                        break;
                    }
                }
                endos
            }
            SurfaceKind::NonOrientable => {
                let squares: Vec<Word> = pool
                    .iter()
                    .map(|img| reducer.reduce(&img.multiply(img)))
                    .collect();
                let mut endos = Vec::new();
                let mut indices = alloc::vec![0usize; rank];
                loop {
                    let mut acc: Option<Word> = None;
                    for &idx in indices.iter() {
                        let piece = &squares[idx];
                        if piece.is_identity() {
                            continue;
                        }
                        acc = Some(match acc {
                            None => piece.clone(),
                            Some(word) => word.multiply(piece),
                        });
                    }
                    let trivial = match acc {
                        None => true,
                        Some(word) => reducer.reduce(&word).is_identity(),
                    };
                    if trivial {
                        endos.push(indices.iter().map(|&i| i as u16).collect());
                    }
                    if !next_tuple(&mut indices, pool.len()) {
                        break;
                    }
                }
                endos
            }
        };

        Ok(SurfaceEndoVetter {
            pres: *pres,
            bound,
            reducer,
            pool,
            pool_exponents,
            pool_probe_images,
            probes,
            endos,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn endo_count(&self) -> usize {
        self.endos.len()
    }

    fn build_endo(&self, tuple: &[u16]) -> Endomorphism {
        Endomorphism::new(
            tuple
                .iter()
                .map(|&i| self.pool[i as usize].clone())
                .collect(),
        )
    }

    /// The working abelianization matrix whose invertibility over Z is
    /// necessary for an automorphism: the full exponent matrix in the
    /// orientable case, the matrix on the torsion-free quotient in the
    /// non-orientable case.
    fn working_matrix(&self, tuple: &[u16]) -> Vec<Vec<i128>> {
        let rank = self.pres.alphabet_rank();
        match self.pres.kind {
            SurfaceKind::Orientable => (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| self.pool_exponents[tuple[j] as usize][i] as i128)
                        .collect()
                })
                .collect(),
            SurfaceKind::NonOrientable => {
                let n = self.pres.genus;
                (0..n - 1)
                    .map(|i| {
                        (0..n - 1)
                            .map(|j| {
                                let e = &self.pool_exponents[tuple[j] as usize];
                                (e[i] - e[n - 1]) as i128
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// Sound non-automorphism proof: non-unit abelianization determinant, or
    /// a probe quotient where the images generate a strictly smaller group.
    fn proves_non_automorphism(&self, tuple: &[u16]) -> bool {
        let det = determinant(self.working_matrix(tuple));
        if det.abs() != 1 {
            return true;
        }
        for probe in &self.probes {
            let full = group_order(probe, 100_000);
            let image: Vec<Perm> = tuple
                .iter()
                .map(|&i| {
                    let word = &self.pool[i as usize];
                    evaluate_word(probe, word)
                })
                .collect();
            let sub = group_order(&image, 100_000);
            if let (Some(full), Some(sub)) = (full, sub) {
                if sub < full {
                    return true;
                }
            }
        }
        false
    }

    /// First cached endomorphism that provably fixes `w` and provably fails
    /// to be an automorphism.
    pub fn find_fixer(&self, w: &Word) -> Option<Endomorphism> {
        let e_w = w.exponent_vector();
        let rank = self.pres.alphabet_rank();
        let probe_targets: Vec<Perm> = self
            .probes
            .iter()
            .map(|probe| evaluate_word(probe, w))
            .collect();

        'candidates: for tuple in &self.endos {
            // abelianization must fix the exponent vector
            for i in 0..rank {
                let mut acc = 0i64;
                for j in 0..rank {
                    acc += self.pool_exponents[tuple[j] as usize][i] * e_w[j];
                }
                if acc != e_w[i] {
                    continue 'candidates;
                }
            }
            // probe quotients must agree
            for (k, probe_pool) in self.pool_probe_images.iter().enumerate() {
                let degree = probe_targets[k].degree();
                let mut acc = Perm::identity(degree);
                for &l in w.letters() {
                    let img = &probe_pool[tuple[l.index() - 1] as usize];
                    acc = if l.is_positive() {
                        acc.compose(img)
                    } else {
                        acc.compose(&img.inverse())
                    };
                }
                if acc != probe_targets[k] {
                    continue 'candidates;
                }
            }
            // full check: the image must provably equal w in the group
            let endo = self.build_endo(tuple);
            let image = endo.apply(w);
            if !self
                .reducer
                .reduce(&image.multiply(&w.inverse()))
                .is_identity()
            {
                continue;
            }
            if self.proves_non_automorphism(tuple) {
                return Some(endo);
            }
        }
        None
    }
}
