//! Net projections: given any word, produce a nearby test-element candidate
//! within the explicit distance bound for its group.
//!
//! Free groups use the mod-2 layer adjustment plus appended squares of a
//! proper basis subset (bound `3n - 2`). Orientable surface groups run the
//! two-layer mod-5 pipeline with appended 25th powers. Non-orientable
//! surface groups mirror the free construction over the rank-(n-1) working
//! basis at p = 3 (bound `5n - 5`).
//!
//! Appended subsets are chosen by enumeration in increasing cardinality and
//! vetted against the endomorphism fixer search; the distance bound holds
//! for every candidate, so vetting only filters.

use alloc::vec::Vec;

use crate::surface::{is_trivial_with, DehnReducer, QuotientBudget, SurfacePresentation, Verdict};
use crate::word::{Letter, Word};

use super::endo::{free_fixer, SurfaceEndoVetter};
use super::frattini::{frattini_adjust, FrattiniLayer, DEFAULT_MAX_COSETS};
use super::{canonical_test_word, TestelError};

/// Default endomorphism vetting bound for appended-subset candidates.
pub const DEFAULT_VET_BOUND: usize = 2;

/// Which layer-adjustment branch produced the intermediate word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjustBranch {
    /// All functionals already vanished.
    AlreadyInLayer,
    /// Plain right-multiplication by generator powers.
    Appended,
    /// The free-group sign trick replaced `a_j` by `a_j - p` (1-based index).
    SignFlipped { index: usize },
    /// Trivial input: the canonical power word was emitted directly.
    Canonical,
}

/// Construction record: exponents chosen at each step, the appended subset,
/// and the per-step letter costs whose sum bounds the distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetTrace {
    pub prime: u32,
    pub alpha: Vec<u8>,
    pub branch: AdjustBranch,
    /// Layer-two correction exponents (surface pipeline only).
    pub beta: Option<Vec<u8>>,
    /// 1-based generator indices of the appended power subset.
    pub subset: Vec<usize>,
    pub vet_bound: usize,
    pub alpha_cost: u64,
    pub beta_cost: u64,
    pub subset_cost: u64,
}

impl NetTrace {
    pub fn total_cost(&self) -> u64 {
        self.alpha_cost + self.beta_cost + self.subset_cost
    }
}

/// A test-element candidate close to the input.
///
/// For free groups `distance` is the exact word metric `|input^-1 output|`;
/// for surface groups it is the trace-cost upper bound (geodesics there are
/// out of scope), in both cases at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetResult {
    pub input: Word,
    pub output: Word,
    pub distance: u64,
    pub bound: u64,
    pub trace: NetTrace,
}

/// Subsets of `{1, ..., pool}` in increasing cardinality, lexicographic
/// within a cardinality; optionally only proper ones.
pub(crate) fn subsets_ordered(pool: usize, proper: bool) -> Vec<Vec<usize>> {
    assert!(pool < 20, "subset pool out of desk range");
    let mut all: Vec<Vec<usize>> = (0u32..1 << pool)
        .map(|mask| {
            (0..pool)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect()
        })
        .collect();
    if proper {
        all.retain(|s| s.len() < pool);
    }
    all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    all
}

pub fn free_net_bound(rank: usize) -> u64 {
    (3 * rank - 2) as u64
}

/// Free-group recipe: mod-2 adjustment, then squares of the first proper
/// basis subset surviving the fixer vetting.
pub fn net_project_free(w: &Word, rank: usize) -> Result<NetResult, TestelError> {
    net_project_free_with(w, rank, DEFAULT_VET_BOUND)
}

pub fn net_project_free_with(
    w: &Word,
    rank: usize,
    vet_bound: usize,
) -> Result<NetResult, TestelError> {
    if rank < 2 {
        return Err(TestelError::BadParameter("free net needs rank at least 2"));
    }
    if w.rank() != rank {
        return Err(TestelError::BadParameter("word rank does not match"));
    }
    let bound = free_net_bound(rank);

    if w.is_identity() {
        let output = canonical_test_word(rank, 2);
        let distance = output.len() as u64;
        return Ok(NetResult {
            input: w.clone(),
            output,
            distance,
            bound,
            trace: NetTrace {
                prime: 2,
                alpha: alloc::vec![0; rank],
                branch: AdjustBranch::Canonical,
                beta: None,
                subset: (1..=rank).collect(),
                vet_bound,
                alpha_cost: 0,
                beta_cost: 0,
                subset_cost: 2 * rank as u64,
            },
        });
    }

    let adj = frattini_adjust(w, 2, None)?;
    debug_assert!(!adj.word.is_identity());
    let branch = match adj.flipped {
        Some(index) => AdjustBranch::SignFlipped { index },
        None if adj.alpha.iter().all(|&a| a == 0) => AdjustBranch::AlreadyInLayer,
        None => AdjustBranch::Appended,
    };
    let alpha_cost = adj.cost(2);

    for subset in subsets_ordered(rank, true) {
        let mut t = adj.word.clone();
        for &i in &subset {
            t = t.multiply(&Word::generator(rank, i).pow(2));
        }
        if t.is_identity() {
            continue;
        }
        if free_fixer(&t, vet_bound).is_none() {
            let distance = w.distance(&t) as u64;
            debug_assert!(distance <= bound);
            let subset_cost = 2 * subset.len() as u64;
            return Ok(NetResult {
                input: w.clone(),
                output: t,
                distance,
                bound,
                trace: NetTrace {
                    prime: 2,
                    alpha: adj.alpha,
                    branch,
                    beta: None,
                    subset,
                    vet_bound,
                    alpha_cost,
                    beta_cost: 0,
                    subset_cost,
                },
            });
        }
    }
    Err(TestelError::SubsetSearchExhausted)
}

/// Trace-cost bound of the orientable pipeline: layer-one corrections, k
/// layer-two generator corrections of bounded length, and p^2-th powers on
/// at most n+1 generators. At p = 5 this is the (161n + 8*25^n(n-1)(16n+1)
/// + 33)-net constant.
pub fn orientable_net_bound(genus: usize, p: u32) -> u64 {
    let n = genus as u64;
    let p = p as u64;
    let k = 2 + p.pow(2 * genus as u32) * (2 * n - 2);
    let max_len = 4 * n * (p - 1) + 1;
    2 * n * (p - 1) + (p - 1) * k * max_len + p * p * (n + 1)
}

pub fn nonorientable_net_bound(genus: usize) -> u64 {
    (5 * genus - 5) as u64
}

/// The orientable pipeline with its covering layer and endomorphism vetting
/// cache built once; projections then share them.
pub struct OrientableNet {
    pres: SurfacePresentation,
    p: u32,
    vet_bound: usize,
    layer: FrattiniLayer,
    vetter: SurfaceEndoVetter,
    reducer: DehnReducer,
    bound: u64,
}

impl OrientableNet {
    pub fn new(genus: usize, p: u32) -> Result<OrientableNet, TestelError> {
        OrientableNet::with_options(genus, p, DEFAULT_VET_BOUND, DEFAULT_MAX_COSETS)
    }

    pub fn with_options(
        genus: usize,
        p: u32,
        vet_bound: usize,
        max_cosets: usize,
    ) -> Result<OrientableNet, TestelError> {
        if p < 5 || !crate::surface::is_prime(p) {
            return Err(TestelError::BadParameter(
                "orientable net needs a prime p >= 5",
            ));
        }
        let pres = SurfacePresentation::orientable(genus)?;
        let layer =
            FrattiniLayer::with_max_cosets(Some(&pres), pres.alphabet_rank(), p, max_cosets)?;
        let vetter = SurfaceEndoVetter::new(&pres, vet_bound)?;
        let reducer = DehnReducer::new(&pres);
        let bound = orientable_net_bound(genus, p);
        Ok(OrientableNet {
            pres,
            p,
            vet_bound,
            layer,
            vetter,
            reducer,
            bound,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn layer(&self) -> &FrattiniLayer {
        &self.layer
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.pres
    }

    /// Orientable recipe: mod-p adjustment, layer-two correction over the
    /// minimal Schreier generators, then p^2-th powers of a subset of
    /// `{x1, ..., x_{n+1}}`.
    pub fn project(&self, w: &Word) -> Result<NetResult, TestelError> {
        let rank = self.pres.alphabet_rank();
        if w.rank() != rank {
            return Err(TestelError::BadParameter("word rank does not match"));
        }
        let p = self.p;

        let adj = frattini_adjust(w, p, Some(&self.pres))?;
        let branch = if adj.alpha.iter().all(|&a| a == 0) {
            AdjustBranch::AlreadyInLayer
        } else {
            AdjustBranch::Appended
        };
        let alpha_cost = adj.cost(p);

        let coords = self.layer.coordinates(&adj.word)?;
        let beta: Vec<u8> = coords.iter().map(|&c| (p as u8 - c) % p as u8).collect();
        let mut raw: Vec<Letter> = adj.word.letters().to_vec();
        let mut beta_cost = 0u64;
        for (i, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let y = self.layer.minimal_generator(i);
            beta_cost += b as u64 * y.len() as u64;
            for _ in 0..b {
                raw.extend_from_slice(y.letters());
            }
        }
        let v = Word::from_letters(rank, raw).expect("letters stay in range");
        debug_assert!(self.layer.in_second_layer(&v).unwrap_or(false));

        for subset in subsets_ordered(self.pres.genus + 1, false) {
            let mut t = v.clone();
            for &i in &subset {
                t = t.multiply(&Word::generator(rank, i).pow((p * p) as i64));
            }
            if self.reducer.reduce(&t).is_identity() {
                continue;
            }
            if self.vetter.find_fixer(&t).is_none() {
                let subset_cost = (p * p) as u64 * subset.len() as u64;
                let trace = NetTrace {
                    prime: p,
                    alpha: adj.alpha,
                    branch,
                    beta: Some(beta),
                    subset,
                    vet_bound: self.vet_bound,
                    alpha_cost,
                    beta_cost,
                    subset_cost,
                };
                let distance = trace.total_cost();
                debug_assert!(distance <= self.bound);
                return Ok(NetResult {
                    input: w.clone(),
                    output: t,
                    distance,
                    bound: self.bound,
                    trace,
                });
            }
        }
        Err(TestelError::SubsetSearchExhausted)
    }
}

/// One-shot orientable projection (builds the layer and vetting cache; use
/// [`OrientableNet`] to amortize them).
pub fn net_project_orientable(w: &Word, genus: usize, p: u32) -> Result<NetResult, TestelError> {
    OrientableNet::new(genus, p)?.project(w)
}

/// The non-orientable mirror of the free construction over the working
/// basis `x1, ..., x_{n-1}` at p = 3.
pub struct NonOrientableNet {
    pres: SurfacePresentation,
    vet_bound: usize,
    vetter: SurfaceEndoVetter,
    reducer: DehnReducer,
    budget: QuotientBudget,
    bound: u64,
}

impl NonOrientableNet {
    pub fn new(genus: usize) -> Result<NonOrientableNet, TestelError> {
        NonOrientableNet::with_options(genus, DEFAULT_VET_BOUND)
    }

    pub fn with_options(genus: usize, vet_bound: usize) -> Result<NonOrientableNet, TestelError> {
        let pres = SurfacePresentation::non_orientable(genus)?;
        let vetter = SurfaceEndoVetter::new(&pres, vet_bound)?;
        let reducer = DehnReducer::new(&pres);
        Ok(NonOrientableNet {
            pres,
            vet_bound,
            vetter,
            reducer,
            budget: QuotientBudget::default(),
            bound: nonorientable_net_bound(genus),
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.pres
    }

    fn is_trivial(&self, w: &Word) -> Verdict {
        is_trivial_with(&self.reducer, w, &self.pres, &self.budget)
    }

    /// Non-orientable recipe: cubes of the working basis for trivial input,
    /// otherwise the mod-3 adjustment (with the sign trick driven by the
    /// word-problem oracle) plus cubes of a proper working subset.
    pub fn project(&self, w: &Word) -> Result<NetResult, TestelError> {
        let rank = self.pres.alphabet_rank();
        if w.rank() != rank {
            return Err(TestelError::BadParameter("word rank does not match"));
        }
        let working = self.pres.genus - 1;
        let p = 3u32;

        if self.is_trivial(w) == Verdict::Yes {
            let mut output = Word::identity(rank);
            for i in 1..=working {
                output = output.multiply(&Word::generator(rank, i).pow(3));
            }
            let trace = NetTrace {
                prime: p,
                alpha: alloc::vec![0; working],
                branch: AdjustBranch::Canonical,
                beta: None,
                subset: (1..=working).collect(),
                vet_bound: self.vet_bound,
                alpha_cost: 0,
                beta_cost: 0,
                subset_cost: 3 * working as u64,
            };
            let distance = trace.total_cost();
            return Ok(NetResult {
                input: w.clone(),
                output,
                distance,
                bound: self.bound,
                trace,
            });
        }

        let adj = frattini_adjust(w, p, Some(&self.pres))?;
        let mut u = adj.word.clone();
        let mut branch = if adj.alpha.iter().all(|&a| a == 0) {
            AdjustBranch::AlreadyInLayer
        } else {
            AdjustBranch::Appended
        };
        let mut alpha_cost = adj.cost(p);
        if self.is_trivial(&u) == Verdict::Yes {
            // rebuild with the sign of the lowest nonzero exponent flipped;
            // the two variants differ by a conjugate of a nonzero power, so
            // this one is not trivial
            let j = adj
                .alpha
                .iter()
                .position(|&a| a != 0)
                .expect("a trivial product forces a nonzero adjustment")
                + 1;
            u = w.clone();
            for (i, &a) in adj.alpha.iter().enumerate() {
                let exponent = if i + 1 == j {
                    a as i64 - p as i64
                } else {
                    a as i64
                };
                if exponent != 0 {
                    u = u.multiply(&Word::generator(rank, i + 1).pow(exponent));
                }
            }
            branch = AdjustBranch::SignFlipped { index: j };
            alpha_cost =
                alpha_cost - adj.alpha[j - 1] as u64 + (p as u64 - adj.alpha[j - 1] as u64);
        }

        for subset in subsets_ordered(working, true) {
            let mut t = u.clone();
            for &i in &subset {
                t = t.multiply(&Word::generator(rank, i).pow(3));
            }
            if self.is_trivial(&t) == Verdict::Yes {
                continue;
            }
            if self.vetter.find_fixer(&t).is_none() {
                let subset_cost = 3 * subset.len() as u64;
                let trace = NetTrace {
                    prime: p,
                    alpha: adj.alpha,
                    branch,
                    beta: None,
                    subset,
                    vet_bound: self.vet_bound,
                    alpha_cost,
                    beta_cost: 0,
                    subset_cost,
                };
                let distance = trace.total_cost();
                debug_assert!(distance <= self.bound);
                return Ok(NetResult {
                    input: w.clone(),
                    output: t,
                    distance,
                    bound: self.bound,
                    trace,
                });
            }
        }
        Err(TestelError::SubsetSearchExhausted)
    }
}

/// One-shot non-orientable projection.
pub fn net_project_nonorientable(w: &Word, genus: usize) -> Result<NetResult, TestelError> {
    NonOrientableNet::new(genus)?.project(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::exponent_sums;
    use crate::testel::frattini::in_frattini;

    fn w(rank: usize, codes: &[i32]) -> Word {
        Word::from_codes(rank, codes).unwrap()
    }

    #[test]
    fn identity_projects_to_the_canonical_square_word() {
        let result = net_project_free(&Word::identity(2), 2).unwrap();
        assert_eq!(result.output, w(2, &[1, 1, 2, 2]));
        assert_eq!(result.distance, 4);
        assert_eq!(result.bound, 4);
        assert_eq!(result.trace.branch, AdjustBranch::Canonical);
    }

    #[test]
    fn single_generator_projects_within_the_bound() {
        let result = net_project_free(&Word::generator(2, 1), 2).unwrap();
        assert!(result.distance <= 4);
        assert!(!result.output.is_identity());
        // both exponent sums of the output are even
        let sums = exponent_sums(&result.output, None, 2).unwrap();
        assert!(sums.is_zero());
        // the adjustment doubled x1; the vetted subset adds x2^2
        assert_eq!(result.output, w(2, &[1, 1, 2, 2]));
    }

    #[test]
    fn inverse_generator_takes_the_sign_flip_branch() {
        let result = net_project_free(&w(2, &[-1]), 2).unwrap();
        assert_eq!(result.trace.branch, AdjustBranch::SignFlipped { index: 1 });
        assert!(result.distance <= 4);
        assert!(in_frattini(&result.output, 2, None).unwrap());
    }

    #[test]
    fn product_word_projects_with_distance_within_bound() {
        let input = w(2, &[1, 2]);
        let result = net_project_free(&input, 2).unwrap();
        assert!(result.distance <= 4);
        assert!(in_frattini(&result.output, 2, None).unwrap());
        // independent distance check through the word metric
        assert_eq!(input.distance(&result.output) as u64, result.distance);
    }

    #[test]
    fn already_even_words_keep_their_adjustment_empty() {
        let input = w(2, &[1, 1]);
        let result = net_project_free(&input, 2).unwrap();
        assert_eq!(result.trace.branch, AdjustBranch::AlreadyInLayer);
        // x1^2 itself is fixed by a projection, so the empty subset is
        // rejected and a square lands on top
        assert!(!result.trace.subset.is_empty());
        assert!(result.distance <= 4);
    }

    #[test]
    fn net_bound_constants_evaluate_exactly() {
        assert_eq!(free_net_bound(2), 4);
        assert_eq!(free_net_bound(3), 7);
        // 161n + 8 * 25^n (n-1)(16n+1) + 33 at n = 2
        assert_eq!(orientable_net_bound(2, 5), 165_355);
        assert_eq!(
            orientable_net_bound(3, 5),
            161 * 3 + 8 * 25u64.pow(3) * 2 * 49 + 33
        );
        assert_eq!(nonorientable_net_bound(3), 10);
        assert_eq!(nonorientable_net_bound(4), 15);
    }

    #[test]
    fn nonorientable_identity_projects_to_working_cubes() {
        let net = NonOrientableNet::new(3).unwrap();
        let result = net.project(&Word::identity(3)).unwrap();
        assert_eq!(result.output, w(3, &[1, 1, 1, 2, 2, 2]));
        assert_eq!(result.distance, 6);
        assert_eq!(result.bound, 10);
    }

    #[test]
    fn nonorientable_projection_zeroes_the_working_functionals() {
        let net = NonOrientableNet::new(3).unwrap();
        let pres = SurfacePresentation::non_orientable(3).unwrap();
        for input in [w(3, &[1]), w(3, &[2, -1]), w(3, &[3]), w(3, &[1, 2, 3])] {
            let result = net.project(&input).unwrap();
            assert!(result.distance <= 10, "cost for {input}");
            let sums = exponent_sums(&result.output, Some(&pres), 3).unwrap();
            assert!(sums.is_zero(), "functionals of output for {input}");
        }
    }

    #[test]
    fn genus_four_nonorientable_stays_within_its_bound() {
        let net = NonOrientableNet::with_options(4, 1).unwrap();
        let result = net.project(&Word::generator(4, 1)).unwrap();
        assert!(result.distance <= 15);
        let pres = SurfacePresentation::non_orientable(4).unwrap();
        let sums = exponent_sums(&result.output, Some(&pres), 3).unwrap();
        assert!(sums.is_zero());
    }
}
