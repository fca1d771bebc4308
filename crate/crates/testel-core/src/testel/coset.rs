//! Coset-targeted test-element candidates: given a finite quotient (by
//! generator images in a permutation group), produce a candidate inside the
//! input's kernel coset.
//!
//! All correction exponents are multiples of the quotient order `l`, so each
//! correction lies in the kernel and the coset is preserved; they are chosen
//! so the mod-p functionals vanish layer by layer, for the least admissible
//! prime not dividing `l`.

use alloc::vec::Vec;

use crate::surface::{
    evaluate_word, exponent_sums, group_order, DehnReducer, Perm, SurfaceKind, SurfacePresentation,
};
use crate::word::{Letter, Word};

use super::endo::{free_fixer, SurfaceEndoVetter};
use super::frattini::FrattiniLayer;
use super::net::DEFAULT_VET_BOUND;
use super::TestelError;

/// Cap on the admissible-prime search.
pub const PRIME_SEARCH_CAP: u32 = 10_000;

/// Cap on quotient-group closure.
pub const QUOTIENT_ORDER_CAP: usize = 100_000;

/// A finite quotient given by one permutation image per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpec {
    pub images: Vec<Perm>,
}

/// Construction record for the coset pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTrace {
    pub prime: u32,
    pub quotient_order: u64,
    /// Layer-one multipliers: the i-th correction is `x_i^(r_i * l)`.
    pub r: Vec<u64>,
    /// Layer-two multipliers over the minimal Schreier generators.
    pub s: Vec<u64>,
    /// 1-based generator indices of the appended `p^2 l`-th powers.
    pub subset: Vec<usize>,
    pub vet_bound: usize,
    pub r_cost: u64,
    pub s_cost: u64,
    pub subset_cost: u64,
}

impl CosetTrace {
    pub fn total_cost(&self) -> u64 {
        self.r_cost + self.s_cost + self.subset_cost
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetResult {
    pub input: Word,
    pub output: Word,
    pub trace: CosetTrace,
}

enum Vetter {
    Free { bound: usize },
    Surface(SurfaceEndoVetter),
}

/// The coset pipeline with quotient order, admissible prime, covering layer
/// and vetting cache computed once.
pub struct CosetProjector {
    pres: Option<SurfacePresentation>,
    rank: usize,
    images: Vec<Perm>,
    order: u64,
    prime: u32,
    layer: FrattiniLayer,
    vetter: Vetter,
    reducer: Option<DehnReducer>,
    vet_bound: usize,
}

impl core::fmt::Debug for CosetProjector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "CosetProjector(order {}, prime {})",
            self.order, self.prime
        )
    }
}

fn least_admissible_prime(order: u64, pres: Option<&SurfacePresentation>) -> Option<u32> {
    let floor = match pres.map(|s| s.kind) {
        None => 2,
        Some(SurfaceKind::Orientable) => 5,
        Some(SurfaceKind::NonOrientable) => 3,
    };
    (floor..=PRIME_SEARCH_CAP).find(|&p| {
        crate::surface::is_prime(p)
            && !order.is_multiple_of(p as u64)
            && !(pres.map(|s| s.kind) == Some(SurfaceKind::NonOrientable) && p == 2)
    })
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    // p prime, a not divisible by p
    let mut acc = 1u64;
    let a = a % p;
    for _ in 0..p - 2 {
        acc = acc * a % p;
    }
    acc
}

impl CosetProjector {
    pub fn new(
        pres: Option<&SurfacePresentation>,
        rank: usize,
        quotient: QuotientSpec,
        vet_bound: usize,
    ) -> Result<CosetProjector, TestelError> {
        let images = quotient.images;
        if images.len() != rank || rank == 0 {
            return Err(TestelError::BadParameter(
                "one image per generator is required",
            ));
        }
        let degree = images[0].degree();
        if images.iter().any(|p| p.degree() != degree) {
            return Err(TestelError::BadParameter("images must share one degree"));
        }
        if let Some(s) = pres {
            if s.alphabet_rank() != rank {
                return Err(TestelError::BadParameter(
                    "rank does not match presentation",
                ));
            }
            if !evaluate_word(&images, &s.relator()).is_identity() {
                return Err(TestelError::RelatorNotSatisfied);
            }
        }
        let order = group_order(&images, QUOTIENT_ORDER_CAP).ok_or(TestelError::ResourceCap {
            what: "quotient order",
            limit: QUOTIENT_ORDER_CAP,
        })? as u64;
        let prime =
            least_admissible_prime(order, pres).ok_or(TestelError::PrimeSearchExhausted {
                cap: PRIME_SEARCH_CAP,
            })?;
        let layer = FrattiniLayer::new(pres, rank, prime)?;
        let vetter = match pres {
            None => Vetter::Free { bound: vet_bound },
            Some(s) => Vetter::Surface(SurfaceEndoVetter::new(s, vet_bound)?),
        };
        let reducer = pres.map(DehnReducer::new);
        Ok(CosetProjector {
            pres: pres.copied(),
            rank,
            images,
            order,
            prime,
            layer,
            vetter,
            reducer,
            vet_bound,
        })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn quotient_order(&self) -> u64 {
        self.order
    }

    fn provably_trivial(&self, t: &Word) -> bool {
        match &self.reducer {
            None => t.is_identity(),
            Some(reducer) => reducer.reduce(t).is_identity(),
        }
    }

    fn survives_vetting(&self, t: &Word) -> bool {
        match &self.vetter {
            Vetter::Free { bound } => free_fixer(t, *bound).is_none(),
            Vetter::Surface(vetter) => vetter.find_fixer(t).is_none(),
        }
    }

    /// Runs the pipeline on `w` and re-evaluates the coset contract
    /// (`image(t) = image(w)`) before returning.
    pub fn project(&self, w: &Word) -> Result<CosetResult, TestelError> {
        if w.rank() != self.rank {
            return Err(TestelError::BadParameter("word rank does not match"));
        }
        let p = self.prime as u64;
        let l = self.order;
        let inv_l = inv_mod_u64(l % p, p);

        // layer one: r_i with p | sigma_i(w) + r_i l
        let sums = exponent_sums(w, self.pres.as_ref(), 0)?;
        let r: Vec<u64> = sums
            .entries
            .iter()
            .map(|&e| (p - e.rem_euclid(p as i64) as u64) % p * inv_l % p)
            .collect();
        let mut u = w.clone();
        let mut r_cost = 0u64;
        for (i, &ri) in r.iter().enumerate() {
            if ri != 0 {
                u = u.multiply(&Word::generator(self.rank, i + 1).pow((ri * l) as i64));
                r_cost += ri * l;
            }
        }
        debug_assert!(exponent_sums(&u, self.pres.as_ref(), self.prime)?.is_zero());

        // layer two: s_i with p | sigma_{y_i}(u) + s_i l
        let coords = self.layer.coordinates(&u)?;
        let s: Vec<u64> = coords
            .iter()
            .map(|&c| (p - c as u64) % p * inv_l % p)
            .collect();
        let mut raw: Vec<Letter> = u.letters().to_vec();
        let mut s_cost = 0u64;
        for (i, &si) in s.iter().enumerate() {
            if si == 0 {
                continue;
            }
            let y = self.layer.minimal_generator(i);
            s_cost += si * l * y.len() as u64;
            for _ in 0..si * l {
                raw.extend_from_slice(y.letters());
            }
        }
        let v = Word::from_letters(self.rank, raw).expect("letters stay in range");
        debug_assert!(self.layer.in_second_layer(&v).unwrap_or(false));

        // appended powers: subset of {x1..x_{n+1}} for orientable surfaces,
        // proper basis subsets otherwise
        let (pool, proper) = match self.pres.as_ref().map(|s| s.kind) {
            None => (self.rank, true),
            Some(SurfaceKind::Orientable) => (self.pres.as_ref().unwrap().genus + 1, false),
            Some(SurfaceKind::NonOrientable) => (self.pres.as_ref().unwrap().genus - 1, true),
        };
        let power = (p * p * l) as i64;
        for subset in super::net::subsets_ordered(pool, proper) {
            let mut t = v.clone();
            for &i in &subset {
                t = t.multiply(&Word::generator(self.rank, i).pow(power));
            }
            if self.provably_trivial(&t) {
                continue;
            }
            if self.survives_vetting(&t) {
                // defining contract: t lands in the same kernel coset
                let shift = t.multiply(&w.inverse());
                if !evaluate_word(&self.images, &shift).is_identity() {
                    return Err(TestelError::Internal("coset contract violated"));
                }
                let subset_cost = p * p * l * subset.len() as u64;
                return Ok(CosetResult {
                    input: w.clone(),
                    output: t,
                    trace: CosetTrace {
                        prime: self.prime,
                        quotient_order: l,
                        r,
                        s,
                        subset,
                        vet_bound: self.vet_bound,
                        r_cost,
                        s_cost,
                        subset_cost,
                    },
                });
            }
        }
        Err(TestelError::SubsetSearchExhausted)
    }
}

/// One-shot coset projection at the default vetting bound.
pub fn coset_test_element(
    w: &Word,
    quotient: QuotientSpec,
    pres: Option<&SurfacePresentation>,
) -> Result<CosetResult, TestelError> {
    let rank = w.rank();
    CosetProjector::new(pres, rank, quotient, DEFAULT_VET_BOUND)?.project(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, codes: &[i32]) -> Word {
        Word::from_codes(rank, codes).unwrap()
    }

    fn two_cycle() -> Perm {
        Perm::from_cycles(2, &[alloc::vec![0, 1]]).unwrap()
    }

    #[test]
    fn trivial_quotient_reduces_to_the_plain_pipeline() {
        let quotient = QuotientSpec {
            images: alloc::vec![Perm::identity(1); 2],
        };
        let projector = CosetProjector::new(None, 2, quotient, 2).unwrap();
        assert_eq!(projector.quotient_order(), 1);
        assert_eq!(projector.prime(), 2);
        let result = projector.project(&Word::generator(2, 1)).unwrap();
        assert!(crate::testel::frattini::in_frattini(&result.output, 2, None).unwrap());
        assert!(!result.output.is_identity());
    }

    #[test]
    fn free_quotient_of_order_three_picks_p_two() {
        let c3 = Perm::from_cycles(3, &[alloc::vec![0, 1, 2]]).unwrap();
        let quotient = QuotientSpec {
            images: alloc::vec![c3, Perm::identity(3)],
        };
        let projector = CosetProjector::new(None, 2, quotient, 2).unwrap();
        assert_eq!(projector.quotient_order(), 3);
        assert_eq!(projector.prime(), 2);
        let input = w(2, &[1, 2, 2]);
        let result = projector.project(&input).unwrap();
        // the output stays in the input's kernel coset
        let shift = result.output.multiply(&input.inverse());
        assert!(evaluate_word(&projector.images, &shift).is_identity());
    }

    #[test]
    fn orientable_two_cycle_quotient_picks_p_five_with_the_documented_corrections() {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let quotient = QuotientSpec {
            images: alloc::vec![two_cycle(); 4],
        };
        let projector = CosetProjector::new(Some(&pres), 4, quotient, 1).unwrap();
        assert_eq!(projector.quotient_order(), 2);
        assert_eq!(projector.prime(), 5);

        let input = Word::generator(4, 1);
        let result = projector.project(&input).unwrap();
        // sigma_1(w) = 1 and l = 2: the least r with 5 | 1 + 2r is 2
        assert_eq!(result.trace.r[0], 2);
        let shift = result.output.multiply(&input.inverse());
        assert!(evaluate_word(&projector.images, &shift).is_identity());
    }

    #[test]
    fn relator_violations_are_rejected() {
        let pres = SurfacePresentation::non_orientable(3).unwrap();
        // x1 -> a 2-cycle, rest identity: relator maps to tau^2 = id, fine;
        // but x1 -> a 3-cycle makes the relator image nontrivial
        let c3 = Perm::from_cycles(3, &[alloc::vec![0, 1, 2]]).unwrap();
        let bad = QuotientSpec {
            images: alloc::vec![c3, Perm::identity(3), Perm::identity(3)],
        };
        let err = CosetProjector::new(Some(&pres), 3, bad, 1).unwrap_err();
        assert_eq!(err, TestelError::RelatorNotSatisfied);
    }
}
