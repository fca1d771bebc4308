//! Exact density-bound calculators, the covering-chain inequality verifier,
//! and a certified census of balls in free groups.
//!
//! Census buckets are one-sided: positive needs a construction (Turner power
//! word or a vetted net output), negative needs a re-checkable fixer
//! witness, and everything else stays unknown. Asymptotic statements are
//! never asserted at finite radius; the calculators report the bounds, the
//! census reports the observed ratios.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::testel::net::{
    free_net_bound, net_project_free_with, nonorientable_net_bound, orientable_net_bound,
};
use crate::testel::{
    endo_fixer_search, turner_power_criterion, Certificate, Construction, TestelError,
};
use crate::word::{ball, ball_size, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityError {
    UnknownBound(String),
    Parameter(&'static str),
    /// A count left the exactly-representable range.
    Overflow(&'static str),
    Testel(TestelError),
    /// A net projection exceeded its bound; carries the offending word.
    NetViolation(Word),
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::UnknownBound(name) => write!(f, "unknown bound name `{name}`"),
            DensityError::Parameter(what) => write!(f, "bad parameter: {what}"),
            DensityError::Overflow(what) => write!(f, "count overflow: {what}"),
            DensityError::Testel(e) => write!(f, "{e}"),
            DensityError::NetViolation(w) => write!(f, "net bound violated at `{w}`"),
        }
    }
}

impl From<TestelError> for DensityError {
    fn from(e: TestelError) -> DensityError {
        DensityError::Testel(e)
    }
}

// ---------------------------------------------------------------------------
// bound calculator

/// The named density and net bounds this calculator evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundName {
    FreeC,
    NonorC,
    OrC,
    FreeNet,
    OrNet,
    NonorNet,
    Krss,
}

impl BoundName {
    pub const ALL: [BoundName; 7] = [
        BoundName::FreeC,
        BoundName::NonorC,
        BoundName::OrC,
        BoundName::FreeNet,
        BoundName::OrNet,
        BoundName::NonorNet,
        BoundName::Krss,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::FreeC => "freeC",
            BoundName::NonorC => "nonorC",
            BoundName::OrC => "orC",
            BoundName::FreeNet => "freeNet",
            BoundName::OrNet => "orNet",
            BoundName::NonorNet => "nonorNet",
            BoundName::Krss => "krss",
        }
    }
}

impl FromStr for BoundName {
    type Err = DensityError;

    fn from_str(s: &str) -> Result<BoundName, DensityError> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| DensityError::UnknownBound(s.into()))
    }
}

/// A computed bound: exact reduced fraction where the formula is rational,
/// and a decimal approximation (6 significant digits for proper fractions,
/// 12 decimal places for the zeta bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub parameter: usize,
    /// `(numerator, denominator)` in decimal, when the value is rational.
    pub exact: Option<(String, String)>,
    pub decimal: String,
}

/// Riemann zeta at integer argument `n >= 2` by Euler-Maclaurin; accurate
/// well past 12 decimal digits.
pub fn zeta(n: u32) -> f64 {
    assert!(n >= 2);
    let s = n as f64;
    let cutoff = 16u64;
    let powi = |x: f64, e: u32| -> f64 {
        let mut acc = 1.0;
        for _ in 0..e {
            acc *= x;
        }
        acc
    };
    let mut sum = 0.0;
    for k in 1..cutoff {
        sum += 1.0 / powi(k as f64, n);
    }
    let nn = cutoff as f64;
    sum += powi(1.0 / nn, n - 1) / (s - 1.0);
    sum += 0.5 * powi(1.0 / nn, n);
    // Bernoulli tail: B2, B4, B6, B8, B10 over (2j)!
    let bernoulli_over_fact = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
    ];
    let mut rising = s; // s (s+1) ... (s + 2j - 2), here with j zero-based
    for (j, coeff) in bernoulli_over_fact.iter().enumerate() {
        sum += coeff * rising * powi(1.0 / nn, n + 2 * j as u32 + 1);
        rising *= (s + 2.0 * j as f64 + 1.0) * (s + 2.0 * j as f64 + 2.0);
    }
    sum
}

/// The zeta-function density bound `1 - (4n-4)/((2n-1)^2 zeta(n))`.
pub fn krss_bound(n: usize) -> f64 {
    assert!(n >= 2);
    1.0 - (4.0 * n as f64 - 4.0)
        / ((2.0 * n as f64 - 1.0) * (2.0 * n as f64 - 1.0) * zeta(n as u32))
}

fn big(u: u64) -> BigInt {
    BigInt::from(u)
}

/// Exact rational value of a named bound, or `None` for the zeta bound.
pub fn bound_value(name: BoundName, n: usize) -> Result<Option<BigRational>, DensityError> {
    let ratio = |num: BigInt, den: BigInt| Some(BigRational::new(num, den));
    let whole = |v: u64| Some(BigRational::from_integer(big(v)));
    let value = match name {
        BoundName::FreeC => {
            if n < 2 {
                return Err(DensityError::Parameter("freeC needs rank n >= 2"));
            }
            let factor = (BigInt::from(2).pow(n as u32 + 1)) * (BigInt::from(2).pow(n as u32) - 1)
                + BigInt::one();
            let ball = BigInt::from(ball_size(n, 3 * n - 2));
            ratio(BigInt::one(), factor * ball)
        }
        BoundName::NonorC => {
            if n < 3 {
                return Err(DensityError::Parameter("nonorC needs genus n >= 3"));
            }
            let factor = BigInt::from(6).pow(n as u32 - 1);
            let ball = BigInt::from(ball_size(n, 5 * n - 5));
            ratio(BigInt::one(), factor * ball)
        }
        BoundName::OrC => {
            if n < 2 {
                return Err(DensityError::Parameter("orC needs genus n >= 2"));
            }
            let radius = orientable_net_bound(n, 5) as usize;
            let ball = BigInt::from(ball_size(2 * n, radius));
            ratio(BigInt::one(), ball.clone() * ball)
        }
        BoundName::FreeNet => {
            if n < 2 {
                return Err(DensityError::Parameter("freeNet needs rank n >= 2"));
            }
            whole(free_net_bound(n))
        }
        BoundName::OrNet => {
            if n < 2 {
                return Err(DensityError::Parameter("orNet needs genus n >= 2"));
            }
            whole(orientable_net_bound(n, 5))
        }
        BoundName::NonorNet => {
            if n < 3 {
                return Err(DensityError::Parameter("nonorNet needs genus n >= 3"));
            }
            whole(nonorientable_net_bound(n))
        }
        BoundName::Krss => {
            if n < 2 {
                return Err(DensityError::Parameter("krss needs rank n >= 2"));
            }
            None
        }
    };
    Ok(value)
}

/// Decimal rendering of a positive rational: plain digits for integers,
/// otherwise scientific notation with the requested significant digits.
fn rational_decimal(r: &BigRational, sig_digits: usize) -> String {
    if r.is_zero() {
        return String::from("0");
    }
    debug_assert!(r.is_positive());
    let numer = r.numer().magnitude().clone();
    let denom = r.denom().magnitude().clone();
    if denom.is_one() {
        return numer.to_string();
    }
    let ln = numer.to_string().len() as i64;
    let ld = denom.to_string().len() as i64;
    let shift = ld - ln + sig_digits as i64;
    let scaled: BigUint = if shift >= 0 {
        numer * BigUint::from(10u32).pow(shift as u32) / denom
    } else {
        numer / (denom * BigUint::from(10u32).pow((-shift) as u32))
    };
    let digits = scaled.to_string();
    let exponent = digits.len() as i64 - 1 - shift;
    let keep = digits.len().min(sig_digits);
    let (head, tail) = digits.split_at(1);
    let tail = &tail[..keep.saturating_sub(1)];
    let mut out = String::new();
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push('e');
    out.push_str(&exponent.to_string());
    out
}

/// Computes a named bound report.
pub fn bound_calculator(name: BoundName, n: usize) -> Result<BoundReport, DensityError> {
    let exact = bound_value(name, n)?;
    let decimal = match (&exact, name) {
        (Some(r), _) => rational_decimal(r, 6),
        (None, BoundName::Krss) => {
            let v = krss_bound(n);
            let mut s = String::new();
            let _ = fmt::write(&mut s, format_args!("{v:.12}"));
            s
        }
        (None, _) => unreachable!("only the zeta bound is irrational"),
    };
    Ok(BoundReport {
        name: name.as_str().into(),
        parameter: n,
        exact: exact.map(|r| (r.numer().to_string(), r.denom().to_string())),
        decimal,
    })
}

// ---------------------------------------------------------------------------
// covering chain

/// Named word sets usable as the `S` of the covering chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSet {
    /// Words with every exponent sum even.
    EvenExponents,
    /// The whole group.
    All,
    /// Only the identity.
    IdentityOnly,
}

impl NamedSet {
    pub fn contains(&self, w: &Word) -> bool {
        match self {
            NamedSet::EvenExponents => w.exponent_vector().iter().all(|e| e % 2 == 0),
            NamedSet::All => true,
            NamedSet::IdentityOnly => w.is_identity(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NamedSet::EvenExponents => "even",
            NamedSet::All => "all",
            NamedSet::IdentityOnly => "identity",
        }
    }
}

impl FromStr for NamedSet {
    type Err = DensityError;

    fn from_str(s: &str) -> Result<NamedSet, DensityError> {
        match s {
            "even" => Ok(NamedSet::EvenExponents),
            "all" => Ok(NamedSet::All),
            "identity" => Ok(NamedSet::IdentityOnly),
            _ => Err(DensityError::Parameter(
                "set must be one of even, all, identity",
            )),
        }
    }
}

/// Exhaustive check of the three covering-chain inequalities at radius `k`:
/// the translates cover the ball, each translate injects into `S` within the
/// ball, and the final counting chain holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub rank: usize,
    pub radius: usize,
    /// Max translate length.
    pub c: usize,
    pub covering_ok: bool,
    pub first_uncovered: Option<Word>,
    pub injection_ok: bool,
    /// `|S g_i ∩ B(k - C)|` per translate.
    pub translate_counts: Vec<u64>,
    /// `|S ∩ B(k)|`.
    pub s_count: u64,
    /// `|B(k)|`, `|B(k - C)|`, `|B(C)|`.
    pub ball_count: u64,
    pub inner_ball_count: u64,
    pub small_ball_count: u64,
    pub chain_ok: bool,
}

impl CoveringReport {
    pub fn all_ok(&self) -> bool {
        self.covering_ok && self.injection_ok && self.chain_ok
    }
}

pub fn verify_covering_chain<F>(
    s: F,
    translates: &[Word],
    rank: usize,
    radius: usize,
) -> Result<CoveringReport, DensityError>
where
    F: Fn(&Word) -> bool,
{
    if translates.is_empty() {
        return Err(DensityError::Parameter(
            "at least one translate is required",
        ));
    }
    let c = translates.iter().map(Word::len).max().unwrap_or(0);
    if radius < c {
        return Err(DensityError::Parameter(
            "radius must be at least the max translate length",
        ));
    }
    let inverses: Vec<Word> = translates.iter().map(Word::inverse).collect();

    let mut covering_ok = true;
    let mut first_uncovered = None;
    let mut s_count = 0u64;
    let mut ball_count = 0u64;
    for w in ball(rank, radius) {
        ball_count += 1;
        if s(&w) {
            s_count += 1;
        }
        if covering_ok && !inverses.iter().any(|gi| s(&w.multiply(gi))) {
            covering_ok = false;
            first_uncovered = Some(w);
        }
    }

    let mut inner_ball_count = 0u64;
    let mut translate_counts = alloc::vec![0u64; translates.len()];
    for w in ball(rank, radius - c) {
        inner_ball_count += 1;
        for (i, gi) in inverses.iter().enumerate() {
            if s(&w.multiply(gi)) {
                translate_counts[i] += 1;
            }
        }
    }
    let injection_ok = translate_counts.iter().all(|&count| count <= s_count);

    let small_ball_count = ball_size(rank, c)
        .to_u64()
        .ok_or(DensityError::Overflow("|B(C)| does not fit in u64"))?;
    // 1 <= m |B(C)| |S ∩ B(k)| / |B(k)|
    let chain_ok = (translates.len() as u128) * (small_ball_count as u128) * (s_count as u128)
        >= ball_count as u128;

    Ok(CoveringReport {
        rank,
        radius,
        c,
        covering_ok,
        first_uncovered,
        injection_ok,
        translate_counts,
        s_count,
        ball_count,
        inner_ball_count,
        small_ball_count,
        chain_ok,
    })
}

// ---------------------------------------------------------------------------
// census

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bucket {
    Positive,
    Negative,
    Unknown,
}

/// Classifies one word: positive by construction (Turner power word, or its
/// own vetted net projection), negative by fixer witness, else unknown.
pub fn classify(w: &Word, vet_bound: usize) -> Result<(Bucket, Certificate), DensityError> {
    if let Some(exponents) = w.as_power_word() {
        if turner_power_criterion(&exponents) {
            let certificate = Certificate::Positive {
                construction: Construction::TurnerPower { exponents },
            };
            return Ok((Bucket::Positive, certificate));
        }
    }
    let net = net_project_free_with(w, w.rank(), vet_bound)?;
    if net.output == *w {
        let certificate = Certificate::Positive {
            construction: Construction::NetOutput { vetted: vet_bound },
        };
        return Ok((Bucket::Positive, certificate));
    }
    match endo_fixer_search(w, vet_bound, None) {
        negative @ Certificate::Negative { .. } => Ok((Bucket::Negative, negative)),
        other => Ok((Bucket::Unknown, other)),
    }
}

/// Per-radius bucket counts. When `complete` the buckets sum to the exact
/// ball size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub rank: usize,
    pub radius: usize,
    pub vetting_bound: usize,
    pub positive: u64,
    pub negative: u64,
    pub unknown: u64,
    pub ball_size: u64,
    pub seed: u64,
    pub timestamp: Option<u64>,
    pub complete: bool,
}

impl CensusRecord {
    pub fn is_consistent(&self) -> bool {
        !self.complete || self.positive + self.negative + self.unknown == self.ball_size
    }
}

/// Exhaustive single-threaded census of `B(radius)`; stops early (flagging
/// the record incomplete) once `max_elements` classifications are spent.
pub fn census(
    rank: usize,
    radius: usize,
    vet_bound: usize,
    seed: u64,
    max_elements: u64,
) -> Result<CensusRecord, DensityError> {
    let total = ball_size(rank, radius)
        .to_u64()
        .ok_or(DensityError::Overflow("ball size does not fit in u64"))?;
    let mut record = CensusRecord {
        rank,
        radius,
        vetting_bound: vet_bound,
        positive: 0,
        negative: 0,
        unknown: 0,
        ball_size: total,
        seed,
        timestamp: None,
        complete: true,
    };
    let mut spent = 0u64;
    for w in ball(rank, radius) {
        if spent >= max_elements {
            record.complete = false;
            break;
        }
        spent += 1;
        match classify(&w, vet_bound)?.0 {
            Bucket::Positive => record.positive += 1,
            Bucket::Negative => record.negative += 1,
            Bucket::Unknown => record.unknown += 1,
        }
    }
    debug_assert!(record.is_consistent());
    Ok(record)
}

// ---------------------------------------------------------------------------
// net coverage audit

/// Exhaustive audit of the free net projection over a ball: distance
/// histogram and maximum, with any bound violation aborting on the offender.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub rank: usize,
    pub radius: usize,
    pub bound: u64,
    pub max_distance: u64,
    /// `histogram[d]` counts inputs projected at distance `d`.
    pub histogram: Vec<u64>,
    pub total: u64,
}

pub fn net_coverage_audit(rank: usize, radius: usize) -> Result<AuditReport, DensityError> {
    net_coverage_audit_with(rank, radius, crate::testel::net::DEFAULT_VET_BOUND)
}

pub fn net_coverage_audit_with(
    rank: usize,
    radius: usize,
    vet_bound: usize,
) -> Result<AuditReport, DensityError> {
    let bound = free_net_bound(rank);
    let mut histogram = alloc::vec![0u64; bound as usize + 1];
    let mut max_distance = 0u64;
    let mut total = 0u64;
    for w in ball(rank, radius) {
        let result = net_project_free_with(&w, rank, vet_bound)?;
        if result.distance > bound {
            return Err(DensityError::NetViolation(w));
        }
        histogram[result.distance as usize] += 1;
        max_distance = max_distance.max(result.distance);
        total += 1;
    }
    Ok(AuditReport {
        rank,
        radius,
        bound,
        max_distance,
        histogram,
        total,
    })
}
