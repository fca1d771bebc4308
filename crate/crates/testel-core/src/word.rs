//! Free-group words over a ranked alphabet, the word metric, and exact
//! ball/sphere enumeration.
//!
//! Words are kept freely reduced at all times; the empty word is the
//! identity. Letters are packed as signed integers (`+i` for `x_i`, `-i` for
//! `x_i^-1`) since enumeration throughput dominates the census workloads
//! built on top of this module.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A signed generator symbol: `+i` encodes `x_i`, `-i` encodes `x_i^-1`
/// (indices are 1-based).
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, positive: bool) -> Letter {
        assert!(
            index >= 1 && index <= i32::MAX as usize,
            "letter index out of range"
        );
        Letter(if positive {
            index as i32
        } else {
            -(index as i32)
        })
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Signed integer code (`+i` / `-i`).
    pub fn code(self) -> i32 {
        self.0
    }

    pub fn from_code(code: i32) -> Option<Letter> {
        if code == 0 || code == i32::MIN {
            None
        } else {
            Some(Letter(code))
        }
    }

    /// Position in the enumeration order `x1 < x1^-1 < x2 < x2^-1 < ...`.
    pub fn ord(self) -> usize {
        2 * (self.index() - 1) + usize::from(!self.is_positive())
    }

    pub fn from_ord(ord: usize) -> Letter {
        Letter::new(ord / 2 + 1, ord.is_multiple_of(2))
    }

    fn cancels(self, other: Letter) -> bool {
        self.0 == -other.0
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Letter) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Letter) -> Ordering {
        self.ord().cmp(&other.ord())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.index())
        } else {
            write!(f, "x{}^-1", self.index())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// A letter index lies outside `[1, rank]`.
    IndexOutOfRange { index: usize, rank: usize },
    /// Unparsable token in the text format.
    BadToken(String),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::IndexOutOfRange { index, rank } => {
                write!(f, "letter index {index} out of range for rank {rank}")
            }
            WordError::BadToken(tok) => write!(f, "bad word token `{tok}`"),
        }
    }
}

/// A freely reduced word over the alphabet `x1, ..., x_rank`.
///
/// The empty word represents the identity. All operations that combine two
/// words require equal ranks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Appends `letter` to a reduced letter sequence, keeping it reduced.
fn push_reduced(letters: &mut Vec<Letter>, letter: Letter) {
    if letters.last().is_some_and(|&last| last.cancels(letter)) {
        letters.pop();
    } else {
        letters.push(letter);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        assert!(rank >= 1, "rank must be at least 1");
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The generator `x_index` as a word (1-based index).
    pub fn generator(rank: usize, index: usize) -> Word {
        assert!(index >= 1 && index <= rank, "generator index out of range");
        Word {
            rank,
            letters: alloc::vec![Letter::new(index, true)],
        }
    }

    /// Freely reduces a raw letter sequence. Fails if a letter index exceeds
    /// the rank.
    pub fn from_letters<I>(rank: usize, raw: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        assert!(rank >= 1, "rank must be at least 1");
        let mut letters = Vec::new();
        for letter in raw {
            if letter.index() > rank {
                return Err(WordError::IndexOutOfRange {
                    index: letter.index(),
                    rank,
                });
            }
            push_reduced(&mut letters, letter);
        }
        Ok(Word { rank, letters })
    }

    /// Convenience constructor from signed integer codes.
    pub fn from_codes(rank: usize, codes: &[i32]) -> Result<Word, WordError> {
        let letters = codes
            .iter()
            .map(|&c| Letter::from_code(c).ok_or(WordError::BadToken(String::from("0"))))
            .collect::<Result<Vec<_>, _>>()?;
        Word::from_letters(rank, letters)
    }

    /// Parses the text format: whitespace-separated tokens `x<i>` and
    /// `x<i>^-1`. The empty string (and the single token `1`) denote the
    /// identity.
    pub fn parse(rank: usize, text: &str) -> Result<Word, WordError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::identity(rank));
        }
        let mut letters = Vec::new();
        for tok in trimmed.split_whitespace() {
            let (body, positive) = match tok.strip_suffix("^-1") {
                Some(body) => (body, false),
                None => (tok, true),
            };
            let index: usize = body
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| WordError::BadToken(String::from(tok)))?;
            letters.push(Letter::new(index, positive));
        }
        Word::from_letters(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Word length `|w|_X` with respect to the standard basis.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Group multiplication; the result is freely reduced.
    pub fn multiply(&self, other: &Word) -> Word {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut letters = Vec::new();
        for _ in 0..exponent.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut letters, l);
            }
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// Word metric `d_X(self, other) = |self^-1 other|_X`.
    pub fn distance(&self, other: &Word) -> usize {
        self.inverse().multiply(other).len()
    }

    /// Signed exponent sum of `x_index` (1-based).
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.index() == index)
            .map(|l| if l.is_positive() { 1 } else { -1 })
            .sum()
    }

    /// All `rank` exponent sums at once.
    pub fn exponent_vector(&self) -> Vec<i64> {
        let mut v = alloc::vec![0i64; self.rank];
        for l in &self.letters {
            v[l.index() - 1] += if l.is_positive() { 1 } else { -1 };
        }
        v
    }

    /// Decomposes `self` as `x1^k1 x2^k2 ... xn^kn` if it literally has that
    /// shape (blocks in increasing generator order; zero exponents allowed).
    pub fn as_power_word(&self) -> Option<Vec<i64>> {
        let mut exponents = alloc::vec![0i64; self.rank];
        let mut current = 0usize;
        for l in &self.letters {
            let idx = l.index();
            let step = if l.is_positive() { 1 } else { -1 };
            if idx < current {
                return None;
            }
            if idx > current {
                current = idx;
            } else if (exponents[idx - 1] > 0) != l.is_positive() {
                // sign change inside a block cannot occur in a reduced power word
                return None;
            }
            exponents[idx - 1] += step;
        }
        Some(exponents)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("1")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

/// Exact ball size `|B_X(radius)|` in the rank-`rank` free group with the
/// standard basis: `1 + 2n((2n-1)^k - 1)/(2n-2)` for `n >= 2` and `2k + 1`
/// for `n = 1`.
pub fn ball_size(rank: usize, radius: usize) -> BigUint {
    assert!(rank >= 1, "rank must be at least 1");
    if rank == 1 {
        return BigUint::from(2 * radius + 1);
    }
    let n = rank as u64;
    let base = BigUint::from(2 * n - 1);
    let numer = BigUint::from(2 * n) * (base.pow(radius as u32) - 1u32);
    BigUint::from(1u32) + numer / (2 * n - 2)
}

/// [`ball_size`] when it fits in a `u64`.
pub fn ball_size_u64(rank: usize, radius: usize) -> Option<u64> {
    u64::try_from(&ball_size(rank, radius)).ok()
}

/// Exact sphere size: `2n(2n-1)^(k-1)` for `k >= 1`, and 1 for `k = 0`.
pub fn sphere_size(rank: usize, radius: usize) -> BigUint {
    assert!(rank >= 1, "rank must be at least 1");
    if radius == 0 {
        return BigUint::from(1u32);
    }
    let n = rank as u64;
    BigUint::from(2 * n) * BigUint::from(2 * n - 1).pow(radius as u32 - 1)
}

/// Streams every reduced word of a fixed length once, in lexicographic order
/// (letter order `x1 < x1^-1 < x2 < x2^-1 < ...`).
///
/// A nonempty prefix restricts the stream to words extending it, which is
/// how census runs shard a sphere across workers.
pub struct SphereIter {
    rank: usize,
    length: usize,
    prefix_len: usize,
    state: Vec<Letter>,
    started: bool,
    done: bool,
}

impl SphereIter {
    pub fn new(rank: usize, length: usize) -> SphereIter {
        SphereIter::with_prefix(&Word::identity(rank), length)
    }

    /// Words of the given total length whose initial segment equals `prefix`.
    pub fn with_prefix(prefix: &Word, length: usize) -> SphereIter {
        let done = prefix.len() > length;
        SphereIter {
            rank: prefix.rank(),
            length,
            prefix_len: prefix.len(),
            state: prefix.letters().to_vec(),
            started: false,
            done,
        }
    }

    /// Smallest letter extending `prev` without cancellation.
    fn smallest_after(&self, prev: Option<Letter>) -> Letter {
        match prev {
            Some(p) if p.inverse().ord() == 0 => Letter::from_ord(1),
            _ => Letter::from_ord(0),
        }
    }

    /// Next valid letter strictly after `current` in enumeration order, given
    /// the preceding letter.
    fn bump(&self, current: Letter, prev: Option<Letter>) -> Option<Letter> {
        let forbidden = prev.map(|p| p.inverse().ord());
        let mut ord = current.ord() + 1;
        if Some(ord) == forbidden {
            ord += 1;
        }
        (ord < 2 * self.rank).then(|| Letter::from_ord(ord))
    }

    fn fill_tail(&mut self, from: usize, target_len: usize) {
        while self.state.len() > from {
            self.state.pop();
        }
        while self.state.len() < target_len {
            let prev = self.state.last().copied();
            let l = self.smallest_after(prev);
            self.state.push(l);
        }
    }
}

impl Iterator for SphereIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_tail(self.prefix_len, self.length);
            return Some(Word {
                rank: self.rank,
                letters: self.state.clone(),
            });
        }
        // odometer increment over positions length-1 .. prefix_len
        let mut pos = self.length;
        loop {
            if pos == self.prefix_len {
                self.done = true;
                return None;
            }
            pos -= 1;
            let prev = if pos == 0 {
                None
            } else {
                Some(self.state[pos - 1])
            };
            if let Some(next) = self.bump(self.state[pos], prev) {
                self.state[pos] = next;
                self.fill_tail(pos + 1, self.length);
                return Some(Word {
                    rank: self.rank,
                    letters: self.state.clone(),
                });
            }
        }
    }
}

/// Iterates the whole ball `B(radius)`: the spheres of radius `0..=radius`
/// in increasing length, each in lexicographic order.
pub fn ball(rank: usize, radius: usize) -> impl Iterator<Item = Word> {
    (0..=radius).flat_map(move |k| SphereIter::new(rank, k))
}

/// Uniform sample from the sphere of the given radius, deterministic per
/// seed.
pub fn sample_sphere(rank: usize, radius: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut letters: Vec<Letter> = Vec::with_capacity(radius);
    for _ in 0..radius {
        let letter = match letters.last() {
            None => Letter::from_ord(rng.gen_range(0..2 * rank)),
            Some(&prev) => {
                let forbidden = prev.inverse().ord();
                let mut ord = rng.gen_range(0..2 * rank - 1);
                if ord >= forbidden {
                    ord += 1;
                }
                Letter::from_ord(ord)
            }
        };
        letters.push(letter);
    }
    Word { rank, letters }
}
