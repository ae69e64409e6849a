//! One-line and cycle-form words for permutations of `[n] = {1, ..., n}`.
//!
//! Letters are 1-based throughout, matching the usual combinatorial notation.
//! A [`CycleWord`] `(c1, ..., cn)` denotes the single cycle
//! `c1 -> c2 -> ... -> cn -> c1`; its [`StandardCycleWord`] is the rotation
//! that starts with `1`. All sets of cycles produced by this crate are
//! ordered lexicographically by standard cycle word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MAX_N;

/// Checks that `word` is a rearrangement of `1..=word.len()`.
fn check_bijection(word: &[u8]) -> Result<()> {
    if word.is_empty() || word.len() > MAX_N {
        return Err(Error::Length(word.len()));
    }
    let mut seen = [false; MAX_N + 1];
    for &v in word {
        let v = v as usize;
        if v == 0 || v > word.len() || seen[v] {
            return Err(Error::NotBijection {
                word: word.to_vec(),
            });
        }
        seen[v] = true;
    }
    Ok(())
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[u8], sep: &str) -> fmt::Result {
    for (i, v) in word.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// A permutation in one-line notation: `word[i - 1] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        check_bijection(&word)?;
        Ok(Self(word))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// `π(i)` for `1 <= i <= n`.
    pub fn image(&self, i: u8) -> u8 {
        self.0[i as usize - 1]
    }

    /// Returns the standard cycle word if this permutation is a single n-cycle.
    ///
    /// The identity on `[1]` counts as the 1-cycle `(1)`.
    pub fn to_cycle(&self) -> Result<StandardCycleWord> {
        let n = self.len();
        let mut word = Vec::with_capacity(n);
        let mut cur = 1u8;
        loop {
            word.push(cur);
            cur = self.image(cur);
            if cur == 1 {
                break;
            }
        }
        if word.len() != n {
            return Err(Error::NotAnNCycle(self.0.clone()));
        }
        Ok(StandardCycleWord(CycleWord(word)))
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<u8>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() > 9 { "," } else { "" };
        write_word(f, &self.0, sep)
    }
}

/// Validates an arbitrary integer sequence as a one-line permutation.
pub fn make_permutation(word: &[u32]) -> Result<Permutation> {
    if word.is_empty() || word.len() > MAX_N {
        return Err(Error::Length(word.len()));
    }
    let narrowed = word
        .iter()
        .map(|&v| u8::try_from(v))
        .collect::<std::result::Result<Vec<u8>, _>>()
        .map_err(|_| Error::NotBijection {
            word: word.iter().map(|&v| v.min(255) as u8).collect(),
        })?;
    Permutation::new(narrowed)
}

/// A cycle-form listing `(c1, ..., cn)` of an n-cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct CycleWord(Vec<u8>);

impl CycleWord {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        check_bijection(&word)?;
        Ok(Self(word))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// The one-line form: `π(c_i) = c_{i+1}` and `π(c_n) = c_1`.
    pub fn to_oneline(&self) -> Permutation {
        let n = self.len();
        let mut out = vec![0u8; n];
        for i in 0..n {
            out[self.0[i] as usize - 1] = self.0[(i + 1) % n];
        }
        Permutation(out)
    }

    /// All `n` rotations, the `i`-th starting at `c_i`.
    pub fn rotations(&self) -> Vec<CycleWord> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut w = Vec::with_capacity(n);
                w.extend_from_slice(&self.0[i..]);
                w.extend_from_slice(&self.0[..i]);
                CycleWord(w)
            })
            .collect()
    }

    /// The rotation that starts with `1`.
    pub fn standardize(&self) -> StandardCycleWord {
        let at = self
            .0
            .iter()
            .position(|&v| v == 1)
            .expect("validated cycle word contains 1");
        let mut w = Vec::with_capacity(self.len());
        w.extend_from_slice(&self.0[at..]);
        w.extend_from_slice(&self.0[..at]);
        StandardCycleWord(CycleWord(w))
    }
}

impl TryFrom<Vec<u8>> for CycleWord {
    type Error = Error;

    fn try_from(word: Vec<u8>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<CycleWord> for Vec<u8> {
    fn from(c: CycleWord) -> Self {
        c.0
    }
}

impl fmt::Display for CycleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_word(f, &self.0, ",")?;
        f.write_str(")")
    }
}

/// A cycle word whose first letter is `1`.
///
/// The derived `Ord` (lexicographic on the word) is the canonical order used
/// for every class listing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct StandardCycleWord(CycleWord);

impl StandardCycleWord {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let c = CycleWord::new(word)?;
        if c.0[0] != 1 {
            return Err(Error::Shape {
                word: c.0,
                reason: "standard cycle word must start with 1".into(),
            });
        }
        Ok(Self(c))
    }

    /// Wraps a word the caller already knows is a standard cycle word.
    pub(crate) fn from_trusted(word: Vec<u8>) -> Self {
        debug_assert!(check_bijection(&word).is_ok() && word[0] == 1);
        Self(CycleWord(word))
    }

    pub fn as_cycle(&self) -> &CycleWord {
        &self.0
    }

    pub fn into_cycle(self) -> CycleWord {
        self.0
    }

    pub fn as_slice(&self) -> &[u8] {
        self.0.as_slice()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_oneline(&self) -> Permutation {
        self.0.to_oneline()
    }

    /// 1-based index of `value` in the word.
    pub fn index_of(&self, value: u8) -> Option<usize> {
        self.as_slice().iter().position(|&v| v == value).map(|i| i + 1)
    }
}

impl TryFrom<Vec<u8>> for StandardCycleWord {
    type Error = Error;

    fn try_from(word: Vec<u8>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<StandardCycleWord> for Vec<u8> {
    fn from(c: StandardCycleWord) -> Self {
        c.0 .0
    }
}

impl fmt::Display for StandardCycleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn cycle_to_oneline(c: &CycleWord) -> Permutation {
    c.to_oneline()
}

pub fn oneline_to_cycle(p: &Permutation) -> Result<StandardCycleWord> {
    p.to_cycle()
}

pub fn rotations(c: &CycleWord) -> Vec<CycleWord> {
    c.rotations()
}

pub fn standardize(c: &CycleWord) -> StandardCycleWord {
    c.standardize()
}

/// Steps `word` to its lexicographic successor in place; `false` once the last
/// arrangement has been passed (the slice is then left sorted ascending).
pub(crate) fn next_permutation(word: &mut [u8]) -> bool {
    if word.len() < 2 {
        return false;
    }
    let mut i = word.len() - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        word.reverse();
        return false;
    }
    let mut j = word.len() - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}
