//! Classical pattern containment and the three avoidance modes for cycles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::CycleWord;
use crate::MAX_N;

/// A reduced word `τ1...τk`, i.e. a permutation of `1..=k`.
///
/// Alongside the word the pattern keeps, for every position `s`, the earlier
/// positions holding the nearest smaller and nearest larger letter. A partial
/// match that is order-isomorphic on positions `< s` stays order-isomorphic
/// after adding position `s` iff the new host letter sits strictly between the
/// host letters matched at those two positions.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Pattern {
    word: Vec<u8>,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl Pattern {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let k = word.len();
        if k == 0 || k > u8::MAX as usize {
            return Err(Error::Length(k));
        }
        let mut seen = vec![false; k + 1];
        for &v in &word {
            let v = v as usize;
            if v == 0 || v > k || seen[v] {
                return Err(Error::NotBijection { word });
            }
            seen[v] = true;
        }
        let mut below = Vec::with_capacity(k);
        let mut above = Vec::with_capacity(k);
        for s in 0..k {
            let earlier = (0..s).map(|t| (word[t], t));
            below.push(earlier.clone().filter(|&(v, _)| v < word[s]).max().map(|(_, t)| t));
            above.push(earlier.filter(|&(v, _)| v > word[s]).min().map(|(_, t)| t));
        }
        Ok(Self { word, below, above })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.word
    }

    /// Comma-separated letters; unambiguous for any length.
    pub fn to_comma_string(&self) -> String {
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            f.write_str(&self.to_comma_string())
        }
    }
}

/// Parses `2431` (one digit per letter) or `10,2,...` (comma-separated).
impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Range(format!("cannot parse pattern {s:?}")))?
        } else {
            s.chars()
                .map(|ch| ch.to_digit(10).map(|d| d as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Range(format!("cannot parse pattern {s:?}")))?
        };
        Pattern::new(letters)
    }
}

impl TryFrom<Vec<u8>> for Pattern {
    type Error = Error;

    fn try_from(word: Vec<u8>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<Pattern> for Vec<u8> {
    fn from(p: Pattern) -> Self {
        p.word
    }
}

/// 1-based, strictly increasing host indices of an occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub indices: Vec<usize>,
}

/// Which words of a cycle must avoid the cycle-form pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AvoidanceMode {
    /// Only the one-line pattern is checked.
    OneLineOnly,
    /// The standard cycle word must avoid the cycle-form pattern.
    StandardCycle,
    /// Every rotation of the cycle word must avoid the cycle-form pattern.
    #[default]
    AllCycles,
}

impl AvoidanceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AvoidanceMode::OneLineOnly => "one-line",
            AvoidanceMode::StandardCycle => "standard-cycle",
            AvoidanceMode::AllCycles => "all-cycles",
        }
    }
}

impl fmt::Display for AvoidanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AvoidanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-line" => Ok(AvoidanceMode::OneLineOnly),
            "standard-cycle" => Ok(AvoidanceMode::StandardCycle),
            "all-cycles" => Ok(AvoidanceMode::AllCycles),
            other => Err(Error::Range(format!("unknown avoidance mode {other:?}"))),
        }
    }
}

/// Replaces every letter by its rank within the word.
pub fn reduce<T: Ord + fmt::Debug>(word: &[T]) -> Result<Pattern> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by(|&a, &b| word[a].cmp(&word[b]));
    if order.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(Error::Duplicates(format!("{word:?}")));
    }
    if word.len() > u8::MAX as usize {
        return Err(Error::Length(word.len()));
    }
    let mut ranks = vec![0u8; word.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank as u8 + 1;
    }
    Pattern::new(ranks)
}

/// Depth-first search over host indices, leftmost choices first. `chosen`
/// holds the 0-based indices of the partial match.
fn extend<T: Ord>(host: &[T], pat: &Pattern, chosen: &mut Vec<usize>) -> bool {
    let s = chosen.len();
    let k = pat.len();
    if s == k {
        return true;
    }
    let start = chosen.last().map_or(0, |&i| i + 1);
    // Positions s..k still need k - s distinct host letters.
    let stop = host.len() + s + 1 - k;
    let lo = pat.below[s].map(|t| &host[chosen[t]]);
    let hi = pat.above[s].map(|t| &host[chosen[t]]);
    for i in start..stop {
        let x = &host[i];
        if lo.is_some_and(|l| x <= l) || hi.is_some_and(|h| x >= h) {
            continue;
        }
        chosen.push(i);
        if extend(host, pat, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// The lexicographically least occurrence of `pat` in `host`, if any.
pub fn find_occurrence<T: Ord>(host: &[T], pat: &Pattern) -> Option<Occurrence> {
    if pat.len() > host.len() {
        return None;
    }
    let mut chosen = Vec::with_capacity(pat.len());
    extend(host, pat, &mut chosen).then(|| Occurrence {
        indices: chosen.into_iter().map(|i| i + 1).collect(),
    })
}

pub fn contains<T: Ord>(host: &[T], pat: &Pattern) -> bool {
    if pat.len() > host.len() {
        return false;
    }
    let mut chosen = Vec::with_capacity(pat.len());
    extend(host, pat, &mut chosen)
}

/// Whether every cyclic rotation of `word` avoids `pat`.
pub fn avoids_all_rotations(word: &[u8], pat: &Pattern) -> bool {
    let n = word.len();
    if pat.len() > n {
        return true;
    }
    let mut buf = [0u8; 2 * MAX_N];
    let mut heap;
    let doubled: &mut [u8] = if 2 * n <= buf.len() {
        &mut buf[..2 * n]
    } else {
        heap = vec![0u8; 2 * n];
        &mut heap
    };
    doubled[..n].copy_from_slice(word);
    doubled[n..].copy_from_slice(word);
    (0..n).all(|i| !contains(&doubled[i..i + n], pat))
}

/// Whether the cycle avoids `sigma` in one-line form and `tau` in the words
/// selected by `mode`.
pub fn avoids_in_mode(c: &CycleWord, sigma: &Pattern, tau: &Pattern, mode: AvoidanceMode) -> bool {
    if contains(c.to_oneline().as_slice(), sigma) {
        return false;
    }
    match mode {
        AvoidanceMode::OneLineOnly => true,
        AvoidanceMode::StandardCycle => !contains(c.standardize().as_slice(), tau),
        AvoidanceMode::AllCycles => avoids_all_rotations(c.as_slice(), tau),
    }
}

/// Exhaustive all-subsequence matcher, kept independent of the pruned search
/// so the two can be cross-checked.
pub mod oracle {
    use super::{Occurrence, Pattern};

    fn order_isomorphic<T: Ord>(host: &[T], idx: &[usize], pat: &[u8]) -> bool {
        for s in 0..pat.len() {
            for t in s + 1..pat.len() {
                if (host[idx[s]] > host[idx[t]]) != (pat[s] > pat[t]) {
                    return false;
                }
            }
        }
        true
    }

    /// Tries every k-subset of host indices in lexicographic order.
    pub fn naive_find_occurrence<T: Ord>(host: &[T], pat: &Pattern) -> Option<Occurrence> {
        let (n, k) = (host.len(), pat.len());
        if k > n {
            return None;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if order_isomorphic(host, &idx, pat.as_slice()) {
                return Some(Occurrence {
                    indices: idx.iter().map(|i| i + 1).collect(),
                });
            }
            // Next combination.
            let mut s = k;
            loop {
                if s == 0 {
                    return None;
                }
                s -= 1;
                if idx[s] < n - k + s {
                    break;
                }
            }
            idx[s] += 1;
            for t in s + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }

    pub fn naive_contains<T: Ord>(host: &[T], pat: &Pattern) -> bool {
        naive_find_occurrence(host, pat).is_some()
    }
}
