//! Pell numbers and the structural checks around the count
//! `|A°_n(2431; 1324)| = P_{n-1}`.
//!
//! Notation: `A_n` is the class of n-cycles avoiding 2431 in one-line form and
//! 1324 in every cycle form; `A_n|v@j` is its subclass whose standard cycle word
//! has value `v` at index `j`. Everything here checks instances by exhaustive
//! enumeration; nothing is taken on trust from the combinatorial argument.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::{count_class, enumerate_class, ClassQuery, Convention, EnumOptions};
use crate::error::{Error, Result};
use crate::pattern::{AvoidanceMode, Pattern};
use crate::perm::StandardCycleWord;

/// The `n`-th Pell number: `P_0 = 0`, `P_1 = 1`, `P_n = 2 P_{n-1} + P_{n-2}`.
pub fn pell(n: usize) -> Result<u64> {
    let (mut prev, mut cur) = (1u64, 0u64); // (P_{-1}, P_0)
    for _ in 0..n {
        let next = cur
            .checked_mul(2)
            .and_then(|d| d.checked_add(prev))
            .ok_or_else(|| Error::Range(format!("P_{n} does not fit in 64 bits")))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellTable {
    values: Vec<u64>,
}

impl PellTable {
    /// `P_0..=P_max`.
    pub fn new(max: usize) -> Result<Self> {
        let mut values = vec![0u64];
        if max >= 1 {
            values.push(1);
        }
        for i in 2..=max {
            let v = values[i - 1]
                .checked_mul(2)
                .and_then(|d| d.checked_add(values[i - 2]))
                .ok_or_else(|| Error::Range(format!("P_{i} does not fit in 64 bits")))?;
            values.push(v);
        }
        Ok(Self { values })
    }

    pub fn get(&self, n: usize) -> Option<u64> {
        self.values.get(n).copied()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// Block structure of a member of `A_n`, keyed on `r`, the index of the value 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactReport {
    pub holds: bool,
    pub r: usize,
    /// `{c_2..c_{r-1}} = {n-r+3..n}`.
    pub high_block_ok: bool,
    /// `{c_{r+1}..c_n} = {3..n-r+2}`.
    pub low_block_ok: bool,
    /// `c_2 = 2`, or the letters after 2 increase.
    pub ascending_tail_ok: bool,
    /// Set when `r = 2`: the tail condition does not apply and is reported as met.
    pub tail_vacuous: bool,
}

pub fn check_fact_structure(c: &StandardCycleWord) -> Result<FactReport> {
    let w = c.as_slice();
    let n = w.len();
    if n < 3 {
        return Err(Error::TooSmall(n));
    }
    let r = c.index_of(2).expect("cycle word of length >= 2 contains 2");
    let high: BTreeSet<usize> = w[1..r - 1].iter().map(|&v| v as usize).collect();
    let low: BTreeSet<usize> = w[r..].iter().map(|&v| v as usize).collect();
    let high_block_ok = high == (n + 3 - r..=n).collect();
    let low_block_ok = low == (3..=n + 2 - r).collect();
    let tail_vacuous = r == 2;
    let ascending_tail_ok = tail_vacuous || w[r..].windows(2).all(|p| p[0] < p[1]);
    Ok(FactReport {
        holds: high_block_ok && low_block_ok && ascending_tail_ok,
        r,
        high_block_ok,
        low_block_ok,
        ascending_tail_ok,
        tail_vacuous,
    })
}

fn shape_error(c: &StandardCycleWord, reason: &str) -> Error {
    Error::Shape {
        word: c.as_slice().to_vec(),
        reason: reason.to_string(),
    }
}

fn rebuild(c: &StandardCycleWord, word: Vec<u8>) -> Result<StandardCycleWord> {
    StandardCycleWord::new(word).map_err(|_| shape_error(c, "image is not a cycle word"))
}

/// `(1, c_2, ..., c_{n-1}, 2) -> (1, c_2 - 1, ..., c_{n-1} - 1)`.
pub fn map_f_21(c: &StandardCycleWord) -> Result<StandardCycleWord> {
    let w = c.as_slice();
    if w.len() < 2 || w[w.len() - 1] != 2 {
        return Err(shape_error(c, "last letter must be 2"));
    }
    let mut out = vec![1];
    out.extend(w[1..w.len() - 1].iter().map(|&v| v - 1));
    rebuild(c, out)
}

/// `(1, c_2, ..., c_{j-1}, 2, 3, ..., m+1) -> (1, c_2 - m, ..., c_{j-1} - m)`
/// with `m = n - j + 1`, for `2 < j < n`.
pub fn map_g_21(c: &StandardCycleWord) -> Result<StandardCycleWord> {
    let w = c.as_slice();
    let n = w.len();
    let j = c
        .index_of(2)
        .ok_or_else(|| shape_error(c, "word has no letter 2"))?;
    if !(2 < j && j < n) {
        return Err(shape_error(c, "index of 2 must satisfy 2 < j < n"));
    }
    let m = (n - j + 1) as u8;
    if !w[j..].iter().zip(3u8..).all(|(&v, want)| v == want) {
        return Err(shape_error(c, "letters after 2 must be 3, 4, ..., n-j+2"));
    }
    let mut out = vec![1];
    for &v in &w[1..j - 1] {
        out.push(
            v.checked_sub(m)
                .ok_or_else(|| shape_error(c, "letter before 2 is too small"))?,
        );
    }
    rebuild(c, out)
}

/// `(1, 2, c_3, ..., c_{n-1}, 3) -> (1, c_3 - 1, ..., c_{n-1} - 1, 2)`.
pub fn map_f_22(c: &StandardCycleWord) -> Result<StandardCycleWord> {
    let w = c.as_slice();
    let n = w.len();
    if n < 3 || w[1] != 2 || w[n - 1] != 3 {
        return Err(shape_error(c, "word must start 1, 2 and end with 3"));
    }
    let mut out = vec![1];
    out.extend(w[2..].iter().map(|&v| v - 1));
    rebuild(c, out)
}

/// `(1, 2, 3, c_4, ..., c_n) -> (1, 2, c_4 - 1, ..., c_n - 1)`.
pub fn map_f_24(c: &StandardCycleWord) -> Result<StandardCycleWord> {
    let w = c.as_slice();
    if w.len() < 3 || w[1] != 2 || w[2] != 3 {
        return Err(shape_error(c, "word must start 1, 2, 3"));
    }
    let mut out = vec![1, 2];
    out.extend(w[3..].iter().map(|&v| v - 1));
    rebuild(c, out)
}

/// The four shape-reducing maps behind the Pell recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaMap {
    /// [`map_f_21`]: `A_n|2@n -> A_{n-1}`.
    #[serde(rename = "f_21")]
    F21,
    /// [`map_g_21`]: `A_n|2@j -> A_{j-1}` for `2 < j < n`.
    #[serde(rename = "g_21")]
    G21,
    /// [`map_f_22`]: `A_n|2@2|3@n -> A_{n-1}|2@(n-1)`.
    #[serde(rename = "f_22")]
    F22,
    /// [`map_f_24`]: `A_n|2@2|3@3 -> A_{n-1}|2@2`.
    #[serde(rename = "f_24")]
    F24,
}

impl LemmaMap {
    pub const ALL: [LemmaMap; 4] = [LemmaMap::F21, LemmaMap::G21, LemmaMap::F22, LemmaMap::F24];

    pub fn apply(self, c: &StandardCycleWord) -> Result<StandardCycleWord> {
        match self {
            LemmaMap::F21 => map_f_21(c),
            LemmaMap::G21 => map_g_21(c),
            LemmaMap::F22 => map_f_22(c),
            LemmaMap::F24 => map_f_24(c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LemmaMap::F21 => "f_21",
            LemmaMap::G21 => "g_21",
            LemmaMap::F22 => "f_22",
            LemmaMap::F24 => "f_24",
        }
    }
}

impl fmt::Display for LemmaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A witness that a map is not a bijection between two enumerated classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defect {
    /// The map refused the element.
    Rejected {
        element: StandardCycleWord,
        reason: String,
    },
    OutsideCodomain {
        element: StandardCycleWord,
        image: StandardCycleWord,
    },
    Collision {
        first: StandardCycleWord,
        second: StandardCycleWord,
        image: StandardCycleWord,
    },
    Unhit {
        element: StandardCycleWord,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub map: LemmaMap,
    pub domain_size: u64,
    /// Distinct images that land in the codomain.
    pub image_size: u64,
    pub codomain_size: u64,
    pub defects: Vec<Defect>,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Enumerates both classes and checks that `map` is a bijection between them.
pub fn verify_bijection(
    domain: &ClassQuery,
    map: LemmaMap,
    codomain: &ClassQuery,
    opts: EnumOptions,
) -> Result<BijectionReport> {
    let dom = enumerate_class(domain, opts)?.members.unwrap_or_default();
    let cod = enumerate_class(codomain, opts)?.members.unwrap_or_default();
    let cod_set: BTreeSet<&StandardCycleWord> = cod.iter().collect();
    let mut preimage: BTreeMap<StandardCycleWord, &StandardCycleWord> = BTreeMap::new();
    let mut defects = Vec::new();
    for x in &dom {
        let image = match map.apply(x) {
            Ok(y) => y,
            Err(e) => {
                defects.push(Defect::Rejected {
                    element: x.clone(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if !cod_set.contains(&image) {
            defects.push(Defect::OutsideCodomain {
                element: x.clone(),
                image,
            });
            continue;
        }
        if let Some(first) = preimage.get(&image) {
            defects.push(Defect::Collision {
                first: (*first).clone(),
                second: x.clone(),
                image,
            });
            continue;
        }
        preimage.insert(image, x);
    }
    for y in &cod {
        if !preimage.contains_key(y) {
            defects.push(Defect::Unhit { element: y.clone() });
        }
    }
    Ok(BijectionReport {
        map,
        domain_size: dom.len() as u64,
        image_size: preimage.len() as u64,
        codomain_size: cod.len() as u64,
        defects,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub n: usize,
    pub count: u64,
    pub pell: u64,
    pub matches: bool,
    /// `count(n) = 2 count(n-1) + count(n-2)`, checked for `n >= 5`.
    pub recurrence_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub n: usize,
    pub value: u8,
    pub parent: u64,
    pub cells: BTreeMap<usize, u64>,
    pub holds: bool,
}

/// One lemma map instance at size `n`, with the anchor index `j` for `G21`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub n: usize,
    pub j: Option<usize>,
    pub report: BijectionReport,
}

/// Exhaustive checks for one pattern pair.
///
/// The lemma maps are only claimed to be bijections for the default pair
/// (2431, 1324); other pairs can be run through the same scaffold.
#[derive(Debug, Clone)]
pub struct TheoremSuite {
    pub sigma: Pattern,
    pub tau: Pattern,
    pub opts: EnumOptions,
    pub convention: Convention,
}

impl Default for TheoremSuite {
    fn default() -> Self {
        let q = ClassQuery::pell_pair(1);
        Self {
            sigma: q.sigma,
            tau: q.tau,
            opts: EnumOptions::default(),
            convention: Convention::Paper,
        }
    }
}

impl TheoremSuite {
    pub fn with_options(mut self, opts: EnumOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    /// `A_n` for this suite's pattern pair, without anchors.
    pub fn query(&self, n: usize) -> ClassQuery {
        ClassQuery::new(n, self.sigma.clone(), self.tau.clone(), AvoidanceMode::AllCycles)
    }

    pub fn count(&self, q: &ClassQuery) -> Result<u64> {
        Ok(count_class(q, self.opts)?.count)
    }

    /// `|A_n|` under the suite's convention for `n = 1`.
    pub fn class_size(&self, n: usize) -> Result<u64> {
        Ok(self.convention.apply(n, self.count(&self.query(n))?))
    }

    /// Rows for `1 <= n <= max_n`. The `n = 1` row follows the convention and
    /// is informational; see [`theorem_holds`].
    pub fn verify_theorem(&self, max_n: usize) -> Result<Vec<TheoremRow>> {
        if max_n < 2 {
            return Err(Error::Range(format!("max_n = {max_n} must be at least 2")));
        }
        let pells = PellTable::new(max_n - 1)?;
        let mut rows: Vec<TheoremRow> = Vec::with_capacity(max_n);
        for n in 1..=max_n {
            let count = self.class_size(n)?;
            let pell = pells.get(n - 1).expect("table covers n - 1");
            let recurrence_ok = (n >= 5).then(|| {
                let (a, b) = (rows[n - 2].count, rows[n - 3].count);
                a.checked_mul(2).and_then(|d| d.checked_add(b)) == Some(count)
            });
            rows.push(TheoremRow {
                n,
                count,
                pell,
                matches: count == pell,
                recurrence_ok,
            });
        }
        Ok(rows)
    }

    /// Block structure of every member of `A_n`; returns the failing members.
    pub fn check_fact(&self, n: usize) -> Result<(u64, Vec<(StandardCycleWord, FactReport)>)> {
        if n < 3 {
            return Err(Error::TooSmall(n));
        }
        let members = enumerate_class(&self.query(n), self.opts)?
            .members
            .unwrap_or_default();
        let mut failures = Vec::new();
        for m in &members {
            let report = check_fact_structure(m)?;
            if !report.holds {
                failures.push((m.clone(), report));
            }
        }
        Ok((members.len() as u64, failures))
    }

    /// Domain and codomain of each lemma map at size `n`.
    pub fn lemma_instances(&self, n: usize) -> Vec<(LemmaMap, Option<usize>, ClassQuery, ClassQuery)> {
        let a = |m: usize| self.query(m);
        let mut out = vec![(LemmaMap::F21, None, a(n).with_anchor(2, n), a(n - 1))];
        for j in 3..n {
            out.push((LemmaMap::G21, Some(j), a(n).with_anchor(2, j), a(j - 1)));
        }
        out.push((
            LemmaMap::F22,
            None,
            a(n).with_anchor(2, 2).with_anchor(3, n),
            a(n - 1).with_anchor(2, n - 1),
        ));
        out.push((
            LemmaMap::F24,
            None,
            a(n).with_anchor(2, 2).with_anchor(3, 3),
            a(n - 1).with_anchor(2, 2),
        ));
        out
    }

    /// Every lemma map instance at size `n >= 5`.
    pub fn verify_lemma_bijections(&self, n: usize) -> Result<Vec<LemmaCheck>> {
        if n < 5 {
            return Err(Error::Range(format!("lemma maps are checked for n >= 5, got {n}")));
        }
        self.lemma_instances(n)
            .into_iter()
            .map(|(map, j, dom, cod)| {
                Ok(LemmaCheck {
                    n,
                    j,
                    report: verify_bijection(&dom, map, &cod, self.opts)?,
                })
            })
            .collect()
    }

    /// Counts of `A_n|2@2|3@j` for `3 < j < n`.
    pub fn lemma_23_counts(&self, n: usize) -> Result<BTreeMap<usize, u64>> {
        if n < 5 {
            return Err(Error::Range(format!("emptiness is checked for n >= 5, got {n}")));
        }
        (4..n)
            .map(|j| {
                let q = self.query(n).with_anchor(2, 2).with_anchor(3, j);
                Ok((j, self.count(&q)?))
            })
            .collect()
    }

    pub fn verify_lemma_23(&self, n: usize) -> Result<bool> {
        Ok(self.lemma_23_counts(n)?.values().all(|&c| c == 0))
    }

    /// Partition of `A_n|2@2|...|(v-1)@(v-1)` by the index of `v`.
    pub fn verify_partition(&self, n: usize, value: u8) -> Result<PartitionReport> {
        if n < 3 {
            return Err(Error::TooSmall(n));
        }
        let mut base = self.query(n);
        for u in 2..value {
            base = base.with_anchor(u, u as usize);
        }
        let parent = self.count(&base)?;
        let cells = crate::class::partition_by_anchor(&base, value, self.opts)?;
        let sum = cells.values().try_fold(0u64, |acc, &c| acc.checked_add(c));
        Ok(PartitionReport {
            n,
            value,
            parent,
            holds: sum == Some(parent),
            cells,
        })
    }
}

/// Whether every row with `n >= 2` matches Pell and satisfies the recurrence.
pub fn theorem_holds(rows: &[TheoremRow]) -> bool {
    rows.iter()
        .filter(|r| r.n >= 2)
        .all(|r| r.matches && r.recurrence_ok != Some(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(w: &[u8]) -> StandardCycleWord {
        StandardCycleWord::new(w.to_vec()).unwrap()
    }

    /// `[[2, 1], [1, 0]]^n = [[P_{n+1}, P_n], [P_n, P_{n-1}]]`.
    fn pell_by_matrix(n: u32) -> u128 {
        type M = [[u128; 2]; 2];
        let mul = |a: M, b: M| -> M {
            let mut c = [[0u128; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        };
        let (mut acc, mut base, mut e) = ([[1, 0], [0, 1]], [[2, 1], [1, 0]], n);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc[0][1]
    }

    #[test]
    fn pell_examples() {
        assert_eq!(pell(0).unwrap(), 0);
        assert_eq!(pell(1).unwrap(), 1);
        assert_eq!(pell(5).unwrap(), 29);
        assert!(pell(51).is_ok());
        assert!(matches!(pell(52), Err(Error::Range(_))));
        assert!(PellTable::new(52).is_err());
    }

    #[test]
    fn pell_routes_agree() {
        let table = PellTable::new(51).unwrap();
        for n in 0..=51usize {
            assert_eq!(pell(n).unwrap(), table.get(n).unwrap());
            assert_eq!(pell(n).unwrap() as u128, pell_by_matrix(n as u32), "n = {n}");
        }
        assert_eq!(&table.values()[..7], &[0, 1, 2, 5, 12, 29, 70]);
        assert!(table.values().windows(3).all(|w| w[2] == 2 * w[1] + w[0]));
    }

    #[test]
    fn fact_examples() {
        let r = check_fact_structure(&sw(&[1, 5, 2, 3, 4])).unwrap();
        assert!(r.holds);
        assert_eq!(r.r, 3);
        let r = check_fact_structure(&sw(&[1, 2, 4, 3])).unwrap();
        assert!(r.holds && r.tail_vacuous && r.r == 2);
        let r = check_fact_structure(&sw(&[1, 3, 4, 5, 2])).unwrap();
        assert!(r.holds && r.r == 5);
        let r = check_fact_structure(&sw(&[1, 3, 2, 4])).unwrap();
        assert!(!r.holds && !r.high_block_ok && !r.low_block_ok);
        let r = check_fact_structure(&sw(&[1, 5, 2, 4, 3])).unwrap();
        assert!(r.high_block_ok && r.low_block_ok && !r.ascending_tail_ok && !r.holds);
        assert_eq!(check_fact_structure(&sw(&[1, 2])), Err(Error::TooSmall(2)));
    }

    #[test]
    fn map_examples() {
        assert_eq!(map_f_21(&sw(&[1, 3, 4, 5, 2])).unwrap(), sw(&[1, 2, 3, 4]));
        assert_eq!(map_f_21(&sw(&[1, 2])).unwrap(), sw(&[1]));
        assert_eq!(map_f_21(&sw(&[1, 4, 3, 2])).unwrap(), sw(&[1, 3, 2]));
        assert!(matches!(map_f_21(&sw(&[1, 2, 3])), Err(Error::Shape { .. })));

        assert_eq!(map_g_21(&sw(&[1, 5, 2, 3, 4])).unwrap(), sw(&[1, 2]));
        assert_eq!(map_g_21(&sw(&[1, 5, 6, 2, 3, 4])).unwrap(), sw(&[1, 2, 3]));
        assert!(matches!(map_g_21(&sw(&[1, 5, 2, 4, 3])), Err(Error::Shape { .. })));
        assert!(matches!(map_g_21(&sw(&[1, 2, 3, 4])), Err(Error::Shape { .. })));
        assert!(matches!(map_g_21(&sw(&[1, 3, 4, 2])), Err(Error::Shape { .. })));
        // Ascending tail but the letters before 2 are not the high block.
        assert!(matches!(map_g_21(&sw(&[1, 4, 2, 3, 5])), Err(Error::Shape { .. })));

        assert_eq!(map_f_22(&sw(&[1, 2, 5, 4, 3])).unwrap(), sw(&[1, 4, 3, 2]));
        assert_eq!(map_f_22(&sw(&[1, 2, 4, 5, 3])).unwrap(), sw(&[1, 3, 4, 2]));
        assert!(matches!(map_f_22(&sw(&[1, 3, 5, 4, 2])), Err(Error::Shape { .. })));

        assert_eq!(map_f_24(&sw(&[1, 2, 3, 4, 5])).unwrap(), sw(&[1, 2, 3, 4]));
        assert_eq!(map_f_24(&sw(&[1, 2, 3, 5, 4])).unwrap(), sw(&[1, 2, 4, 3]));
        assert!(matches!(map_f_24(&sw(&[1, 3, 2, 4, 5])), Err(Error::Shape { .. })));
    }

    #[test]
    fn bijection_examples() {
        let suite = TheoremSuite::default();
        let opts = suite.opts;
        let r = verify_bijection(
            &suite.query(5).with_anchor(2, 5),
            LemmaMap::F21,
            &suite.query(4),
            opts,
        )
        .unwrap();
        assert!(r.is_bijection());
        assert_eq!((r.domain_size, r.image_size, r.codomain_size), (5, 5, 5));

        let r = verify_bijection(
            &suite.query(5).with_anchor(2, 3),
            LemmaMap::G21,
            &suite.query(2),
            opts,
        )
        .unwrap();
        assert!(r.is_bijection());
        assert_eq!((r.domain_size, r.codomain_size), (1, 1));

        let r = verify_bijection(
            &suite.query(6).with_anchor(2, 2).with_anchor(3, 6),
            LemmaMap::F22,
            &suite.query(5).with_anchor(2, 5),
            opts,
        )
        .unwrap();
        assert!(r.is_bijection());
        assert_eq!(r.domain_size, r.codomain_size);
    }

    #[test]
    fn bijection_defects_carry_witnesses() {
        let suite = TheoremSuite::default();
        let opts = suite.opts;
        // Images have length 4, so none lands in A_3.
        let r = verify_bijection(
            &suite.query(5).with_anchor(2, 5),
            LemmaMap::F21,
            &suite.query(3),
            opts,
        )
        .unwrap();
        assert!(!r.is_bijection());
        assert_eq!(r.image_size, 0);
        assert!(r.defects.iter().any(|d| matches!(d, Defect::OutsideCodomain { .. })));
        assert!(r.defects.iter().any(|d| matches!(d, Defect::Unhit { .. })));

        // Wrong map: the domain ends with 2, so f_24 rejects most elements.
        let r = verify_bijection(
            &suite.query(5).with_anchor(2, 5),
            LemmaMap::F24,
            &suite.query(4),
            opts,
        )
        .unwrap();
        assert!(r.defects.iter().any(|d| matches!(d, Defect::Rejected { .. })));

        // Only (1,3,2) in A_3 ends with 2.
        let r = verify_bijection(&suite.query(3), LemmaMap::F21, &suite.query(2), opts).unwrap();
        assert!(r.defects.iter().any(|d| matches!(d, Defect::Rejected { .. })));
        assert_eq!(r.image_size, 1);
    }

    #[test]
    fn theorem_small() {
        let suite = TheoremSuite::default();
        let rows = suite.verify_theorem(5).unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![0, 1, 2, 5, 12]);
        assert_eq!(rows[4].recurrence_ok, Some(true));
        assert!(rows[..4].iter().all(|r| r.recurrence_ok.is_none()));
        assert!(theorem_holds(&rows));

        let structural = suite.clone().with_convention(Convention::Structural);
        let rows = structural.verify_theorem(4).unwrap();
        assert_eq!(rows[0].count, 1);
        assert!(!rows[0].matches);
        assert!(theorem_holds(&rows));
        assert!(suite.verify_theorem(1).is_err());
    }

    #[test]
    fn lemma_23_and_partitions() {
        let suite = TheoremSuite::default();
        assert!(suite.verify_lemma_23(5).unwrap());
        assert!(suite.verify_lemma_23(6).unwrap());
        assert!(suite.verify_lemma_23(4).is_err());
        let p = suite.verify_partition(4, 2).unwrap();
        assert!(p.holds);
        assert_eq!(p.parent, 5);
        let p = suite.verify_partition(6, 3).unwrap();
        assert!(p.holds);
        assert_eq!(p.cells.keys().copied().collect::<Vec<_>>(), vec![3, 4, 5, 6]);
        assert!(suite.verify_partition(3, 2).unwrap().holds);
    }
}
