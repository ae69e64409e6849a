//! Enumeration and counting of avoidance classes of n-cycles.
//!
//! A class is described by a [`ClassQuery`]: the size `n`, a one-line pattern
//! `sigma`, a cycle-form pattern `tau`, an [`AvoidanceMode`], and optional
//! anchors pinning values to indices of the standard cycle word. Members are
//! always reported as standard cycle words in lexicographic order.
//!
//! Two engines produce identical results:
//!
//! - [`Engine::BruteForce`] walks all `(n-1)!` standard cycle words and filters
//!   them with [`avoids_in_mode`].
//! - [`Engine::Pruned`] grows the standard cycle word letter by letter while
//!   tracking the one-line entries fixed so far (`π(c_i) = c_{i+1}`), and cuts
//!   a branch once the decided letters already contain an occurrence: `sigma`
//!   in the partial one-line word, or `tau` in the prefix (standard-cycle mode)
//!   or in some rotation of the prefix (all-cycles mode). Each rotation of the
//!   prefix `c1..ck` is a subsequence of the matching rotation of the full
//!   word, so the cut never discards a member.
//!
//! Work is split by the second letter `c2`; since it is the leading key of the
//! canonical order, concatenating per-`c2` results in job order yields the
//! sorted class regardless of the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{avoids_all_rotations, avoids_in_mode, contains, AvoidanceMode, Pattern};
use crate::perm::{next_permutation, CycleWord, StandardCycleWord};
use crate::MAX_N;

/// Requires the standard cycle word to have `value` at 1-based `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Anchor {
    pub value: u8,
    pub index: usize,
}

impl Anchor {
    pub fn new(value: u8, index: usize) -> Self {
        Self { value, index }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.index)
    }
}

/// Parses `v@j`.
impl FromStr for Anchor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Query(format!("anchor {s:?} is not of the form value@index"));
        let (v, j) = s.split_once('@').ok_or_else(bad)?;
        Ok(Anchor {
            value: v.trim().parse().map_err(|_| bad())?,
            index: j.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// How to count the 1-cycle `(1)`, which vacuously avoids every pattern of
/// length at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `(1)` is not a cycle permutation: the class at `n = 1` is empty.
    #[default]
    Paper,
    /// Count whatever the enumerator finds, including `(1)`.
    Structural,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Structural => "structural",
        }
    }

    /// Adjusts a structural count for size `n`.
    pub fn apply(self, n: usize, structural_count: u64) -> u64 {
        match self {
            Convention::Paper if n == 1 => 0,
            _ => structural_count,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "structural" => Ok(Convention::Structural),
            other => Err(Error::Range(format!("unknown convention {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassQuery {
    pub n: usize,
    pub sigma: Pattern,
    pub tau: Pattern,
    pub mode: AvoidanceMode,
    pub anchors: Vec<Anchor>,
}

impl ClassQuery {
    pub fn new(n: usize, sigma: Pattern, tau: Pattern, mode: AvoidanceMode) -> Self {
        Self {
            n,
            sigma,
            tau,
            mode,
            anchors: Vec::new(),
        }
    }

    /// Avoid 2431 in one-line form and 1324 in all cycle forms.
    pub fn pell_pair(n: usize) -> Self {
        Self::new(
            n,
            Pattern::new(vec![2, 4, 3, 1]).expect("valid pattern"),
            Pattern::new(vec![1, 3, 2, 4]).expect("valid pattern"),
            AvoidanceMode::AllCycles,
        )
    }

    pub fn with_anchor(mut self, value: u8, index: usize) -> Self {
        self.anchors.push(Anchor::new(value, index));
        self
    }

    /// Same patterns and anchors at a different size.
    pub fn resized(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    /// Validated anchors sorted by index, with duplicates and the implicit
    /// `1@1` removed.
    pub fn canonical_anchors(&self) -> Result<Vec<Anchor>> {
        let n = self.n;
        if n == 0 || n > MAX_N {
            return Err(Error::Query(format!("n = {n} outside 1..={MAX_N}")));
        }
        let mut anchors = self.anchors.clone();
        anchors.sort();
        anchors.dedup();
        let mut value_at = [0u8; MAX_N + 1];
        let mut index_of = [0usize; MAX_N + 1];
        let mut out = Vec::with_capacity(anchors.len());
        for a in anchors {
            if a.index == 0 || a.index > n || a.value == 0 || a.value as usize > n {
                return Err(Error::Query(format!("anchor {a} out of range for n = {n}")));
            }
            if (a.value == 1) != (a.index == 1) {
                return Err(Error::Query(format!(
                    "anchor {a} conflicts with the leading 1 of the standard cycle word"
                )));
            }
            if value_at[a.index] != 0 || index_of[a.value as usize] != 0 {
                return Err(Error::Query(format!("anchor {a} conflicts with another anchor")));
            }
            value_at[a.index] = a.value;
            index_of[a.value as usize] = a.index;
            if a.value != 1 {
                out.push(a);
            }
        }
        out.sort_by_key(|a| a.index);
        Ok(out)
    }

    /// Stable textual key for caches: patterns comma-separated, anchors sorted.
    pub fn canonical_key(&self) -> Result<String> {
        let anchors: Vec<String> = self
            .canonical_anchors()?
            .iter()
            .map(ToString::to_string)
            .collect();
        Ok(format!(
            "n={};sigma={};tau={};mode={};anchors={}",
            self.n,
            self.sigma.to_comma_string(),
            self.tau.to_comma_string(),
            self.mode,
            anchors.join(",")
        ))
    }

    /// Whether a standard cycle word satisfies every anchor.
    pub fn matches_anchors(&self, word: &[u8]) -> bool {
        self.anchors
            .iter()
            .all(|a| word.get(a.index - 1) == Some(&a.value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<StandardCycleWord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    BruteForce,
    #[default]
    Pruned,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute-force" | "brute" => Ok(Engine::BruteForce),
            "pruned" => Ok(Engine::Pruned),
            other => Err(Error::Range(format!("unknown engine {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub engine: Engine,
    /// Worker threads; `0` and `1` both mean run on the calling thread.
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            engine: Engine::Pruned,
            workers: 1,
        }
    }
}

impl EnumOptions {
    pub fn new(engine: Engine, workers: usize) -> Self {
        Self { engine, workers }
    }
}

/// A validated query in lookup-table form.
struct Plan<'q> {
    n: usize,
    sigma: &'q Pattern,
    tau: &'q Pattern,
    mode: AvoidanceMode,
    query: &'q ClassQuery,
    /// `value_at[j]`: anchored value at index `j`, or 0.
    value_at: [u8; MAX_N + 1],
    /// `index_of[v]`: anchored index of value `v`, or 0.
    index_of: [usize; MAX_N + 1],
}

impl<'q> Plan<'q> {
    fn new(query: &'q ClassQuery) -> Result<Self> {
        let anchors = query.canonical_anchors()?;
        let mut value_at = [0u8; MAX_N + 1];
        let mut index_of = [0usize; MAX_N + 1];
        for a in &anchors {
            value_at[a.index] = a.value;
            index_of[a.value as usize] = a.index;
        }
        Ok(Self {
            n: query.n,
            sigma: &query.sigma,
            tau: &query.tau,
            mode: query.mode,
            query,
            value_at,
            index_of,
        })
    }

    /// Letters allowed at 1-based `index`, ascending, ignoring letters already used.
    fn candidates(&self, index: usize, used: u32) -> impl Iterator<Item = u8> + '_ {
        let forced = self.value_at[index];
        (2..=self.n as u8).filter(move |&v| {
            used & (1 << v) == 0
                && if forced != 0 {
                    v == forced
                } else {
                    self.index_of[v as usize] == 0
                }
        })
    }

    /// The `c2` values that head the per-worker jobs.
    fn jobs(&self) -> Vec<u8> {
        if self.n == 1 {
            vec![0]
        } else {
            self.candidates(2, 0).collect()
        }
    }

    /// Visits the members with second letter `c2` (or the lone 1-cycle when
    /// `c2 == 0`) in canonical order. Returns `Break` if `visit` asked to stop.
    fn run_job<F>(&self, engine: Engine, c2: u8, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u8]) -> ControlFlow<()>,
    {
        if c2 == 0 {
            let c = CycleWord::new(vec![1]).expect("(1) is a cycle word");
            if avoids_in_mode(&c, self.sigma, self.tau, self.mode) {
                return visit(c.as_slice());
            }
            return ControlFlow::Continue(());
        }
        match engine {
            Engine::BruteForce => self.brute_force_job(c2, visit),
            Engine::Pruned => {
                let mut dfs = Dfs::new(self);
                dfs.push(c2);
                if dfs.prefix_ok() {
                    dfs.descend(visit)
                } else {
                    ControlFlow::Continue(())
                }
            }
        }
    }

    fn brute_force_job<F>(&self, c2: u8, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u8]) -> ControlFlow<()>,
    {
        let mut word: Vec<u8> = vec![1, c2];
        word.extend((2..=self.n as u8).filter(|&v| v != c2));
        loop {
            if self.query.matches_anchors(&word) {
                let c = CycleWord::new(word.clone()).expect("generated word is a cycle word");
                if avoids_in_mode(&c, self.sigma, self.tau, self.mode) {
                    visit(&word)?;
                }
            }
            if !next_permutation(&mut word[2..]) {
                return ControlFlow::Continue(());
            }
        }
    }
}

/// Depth-first growth of a standard cycle word.
struct Dfs<'p, 'q> {
    plan: &'p Plan<'q>,
    word: Vec<u8>,
    used: u32,
    /// `oneline[p] = π(p)` once decided, else 0.
    oneline: [u8; MAX_N + 1],
    scratch: Vec<u8>,
}

impl<'p, 'q> Dfs<'p, 'q> {
    fn new(plan: &'p Plan<'q>) -> Self {
        let mut word = Vec::with_capacity(plan.n);
        word.push(1);
        Self {
            plan,
            word,
            used: 1 << 1,
            oneline: [0; MAX_N + 1],
            scratch: Vec::with_capacity(plan.n),
        }
    }

    fn push(&mut self, v: u8) {
        let last = *self.word.last().expect("word starts with 1");
        self.oneline[last as usize] = v;
        self.word.push(v);
        self.used |= 1 << v;
    }

    fn pop(&mut self) {
        let v = self.word.pop().expect("never pops the leading 1");
        self.used &= !(1 << v);
        let last = *self.word.last().expect("word starts with 1");
        self.oneline[last as usize] = 0;
    }

    /// Whether the decided one-line entries avoid `sigma`.
    fn oneline_ok(&mut self) -> bool {
        let sigma = self.plan.sigma;
        // Entries decided so far: one per letter except the last.
        if self.word.len() - 1 < sigma.len() && self.word.len() < self.plan.n {
            return true;
        }
        self.scratch.clear();
        self.scratch.extend(
            self.oneline[1..=self.plan.n]
                .iter()
                .copied()
                .filter(|&v| v != 0),
        );
        !contains(&self.scratch, sigma)
    }

    fn cycle_ok(&self) -> bool {
        match self.plan.mode {
            AvoidanceMode::OneLineOnly => true,
            AvoidanceMode::StandardCycle => !contains(&self.word, self.plan.tau),
            AvoidanceMode::AllCycles => avoids_all_rotations(&self.word, self.plan.tau),
        }
    }

    fn prefix_ok(&mut self) -> bool {
        self.cycle_ok() && self.oneline_ok()
    }

    fn descend<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u8]) -> ControlFlow<()>,
    {
        let n = self.plan.n;
        let k = self.word.len();
        if k == n {
            let last = self.word[n - 1] as usize;
            self.oneline[last] = 1;
            let ok = self.oneline_ok();
            self.oneline[last] = 0;
            return if ok {
                visit(&self.word)
            } else {
                ControlFlow::Continue(())
            };
        }
        let plan = self.plan;
        for v in plan.candidates(k + 1, self.used) {
            self.push(v);
            let flow = if self.prefix_ok() {
                self.descend(visit)
            } else {
                ControlFlow::Continue(())
            };
            self.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Runs `job` over `jobs` on up to `workers` threads; results keep job order.
fn run_jobs<R, F>(jobs: &[u8], workers: usize, job: F) -> Vec<R>
where
    R: Send,
    F: Fn(u8) -> R + Sync,
{
    let workers = workers.min(jobs.len());
    if workers <= 1 {
        return jobs.iter().map(|&c2| job(c2)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = job(jobs[i]);
                slots.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// Every member of the class, in canonical order.
pub fn enumerate_class(query: &ClassQuery, opts: EnumOptions) -> Result<ClassResult> {
    let plan = Plan::new(query)?;
    let parts = run_jobs(&plan.jobs(), opts.workers, |c2| {
        let mut out = Vec::new();
        let _ = plan.run_job(opts.engine, c2, &mut |w: &[u8]| {
            out.push(StandardCycleWord::from_trusted(w.to_vec()));
            ControlFlow::Continue(())
        });
        out
    });
    let members: Vec<StandardCycleWord> = parts.into_iter().flatten().collect();
    Ok(ClassResult {
        count: members.len() as u64,
        members: Some(members),
    })
}

/// The class size, without materialising members.
pub fn count_class(query: &ClassQuery, opts: EnumOptions) -> Result<ClassResult> {
    let plan = Plan::new(query)?;
    let parts = run_jobs(&plan.jobs(), opts.workers, |c2| {
        let mut count: Option<u64> = Some(0);
        let _ = plan.run_job(opts.engine, c2, &mut |_: &[u8]| {
            count = count.and_then(|c| c.checked_add(1));
            if count.is_some() {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            }
        });
        count
    });
    let count = parts
        .into_iter()
        .try_fold(0u64, |acc, c| c.and_then(|c| acc.checked_add(c)))
        .ok_or(Error::Overflow)?;
    Ok(ClassResult {
        count,
        members: None,
    })
}

/// Streams members in canonical order on the calling thread until `visit`
/// breaks.
pub fn visit_class<F>(query: &ClassQuery, engine: Engine, mut visit: F) -> Result<()>
where
    F: FnMut(&StandardCycleWord) -> ControlFlow<()>,
{
    let plan = Plan::new(query)?;
    for c2 in plan.jobs() {
        let flow = plan.run_job(engine, c2, &mut |w: &[u8]| {
            visit(&StandardCycleWord::from_trusted(w.to_vec()))
        });
        if flow.is_break() {
            break;
        }
    }
    Ok(())
}

/// Counts of the subclasses of `base` with `value` at each free index `j >= 2`.
///
/// The cells partition `base`, so their sum is the count of `base` itself.
pub fn partition_by_anchor(
    base: &ClassQuery,
    value: u8,
    opts: EnumOptions,
) -> Result<BTreeMap<usize, u64>> {
    let anchors = base.canonical_anchors()?;
    if value < 2 || value as usize > base.n {
        return Err(Error::Range(format!(
            "partition value {value} outside 2..={}",
            base.n
        )));
    }
    if anchors.iter().any(|a| a.value == value) {
        return Err(Error::Range(format!(
            "value {value} is already anchored in the base class"
        )));
    }
    let mut cells = BTreeMap::new();
    for j in 2..=base.n {
        if anchors.iter().any(|a| a.index == j) {
            continue;
        }
        let q = base.clone().with_anchor(value, j);
        cells.insert(j, count_class(&q, opts)?.count);
    }
    Ok(cells)
}
