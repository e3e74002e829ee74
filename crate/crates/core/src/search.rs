//! Exhaustive search for GF(2) curves on the Fermat quintic.
//!
//! Six forms `G_0, ..., G_5` of degree `d` lie on the hypersurface when
//! `G_0^5 + G_1^5 + G_2^5 = G_3^5 + G_4^5 + G_5^5` (characteristic 2). The
//! search hashes half-tuples by their fifth-power sum and joins equal keys.
//! Half-tuples are taken sorted (`a <= b <= c`), and a join `(L, R)` is kept
//! only when `max L <= min R`, so every multiset of six forms is produced
//! exactly once; exact tuples are recovered by expanding permutations.
//!
//! Work is split into shards by a hash of the join key. Each shard sees every
//! multiset whose key it owns, so the union over shards is the full answer
//! and shards can run independently.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    paper_check, ClassificationReport, Classifier, ClassifyError, Contradiction,
};
use crate::curve::{CurveMap, COORDINATES};
use crate::packed::{clmul, is_primitive, spread4, PackedForm};

/// Highest degree searched without an explicit opt-in.
pub const DEFAULT_DEGREE_CAP: usize = 8;
/// Hard limit: half-tuple indices are packed into 10 bits per form.
pub const MAX_SEARCH_DEGREE: usize = 9;
/// Environment variable that overrides [`DEFAULT_DEGREE_CAP`].
pub const DEGREE_CAP_ENV: &str = "FERMAT5_DEGREE_CAP";
/// Default memory budget for one shard's join table.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("degree {degree} exceeds the search cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("shard {index} out of range for {count} shards")]
    BadShard { index: usize, count: usize },
    #[error("a shard needs about {needed} bytes, over the budget of {budget}; use at least {suggested_shards} shards")]
    MemoryBudgetExceeded {
        needed: usize,
        budget: usize,
        suggested_shards: usize,
    },
    #[error("classification failed: {0}")]
    Classify(#[from] ClassifyError),
    #[error("prefilter and classifier disagree on freeness for\n{curve}")]
    PrefilterMismatch { curve: String },
    #[error("result contradicts known bounds: {}", .0.reason)]
    ContradictsPaper(Contradiction, Box<CurveMap>),
}

/// How repeated curves are collapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dedup {
    /// Every ordered 6-tuple is its own curve.
    #[default]
    Exact,
    /// One representative per multiset: the tuple sorted by encoding.
    Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTask {
    pub degree: usize,
    pub dedup: Dedup,
    /// Also identify a curve with its `S <-> T` swap (keeps the smaller).
    pub swap_symmetry: bool,
    /// Process only this shard out of `shard_count`; `None` runs all of them.
    pub shard: Option<usize>,
    pub shard_count: usize,
    pub degree_cap: usize,
    pub memory_budget: usize,
    /// Worker threads for shard-level parallelism.
    pub threads: usize,
}

impl SearchTask {
    pub fn new(degree: usize) -> SearchTask {
        SearchTask {
            degree,
            dedup: Dedup::Exact,
            swap_symmetry: false,
            shard: None,
            shard_count: 1,
            degree_cap: DEFAULT_DEGREE_CAP,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            threads: 1,
        }
    }

    pub fn with_shards(mut self, count: usize) -> Self {
        self.shard_count = count;
        self
    }

    pub fn with_dedup(mut self, dedup: Dedup) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.degree == 0 {
            return Err(SearchError::ZeroDegree);
        }
        let cap = self.degree_cap.min(MAX_SEARCH_DEGREE);
        if self.degree > cap {
            return Err(SearchError::DegreeCapExceeded {
                degree: self.degree,
                cap,
            });
        }
        if self.shard_count == 0 {
            return Err(SearchError::BadShard { index: 0, count: 0 });
        }
        if let Some(index) = self.shard {
            if index >= self.shard_count {
                return Err(SearchError::BadShard {
                    index,
                    count: self.shard_count,
                });
            }
        }
        let needed = shard_table_bytes(self.degree, self.shard_count);
        if needed > self.memory_budget {
            let total = shard_table_bytes(self.degree, 1);
            return Err(SearchError::MemoryBudgetExceeded {
                needed,
                budget: self.memory_budget,
                suggested_shards: total.div_ceil(self.memory_budget.max(1)) + 1,
            });
        }
        Ok(())
    }

    fn shards(&self) -> Vec<usize> {
        match self.shard {
            Some(i) => vec![i],
            None => (0..self.shard_count).collect(),
        }
    }
}

/// The degree cap from [`DEGREE_CAP_ENV`], or the default when unset or
/// unparsable.
pub fn degree_cap_from_env() -> usize {
    std::env::var(DEGREE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

fn sorted_triples(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

/// Estimated bytes for one shard's join table.
pub fn shard_table_bytes(degree: usize, shards: usize) -> usize {
    let n = 1usize << (degree + 1);
    // (key, triple) entries with some slack for uneven shards
    sorted_triples(n) * 16 / shards.max(1) * 5 / 4
}

/// Fifth powers of all forms of degree `d`, indexed by their encoding.
pub fn fifth_power_table(degree: usize) -> Vec<u64> {
    (0..1u64 << (degree + 1))
        .map(|g| clmul(spread4(g), g) as u64)
        .collect()
}

#[inline]
fn shard_of(key: u64, count: usize) -> usize {
    if count == 1 {
        return 0;
    }
    let h = key.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    ((h >> 32) % count as u64) as usize
}

const FIELD_BITS: u32 = 10;
const FIELD_MASK: u32 = (1 << FIELD_BITS) - 1;

#[inline]
fn unpack(t: u32) -> (u64, u64, u64) {
    (
        (t & FIELD_MASK) as u64,
        ((t >> FIELD_BITS) & FIELD_MASK) as u64,
        (t >> (2 * FIELD_BITS)) as u64,
    )
}

/// Call `visit` with every sorted 6-tuple `w_0 <= ... <= w_5` of degree-`d`
/// words with zero fifth-power sum whose join key belongs to `shard`.
pub fn for_each_multiset<F>(degree: usize, shard: usize, shard_count: usize, mut visit: F)
where
    F: FnMut(&[u64; COORDINATES]),
{
    assert!(degree <= MAX_SEARCH_DEGREE);
    let p5 = fifth_power_table(degree);
    let n = p5.len() as u64;
    let mut table: Vec<(u64, u32)> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let ab = p5[a as usize] ^ p5[b as usize];
            for c in b..n {
                let key = ab ^ p5[c as usize];
                if shard_of(key, shard_count) == shard {
                    let packed = (a | b << FIELD_BITS | c << (2 * FIELD_BITS)) as u32;
                    table.push((key, packed));
                }
            }
        }
    }
    // Group by key; inside a group order by the largest form, which is the
    // top field of the packed triple.
    table.sort_unstable_by(|x, y| match x.0.cmp(&y.0) {
        Ordering::Equal => (x.1 >> (2 * FIELD_BITS)).cmp(&(y.1 >> (2 * FIELD_BITS))),
        other => other,
    });
    let mut start = 0;
    while start < table.len() {
        let key = table[start].0;
        let mut end = start + 1;
        while end < table.len() && table[end].0 == key {
            end += 1;
        }
        let group = &table[start..end];
        for &(_, right) in group {
            let (ra, rb, rc) = unpack(right);
            for &(_, left) in group {
                let (la, lb, lc) = unpack(left);
                if lc > ra {
                    break;
                }
                visit(&[la, lb, lc, ra, rb, rc]);
            }
        }
        start = end;
    }
}

/// Distinct orderings of a sorted tuple, in lexicographic order.
pub fn permutations(sorted: &[u64; COORDINATES]) -> Vec<[u64; COORDINATES]> {
    let mut cur = *sorted;
    let mut out = vec![cur];
    loop {
        // next lexicographic permutation
        let Some(i) = (0..COORDINATES - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..COORDINATES)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur);
    }
}

/// Number of distinct orderings of a sorted tuple.
pub fn orbit_size(sorted: &[u64; COORDINATES]) -> u64 {
    let mut size = 720u64;
    let mut run = 1u64;
    for i in 1..=COORDINATES {
        if i < COORDINATES && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            for k in 2..=run {
                size /= k;
            }
            run = 1;
        }
    }
    size
}

fn swapped_sorted(degree: usize, words: &[u64; COORDINATES]) -> [u64; COORDINATES] {
    let mut w = words.map(|x| PackedForm::new(degree, x).swap_variables().bits());
    w.sort_unstable();
    w
}

/// Freeness from the plain-degree-`(D-1)` piece of `(A_i) -> sum A_i G_i`,
/// `D = floor(d/4)`.
///
/// A primitive curve is free exactly when every cotangent generator has
/// plain degree at most `D`; as the generator degrees sum to `d`, that
/// happens exactly when the map is onto `R_(d+D-1)` in plain degree `D - 1`.
pub fn free_by_surjectivity(degree: usize, words: &[u64; COORDINATES]) -> bool {
    let top = degree / 4;
    if top == 0 {
        return false;
    }
    let target_dim = degree + top;
    let mut pivots: Vec<u64> = Vec::with_capacity(target_dim);
    for &g in words {
        for a in 0..top {
            let mut v = g << a;
            for &p in &pivots {
                let lead = 63 - p.leading_zeros();
                if (v >> lead) & 1 == 1 {
                    v ^= p;
                }
            }
            if v != 0 {
                // keep pivots with distinct leading bits, sorted descending
                let pos = pivots
                    .iter()
                    .position(|&p| p.leading_zeros() > v.leading_zeros())
                    .unwrap_or(pivots.len());
                pivots.insert(pos, v);
            }
        }
    }
    pivots.len() == target_dim
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub curve: CurveMap,
    pub report: ClassificationReport,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub degree: usize,
    /// Tuples (under the dedup policy) with zero fifth-power sum, primitive or not.
    pub enumerated: u64,
    /// Primitive ones among them.
    pub valid: u64,
    pub free: u64,
    pub very_free: u64,
    pub case_4b: u64,
}

impl SearchSummary {
    fn merge(mut self, other: &SearchSummary) -> Self {
        self.enumerated += other.enumerated;
        self.valid += other.valid;
        self.free += other.free;
        self.very_free += other.very_free;
        self.case_4b += other.case_4b;
        self
    }
}

/// Sorted tuples packed into one word, first form in the top bits, so that
/// integer order is lexicographic order.
fn pack_sorted(words: &[u64; COORDINATES]) -> u64 {
    words.iter().fold(0, |acc, &w| acc << FIELD_BITS | w)
}

fn unpack_sorted(packed: u64) -> [u64; COORDINATES] {
    let mut out = [0; COORDINATES];
    for (i, slot) in out.iter_mut().enumerate() {
        let shift = FIELD_BITS as usize * (COORDINATES - 1 - i);
        *slot = (packed >> shift) & FIELD_MASK as u64;
    }
    out
}

/// Primitive multisets of one shard that pass `keep`.
struct ShardScan {
    enumerated: u64,
    valid: u64,
    kept: Vec<u64>,
}

fn scan_shard(task: &SearchTask, shard: usize, keep: impl Fn(&[u64; 6]) -> bool) -> ShardScan {
    let d = task.degree;
    let mut scan = ShardScan {
        enumerated: 0,
        valid: 0,
        kept: Vec::new(),
    };
    for_each_multiset(d, shard, task.shard_count, |words| {
        if task.swap_symmetry && swapped_sorted(d, words) < *words {
            return;
        }
        let weight = match task.dedup {
            Dedup::Exact => orbit_size(words),
            Dedup::Permutation => 1,
        };
        scan.enumerated += weight;
        if is_primitive(d, words) {
            scan.valid += weight;
            if keep(words) {
                scan.kept.push(pack_sorted(words));
            }
        }
    });
    scan
}

fn expand(task: &SearchTask, words: &[u64; COORDINATES]) -> Vec<[u64; COORDINATES]> {
    match task.dedup {
        Dedup::Exact => permutations(words),
        Dedup::Permutation => vec![*words],
    }
}

fn to_curve(degree: usize, words: &[u64; COORDINATES]) -> CurveMap {
    CurveMap::from_packed_unchecked(&words.map(|w| PackedForm::new(degree, w)))
}

fn run_shards<T: Send>(
    task: &SearchTask,
    work: impl Fn(usize) -> Result<T, SearchError> + Sync + Send,
) -> Result<Vec<T>, SearchError> {
    let shards = task.shards();
    if task.threads <= 1 || shards.len() == 1 {
        return shards.into_iter().map(work).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(task.threads)
        .build()
        .expect("thread pool");
    pool.install(|| shards.into_par_iter().map(work).collect())
}

/// Curves in search order: by the sorted tuple of their forms, then
/// lexicographically among the orderings of the same multiset.
pub fn search_order(a: &[u64; COORDINATES], b: &[u64; COORDINATES]) -> Ordering {
    let (mut sa, mut sb) = (*a, *b);
    sa.sort_unstable();
    sb.sort_unstable();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

/// Every primitive GF(2) curve of the task's degree, once per dedup class,
/// in [`search_order`]. Multiset representatives are held in memory (one
/// word each); orderings are expanded lazily.
pub fn enumerate_on_fermat(task: &SearchTask) -> Result<CurveStream, SearchError> {
    task.validate()?;
    let per_shard = run_shards(task, |shard| Ok(scan_shard(task, shard, |_| true).kept))?;
    let mut multisets: Vec<u64> = per_shard.into_iter().flatten().collect();
    multisets.sort_unstable();
    Ok(CurveStream {
        degree: task.degree,
        dedup: task.dedup,
        multisets: multisets.into_iter(),
        pending: Vec::new().into_iter(),
    })
}

pub struct CurveStream {
    degree: usize,
    dedup: Dedup,
    multisets: std::vec::IntoIter<u64>,
    pending: std::vec::IntoIter<[u64; COORDINATES]>,
}

impl CurveStream {
    /// Number of multisets not yet started.
    pub fn remaining_multisets(&self) -> usize {
        self.multisets.len()
    }
}

impl Iterator for CurveStream {
    type Item = CurveMap;

    fn next(&mut self) -> Option<CurveMap> {
        loop {
            if let Some(w) = self.pending.next() {
                return Some(to_curve(self.degree, &w));
            }
            let words = unpack_sorted(self.multisets.next()?);
            self.pending = match self.dedup {
                Dedup::Exact => permutations(&words),
                Dedup::Permutation => vec![words],
            }
            .into_iter();
        }
    }
}

/// Number of tuples with zero fifth-power sum (primitive or not) and of
/// primitive ones, under the dedup policy.
pub fn count_on_fermat(task: &SearchTask) -> Result<(u64, u64), SearchError> {
    task.validate()?;
    let counts = run_shards(task, |shard| {
        let scan = scan_shard(task, shard, |_| true);
        Ok((scan.enumerated, scan.valid))
    })?;
    Ok(counts
        .into_iter()
        .fold((0, 0), |(a, b), (x, y)| (a + x, b + y)))
}

/// Outcome of a classifying search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub results: Vec<SearchResult>,
    pub summary: SearchSummary,
}

/// Classify curves and keep the free ones.
///
/// Below degree 8 every primitive curve goes through the classifier. From
/// degree 8 on, curves that fail [`free_by_surjectivity`] are counted as not
/// free without a full classification; those that pass are classified and
/// must come back free. Multisets are classified once and their report is
/// shared by all orderings.
pub fn find_free<C: Classifier + ?Sized>(
    task: &SearchTask,
    classifier: &C,
) -> Result<SearchOutcome, SearchError> {
    let prefilter = task.degree >= 8;
    search_with(task, classifier, prefilter, |_, _| Ok(()))
}

/// Classify every primitive curve and hand each (representative, report)
/// pair to `inspect`; returns the free results as [`find_free`] does.
pub fn classify_each<C, F>(
    task: &SearchTask,
    classifier: &C,
    inspect: F,
) -> Result<SearchOutcome, SearchError>
where
    C: Classifier + ?Sized,
    F: Fn(&CurveMap, &ClassificationReport) -> Result<(), SearchError> + Sync,
{
    search_with(task, classifier, false, inspect)
}

fn search_with<C, F>(
    task: &SearchTask,
    classifier: &C,
    prefilter: bool,
    inspect: F,
) -> Result<SearchOutcome, SearchError>
where
    C: Classifier + ?Sized,
    F: Fn(&CurveMap, &ClassificationReport) -> Result<(), SearchError> + Sync,
{
    task.validate()?;
    let d = task.degree;
    let per_shard = run_shards(task, |shard| {
        let scan = scan_shard(task, shard, |w| !prefilter || free_by_surjectivity(d, w));
        let mut summary = SearchSummary {
            degree: d,
            enumerated: scan.enumerated,
            valid: scan.valid,
            ..Default::default()
        };
        let mut found = Vec::new();
        for &packed in &scan.kept {
            let words = unpack_sorted(packed);
            let weight = match task.dedup {
                Dedup::Exact => orbit_size(&words),
                Dedup::Permutation => 1,
            };
            let curve = to_curve(d, &words);
            let report = classifier.classify(&curve)?;
            if prefilter && !report.free {
                return Err(SearchError::PrefilterMismatch {
                    curve: curve.to_string(),
                });
            }
            if let Some(c) = paper_check(&report) {
                return Err(SearchError::ContradictsPaper(c, Box::new(curve)));
            }
            inspect(&curve, &report)?;
            if report.free {
                summary.free += weight;
                if report.very_free {
                    summary.very_free += weight;
                }
                if report.e_case_4b_flag {
                    summary.case_4b += weight;
                }
                found.push((words, report));
            }
        }
        Ok((summary, found))
    })?;
    let mut summary = SearchSummary {
        degree: d,
        ..Default::default()
    };
    let mut results = Vec::new();
    for (s, found) in per_shard {
        summary = summary.merge(&s);
        for (words, report) in found {
            for w in expand(task, &words) {
                results.push((w, report.clone()));
            }
        }
    }
    results.sort_unstable_by(|a, b| search_order(&a.0, &b.0));
    Ok(SearchOutcome {
        results: results
            .into_iter()
            .map(|(w, report)| SearchResult {
                curve: to_curve(d, &w),
                report,
            })
            .collect(),
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::GradedClassifier;
    use crate::fixtures;
    use std::collections::BTreeSet;

    fn brute_force(d: usize) -> Vec<[u64; 6]> {
        let mut all = crate::oracle::brute_force_on_fermat(d);
        all.sort_unstable_by(search_order);
        all
    }

    fn listed(task: &SearchTask) -> Vec<CurveMap> {
        enumerate_on_fermat(task).unwrap().collect()
    }

    fn words(c: &CurveMap) -> [u64; 6] {
        c.packed().unwrap().map(|p| p.bits())
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 2, 3, 4, 5, 6]), 720);
        assert_eq!(orbit_size(&[0, 0, 1, 1, 2, 2]), 90);
        assert_eq!(orbit_size(&[3; 6]), 1);
        assert_eq!(permutations(&[0, 0, 1, 1, 2, 2]).len(), 90);
        assert_eq!(permutations(&[1, 2, 3, 4, 5, 6]).len(), 720);
    }

    #[test]
    fn matches_brute_force_in_low_degree() {
        for d in 1..=2 {
            let got: Vec<[u64; 6]> = listed(&SearchTask::new(d)).iter().map(words).collect();
            assert_eq!(got, brute_force(d), "d={d}");
        }
    }

    #[test]
    fn degree1_contains_the_line_and_its_permutations() {
        let all: BTreeSet<[u64; 6]> = listed(&SearchTask::new(1)).iter().map(words).collect();
        let line = words(&fixtures::degree1());
        let mut sorted = line;
        sorted.sort_unstable();
        for p in permutations(&sorted) {
            assert!(all.contains(&p));
        }
        assert!(all.contains(&line));
    }

    #[test]
    fn sharding_preserves_the_result() {
        let whole = listed(&SearchTask::new(2));
        for shards in [2, 3, 7] {
            let task = SearchTask::new(2).with_shards(shards);
            assert_eq!(listed(&task), whole);
            let mut union = Vec::new();
            for i in 0..shards {
                let mut t = task.clone();
                t.shard = Some(i);
                union.extend(listed(&t));
            }
            union.sort_by(|a, b| search_order(&words(a), &words(b)));
            assert_eq!(union, whole);
        }
    }

    #[test]
    fn permutation_policy_counts_multisets() {
        let exact = listed(&SearchTask::new(2));
        let reps = listed(&SearchTask::new(2).with_dedup(Dedup::Permutation));
        let mut canon: BTreeSet<[u64; 6]> = BTreeSet::new();
        for c in &exact {
            let mut w = words(c);
            w.sort_unstable();
            canon.insert(w);
        }
        let reps: BTreeSet<[u64; 6]> = reps.iter().map(words).collect();
        assert_eq!(reps, canon);
    }

    #[test]
    fn swap_symmetry_keeps_one_per_pair() {
        let mut task = SearchTask::new(2).with_dedup(Dedup::Permutation);
        let all: BTreeSet<[u64; 6]> = listed(&task).iter().map(words).collect();
        task.swap_symmetry = true;
        let reduced: BTreeSet<[u64; 6]> = listed(&task).iter().map(words).collect();
        let mut expected = BTreeSet::new();
        for w in &all {
            let s = swapped_sorted(2, w);
            expected.insert(if s < *w { s } else { *w });
        }
        assert_eq!(reduced, expected);
    }

    #[test]
    fn surjectivity_test_matches_the_classifier() {
        let c8 = fixtures::degree8();
        assert!(free_by_surjectivity(8, &words(&c8)));
        let c9 = fixtures::degree9();
        assert!(free_by_surjectivity(9, &words(&c9)));
        assert!(!free_by_surjectivity(1, &words(&fixtures::degree1())));
        for d in [3, 4] {
            let task = SearchTask::new(d).with_dedup(Dedup::Permutation);
            for c in listed(&task).iter().take(300) {
                let report = crate::classify::classify(c).unwrap();
                assert_eq!(free_by_surjectivity(d, &words(c)), report.free);
            }
        }
    }

    #[test]
    fn task_validation() {
        assert!(matches!(
            SearchTask::new(9).validate(),
            Err(SearchError::DegreeCapExceeded { .. })
        ));
        assert!(matches!(
            SearchTask::new(0).validate(),
            Err(SearchError::ZeroDegree)
        ));
        let mut t = SearchTask::new(3).with_shards(2);
        t.shard = Some(2);
        assert!(matches!(t.validate(), Err(SearchError::BadShard { .. })));
        let mut t = SearchTask::new(8);
        t.memory_budget = 1 << 20;
        match t.validate() {
            Err(SearchError::MemoryBudgetExceeded {
                suggested_shards, ..
            }) => {
                let mut t2 = t.clone();
                t2.shard_count = suggested_shards;
                assert!(t2.validate().is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn low_degree_search_finds_nothing_free() {
        for d in 1..=3 {
            let out = find_free(&SearchTask::new(d), &GradedClassifier).unwrap();
            assert!(out.results.is_empty());
            assert_eq!(out.summary.free, 0);
            assert!(out.summary.valid > 0);
        }
    }
}
