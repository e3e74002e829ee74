//! Free / very free verdicts, degree numerology, and replayable
//! non-freeness traces for degrees 4 and 5.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, CurveMap, COORDINATES};
use crate::field::FieldElement;
use crate::graded::{self, GradedError, KernelSpec, SplittingKind, SplittingType, Splittings};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("invariant violated for a degree-{degree} curve: {what}")]
    InvariantViolated { degree: usize, what: String },
    #[error("refutation applies to degrees 4 and 5, not {0}")]
    WrongDegree(usize),
    #[error("refutation step failed: {0}")]
    TraceInconsistent(String),
}

/// Splitting data and verdicts for one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ReportRecord", try_from = "ReportRecord")]
pub struct ClassificationReport {
    pub degree: usize,
    pub omega: SplittingType,
    pub extended: SplittingType,
    pub tangent: SplittingType,
    pub free: bool,
    pub very_free: bool,
    /// Exactly one `f_i = 0` and all others positive.
    pub e_case_4b_flag: bool,
}

#[derive(Serialize, Deserialize)]
struct ReportRecord {
    degree: usize,
    omega: Vec<i64>,
    extended: Vec<i64>,
    tangent: Vec<i64>,
    free: bool,
    very_free: bool,
    case_4b: bool,
}

impl From<ClassificationReport> for ReportRecord {
    fn from(r: ClassificationReport) -> Self {
        ReportRecord {
            degree: r.degree,
            omega: r.omega.entries,
            extended: r.extended.entries,
            tangent: r.tangent.entries,
            free: r.free,
            very_free: r.very_free,
            case_4b: r.e_case_4b_flag,
        }
    }
}

impl TryFrom<ReportRecord> for ClassificationReport {
    type Error = String;

    fn try_from(r: ReportRecord) -> Result<Self, String> {
        let report = ClassificationReport {
            degree: r.degree,
            omega: SplittingType::new(SplittingKind::Omega, r.omega),
            extended: SplittingType::new(SplittingKind::Extended, r.extended),
            tangent: SplittingType::new(SplittingKind::Tangent, r.tangent),
            free: r.free,
            very_free: r.very_free,
            e_case_4b_flag: r.case_4b,
        };
        report.check().map_err(|e| e.to_string())?;
        Ok(report)
    }
}

impl ClassificationReport {
    pub fn from_splittings(degree: usize, s: Splittings) -> ClassificationReport {
        let free = s.extended.min() >= 0;
        let very_free = s.tangent.min() >= 1;
        let e_case_4b_flag = s.extended.count(0) == 1 && s.extended.entries.iter().all(|&f| f >= 0);
        ClassificationReport {
            degree,
            omega: s.omega,
            extended: s.extended,
            tangent: s.tangent,
            free,
            very_free,
            e_case_4b_flag,
        }
    }

    /// Re-check every structural relation between the three types and the
    /// verdicts.
    pub fn check(&self) -> Result<(), ClassifyError> {
        let d = self.degree;
        let fail = |what: String| Err(ClassifyError::InvariantViolated { degree: d, what });
        for ty in [&self.omega, &self.extended, &self.tangent] {
            if ty.entries.len() != ty.kind.rank() {
                return fail(format!("{:?} type {ty} has wrong length", ty.kind));
            }
            if ty.sum() != ty.kind.expected_sum(d) {
                return fail(format!(
                    "{:?} type {ty} sums to {}, expected {}",
                    ty.kind,
                    ty.sum(),
                    ty.kind.expected_sum(d)
                ));
            }
        }
        let d5 = 5 * d as i64;
        let predicted: Vec<i64> = self.omega.entries.iter().map(|e| 4 * e + d5).collect();
        if predicted != self.extended.entries {
            return fail(format!(
                "extended type {} differs from 4e+5d = {predicted:?}",
                self.extended
            ));
        }
        if self.free != (self.extended.min() >= 0) {
            return fail("free verdict disagrees with the extended type".into());
        }
        if (self.extended.min() >= 0) != (self.tangent.min() >= 0) {
            return fail(format!(
                "extended type {} and tangent type {} disagree on freeness",
                self.extended, self.tangent
            ));
        }
        if self.very_free != (self.tangent.min() >= 1) {
            return fail("very free verdict disagrees with the tangent type".into());
        }
        if self.extended.min() > 0 && !self.very_free {
            return fail("all f_i > 0 but not very free".into());
        }
        if self.extended.min() >= 0 && self.extended.count(0) >= 2 && self.very_free {
            return fail("two f_i = 0 yet very free".into());
        }
        Ok(())
    }
}

/// Produces classification reports. The graded engine is the real one;
/// tests substitute canned verdicts.
pub trait Classifier: Sync {
    fn classify(&self, curve: &CurveMap) -> Result<ClassificationReport, ClassifyError>;
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn classify(&self, curve: &CurveMap) -> Result<ClassificationReport, ClassifyError> {
        (**self).classify(curve)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GradedClassifier;

impl Classifier for GradedClassifier {
    fn classify(&self, curve: &CurveMap) -> Result<ClassificationReport, ClassifyError> {
        classify(curve)
    }
}

/// Wraps a classifier and reuses its report for every reordering of the
/// same six forms. Splitting types do not depend on the order of the
/// coordinates. Only GF(2) curves are cached.
pub struct PermutationCache<C> {
    inner: C,
    reports: Mutex<HashMap<[u64; COORDINATES], ClassificationReport>>,
}

impl<C: Classifier> PermutationCache<C> {
    pub fn new(inner: C) -> Self {
        PermutationCache {
            inner,
            reports: Mutex::new(HashMap::new()),
        }
    }

    /// Number of distinct multisets classified so far.
    pub fn len(&self) -> usize {
        self.reports.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<C: Classifier> Classifier for PermutationCache<C> {
    fn classify(&self, curve: &CurveMap) -> Result<ClassificationReport, ClassifyError> {
        let Some(packed) = curve.packed().filter(|_| curve.field().is_prime()) else {
            return self.inner.classify(curve);
        };
        let mut key = packed.map(|p| p.bits());
        key.sort_unstable();
        if let Some(r) = self.reports.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let report = self.inner.classify(curve)?;
        self.reports.lock().unwrap().insert(key, report.clone());
        Ok(report)
    }
}

pub fn classify(curve: &CurveMap) -> Result<ClassificationReport, ClassifyError> {
    let report = ClassificationReport::from_splittings(curve.degree(), graded::splittings(curve)?);
    report.check()?;
    Ok(report)
}

/// A verdict that would contradict the known results for this degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub degree: usize,
    pub reason: String,
}

/// Flags free curves of degree below 8, very free curves of degree below 9,
/// and very free curves whose extended type has exactly one zero entry.
pub fn paper_check(report: &ClassificationReport) -> Option<Contradiction> {
    let d = report.degree;
    let reason = if report.free && d < 8 {
        format!("free curve of degree {d}")
    } else if report.very_free && d < 9 {
        format!("very free curve of degree {d}")
    } else if report.very_free && report.e_case_4b_flag {
        format!(
            "very free curve with extended type {} (exactly one zero entry)",
            report.extended
        )
    } else {
        return None;
    };
    Some(Contradiction { degree: d, reason })
}

/// Splitting types compatible with freeness in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub admissible_free_e_types: Vec<Vec<i64>>,
    pub admissible_very_free_e_types: Vec<Vec<i64>>,
    pub admissible_free_f_types: Vec<Vec<i64>>,
    pub admissible_very_free_f_types: Vec<Vec<i64>>,
    pub free_possible: bool,
    pub very_free_possible: bool,
}

/// Nondecreasing 5-tuples `f` with `f_i = d (mod 4)`, `f_i >= lower` and
/// `sum f_i = d`.
fn f_types(d: i64, lower: i64) -> Vec<Vec<i64>> {
    fn rec(
        start: i64,
        left: i64,
        slots: usize,
        step: i64,
        acc: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if slots == 0 {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let mut f = start;
        while f * slots as i64 <= left {
            acc.push(f);
            rec(f, left - f, slots - 1, step, acc, out);
            acc.pop();
            f += step;
        }
    }
    let residue = d.rem_euclid(4);
    let mut start = lower;
    while start.rem_euclid(4) != residue {
        start += 1;
    }
    let mut out = Vec::new();
    rec(start, d, 5, 4, &mut Vec::new(), &mut out);
    out
}

pub fn admissible_types(degree: usize) -> DegreeVerdict {
    let d = degree as i64;
    let to_e = |f: &Vec<i64>| f.iter().map(|x| (x - 5 * d) / 4).collect::<Vec<_>>();
    let free_f = f_types(d, 0);
    let very_free_f = f_types(d, 1);
    DegreeVerdict {
        degree,
        admissible_free_e_types: free_f.iter().map(to_e).collect(),
        admissible_very_free_e_types: very_free_f.iter().map(to_e).collect(),
        free_possible: !free_f.is_empty(),
        very_free_possible: !very_free_f.is_empty(),
        admissible_free_f_types: free_f,
        admissible_very_free_f_types: very_free_f,
    }
}

/// One verified step of a non-freeness argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// Rank of the coefficient matrix against `min(6, d+1)`.
    CoefficientRank { rank: usize, maximal: usize },
    /// Plain-degree-0 cotangent kernel dimension, equal to `6 - rank`.
    DegreeZeroKernel { dimension: usize },
    /// What a free curve would need: the only admissible free cotangent types
    /// and the degree-0 kernel dimension they force.
    RequiredDegreeZeroKernel {
        e_types: Vec<Vec<i64>>,
        dimension: usize,
    },
    /// `sum_i a_ij^4 a_iv = 0` for every `j`.
    CoefficientIdentity { column: usize },
    /// Rank of `(a_ij^4)`.
    FrobeniusRank { rank: usize },
    /// Column `v` of the coefficient matrix times `(a_ij^4)` is zero.
    LeftKernelMember { column: usize },
    /// The listed columns are linearly independent.
    IndependentColumns { columns: Vec<usize> },
    /// Column `v` is nonzero.
    NonzeroColumn { column: usize },
    /// The classifier independently reports the curve as not free.
    ClassifierAgrees { free: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationCase {
    /// The coefficient matrix has less than maximal rank, so the cotangent
    /// kernel is too large in plain degree 0 for the only free type.
    RankDeficient,
    /// Degree 4, maximal rank: two independent columns in a kernel of
    /// dimension one.
    TwoColumnsInLineKernel,
    /// Degree 5, maximal rank: a nonzero vector killed by an invertible
    /// matrix.
    InvertibleFrobeniusMatrix,
}

/// Verified argument that a degree-4 or degree-5 curve is not free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationTrace {
    pub degree: usize,
    pub case: RefutationCase,
    pub steps: Vec<Step>,
    pub free: bool,
}

fn inconsistent<T>(what: String) -> Result<T, ClassifyError> {
    Err(ClassifyError::TraceInconsistent(what))
}

fn identity_columns(degree: usize) -> &'static [usize] {
    match degree {
        4 => &[1, 3],
        5 => &[2],
        _ => &[],
    }
}

/// Steps shared by the maximal-rank cases: everything is recomputed from
/// the coefficient matrix alone.
fn maximal_rank_steps(curve: &CurveMap) -> Result<(RefutationCase, Vec<Step>), ClassifyError> {
    let d = curve.degree();
    let m = curve.coefficient_matrix();
    let bar = m.frobenius();
    let bar_rank = bar.rank();
    let mut steps = vec![Step::FrobeniusRank { rank: bar_rank }];
    if bar_rank != m.rank() {
        return inconsistent(format!(
            "Frobenius matrix has rank {bar_rank}, coefficient matrix {}",
            m.rank()
        ));
    }
    let columns = identity_columns(d);
    for &v in columns {
        let product = bar.left_multiply(&m.column(v));
        if !product.iter().all(|x| x.is_zero()) {
            return inconsistent(format!("column {v} is not in the left kernel"));
        }
        steps.push(Step::LeftKernelMember { column: v });
    }
    match d {
        4 => {
            let cols: Vec<Vec<FieldElement>> = columns.iter().map(|&v| m.column(v)).collect();
            let pair = crate::curve::CoefficientMatrix::from_rows(m.field(), &cols);
            if pair.rank() != 2 {
                return inconsistent("columns 1 and 3 are dependent".into());
            }
            steps.push(Step::IndependentColumns {
                columns: columns.to_vec(),
            });
            // Left kernel has dimension 6 - 5 = 1 but contains two
            // independent vectors.
            Ok((RefutationCase::TwoColumnsInLineKernel, steps))
        }
        _ => {
            if m.column(2).iter().all(|x| x.is_zero()) {
                return inconsistent("column 2 is zero".into());
            }
            steps.push(Step::NonzeroColumn { column: 2 });
            Ok((RefutationCase::InvertibleFrobeniusMatrix, steps))
        }
    }
}

/// Replayable argument that a valid degree-4 or degree-5 curve is not free.
pub fn refute_low_degree(curve: &CurveMap) -> Result<RefutationTrace, ClassifyError> {
    refute_low_degree_with(&GradedClassifier, curve)
}

pub fn refute_low_degree_with<C: Classifier + ?Sized>(
    classifier: &C,
    curve: &CurveMap,
) -> Result<RefutationTrace, ClassifyError> {
    let d = curve.degree();
    if d != 4 && d != 5 {
        return Err(ClassifyError::WrongDegree(d));
    }
    let mut steps = Vec::new();
    for &v in identity_columns(d) {
        if !curve.check_identity(v)? {
            return inconsistent(format!("coefficient identity fails for column {v}"));
        }
        steps.push(Step::CoefficientIdentity { column: v });
    }

    let rank = curve.coefficient_matrix().rank();
    let maximal = COORDINATES.min(d + 1);
    steps.push(Step::CoefficientRank { rank, maximal });
    let case = if rank < maximal {
        let dimension = graded::kernel_dimension(&KernelSpec::omega(curve), 0);
        if dimension != COORDINATES - rank {
            return inconsistent(format!(
                "degree-0 kernel dimension {dimension} but rank {rank}"
            ));
        }
        steps.push(Step::DegreeZeroKernel { dimension });
        let verdict = admissible_types(d);
        let required: Vec<usize> = verdict
            .admissible_free_e_types
            .iter()
            .map(|e| e.iter().filter(|&&x| x == -(d as i64)).count())
            .collect();
        let Some(&need) = required.first() else {
            return inconsistent("no admissible free type".into());
        };
        if required.iter().any(|&r| r != need) || dimension <= need {
            return inconsistent(format!(
                "degree-0 kernel dimension {dimension} does not exceed the required {need}"
            ));
        }
        steps.push(Step::RequiredDegreeZeroKernel {
            e_types: verdict.admissible_free_e_types,
            dimension: need,
        });
        RefutationCase::RankDeficient
    } else {
        let (case, more) = maximal_rank_steps(curve)?;
        steps.extend(more);
        case
    };

    let report = classifier.classify(curve)?;
    if report.free {
        return inconsistent(format!(
            "classifier reports a free degree-{d} curve with extended type {}",
            report.extended
        ));
    }
    steps.push(Step::ClassifierAgrees { free: false });
    Ok(RefutationTrace {
        degree: d,
        case,
        steps,
        free: false,
    })
}

impl RefutationTrace {
    /// Recompute the trace from the curve and compare.
    pub fn replay(&self, curve: &CurveMap) -> Result<(), ClassifyError> {
        self.replay_with(&GradedClassifier, curve)
    }

    pub fn replay_with<C: Classifier + ?Sized>(
        &self,
        classifier: &C,
        curve: &CurveMap,
    ) -> Result<(), ClassifyError> {
        let again = refute_low_degree_with(classifier, curve)?;
        if &again != self {
            return inconsistent("replayed trace differs".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bundled_curves_classify_as_expected() {
        let r8 = classify(&fixtures::degree8()).unwrap();
        assert!(r8.free && !r8.very_free);
        assert_eq!(r8.extended.entries, vec![0, 0, 0, 4, 4]);
        assert!(paper_check(&r8).is_none());
        let r9 = classify(&fixtures::degree9()).unwrap();
        assert!(r9.free && r9.very_free);
        assert!(!r9.e_case_4b_flag);
        assert!(paper_check(&r9).is_none());
        let r1 = classify(&fixtures::degree1()).unwrap();
        assert!(!r1.free && !r1.very_free);
    }

    #[test]
    fn admissible_types_in_small_degrees() {
        for d in [1, 2, 3, 6, 7] {
            assert!(
                admissible_types(d).admissible_free_e_types.is_empty(),
                "d={d}"
            );
        }
        assert_eq!(
            admissible_types(4).admissible_free_e_types,
            vec![vec![-5, -5, -5, -5, -4]]
        );
        assert_eq!(
            admissible_types(5).admissible_very_free_e_types,
            vec![vec![-6, -6, -6, -6, -6]]
        );
        for d in [4, 8] {
            assert!(admissible_types(d).admissible_very_free_e_types.is_empty());
        }
        let v8 = admissible_types(8);
        assert_eq!(
            v8.admissible_free_f_types,
            vec![vec![0, 0, 0, 0, 8], vec![0, 0, 0, 4, 4]]
        );
        assert_eq!(
            admissible_types(9).admissible_very_free_f_types,
            vec![vec![1, 1, 1, 1, 5]]
        );
    }

    #[test]
    fn admissible_types_brute_force() {
        // All nondecreasing e-tuples in a window, filtered by the constraints.
        for d in 1..=12usize {
            let di = d as i64;
            let lo = -2 * di;
            let mut free = Vec::new();
            let mut vfree = Vec::new();
            let range: Vec<i64> = (lo..=0).collect();
            for &a in &range {
                for &b in range.iter().filter(|&&b| b >= a) {
                    for &c in range.iter().filter(|&&c| c >= b) {
                        for &e4 in range.iter().filter(|&&x| x >= c) {
                            let e5 = -6 * di - a - b - c - e4;
                            if e5 < e4 || e5 > 0 {
                                continue;
                            }
                            let t = vec![a, b, c, e4, e5];
                            if t.iter().all(|&e| 4 * e + 5 * di >= 0) {
                                free.push(t.clone());
                            }
                            if t.iter().all(|&e| 4 * e + 5 * di > 0) {
                                vfree.push(t);
                            }
                        }
                    }
                }
            }
            let v = admissible_types(d);
            assert_eq!(v.admissible_free_e_types, free, "d={d}");
            assert_eq!(v.admissible_very_free_e_types, vfree, "d={d}");
        }
    }

    #[test]
    fn free_implies_very_free_off_multiples_of_four() {
        for d in 1..=40usize {
            let v = admissible_types(d);
            for f in &v.admissible_free_f_types {
                assert_eq!(f.iter().sum::<i64>(), d as i64);
                assert!(f.iter().all(|x| x.rem_euclid(4) == (d % 4) as i64));
                if d % 4 != 0 {
                    assert!(f.iter().all(|&x| x > 0));
                }
            }
        }
    }

    #[test]
    fn refutation_rejects_other_degrees() {
        assert_eq!(
            refute_low_degree(&fixtures::degree8()).unwrap_err(),
            ClassifyError::WrongDegree(8)
        );
    }

    #[test]
    fn report_json_shape() {
        let r = classify(&fixtures::degree8()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["degree"], 8);
        assert_eq!(json["extended"], serde_json::json!([0, 0, 0, 4, 4]));
        assert_eq!(json["free"], true);
        assert_eq!(json["very_free"], false);
        let back: ClassificationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn check_catches_inconsistent_reports() {
        let mut r = classify(&fixtures::degree8()).unwrap();
        r.very_free = true;
        assert!(r.check().is_err());
        let mut r = classify(&fixtures::degree9()).unwrap();
        r.extended.entries[0] += 4;
        assert!(r.check().is_err());
    }

    #[test]
    fn permutation_cache_matches_direct_classification() {
        let cache = PermutationCache::new(GradedClassifier);
        let c = fixtures::degree8();
        let mut forms = c.forms().to_vec();
        forms.rotate_left(2);
        forms.swap(0, 5);
        let permuted = CurveMap::validate(forms).unwrap();
        assert_eq!(cache.classify(&c).unwrap(), classify(&c).unwrap());
        assert_eq!(
            cache.classify(&permuted).unwrap(),
            classify(&permuted).unwrap()
        );
        assert_eq!(cache.len(), 1);
        let wide = CurveMap::parse(&fixtures::DEGREE1_TEXT.replace("2^1", "2^4")).unwrap();
        assert_eq!(cache.classify(&wide).unwrap(), classify(&wide).unwrap());
        assert_eq!(cache.len(), 1);
    }
}
