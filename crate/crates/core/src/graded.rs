//! Graded kernels of maps `(A_0, ..., A_{n-1}) -> sum A_k H_k` over `k[S, T]`
//! and the splitting types they carry.
//!
//! The kernel of such a map is a graded free module. Its minimal generators
//! are found degree by degree: at output degree `t` the kernel is a null
//! space of the coefficient matrix of `H_k * (monomials)`, and the part
//! already generated from degree `t - 1` is the span of `S * v` and `T * v`
//! for kernel vectors `v` of degree `t - 1`. Anything outside that span is a
//! new minimal generator.
//!
//! Degrees come in two flavours. The *output degree* `t` is the degree of
//! `sum A_k H_k`; the *plain degree* is the degree of the multipliers
//! `A_k`, measured against the smallest target degree. For the cotangent map
//! `A -> sum A_i G_i` with `deg G_i = d` the cotangent splitting type is
//! `e_i = -d - g_i`; for the extended tangent map `A -> sum A_i G_i^4` it is
//! `f_i = d - h_i`, with `g_i`, `h_i` plain generator degrees.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveMap, COORDINATES};
use crate::field::Field;
use crate::forms::BinaryForm;
use crate::linalg::{self, Binary, Echelon, Extension, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("kernel spec needs at least one target form")]
    NoTargets,
    #[error("target forms live over different fields")]
    FieldMismatch,
    #[error("found {found} minimal generators by degree {degree}, the kernel has rank {rank}")]
    GeneratorOverflow {
        degree: usize,
        found: usize,
        rank: usize,
    },
    #[error("no complete generating set below plain degree {cap}")]
    BoundExceeded { cap: usize },
    #[error("Hilbert function mismatch at plain degree {degree}: kernel {kernel}, generators {expected}")]
    HilbertMismatch {
        degree: usize,
        kernel: usize,
        expected: usize,
    },
    #[error("the Euler section is not in the extended tangent kernel")]
    EulerSectionNotInKernel,
    #[error("tangent splitting {entries:?} does not sum to the curve degree {degree}")]
    TangentInconsistent { entries: Vec<i64>, degree: usize },
}

/// The map `(A_k) -> sum A_k H_k`. Component `k` has weight `deg H_k`: at
/// output degree `t` its multiplier has degree `t - deg H_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSpec {
    field: Field,
    targets: Vec<BinaryForm>,
}

impl KernelSpec {
    pub fn new(targets: Vec<BinaryForm>) -> Result<KernelSpec, GradedError> {
        let field = targets.first().ok_or(GradedError::NoTargets)?.field();
        if targets.iter().any(|h| h.field() != field) {
            return Err(GradedError::FieldMismatch);
        }
        Ok(KernelSpec { field, targets })
    }

    /// `(A_i) -> sum A_i G_i`.
    pub fn omega(curve: &CurveMap) -> KernelSpec {
        KernelSpec {
            field: curve.field(),
            targets: curve.forms().to_vec(),
        }
    }

    /// `(A_i) -> sum A_i G_i^4`.
    pub fn extended(curve: &CurveMap) -> KernelSpec {
        KernelSpec {
            field: curve.field(),
            targets: curve.forms().iter().map(BinaryForm::pow4).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn targets(&self) -> &[BinaryForm] {
        &self.targets
    }

    pub fn weights(&self) -> Vec<usize> {
        self.targets.iter().map(BinaryForm::degree).collect()
    }

    /// Smallest target degree; plain degree 0 is this output degree.
    pub fn base_weight(&self) -> usize {
        self.targets.iter().map(BinaryForm::degree).min().unwrap()
    }

    fn max_weight(&self) -> usize {
        self.targets.iter().map(BinaryForm::degree).max().unwrap()
    }

    /// Rank of the kernel as a free module.
    pub fn kernel_rank(&self) -> usize {
        let n = self.targets.len();
        if self.targets.iter().all(BinaryForm::is_zero) {
            n
        } else {
            n - 1
        }
    }

    /// Plain-degree cap for the generator search.
    fn degree_cap(&self) -> usize {
        6 * self.max_weight().max(1)
    }

    /// `sum A_k H_k` for a vector of multipliers (absent components are zero).
    pub fn apply(&self, components: &[Option<BinaryForm>]) -> Option<BinaryForm> {
        let mut acc: Option<BinaryForm> = None;
        for (a, h) in components.iter().zip(&self.targets) {
            if let Some(a) = a {
                let term = a.mul(h).ok()?;
                acc = Some(match acc {
                    None => term,
                    Some(x) => x.add(&term).ok()?,
                });
            }
        }
        acc
    }
}

/// One minimal generator: multipliers `A_k`, with `None` for components
/// whose degree would be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub degree: usize,
    pub components: Vec<Option<BinaryForm>>,
}

impl Generator {
    /// All components, for kernels of equal-weight maps.
    pub fn forms(&self) -> Option<Vec<BinaryForm>> {
        self.components.iter().cloned().collect()
    }
}

/// Minimal generators in nondecreasing plain degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedKernelBasis {
    /// Output degree of plain degree 0.
    pub base_weight: usize,
    pub generators: Vec<Generator>,
}

impl GradedKernelBasis {
    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// Hilbert function of the free module on these generators.
    pub fn hilbert(&self, m: usize) -> usize {
        self.generators
            .iter()
            .map(|g| (m + 1).saturating_sub(g.degree))
            .sum()
    }
}

/// Coordinates of the domain in one output degree, ordered by
/// `(T-exponent, component)` so pivots favour low `T`-exponents.
struct Layout {
    slots: Vec<(usize, usize)>,
    index: Vec<Vec<usize>>,
}

impl Layout {
    fn new(spec: &KernelSpec, t: usize) -> Layout {
        let n = spec.targets.len();
        let lens: Vec<Option<usize>> = spec
            .targets
            .iter()
            .map(|h| t.checked_sub(h.degree()).map(|p| p + 1))
            .collect();
        let top = lens.iter().flatten().copied().max().unwrap_or(0);
        let mut slots = Vec::new();
        let mut index = vec![Vec::new(); n];
        for a in 0..top {
            for k in 0..n {
                if matches!(lens[k], Some(len) if a < len) {
                    index[k].push(slots.len());
                    slots.push((a, k));
                }
            }
        }
        Layout { slots, index }
    }

    fn len(&self) -> usize {
        self.slots.len()
    }
}

fn image_columns<S: Space>(s: S, spec: &KernelSpec, t: usize, layout: &Layout) -> Vec<S::Vector> {
    layout
        .slots
        .iter()
        .map(|&(a, k)| {
            let mut v = s.zeros(t + 1);
            for (j, &c) in spec.targets[k].raw().iter().enumerate() {
                if c != 0 {
                    s.set(&mut v, a + j, c);
                }
            }
            v
        })
        .collect()
}

fn to_components<S: Space>(
    s: S,
    spec: &KernelSpec,
    t: usize,
    layout: &Layout,
    v: &S::Vector,
) -> Vec<Option<BinaryForm>> {
    spec.targets
        .iter()
        .enumerate()
        .map(|(k, h)| {
            t.checked_sub(h.degree()).map(|p| {
                let coeffs = (0..=p).map(|a| s.get(v, layout.index[k][a])).collect();
                BinaryForm::from_raw(spec.field, coeffs)
            })
        })
        .collect()
}

/// Multiply a degree-`t-1` domain vector by `S` (`shift = 0`) or `T`
/// (`shift = 1`) into degree `t` coordinates.
fn lift<S: Space>(s: S, v: &S::Vector, from: &Layout, to: &Layout, shift: usize) -> S::Vector {
    let mut out = s.zeros(to.len());
    for (i, &(a, k)) in from.slots.iter().enumerate() {
        let c = s.get(v, i);
        if c != 0 {
            s.set(&mut out, to.index[k][a + shift], c);
        }
    }
    out
}

fn dimension_at<S: Space>(s: S, spec: &KernelSpec, t: usize) -> usize {
    let layout = Layout::new(spec, t);
    let cols = image_columns(s, spec, t, &layout);
    layout.len() - linalg::rank(s, cols)
}

/// Dimension of the kernel in plain degree `m`.
pub fn kernel_dimension(spec: &KernelSpec, m: usize) -> usize {
    let t = spec.base_weight() + m;
    if spec.field.is_prime() {
        dimension_at(Binary, spec, t)
    } else {
        dimension_at(Extension(spec.field), spec, t)
    }
}

/// Kernel dimensions at plain degrees `0..=top`.
pub fn kernel_dimensions(spec: &KernelSpec, top: usize) -> Vec<usize> {
    (0..=top).map(|m| kernel_dimension(spec, m)).collect()
}

fn generators_in<S: Space>(s: S, spec: &KernelSpec) -> Result<GradedKernelBasis, GradedError> {
    let rank = spec.kernel_rank();
    let base = spec.base_weight();
    let cap = spec.degree_cap();
    let mut basis = GradedKernelBasis {
        base_weight: base,
        generators: Vec::new(),
    };
    let mut previous: Option<(Layout, Vec<S::Vector>)> = None;
    let mut confirmed = 0usize;
    for m in 0..=cap {
        let t = base + m;
        let layout = Layout::new(spec, t);
        let cols = image_columns(s, spec, t, &layout);
        let kernel = linalg::null_space(s, &cols);

        let mut span = Echelon::new(s);
        if let Some((prev_layout, prev_kernel)) = &previous {
            for v in prev_kernel {
                span.insert(lift(s, v, prev_layout, &layout, 0));
                span.insert(lift(s, v, prev_layout, &layout, 1));
            }
        }
        for v in &kernel {
            if span.insert(v.clone()) {
                basis.generators.push(Generator {
                    degree: m,
                    components: to_components(s, spec, t, &layout, v),
                });
            }
        }
        if basis.generators.len() > rank {
            return Err(GradedError::GeneratorOverflow {
                degree: m,
                found: basis.generators.len(),
                rank,
            });
        }
        let expected = basis.hilbert(m);
        if basis.generators.len() == rank {
            if kernel.len() != expected {
                return Err(GradedError::HilbertMismatch {
                    degree: m,
                    kernel: kernel.len(),
                    expected,
                });
            }
            confirmed += 1;
            if confirmed == 2 {
                return Ok(basis);
            }
        }
        previous = Some((layout, kernel));
    }
    Err(GradedError::BoundExceeded { cap })
}

/// Minimal homogeneous generators of the kernel.
pub fn minimal_generators(spec: &KernelSpec) -> Result<GradedKernelBasis, GradedError> {
    if spec.field.is_prime() {
        generators_in(Binary, spec)
    } else {
        generators_in(Extension(spec.field), spec)
    }
}

/// Coordinate-wise fourth powers of a generating set; plain degrees
/// multiply by four.
pub fn frobenius_lift(basis: &GradedKernelBasis) -> GradedKernelBasis {
    GradedKernelBasis {
        base_weight: 4 * basis.base_weight,
        generators: basis
            .generators
            .iter()
            .map(|g| Generator {
                degree: 4 * g.degree,
                components: g
                    .components
                    .iter()
                    .map(|c| c.as_ref().map(BinaryForm::pow4))
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingKind {
    /// Cotangent kernel, rank 5, entries sum to `-6d`.
    Omega,
    /// Extended tangent bundle, rank 5, entries sum to `d`.
    Extended,
    /// Tangent bundle, rank 4, entries sum to `d`.
    Tangent,
}

impl SplittingKind {
    pub fn rank(self) -> usize {
        match self {
            SplittingKind::Omega | SplittingKind::Extended => 5,
            SplittingKind::Tangent => 4,
        }
    }

    pub fn expected_sum(self, degree: usize) -> i64 {
        match self {
            SplittingKind::Omega => -6 * degree as i64,
            SplittingKind::Extended | SplittingKind::Tangent => degree as i64,
        }
    }
}

/// Twists of a direct sum of line bundles on `P^1`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittingType {
    pub kind: SplittingKind,
    pub entries: Vec<i64>,
}

impl SplittingType {
    pub fn new(kind: SplittingKind, mut entries: Vec<i64>) -> SplittingType {
        entries.sort_unstable();
        SplittingType { kind, entries }
    }

    pub fn min(&self) -> i64 {
        self.entries.iter().copied().min().unwrap_or(0)
    }

    pub fn sum(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn count(&self, value: i64) -> usize {
        self.entries.iter().filter(|&&x| x == value).count()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn omega_from(degree: usize, basis: &GradedKernelBasis) -> SplittingType {
    let d = degree as i64;
    SplittingType::new(
        SplittingKind::Omega,
        basis.degrees().iter().map(|&g| -d - g as i64).collect(),
    )
}

fn extended_from(degree: usize, basis: &GradedKernelBasis) -> SplittingType {
    let d = degree as i64;
    SplittingType::new(
        SplittingKind::Extended,
        basis.degrees().iter().map(|&h| d - h as i64).collect(),
    )
}

pub fn omega_basis(curve: &CurveMap) -> Result<GradedKernelBasis, GradedError> {
    minimal_generators(&KernelSpec::omega(curve))
}

pub fn extended_basis(curve: &CurveMap) -> Result<GradedKernelBasis, GradedError> {
    minimal_generators(&KernelSpec::extended(curve))
}

/// Splitting type `(e_1, ..., e_5)` of the cotangent kernel.
pub fn omega_splitting(curve: &CurveMap) -> Result<SplittingType, GradedError> {
    Ok(omega_from(curve.degree(), &omega_basis(curve)?))
}

/// Splitting type `(f_1, ..., f_5)` of the extended tangent kernel.
pub fn extended_splitting(curve: &CurveMap) -> Result<SplittingType, GradedError> {
    Ok(extended_from(curve.degree(), &extended_basis(curve)?))
}

/// Extended splitting type read off the Frobenius lift of a cotangent basis.
pub fn lifted_extended_splitting(curve: &CurveMap) -> Result<SplittingType, GradedError> {
    Ok(extended_from(
        curve.degree(),
        &frobenius_lift(&omega_basis(curve)?),
    ))
}

/// Tangent splitting type from an extended tangent basis.
///
/// The Euler section `(G_0, ..., G_5)` is written as `sum c_k y_k` in the
/// basis. Summands with `c_k = 0` pass to the tangent bundle unchanged; the
/// rest contribute the dual of the kernel of `(B_k) -> sum B_k c_k`, whose
/// generators sit in output degrees equal to the remaining twists.
fn tangent_from(curve: &CurveMap, ext: &GradedKernelBasis) -> Result<SplittingType, GradedError> {
    let d = curve.degree();
    let coefficients = if curve.field().is_prime() {
        euler_coordinates(Binary, curve, ext)?
    } else {
        euler_coordinates(Extension(curve.field()), curve, ext)?
    };
    let mut entries = Vec::with_capacity(4);
    let mut targets = Vec::new();
    for (gen, c) in ext.generators.iter().zip(coefficients) {
        let f = d as i64 - gen.degree as i64;
        match c {
            Some(c) if !c.is_zero() => targets.push(c),
            _ => entries.push(f),
        }
    }
    if !targets.is_empty() {
        let spec = KernelSpec::new(targets)?;
        let basis = minimal_generators(&spec)?;
        entries.extend(
            basis
                .generators
                .iter()
                .map(|g| (basis.base_weight + g.degree) as i64),
        );
    }
    let tangent = SplittingType::new(SplittingKind::Tangent, entries);
    if tangent.entries.len() != 4 || tangent.sum() != d as i64 {
        return Err(GradedError::TangentInconsistent {
            entries: tangent.entries,
            degree: d,
        });
    }
    Ok(tangent)
}

/// Solve `(G_0, ..., G_5) = sum_k c_k y_k`; `c_k` is `None` when
/// `deg y_k > d`.
fn euler_coordinates<S: Space>(
    s: S,
    curve: &CurveMap,
    ext: &GradedKernelBasis,
) -> Result<Vec<Option<BinaryForm>>, GradedError> {
    let d = curve.degree();
    let width = d + 1;
    let encode = |forms: &[BinaryForm]| {
        let mut v = s.zeros(COORDINATES * width);
        for (i, g) in forms.iter().enumerate() {
            for (j, &c) in g.raw().iter().enumerate() {
                if c != 0 {
                    s.set(&mut v, i * width + j, c);
                }
            }
        }
        v
    };
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for (k, gen) in ext.generators.iter().enumerate() {
        if gen.degree > d {
            continue;
        }
        let forms = gen.forms().expect("equal weights");
        let span = d - gen.degree;
        for b in 0..=span {
            let shifted: Vec<BinaryForm> = forms.iter().map(|a| a.shift(span - b, b)).collect();
            columns.push(encode(&shifted));
            owners.push((k, b));
        }
    }
    let target = encode(curve.forms());
    let x = linalg::solve(s, &columns, &target).ok_or(GradedError::EulerSectionNotInKernel)?;
    let mut coeffs: Vec<Option<Vec<u16>>> = ext
        .generators
        .iter()
        .map(|g| (g.degree <= d).then(|| vec![0u16; d - g.degree + 1]))
        .collect();
    for (col, &(k, b)) in owners.iter().enumerate() {
        let c = s.get(&x, col);
        coeffs[k].as_mut().expect("owner exists")[b] = c;
    }
    Ok(coeffs
        .into_iter()
        .map(|c| c.map(|c| BinaryForm::from_raw(curve.field(), c)))
        .collect())
}

pub fn tangent_splitting(curve: &CurveMap) -> Result<SplittingType, GradedError> {
    tangent_from(curve, &extended_basis(curve)?)
}

/// All three splitting types, sharing one extended tangent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splittings {
    pub omega: SplittingType,
    pub extended: SplittingType,
    pub tangent: SplittingType,
}

pub fn splittings(curve: &CurveMap) -> Result<Splittings, GradedError> {
    let omega = omega_splitting(curve)?;
    let ext = extended_basis(curve)?;
    let extended = extended_from(curve.degree(), &ext);
    let tangent = tangent_from(curve, &ext)?;
    Ok(Splittings {
        omega,
        extended,
        tangent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn gf2(text: &str, d: usize) -> BinaryForm {
        BinaryForm::parse(text, Field::GF2, d).unwrap()
    }

    #[test]
    fn koszul_toy() {
        let spec = KernelSpec::new(vec![gf2("S", 1), gf2("T", 1)]).unwrap();
        let basis = minimal_generators(&spec).unwrap();
        assert_eq!(basis.degrees(), vec![1]);
        let forms = basis.generators[0].forms().unwrap();
        assert_eq!(forms, vec![gf2("T", 1), gf2("S", 1)]);
        let lifted = frobenius_lift(&basis);
        assert_eq!(lifted.degrees(), vec![4]);
        assert_eq!(
            lifted.generators[0].forms().unwrap(),
            vec![gf2("T^4", 4), gf2("S^4", 4)]
        );
    }

    #[test]
    fn degree8_kernel_dimensions() {
        let spec = KernelSpec::omega(&fixtures::degree8());
        assert_eq!(kernel_dimensions(&spec, 2), vec![0, 2, 7]);
    }

    #[test]
    fn degree9_kernel_dimensions() {
        let spec = KernelSpec::omega(&fixtures::degree9());
        assert_eq!(kernel_dimensions(&spec, 2), vec![0, 1, 6]);
    }

    #[test]
    fn degree8_generators() {
        let c = fixtures::degree8();
        let spec = KernelSpec::omega(&c);
        let basis = minimal_generators(&spec).unwrap();
        assert_eq!(basis.degrees(), vec![1, 1, 2, 2, 2]);
        for g in &basis.generators {
            let forms = g.forms().unwrap();
            assert!(forms.iter().all(|a| a.degree() == g.degree));
            let comps: Vec<_> = forms.into_iter().map(Some).collect();
            assert!(spec.apply(&comps).unwrap().is_zero());
        }
        assert_eq!(
            omega_splitting(&c).unwrap().entries,
            vec![-10, -10, -10, -9, -9]
        );
        assert_eq!(extended_splitting(&c).unwrap().entries, vec![0, 0, 0, 4, 4]);
        let lifted = frobenius_lift(&basis);
        assert_eq!(lifted.degrees(), vec![4, 4, 8, 8, 8]);
        assert_eq!(
            lifted_extended_splitting(&c).unwrap().entries,
            vec![0, 0, 0, 4, 4]
        );
    }

    #[test]
    fn degree9_splittings() {
        let c = fixtures::degree9();
        assert_eq!(
            minimal_generators(&KernelSpec::omega(&c))
                .unwrap()
                .degrees(),
            vec![1, 2, 2, 2, 2]
        );
        let s = splittings(&c).unwrap();
        assert_eq!(s.omega.entries, vec![-11, -11, -11, -11, -10]);
        assert_eq!(s.extended.entries, vec![1, 1, 1, 1, 5]);
        assert!(s.tangent.min() >= 1);
        assert_eq!(s.tangent.sum(), 9);
    }

    #[test]
    fn degree8_tangent_is_free_not_very_free() {
        let t = tangent_splitting(&fixtures::degree8()).unwrap();
        assert_eq!(t.min(), 0);
        assert_eq!(t.sum(), 8);
        assert_eq!(t.entries.len(), 4);
    }

    #[test]
    fn line_is_not_free() {
        let c = fixtures::degree1();
        let s = splittings(&c).unwrap();
        assert_eq!(s.omega.sum(), -6);
        assert_eq!(s.omega.entries, vec![-2, -1, -1, -1, -1]);
        assert_eq!(s.extended.entries, vec![-3, 1, 1, 1, 1]);
        assert!(s.tangent.min() < 0);
    }

    #[test]
    fn frobenius_lift_lands_in_extended_kernel() {
        for c in [
            fixtures::degree8(),
            fixtures::degree9(),
            fixtures::degree1(),
        ] {
            let lifted = frobenius_lift(&omega_basis(&c).unwrap());
            let spec = KernelSpec::extended(&c);
            for g in &lifted.generators {
                assert!(spec.apply(&g.components).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn splitting_over_an_extension_field_agrees() {
        let c = fixtures::degree8();
        let f16 = Field::new(4).unwrap();
        let forms: Vec<BinaryForm> = c
            .forms()
            .iter()
            .map(|g| BinaryForm::from_raw(f16, g.raw().to_vec()))
            .collect();
        let lifted = CurveMap::validate(forms).unwrap();
        assert_eq!(splittings(&lifted).unwrap(), splittings(&c).unwrap());
    }

    #[test]
    fn rank_overflow_is_reported() {
        // All-zero targets: the kernel is free of rank n, generated in degree 0.
        let spec = KernelSpec::new(vec![gf2("0", 1), gf2("0", 1)]).unwrap();
        assert_eq!(minimal_generators(&spec).unwrap().degrees(), vec![0, 0]);
        assert_eq!(KernelSpec::new(vec![]).unwrap_err(), GradedError::NoTargets);
    }
}
