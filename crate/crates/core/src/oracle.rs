//! Slow reference computations for cross-checking the main engines.
//!
//! Nothing here shares code with the graded engine or the search beyond
//! form multiplication: kernel dimensions come from dense matrices reduced
//! by a plain Gaussian elimination, splitting types come from second
//! differences of those dimensions, and enumeration is a full scan.

use crate::curve::{CurveMap, COORDINATES};
use crate::field::Field;
use crate::forms::BinaryForm;
use crate::graded::{SplittingKind, SplittingType};
use crate::packed::{clmul, is_primitive, spread4};

/// Rank of a dense matrix over `field` (rows of raw coefficients).
pub fn dense_rank(field: Field, mut rows: Vec<Vec<u16>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv_raw(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = field.mul_raw(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = field.add_raw(*x, field.mul_raw(f, p));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the degree-`m` kernel of `(A_i) -> sum A_i H_i` where all
/// `H_i` share one degree, by building the full matrix.
pub fn dense_kernel_dimension(targets: &[BinaryForm], m: usize) -> usize {
    let field = targets[0].field();
    let out_degree = m + targets[0].degree();
    let mut columns = Vec::new();
    for h in targets {
        for a in 0..=m {
            let monomial = BinaryForm::monomial(field.one(), m - a, a);
            let image = monomial.mul(h).expect("same field");
            columns.push(image.coeffs().map(|c| c.bits()).collect::<Vec<_>>());
        }
    }
    // rows = output monomials, columns = (i, a)
    let rows: Vec<Vec<u16>> = (0..=out_degree)
        .map(|j| columns.iter().map(|c| c[j]).collect())
        .collect();
    columns.len() - dense_rank(field, rows)
}

/// Generator degrees of a free graded module of the given rank over
/// `k[S,T]` from its Hilbert function, by second differences. `None` if the
/// counts go negative or the rank is not reached by `cap`.
pub fn degrees_from_hilbert(
    rank: usize,
    cap: usize,
    hilbert: impl Fn(usize) -> usize,
) -> Option<Vec<usize>> {
    let h = |m: i64| if m < 0 { 0 } else { hilbert(m as usize) as i64 };
    let mut degrees = Vec::new();
    for m in 0..=cap as i64 {
        let new = h(m) - 2 * h(m - 1) + h(m - 2);
        if new < 0 {
            return None;
        }
        degrees.extend(std::iter::repeat_n(m as usize, new as usize));
        if degrees.len() > rank {
            return None;
        }
        if degrees.len() == rank {
            return Some(degrees);
        }
    }
    None
}

fn cap(curve: &CurveMap) -> usize {
    6 * curve.degree() + 6
}

pub fn omega_type(curve: &CurveMap) -> Option<SplittingType> {
    let d = curve.degree() as i64;
    let g = degrees_from_hilbert(5, cap(curve), |m| dense_kernel_dimension(curve.forms(), m))?;
    Some(SplittingType::new(
        SplittingKind::Omega,
        g.iter().map(|&g| -d - g as i64).collect(),
    ))
}

fn fourth_powers(curve: &CurveMap) -> Vec<BinaryForm> {
    curve.forms().iter().map(BinaryForm::pow4).collect()
}

pub fn extended_type(curve: &CurveMap) -> Option<SplittingType> {
    let d = curve.degree() as i64;
    let targets = fourth_powers(curve);
    let h = degrees_from_hilbert(5, cap(curve), |m| dense_kernel_dimension(&targets, m))?;
    Some(SplittingType::new(
        SplittingKind::Extended,
        h.iter().map(|&h| d - h as i64).collect(),
    ))
}

/// `h^0` of the tangent type twisted by `m >= -1`, from dense kernel
/// dimensions: the Euler section splits off `h^0(O(m)) = m + 1` sections,
/// and `H^1(O(m))` vanishes in this range.
pub fn tangent_sections(curve: &CurveMap, m: i64) -> usize {
    assert!(m >= -1);
    let plain = m + curve.degree() as i64;
    if plain < 0 {
        return 0;
    }
    dense_kernel_dimension(&fourth_powers(curve), plain as usize) - (m + 1) as usize
}

/// Whether a proposed tangent type has the right rank and degree and the
/// section counts of [`tangent_sections`] for every twist up to the point
/// where all summands are past their first section.
///
/// The graded quotient by the Euler section need not be free, so its
/// Hilbert function alone does not determine the type; this is the part of
/// it that does not depend on the engine.
pub fn tangent_consistent(curve: &CurveMap, t: &SplittingType) -> bool {
    let d = curve.degree() as i64;
    if t.entries.len() != 4 || t.sum() != d {
        return false;
    }
    let top = -t.min() + 2;
    (-1..=top.max(1)).all(|m| {
        let expected: i64 = t.entries.iter().map(|&a| (a + m + 1).max(0)).sum();
        tangent_sections(curve, m) as i64 == expected
    })
}

/// Every primitive GF(2) 6-tuple of degree-`d` forms with zero fifth-power
/// sum, by scanning all `2^(6(d+1))` tuples. Returned in lexicographic order.
pub fn brute_force_on_fermat(degree: usize) -> Vec<[u64; COORDINATES]> {
    let n = 1usize << (degree + 1);
    let p5: Vec<u64> = (0..n as u64).map(|g| clmul(spread4(g), g) as u64).collect();
    let mut out = Vec::new();
    let mut w = [0u64; COORDINATES];
    for idx in 0..n.pow(COORDINATES as u32) {
        let mut r = idx;
        for slot in w.iter_mut().rev() {
            *slot = (r % n) as u64;
            r /= n;
        }
        let sum = w.iter().fold(0, |acc, &g| acc ^ p5[g as usize]);
        if sum == 0 && is_primitive(degree, &w) {
            out.push(w);
        }
    }
    out
}
