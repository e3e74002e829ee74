//! Exact dense linear algebra over GF(2^e).
//!
//! Vectors are abstracted by [`Space`]: GF(2) uses word-packed bit vectors,
//! larger fields use one `u16` per coordinate. Elimination keeps rows in
//! semi-echelon form (each row is reduced against all earlier pivots), which
//! is enough for rank, membership and null-space computations.

use crate::field::Field;

pub trait Space: Copy {
    type Vector: Clone + PartialEq + std::fmt::Debug;

    fn field(self) -> Field;
    fn zeros(self, len: usize) -> Self::Vector;
    fn get(self, v: &Self::Vector, i: usize) -> u16;
    fn set(self, v: &mut Self::Vector, i: usize, x: u16);
    fn first_nonzero(self, v: &Self::Vector) -> Option<usize>;
    /// `v += a * w`
    fn axpy(self, v: &mut Self::Vector, a: u16, w: &Self::Vector);
    fn scale(self, v: &mut Self::Vector, a: u16);

    fn is_zero(self, v: &Self::Vector) -> bool {
        self.first_nonzero(v).is_none()
    }

    fn unit(self, len: usize, i: usize) -> Self::Vector {
        let mut v = self.zeros(len);
        self.set(&mut v, i, 1);
        v
    }

    fn from_raw(self, coords: &[u16]) -> Self::Vector {
        let mut v = self.zeros(coords.len());
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                self.set(&mut v, i, c);
            }
        }
        v
    }

    fn to_raw(self, v: &Self::Vector, len: usize) -> Vec<u16> {
        (0..len).map(|i| self.get(v, i)).collect()
    }
}

/// GF(2) with bit-packed vectors.
#[derive(Debug, Clone, Copy)]
pub struct Binary;

impl Space for Binary {
    type Vector = Vec<u64>;

    fn field(self) -> Field {
        Field::GF2
    }

    fn zeros(self, len: usize) -> Vec<u64> {
        vec![0; len.div_ceil(64).max(1)]
    }

    #[inline]
    fn get(self, v: &Vec<u64>, i: usize) -> u16 {
        ((v[i / 64] >> (i % 64)) & 1) as u16
    }

    #[inline]
    fn set(self, v: &mut Vec<u64>, i: usize, x: u16) {
        let bit = 1u64 << (i % 64);
        if x & 1 == 1 {
            v[i / 64] |= bit;
        } else {
            v[i / 64] &= !bit;
        }
    }

    #[inline]
    fn first_nonzero(self, v: &Vec<u64>) -> Option<usize> {
        v.iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    #[inline]
    fn axpy(self, v: &mut Vec<u64>, a: u16, w: &Vec<u64>) {
        if a & 1 == 1 {
            for (x, y) in v.iter_mut().zip(w) {
                *x ^= y;
            }
        }
    }

    fn scale(self, v: &mut Vec<u64>, a: u16) {
        if a & 1 == 0 {
            v.iter_mut().for_each(|x| *x = 0);
        }
    }
}

/// GF(2^e) with one coordinate per `u16`.
#[derive(Debug, Clone, Copy)]
pub struct Extension(pub Field);

impl Space for Extension {
    type Vector = Vec<u16>;

    fn field(self) -> Field {
        self.0
    }

    fn zeros(self, len: usize) -> Vec<u16> {
        vec![0; len]
    }

    fn get(self, v: &Vec<u16>, i: usize) -> u16 {
        v[i]
    }

    fn set(self, v: &mut Vec<u16>, i: usize, x: u16) {
        v[i] = x;
    }

    fn first_nonzero(self, v: &Vec<u16>) -> Option<usize> {
        v.iter().position(|&c| c != 0)
    }

    fn axpy(self, v: &mut Vec<u16>, a: u16, w: &Vec<u16>) {
        if a == 0 {
            return;
        }
        let f = self.0;
        for (x, &y) in v.iter_mut().zip(w) {
            if y != 0 {
                *x ^= f.mul_raw(a, y);
            }
        }
    }

    fn scale(self, v: &mut Vec<u16>, a: u16) {
        let f = self.0;
        v.iter_mut().for_each(|x| *x = f.mul_raw(*x, a));
    }
}

/// Semi-echelon basis of a subspace, optionally carrying a companion vector
/// per row that undergoes the same row operations.
#[derive(Debug, Clone)]
pub struct Echelon<S: Space> {
    space: S,
    rows: Vec<(usize, S::Vector)>,
}

impl<S: Space> Echelon<S> {
    pub fn new(space: S) -> Self {
        Echelon {
            space,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` in place against the basis.
    pub fn reduce(&self, v: &mut S::Vector) {
        for (pivot, row) in &self.rows {
            let c = self.space.get(v, *pivot);
            if c != 0 {
                self.space.axpy(v, c, row);
            }
        }
    }

    pub fn contains(&self, v: &S::Vector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        self.space.is_zero(&w)
    }

    /// Add `v` to the basis; returns false when it was already in the span.
    pub fn insert(&mut self, mut v: S::Vector) -> bool {
        self.reduce(&mut v);
        match self.space.first_nonzero(&v) {
            None => false,
            Some(p) => {
                let lead = self.space.get(&v, p);
                if lead != 1 {
                    let inv = self.space.field().inv_raw(lead).expect("nonzero");
                    self.space.scale(&mut v, inv);
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

/// Rank of the matrix whose rows are `rows`.
pub fn rank<S: Space>(space: S, rows: impl IntoIterator<Item = S::Vector>) -> usize {
    let mut ech = Echelon::new(space);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Basis of `{x : sum_k x_k columns[k] = 0}`.
///
/// Columns are processed in order, and a kernel vector is emitted whenever a
/// column falls into the span of its predecessors, so the basis is ordered by
/// its last nonzero coordinate.
pub fn null_space<S: Space>(space: S, columns: &[S::Vector]) -> Vec<S::Vector> {
    let n = columns.len();
    let mut rows: Vec<(usize, S::Vector, S::Vector)> = Vec::new();
    let mut kernel = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        let mut img = col.clone();
        let mut combo = space.unit(n, k);
        for (pivot, r_img, r_combo) in &rows {
            let c = space.get(&img, *pivot);
            if c != 0 {
                space.axpy(&mut img, c, r_img);
                space.axpy(&mut combo, c, r_combo);
            }
        }
        match space.first_nonzero(&img) {
            None => kernel.push(combo),
            Some(p) => {
                let lead = space.get(&img, p);
                if lead != 1 {
                    let inv = space.field().inv_raw(lead).expect("nonzero");
                    space.scale(&mut img, inv);
                    space.scale(&mut combo, inv);
                }
                rows.push((p, img, combo));
            }
        }
    }
    kernel
}

/// Solve `sum_k x_k columns[k] = target`; `None` when inconsistent.
pub fn solve<S: Space>(space: S, columns: &[S::Vector], target: &S::Vector) -> Option<S::Vector> {
    let n = columns.len();
    let mut rows: Vec<(usize, S::Vector, S::Vector)> = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        let mut img = col.clone();
        let mut combo = space.unit(n, k);
        for (pivot, r_img, r_combo) in &rows {
            let c = space.get(&img, *pivot);
            if c != 0 {
                space.axpy(&mut img, c, r_img);
                space.axpy(&mut combo, c, r_combo);
            }
        }
        if let Some(p) = space.first_nonzero(&img) {
            let lead = space.get(&img, p);
            if lead != 1 {
                let inv = space.field().inv_raw(lead).expect("nonzero");
                space.scale(&mut img, inv);
                space.scale(&mut combo, inv);
            }
            rows.push((p, img, combo));
        }
    }
    // target = sum c_r img_r  =>  x = sum c_r combo_r
    let mut residual = target.clone();
    let mut x = space.zeros(n);
    for (pivot, r_img, r_combo) in &rows {
        let c = space.get(&residual, *pivot);
        if c != 0 {
            space.axpy(&mut residual, c, r_img);
            space.axpy(&mut x, c, r_combo);
        }
    }
    space.is_zero(&residual).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain Gaussian elimination on a row-major u16 matrix.
    fn oracle_rank(f: Field, mut m: Vec<Vec<u16>>) -> usize {
        let cols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, p);
            let inv = f.inv_raw(m[r][c]).unwrap();
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let factor = f.mul_raw(m[i][c], inv);
                    for j in 0..cols {
                        let sub = f.mul_raw(factor, m[r][j]);
                        m[i][j] ^= sub;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn matrix(e: u32) -> impl Strategy<Value = Vec<Vec<u16>>> {
        let n = 1u16 << e;
        (1usize..9, 1usize..80).prop_flat_map(move |(rows, cols)| {
            proptest::collection::vec(proptest::collection::vec(0..n, cols), rows)
        })
    }

    fn columns_of<S: Space>(s: S, m: &[Vec<u16>]) -> Vec<S::Vector> {
        let cols = m[0].len();
        (0..cols)
            .map(|j| s.from_raw(&m.iter().map(|r| r[j]).collect::<Vec<_>>()))
            .collect()
    }

    fn apply<S: Space>(s: S, cols: &[S::Vector], x: &S::Vector, len: usize) -> S::Vector {
        let mut out = s.zeros(len);
        for (k, c) in cols.iter().enumerate() {
            s.axpy(&mut out, s.get(x, k), c);
        }
        out
    }

    #[test]
    fn small_examples() {
        let b = Binary;
        assert_eq!(rank(b, vec![b.from_raw(&[1, 0]), b.from_raw(&[1, 0])]), 1);
        assert_eq!(rank(b, vec![b.zeros(3), b.zeros(3)]), 0);
        let cols = vec![
            b.from_raw(&[1, 0]),
            b.from_raw(&[0, 1]),
            b.from_raw(&[1, 1]),
        ];
        let ker = null_space(b, &cols);
        assert_eq!(ker, vec![b.from_raw(&[1, 1, 1])]);
        let x = solve(b, &cols[..2], &b.from_raw(&[1, 1])).unwrap();
        assert_eq!(b.to_raw(&x, 2), vec![1, 1]);
        assert!(solve(b, &cols[..1], &b.from_raw(&[0, 1])).is_none());
    }

    proptest! {
        #[test]
        fn binary_rank_and_kernel(m in matrix(1)) {
            let b = Binary;
            let rows: Vec<_> = m.iter().map(|r| b.from_raw(r)).collect();
            let r = rank(b, rows);
            prop_assert_eq!(r, oracle_rank(Field::GF2, m.clone()));
            let cols = columns_of(b, &m);
            let ker = null_space(b, &cols);
            prop_assert_eq!(ker.len(), m[0].len() - r);
            for v in &ker {
                prop_assert!(b.is_zero(&apply(b, &cols, v, m.len())));
            }
            prop_assert_eq!(rank(b, ker.clone()), ker.len());
        }

        #[test]
        fn extension_rank_and_kernel(m in matrix(3)) {
            let f = Field::new(3).unwrap();
            let s = Extension(f);
            let rows: Vec<_> = m.iter().map(|r| s.from_raw(r)).collect();
            let r = rank(s, rows);
            prop_assert_eq!(r, oracle_rank(f, m.clone()));
            let cols = columns_of(s, &m);
            let ker = null_space(s, &cols);
            prop_assert_eq!(ker.len(), m[0].len() - r);
            for v in &ker {
                prop_assert!(s.is_zero(&apply(s, &cols, v, m.len())));
            }
        }

        #[test]
        fn solve_recovers_images(m in matrix(2), xs in proptest::collection::vec(0u16..4, 80)) {
            let f = Field::new(2).unwrap();
            let s = Extension(f);
            let cols = columns_of(s, &m);
            let x = s.from_raw(&xs[..cols.len()]);
            let target = apply(s, &cols, &x, m.len());
            let sol = solve(s, &cols, &target).unwrap();
            prop_assert_eq!(apply(s, &cols, &sol, m.len()), target);
        }
    }
}
