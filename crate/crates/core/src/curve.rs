//! Morphisms `P^1 -> X` into the Fermat quintic `X_0^5 + ... + X_5^5 = 0`.
//!
//! A [`CurveMap`] is a 6-tuple of forms of a common degree `d >= 1` that is
//! primitive (no common factor) and satisfies `G_0^5 + ... + G_5^5 = 0`.
//! Both conditions are checked at construction, including when reading a
//! curve file.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::forms::{gcd_all, BinaryForm, FormError};
use crate::linalg::{self, Binary, Extension, Space};
use crate::packed::PackedForm;

pub const COORDINATES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("expected {COORDINATES} forms, got {0}")]
    WrongArity(usize),
    #[error("forms have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("forms are over different fields")]
    FieldMismatch,
    #[error("curve degree must be at least 1")]
    ZeroDegree,
    #[error("all six forms are zero")]
    AllZero,
    #[error("sum of fifth powers is {residual}, not zero")]
    NotOnFermat { residual: BinaryForm },
    #[error("forms share the common factor {gcd}")]
    NotPrimitive { gcd: BinaryForm },
    #[error("column {column} does not give a pure coefficient identity in degree {degree}")]
    InvalidColumn { column: usize, degree: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveMap {
    forms: [BinaryForm; COORDINATES],
}

impl CurveMap {
    pub fn validate(forms: Vec<BinaryForm>) -> Result<CurveMap, CurveError> {
        let forms: [BinaryForm; COORDINATES] = forms
            .try_into()
            .map_err(|v: Vec<BinaryForm>| CurveError::WrongArity(v.len()))?;
        let field = forms[0].field();
        let degree = forms[0].degree();
        for g in &forms[1..] {
            if g.field() != field {
                return Err(CurveError::FieldMismatch);
            }
            if g.degree() != degree {
                return Err(CurveError::DegreeMismatch(degree, g.degree()));
            }
        }
        if degree == 0 {
            return Err(CurveError::ZeroDegree);
        }
        if forms.iter().all(BinaryForm::is_zero) {
            return Err(CurveError::AllZero);
        }
        let residual = fermat_residual(&forms);
        if !residual.is_zero() {
            return Err(CurveError::NotOnFermat { residual });
        }
        let gcd = gcd_all(&forms)?;
        if gcd.degree() > 0 {
            return Err(CurveError::NotPrimitive { gcd });
        }
        Ok(CurveMap { forms })
    }

    /// Build from GF(2) words without rechecking; callers have verified
    /// membership and primitivity with the packed routines.
    pub(crate) fn from_packed_unchecked(words: &[PackedForm; COORDINATES]) -> CurveMap {
        CurveMap {
            forms: words.map(|w| w.to_form()),
        }
    }

    pub fn from_packed(words: &[PackedForm; COORDINATES]) -> Result<CurveMap, CurveError> {
        CurveMap::validate(words.iter().map(|w| w.to_form()).collect())
    }

    pub fn field(&self) -> Field {
        self.forms[0].field()
    }

    pub fn degree(&self) -> usize {
        self.forms[0].degree()
    }

    pub fn forms(&self) -> &[BinaryForm; COORDINATES] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &BinaryForm {
        &self.forms[i]
    }

    pub fn packed(&self) -> Option<[PackedForm; COORDINATES]> {
        let words: Vec<PackedForm> = self
            .forms
            .iter()
            .map(PackedForm::from_form)
            .collect::<Option<_>>()?;
        words.try_into().ok()
    }

    pub fn coefficient_matrix(&self) -> CoefficientMatrix {
        let d = self.degree();
        let entries = self
            .forms
            .iter()
            .flat_map(|g| g.raw().iter().copied())
            .collect();
        CoefficientMatrix {
            field: self.field(),
            cols: d + 1,
            entries,
        }
    }

    /// Matrix of `(A_i) -> sum A_i G_i` on multipliers of degree `m`.
    ///
    /// Column `(m + 1) i + a` is the image of `S^(m-a) T^a` in slot `i`; row
    /// `j` holds the coefficient of `S^(d+m-j) T^j`.
    pub fn multiplication_matrix(&self, m: usize) -> CoefficientMatrix {
        let d = self.degree();
        let cols = COORDINATES * (m + 1);
        let mut entries = vec![0u16; (d + m + 1) * cols];
        for (i, g) in self.forms.iter().enumerate() {
            for a in 0..=m {
                for (j, &c) in g.raw().iter().enumerate() {
                    entries[(j + a) * cols + (m + 1) * i + a] = c;
                }
            }
        }
        CoefficientMatrix {
            field: self.field(),
            cols,
            entries,
        }
    }

    /// Evaluates `sum_i a_ij^4 a_iv` for `j = 0..=d`.
    ///
    /// Only columns `v` for which the coefficient of `S^(5d-4j-v) T^(4j+v)`
    /// in `sum G_i^5` contains no other products are accepted: `v <= d`,
    /// `v < 4` and `v + 4 > d`.
    pub fn identity_sums(&self, column: usize) -> Result<Vec<FieldElement>, CurveError> {
        let d = self.degree();
        if column > d || column >= 4 || column + 4 <= d {
            return Err(CurveError::InvalidColumn { column, degree: d });
        }
        let m = self.coefficient_matrix();
        let f = self.field();
        Ok((0..=d)
            .map(|j| {
                let bits = (0..COORDINATES).fold(0u16, |acc, i| {
                    acc ^ f.mul_raw(f.pow4_raw(m.raw(i, j)), m.raw(i, column))
                });
                f.element(bits as u32).expect("reduced")
            })
            .collect())
    }

    /// Whether every sum `sum_i a_ij^4 a_iv` vanishes.
    pub fn check_identity(&self, column: usize) -> Result<bool, CurveError> {
        Ok(self.identity_sums(column)?.iter().all(|x| x.is_zero()))
    }

    /// The same curve with `S` and `T` exchanged.
    pub fn swap_variables(&self) -> CurveMap {
        let forms = self.forms.clone().map(|g| {
            let mut raw = g.raw().to_vec();
            raw.reverse();
            BinaryForm::from_raw(g.field(), raw)
        });
        CurveMap { forms }
    }

    /// Parse the curve file format:
    ///
    /// ```text
    /// field: 2^1
    /// degree: 8
    /// G0 = S^7*T
    /// ...
    /// G5 = S^8 + S^7*T
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<CurveMap, CurveError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, message: String| CurveError::Parse { line, message };

        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `field:` line".into()))?;
        let field = l
            .strip_prefix("field:")
            .map(str::trim)
            .and_then(|v| v.strip_prefix("2^"))
            .and_then(|e| e.trim().parse::<u32>().ok())
            .ok_or_else(|| parse_err(ln, format!("expected `field: 2^e`, found `{l}`")))
            .and_then(|e| Field::new(e).map_err(|err| parse_err(ln, err.to_string())))?;

        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(ln + 1, "missing `degree:` line".into()))?;
        let degree = l
            .strip_prefix("degree:")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_err(ln, format!("expected `degree: d`, found `{l}`")))?;

        let mut forms: Vec<Option<BinaryForm>> = vec![None; COORDINATES];
        let mut last = ln;
        for (ln, l) in lines {
            last = ln;
            let (lhs, rhs) = l
                .split_once('=')
                .ok_or_else(|| parse_err(ln, format!("expected `G<i> = <form>`, found `{l}`")))?;
            let index = lhs
                .trim()
                .strip_prefix('G')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i < COORDINATES)
                .ok_or_else(|| parse_err(ln, format!("unknown coordinate `{}`", lhs.trim())))?;
            if forms[index].is_some() {
                return Err(parse_err(ln, format!("G{index} given twice")));
            }
            let form =
                BinaryForm::parse(rhs, field, degree).map_err(|e| parse_err(ln, e.to_string()))?;
            forms[index] = Some(form);
        }
        let forms = forms
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| parse_err(last, format!("missing G{i}"))))
            .collect::<Result<Vec<_>, _>>()?;
        CurveMap::validate(forms)
    }
}

impl FromStr for CurveMap {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveMap::parse(s)
    }
}

impl fmt::Display for CurveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.field())?;
        writeln!(f, "degree: {}", self.degree())?;
        for (i, g) in self.forms.iter().enumerate() {
            writeln!(f, "G{i} = {g}")?;
        }
        Ok(())
    }
}

/// `sum G_i^5`.
pub fn fermat_residual(forms: &[BinaryForm]) -> BinaryForm {
    let mut acc = BinaryForm::zero(forms[0].field(), 5 * forms[0].degree());
    for g in forms {
        acc = acc.add(&g.pow5()).expect("equal degrees");
    }
    acc
}

/// The `6 x (d+1)` matrix `(a_ij)` with `G_i = sum_j a_ij S^(d-j) T^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMatrix {
    field: Field,
    cols: usize,
    entries: Vec<u16>,
}

impl CoefficientMatrix {
    pub fn from_rows(field: Field, rows: &[Vec<FieldElement>]) -> CoefficientMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols));
        CoefficientMatrix {
            field,
            cols,
            entries: rows.iter().flatten().map(|x| x.bits()).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.entries.len() / self.cols.max(1)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn raw(&self, i: usize, j: usize) -> u16 {
        self.entries[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.raw(i, j) as u32).expect("reduced")
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows()).map(|i| self.get(i, j)).collect()
    }

    /// Entry-wise fourth powers `(a_ij^4)`.
    pub fn frobenius(&self) -> CoefficientMatrix {
        CoefficientMatrix {
            field: self.field,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|&a| self.field.pow4_raw(a))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        fn go<S: Space>(s: S, m: &CoefficientMatrix) -> usize {
            linalg::rank(
                s,
                (0..m.rows()).map(|i| s.from_raw(&m.entries[i * m.cols..(i + 1) * m.cols])),
            )
        }
        if self.field.is_prime() {
            go(Binary, self)
        } else {
            go(Extension(self.field), self)
        }
    }

    /// Row vector times matrix: `(sum_i x_i a_ij)_j`.
    pub fn left_multiply(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(x.len(), self.rows());
        let f = self.field;
        (0..self.cols)
            .map(|j| {
                let bits = (0..self.rows())
                    .fold(0u16, |acc, i| acc ^ f.mul_raw(x[i].bits(), self.raw(i, j)));
                f.element(bits as u32).expect("reduced")
            })
            .collect()
    }
}

impl fmt::Display for CoefficientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols).map(|j| self.raw(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl serde::Serialize for CurveMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
