//! Binary forms: homogeneous polynomials in `S`, `T` over GF(2^e).
//!
//! A form of degree `d` stores `c_0, ..., c_d` where `c_j` multiplies
//! `S^(d-j) T^j`, so coefficients run in ascending `T`-exponent.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("gcd of two zero forms is undefined")]
    BothZero,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("cannot parse form `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<u16>,
}

impl BinaryForm {
    pub fn zero(field: Field, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![0; degree + 1],
        }
    }

    pub fn one(field: Field) -> Self {
        BinaryForm {
            field,
            coeffs: vec![1],
        }
    }

    /// `c * S^s * T^t`.
    pub fn monomial(coeff: FieldElement, s: usize, t: usize) -> Self {
        let mut form = BinaryForm::zero(coeff.field(), s + t);
        form.coeffs[t] = coeff.bits();
        form
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<FieldElement>) -> Result<Self, FormError> {
        if coeffs.is_empty() {
            return Err(FormError::CoefficientCount {
                expected: 1,
                got: 0,
            });
        }
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != field {
                return Err(FieldError::DegreeMismatch {
                    left: field.degree(),
                    right: c.field().degree(),
                }
                .into());
            }
            raw.push(c.bits());
        }
        Ok(BinaryForm { field, coeffs: raw })
    }

    /// Build from raw bit patterns, validating each against the field.
    pub fn from_bits(field: Field, bits: &[u32]) -> Result<Self, FormError> {
        let coeffs = bits
            .iter()
            .map(|&b| field.element(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(field, coeffs)
    }

    pub(crate) fn from_raw(field: Field, coeffs: Vec<u16>) -> Self {
        debug_assert!(!coeffs.is_empty());
        BinaryForm { field, coeffs }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `S^(d-j) T^j`.
    pub fn coeff(&self, j: usize) -> FieldElement {
        self.field
            .element(self.coeffs[j] as u32)
            .expect("stored coefficients are reduced")
    }

    pub fn coeffs(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.coeffs.len()).map(move |j| self.coeff(j))
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_field(&self, other: &BinaryForm) -> Result<(), FormError> {
        if self.field != other.field {
            return Err(FieldError::DegreeMismatch {
                left: self.field.degree(),
                right: other.field.degree(),
            }
            .into());
        }
        Ok(())
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        self.check_field(other)?;
        if self.degree() != other.degree() {
            return Err(FormError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BinaryForm {
            field: self.field,
            coeffs,
        })
    }

    pub fn mul(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        self.check_field(other)?;
        let f = self.field;
        let mut out = vec![0u16; self.degree() + other.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] ^= f.mul_raw(a, b);
            }
        }
        Ok(BinaryForm {
            field: f,
            coeffs: out,
        })
    }

    pub fn scale(&self, c: FieldElement) -> Result<BinaryForm, FormError> {
        if c.field() != self.field {
            return Err(FieldError::DegreeMismatch {
                left: self.field.degree(),
                right: c.field().degree(),
            }
            .into());
        }
        let f = self.field;
        Ok(BinaryForm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| f.mul_raw(a, c.bits()))
                .collect(),
        })
    }

    /// `S^s T^t * self`.
    pub fn shift(&self, s: usize, t: usize) -> BinaryForm {
        let mut coeffs = vec![0u16; self.coeffs.len() + s + t];
        coeffs[t..t + self.coeffs.len()].copy_from_slice(&self.coeffs);
        BinaryForm {
            field: self.field,
            coeffs,
        }
    }

    /// Fourth power via the coefficient map `c_j S^(d-j) T^j -> c_j^4 S^(4(d-j)) T^(4j)`.
    pub fn pow4(&self) -> BinaryForm {
        let f = self.field;
        let mut coeffs = vec![0u16; 4 * self.degree() + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[4 * j] = f.pow4_raw(c);
        }
        BinaryForm { field: f, coeffs }
    }

    /// Fifth power, computed as `pow4(G) * G`.
    pub fn pow5(&self) -> BinaryForm {
        self.pow4().mul(self).expect("same field")
    }

    /// `G(aS + bT, cS + eT)` for `images = [(a, b), (c, e)]`.
    pub fn substitute(
        &self,
        images: [(FieldElement, FieldElement); 2],
    ) -> Result<BinaryForm, FormError> {
        let f = self.field;
        let linear = |(x, y): (FieldElement, FieldElement)| -> Result<BinaryForm, FormError> {
            BinaryForm::from_coeffs(f, vec![x, y])
        };
        let (ls, lt) = (linear(images[0])?, linear(images[1])?);
        let d = self.degree();
        let mut s_pows = vec![BinaryForm::one(f)];
        let mut t_pows = vec![BinaryForm::one(f)];
        for k in 0..d {
            s_pows.push(s_pows[k].mul(&ls)?);
            t_pows.push(t_pows[k].mul(&lt)?);
        }
        let mut acc = BinaryForm::zero(f, d);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let term = s_pows[d - j].mul(&t_pows[j])?.scale(f.element(c as u32)?)?;
                acc = acc.add(&term)?;
            }
        }
        Ok(acc)
    }

    pub fn evaluate(&self, s: FieldElement, t: FieldElement) -> Result<FieldElement, FormError> {
        let f = self.field;
        if s.field() != f || t.field() != f {
            let other = if s.field() != f { s.field() } else { t.field() };
            return Err(FieldError::DegreeMismatch {
                left: f.degree(),
                right: other.degree(),
            }
            .into());
        }
        let d = self.degree() as u64;
        let mut acc = 0u16;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let j = j as u64;
            let term = f.mul_raw(
                c,
                f.mul_raw(f.pow_raw(s.bits(), d - j), f.pow_raw(t.bits(), j)),
            );
            acc ^= term;
        }
        Ok(f.element(acc as u32)?)
    }

    /// Largest `k` with `T^k` dividing the form; `None` for the zero form.
    pub fn t_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Monic greatest common divisor.
    ///
    /// Powers of `T` are split off first; the remaining factor is
    /// dehomogenized at `T = 1` and handled by the univariate Euclidean
    /// algorithm in `S`. The result is scaled so the coefficient of its
    /// highest power of `S` is 1.
    pub fn gcd(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        self.check_field(other)?;
        let f = self.field;
        let (va, vb) = match (self.t_valuation(), other.t_valuation()) {
            (None, None) => return Err(FormError::BothZero),
            (Some(v), None) => return Ok(self.normalized_from(v)),
            (None, Some(v)) => return Ok(other.normalized_from(v)),
            (Some(a), Some(b)) => (a, b),
        };
        let g = univariate_gcd(f, self.dehomogenize(), other.dehomogenize());
        Ok(homogenize_with_t(f, &g, va.min(vb)))
    }

    /// Polynomial in `S` obtained by `T = 1`, ascending in powers of `S`.
    fn dehomogenize(&self) -> Vec<u16> {
        let mut p: Vec<u16> = self.coeffs.iter().rev().copied().collect();
        trim(&mut p);
        p
    }

    fn normalized_from(&self, valuation: usize) -> BinaryForm {
        let g = make_monic(self.field, self.dehomogenize());
        homogenize_with_t(self.field, &g, valuation)
    }
}

/// `T^v * T^deg(g) * g(S/T)`.
fn homogenize_with_t(f: Field, g: &[u16], v: usize) -> BinaryForm {
    let k = g.len() - 1;
    let mut coeffs = vec![0u16; k + v + 1];
    for (s_exp, &c) in g.iter().enumerate() {
        coeffs[k - s_exp + v] = c;
    }
    BinaryForm { field: f, coeffs }
}

fn trim(p: &mut Vec<u16>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn make_monic(f: Field, mut p: Vec<u16>) -> Vec<u16> {
    trim(&mut p);
    let lead = *p.last().unwrap();
    if lead != 0 && lead != 1 {
        let inv = f.inv_raw(lead).expect("nonzero");
        for c in p.iter_mut() {
            *c = f.mul_raw(*c, inv);
        }
    }
    p
}

fn is_zero_poly(p: &[u16]) -> bool {
    p.iter().all(|&c| c == 0)
}

/// Remainder of `a` modulo nonzero `b`, both ascending.
fn poly_rem(f: Field, mut a: Vec<u16>, b: &[u16]) -> Vec<u16> {
    let db = b.len() - 1;
    let inv_lead = f.inv_raw(b[db]).expect("nonzero divisor");
    trim(&mut a);
    while !is_zero_poly(&a) && a.len() > db {
        let da = a.len() - 1;
        let q = f.mul_raw(a[da], inv_lead);
        let shift = da - db;
        for (i, &c) in b.iter().enumerate() {
            a[i + shift] ^= f.mul_raw(q, c);
        }
        trim(&mut a);
    }
    a
}

fn univariate_gcd(f: Field, mut a: Vec<u16>, mut b: Vec<u16>) -> Vec<u16> {
    trim(&mut a);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let r = poly_rem(f, a, &b);
        a = b;
        b = r;
    }
    make_monic(f, a)
}

/// Monic gcd of a list of forms; zero forms are skipped.
pub fn gcd_all<'a, I>(forms: I) -> Result<BinaryForm, FormError>
where
    I: IntoIterator<Item = &'a BinaryForm>,
{
    let mut acc: Option<BinaryForm> = None;
    for form in forms {
        if form.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => form.gcd(form)?,
            Some(g) => g.gcd(form)?,
        });
    }
    acc.ok_or(FormError::BothZero)
}

impl fmt::Display for BinaryForm {
    /// Canonical text: monomials in ascending `T`-exponent joined by ` + `,
    /// coefficient prefix `c*` only when `c != 1`, zero form as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::with_capacity(3);
            if c != 1 {
                factors.push(c.to_string());
            }
            let (s, t) = (d - j, j);
            match s {
                0 => {}
                1 => factors.push("S".to_string()),
                _ => factors.push(format!("S^{s}")),
            }
            match t {
                0 => {}
                1 => factors.push("T".to_string()),
                _ => factors.push(format!("T^{t}")),
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            f.write_str(&factors.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl BinaryForm {
    /// Compact text `coeffs:[c0,...,cd]`.
    pub fn to_compact(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("coeffs:[{}]", parts.join(","))
    }

    /// Parse either the monomial syntax (`S^7*T + 3*S^4*T^4`) or the compact
    /// syntax (`coeffs:[0,1,0]`). Repeated monomials are summed.
    pub fn parse(text: &str, field: Field, degree: usize) -> Result<BinaryForm, FormError> {
        let err = |reason: String| FormError::Parse {
            text: text.to_string(),
            reason,
        };
        let trimmed = text.trim();
        if let Some(rest) = trimmed.strip_prefix("coeffs:") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err("expected `coeffs:[c0,...,cd]`".into()))?;
            let bits = inner
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|e| err(format!("bad coefficient `{}`: {e}", s.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if bits.len() != degree + 1 {
                return Err(FormError::CoefficientCount {
                    expected: degree + 1,
                    got: bits.len(),
                });
            }
            return BinaryForm::from_bits(field, &bits);
        }
        if trimmed.is_empty() {
            return Err(err("empty form".into()));
        }
        let mut form = BinaryForm::zero(field, degree);
        for term in trimmed.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term".into()));
            }
            let mut coeff: u32 = 1;
            let (mut s, mut t) = (0usize, 0usize);
            for (k, factor) in term.split('*').enumerate() {
                let factor = factor.trim();
                let (var, exp) = match factor.split_once('^') {
                    Some((v, e)) => {
                        let e = e
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad exponent in `{factor}`")))?;
                        (v.trim(), e)
                    }
                    None => (factor, 1),
                };
                match var {
                    "S" => s += exp,
                    "T" => t += exp,
                    _ if k == 0 && !factor.contains('^') => {
                        coeff = factor
                            .parse::<u32>()
                            .map_err(|_| err(format!("unknown factor `{factor}`")))?;
                    }
                    _ => return Err(err(format!("unknown factor `{factor}`"))),
                }
            }
            let c = field.element(coeff)?;
            if c.is_zero() {
                continue;
            }
            if s + t != degree {
                if s == 0 && t == 0 && degree != 0 {
                    return Err(err(format!(
                        "constant term `{term}` in a form of degree {degree}"
                    )));
                }
                return Err(err(format!(
                    "monomial `{term}` has degree {}, expected {degree}",
                    s + t
                )));
            }
            form.coeffs[t] ^= c.bits();
        }
        Ok(form)
    }
}
