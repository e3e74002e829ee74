//! Bit-packed binary forms over GF(2).
//!
//! Bit `j` of the word is the coefficient of `S^(d-j) T^j`, matching
//! [`BinaryForm`] coefficient order, so products are carry-less products of
//! the words.

use crate::field::Field;
use crate::forms::BinaryForm;

/// Largest degree whose forms fit in one word.
pub const MAX_PACKED_DEGREE: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedForm {
    degree: u8,
    bits: u64,
}

impl PackedForm {
    pub fn new(degree: usize, bits: u64) -> Self {
        assert!(degree <= MAX_PACKED_DEGREE, "degree {degree} too large");
        let mask = mask(degree);
        assert!(bits & !mask == 0, "bits beyond degree {degree}");
        PackedForm {
            degree: degree as u8,
            bits,
        }
    }

    pub fn degree(self) -> usize {
        self.degree as usize
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// `None` unless the form is over GF(2) and of small enough degree.
    pub fn from_form(form: &BinaryForm) -> Option<Self> {
        if !form.field().is_prime() || form.degree() > MAX_PACKED_DEGREE {
            return None;
        }
        let bits = form
            .raw()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | ((c as u64 & 1) << j));
        Some(PackedForm::new(form.degree(), bits))
    }

    pub fn to_form(self) -> BinaryForm {
        let coeffs = (0..=self.degree())
            .map(|j| ((self.bits >> j) & 1) as u16)
            .collect();
        BinaryForm::from_raw(Field::GF2, coeffs)
    }

    pub fn add(self, other: PackedForm) -> PackedForm {
        assert_eq!(self.degree, other.degree);
        PackedForm {
            degree: self.degree,
            bits: self.bits ^ other.bits,
        }
    }

    pub fn mul(self, other: PackedForm) -> PackedForm {
        let degree = self.degree() + other.degree();
        assert!(degree <= MAX_PACKED_DEGREE);
        PackedForm {
            degree: degree as u8,
            bits: clmul(self.bits, other.bits) as u64,
        }
    }

    /// Spread bit `j` to bit `4j`.
    pub fn pow4(self) -> PackedForm {
        let degree = 4 * self.degree();
        assert!(degree <= MAX_PACKED_DEGREE);
        PackedForm {
            degree: degree as u8,
            bits: spread4(self.bits),
        }
    }

    pub fn pow5(self) -> PackedForm {
        self.pow4().mul(self)
    }

    /// S<->T swap, i.e. bit reversal within the degree.
    pub fn swap_variables(self) -> PackedForm {
        let d = self.degree();
        PackedForm {
            degree: self.degree,
            bits: self.bits.reverse_bits() >> (63 - d),
        }
    }
}

#[inline]
pub fn mask(degree: usize) -> u64 {
    if degree >= 63 {
        u64::MAX
    } else {
        (1u64 << (degree + 1)) - 1
    }
}

/// Carry-less product of two 64-bit words.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let (a, mut b) = (a as u128, b);
    let mut acc = 0u128;
    while b != 0 {
        let tz = b.trailing_zeros();
        acc ^= a << tz;
        b &= b - 1;
    }
    acc
}

/// Moves bit `j` to bit `4j` for `j < 16`.
#[inline]
pub fn spread4(x: u64) -> u64 {
    let mut out = 0u64;
    let mut x = x;
    while x != 0 {
        let j = x.trailing_zeros();
        out |= 1u64 << (4 * j);
        x &= x - 1;
    }
    out
}

fn poly_deg(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// gcd in GF(2)[x] of two words read as univariate polynomials.
pub fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = poly_deg(b);
        while a != 0 && poly_deg(a) >= db {
            a ^= b << (poly_deg(a) - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// True when the forms (all of degree `degree`) share no common factor.
///
/// Dehomogenizing at `S = 1` turns a packed word directly into a polynomial
/// in `T`; the factor `S` is tracked by the coefficient of `T^degree`.
pub fn is_primitive(degree: usize, words: &[u64]) -> bool {
    let top = 1u64 << degree;
    if words.iter().all(|w| w & top == 0) {
        // S divides every form (or all are zero).
        return false;
    }
    let mut g = 0u64;
    for &w in words {
        if w == 0 {
            continue;
        }
        g = poly_gcd(g, w);
        if g == 1 {
            return true;
        }
    }
    g == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::gcd_all;
    use proptest::prelude::*;

    #[test]
    fn fifth_power_examples() {
        let s7t = PackedForm::new(8, 0b10);
        assert_eq!(s7t.pow5(), PackedForm::new(40, 1 << 5));
        let spt = PackedForm::new(1, 0b11);
        assert_eq!(spt.pow5().bits(), 0b110011);
    }

    #[test]
    fn primitivity() {
        // (S, S, T, T, 0, 0)
        assert!(is_primitive(1, &[0b01, 0b01, 0b10, 0b10, 0, 0]));
        // S*T and S^2 share S.
        assert!(!is_primitive(2, &[0b010, 0b001]));
        assert!(!is_primitive(2, &[0, 0]));
        // T^2 and S*T share T.
        assert!(!is_primitive(2, &[0b100, 0b010]));
        assert!(is_primitive(2, &[0b100, 0b001]));
    }

    proptest! {
        #[test]
        fn agrees_with_generic_forms(d in 0usize..12, a in any::<u64>(), b in any::<u64>()) {
            let (pa, pb) = (PackedForm::new(d, a & mask(d)), PackedForm::new(d, b & mask(d)));
            let (fa, fb) = (pa.to_form(), pb.to_form());
            prop_assert_eq!(PackedForm::from_form(&fa), Some(pa));
            prop_assert_eq!(pa.mul(pb).to_form(), fa.mul(&fb).unwrap());
            prop_assert_eq!(pa.add(pb).to_form(), fa.add(&fb).unwrap());
            prop_assert_eq!(pa.pow4().to_form(), fa.pow4());
            prop_assert_eq!(pa.pow5().to_form(), fa.pow5());
        }

        #[test]
        fn primitivity_matches_generic_gcd(d in 1usize..10, words in proptest::collection::vec(any::<u64>(), 6)) {
            let words: Vec<u64> = words.iter().map(|w| w & mask(d)).collect();
            prop_assume!(words.iter().any(|&w| w != 0));
            let forms: Vec<BinaryForm> = words.iter().map(|&w| PackedForm::new(d, w).to_form()).collect();
            let g = gcd_all(&forms).unwrap();
            prop_assert_eq!(is_primitive(d, &words), g.degree() == 0);
        }

        #[test]
        fn swap_is_an_involution(d in 0usize..20, a in any::<u64>()) {
            let p = PackedForm::new(d, a & mask(d));
            prop_assert_eq!(p.swap_variables().swap_variables(), p);
        }
    }
}
