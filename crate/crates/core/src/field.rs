//! Arithmetic in the binary fields GF(2^e), 1 <= e <= 16.
//!
//! Elements are stored in the polynomial basis: bit `k` of [`FieldElement::bits`]
//! is the coefficient of `x^k` in the residue class modulo a fixed irreducible
//! polynomial. The modulus for each extension degree is the lexicographically
//! least irreducible polynomial of that degree:
//!
//! | e  | modulus   | polynomial                    |
//! |----|-----------|-------------------------------|
//! | 1  | `0x2`     | x                             |
//! | 2  | `0x7`     | x^2 + x + 1                   |
//! | 3  | `0xb`     | x^3 + x + 1                   |
//! | 4  | `0x13`    | x^4 + x + 1                   |
//! | 5  | `0x25`    | x^5 + x^2 + 1                 |
//! | 6  | `0x43`    | x^6 + x + 1                   |
//! | 7  | `0x83`    | x^7 + x + 1                   |
//! | 8  | `0x11b`   | x^8 + x^4 + x^3 + x + 1       |
//! | 9  | `0x203`   | x^9 + x + 1                   |
//! | 10 | `0x409`   | x^10 + x^3 + 1                |
//! | 11 | `0x805`   | x^11 + x^2 + 1                |
//! | 12 | `0x1009`  | x^12 + x^3 + 1                |
//! | 13 | `0x201b`  | x^13 + x^4 + x^3 + x + 1      |
//! | 14 | `0x4021`  | x^14 + x^5 + 1                |
//! | 15 | `0x8003`  | x^15 + x + 1                  |
//! | 16 | `0x1002b` | x^16 + x^5 + x^3 + x + 1      |
//!
//! The table is part of the curve file format: a coefficient written as the
//! integer `b` in a `2^e` file means the residue whose bits are `b`.

use std::fmt;

use thiserror::Error;

/// Moduli indexed by extension degree (index 0 unused).
const MODULI: [u32; 17] = [
    0, 0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

pub const MAX_EXTENSION_DEGREE: u8 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} is outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("field mismatch: GF(2^{left}) vs GF(2^{right})")]
    DegreeMismatch { left: u8, right: u8 },
    #[error("division by zero in GF(2^{0})")]
    DivisionByZero(u8),
    #[error("value {bits} is not an element of GF(2^{degree})")]
    OutOfRange { bits: u32, degree: u8 },
}

/// The field GF(2^e) with its fixed modulus. Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    degree: u8,
}

impl Field {
    /// The prime field GF(2).
    pub const GF2: Field = Field { degree: 1 };

    pub fn new(degree: u32) -> Result<Self, FieldError> {
        if degree == 0 || degree > MAX_EXTENSION_DEGREE as u32 {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        Ok(Field {
            degree: degree as u8,
        })
    }

    /// Extension degree `e` over GF(2).
    pub fn degree(self) -> u8 {
        self.degree
    }

    pub fn order(self) -> u32 {
        1u32 << self.degree
    }

    pub fn modulus(self) -> u32 {
        MODULI[self.degree as usize]
    }

    pub fn is_prime(self) -> bool {
        self.degree == 1
    }

    pub fn zero(self) -> FieldElement {
        FieldElement {
            bits: 0,
            field: self,
        }
    }

    pub fn one(self) -> FieldElement {
        FieldElement {
            bits: 1,
            field: self,
        }
    }

    /// The class of `x`, i.e. bits `0b10`. In GF(2) this is `0`.
    pub fn generator(self) -> FieldElement {
        let bits = if self.degree == 1 { 0 } else { 2 };
        FieldElement { bits, field: self }
    }

    pub fn element(self, bits: u32) -> Result<FieldElement, FieldError> {
        if bits >= self.order() {
            return Err(FieldError::OutOfRange {
                bits,
                degree: self.degree,
            });
        }
        Ok(FieldElement {
            bits: bits as u16,
            field: self,
        })
    }

    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(move |b| FieldElement {
            bits: b as u16,
            field: self,
        })
    }

    // Raw arithmetic on bit patterns. Callers guarantee the inputs are reduced.

    #[inline]
    pub fn add_raw(self, x: u16, y: u16) -> u16 {
        x ^ y
    }

    #[inline]
    pub fn mul_raw(self, x: u16, y: u16) -> u16 {
        if self.degree == 1 {
            return x & y;
        }
        reduce(clmul16(x, y), self.degree, self.modulus())
    }

    #[inline]
    pub fn square_raw(self, x: u16) -> u16 {
        self.mul_raw(x, x)
    }

    #[inline]
    pub fn pow4_raw(self, x: u16) -> u16 {
        if self.degree == 1 {
            return x;
        }
        self.square_raw(self.square_raw(x))
    }

    pub fn pow_raw(self, mut x: u16, mut n: u64) -> u16 {
        let mut acc = 1u16;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, x);
            }
            x = self.square_raw(x);
            n >>= 1;
        }
        acc
    }

    /// Inverse by Fermat: x^(2^e - 2). Returns `None` for zero.
    pub fn inv_raw(self, x: u16) -> Option<u16> {
        if x == 0 {
            return None;
        }
        Some(self.pow_raw(x, self.order() as u64 - 2))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.degree)
    }
}

/// Carry-less product of two 16-bit polynomials.
#[inline]
fn clmul16(x: u16, y: u16) -> u32 {
    let (x, mut y) = (x as u32, y as u32);
    let mut acc = 0u32;
    let mut shift = 0;
    while y != 0 {
        let tz = y.trailing_zeros();
        shift += tz;
        y >>= tz;
        acc ^= x << shift;
        y >>= 1;
        shift += 1;
    }
    acc
}

/// Reduce a product of degree < 2e modulo the degree-e modulus.
#[inline]
fn reduce(mut p: u32, degree: u8, modulus: u32) -> u16 {
    let e = degree as u32;
    while p >> e != 0 {
        let top = 31 - p.leading_zeros();
        p ^= modulus << (top - e);
    }
    p as u16
}

/// An element of GF(2^e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u16,
    field: Field,
}

impl FieldElement {
    pub fn bits(self) -> u16 {
        self.bits
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    fn same_field(self, other: FieldElement) -> Result<Field, FieldError> {
        if self.field != other.field {
            return Err(FieldError::DegreeMismatch {
                left: self.field.degree,
                right: other.field.degree,
            });
        }
        Ok(self.field)
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let field = self.same_field(other)?;
        Ok(FieldElement {
            bits: field.add_raw(self.bits, other.bits),
            field,
        })
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let field = self.same_field(other)?;
        Ok(FieldElement {
            bits: field.mul_raw(self.bits, other.bits),
            field,
        })
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        let bits = self
            .field
            .inv_raw(self.bits)
            .ok_or(FieldError::DivisionByZero(self.field.degree))?;
        Ok(FieldElement {
            bits,
            field: self.field,
        })
    }

    /// Fourth power, the square of the Frobenius endomorphism.
    pub fn pow4(self) -> FieldElement {
        FieldElement {
            bits: self.field.pow4_raw(self.bits),
            field: self.field,
        }
    }

    pub fn pow(self, n: u64) -> FieldElement {
        FieldElement {
            bits: self.field.pow_raw(self.bits, n),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Multiply by repeated doubling with reduction after every step.
    fn shift_and_reduce(field: Field, x: u16, y: u16) -> u16 {
        let e = field.degree() as u32;
        let m = field.modulus();
        let (mut a, mut acc) = (x as u32, 0u32);
        for k in 0..e {
            if (y >> k) & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            if a >> e & 1 == 1 {
                a ^= m;
            }
        }
        acc as u16
    }

    fn poly_deg(p: u32) -> i32 {
        31 - p.leading_zeros() as i32
    }

    fn poly_divmod(mut a: u32, b: u32) -> (u32, u32) {
        let mut q = 0;
        while a != 0 && poly_deg(a) >= poly_deg(b) {
            let s = poly_deg(a) - poly_deg(b);
            q ^= 1 << s;
            a ^= b << s;
        }
        (q, a)
    }

    fn poly_mul(a: u32, b: u32) -> u32 {
        let mut acc = 0;
        for k in 0..32 {
            if (b >> k) & 1 == 1 {
                acc ^= a << k;
            }
        }
        acc
    }

    /// Extended Euclid over GF(2)[x]: returns u with u*x = 1 mod modulus.
    fn euclid_inverse(field: Field, x: u16) -> u16 {
        let (mut r0, mut r1) = (field.modulus(), x as u32);
        let (mut s0, mut s1) = (0u32, 1u32);
        while r1 != 0 {
            let (q, r) = poly_divmod(r0, r1);
            let s = s0 ^ poly_mul(q, s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        assert_eq!(r0, 1);
        let (_, u) = poly_divmod(s0, field.modulus());
        u as u16
    }

    #[test]
    fn moduli_are_least_irreducibles() {
        fn irreducible(p: u32) -> bool {
            let d = poly_deg(p);
            (2u32..(1 << (d / 2 + 1)))
                .filter(|q| poly_deg(*q) >= 1 && poly_deg(*q) <= d / 2)
                .all(|q| poly_divmod(p, q).1 != 0)
        }
        for e in 1..=16u32 {
            let m = Field::new(e).unwrap().modulus();
            assert_eq!(poly_deg(m), e as i32);
            assert!(irreducible(m), "modulus for e={e}");
            for smaller in (1u32 << e)..m {
                assert!(!irreducible(smaller), "e={e}: {smaller:#x} is smaller");
            }
        }
    }

    #[test]
    fn gf2_examples() {
        let f = Field::GF2;
        assert_eq!(f.one().add(f.one()).unwrap(), f.zero());
        assert_eq!(f.one().add(f.zero()).unwrap(), f.one());
        assert_eq!(f.one().mul(f.one()).unwrap(), f.one());
        assert_eq!(f.one().inv().unwrap(), f.one());
    }

    #[test]
    fn gf4_examples() {
        let f = Field::new(2).unwrap();
        let g = f.generator();
        let g1 = g.add(f.one()).unwrap();
        assert_eq!(g.add(g).unwrap(), f.zero());
        assert_eq!(g.mul(g).unwrap(), g1);
        assert_eq!(g.mul(g1).unwrap(), f.one());
        assert_eq!(g.inv().unwrap(), g1);
        assert_eq!(g.pow4(), g);
    }

    #[test]
    fn pow4_fixed_points() {
        for e in 1..=16 {
            let f = Field::new(e).unwrap();
            assert_eq!(f.zero().pow4(), f.zero());
            assert_eq!(f.one().pow4(), f.one());
        }
    }

    #[test]
    fn errors() {
        let f2 = Field::GF2;
        let f4 = Field::new(2).unwrap();
        assert_eq!(
            f2.one().add(f4.one()),
            Err(FieldError::DegreeMismatch { left: 1, right: 2 })
        );
        assert!(matches!(
            f2.one().mul(f4.one()),
            Err(FieldError::DegreeMismatch { .. })
        ));
        assert_eq!(f4.zero().inv(), Err(FieldError::DivisionByZero(2)));
        assert!(Field::new(0).is_err());
        assert!(Field::new(17).is_err());
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn mul_matches_shift_and_reduce_exhaustively() {
        for e in 1..=4 {
            let f = Field::new(e).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    let got = x.mul(y).unwrap().bits();
                    assert_eq!(got, shift_and_reduce(f, x.bits(), y.bits()), "e={e}");
                }
            }
        }
    }

    #[test]
    fn inverse_matches_euclid_in_gf256() {
        let f = Field::new(8).unwrap();
        for x in f.elements().skip(1) {
            let inv = x.inv().unwrap();
            assert_eq!(inv.bits(), euclid_inverse(f, x.bits()));
            assert_eq!(x.mul(inv).unwrap(), f.one());
        }
    }

    fn element() -> impl Strategy<Value = (u32, u32, u32)> {
        (1u32..=16).prop_flat_map(|e| {
            let n = 1u32 << e;
            (Just(e), 0..n, 0..n)
        })
    }

    proptest! {
        #[test]
        fn characteristic_two((e, a, _b) in element()) {
            let f = Field::new(e).unwrap();
            let x = f.element(a).unwrap();
            prop_assert!(x.add(x).unwrap().is_zero());
        }

        #[test]
        fn pow4_is_a_ring_homomorphism((e, a, b) in element()) {
            let f = Field::new(e).unwrap();
            let (x, y) = (f.element(a).unwrap(), f.element(b).unwrap());
            prop_assert_eq!(x.add(y).unwrap().pow4(), x.pow4().add(y.pow4()).unwrap());
            prop_assert_eq!(x.mul(y).unwrap().pow4(), x.pow4().mul(y.pow4()).unwrap());
            prop_assert_eq!(x.pow4(), x.pow(4));
        }

        #[test]
        fn mul_matches_oracle((e, a, b) in element()) {
            let f = Field::new(e).unwrap();
            prop_assert_eq!(f.mul_raw(a as u16, b as u16), shift_and_reduce(f, a as u16, b as u16));
        }

        #[test]
        fn inverse_round_trip((e, a, _b) in element()) {
            let f = Field::new(e).unwrap();
            prop_assume!(a != 0);
            let x = f.element(a).unwrap();
            prop_assert_eq!(x.mul(x.inv().unwrap()).unwrap(), f.one());
            prop_assert_eq!(x.inv().unwrap().bits(), euclid_inverse(f, a as u16));
        }
    }
}
