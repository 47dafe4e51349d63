//! Arithmetic in binary extension fields GF(2^w), 2 <= w <= 16.
//!
//! Elements are stored as integers whose bit `i` is the coefficient of `x^i`
//! in a polynomial over GF(2), reduced modulo a primitive polynomial. The
//! primitive element is always the residue class of `x` (the integer 2).
//!
//! Addition is XOR and needs no field handle, so [`FieldElement`] implements
//! `Add` directly. Multiplication, inversion and powers go through the log/exp
//! tables owned by [`Field`].

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use crate::error::{Error, Result};

/// The default field: GF(2^8) with x^8 + x^4 + x^3 + x^2 + 1.
pub const DEFAULT_BITS: u32 = 8;
pub const DEFAULT_POLY: u32 = 0x11D;

/// An element of some GF(2^w), stored as its polynomial bit pattern.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl From<u16> for FieldElement {
    fn from(v: u16) -> Self {
        FieldElement(v)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

// Characteristic 2: subtraction is addition.
impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

/// A binary extension field with precomputed log/antilog tables.
///
/// Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    w: u32,
    q: usize,
    primitive_poly: u32,
    // exp[i] = alpha^i, stored twice over so exp[log a + log b] needs no reduction.
    exp: Vec<u16>,
    // log[0] is unused.
    log: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.w, self.primitive_poly)
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::new(DEFAULT_BITS, DEFAULT_POLY).expect("default polynomial is primitive")
    }
}

impl Field {
    /// Builds GF(2^w) from `primitive_poly` (bit `i` = coefficient of x^i, bit
    /// `w` set).
    ///
    /// The tables are generated by repeated multiplication by `x`; if the
    /// cycle of `x` is shorter than `q - 1` the polynomial is rejected.
    pub fn new(w: u32, primitive_poly: u32) -> Result<Field> {
        if !(2..=16).contains(&w) {
            return Err(Error::FieldBits(w));
        }
        if primitive_poly >> w != 1 {
            return Err(Error::PolyDegree { poly: primitive_poly, w });
        }
        let q = 1usize << w;
        let order = q - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; q];
        let mut seen = vec![false; q];
        let mut x: u32 = 1;
        for i in 0..order {
            if x == 0 || seen[x as usize] {
                return Err(Error::NotPrimitive { poly: primitive_poly, cycle: i });
            }
            seen[x as usize] = true;
            exp[i] = x as u16;
            exp[i + order] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << w) != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { poly: primitive_poly, cycle: order });
        }
        Ok(Field { w, q, primitive_poly, exp, log })
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.w
    }

    /// Field size 2^w.
    #[inline]
    pub fn size(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q - 1
    }

    #[inline]
    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    #[inline]
    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    /// `alpha^i` for `0 <= i < q - 1`.
    #[inline]
    pub fn exp(&self, i: usize) -> FieldElement {
        FieldElement(self.exp[i % self.order()])
    }

    /// Discrete logarithm base alpha; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize] as usize)
        }
    }

    pub fn exp_table(&self) -> &[u16] {
        &self.exp[..self.order()]
    }

    pub fn log_table(&self) -> &[u16] {
        &self.log
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        (a.0 as usize) < self.q
    }

    pub fn element(&self, v: u32) -> Result<FieldElement> {
        if (v as usize) < self.q {
            Ok(FieldElement(v as u16))
        } else {
            Err(Error::SymbolRange { value: v, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[s])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(self.order() - l) % self.order()]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let order = self.order() as u64;
        FieldElement(self.exp[((l * (e % order)) % order) as usize])
    }

    /// `dst[i] += c * src[i]` for all `i`.
    #[inline]
    pub fn add_scaled(&self, dst: &mut [FieldElement], src: &[FieldElement], c: FieldElement) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        let lc = self.log[c.0 as usize] as usize;
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                d.0 ^= self.exp[lc + self.log[s.0 as usize] as usize];
            }
        }
    }

    /// `row[i] *= c` for all `i`.
    #[inline]
    pub fn scale(&self, row: &mut [FieldElement], c: FieldElement) {
        if c.is_zero() {
            row.fill(FieldElement::ZERO);
            return;
        }
        let lc = self.log[c.0 as usize] as usize;
        for x in row.iter_mut().filter(|x| !x.is_zero()) {
            x.0 = self.exp[lc + self.log[x.0 as usize] as usize];
        }
    }

    /// `sum_i a[i] * b[i]`.
    #[inline]
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| acc + self.mul(x, y))
    }

    /// Horner evaluation of `coeffs` (lowest degree first) at `x`.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| self.mul(acc, x) + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(v: u16) -> FieldElement {
        FieldElement(v)
    }

    // Carry-less multiply then reduce, independent of the tables.
    fn clmul_reduce(a: u32, b: u32, w: u32, poly: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..w {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for bit in (w..2 * w).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= poly << (bit - w);
            }
        }
        acc
    }

    #[test]
    fn gf8_tables() {
        let f = Field::new(3, 0xB).unwrap();
        assert_eq!(f.size(), 8);
        let expected: Vec<u16> = {
            // repeated multiply by x modulo x^3 + x + 1
            let mut v = vec![];
            let mut x = 1u32;
            for _ in 0..7 {
                v.push(x as u16);
                x = clmul_reduce(x, 2, 3, 0xB);
            }
            v
        };
        assert_eq!(expected, vec![1, 2, 4, 3, 6, 7, 5]);
        assert_eq!(f.exp_table(), &expected[..]);
    }

    #[test]
    fn gf256_cycle_length() {
        let f = Field::new(8, 0x11D).unwrap();
        assert_eq!(f.size(), 256);
        let mut seen = std::collections::HashSet::new();
        for &e in f.exp_table() {
            assert!(seen.insert(e));
        }
        assert_eq!(seen.len(), 255);
    }

    #[test]
    fn rejects_non_primitive() {
        // x^3 + x^2 + x + 1 = (x + 1)^3
        assert!(matches!(Field::new(3, 0xF), Err(Error::NotPrimitive { cycle: 4, .. })));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(matches!(Field::new(4, 0x1F), Err(Error::NotPrimitive { .. })));
        // x^3 + x^2, divisible by x
        assert!(Field::new(3, 0xC).is_err());
        assert!(matches!(Field::new(1, 0x3), Err(Error::FieldBits(1))));
        assert!(matches!(Field::new(17, 0x2000B), Err(Error::FieldBits(17))));
        assert!(matches!(Field::new(8, 0x1D), Err(Error::PolyDegree { .. })));
    }

    #[test]
    fn known_primitive_polys_build() {
        for (w, p) in [(2, 0x7), (4, 0x13), (5, 0x25), (6, 0x43), (7, 0x89), (10, 0x409), (12, 0x1053), (16, 0x1100B)] {
            let f = Field::new(w, p).unwrap();
            assert_eq!(f.exp_table().len(), (1 << w) - 1);
        }
    }

    #[test]
    fn small_examples() {
        let f = Field::new(3, 0xB).unwrap();
        assert_eq!(f.mul(fe(2), fe(2)), fe(4));
        assert_eq!(f.mul(fe(7), fe(5)), fe(6));
        assert_eq!(f.mul(fe(7), fe(4)), fe(1));
        assert_eq!(f.inv(fe(7)).unwrap(), fe(4));
        assert_eq!(f.inv(fe(1)).unwrap(), fe(1));
        assert!(matches!(f.inv(fe(0)), Err(Error::DivisionByZero)));
        assert_eq!(f.pow(fe(2), 3), fe(3));
        assert_eq!(f.pow(fe(0), 0), fe(1));
        assert_eq!(f.pow(fe(0), 5), fe(0));
        for a in 1..8 {
            assert_eq!(f.pow(fe(a), 7), fe(1));
        }
        let g = Field::default();
        assert_eq!(fe(0x53) + fe(0xCA), fe(0x99));
        assert_eq!(g.add(fe(0), fe(0x42)), fe(0x42));
        assert_eq!(fe(0x42) + fe(0x42), fe(0));
    }

    #[test]
    fn mul_matches_clmul_exhaustive_small_fields() {
        for (w, p) in [(2u32, 0x7u32), (3, 0xB), (4, 0x13), (5, 0x25), (6, 0x43), (7, 0x89), (8, 0x11D)] {
            let f = Field::new(w, p).unwrap();
            let q = 1u32 << w;
            for a in 0..q {
                for b in 0..q {
                    let got = f.mul(fe(a as u16), fe(b as u16)).0 as u32;
                    assert_eq!(got, clmul_reduce(a, b, w, p), "w={w} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn mul_matches_clmul_random_large_fields() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (w, p) in [(10u32, 0x409u32), (12, 0x1053), (16, 0x1100B)] {
            let f = Field::new(w, p).unwrap();
            let q = 1u32 << w;
            let pairs = if w == 16 { 1_000_000 } else { 200_000 };
            for _ in 0..pairs {
                let a = rng.random_range(0..q);
                let b = rng.random_range(0..q);
                assert_eq!(f.mul(fe(a as u16), fe(b as u16)).0 as u32, clmul_reduce(a, b, w, p));
            }
        }
    }

    #[test]
    fn exp_log_round_trip() {
        for (w, p) in [(3u32, 0xBu32), (8, 0x11D), (16, 0x1100B)] {
            let f = Field::new(w, p).unwrap();
            for i in 0..f.order() {
                assert_eq!(f.log(f.exp(i)), Some(i));
            }
            assert_eq!(f.log(FieldElement::ZERO), None);
        }
    }

    fn gf256() -> &'static Field {
        use std::sync::OnceLock;
        static F: OnceLock<Field> = OnceLock::new();
        F.get_or_init(Field::default)
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u16..256, b in 0u16..256, c in 0u16..256) {
            let f = gf256();
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
            prop_assert_eq!(a + a, FieldElement::ZERO);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                prop_assert_eq!(f.pow(a, 255), FieldElement::ONE);
            }
        }

        #[test]
        fn pow_is_repeated_mul(a in 0u16..256, e in 0u64..600) {
            let f = gf256();
            let mut acc = FieldElement::ONE;
            for _ in 0..e {
                acc = f.mul(acc, fe(a));
            }
            prop_assert_eq!(f.pow(fe(a), e), acc);
        }
    }
}
