//! The two symbol algebras the code constructions live over.
//!
//! * **Field**: `GF(2^b)` for `4 <= b <= 16`, as binary polynomials reduced
//!   modulo an irreducible `f(x)` of degree `b`.
//! * **Ring**: `GF(2)[x] / (M_p(x))` with `M_p(x) = 1 + x + ... + x^(p-1)`
//!   for a prime `p`. Reduction uses the cyclic identity `x^p = 1` followed
//!   by one conditional XOR of the `M_p` pattern, so encoding and decoding
//!   stay XOR-only.
//!
//! Symbols are immutable bit-vector values; every operation is a pure
//! function, so values can be shared freely across threads.

use crate::bits::{self, SymBits, WideBits, SYM_LIMBS, WIDE_LIMBS};
use thiserror::Error;

/// Default field moduli, indexed by bit width.
/// `x^4+x+1`, `x^8+x^4+x^3+x^2+1`, `x^12+x^6+x^4+x+1`, `x^16+x^12+x^3+x+1`.
const DEFAULT_MODULI: &[(u32, u32)] = &[(4, 0x13), (8, 0x11D), (12, 0x1053), (16, 0x1100B)];

pub const MIN_FIELD_BITS: u32 = 4;
pub const MAX_FIELD_BITS: u32 = 16;
pub const MIN_RING_PRIME: u32 = 3;
pub const MAX_RING_PRIME: u32 = 257;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("field width {0} outside supported range {MIN_FIELD_BITS}..={MAX_FIELD_BITS}")]
    WidthOutOfRange(u32),
    #[error("modulus {modulus:#x} must have degree exactly {expected}")]
    ModulusDegree { modulus: u32, expected: u32 },
    #[error("modulus {0:#x} is reducible")]
    ModulusReducible(u32),
    #[error("no built-in modulus for width {0}; supply one explicitly")]
    NoDefaultModulus(u32),
    #[error("ring prime {0} outside supported range {MIN_RING_PRIME}..={MAX_RING_PRIME}")]
    PrimeOutOfRange(u32),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("symbol encoding has bits set at or beyond width {width}")]
    ExcessBits { width: u32 },
    #[error("symbol encoding needs {expected} bytes, got {got}")]
    ByteLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Field,
    Ring,
}

/// A validated symbol algebra. Cheap to copy; carried by every [`Symbol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Algebra {
    kind: AlgebraKind,
    /// Symbol bit length: `b` for a field, `p - 1` for a ring.
    width: u32,
    /// Field: bit pattern of `f(x)` including the degree-`b` term. Ring: 0.
    modulus: u32,
    /// Ring: the prime `p`. Field: 0.
    prime: u32,
    /// Multiplicative order of `alpha = x`.
    order: u32,
}

/// An exponent of `alpha`, kept reduced modulo the generator order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(u32);

impl Exponent {
    pub fn value(self) -> u32 {
        self.0
    }
}

/// One array entry: a binary polynomial, canonical in its algebra
/// (degree < b for fields, degree <= p-2 for rings).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol {
    alg: Algebra,
    limbs: SymBits,
}

impl Algebra {
    /// `GF(2^b)` with an explicit modulus. The modulus must be an
    /// irreducible polynomial of degree exactly `b`; irreducibility is
    /// checked by trial division over all polynomials of degree <= b/2.
    pub fn field(b: u32, modulus: u32) -> Result<Self, AlgebraError> {
        if !(MIN_FIELD_BITS..=MAX_FIELD_BITS).contains(&b) {
            return Err(AlgebraError::WidthOutOfRange(b));
        }
        let deg = 31 - modulus.leading_zeros();
        if modulus == 0 || deg != b {
            return Err(AlgebraError::ModulusDegree {
                modulus,
                expected: b,
            });
        }
        if !is_irreducible_u64(modulus as u64) {
            return Err(AlgebraError::ModulusReducible(modulus));
        }
        let mut alg = Algebra {
            kind: AlgebraKind::Field,
            width: b,
            modulus,
            prime: 0,
            order: 0,
        };
        alg.order = alg.compute_order();
        Ok(alg)
    }

    /// `GF(2^b)` with the conventional modulus for `b in {4, 8, 12, 16}`.
    pub fn field_default(b: u32) -> Result<Self, AlgebraError> {
        let (_, modulus) = DEFAULT_MODULI
            .iter()
            .find(|(w, _)| *w == b)
            .ok_or(AlgebraError::NoDefaultModulus(b))?;
        Self::field(b, *modulus)
    }

    /// The ring of binary polynomials modulo `M_p(x) = 1 + x + ... + x^(p-1)`.
    pub fn ring(p: u32) -> Result<Self, AlgebraError> {
        if !(MIN_RING_PRIME..=MAX_RING_PRIME).contains(&p) {
            return Err(AlgebraError::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Algebra {
            kind: AlgebraKind::Ring,
            width: p - 1,
            modulus: 0,
            prime: p,
            // x^p = 1 and no smaller power reaches 1, so the order is p.
            order: p,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// Multiplicative order of `alpha`: the least `0 < k` with `alpha^k = 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Symbol bit length: `b` for fields, `p - 1` for rings.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Serialized symbol size in bytes.
    pub fn symbol_byte_len(&self) -> usize {
        (self.width as usize).div_ceil(8)
    }

    pub fn field_modulus(&self) -> Option<u32> {
        match self.kind {
            AlgebraKind::Field => Some(self.modulus),
            AlgebraKind::Ring => None,
        }
    }

    pub fn ring_prime(&self) -> Option<u32> {
        match self.kind {
            AlgebraKind::Ring => Some(self.prime),
            AlgebraKind::Field => None,
        }
    }

    pub fn zero(&self) -> Symbol {
        Symbol {
            alg: *self,
            limbs: [0; SYM_LIMBS],
        }
    }

    pub fn one(&self) -> Symbol {
        let mut limbs = [0; SYM_LIMBS];
        limbs[0] = 1;
        Symbol { alg: *self, limbs }
    }

    /// The generator `alpha`, i.e. the class of `x`.
    pub fn alpha(&self) -> Symbol {
        let mut limbs = [0; SYM_LIMBS];
        limbs[0] = 2;
        Symbol { alg: *self, limbs }
    }

    /// Reduce an arbitrary (possibly negative) integer exponent modulo the
    /// generator order.
    pub fn exponent(&self, raw: i64) -> Exponent {
        let order = self.order as i64;
        Exponent(raw.rem_euclid(order) as u32)
    }

    /// `alpha^k` by square-and-multiply.
    pub fn alpha_pow(&self, k: Exponent) -> Symbol {
        let mut acc = self.one();
        let mut base = self.alpha();
        let mut e = k.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Convenience wrapper reducing the raw exponent first.
    pub fn alpha_pow_i(&self, raw: i64) -> Symbol {
        self.alpha_pow(self.exponent(raw))
    }

    /// A symbol from the low bits of `v` (bit `k` = coefficient of `x^k`).
    pub fn symbol(&self, v: u64) -> Result<Symbol, AlgebraError> {
        if self.width < 64 && v >> self.width != 0 {
            return Err(AlgebraError::ExcessBits { width: self.width });
        }
        let mut limbs = [0; SYM_LIMBS];
        limbs[0] = v;
        Ok(Symbol { alg: *self, limbs })
    }

    /// Deserialize a symbol: little-endian bytes, bit `k` of the stream is
    /// the coefficient of `x^k`. Trailing pad bits must be zero.
    pub fn symbol_from_bytes(&self, bytes: &[u8]) -> Result<Symbol, AlgebraError> {
        let expected = self.symbol_byte_len();
        if bytes.len() != expected {
            return Err(AlgebraError::ByteLength {
                expected,
                got: bytes.len(),
            });
        }
        let mut limbs = [0u64; SYM_LIMBS];
        for (i, &b) in bytes.iter().enumerate() {
            limbs[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        if let Some(d) = bits::degree(&limbs) {
            if d >= self.width as usize {
                return Err(AlgebraError::ExcessBits { width: self.width });
            }
        }
        Ok(Symbol { alg: *self, limbs })
    }

    /// A uniformly random symbol.
    pub fn random_symbol<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Symbol {
        let mut limbs = [0u64; SYM_LIMBS];
        for limb in &mut limbs {
            *limb = rng.random();
        }
        bits::mask_low(&mut limbs, self.width as usize);
        Symbol { alg: *self, limbs }
    }

    /// Self-test of the classical equivalence: `M_p(x)` is irreducible
    /// exactly when 2 is a primitive root modulo `p`. Both sides are
    /// computed independently (trial division vs. the order of 2 mod p).
    pub fn mp_irreducibility_matches_primitivity(p: u32) -> Result<bool, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        let mp = mp_wide(p);
        let irreducible = mp_is_irreducible(&mp, p - 1);
        let two_primitive = order_mod(2, p) == p - 1;
        Ok(irreducible == two_primitive)
    }

    fn compute_order(&self) -> u32 {
        let alpha = self.alpha();
        let one = self.one();
        let mut t = alpha;
        let mut k = 1u32;
        while t != one {
            t = t.mul(&alpha);
            k += 1;
        }
        k
    }

    fn modulus_wide(&self) -> WideBits {
        match self.kind {
            AlgebraKind::Field => {
                let mut m = [0u64; WIDE_LIMBS];
                m[0] = self.modulus as u64;
                m
            }
            AlgebraKind::Ring => mp_wide(self.prime),
        }
    }
}

impl Symbol {
    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        bits::is_zero(&self.limbs)
    }

    /// Characteristic-2 addition: XOR of coefficient vectors.
    ///
    /// Panics when the operands come from different algebras.
    pub fn add(&self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.alg, rhs.alg, "algebra mismatch in add");
        let mut limbs = self.limbs;
        for i in 0..SYM_LIMBS {
            limbs[i] ^= rhs.limbs[i];
        }
        Symbol {
            alg: self.alg,
            limbs,
        }
    }

    /// Carryless product reduced in the algebra.
    ///
    /// Field: long division by `f(x)`. Ring: fold through `x^p = 1`, then
    /// XOR the `M_p` pattern if the `x^(p-1)` coefficient is set.
    ///
    /// Panics when the operands come from different algebras.
    pub fn mul(&self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.alg, rhs.alg, "algebra mismatch in mul");
        let mut prod = bits::clmul(&self.limbs, &rhs.limbs);
        match self.alg.kind {
            AlgebraKind::Field => {
                let m = self.alg.modulus_wide();
                bits::rem_inplace(&mut prod, &m);
            }
            AlgebraKind::Ring => {
                let p = self.alg.prime as usize;
                // Canonical inputs have degree <= p-2, so one fold suffices.
                let high = bits::shr(&prod, p);
                bits::mask_low(&mut prod, p);
                for i in 0..WIDE_LIMBS {
                    prod[i] ^= high[i];
                }
                if bits::bit(&prod, p - 1) {
                    let mp = mp_wide(self.alg.prime);
                    for i in 0..WIDE_LIMBS {
                        prod[i] ^= mp[i];
                    }
                }
            }
        }
        Symbol {
            alg: self.alg,
            limbs: bits::narrow(&prod),
        }
    }

    /// Whether the symbol has a multiplicative inverse. In a field that is
    /// every nonzero symbol; in the ring exactly those coprime to `M_p(x)`.
    pub fn is_unit(&self) -> bool {
        match self.alg.kind {
            AlgebraKind::Field => !self.is_zero(),
            AlgebraKind::Ring => {
                let g = bits::gcd(bits::widen(&self.limbs), self.alg.modulus_wide());
                bits::degree(&g) == Some(0)
            }
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    /// `NotAUnit` signals an uncorrectable pattern when raised during
    /// decoding.
    pub fn inv(&self) -> Result<Symbol, AlgebraError> {
        let m = self.alg.modulus_wide();
        let inv = bits::inv_mod(&bits::widen(&self.limbs), &m).ok_or(AlgebraError::NotAUnit)?;
        Ok(Symbol {
            alg: self.alg,
            limbs: bits::narrow(&inv),
        })
    }

    /// Serialize: little-endian bytes, bit `k` of the stream = coefficient
    /// of `x^k`; trailing pad bits are zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.alg.symbol_byte_len();
        (0..n)
            .map(|i| (self.limbs[i / 8] >> (8 * (i % 8))) as u8)
            .collect()
    }
}

impl std::ops::Add for Symbol {
    type Output = Symbol;
    fn add(self, rhs: Symbol) -> Symbol {
        Symbol::add(&self, &rhs)
    }
}

impl std::ops::AddAssign for Symbol {
    fn add_assign(&mut self, rhs: Symbol) {
        *self = Symbol::add(self, &rhs);
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;
    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::mul(&self, &rhs)
    }
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Symbol({})", self)
    }
}

impl std::fmt::Display for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0x")?;
        let bytes = self.to_bytes();
        for b in bytes.iter().rev() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// `M_p(x) = 1 + x + ... + x^(p-1)` as a wide bit pattern.
fn mp_wide(p: u32) -> WideBits {
    let mut m = [0u64; WIDE_LIMBS];
    for k in 0..p as usize {
        bits::set_bit(&mut m, k);
    }
    m
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative order of `a` modulo the prime `p`.
fn order_mod(a: u32, p: u32) -> u32 {
    let a = a % p;
    let mut t = a;
    let mut k = 1;
    while t != 1 {
        t = t * a % p;
        k += 1;
    }
    k
}

/// Trial division over every polynomial of degree 1..=deg/2.
fn is_irreducible_u64(f: u64) -> bool {
    let deg = 63 - f.leading_zeros();
    for d in 1..=deg / 2 {
        for low in 0..(1u64 << d) {
            let cand = (1u64 << d) | low;
            if poly_rem_u64(f, cand) == 0 {
                return false;
            }
        }
    }
    true
}

fn poly_rem_u64(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Trial division of a wide polynomial of degree `deg` over all candidate
/// divisors of degree 1..=deg/2. Practical for degrees up to ~30.
fn mp_is_irreducible(mp: &WideBits, deg: u32) -> bool {
    for d in 1..=deg / 2 {
        for low in 0..(1u64 << d) {
            let mut cand = [0u64; WIDE_LIMBS];
            cand[0] = (1u64 << d) | low;
            let mut r = *mp;
            bits::rem_inplace(&mut r, &cand);
            if bits::is_zero(&r) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> Algebra {
        Algebra::field_default(4).unwrap()
    }

    fn ring(p: u32) -> Algebra {
        Algebra::ring(p).unwrap()
    }

    #[test]
    fn field_construction_validates_modulus() {
        assert!(Algebra::field(4, 0x13).is_ok());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive
        assert!(Algebra::field(4, 0x1F).is_ok());
        // x^4 + 1 = (x+1)^4 is reducible
        assert_eq!(
            Algebra::field(4, 0x11),
            Err(AlgebraError::ModulusReducible(0x11))
        );
        // degree mismatch
        assert_eq!(
            Algebra::field(4, 0x3),
            Err(AlgebraError::ModulusDegree {
                modulus: 0x3,
                expected: 4
            })
        );
        assert_eq!(
            Algebra::field(3, 0xB),
            Err(AlgebraError::WidthOutOfRange(3))
        );
        assert_eq!(
            Algebra::field_default(7),
            Err(AlgebraError::NoDefaultModulus(7))
        );
    }

    #[test]
    fn ring_construction_validates_prime() {
        assert!(Algebra::ring(17).is_ok());
        assert_eq!(Algebra::ring(15), Err(AlgebraError::NotPrime(15)));
        assert_eq!(Algebra::ring(2), Err(AlgebraError::PrimeOutOfRange(2)));
        assert_eq!(Algebra::ring(263), Err(AlgebraError::PrimeOutOfRange(263)));
    }

    #[test]
    fn add_examples() {
        let f = gf16();
        let a = f.symbol(0x3).unwrap();
        assert_eq!(a.add(&a), f.zero());

        let x = f.alpha();
        let one = f.one();
        assert_eq!(x.add(&one), f.symbol(0b11).unwrap());

        // alpha^4 = alpha + 1 is forced by reduction modulo x^4 + x + 1,
        // so alpha^4 + alpha = 1.
        let a4 = f.alpha_pow_i(4);
        assert_eq!(a4, f.symbol(0b11).unwrap());
        assert_eq!(a4.add(&x), one);
    }

    #[test]
    fn mul_examples() {
        let f = gf16();
        let x = f.alpha();
        let x3 = f.alpha_pow_i(3);
        assert_eq!(x.mul(&x3), f.symbol(0b11).unwrap()); // x^4 mod f = x + 1

        let r5 = ring(5);
        for s in [r5.zero(), r5.one(), r5.alpha(), r5.symbol(0b1010).unwrap()] {
            assert_eq!(r5.one().mul(&s), s);
        }
        // x^5 = 1 in the ring mod M_5
        let x4 = r5.alpha_pow_i(4);
        assert_eq!(r5.alpha().mul(&x4), r5.one());
    }

    #[test]
    fn alpha_pow_and_order() {
        let f = gf16();
        assert_eq!(f.alpha_pow_i(0), f.one());
        assert_eq!(f.order(), 15);
        assert_eq!(f.alpha_pow_i(15), f.one());

        let r17 = ring(17);
        assert_eq!(r17.order(), 17);
        assert_eq!(r17.alpha_pow_i(17), r17.one());
        // x^16 is the all-ones polynomial 1 + x + ... + x^15
        assert_eq!(r17.alpha_pow_i(16), r17.symbol(0xFFFF).unwrap());

        // x has order 5 modulo x^4 + x^3 + x^2 + x + 1
        let f5 = Algebra::field(4, 0x1F).unwrap();
        assert_eq!(f5.order(), 5);
        assert_eq!(f5.alpha_pow_i(5), f5.one());
    }

    #[test]
    fn alpha_pow_below_order_is_not_one() {
        for alg in [gf16(), ring(17), Algebra::field(4, 0x1F).unwrap()] {
            for k in 1..alg.order() {
                assert_ne!(alg.alpha_pow_i(k as i64), alg.one(), "k = {k}");
            }
        }
    }

    #[test]
    fn field_units_and_inverses() {
        let f = gf16();
        assert!(!f.zero().is_unit());
        assert_eq!(f.zero().inv(), Err(AlgebraError::NotAUnit));
        assert_eq!(f.one().inv().unwrap(), f.one());
        assert_eq!(f.alpha().inv().unwrap(), f.alpha_pow_i(14));
        for v in 1..16u64 {
            let s = f.symbol(v).unwrap();
            assert!(s.is_unit());
            assert_eq!(s.mul(&s.inv().unwrap()), f.one());
        }
    }

    #[test]
    fn ring_units_one_plus_alpha_pow() {
        for p in [5u32, 7, 11, 13, 17] {
            let r = ring(p);
            for k in 1..p {
                let s = r.one().add(&r.alpha_pow_i(k as i64));
                assert!(s.is_unit(), "1 + alpha^{k} must be a unit mod M_{p}");
                assert_eq!(s.mul(&s.inv().unwrap()), r.one());
            }
        }
    }

    #[test]
    fn ring_17_has_zero_divisors() {
        // M_17 is reducible; find a factor by brute-force trial division
        // and check that it is not a unit.
        let m17: u64 = (1 << 17) - 1; // bits 0..=16
        let mut factor = None;
        'outer: for d in 1..=8u32 {
            for low in 0..(1u64 << d) {
                let cand = (1u64 << d) | low;
                if poly_rem_u64(m17, cand) == 0 {
                    factor = Some(cand);
                    break 'outer;
                }
            }
        }
        let factor = factor.expect("M_17 is reducible");
        let r17 = ring(17);
        let s = r17.symbol(factor).unwrap();
        assert!(!s.is_unit());
        assert_eq!(s.inv(), Err(AlgebraError::NotAUnit));
    }

    #[test]
    fn ring_inverse_of_one_plus_alpha() {
        let r5 = ring(5);
        let s = r5.one().add(&r5.alpha());
        let v = s.inv().unwrap();
        assert_eq!(s.mul(&v), r5.one());
    }

    #[test]
    fn mp_irreducibility_equivalence() {
        // ord_5(2) = 4 and M_5 is irreducible; ord_7(2) = 3 and M_7 factors;
        // M_17 is reducible since ord_17(2) = 8.
        assert_eq!(order_mod(2, 5), 4);
        assert_eq!(order_mod(2, 7), 3);
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(
                Algebra::mp_irreducibility_matches_primitivity(p),
                Ok(true),
                "p = {p}"
            );
        }
        assert_eq!(
            Algebra::mp_irreducibility_matches_primitivity(9),
            Err(AlgebraError::NotPrime(9))
        );
    }

    #[test]
    fn characteristic_two() {
        let mut rng = seeded_rng();
        for alg in [gf16(), ring(17), ring(257)] {
            for _ in 0..100 {
                let s = alg.random_symbol(&mut rng);
                assert_eq!(s.add(&s), alg.zero());
            }
        }
    }

    #[test]
    fn serialization_roundtrip_and_pad_validation() {
        let mut rng = seeded_rng();
        for alg in [
            gf16(),
            Algebra::field_default(16).unwrap(),
            ring(5),
            ring(17),
            ring(257),
        ] {
            for _ in 0..200 {
                let s = alg.random_symbol(&mut rng);
                let bytes = s.to_bytes();
                assert_eq!(bytes.len(), alg.symbol_byte_len());
                assert_eq!(alg.symbol_from_bytes(&bytes).unwrap(), s);
            }
        }
        // pad bits beyond the width must be rejected
        let r5 = ring(5); // width 4, one byte
        assert_eq!(
            r5.symbol_from_bytes(&[0x10]),
            Err(AlgebraError::ExcessBits { width: 4 })
        );
        assert_eq!(
            r5.symbol_from_bytes(&[0, 0]),
            Err(AlgebraError::ByteLength {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    #[should_panic(expected = "algebra mismatch")]
    fn mixing_algebras_is_rejected() {
        let a = gf16().one();
        let b = ring(17).one();
        let _ = a.add(&b);
    }

    fn seeded_rng() -> impl rand::Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha12Rng::seed_from_u64(0x5EED)
    }
}
