//! Binary polynomials as little-endian `u64` limb arrays.
//!
//! Bit `k` (limb `k / 64`, bit `k % 64`) is the coefficient of `x^k`.
//! Symbols fit in [`SYM_LIMBS`] limbs (256 bits, enough for the largest
//! supported ring, p = 257); products and moduli use [`WIDE_LIMBS`].

pub(crate) const SYM_LIMBS: usize = 4;
pub(crate) const WIDE_LIMBS: usize = 8;

pub(crate) type SymBits = [u64; SYM_LIMBS];
pub(crate) type WideBits = [u64; WIDE_LIMBS];

pub(crate) fn degree(bits: &[u64]) -> Option<usize> {
    for (i, &w) in bits.iter().enumerate().rev() {
        if w != 0 {
            return Some(i * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}

pub(crate) fn bit(bits: &[u64], k: usize) -> bool {
    bits[k / 64] >> (k % 64) & 1 == 1
}

pub(crate) fn set_bit(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

pub(crate) fn is_zero(bits: &[u64]) -> bool {
    bits.iter().all(|&w| w == 0)
}

/// `dst ^= src << shift`. The shifted value must fit in `dst`.
pub(crate) fn xor_shl(dst: &mut [u64], src: &[u64], shift: usize) {
    let limb_off = shift / 64;
    let bit_off = shift % 64;
    for (i, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        dst[i + limb_off] ^= s << bit_off;
        if bit_off != 0 {
            let hi = s >> (64 - bit_off);
            if hi != 0 {
                dst[i + limb_off + 1] ^= hi;
            }
        }
    }
}

pub(crate) fn widen(s: &SymBits) -> WideBits {
    let mut w = [0u64; WIDE_LIMBS];
    w[..SYM_LIMBS].copy_from_slice(s);
    w
}

/// Truncate to symbol width; the upper limbs must already be zero.
pub(crate) fn narrow(w: &WideBits) -> SymBits {
    debug_assert!(is_zero(&w[SYM_LIMBS..]), "narrowing loses set bits");
    let mut s = [0u64; SYM_LIMBS];
    s.copy_from_slice(&w[..SYM_LIMBS]);
    s
}

/// Carryless (GF(2)) product of two symbol-sized polynomials.
pub(crate) fn clmul(a: &SymBits, b: &SymBits) -> WideBits {
    let mut out = [0u64; WIDE_LIMBS];
    for (i, &w) in b.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let k = w.trailing_zeros() as usize;
            xor_shl(&mut out, a, i * 64 + k);
            w &= w - 1;
        }
    }
    out
}

pub(crate) fn shr(w: &WideBits, shift: usize) -> WideBits {
    let mut out = [0u64; WIDE_LIMBS];
    let limb_off = shift / 64;
    let bit_off = shift % 64;
    for i in limb_off..WIDE_LIMBS {
        let mut v = w[i] >> bit_off;
        if bit_off != 0 && i + 1 < WIDE_LIMBS {
            v |= w[i + 1] << (64 - bit_off);
        }
        out[i - limb_off] = v;
    }
    out
}

/// Clear every bit at position `nbits` and above.
pub(crate) fn mask_low(w: &mut [u64], nbits: usize) {
    let limb = nbits / 64;
    let bit = nbits % 64;
    for (i, v) in w.iter_mut().enumerate() {
        if i > limb || (i == limb && bit == 0) {
            *v = 0;
        } else if i == limb {
            *v &= (1u64 << bit) - 1;
        }
    }
}

/// `r mod m` by long division. `m` must be nonzero.
pub(crate) fn rem_inplace(r: &mut WideBits, m: &WideBits) {
    let dm = degree(m).expect("zero modulus");
    while let Some(dr) = degree(r) {
        if dr < dm {
            break;
        }
        let m = *m;
        xor_shl(r, &m, dr - dm);
    }
}

pub(crate) fn gcd(mut a: WideBits, mut b: WideBits) -> WideBits {
    while !is_zero(&b) {
        rem_inplace(&mut a, &b);
        core::mem::swap(&mut a, &mut b);
    }
    a
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
/// Returns `None` when `gcd(a, m) != 1`.
pub(crate) fn inv_mod(a: &WideBits, m: &WideBits) -> Option<WideBits> {
    if is_zero(a) {
        return None;
    }
    let mut r0 = *m;
    let mut r1 = *a;
    let mut s0 = [0u64; WIDE_LIMBS];
    let mut s1 = [0u64; WIDE_LIMBS];
    s1[0] = 1;
    loop {
        // Reduce r0 by r1, applying the same combination to the Bezout column
        // so that s_i * a == r_i (mod m) stays true.
        loop {
            let d0 = match degree(&r0) {
                Some(d) => d,
                None => break,
            };
            let d1 = degree(&r1).expect("r1 nonzero inside loop");
            if d0 < d1 {
                break;
            }
            let shift = d0 - d1;
            let (q, b) = (r1, s1);
            xor_shl(&mut r0, &q, shift);
            xor_shl(&mut s0, &b, shift);
        }
        if is_zero(&r0) {
            return if degree(&r1) == Some(0) {
                let mut inv = s1;
                rem_inplace(&mut inv, m);
                Some(inv)
            } else {
                None
            };
        }
        core::mem::swap(&mut r0, &mut r1);
        core::mem::swap(&mut s0, &mut s1);
    }
}
