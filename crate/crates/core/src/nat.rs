//! Natural numbers and the fixed primitive-recursive coding of finite sequences.
//!
//! Every number in the semantic layer is an arbitrary-precision [`Nat`], since
//! codes of prefixes grow with the prefix length and nested applications feed
//! codes back in as sequence entries.
//!
//! Finite sequences are coded by concatenating the Elias-gamma codes of
//! `x_i + 1` behind a leading `1` bit and subtracting one. The empty sequence
//! has code `0`, appending is a shift-and-or, and the code size is additive in
//! the bit lengths of the entries.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub type Nat = BigUint;

/// Hard cap on the bit length of any intermediate number.
pub const MAX_BITS: u64 = 1 << 24;

pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

pub fn to_u64(n: &Nat) -> Option<u64> {
    n.to_u64()
}

/// `2^m (2n + 1) - 1`: the bijective pairing used for sequences of functions.
pub fn pair(m: u64, n: &Nat) -> Nat {
    (((n << 1u32) + 1u32) << m) - 1u32
}

/// Inverse of [`pair`].
pub fn unpair(p: &Nat) -> (u64, Nat) {
    let q: Nat = p + 1u32;
    let m = q.trailing_zeros().unwrap_or(0);
    let odd = q >> m;
    (m, (odd - 1u32) >> 1u32)
}

/// Serializes as a JSON number when it fits in `u64`, as a decimal string otherwise.
pub fn serialize_nat<S: serde::Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_str_radix(10)),
    }
}

/// Code of the empty sequence.
pub fn empty_code() -> Nat {
    Nat::zero()
}

/// Code of `s ⌢ ⟨x⟩` given the code of `s`.
pub fn snoc(code: &Nat, x: &Nat) -> Nat {
    let y: Nat = x + 1u32;
    let bits = y.bits();
    let width = 2 * bits - 1;
    let v: Nat = code + 1u32;
    ((v << width) | y) - 1u32
}

pub fn encode(seq: &[Nat]) -> Nat {
    seq.iter().fold(empty_code(), |c, x| snoc(&c, x))
}

pub fn encode_u64(seq: &[u64]) -> Nat {
    seq.iter().fold(empty_code(), |c, &x| snoc(&c, &nat(x)))
}

/// Decodes a sequence code; `None` for numbers that are not codes.
pub fn decode(code: &Nat) -> Option<Vec<Nat>> {
    let v: Nat = code + 1u32;
    let total = v.bits();
    // Bits after the leading marker, most significant first.
    let mut pos = total - 1;
    let bit = |i: u64| v.bit(i);
    let mut out = Vec::new();
    while pos > 0 {
        let mut zeros = 0u64;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if bit(pos) {
                break;
            }
            zeros += 1;
        }
        if zeros > pos {
            return None;
        }
        let mut y = Nat::one();
        for _ in 0..zeros {
            pos -= 1;
            y <<= 1u32;
            if bit(pos) {
                y |= Nat::one();
            }
        }
        out.push(y - 1u32);
    }
    Some(out)
}

pub fn seq_len(code: &Nat) -> Option<usize> {
    decode(code).map(|s| s.len())
}

/// Cantor pairing, used only for the coding of rationals.
pub fn cantor_pair(a: &Nat, b: &Nat) -> Nat {
    let s: Nat = a + b;
    ((&s * (&s + 1u32)) >> 1u32) + b
}

pub fn cantor_unpair(z: &Nat) -> (Nat, Nat) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let w: Nat = (((z << 3u32) + 1u32).sqrt() - 1u32) >> 1u32;
    let t: Nat = (&w * (&w + 1u32)) >> 1u32;
    let b: Nat = z - &t;
    let a: Nat = &w - &b;
    (a, b)
}
