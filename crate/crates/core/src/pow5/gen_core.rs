// Single source of truth for table entry values. This file is compiled twice:
// once by build.rs (to embed the table as static data) and once as a child
// module of `pow5` (so `generate_entry` provably regenerates the same bytes).

use num_bigint::BigUint;
use num_traits::One;

/// Number of bits kept per entry. Every entry is normalized into
/// `[2^127, 2^128)` so the conversion path never has to renormalize.
pub(crate) const ENTRY_BITS: u64 = 128;

/// The 128 most significant bits of `5^q`, as a big integer.
///
/// * `q >= 0`: `floor(5^q * 2^(128 - B))` where `B` is the bit length of
///   `5^q`. For `B <= 128` (that is, `q <= 55`) this is `5^q` shifted left,
///   with no bits discarded.
/// * `q < 0`: `ceil(2^(127 + B') / 5^(-q))` where `B'` is the bit length of
///   `5^(-q)`. Rounding the reciprocal *up* keeps the table error one-sided,
///   which the conversion's rounding step relies on.
pub(crate) fn entry_biguint(q: i32) -> BigUint {
    let value = if q >= 0 {
        let p = BigUint::from(5u8).pow(q as u32);
        let b = p.bits();
        if b <= ENTRY_BITS {
            p << (ENTRY_BITS - b)
        } else {
            p >> (b - ENTRY_BITS)
        }
    } else {
        let p = BigUint::from(5u8).pow((-q) as u32);
        let b = p.bits();
        let numerator = BigUint::one() << (127 + b);
        // ceil(n / p) = (n + p - 1) / p; exact division can't happen (5 ∤ 2^s)
        (numerator + &p - 1u8) / p
    };
    assert!(
        value.bits() == ENTRY_BITS,
        "entry for q={q} not normalized into [2^127, 2^128)"
    );
    value
}

pub(crate) fn entry_u128(q: i32) -> u128 {
    u128::try_from(&entry_biguint(q)).expect("entry fits 128 bits")
}
