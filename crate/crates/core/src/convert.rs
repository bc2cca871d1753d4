//! Correctly rounded binary conversion of `±w * 10^q`.
//!
//! The conversion multiplies the 64-bit decimal significand against a
//! 128-bit truncated power of five and reads the rounded binary significand
//! straight out of the product's top bits:
//!
//! 1. Normalize: shift `w` so its top bit is set, `w~ = w << lz`.
//! 2. Multiply: `z = floor(T(q) * w~ / 2^64)`, the top 128 bits of the
//!    192-bit product, computed exactly with two 64x64 widening multiplies.
//! 3. Extract: `z` lies in `[2^126, 2^128)`; with `u` its top bit, the slice
//!    `m = z >> (margin_bits + u)` holds the binary significand plus one
//!    round bit.
//! 4. Round: half-up on the round bit, corrected to half-even on the
//!    finitely many exponents where an exact tie is expressible, then place
//!    the exponent (subnormals lose `1 - e` leading bits first).
//!
//! Step 3 silently assumes the multiply's truncation error — up to 2 units
//! of `2^64` worth of low bits — never changes the extracted slice or the
//! round decision. That holds unless the discarded `margin_bits` low bits of
//! `z` are *all ones* while the table entry is inexact. Conversions
//! historically guarded this with a runtime fallback branch; here the branch
//! is gone, because the `prover` module verifies (per table entry, via
//! continued-fraction convergents) that no 64-bit significand can produce
//! the all-ones pattern. [`convert_with_check`] keeps an instrumented
//! version of the retired guard so test harnesses can observe that it never
//! fires.
//!
//! Inputs with `|q|` beyond the table are decided by magnitude alone:
//! below `10^-342` every nonzero 64-bit significand underflows to zero,
//! above `10^308` everything overflows to infinity (both formats).

use crate::ieee::{FloatFormat, IeeeComponents, Sign};
use crate::pow5;

/// A decimal significand shifted so its most significant bit is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizedSignificand {
    /// `w << leading_zeros`, in `[2^63, 2^64)`.
    pub value: u64,
    /// How far `w` was shifted; feeds the exponent computation.
    pub leading_zeros: u32,
}

/// Shifts a nonzero significand into `[2^63, 2^64)`.
#[inline]
pub fn normalize(w: u64) -> NormalizedSignificand {
    assert!(w != 0, "zero is handled before conversion");
    let leading_zeros = w.leading_zeros();
    NormalizedSignificand {
        value: w << leading_zeros,
        leading_zeros,
    }
}

/// The top 128 bits of the 192-bit product `T(q) * w~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Product128 {
    /// `floor(T(q) * w~ / 2^64)`, in `[2^126, 2^128)` since both factors
    /// have their top bit set.
    pub z: u128,
}

impl Product128 {
    /// 1 when `z >= 2^127`: the product kept both factors' top bits aligned.
    #[inline]
    pub fn top_bit(self) -> u32 {
        (self.z >> 127) as u32
    }
}

/// Computes `floor(entry * normalized / 2^64)` exactly.
///
/// Splitting `entry = hi * 2^64 + lo` gives
/// `floor(entry * w / 2^64) = hi * w + floor(lo * w / 2^64)`,
/// two widening multiplies with no possible overflow:
/// `hi * w + (lo * w >> 64) <= (2^64 - 1) * 2^64 < 2^128`.
#[inline]
pub fn truncated_product(entry: u128, normalized: u64) -> Product128 {
    let hi = (entry >> 64) as u64;
    let lo = entry as u64;
    let w = u128::from(normalized);
    let z = u128::from(hi) * w + ((u128::from(lo) * w) >> 64);
    Product128 { z }
}

/// `floor(q * log2(10))` for `|q| <= 350`.
///
/// `217706 / 2^16 = 3.321930...` matches `log2(10) = 3.321928...` closely
/// enough that the floor is exact over the whole range (verified
/// exhaustively against big-integer powers in the tests). The shift is
/// arithmetic, so negative `q` floors correctly.
#[inline]
pub fn floor_log2_pow10(q: i32) -> i32 {
    debug_assert!((-350..=350).contains(&q));
    ((217706i64 * i64::from(q)) >> 16) as i32
}

/// Exact powers of ten in binary64 (`10^22 = 2^22 * 5^22`, and `5^22 < 2^53`).
const POW10_F64: [f64; 23] = [
    1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16,
    1e17, 1e18, 1e19, 1e20, 1e21, 1e22,
];

/// Exact powers of ten in binary32 (`5^10 < 2^24`).
const POW10_F32: [f32; 11] = [1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10];

/// One-operation fast path: when both `w` and `10^|q|` are exactly
/// representable, a single native multiply or divide rounds correctly by
/// the definition of IEEE arithmetic.
#[inline]
fn native_fast_path(sign: Sign, w: u64, q: i32, format: FloatFormat) -> Option<IeeeComponents> {
    match format {
        FloatFormat::Binary64 => {
            if w < (1u64 << 53) && (-22..=22).contains(&q) {
                let wf = w as f64; // exact: w has at most 53 bits
                let magnitude = if q >= 0 {
                    wf * POW10_F64[q as usize]
                } else {
                    wf / POW10_F64[(-q) as usize]
                };
                let value = if sign.is_negative() { -magnitude } else { magnitude };
                return Some(IeeeComponents::from_f64(value));
            }
            None
        }
        FloatFormat::Binary32 => {
            if w < (1u64 << 24) && (-10..=10).contains(&q) {
                let wf = w as f32; // exact: w has at most 24 bits
                let magnitude = if q >= 0 {
                    wf * POW10_F32[q as usize]
                } else {
                    wf / POW10_F32[(-q) as usize]
                };
                let value = if sign.is_negative() { -magnitude } else { magnitude };
                return Some(IeeeComponents::from_f32(value));
            }
            None
        }
    }
}

/// Decimal exponents whose product is exact enough that an all-ones margin
/// carries no uncertainty: the table entry itself is exact for `q` in
/// `[0, 55]`, and for `q` in `[-27, -1]` the significand `w < 2^64 < 5^28`
/// cannot have enough factors of five for the reciprocal's error to reach
/// the kept bits.
const EXACT_PRODUCT_Q: std::ops::RangeInclusive<i32> = -27..=55;

/// The table-driven conversion. `CHECK` compiles in the retired fallback
/// guard as a pure observation; with `CHECK = false` the comparison does
/// not exist in the generated code, which is the whole point. Each
/// monomorphization hands its constant to [`table_path_dyn`], where the
/// dead arm folds away.
#[inline(always)]
fn table_path<const CHECK: bool>(
    sign: Sign,
    w: u64,
    q: i32,
    format: FloatFormat,
) -> (IeeeComponents, bool) {
    table_path_dyn(sign, w, q, format, CHECK)
}

/// [`table_path`] with the guard behind a runtime flag. This is the single
/// source of truth for the conversion; the const-generic wrapper exists so
/// production call sites pay nothing for the flag.
#[inline(always)]
fn table_path_dyn(
    sign: Sign,
    w: u64,
    q: i32,
    format: FloatFormat,
    check: bool,
) -> (IeeeComponents, bool) {
    let norm = normalize(w);
    let product = truncated_product(pow5::value_for(q), norm.value);
    let z = product.z;
    let margin = format.margin_bits();

    let mut check_fired = false;
    if check {
        // The guard this library removes: discarded bits all ones while the
        // table entry is inexact. The prover shows this is unreachable, and
        // the difference tester watches the flag to confirm.
        let mask = (1u128 << margin) - 1;
        check_fired = (z & mask) == mask && !EXACT_PRODUCT_Q.contains(&q);
    }

    let u = product.top_bit();
    let sig_bits = format.sig_bits();
    // m: binary significand (with implicit bit) plus a trailing round bit,
    // always exactly sig_bits + 2 bits wide.
    let mut m = ((z >> margin) as u64) >> u;
    debug_assert!(m >> (sig_bits + 1) == 1, "extraction must yield sig+2 bits");

    // Binary exponent of the value m represents, before rounding shifts it:
    // w * 10^q = w~ * 2^-lz * 5^q * 10^... collapses to this closed form.
    let biased = floor_log2_pow10(q) + 63 + u as i32 - norm.leading_zeros as i32 + format.bias();

    if biased <= 0 {
        // Subnormal range: squeeze out the leading bits the format cannot
        // store, then round half-up. Exact ties are impossible down here
        // (they would need 5^|q| to divide w with |q| > 27), so half-up
        // and half-even agree.
        let shift = 1 - biased; // >= 1
        if shift >= 64 {
            return (IeeeComponents::zero(sign, format), check_fired);
        }
        m >>= shift as u32;
        m += m & 1;
        m >>= 1;
        return if m >> sig_bits != 0 {
            // Rounding crossed back up into the smallest normal value.
            (
                IeeeComponents::from_parts(sign, 1, m - (1 << sig_bits), format),
                check_fired,
            )
        } else {
            // Classified as Zero automatically when every bit shifted out.
            (IeeeComponents::from_parts(sign, 0, m, format), check_fired)
        };
    }

    // Round-half-even correction. Half-up differs from half-even only on
    // exact ties with an even candidate below, and a tie is only
    // expressible as a 64-bit decimal significand for q in a narrow window
    // (see FloatFormat::tie_exponent_range). A genuine tie shows up as: the
    // product exact through the low 64 bits, the round bit set above an
    // even candidate, and nothing but zeros below the round bit.
    let (tie_lo, tie_hi) = format.tie_exponent_range();
    if z & 0xFFFF_FFFF_FFFF_FFFF == 0
        && (tie_lo..=tie_hi).contains(&q)
        && m & 0b11 == 0b01
        && (u128::from(m) << (margin + u)) == z
    {
        m &= !1; // demote the round bit: round down to the even candidate
    }

    m += m & 1;
    m >>= 1;
    let mut biased = biased as u32;
    if m >> (sig_bits + 1) != 0 {
        // Rounding carried into the next binade: significand back to 1.0.
        m = 1 << sig_bits;
        biased += 1;
    }
    if biased >= format.max_biased() {
        return (IeeeComponents::infinity(sign, format), check_fired);
    }
    (
        IeeeComponents::from_parts(sign, biased, m - (1 << sig_bits), format),
        check_fired,
    )
}

/// Converts `±w * 10^q` (with `0 < w < 2^64` holding every significant
/// digit) to the nearest representable value, ties to even.
pub fn convert(sign: Sign, w: u64, q: i32, format: FloatFormat) -> IeeeComponents {
    assert!(w != 0, "zero is handled before conversion");
    if q < pow5::TABLE_MIN_Q {
        return IeeeComponents::zero(sign, format);
    }
    if q > pow5::TABLE_MAX_Q {
        return IeeeComponents::infinity(sign, format);
    }
    if let Some(components) = native_fast_path(sign, w, q, format) {
        return components;
    }
    table_path::<false>(sign, w, q, format).0
}

/// [`convert`] with the retired fallback guard compiled in as an observer.
///
/// Returns the conversion result and whether the guard would have fired.
/// The native fast path is skipped so that *every* input exercises the
/// table path — this is the variant difference testers should compare
/// against, since it cannot hide table-path bugs behind the fast path.
pub fn convert_with_check(sign: Sign, w: u64, q: i32, format: FloatFormat) -> (IeeeComponents, bool) {
    assert!(w != 0, "zero is handled before conversion");
    if q < pow5::TABLE_MIN_Q {
        return (IeeeComponents::zero(sign, format), false);
    }
    if q > pow5::TABLE_MAX_Q {
        return (IeeeComponents::infinity(sign, format), false);
    }
    table_path::<true>(sign, w, q, format)
}

/// The exact branch structure of [`convert`] — native fast path included —
/// with the retired guard behind a runtime switch. With `run_guard = false`
/// the guard is skipped and the returned flag is always `false`; with
/// `run_guard = true` the table path evaluates the one masked comparison
/// the guard used to cost and reports its verdict.
///
/// This exists for fair timing. Comparing two separately compiled
/// functions measures their code placement — cache-line and
/// branch-predictor aliasing luck — along with the work they do, and that
/// placement noise can dwarf a one-instruction difference. Timing one
/// compiled body twice, flag off and flag on, with the flag kept opaque to
/// the optimizer by the caller, leaves the guard itself as the only
/// difference between the two measurements.
pub fn convert_guard_switched(
    sign: Sign,
    w: u64,
    q: i32,
    format: FloatFormat,
    run_guard: bool,
) -> (IeeeComponents, bool) {
    assert!(w != 0, "zero is handled before conversion");
    if q < pow5::TABLE_MIN_Q {
        return (IeeeComponents::zero(sign, format), false);
    }
    if q > pow5::TABLE_MAX_Q {
        return (IeeeComponents::infinity(sign, format), false);
    }
    if let Some(components) = native_fast_path(sign, w, q, format) {
        return (components, false);
    }
    table_path_dyn(sign, w, q, format, run_guard)
}
