//! Exact reference conversion through arbitrary-precision rationals.
//!
//! This module answers "what is the correctly rounded result?" by brute
//! force: represent `±digits * 10^q` as an exact rational `num/den`, find
//! the binary exponent with integer comparisons, and round the scaled
//! rational to the significand width with an exact division. No floating
//! point operation is involved anywhere, so the answer is trustworthy as an
//! oracle for the bit-twiddling conversion in [`crate::convert`] — the two
//! share no code and no intermediate representation.
//!
//! Also here: [`format_17`], which renders an `f64` as 17 significant
//! decimal digits (always enough to round-trip), used to exercise the
//! parse → format → parse loop.

use crate::ieee::{FloatFormat, IeeeComponents, Sign};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// `10^k`, served from a precomputed table for the exponents the clamps
/// allow on short inputs (the overwhelmingly common case).
fn pow10(k: u64) -> BigUint {
    static CACHE: OnceLock<Vec<BigUint>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut v = Vec::with_capacity(801);
        let mut x = BigUint::one();
        for _ in 0..=800u32 {
            v.push(x.clone());
            x *= 10u8;
        }
        v
    });
    match cache.get(usize::try_from(k).unwrap_or(usize::MAX)) {
        Some(c) => c.clone(),
        None => BigUint::from(10u8).pow(u32::try_from(k).expect("pow10 exponent fits u32")),
    }
}

/// `round(n / d)` with ties to even, exactly.
fn round_div_to_even(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    let twice = r << 1u32;
    if &twice > d || (&twice == d && q.is_odd()) {
        q + 1u8
    } else {
        q
    }
}

/// `round(num / (den * 2^g))` with ties to even; `g` may be negative.
fn round_at_quantum(num: &BigUint, den: &BigUint, g: i64) -> BigUint {
    if g >= 0 {
        round_div_to_even(num, &(den << g as u64))
    } else {
        round_div_to_even(&(num << (-g) as u64), den)
    }
}

/// Correctly rounds `±value * 10^q10` with exact integer arithmetic.
///
/// `value` carries every significant digit — there is no length limit, which
/// is the point: truncated scans fall back to this function with the full
/// digit string.
pub fn exact_convert(sign: Sign, value: &BigUint, q10: i64, format: FloatFormat) -> IeeeComponents {
    if value.is_zero() {
        return IeeeComponents::zero(sign, format);
    }

    // Coarse clamps so absurd exponents never materialize as big integers.
    // With b bits, value has at most floor(b * log10(2)) + 1 and at least
    // floor((b-1) * log10(2)) + 1 decimal digits; both bounds below use a
    // rational under-approximation of log10(2) = 0.30102999...
    let b = value.bits() as i64;
    let ndig_upper = b * 30103 / 100000 + 1;
    let ndig_lower = (b - 1) * 30102 / 100000 + 1;
    if q10.saturating_add(ndig_upper) < -360 {
        // value * 10^q10 < 10^(q10 + ndig) <= 10^-360: below every format's
        // smallest half-subnormal.
        return IeeeComponents::zero(sign, format);
    }
    if q10.saturating_add(ndig_lower) - 1 > 400 {
        // value * 10^q10 >= 10^(q10 + ndig - 1) > 10^400: above every
        // format's overflow threshold.
        return IeeeComponents::infinity(sign, format);
    }

    let (num, den) = if q10 >= 0 {
        (value * pow10(q10 as u64), BigUint::one())
    } else {
        (value.clone(), pow10(-q10 as u64))
    };

    // Binary exponent: the unique e with 2^e <= num/den < 2^(e+1).
    let mut e = num.bits() as i64 - den.bits() as i64;
    let below_2e = if e >= 0 {
        num < (&den << e as u64)
    } else {
        (&num << (-e) as u64) < den
    };
    if below_2e {
        e -= 1;
    }

    let sig = format.sig_bits();
    let emin = i64::from(1 - format.bias());
    let emax = i64::from(format.max_biased() as i32 - 1 - format.bias());

    if e < emin {
        // Subnormal range: the quantum is fixed at 2^(emin - sig) no matter
        // how small the value gets.
        let m = round_at_quantum(&num, &den, emin - i64::from(sig));
        let m = u64::try_from(&m).expect("subnormal significand fits u64");
        return if m >> sig != 0 {
            // Rounded up to the smallest normal value.
            IeeeComponents::from_parts(sign, 1, 0, format)
        } else {
            // from_parts classifies m == 0 as Zero.
            IeeeComponents::from_parts(sign, 0, m, format)
        };
    }

    let m = round_at_quantum(&num, &den, e - i64::from(sig));
    let mut m = u64::try_from(&m).expect("significand fits u64");
    debug_assert!(m >= 1 << sig && m <= 2 << sig);
    if m == 2 << sig {
        // Rounding carried into the next binade.
        m = 1 << sig;
        e += 1;
    }
    if e > emax {
        return IeeeComponents::infinity(sign, format);
    }
    IeeeComponents::from_parts(sign, (e + i64::from(format.bias())) as u32, m - (1 << sig), format)
}

/// Splits a complete well-formed literal into `(sign, digits, exponent)`
/// with *every* digit kept, so `±digits * 10^exponent` is the written value
/// exactly. This is the reference decomposition for difference testing: it
/// walks the same grammar as the scanner but shares no code with it.
/// Returns `None` when the input is not a complete well-formed literal.
pub fn decompose(input: &str) -> Option<(Sign, BigUint, i64)> {
    let b = input.as_bytes();
    let mut i = 0usize;
    let sign = match b.first() {
        Some(b'-') => {
            i += 1;
            Sign::Negative
        }
        Some(b'+') => {
            i += 1;
            Sign::Positive
        }
        _ => Sign::Positive,
    };

    let mut digits: Vec<u8> = Vec::new();
    let mut int_any = false;
    while i < b.len() && b[i].is_ascii_digit() {
        digits.push(b[i]);
        int_any = true;
        i += 1;
    }
    if !int_any {
        return None;
    }
    let mut frac_count = 0i64;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            digits.push(b[i]);
            frac_count += 1;
            i += 1;
        }
    }
    let mut exp = 0i64;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        let exp_negative = match b.get(i) {
            Some(b'-') => {
                i += 1;
                true
            }
            Some(b'+') => {
                i += 1;
                false
            }
            _ => false,
        };
        let mut any = false;
        while i < b.len() && b[i].is_ascii_digit() {
            exp = exp.saturating_mul(10).saturating_add(i64::from(b[i] - b'0'));
            any = true;
            i += 1;
        }
        if !any {
            return None;
        }
        if exp_negative {
            exp = -exp;
        }
    }
    if i != b.len() {
        return None;
    }

    let value = BigUint::parse_bytes(&digits, 10).expect("digit bytes parse");
    Some((sign, value, exp.saturating_sub(frac_count)))
}

/// Strict whole-string exact conversion: [`decompose`] followed by
/// [`exact_convert`].
pub fn exact_parse(input: &str, format: FloatFormat) -> Option<IeeeComponents> {
    let (sign, value, q10) = decompose(input)?;
    Some(exact_convert(sign, &value, q10, format))
}

/// Renders a finite `f64` as `d.dddddddddddddddde±X` with exactly 17
/// significant digits — always enough for the value to survive a parse
/// round-trip bit-for-bit. All digit selection is exact rational
/// arithmetic; the only floating-point use is a first guess at the decimal
/// exponent, corrected by integer comparison.
pub fn format_17(x: f64) -> String {
    assert!(x.is_finite(), "only finite values have digit expansions");
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = (bits >> 52) & 0x7FF;
    let field = bits & ((1u64 << 52) - 1);
    if biased == 0 && field == 0 {
        return format!("{sign}0.0000000000000000e0");
    }
    let (m2, e2): (u64, i64) = if biased == 0 {
        (field, -1074)
    } else {
        (field | 1 << 52, biased as i64 - 1075)
    };
    let (num, den) = if e2 >= 0 {
        (BigUint::from(m2) << e2 as u64, BigUint::one())
    } else {
        (BigUint::from(m2), BigUint::one() << (-e2) as u64)
    };

    // k = floor(log10 |x|), first estimated from the bit lengths, then
    // pinned down exactly: 10^k <= |x| < 10^(k+1).
    let at_least = |k: i64| -> bool {
        // |x| >= 10^k ?
        if k >= 0 {
            num >= &den * pow10(k as u64)
        } else {
            &num * pow10((-k) as u64) >= den
        }
    };
    let e_bin = num.bits() as i64 - den.bits() as i64;
    let mut k = (e_bin as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while !at_least(k) {
        k -= 1;
    }
    while at_least(k + 1) {
        k += 1;
    }

    // 17 digits: round |x| / 10^(k-16) to an integer in [10^16, 10^17].
    let scale = k - 16;
    let digits = if scale >= 0 {
        round_div_to_even(&num, &(&den * pow10(scale as u64)))
    } else {
        round_div_to_even(&(&num * pow10((-scale) as u64)), &den)
    };
    let mut k = k;
    let mut s = digits.to_string();
    if s.len() == 18 {
        // Rounding reached 10^17; renormalize to one digit more of exponent.
        debug_assert!(s.bytes().skip(1).all(|b| b == b'0'));
        s.truncate(17);
        k += 1;
    }
    debug_assert_eq!(s.len(), 17);
    format!("{sign}{}.{}e{}", &s[..1], &s[1..], k)
}
