//! Correctly rounded decimal → binary floating-point conversion, with the
//! usual slow-path safety net *proven unreachable* instead of compiled in.
//!
//! Converting `"3.1416"` to the nearest `f64` sounds easy and is famously
//! not: the result must be the representable value closest to the written
//! decimal, ties to even, for every input. Fast converters multiply the
//! decimal significand by a precomputed truncated power of five and read
//! the binary significand out of the top of the product; because the table
//! entry is truncated, they traditionally keep a guard that detects the
//! one ambiguous bit pattern and escapes to arbitrary-precision arithmetic.
//! That branch costs code, latency, and — because it almost never runs —
//! testing confidence.
//!
//! This crate removes the branch and replaces it with a proof artifact:
//!
//! * [`convert`] implements the branch-free conversion for
//!   binary64 and binary32.
//! * [`prover`] machine-checks, offline, that no 64-bit significand can
//!   produce the ambiguous pattern against any of the 651 table entries —
//!   using continued-fraction convergents to reduce 2^64 candidates per
//!   entry to a few dozen.
//! * [`oracle`] is an independent exact implementation (big-integer
//!   rationals) used to difference-test the fast path.
//! * [`convert::convert_with_check`] keeps the retired guard as a pure
//!   observer so test harnesses can watch it never fire.
//!
//! The top-level entry points tie the pieces together: scan the literal,
//! convert through the fast path when its 64-bit significand holds every
//! significant digit, and fall back to the exact oracle only for inputs
//! with more than 19 significant digits (where the fallback is about
//! digits, not about rounding doubt).
//!
//! ```
//! use checkless::parse_f64;
//!
//! assert_eq!(parse_f64("3.1416").unwrap(), 3.1416);
//! assert_eq!(parse_f64("5e-324").unwrap().to_bits(), 1); // smallest subnormal
//! assert!(parse_f64("0x1p3").is_err()); // decimal only
//! ```
//!
//! Byte-level scanning with trailing input is available too:
//!
//! ```
//! use checkless::{parse_prefix, FloatFormat};
//!
//! let parsed = parse_prefix(b"2.5, 7.25", FloatFormat::Binary64).unwrap();
//! assert_eq!(parsed.consumed, 3);
//! assert_eq!(parsed.components.to_f64(), 2.5);
//! ```

pub mod convert;
pub mod ieee;
pub mod oracle;
pub mod pow5;
pub mod prover;
pub mod scanner;

pub use ieee::{FloatFormat, FpClass, IeeeComponents, MarginConfig, Sign};
pub use scanner::{DecimalNumber, ScanError, ScanErrorKind, Scanned, Token};

use num_bigint::BigUint;

/// A parsed prefix: the converted value and how many bytes it spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parsed {
    pub components: IeeeComponents,
    pub consumed: usize,
}

/// Converts the longest decimal literal at the front of `input`, leaving
/// any trailing bytes unexamined (the first of them is guaranteed ASCII).
pub fn parse_prefix(input: &[u8], format: FloatFormat) -> Result<Parsed, ScanError> {
    let scanned = scanner::scan(input)?;
    let components = match &scanned.token {
        Token::Zero(sign) => IeeeComponents::zero(*sign, format),
        Token::Number(number) => components_for(number, format),
    };
    Ok(Parsed {
        components,
        consumed: scanned.consumed,
    })
}

fn components_for(number: &DecimalNumber, format: FloatFormat) -> IeeeComponents {
    if number.truncated {
        // More than 19 significant digits: (w, q) alone cannot represent
        // the value exactly, and near a rounding boundary the dropped tail
        // decides the answer. Hand the full digit string to the exact
        // oracle. (`q` absorbed the dropped digit count; undo that shift to
        // re-attach the exponent to the full string.)
        let digits = number.digits.as_deref().expect("truncated numbers carry digits");
        let value = BigUint::parse_bytes(digits.as_bytes(), 10).expect("digits are decimal");
        let q_full = i64::from(number.q) - (digits.len() as i64 - scanner::MAX_DIGITS as i64);
        oracle::exact_convert(number.sign, &value, q_full, format)
    } else {
        convert::convert(number.sign, number.w, number.q, format)
    }
}

/// Converts `input`, requiring it to be exactly one decimal literal.
/// Unconsumed bytes are an error carrying the offset where they begin.
pub fn parse(input: &str, format: FloatFormat) -> Result<IeeeComponents, ScanError> {
    let parsed = parse_prefix(input.as_bytes(), format)?;
    if parsed.consumed != input.len() {
        return Err(ScanError {
            kind: ScanErrorKind::TrailingCharacters,
            offset: parsed.consumed,
        });
    }
    Ok(parsed.components)
}

/// Strict whole-string conversion to `f64`.
pub fn parse_f64(input: &str) -> Result<f64, ScanError> {
    parse(input, FloatFormat::Binary64).map(|c| c.to_f64())
}

/// Strict whole-string conversion to `f32` (rounded once, directly from
/// the decimal — never through an intermediate `f64`).
pub fn parse_f32(input: &str) -> Result<f32, ScanError> {
    parse(input, FloatFormat::Binary32).map(|c| c.to_f32())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_routes_all_three_ways() {
        // Fast path (few digits, small exponent).
        assert_eq!(parse_f64("3.1416").unwrap().to_bits(), 0x4009_21FF_2E48_E8A7);
        // Table path (exponent beyond the exact-power window).
        assert_eq!(parse_f64("1e23").unwrap().to_bits(), 0x44B5_2D02_C7E1_4AF6);
        // Oracle path (30 significant digits).
        assert_eq!(
            parse_f64("123456789012345678901234567890e-25").unwrap().to_bits(),
            0x40C8_1CD6_E63C_53D7
        );
    }

    #[test]
    fn truncated_tail_can_decide_the_rounding() {
        // 4503599627370496.5 is the exact midpoint between 2^52 and
        // 2^52 + 1: ties to even, downward.
        assert_eq!(
            parse_f64("4503599627370496.5").unwrap().to_bits(),
            0x4330_0000_0000_0000
        );
        // A 1 in the 26th significant digit breaks the tie upward. The
        // 19-digit prefix alone would still round down; only the exact
        // path sees the tail.
        assert_eq!(
            parse_f64("4503599627370496.5000000001").unwrap().to_bits(),
            0x4330_0000_0000_0001
        );
        // An all-zero tail keeps the tie (and must also take the oracle
        // route, since 26 digits overflow the scanner's significand).
        assert_eq!(
            parse_f64("4503599627370496.5000000000").unwrap().to_bits(),
            0x4330_0000_0000_0000
        );
    }

    #[test]
    fn zeros_and_signs() {
        assert_eq!(parse_f64("0.000e99").unwrap().to_bits(), 0);
        assert_eq!(parse_f64("-0").unwrap().to_bits(), 1 << 63);
        assert_eq!(parse_f64("-2.5").unwrap(), -2.5);
        assert_eq!(parse_f32("-3.14e12").unwrap().to_bits(), 0xD436_C5A5);
    }

    #[test]
    fn strict_parse_reports_trailing_bytes() {
        assert_eq!(
            parse("1.5x", FloatFormat::Binary64),
            Err(ScanError {
                kind: ScanErrorKind::TrailingCharacters,
                offset: 3
            })
        );
        assert_eq!(
            parse("1 ", FloatFormat::Binary64).unwrap_err().offset,
            1
        );
        // parse_prefix accepts the same inputs.
        let p = parse_prefix(b"1.5x", FloatFormat::Binary64).unwrap();
        assert_eq!((p.consumed, p.components.to_f64()), (3, 1.5));
    }

    #[test]
    fn scan_errors_pass_through() {
        assert_eq!(parse_f64("").unwrap_err().kind, ScanErrorKind::Empty);
        assert_eq!(parse_f64("x").unwrap_err().kind, ScanErrorKind::NoDigits);
        assert_eq!(parse_f64("1e+").unwrap_err().kind, ScanErrorKind::MalformedExponent);
        assert_eq!(parse_f64("1é").unwrap_err().kind, ScanErrorKind::NonAscii);
    }

    #[test]
    fn extreme_exponents_saturate_cleanly() {
        assert_eq!(parse_f64("1e999999999999999999999").unwrap(), f64::INFINITY);
        assert_eq!(parse_f64("-1e999999999999999999999").unwrap(), f64::NEG_INFINITY);
        assert_eq!(parse_f64("1e-999999999999999999999").unwrap().to_bits(), 0);
        assert_eq!(parse_f32("1e-999999999999999999999").unwrap().to_bits(), 0);
    }

    proptest! {
        /// The production pipeline agrees with the independent exact parser
        /// on generated literals of every length class, both formats.
        #[test]
        fn pipeline_matches_exact_reference(
            digits in "[0-9]{1,28}",
            frac in "[0-9]{0,12}",
            exp in -330i32..320,
            neg in any::<bool>(),
        ) {
            let input = format!("{}{digits}.{frac}e{exp}", if neg { "-" } else { "" });
            for format in [FloatFormat::Binary64, FloatFormat::Binary32] {
                let got = parse(&input, format).unwrap();
                let expected = oracle::exact_parse(&input, format).unwrap();
                prop_assert_eq!(got, expected, "{} {:?}", &input, format);
            }
        }
    }
}
