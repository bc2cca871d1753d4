//! Decimal literal scanner.
//!
//! Accepts the grammar
//!
//! ```text
//! number   := sign? digit+ ('.' digit*)? exponent?
//! exponent := [eE] sign? digit+
//! sign     := '+' | '-'
//! ```
//!
//! and reduces a literal to the pair `(w, q)` with `value = ±w * 10^q`,
//! where `w` holds the first (at most) 19 significant digits. 19 digits is
//! the largest count that always fits in a `u64`; longer inputs set the
//! [`DecimalNumber::truncated`] flag and keep the full digit string so a
//! caller can fall back to exact arithmetic.
//!
//! Scanning consumes the longest valid prefix and reports how many bytes it
//! used, so callers embedding numbers in larger inputs can resume after the
//! token. Three deliberate contract choices:
//!
//! * A trailing `.` with no fraction digits is part of the token (`"3."`
//!   consumes 2 bytes), but a leading `.` is not a number (`".5"` fails:
//!   the grammar requires a digit before the dot).
//! * An `e`/`E` commits to an exponent: `"1e"` and `"1e+"` are errors, not
//!   a `1` with trailing junk. Silently re-interpreting the `e` would make
//!   `"1e5"` and `"1e+"` parse different prefixes of near-identical inputs.
//! * Any non-ASCII byte the scanner examines — including the byte that ends
//!   the token — is an error. Multi-byte UTF-8 sequences never hide a valid
//!   stop position, and rejecting them early gives a byte-accurate offset
//!   instead of a confusing partial parse.

use crate::ieee::Sign;

/// Longest run of significant digits that always fits in a `u64`
/// (`10^19 - 1 < 2^64`).
pub const MAX_DIGITS: usize = 19;

/// A scanned nonzero decimal literal: `value = ±w * 10^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalNumber {
    pub sign: Sign,
    /// First `min(n, 19)` significant digits as an integer; `1 <= w < 10^19`.
    pub w: u64,
    /// Power-of-ten exponent attached to `w`, saturated to the `i32` range.
    /// Saturation only triggers when the written exponent is astronomically
    /// far outside the representable range of any binary format.
    pub q: i32,
    /// `true` when the input has more than 19 significant digits, i.e. `w`
    /// alone does not determine the value exactly.
    pub truncated: bool,
    /// The full run of significant digits when `truncated` (leading zeros and
    /// the decimal point stripped), `None` otherwise. The exact value is
    /// `±digits * 10^(q - (digits.len() - 19))`.
    pub digits: Option<Box<str>>,
}

/// Result of scanning: a zero (with its written sign) or a number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// Every significant digit was `0`; the exponent is irrelevant.
    Zero(Sign),
    Number(DecimalNumber),
}

/// A successful scan: the token plus how many input bytes it spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scanned {
    pub token: Token,
    /// Bytes consumed from the front of the input; the remainder was never
    /// examined (except that the first unconsumed byte is known ASCII).
    pub consumed: usize,
}

/// Why a scan failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanErrorKind {
    /// The input was empty.
    Empty,
    /// No digit where the grammar requires one (start of the number).
    NoDigits,
    /// An `e`/`E` exponent marker without a following digit run.
    MalformedExponent,
    /// A non-ASCII byte at an examined position.
    NonAscii,
    /// Unconsumed bytes after the token (reported by strict parsing
    /// wrappers, never by [`scan`] itself).
    TrailingCharacters,
}

/// Scan failure with the byte offset it was detected at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanError {
    pub kind: ScanErrorKind,
    pub offset: usize,
}

impl std::fmt::Display for ScanError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.kind {
            ScanErrorKind::Empty => "empty input",
            ScanErrorKind::NoDigits => "expected a digit",
            ScanErrorKind::MalformedExponent => "exponent marker without digits",
            ScanErrorKind::NonAscii => "non-ASCII byte",
            ScanErrorKind::TrailingCharacters => "unexpected trailing characters",
        };
        write!(f, "{what} at byte {}", self.offset)
    }
}

impl std::error::Error for ScanError {}

/// Scans the longest decimal literal at the front of `input`.
pub fn scan(input: &[u8]) -> Result<Scanned, ScanError> {
    fn fail<T>(kind: ScanErrorKind, offset: usize) -> Result<T, ScanError> {
        Err(ScanError { kind, offset })
    }
    if input.is_empty() {
        return fail(ScanErrorKind::Empty, 0);
    }

    let mut i = 0usize;
    // Every examined byte goes through here: non-ASCII is an error no matter
    // what the grammar expected at that position.
    let examine = |i: usize| -> Result<Option<u8>, ScanError> {
        match input.get(i) {
            Some(&b) if !b.is_ascii() => fail(ScanErrorKind::NonAscii, i),
            Some(&b) => Ok(Some(b)),
            None => Ok(None),
        }
    };

    let sign = match examine(i)? {
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

    if !matches!(examine(i)?, Some(b) if b.is_ascii_digit()) {
        return fail(ScanErrorKind::NoDigits, i);
    }

    // Significant-digit accumulator. `w` keeps the first 19 significant
    // digits, `sig_count` counts all of them, `frac_count` counts every
    // digit after the '.' (leading zeros shift the exponent even though
    // they are not significant).
    let mut w = 0u64;
    let mut sig_count = 0usize;
    let mut frac_count = 0i64;
    let mantissa_start = i;

    let mut eat_digits = |i: &mut usize, fraction: bool| -> Result<(), ScanError> {
        while let Some(b) = examine(*i)? {
            if !b.is_ascii_digit() {
                break;
            }
            let d = b - b'0';
            if fraction {
                frac_count += 1;
            }
            if sig_count > 0 || d != 0 {
                sig_count += 1;
                if sig_count <= MAX_DIGITS {
                    // No overflow: w < 10^18 here, and 10^19 - 1 < 2^64.
                    w = w * 10 + u64::from(d);
                }
            }
            *i += 1;
        }
        Ok(())
    };

    eat_digits(&mut i, false)?;
    if examine(i)? == Some(b'.') {
        i += 1;
        eat_digits(&mut i, true)?;
    }
    let mantissa_end = i;

    let mut explicit_exp = 0i64;
    if matches!(examine(i)?, Some(b'e') | Some(b'E')) {
        let marker = i;
        i += 1;
        let exp_negative = match examine(i)? {
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
        while let Some(b) = examine(i)? {
            if !b.is_ascii_digit() {
                break;
            }
            any = true;
            // Saturating: an exponent too large for i64 is far beyond every
            // clamp downstream, so its exact value is irrelevant.
            explicit_exp = explicit_exp
                .saturating_mul(10)
                .saturating_add(i64::from(b - b'0'));
            i += 1;
        }
        if !any {
            return fail(ScanErrorKind::MalformedExponent, marker);
        }
        if exp_negative {
            explicit_exp = -explicit_exp;
        }
    }

    // The byte that stopped the scan is part of the examined frontier; the
    // `examine` calls above already rejected it if non-ASCII.

    if sig_count == 0 {
        return Ok(Scanned {
            token: Token::Zero(sign),
            consumed: i,
        });
    }

    let kept = sig_count.min(MAX_DIGITS);
    let q64 = explicit_exp
        .saturating_sub(frac_count)
        .saturating_add((sig_count - kept) as i64);
    let q = q64.clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32;

    let truncated = sig_count > MAX_DIGITS;
    let digits = truncated.then(|| {
        // Second pass over the mantissa span: keep digits from the first
        // nonzero one on, drop the '.'.
        let mut s = String::with_capacity(sig_count);
        for &b in &input[mantissa_start..mantissa_end] {
            if b.is_ascii_digit() && (!s.is_empty() || b != b'0') {
                s.push(b as char);
            }
        }
        debug_assert_eq!(s.len(), sig_count);
        s.into_boxed_str()
    });

    Ok(Scanned {
        token: Token::Number(DecimalNumber {
            sign,
            w,
            q,
            truncated,
            digits,
        }),
        consumed: i,
    })
}
