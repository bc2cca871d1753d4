//! IEEE-754 binary interchange formats and assembled conversion results.
//!
//! The conversion pipeline is format-generic: every step is parameterized by
//! [`FloatFormat`], which bundles the field widths and derived constants for
//! binary64 and binary32. Results are carried as [`IeeeComponents`] — an
//! exploded sign / exponent / significand triple plus a classification — so
//! tests and the difference tester can inspect fields directly instead of
//! poking at packed bits.

use serde::Serialize;

/// Sign of a decimal input or binary result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// `true` for [`Sign::Negative`].
    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    /// `"+"` or `"-"`.
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }
}

/// The two supported binary interchange formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FloatFormat {
    Binary64,
    Binary32,
}

impl FloatFormat {
    /// Width of the stored fraction field (excluding the implicit leading
    /// bit): 52 for binary64, 23 for binary32.
    pub const fn sig_bits(self) -> u32 {
        match self {
            FloatFormat::Binary64 => 52,
            FloatFormat::Binary32 => 23,
        }
    }

    /// Exponent bias: 1023 for binary64, 127 for binary32.
    pub const fn bias(self) -> i32 {
        match self {
            FloatFormat::Binary64 => 1023,
            FloatFormat::Binary32 => 127,
        }
    }

    /// All-ones biased exponent, reserved for infinities and NaNs:
    /// 2047 for binary64, 255 for binary32.
    pub const fn max_biased(self) -> u32 {
        match self {
            FloatFormat::Binary64 => 2047,
            FloatFormat::Binary32 => 255,
        }
    }

    /// Total encoding width in bits: 64 or 32.
    pub const fn total_bits(self) -> u32 {
        match self {
            FloatFormat::Binary64 => 64,
            FloatFormat::Binary32 => 32,
        }
    }

    /// Bits kept when the 128-bit product is cut down to a provisional
    /// significand: significand width + implicit bit + round bit + sticky
    /// slack = 55 for binary64, 26 for binary32.
    pub const fn extract_bits(self) -> u32 {
        self.sig_bits() + 3
    }

    /// Bits of the 128-bit product that the extraction discards:
    /// 73 for binary64, 102 for binary32. This is the window the
    /// verifier proves can never be all ones (see the `prover` module).
    pub const fn margin_bits(self) -> u32 {
        128 - self.extract_bits()
    }

    /// Extraction/margin split as a named pair.
    pub const fn margin(self) -> MarginConfig {
        MarginConfig {
            extract_bits: self.extract_bits(),
            margin_bits: self.margin_bits(),
        }
    }

    /// Decimal exponents at which a halfway case (a value exactly between
    /// two representable neighbors) can be written with at most 19
    /// significant digits. Outside this window the round bit can never sit
    /// on an exact tie, so round-half-to-even needs no correction.
    ///
    /// A halfway value has the form `O * 2^e` with odd `O` of exactly
    /// `sig_bits + 2` bits. Writing it as `w * 10^q` with `w < 2^64` forces
    /// `5^|q| | w` for `q < 0` and `O * 5^q < 2^64` for `q > 0`, which bounds
    /// `q` to `[-4, 23]` for binary64 and `[-17, 10]` for binary32.
    pub const fn tie_exponent_range(self) -> (i32, i32) {
        match self {
            FloatFormat::Binary64 => (-4, 23),
            FloatFormat::Binary32 => (-17, 10),
        }
    }

    /// Human-readable name, `"binary64"` or `"binary32"`.
    pub const fn name(self) -> &'static str {
        match self {
            FloatFormat::Binary64 => "binary64",
            FloatFormat::Binary32 => "binary32",
        }
    }
}

/// How the 128 product bits split into kept and discarded ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MarginConfig {
    /// High bits kept for rounding (55 or 26).
    pub extract_bits: u32,
    /// Low bits discarded (73 or 102); the verified safety margin.
    pub margin_bits: u32,
}

/// Classification of an assembled result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FpClass {
    Zero,
    Subnormal,
    Normal,
    Infinity,
}

/// A binary floating-point value in exploded form.
///
/// Field invariants, checked by the constructors:
///
/// * `Zero`: `biased_exponent == 0`, `significand == 0`.
/// * `Subnormal`: `biased_exponent == 0`, `0 < significand < 2^sig_bits`.
/// * `Normal`: `1 <= biased_exponent < max_biased`, `significand < 2^sig_bits`
///   (the implicit leading bit is *not* stored).
/// * `Infinity`: `biased_exponent == max_biased`, `significand == 0`.
///
/// NaNs are deliberately unrepresentable: no decimal digit string converts
/// to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IeeeComponents {
    pub sign: Sign,
    pub class: FpClass,
    pub biased_exponent: u32,
    pub significand: u64,
    pub format: FloatFormat,
}

impl IeeeComponents {
    /// Signed zero.
    pub fn zero(sign: Sign, format: FloatFormat) -> Self {
        IeeeComponents {
            sign,
            class: FpClass::Zero,
            biased_exponent: 0,
            significand: 0,
            format,
        }
    }

    /// Signed infinity.
    pub fn infinity(sign: Sign, format: FloatFormat) -> Self {
        IeeeComponents {
            sign,
            class: FpClass::Infinity,
            biased_exponent: format.max_biased(),
            significand: 0,
            format,
        }
    }

    /// Assembles and classifies from raw encoding fields. The significand is
    /// the stored fraction only; panics on NaN field combinations or
    /// out-of-range fields.
    pub fn from_parts(sign: Sign, biased_exponent: u32, significand: u64, format: FloatFormat) -> Self {
        assert!(
            significand < 1u64 << format.sig_bits(),
            "significand {significand:#x} does not fit the {} fraction field",
            format.name()
        );
        assert!(
            biased_exponent <= format.max_biased(),
            "biased exponent {biased_exponent} exceeds {}",
            format.max_biased()
        );
        let class = match (biased_exponent, significand) {
            (0, 0) => FpClass::Zero,
            (0, _) => FpClass::Subnormal,
            (e, s) if e == format.max_biased() => {
                assert!(s == 0, "NaN encodings are not representable here");
                FpClass::Infinity
            }
            _ => FpClass::Normal,
        };
        IeeeComponents {
            sign,
            class,
            biased_exponent,
            significand,
            format,
        }
    }

    /// Decodes a packed encoding. For binary32 the value must fit in the low
    /// 32 bits. Panics on NaN payloads.
    pub fn from_bits(bits: u64, format: FloatFormat) -> Self {
        let total = format.total_bits();
        assert!(
            total == 64 || bits >> total == 0,
            "{} encoding must fit in {total} bits",
            format.name()
        );
        let sig_bits = format.sig_bits();
        let sign = if bits >> (total - 1) & 1 == 1 {
            Sign::Negative
        } else {
            Sign::Positive
        };
        let biased = ((bits >> sig_bits) & ((1u64 << (total - 1 - sig_bits)) - 1)) as u32;
        let significand = bits & ((1u64 << sig_bits) - 1);
        Self::from_parts(sign, biased, significand, format)
    }

    /// Exploded form of an `f64` (must not be NaN).
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN has no decimal representation");
        Self::from_bits(x.to_bits(), FloatFormat::Binary64)
    }

    /// Exploded form of an `f32` (must not be NaN).
    pub fn from_f32(x: f32) -> Self {
        assert!(!x.is_nan(), "NaN has no decimal representation");
        Self::from_bits(x.to_bits() as u64, FloatFormat::Binary32)
    }

    /// Packed encoding. For binary32 the result occupies the low 32 bits.
    pub fn to_bits(&self) -> u64 {
        let format = self.format;
        let sign_bit = u64::from(self.sign.is_negative()) << (format.total_bits() - 1);
        sign_bit | (u64::from(self.biased_exponent) << format.sig_bits()) | self.significand
    }

    /// The encoded `f64`. Panics if the format is not binary64.
    pub fn to_f64(&self) -> f64 {
        assert_eq!(self.format, FloatFormat::Binary64);
        f64::from_bits(self.to_bits())
    }

    /// The encoded `f32`. Panics if the format is not binary32.
    pub fn to_f32(&self) -> f32 {
        assert_eq!(self.format, FloatFormat::Binary32);
        f32::from_bits(self.to_bits() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        assert_eq!(FloatFormat::Binary64.extract_bits(), 55);
        assert_eq!(FloatFormat::Binary64.margin_bits(), 73);
        assert_eq!(FloatFormat::Binary32.extract_bits(), 26);
        assert_eq!(FloatFormat::Binary32.margin_bits(), 102);
        for format in [FloatFormat::Binary64, FloatFormat::Binary32] {
            let m = format.margin();
            assert_eq!(m.extract_bits + m.margin_bits, 128);
        }
    }

    #[test]
    fn classification_of_well_known_values() {
        let one = IeeeComponents::from_f64(1.0);
        assert_eq!(one.class, FpClass::Normal);
        assert_eq!(one.biased_exponent, 1023);
        assert_eq!(one.significand, 0);

        let tiny = IeeeComponents::from_f64(f64::from_bits(1)); // 5e-324
        assert_eq!(tiny.class, FpClass::Subnormal);
        assert_eq!(tiny.biased_exponent, 0);
        assert_eq!(tiny.significand, 1);

        let neg_zero = IeeeComponents::from_f64(-0.0);
        assert_eq!(neg_zero.class, FpClass::Zero);
        assert_eq!(neg_zero.sign, Sign::Negative);

        let inf = IeeeComponents::from_f64(f64::INFINITY);
        assert_eq!(inf.class, FpClass::Infinity);
        assert_eq!(inf.biased_exponent, 2047);
    }

    #[test]
    fn bit_roundtrips() {
        for x in [0.0f64, -0.0, 1.0, -1.5, 0.1, f64::MAX, f64::MIN_POSITIVE, f64::INFINITY] {
            let c = IeeeComponents::from_f64(x);
            assert_eq!(c.to_f64().to_bits(), x.to_bits());
        }
        for x in [0.0f32, -0.0, 1.0, 3.14e12, f32::MAX, f32::MIN_POSITIVE, f32::NEG_INFINITY] {
            let c = IeeeComponents::from_f32(x);
            assert_eq!(c.to_f32().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn binary32_fields() {
        let c = IeeeComponents::from_f32(-3.14e12);
        assert_eq!(c.to_bits(), 0xD436_C5A5);
        assert_eq!(c.sign, Sign::Negative);
        assert_eq!(c.format, FloatFormat::Binary32);

        let min_normal = IeeeComponents::from_parts(Sign::Positive, 1, 0, FloatFormat::Binary32);
        assert_eq!(min_normal.to_f32(), f32::MIN_POSITIVE);
    }

    #[test]
    fn constructors_and_encodings_agree() {
        assert_eq!(
            IeeeComponents::zero(Sign::Positive, FloatFormat::Binary64).to_bits(),
            0
        );
        assert_eq!(
            IeeeComponents::zero(Sign::Negative, FloatFormat::Binary64).to_bits(),
            1u64 << 63
        );
        assert_eq!(
            IeeeComponents::infinity(Sign::Positive, FloatFormat::Binary64).to_f64(),
            f64::INFINITY
        );
        assert_eq!(
            IeeeComponents::infinity(Sign::Negative, FloatFormat::Binary32).to_f32(),
            f32::NEG_INFINITY
        );
    }

    #[test]
    #[should_panic(expected = "NaN")]
    fn nan_is_rejected() {
        IeeeComponents::from_f64(f64::NAN);
    }

    #[test]
    #[should_panic(expected = "does not fit")]
    fn oversized_significand_is_rejected() {
        IeeeComponents::from_parts(Sign::Positive, 1, 1u64 << 52, FloatFormat::Binary64);
    }
}
