//! Three-way difference testing of the conversion pipeline.
//!
//! For every input string, two independent implementations must agree at
//! two levels:
//!
//! 1. **Pipeline level** — `checkless::parse` (scanner, fast path, table
//!    path, truncation fallback) against the big-integer reference
//!    `oracle::exact_parse`, for both formats.
//! 2. **Table-path level** — when the scanner yields a number, the
//!    instrumented `convert_with_check` (which skips the native fast path,
//!    so *every* input exercises the 128-bit product) against
//!    `oracle::exact_convert` applied to the same `(w, q)` pair. For
//!    truncated inputs both sides see the 19-digit prefix value, so the
//!    comparison stays exact.
//!
//! Along the way the engine counts how often the retired fallback guard
//! would have fired. The library's central claim is that this count is
//! zero for every input, not just for the proof's table entries.

use crate::corpus;
use checkless::convert::convert_with_check;
use checkless::scanner::scan;
use checkless::{oracle, FloatFormat, Token};
use num_bigint::BigUint;

/// How to drive [`run`].
#[derive(Debug, Clone, Copy)]
pub struct DiffConfig {
    /// Number of generated inputs.
    pub count: u64,
    /// Stream seed; a failure is reproducible from `(seed, index)`.
    pub seed: u64,
}

/// First disagreement found, with everything needed to replay it.
#[derive(Debug, Clone)]
pub struct Mismatch {
    /// Index in the generated stream, if the input came from a stream.
    pub index: Option<u64>,
    pub input: String,
    pub format: FloatFormat,
    /// Which comparison failed: `"pipeline"` or `"table-path"`.
    pub stage: &'static str,
    pub got_bits: u64,
    pub expected_bits: u64,
}

/// Outcome of a difference-test run.
#[derive(Debug, Clone, Default)]
pub struct DiffReport {
    /// Inputs examined.
    pub cases: u64,
    /// Individual bit-for-bit equalities checked (several per input).
    pub comparisons: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<Mismatch>,
    /// Times the retired guard reported it would have fired.
    pub check_firings: u64,
    /// Inputs whose significant digits exceeded the scanner's window.
    pub truncated_inputs: u64,
}

impl DiffReport {
    fn record(&mut self, mismatch: Mismatch) {
        self.mismatches += 1;
        if self.first_mismatch.is_none() {
            self.first_mismatch = Some(mismatch);
        }
    }
}

/// Difference-tests `count` generated inputs.
pub fn run(config: &DiffConfig) -> DiffReport {
    let mut report = DiffReport::default();
    for index in 0..config.count {
        let input = corpus::generate(config.seed, index);
        check_one(Some(index), &input, &mut report);
    }
    report
}

/// Difference-tests caller-supplied lines (e.g. a corpus file). Lines that
/// are not complete literals are skipped — the corpus format carries one
/// literal per line and blank lines are permitted.
pub fn run_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> DiffReport {
    let mut report = DiffReport::default();
    for (index, line) in lines.into_iter().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        check_one(Some(index as u64), line, &mut report);
    }
    report
}

/// Runs every comparison for one input.
pub fn check_one(index: Option<u64>, input: &str, report: &mut DiffReport) {
    report.cases += 1;

    // The reference decomposition is computed once and reused for both
    // formats; `None` means the reference grammar rejects the input.
    let decomposed = oracle::decompose(input);

    for format in [FloatFormat::Binary64, FloatFormat::Binary32] {
        let got = checkless::parse(input, format);
        report.comparisons += 1;
        match (&got, &decomposed) {
            (Ok(components), Some((sign, value, q10))) => {
                let expected = oracle::exact_convert(*sign, value, *q10, format);
                if *components != expected {
                    report.record(Mismatch {
                        index,
                        input: input.to_string(),
                        format,
                        stage: "pipeline",
                        got_bits: components.to_bits(),
                        expected_bits: expected.to_bits(),
                    });
                }
            }
            (Err(_), None) => {} // both reject: agreement
            (Ok(components), None) => {
                report.record(Mismatch {
                    index,
                    input: input.to_string(),
                    format,
                    stage: "pipeline",
                    got_bits: components.to_bits(),
                    expected_bits: u64::MAX,
                });
            }
            (Err(_), Some((sign, value, q10))) => {
                let expected = oracle::exact_convert(*sign, value, *q10, format);
                report.record(Mismatch {
                    index,
                    input: input.to_string(),
                    format,
                    stage: "pipeline",
                    got_bits: u64::MAX,
                    expected_bits: expected.to_bits(),
                });
            }
        }
    }

    // Table-path comparison on the scanner's (w, q): forces the 128-bit
    // product for every number, fast path or not, truncated or not.
    if let Ok(scanned) = scan(input.as_bytes()) {
        if let Token::Number(number) = &scanned.token {
            if number.truncated {
                report.truncated_inputs += 1;
            }
            let prefix_value = BigUint::from(number.w);
            for format in [FloatFormat::Binary64, FloatFormat::Binary32] {
                let (components, fired) =
                    convert_with_check(number.sign, number.w, number.q, format);
                if fired {
                    report.check_firings += 1;
                }
                let expected =
                    oracle::exact_convert(number.sign, &prefix_value, i64::from(number.q), format);
                report.comparisons += 1;
                if components != expected {
                    report.record(Mismatch {
                        index,
                        input: input.to_string(),
                        format,
                        stage: "table-path",
                        got_bits: components.to_bits(),
                        expected_bits: expected.to_bits(),
                    });
                }
            }
        }
    }
}
