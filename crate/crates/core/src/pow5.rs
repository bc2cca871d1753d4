//! Truncated 128-bit powers of five.
//!
//! The conversion path multiplies the decimal significand by a precomputed
//! approximation of `5^q`, one entry per decimal exponent `q` in
//! `[-342, 308]`. Each entry holds the 128 most significant bits of `5^q`,
//! normalized into `[2^127, 2^128)`:
//!
//! * `q >= 0`: truncation, `floor(5^q * 2^(128 - B))` with `B` the bit length
//!   of `5^q`. Exact (no bits discarded) for `q <= 55`.
//! * `q < 0`: the reciprocal rounded *up*, `ceil(2^(127 + B') / 5^(-q))` with
//!   `B'` the bit length of `5^(-q)`. Rounding up keeps the error one-sided
//!   in the same direction as truncation of the product.
//!
//! The decimal exponent limits come from the representable range of binary64:
//! below `10^-342` every 64-bit significand underflows to zero and above
//! `10^308` everything overflows to infinity, so the table endpoints are the
//! last exponents that still need real arithmetic.
//!
//! The table is generated by `build.rs` and embedded as static data. The same
//! generator source is compiled into this module (see `gen_core.rs`), so
//! [`generate_table`] reproduces the embedded bytes from scratch; the
//! `dump-table` CLI command and the test suite diff the two.

use num_bigint::BigUint;
use std::sync::OnceLock;

include!(concat!(env!("OUT_DIR"), "/pow5_table_data.rs"));

mod gen_core;

/// Smallest decimal exponent with a table entry.
pub const TABLE_MIN_Q: i32 = -342;
/// Largest decimal exponent with a table entry.
pub const TABLE_MAX_Q: i32 = 308;
/// Number of entries: one per exponent in `[TABLE_MIN_Q, TABLE_MAX_Q]`.
pub const TABLE_LEN: usize = (TABLE_MAX_Q - TABLE_MIN_Q + 1) as usize;

/// One table entry: the normalized 128-bit approximation of `5^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerEntry {
    pub q: i32,
    /// In `[2^127, 2^128)`; see the module docs for the rounding convention.
    pub value: u128,
}

impl PowerEntry {
    /// The `q <TAB> 32-uppercase-hex-digits` line used by `dump-table`.
    pub fn dump_line(&self) -> String {
        format!("{}\t{:032X}", self.q, self.value)
    }
}

/// The full table, indexable by decimal exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTable {
    values: Vec<u128>,
}

impl PowerTable {
    /// The table embedded at build time.
    pub fn embedded() -> &'static PowerTable {
        static EMBEDDED: OnceLock<PowerTable> = OnceLock::new();
        EMBEDDED.get_or_init(|| PowerTable {
            values: POW5_VALUES.to_vec(),
        })
    }

    /// Entry for `q`. Panics if `q` is outside `[TABLE_MIN_Q, TABLE_MAX_Q]`;
    /// callers clamp out-of-range exponents to zero or infinity first.
    pub fn lookup(&self, q: i32) -> PowerEntry {
        assert!(
            (TABLE_MIN_Q..=TABLE_MAX_Q).contains(&q),
            "exponent {q} outside table range [{TABLE_MIN_Q}, {TABLE_MAX_Q}]"
        );
        PowerEntry {
            q,
            value: self.values[(q - TABLE_MIN_Q) as usize],
        }
    }

    /// All entries in ascending `q` order.
    pub fn entries(&self) -> impl Iterator<Item = PowerEntry> + '_ {
        self.values.iter().enumerate().map(|(i, &value)| PowerEntry {
            q: TABLE_MIN_Q + i as i32,
            value,
        })
    }

    /// Canonical text dump: one `dump_line` per entry, ascending `q`.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(TABLE_LEN * 40);
        for entry in self.entries() {
            out.push_str(&entry.dump_line());
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical text dump, as lowercase hex. Identifies the
    /// exact table a verification report was produced against.
    pub fn sha256_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.dump().as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write as _;
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }
}

/// Recomputes one entry with arbitrary-precision arithmetic.
pub fn generate_entry(q: i32) -> PowerEntry {
    assert!(
        (TABLE_MIN_Q..=TABLE_MAX_Q).contains(&q),
        "exponent {q} outside table range [{TABLE_MIN_Q}, {TABLE_MAX_Q}]"
    );
    PowerEntry {
        q,
        value: gen_core::entry_u128(q),
    }
}

/// Recomputes the whole table from scratch. Equal (`==`) to
/// [`PowerTable::embedded`] unless the build is corrupt.
pub fn generate_table() -> PowerTable {
    PowerTable {
        values: (TABLE_MIN_Q..=TABLE_MAX_Q)
            .map(gen_core::entry_u128)
            .collect(),
    }
}

/// Full-precision entry value as a big integer (used by the verifier).
pub fn entry_biguint(q: i32) -> BigUint {
    gen_core::entry_biguint(q)
}

/// Direct table access for the conversion hot path.
#[inline(always)]
pub(crate) fn value_for(q: i32) -> u128 {
    debug_assert!((TABLE_MIN_Q..=TABLE_MAX_Q).contains(&q));
    POW5_VALUES[(q - TABLE_MIN_Q) as usize]
}
