//! Generates the static power-of-five table at build time.
//!
//! The table values come from `src/pow5/gen_core.rs`, which the `pow5` module
//! also compiles as a regular submodule; `checkless dump-table` and the test
//! suite regenerate the table through that path and compare it with the bytes
//! embedded here, so a stale or edited artifact cannot go unnoticed.

use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

include!("src/pow5/gen_core.rs");

const Q_MIN: i32 = -342;
const Q_MAX: i32 = 308;

fn main() {
    println!("cargo:rerun-if-changed=src/pow5/gen_core.rs");
    println!("cargo:rerun-if-changed=build.rs");

    let len = (Q_MAX - Q_MIN + 1) as usize;
    let mut out = String::new();
    writeln!(
        out,
        "/// One normalized `u128` per decimal exponent q in [{Q_MIN}, {Q_MAX}], ascending."
    )
    .unwrap();
    writeln!(out, "pub(crate) static POW5_VALUES: [u128; {len}] = [").unwrap();
    for q in Q_MIN..=Q_MAX {
        writeln!(out, "    0x{:032X},", entry_u128(q)).unwrap();
    }
    writeln!(out, "];").unwrap();

    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("pow5_table_data.rs");
    fs::write(dest, out).unwrap();
}
