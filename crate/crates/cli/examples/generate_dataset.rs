//! Writes a deterministic benchmark/difftest dataset to stdout, one
//! decimal literal per line. `data/sample.txt` at the repository root is
//! the output of `generate_dataset 1000 1`.
//!
//! Usage: cargo run -p checkless-cli --example generate_dataset -- [count] [seed]

use checkless_cli::corpus;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: u64 = args
        .next()
        .map(|s| s.parse().expect("count must be an integer"))
        .unwrap_or(1000);
    let seed: u64 = args
        .next()
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(1);

    let mut out = String::new();
    for index in 0..count {
        out.push_str(&corpus::generate(seed, index));
        out.push('\n');
    }
    print!("{out}");
}
