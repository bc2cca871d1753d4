//! `checkless` — command-line driver for the conversion library.
//!
//! Exit codes: `0` success; `1` usage or input error; `2` the verifier
//! found a residue witness; `3` the difference test or benchmark found a
//! disagreement; `4` the embedded power table failed its integrity check.

use checkless::convert::convert_with_check;
use checkless::{oracle, pow5, prover, scanner, FloatFormat, FpClass, Token};
use checkless_cli::{bench, difftest};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "checkless",
    version,
    about = "Correctly rounded decimal-to-binary conversion: parse, prove, difference-test, benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse one decimal literal and show both encodings.
    Parse {
        /// The literal (a leading '-' is fine).
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Machine-check that the conversion's fallback guard can never fire.
    Verify {
        /// Which format's margin to audit.
        #[arg(long, value_enum, default_value_t = Target::Both)]
        target: Target,
        /// Emit the full report as JSON instead of a text summary.
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the pipeline against exact big-integer arithmetic.
    Difftest {
        /// Number of generated inputs.
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        /// Stream seed; failures replay from (seed, index).
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        /// Difference-test the lines of this file instead of generating.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Time pipeline variants over a dataset (one literal per line).
    Bench {
        dataset: PathBuf,
        /// Variants to time, comma-separated.
        #[arg(long, value_enum, value_delimiter = ',',
              default_values_t = vec![VariantArg::NoCheck, VariantArg::WithCheck])]
        variant: Vec<VariantArg>,
        /// Timing repetitions; the median is reported (minimum 3).
        #[arg(long, default_value_t = 5)]
        reps: u32,
    },
    /// Print the power table and verify it regenerates bit-for-bit.
    DumpTable {
        /// Write the dump here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    F64,
    F32,
    Both,
}

impl Target {
    fn formats(self) -> &'static [FloatFormat] {
        match self {
            Target::F64 => &[FloatFormat::Binary64],
            Target::F32 => &[FloatFormat::Binary32],
            Target::Both => &[FloatFormat::Binary64, FloatFormat::Binary32],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "no_check")]
    NoCheck,
    #[value(name = "with_check")]
    WithCheck,
    #[value(name = "oracle")]
    Oracle,
}

impl From<VariantArg> for bench::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::NoCheck => bench::Variant::NoCheck,
            VariantArg::WithCheck => bench::Variant::WithCheck,
            VariantArg::Oracle => bench::Variant::Oracle,
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe closes early
    // (`checkless dump-table | head`), like other line-oriented tools;
    // Rust's runtime ignores SIGPIPE and panics on the write error instead.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Parse { input } => cmd_parse(&input),
        Command::Verify { target, json } => cmd_verify(target, json),
        Command::Difftest {
            count,
            seed,
            corpus,
        } => cmd_difftest(count, seed, corpus.as_deref()),
        Command::Bench {
            dataset,
            variant,
            reps,
        } => cmd_bench(&dataset, &variant, reps),
        Command::DumpTable { out } => cmd_dump_table(out.as_deref()),
    };
    ExitCode::from(code)
}

fn cmd_parse(input: &str) -> u8 {
    let scanned = match scanner::scan(input.as_bytes()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if scanned.consumed != input.len() {
        eprintln!(
            "error: trailing characters start at byte {} of {:?}",
            scanned.consumed, input
        );
        return 1;
    }

    match &scanned.token {
        Token::Zero(sign) => println!("scan: zero, sign {}", sign.as_str()),
        Token::Number(number) => {
            let mut line = format!(
                "scan: sign {} w {} q {}",
                number.sign.as_str(),
                number.w,
                number.q
            );
            if number.truncated {
                let total = number.digits.as_deref().map_or(0, str::len);
                line.push_str(&format!(
                    ", truncated from {total} significant digits (exact fallback engaged)"
                ));
            }
            println!("{line}");
        }
    }

    for format in [FloatFormat::Binary64, FloatFormat::Binary32] {
        let components = checkless::parse(input, format).expect("scanned above");
        match format {
            FloatFormat::Binary64 => {
                let rendered = match components.class {
                    FpClass::Infinity => {
                        format!("{}inf", if components.sign.is_negative() { "-" } else { "" })
                    }
                    _ => oracle::format_17(components.to_f64()),
                };
                println!("binary64: 0x{:016X} = {rendered}", components.to_bits());
            }
            FloatFormat::Binary32 => {
                println!(
                    "binary32: 0x{:08X} = {:e}",
                    components.to_bits(),
                    components.to_f32()
                );
            }
        }
    }

    if let Token::Number(number) = &scanned.token {
        let (_, fired64) =
            convert_with_check(number.sign, number.w, number.q, FloatFormat::Binary64);
        let (_, fired32) =
            convert_with_check(number.sign, number.w, number.q, FloatFormat::Binary32);
        let verdict = |fired: bool| if fired { "FIRED" } else { "quiet" };
        println!("guard: binary64 {}, binary32 {}", verdict(fired64), verdict(fired32));
    }
    0
}

fn cmd_verify(target: Target, json: bool) -> u8 {
    let table = pow5::PowerTable::embedded();
    let reports: Vec<prover::VerificationReport> = target
        .formats()
        .iter()
        .map(|&format| prover::verify_all(table, format))
        .collect();
    let all_clear = reports.iter().all(|r| r.all_clear);

    if json {
        let mut object = serde_json::Map::new();
        for report in &reports {
            object.insert(
                report.format.clone(),
                serde_json::to_value(report).expect("report serializes"),
            );
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(object))
                .expect("report serializes")
        );
    } else {
        for report in &reports {
            print!("{}", report.render_text());
        }
    }

    if all_clear {
        0
    } else {
        eprintln!("verification found at least one residue witness");
        2
    }
}

fn cmd_difftest(count: u64, seed: u64, corpus_path: Option<&Path>) -> u8 {
    let report = match corpus_path {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return 1;
                }
            };
            println!("difference test over {} (corpus file)", path.display());
            difftest::run_lines(text.lines())
        }
        None => {
            println!("difference test over {count} generated inputs, seed {seed}");
            difftest::run(&difftest::DiffConfig { count, seed })
        }
    };

    println!("inputs examined:     {}", report.cases);
    println!("bitwise comparisons: {}", report.comparisons);
    println!("truncated inputs:    {}", report.truncated_inputs);
    println!("guard firings:       {}", report.check_firings);
    println!("mismatches:          {}", report.mismatches);

    if let Some(m) = &report.first_mismatch {
        eprintln!("FIRST MISMATCH");
        if let Some(index) = m.index {
            eprintln!("  index:    {index}");
        }
        eprintln!("  input:    {:?}", m.input);
        eprintln!("  format:   {}", m.format.name());
        eprintln!("  stage:    {}", m.stage);
        eprintln!("  got:      0x{:016X}", m.got_bits);
        eprintln!("  expected: 0x{:016X}", m.expected_bits);
        return 3;
    }
    0
}

fn cmd_bench(dataset: &Path, variants: &[VariantArg], reps: u32) -> u8 {
    let text = match std::fs::read_to_string(dataset) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", dataset.display());
            return 1;
        }
    };
    let lines: Vec<&str> = text.lines().collect();
    let variants: Vec<bench::Variant> = variants.iter().map(|&v| v.into()).collect();

    let results = match bench::run(&lines, &variants, reps) {
        Ok(r) => r,
        Err(e @ bench::BenchError::Disagreement { .. }) => {
            eprintln!("error: {e}");
            return 3;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    println!(
        "benchmark: {} lines, {} reps of {} pass(es) each, binary64",
        results.first().map_or(0, |r| r.lines),
        reps,
        results.first().map_or(0, |r| r.passes_per_rep)
    );
    for r in &results {
        let mut line = format!(
            "{:<11} median {:>12} ns/rep ({:>7.1} ns/line)   floor {:>7.1} ns/line   checksum 0x{:016X}",
            r.variant.name(),
            r.median_nanos,
            r.nanos_per_line(),
            r.floor_nanos_per_line(),
            r.checksum
        );
        if r.variant == bench::Variant::WithCheck {
            line.push_str(&format!("   guard firings {}", r.check_firings));
        }
        println!("{line}");
    }

    let floor = |v: bench::Variant| {
        results
            .iter()
            .find(|r| r.variant == v)
            .map(|r| r.floor_pass_nanos)
    };
    if let (Some(no_check), Some(with_check)) =
        (floor(bench::Variant::NoCheck), floor(bench::Variant::WithCheck))
    {
        // Throughput of the production setting relative to the guarded
        // one, on the steal-resistant floor statistic.
        println!(
            "no_check throughput vs with_check (floor): {:.3}x",
            with_check as f64 / no_check as f64
        );
    }
    0
}

fn cmd_dump_table(out: Option<&Path>) -> u8 {
    let embedded = pow5::PowerTable::embedded();
    let regenerated = pow5::generate_table();
    if *embedded != regenerated {
        eprintln!("table integrity failure: regenerated values differ from the embedded table");
        return 4;
    }

    let dump = embedded.dump();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &dump) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
            eprintln!("wrote {} entries to {}", embedded.entries().count(), path.display());
        }
        None => print!("{dump}"),
    }
    eprintln!("sha256: {}", embedded.sha256_hex());
    0
}
