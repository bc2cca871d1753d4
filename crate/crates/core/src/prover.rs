//! Machine verification that the conversion's retired fallback branch is
//! unreachable.
//!
//! The conversion keeps the top `extract_bits` of the 128-bit truncated
//! product `z` and discards the low `margin_bits`. The discarded window is
//! dangerous only if it can be *all ones* while the table entry is inexact:
//! then the (always upward, always below `2 * 2^64`) truncation error could
//! carry into the kept bits. In terms of the full 192-bit product
//! `P = T * w~`, the danger pattern for a format with margin `m` is
//!
//! ```text
//! P mod 2^k  >=  2^k - 2^64        where k = 64 + m   (137 or 166)
//! ```
//!
//! over all significands `w~ < 2^64`. Checking each of the 651 table entries
//! against 2^64 significands by brute force is hopeless; number theory makes
//! it instant. Write the residue condition as: `T * w` lands within `2^64`
//! below a multiple `n * 2^k`. Dividing by `w * 2^k`,
//!
//! ```text
//! | T / 2^k  -  n / w |  <  2^64 / (w * 2^k)  <=  1 / (2 w^2)
//! ```
//!
//! whenever `2 * 64 + 1 <= k` — and by Legendre's criterion any fraction
//! that close to `T / 2^k` is, in lowest terms, a *convergent* of its
//! continued fraction. A rescaling identity (see [`rescale_identity`]) shows
//! the reduced denominator violates too, so the smallest violator, if any,
//! sits among the convergent denominators below `2^64` — a few dozen
//! candidates per entry, each checked with one multiplication.
//!
//! [`verify_all`] runs this for every table entry and both formats'
//! windows; [`brute_force_check`] is the exhaustive counterpart used to
//! validate the convergent method on downscaled instances, where both are
//! feasible and must agree witness-for-witness.

use crate::ieee::FloatFormat;
use crate::pow5::PowerTable;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

fn serialize_hex<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:X}"))
}

fn serialize_decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Continued-fraction coefficients `[a0; a1, a2, ...]` of a nonnegative
/// rational, produced by Euclid's algorithm (so automatically in canonical
/// form: the final coefficient is never 1 unless the expansion is `[a0]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub coefficients: Vec<BigUint>,
}

/// One convergent `p/q` of a continued fraction; always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
}

/// Expands `numerator / denominator` by Euclid's algorithm. The inputs need
/// not be in lowest terms; the expansion is of the reduced value.
pub fn cf_expansion(numerator: &BigUint, denominator: &BigUint) -> CFExpansion {
    assert!(!denominator.is_zero(), "denominator must be nonzero");
    let mut n = numerator.clone();
    let mut d = denominator.clone();
    let mut coefficients = Vec::new();
    while !d.is_zero() {
        let (a, r) = n.div_rem(&d);
        coefficients.push(a);
        n = d;
        d = r;
    }
    CFExpansion { coefficients }
}

impl CFExpansion {
    /// All convergents `p_i / q_i`, built by the standard recurrence
    /// `p_i = a_i * p_{i-1} + p_{i-2}` (and likewise for `q`) from the seeds
    /// `p_{-2}/q_{-2} = 0/1`, `p_{-1}/q_{-1} = 1/0`.
    pub fn convergents(&self) -> Vec<Convergent> {
        let mut out = Vec::with_capacity(self.coefficients.len());
        let (mut p_prev, mut q_prev) = (BigUint::zero(), BigUint::one());
        let (mut p_curr, mut q_curr) = (BigUint::one(), BigUint::zero());
        for a in &self.coefficients {
            let p_next = a * &p_curr + &p_prev;
            let q_next = a * &q_curr + &q_prev;
            p_prev = std::mem::replace(&mut p_curr, p_next);
            q_prev = std::mem::replace(&mut q_curr, q_next);
            out.push(Convergent {
                p: p_curr.clone(),
                q: q_curr.clone(),
            });
        }
        out
    }
}

/// Is `p/q` (not necessarily reduced) a convergent of `numerator /
/// denominator`? This is the membership test behind Legendre's criterion.
pub fn is_convergent(p: &BigUint, q: &BigUint, numerator: &BigUint, denominator: &BigUint) -> bool {
    assert!(!q.is_zero(), "a convergent needs a nonzero denominator");
    let g = p.gcd(q);
    let (pr, qr) = (p / &g, q / &g);
    cf_expansion(numerator, denominator)
        .convergents()
        .iter()
        .any(|c| c.p == pr && c.q == qr)
}

/// A significand driving a table entry's residue into the forbidden zone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueWitness {
    /// Which power of five (the table exponent `q`).
    pub q_power: i32,
    /// The violating significand.
    #[serde(serialize_with = "serialize_decimal")]
    pub denom: BigUint,
    /// `(T * denom) mod 2^k`, inside `[2^k - 2^bound_bits, 2^k)`.
    #[serde(serialize_with = "serialize_hex")]
    pub residue: BigUint,
    /// `2^k - residue`: how deep into the forbidden zone the residue lands.
    #[serde(serialize_with = "serialize_decimal")]
    pub margin_gap: BigUint,
    /// `gcd(denom, 1 + floor(T * denom / 2^k))`; 1 when the witness is
    /// already in lowest terms (always the case for the first witness).
    #[serde(serialize_with = "serialize_decimal")]
    pub gcd_d: BigUint,
}

/// Outcome of checking one table entry at one window size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    /// Table exponent of the entry checked.
    pub q: i32,
    /// Convergent denominators below the bound that were examined.
    pub convergents_examined: usize,
    /// Largest residue seen among them (hex).
    #[serde(serialize_with = "serialize_hex")]
    pub max_residue: BigUint,
    /// Denominator achieving progress furthest through the bound (decimal).
    #[serde(serialize_with = "serialize_decimal")]
    pub max_denominator: BigUint,
    /// `2^k - max_residue`: the entry's closest approach to the forbidden
    /// zone. Clear entries keep this strictly above `2^bound_bits`.
    #[serde(serialize_with = "serialize_decimal")]
    pub margin_gap: BigUint,
    /// First violating significand, or `None` when the entry is clear.
    pub witness: Option<ResidueWitness>,
}

fn make_witness(q: i32, t: &BigUint, k: u32, denom: BigUint, residue: BigUint) -> ResidueWitness {
    let n = (t * &denom >> k) + 1u8;
    let gcd_d = denom.gcd(&n);
    let margin_gap = (BigUint::one() << k) - &residue;
    ResidueWitness {
        q_power: q,
        denom,
        residue,
        margin_gap,
        gcd_d,
    }
}

/// Searches for the smallest significand `w < 2^bound_bits` with
/// `(t * w) mod 2^k >= 2^k - 2^bound_bits`, examining only the convergent
/// denominators of `t / 2^k`.
///
/// Panics unless `2 * bound_bits + 1 <= k`: that inequality puts every
/// violator inside Legendre's criterion, which is what entitles the search
/// to look at convergents only. (Downscaled experiments outside the zone
/// really do produce violators that are not convergents.)
pub fn check_power(q: i32, t: &BigUint, k: u32, bound_bits: u32) -> PowerCheck {
    assert!(
        2 * bound_bits + 1 <= k,
        "bound 2^{bound_bits} is outside the Legendre zone for k = {k}"
    );
    let bound = BigUint::one() << bound_bits;
    let modulus_mask = (BigUint::one() << k) - 1u8;
    let threshold = (BigUint::one() << k) - &bound;

    let mut examined = 0usize;
    let mut max_residue = BigUint::zero();
    let mut max_denominator = BigUint::zero();
    let mut witness = None;
    for c in cf_expansion(t, &(BigUint::one() << k)).convergents() {
        if c.q >= bound {
            break;
        }
        examined += 1;
        let residue = (t * &c.q) & &modulus_mask;
        if residue > max_residue {
            max_residue = residue.clone();
        }
        max_denominator = c.q.clone();
        if residue >= threshold {
            witness = Some(make_witness(q, t, k, c.q, residue));
            break;
        }
    }
    let margin_gap = (BigUint::one() << k) - &max_residue;
    PowerCheck {
        q,
        convergents_examined: examined,
        max_residue,
        max_denominator,
        margin_gap,
        witness,
    }
}

/// The exhaustive counterpart of [`check_power`]: tries every significand
/// `1 <= w < 2^bound_bits` in order and returns the first violator. Only
/// feasible for small bounds; exists so the convergent search can be
/// validated against ground truth on downscaled instances.
pub fn brute_force_check(q: i32, t: &BigUint, k: u32, bound_bits: u32) -> Option<ResidueWitness> {
    let modulus_mask = (BigUint::one() << k) - 1u8;
    let threshold = (BigUint::one() << k) - (BigUint::one() << bound_bits);
    let mut w = BigUint::one();
    let bound = BigUint::one() << bound_bits;
    while w < bound {
        let residue = (t * &w) & &modulus_mask;
        if residue >= threshold {
            return Some(make_witness(q, t, k, w, residue));
        }
        w += 1u8;
    }
    None
}

/// Both sides of the rescaling identity that reduces a violator to lowest
/// terms, evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaleIdentity {
    /// `gcd(w, n)` with `n = 1 + floor(a * w / 2^k)`.
    pub d: BigUint,
    /// `w / d`.
    pub reduced_w: BigUint,
    /// `(a * (w/d)) mod 2^k`, computed directly.
    pub residue_direct: BigUint,
    /// The same residue predicted by the identity
    /// `(a * (w/d)) mod 2^k = 2^k - (2^k - (a*w mod 2^k)) / d`,
    /// whose division is exact because `d` divides `n * 2^k - a * w`.
    pub residue_predicted: BigUint,
}

/// Evaluates the reduction identity underlying the convergent search: if
/// `w` nearly reaches a multiple of `2^k` from below, then so does `w / d`,
/// and *closer* — its shortfall shrinks by exactly the factor `d`. The
/// caller asserts `residue_direct == residue_predicted`; returning both
/// keeps the check honest.
pub fn rescale_identity(a: &BigUint, w: &BigUint, k: u32) -> RescaleIdentity {
    assert!(!w.is_zero(), "the identity needs a nonzero significand");
    let modulus = BigUint::one() << k;
    let n = (a * w >> k) + 1u8;
    let d = w.gcd(&n);
    let reduced_w = w / &d;

    let residue_direct = (a * &reduced_w) % &modulus;

    // shortfall = n * 2^k - a * w = 2^k - (a * w mod 2^k), in [1, 2^k].
    let shortfall = &modulus - (a * w) % &modulus;
    let (scaled, rem) = shortfall.div_rem(&d);
    assert!(rem.is_zero(), "d divides the shortfall by construction");
    // 2^k - shortfall/d, except shortfall/d = 2^k (possible only if a*w was
    // an exact multiple) wraps to 0.
    let residue_predicted = if scaled == modulus {
        BigUint::zero()
    } else {
        &modulus - scaled
    };

    RescaleIdentity {
        d,
        reduced_w,
        residue_direct,
        residue_predicted,
    }
}

/// Full audit of one format: every table entry checked at that format's
/// window, `k = 64 + margin_bits`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// `"binary64"` or `"binary32"`.
    pub format: String,
    /// Residues are taken mod `2^k`.
    pub k: u32,
    /// Significands range over `[1, 2^bound_bits)`.
    pub bound_bits: u32,
    /// Checksum of the exact table text these results describe.
    pub table_sha256: String,
    /// Number of table entries checked (always the full table).
    pub entries: usize,
    /// Total convergent denominators examined across all entries.
    pub convergents_examined: usize,
    /// `true` when no entry produced a witness: the fallback branch the
    /// conversion omits can never be needed.
    pub all_clear: bool,
    /// Entry whose residues come closest to the forbidden zone.
    pub tightest_q: i32,
    /// Bit length of that entry's margin gap (all clear needs > bound_bits).
    pub tightest_gap_bits: u64,
    pub checks: Vec<PowerCheck>,
}

impl VerificationReport {
    /// Human-readable summary (the JSON form carries the per-entry data).
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write as _;
        writeln!(
            out,
            "power-of-five audit: {}, residues mod 2^{}, significands below 2^{}",
            self.format, self.k, self.bound_bits
        )
        .unwrap();
        writeln!(out, "table sha256: {}", self.table_sha256).unwrap();
        writeln!(
            out,
            "entries checked: {}; convergent denominators examined: {}",
            self.entries, self.convergents_examined
        )
        .unwrap();
        if self.all_clear {
            writeln!(
                out,
                "result: all clear — no 64-bit significand leaves the discarded window all ones"
            )
            .unwrap();
            writeln!(
                out,
                "tightest entry: q = {}, margin gap of {} bits (anything above {} bits is safe)",
                self.tightest_q, self.tightest_gap_bits, self.bound_bits
            )
            .unwrap();
        } else {
            writeln!(out, "result: WITNESS FOUND — the fallback branch is reachable").unwrap();
            for check in self.checks.iter().filter(|c| c.witness.is_some()) {
                let w = check.witness.as_ref().unwrap();
                writeln!(
                    out,
                    "  q = {}: w = {} gives residue {:X} (gap {}, gcd {})",
                    w.q_power, w.denom, w.residue, w.margin_gap, w.gcd_d
                )
                .unwrap();
            }
        }
        out
    }
}

/// Checks every entry of `table` at `format`'s window. The window size is
/// the whole point: `k = 64 + margin_bits` covers exactly the product bits
/// whose all-ones pattern would make the truncation error observable.
pub fn verify_all(table: &PowerTable, format: FloatFormat) -> VerificationReport {
    let k = 64 + format.margin_bits();
    let bound_bits = 64u32;
    let mut checks = Vec::with_capacity(table.entries().count());
    for entry in table.entries() {
        checks.push(check_power(entry.q, &BigUint::from(entry.value), k, bound_bits));
    }
    let convergents_examined = checks.iter().map(|c| c.convergents_examined).sum();
    let all_clear = checks.iter().all(|c| c.witness.is_none());
    let tightest = checks
        .iter()
        .min_by(|a, b| a.margin_gap.cmp(&b.margin_gap))
        .expect("table is never empty");
    VerificationReport {
        format: format.name().to_string(),
        k,
        bound_bits,
        table_sha256: table.sha256_hex(),
        entries: checks.len(),
        convergents_examined,
        all_clear,
        tightest_q: tightest.q,
        tightest_gap_bits: tightest.margin_gap.bits(),
        checks,
    }
}
