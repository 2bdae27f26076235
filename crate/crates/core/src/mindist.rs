//! Minimum distance and weight distribution of linear codes.
//!
//! Exhaustive search visits one message per projective class (first nonzero
//! symbol equal to one), since scalar multiples share a weight. Each message
//! coordinate over GF(p^m) is split into `m` digits over GF(p) so that a
//! modular p-ary Gray code reaches every message with a single row addition per
//! step. In characteristic 2 codewords are bit-sliced into `m` planes of `u64`
//! words and a row addition is a run of XORs.
//!
//! Sampling uses xoshiro256++ seeded through SplitMix64 (`seed_from_u64`);
//! trials are drawn in chunks of [`SAMPLE_CHUNK`], chunk `c` using the seeded
//! generator advanced by `c` jumps of 2^128 steps, so results do not depend on
//! the thread schedule.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::LinearCode;
use crate::gf::{Fe, Field};
use crate::params::{Provenance, REPORT_SCHEMA};

pub const DEFAULT_BUDGET: u64 = 1 << 24;
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const SAMPLE_CHUNK: u64 = 256;
/// Environment variable overriding the exhaustive-search budget.
pub const BUDGET_ENV: &str = "DLCODES_BUDGET";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinDistError {
    #[error("exhaustive search needs {needed} codewords, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("number of trials must be at least 1")]
    InvalidTrials,
    #[error("the code has dimension zero")]
    EmptyCode,
}

pub type Result<T> = std::result::Result<T, MinDistError>;

/// Budget from [`BUDGET_ENV`], falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Sampled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub bound: i128,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub schema: &'static str,
    /// Applies to every number in the report.
    pub provenance: Provenance,
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub field: String,
    /// Exact minimum distance when exhaustive; an upper bound on it when sampled.
    pub min_weight: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<BTreeMap<usize, u128>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified_bound: Option<BoundCheck>,
}

impl WeightReport {
    /// Records whether every examined weight is at least `bound`.
    pub fn with_bound(mut self, bound: i128) -> WeightReport {
        self.verified_bound = Some(BoundCheck { bound, passed: self.min_weight as i128 >= bound });
        self
    }
}

/// `(q^k - 1) / (q - 1)`, saturating.
pub fn projective_message_count(q: u64, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..k {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(q as u128);
    }
    total
}

/// Rows of the generator expanded over GF(p): row `i*m + l` is `alpha^l * g_i`.
fn expanded_rows(code: &LinearCode) -> Vec<Vec<Fe>> {
    let field = code.field();
    let gen = code.generator();
    let m = field.m() as usize;
    let mut out = Vec::with_capacity(code.k() * m);
    for i in 0..code.k() {
        for l in 0..m {
            let mut coeffs = vec![0u32; m];
            coeffs[l] = 1;
            let basis = field.from_coeffs(&coeffs).expect("basis element");
            out.push(gen.row(i).iter().map(|&x| field.mul(basis, x)).collect());
        }
    }
    out
}

/// Bit-sliced vectors over GF(2^m): plane `a` holds bit `a` of every coordinate.
#[derive(Clone)]
struct Packed {
    planes: usize,
    words: usize,
    data: Vec<u64>,
}

impl Packed {
    fn zero(planes: usize, n: usize) -> Packed {
        let words = n.div_ceil(64);
        Packed { planes, words, data: vec![0; planes * words] }
    }

    fn from_row(row: &[Fe], planes: usize) -> Packed {
        let mut p = Packed::zero(planes, row.len());
        for (c, x) in row.iter().enumerate() {
            for a in 0..planes {
                if (x.0 >> a) & 1 == 1 {
                    p.data[a * p.words + c / 64] |= 1 << (c % 64);
                }
            }
        }
        p
    }

    #[inline]
    fn xor_assign(&mut self, other: &Packed) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x ^= y;
        }
    }

    #[inline]
    fn weight(&self) -> usize {
        (0..self.words)
            .map(|w| {
                let mut acc = 0u64;
                for a in 0..self.planes {
                    acc |= self.data[a * self.words + w];
                }
                acc.count_ones() as usize
            })
            .sum()
    }
}

/// Per-task accumulator: minimum weight and, optionally, weight counts.
struct Tally {
    min: usize,
    counts: Option<Vec<u128>>,
}

impl Tally {
    fn new(n: usize, distribution: bool) -> Tally {
        Tally { min: usize::MAX, counts: distribution.then(|| vec![0; n + 1]) }
    }

    #[inline]
    fn record(&mut self, w: usize) {
        self.min = self.min.min(w);
        if let Some(c) = &mut self.counts {
            c[w] += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.min = self.min.min(other.min);
        if let (Some(a), Some(b)) = (&mut self.counts, other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }
}

/// A block of the projective message space: messages with pivot coordinate
/// `pivot` equal to one, earlier coordinates zero, and the top `prefix.len()`
/// free GF(p) digits fixed.
struct Task {
    pivot: usize,
    prefix: Vec<u32>,
}

fn make_tasks(k: usize, m: usize, p: u32) -> Vec<Task> {
    let mut tasks = Vec::new();
    for pivot in 0..k {
        let free = (k - 1 - pivot) * m;
        let fixed = free.min(if p == 2 { 6 } else { 3 });
        let count = (p as usize).pow(fixed as u32);
        for mut v in 0..count {
            let prefix = (0..fixed)
                .map(|_| {
                    let d = (v % p as usize) as u32;
                    v /= p as usize;
                    d
                })
                .collect();
            tasks.push(Task { pivot, prefix });
        }
    }
    tasks
}

/// Digit indices (into the expanded rows) of the free digits for a pivot;
/// the last `prefix.len()` of them are fixed by the task.
fn free_digits(pivot: usize, k: usize, m: usize) -> Vec<usize> {
    ((pivot + 1) * m..k * m).collect()
}

fn run_task_binary(task: &Task, rows: &[Packed], k: usize, m: usize, n: usize, tally: &mut Tally) {
    let digits = free_digits(task.pivot, k, m);
    let (inner, top) = digits.split_at(digits.len() - task.prefix.len());
    let mut cw = rows[task.pivot * m].clone();
    for (&d, &v) in top.iter().zip(&task.prefix) {
        if v == 1 {
            cw.xor_assign(&rows[d]);
        }
    }
    tally.record(cw.weight());
    let steps: u64 = 1u64 << inner.len();
    for step in 1..steps {
        // binary reflected Gray code: flip the lowest set bit position of `step`
        let j = step.trailing_zeros() as usize;
        cw.xor_assign(&rows[inner[j]]);
        tally.record(cw.weight());
    }
    debug_assert!(n >= cw.weight());
}

fn run_task_generic(
    task: &Task,
    field: &Field,
    rows: &[Vec<Fe>],
    k: usize,
    m: usize,
    tally: &mut Tally,
) {
    let p = field.p();
    let digits = free_digits(task.pivot, k, m);
    let (inner, top) = digits.split_at(digits.len() - task.prefix.len());
    let mut cw = rows[task.pivot * m].clone();
    for (&d, &v) in top.iter().zip(&task.prefix) {
        for _ in 0..v {
            for (c, &r) in cw.iter_mut().zip(&rows[d]) {
                *c = field.add(*c, r);
            }
        }
    }
    let mut weight = cw.iter().filter(|x| !x.is_zero()).count();
    tally.record(weight);
    // modular p-ary Gray code: on counter increment with carry into digit j,
    // Gray digit j increases by one, i.e. row j is added once
    let mut counter = vec![0u32; inner.len()];
    while let Some(j) = counter.iter().position(|&d| d != p - 1) {
        for d in &mut counter[..j] {
            *d = 0;
        }
        counter[j] += 1;
        for (c, &r) in cw.iter_mut().zip(&rows[inner[j]]) {
            if r.is_zero() {
                continue;
            }
            let before = c.is_zero();
            *c = field.add(*c, r);
            match (before, c.is_zero()) {
                (true, false) => weight += 1,
                (false, true) => weight -= 1,
                _ => {}
            }
        }
        tally.record(weight);
    }
}

/// Exact minimum distance by enumerating projective message representatives.
pub fn exact_min_distance(code: &LinearCode, budget: u64, distribution: bool) -> Result<WeightReport> {
    let k = code.k();
    if k == 0 {
        return Err(MinDistError::EmptyCode);
    }
    let field = code.field();
    let q = field.q() as u64;
    let needed = projective_message_count(q, k);
    if needed > budget as u128 {
        return Err(MinDistError::BudgetExceeded { needed, budget });
    }
    let n = code.n();
    let m = field.m() as usize;
    let rows = expanded_rows(code);
    let tasks = make_tasks(k, m, field.p());
    let tally = if field.p() == 2 {
        let packed: Vec<Packed> = rows.iter().map(|r| Packed::from_row(r, m)).collect();
        tasks
            .par_iter()
            .map(|t| {
                let mut tally = Tally::new(n, distribution);
                run_task_binary(t, &packed, k, m, n, &mut tally);
                tally
            })
            .reduce(|| Tally::new(n, distribution), Tally::merge)
    } else {
        tasks
            .par_iter()
            .map(|t| {
                let mut tally = Tally::new(n, distribution);
                run_task_generic(t, field, &rows, k, m, &mut tally);
                tally
            })
            .reduce(|| Tally::new(n, distribution), Tally::merge)
    };
    let distribution = tally.counts.map(|counts| {
        let scale = (q - 1) as u128;
        let mut map: BTreeMap<usize, u128> = counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(w, c)| (w, c * scale))
            .collect();
        *map.entry(0).or_insert(0) += 1;
        map
    });
    Ok(WeightReport {
        schema: REPORT_SCHEMA,
        provenance: Provenance::Constructed,
        method: Method::Exhaustive,
        n,
        k,
        field: field.descriptor(),
        min_weight: tally.min,
        distribution,
        samples: None,
        seed: None,
        verified_bound: None,
    })
}

/// Multiplication by a fixed scalar on bit-sliced GF(2^m) vectors:
/// output plane `a` is the XOR of the input planes `b` with `mask[a] >> b & 1`.
fn scalar_masks(field: &Field, c: Fe) -> Vec<u32> {
    let m = field.m();
    (0..m)
        .map(|a| {
            (0..m).fold(0u32, |mask, b| {
                let prod = field.mul(c, Fe(1 << b));
                mask | (((prod.0 >> a) & 1) << b)
            })
        })
        .collect()
}

fn random_message(rng: &mut Xoshiro256PlusPlus, q: u32, k: usize) -> Vec<Fe> {
    loop {
        let msg: Vec<Fe> = (0..k).map(|_| Fe(rng.gen_range(0..q))).collect();
        if msg.iter().any(|x| !x.is_zero()) {
            return msg;
        }
    }
}

/// Minimum weight over `trials` pseudo-random nonzero codewords: an upper bound
/// on the minimum distance.
pub fn sampled_min_weight(code: &LinearCode, trials: u64, seed: u64) -> Result<WeightReport> {
    if trials == 0 {
        return Err(MinDistError::InvalidTrials);
    }
    let k = code.k();
    if k == 0 {
        return Err(MinDistError::EmptyCode);
    }
    let field = code.field();
    let q = field.q();
    let n = code.n();
    let m = field.m() as usize;
    let chunks = trials.div_ceil(SAMPLE_CHUNK);
    let binary = field.p() == 2;
    let packed: Vec<Packed> = if binary {
        code.generator().row_iter().map(|r| Packed::from_row(r, m)).collect()
    } else {
        Vec::new()
    };
    let masks: Vec<Vec<u32>> = if binary {
        field.elements().map(|c| scalar_masks(field, c)).collect()
    } else {
        Vec::new()
    };

    let min = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
            for _ in 0..c {
                rng.jump();
            }
            let count = SAMPLE_CHUNK.min(trials - c * SAMPLE_CHUNK);
            let mut best = usize::MAX;
            for _ in 0..count {
                let msg = random_message(&mut rng, q, k);
                let w = if binary {
                    let mut cw = Packed::zero(m, n);
                    for (row, &coef) in packed.iter().zip(&msg) {
                        if coef.is_zero() {
                            continue;
                        }
                        let mask = &masks[coef.0 as usize];
                        for (a, &bits) in mask.iter().enumerate() {
                            for b in 0..m {
                                if (bits >> b) & 1 == 1 {
                                    let dst = &mut cw.data[a * cw.words..(a + 1) * cw.words];
                                    let src = &row.data[b * row.words..(b + 1) * row.words];
                                    for (x, y) in dst.iter_mut().zip(src) {
                                        *x ^= y;
                                    }
                                }
                            }
                        }
                    }
                    cw.weight()
                } else {
                    code.encode(&msg).iter().filter(|x| !x.is_zero()).count()
                };
                best = best.min(w);
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);

    Ok(WeightReport {
        schema: REPORT_SCHEMA,
        provenance: Provenance::Constructed,
        method: Method::Sampled,
        n,
        k,
        field: field.descriptor(),
        min_weight: min,
        distribution: None,
        samples: Some(trials),
        seed: Some(seed),
        verified_bound: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub passed: bool,
    pub bound: i128,
    pub evidence: WeightReport,
}

/// Checks `d >= d_lower`: exactly when the message space fits the budget,
/// otherwise by searching for a falsifying sampled codeword.
pub fn verify_bound(code: &LinearCode, d_lower: i128, budget: u64, trials: u64, seed: u64) -> Result<BoundVerdict> {
    let q = code.field().q() as u64;
    let report = if projective_message_count(q, code.k()) <= budget as u128 {
        exact_min_distance(code, budget, false)?
    } else {
        sampled_min_weight(code, trials, seed)?
    };
    let report = report.with_bound(d_lower);
    Ok(BoundVerdict {
        passed: report.verified_bound.map(|b| b.passed).unwrap_or(false),
        bound: d_lower,
        evidence: report,
    })
}
