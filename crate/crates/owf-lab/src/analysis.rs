//! Empirical harness: exhaustive preimage scans, digest census, bit-flip
//! diffusion statistics, and the branching-vs-search cost profile.
//!
//! Every report serializes to JSON under the `owf-lab/1` schema with
//! naturals rendered as decimal strings and digests as padded lowercase hex.
//! Scans partition their range into per-worker sub-ranges and merge in range
//! order, so a report is byte-identical no matter how many workers ran it.
//! Randomized measurements record the generator and seed they used.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::composition::{self, EnumOrder};
use crate::error::Error;
use crate::numerics::{bit_length, format_natural, Base, Natural};
use crate::owf::{self, OwfOutput, OwfParams};
use crate::trajectory;

/// Schema identifier stamped on every JSON report.
pub const SCHEMA: &str = "owf-lab/1";

/// Generator identifier recorded in randomized reports: ChaCha with 8
/// rounds, seeded from a single u64.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Default cap on scan size, in evaluations.
pub const DEFAULT_EVALUATION_BUDGET: u64 = 1 << 24;

/// Cost profiling refuses iteration counts above this; the search side is
/// exponential in r.
pub const MAX_PROFILE_ROUNDS: u32 = 16;

/// The census keeps a dense bucket per digest, so it refuses r above this.
pub const MAX_CENSUS_ROUNDS: u32 = 20;

const PROGRESS_STRIDE: u64 = 1 << 16;

/// Worker count and evaluation budget for a scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub jobs: usize,
    pub budget: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            jobs: 1,
            budget: DEFAULT_EVALUATION_BUDGET,
        }
    }
}

/// Called with (evaluations done, total) as a scan advances.
pub type ProgressFn = dyn Fn(u64, u64) + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub n: u32,
    pub r: u32,
}

impl From<&OwfParams> for ParamsSummary {
    fn from(p: &OwfParams) -> Self {
        ParamsSummary {
            n: p.input_bits(),
            r: p.rounds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainInterval {
    pub lo: String,
    pub hi: String,
}

/// Everything an exhaustive preimage scan found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageReport {
    pub schema: String,
    pub params: ParamsSummary,
    pub target: String,
    pub domain: DomainInterval,
    pub preimages: Vec<String>,
    pub evaluations: u64,
}

/// Digest histogram over a scanned range: `counts[d]` preimages landed on
/// digest `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema: String,
    pub params: ParamsSummary,
    pub domain: DomainInterval,
    pub counts: Vec<u64>,
    pub evaluations: u64,
}

/// Output-bit flip statistics under single-input-bit perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvalancheReport {
    pub schema: String,
    pub params: ParamsSummary,
    pub rng: String,
    pub seed: u64,
    pub samples: u64,
    pub control: bool,
    pub mean_flip_ratio: f64,
    pub per_bit_flip_counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub r: u32,
    pub samples: u64,
    pub branching_ops: u64,
    pub search_tries_mean: f64,
    pub path_count: String,
}

/// Operation counts for the branching iteration next to the exhaustive
/// search, across iteration counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostProfile {
    pub schema: String,
    pub rng: String,
    pub seed: u64,
    pub sampling: String,
    pub order: String,
    pub rows: Vec<CostRow>,
}

/// How [`cost_profile`] draws inputs for each iteration count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostSampling {
    /// Every residue x in [1, 2^r]; deterministic and seed-independent.
    ExhaustiveResidues,
    /// Seeded uniform draws from [1, 2^r].
    Random { samples_per_r: u64 },
}

macro_rules! impl_to_json {
    ($($ty:ty),+) => {$(
        impl $ty {
            /// Render the report as pretty-printed JSON.
            pub fn to_json(&self) -> String {
                serde_json::to_string_pretty(self).expect("report types always serialize")
            }
        }
    )+};
}

impl_to_json!(PreimageReport, CensusReport, AvalancheReport, CostProfile);

fn interval(lo: &Natural, hi: &Natural) -> DomainInterval {
    DomainInterval {
        lo: format_natural(lo, Base::Decimal),
        hi: format_natural(hi, Base::Decimal),
    }
}

/// Validate `1 <= lo <= hi < 2^n` and the evaluation budget; returns the
/// range size.
fn check_range(params: &OwfParams, lo: &Natural, hi: &Natural, budget: u64) -> Result<u64, Error> {
    for bound in [lo, hi] {
        if bound.is_zero() || bit_length(bound) > params.input_bits() as u64 {
            return Err(Error::RangeOutOfDomain {
                bound: format_natural(bound, Base::Decimal),
                n: params.input_bits(),
            });
        }
    }
    if lo > hi {
        return Err(Error::EmptyRange {
            lo: format_natural(lo, Base::Decimal),
            hi: format_natural(hi, Base::Decimal),
        });
    }
    let count = hi - lo + 1u32;
    if count > Natural::from(budget) {
        return Err(Error::BudgetExceeded {
            required: count.to_u64().unwrap_or(u64::MAX),
            budget,
        });
    }
    Ok(count.to_u64().expect("count fits after budget check"))
}

/// Split `total` items into at most `parts` contiguous chunks, sizes
/// differing by at most one. Returns (offset, len) pairs.
fn chunk_bounds(total: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut chunks = Vec::with_capacity(parts as usize);
    let mut offset = 0;
    for i in 0..parts {
        let len = base + u64::from(i < extra);
        if len > 0 {
            chunks.push((offset, len));
            offset += len;
        }
    }
    chunks
}

/// Run `per_item` over every x in [lo, lo+total), partitioned across
/// workers; partial results come back in sub-range order.
fn scan_partitioned<T: Send>(
    lo: &Natural,
    total: u64,
    jobs: usize,
    progress: Option<&ProgressFn>,
    per_item: impl Fn(&Natural, &mut T) + Sync,
    make_partial: impl Fn() -> T + Sync,
) -> Vec<T> {
    let chunks = chunk_bounds(total, jobs);
    let done = AtomicU64::new(0);
    thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&(offset, len)| {
                let per_item = &per_item;
                let make_partial = &make_partial;
                let done = &done;
                scope.spawn(move || {
                    let mut partial = make_partial();
                    let mut x = lo + offset;
                    let mut since_report = 0u64;
                    for _ in 0..len {
                        per_item(&x, &mut partial);
                        x += 1u32;
                        since_report += 1;
                        if since_report == PROGRESS_STRIDE {
                            let so_far =
                                done.fetch_add(since_report, Ordering::Relaxed) + since_report;
                            if let Some(cb) = progress {
                                cb(so_far, total);
                            }
                            since_report = 0;
                        }
                    }
                    let so_far = done.fetch_add(since_report, Ordering::Relaxed) + since_report;
                    if let Some(cb) = progress {
                        cb(so_far, total);
                    }
                    partial
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    })
}

/// Exhaustively evaluate every x in [lo, hi] and report the ones digesting
/// to `target`, in ascending order.
pub fn preimage_search(
    target: &OwfOutput,
    params: &OwfParams,
    lo: &Natural,
    hi: &Natural,
    options: &ScanOptions,
    progress: Option<&ProgressFn>,
) -> Result<PreimageReport, Error> {
    if target.width() != params.rounds() {
        return Err(Error::WidthMismatch {
            expected: params.rounds(),
            actual: target.width(),
        });
    }
    let total = check_range(params, lo, hi, options.budget)?;
    let partials = scan_partitioned(
        lo,
        total,
        options.jobs,
        progress,
        |x, found: &mut Vec<Natural>| {
            let out = owf::evaluate(x, params).expect("range was domain-checked");
            if out.digest() == target.digest() {
                found.push(x.clone());
            }
        },
        Vec::new,
    );
    let preimages = partials
        .into_iter()
        .flatten()
        .map(|x| format_natural(&x, Base::Decimal))
        .collect();
    Ok(PreimageReport {
        schema: SCHEMA.to_string(),
        params: params.into(),
        target: target.to_hex(),
        domain: interval(lo, hi),
        preimages,
        evaluations: total,
    })
}

/// Full digest histogram over [lo, hi]: one dense bucket per possible
/// digest, counts summing to the range size.
pub fn collision_census(
    params: &OwfParams,
    lo: &Natural,
    hi: &Natural,
    options: &ScanOptions,
    progress: Option<&ProgressFn>,
) -> Result<CensusReport, Error> {
    if params.rounds() > MAX_CENSUS_ROUNDS {
        return Err(Error::BudgetExceeded {
            required: 1u64 << params.rounds().min(63),
            budget: 1u64 << MAX_CENSUS_ROUNDS,
        });
    }
    let total = check_range(params, lo, hi, options.budget)?;
    let buckets = 1usize << params.rounds();
    let partials = scan_partitioned(
        lo,
        total,
        options.jobs,
        progress,
        |x, counts: &mut Vec<u64>| {
            let out = owf::evaluate(x, params).expect("range was domain-checked");
            let digest = out.digest().to_u64().expect("digest fits r <= 20 bits");
            counts[digest as usize] += 1;
        },
        || vec![0u64; buckets],
    );
    let mut counts = vec![0u64; buckets];
    for partial in partials {
        for (bucket, count) in counts.iter_mut().zip(partial) {
            *bucket += count;
        }
    }
    Ok(CensusReport {
        schema: SCHEMA.to_string(),
        params: params.into(),
        domain: interval(lo, hi),
        counts,
        evaluations: total,
    })
}

/// Uniform natural in [1, 2^bits).
fn random_positive_below(rng: &mut ChaCha8Rng, bits: u32) -> Natural {
    let bytes = (bits as usize).div_ceil(8);
    let spare = (bytes * 8) as u32 - bits;
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill_bytes(&mut buf);
        buf[bytes - 1] &= 0xffu8 >> spare;
        let value = Natural::from_bytes_le(&buf);
        if !value.is_zero() {
            return value;
        }
    }
}

/// Flip one uniformly chosen input bit per sample and count which digest
/// bits change. `control` skips the flip, pinning the ratio at zero.
pub fn avalanche(
    params: &OwfParams,
    samples: u64,
    seed: u64,
    control: bool,
) -> Result<AvalancheReport, Error> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if !control && params.input_bits() < 2 {
        return Err(Error::AvalancheDomain);
    }
    let r = params.rounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_bit = vec![0u64; r as usize];
    let mut total_flipped = 0u64;
    for _ in 0..samples {
        let (x, flipped) = loop {
            let x = random_positive_below(&mut rng, params.input_bits());
            if control {
                break (x.clone(), x);
            }
            let bit = rng.gen_range(0..params.input_bits() as u64);
            let flipped = &x ^ (Natural::one() << bit);
            if !flipped.is_zero() {
                break (x, flipped);
            }
            // x was the lone set bit; redraw the sample.
        };
        let a = owf::evaluate(&x, params)?;
        let b = owf::evaluate(&flipped, params)?;
        let diff = a.digest() ^ b.digest();
        total_flipped += diff.count_ones();
        for i in 0..r as u64 {
            if diff.bit(i) {
                per_bit[i as usize] += 1;
            }
        }
    }
    Ok(AvalancheReport {
        schema: SCHEMA.to_string(),
        params: params.into(),
        rng: RNG_ALGORITHM.to_string(),
        seed,
        samples,
        control,
        mean_flip_ratio: total_flipped as f64 / (samples * r as u64) as f64,
        per_bit_flip_counts: per_bit,
    })
}

/// Measure, for each iteration count, the branching algorithm's step count
/// and the exhaustive search's mean tries over inputs from [1, 2^r].
pub fn cost_profile(
    r_values: &[u32],
    sampling: CostSampling,
    seed: u64,
    jobs: usize,
) -> Result<CostProfile, Error> {
    let order = EnumOrder::Lexicographic;
    let mut rows = Vec::with_capacity(r_values.len());
    for &r in r_values {
        if r == 0 {
            return Err(Error::ZeroIterations);
        }
        if r > MAX_PROFILE_ROUNDS {
            return Err(Error::ProfileBound {
                rounds: r,
                max: MAX_PROFILE_ROUNDS,
            });
        }
        let (samples, steps_sum, tries_sum) = match sampling {
            CostSampling::ExhaustiveResidues => {
                let total = 1u64 << r;
                let one = Natural::one();
                let partials = scan_partitioned(
                    &one,
                    total,
                    jobs,
                    None,
                    |x, sums: &mut (u64, u64)| {
                        let (steps, tries) = measure_one(x, r, order);
                        sums.0 += steps;
                        sums.1 += tries;
                    },
                    || (0u64, 0u64),
                );
                let (steps, tries) = partials
                    .into_iter()
                    .fold((0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
                (total, steps, tries)
            }
            CostSampling::Random { samples_per_r } => {
                if samples_per_r == 0 {
                    return Err(Error::ZeroSamples);
                }
                // Per-r generator keeps rows independent of list order.
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(r));
                let mut steps_sum = 0u64;
                let mut tries_sum = 0u64;
                for _ in 0..samples_per_r {
                    let x = Natural::from(rng.gen_range(1u64..=1 << r));
                    let (steps, tries) = measure_one(&x, r, order);
                    steps_sum += steps;
                    tries_sum += tries;
                }
                (samples_per_r, steps_sum, tries_sum)
            }
        };
        debug_assert_eq!(steps_sum % samples, 0);
        rows.push(CostRow {
            r,
            samples,
            branching_ops: steps_sum / samples,
            search_tries_mean: tries_sum as f64 / samples as f64,
            path_count: format_natural(&(Natural::one() << r), Base::Decimal),
        });
    }
    Ok(CostProfile {
        schema: SCHEMA.to_string(),
        rng: RNG_ALGORITHM.to_string(),
        seed,
        sampling: match sampling {
            CostSampling::ExhaustiveResidues => "exhaustive".to_string(),
            CostSampling::Random { .. } => "random".to_string(),
        },
        order: order.name().to_string(),
        rows,
    })
}

/// One measurement: branching step count and search tries for the same x.
fn measure_one(x: &Natural, r: u32, order: EnumOrder) -> (u64, u64) {
    let run = trajectory::run(x, r).expect("x >= 1 by construction");
    let report = composition::search(x, r, order).expect("x >= 1 by construction");
    (run.path.len() as u64, report.tries)
}
