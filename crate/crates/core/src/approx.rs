//! Sampling pipelines: size a sample for the requested guarantee, draw it,
//! mine it at the adjusted thresholds, and return the collection tagged with
//! the guarantee it carries.
//!
//! When a plan is clamped (the computed size reaches the dataset size),
//! sampling is skipped, the dataset itself is mined at the adjusted
//! thresholds, and the guarantee holds deterministically.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{self, Constants, Mode, SamplePlan, TaskSpec};
use crate::complexity;
use crate::corpus::{Dataset, Transaction};
use crate::error::{Error, Result};
use crate::exact;
use crate::miner::{self, PatternCollection};
use crate::sampler::{self, Sample};

/// The accuracy contract an approximate collection was produced under.
#[derive(Debug, Clone, PartialEq)]
pub struct Guarantee {
    pub epsilon: f64,
    pub delta: f64,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<usize>,
}

/// An approximate collection, the plan that sized its sample(s), and the
/// seeds used, in draw order, so a run can be replayed byte for byte.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub collection: PatternCollection,
    pub plan: SamplePlan,
    pub mode: Mode,
    pub guarantee: Guarantee,
    pub seeds: Vec<u64>,
}

/// Retry policy for the relative top-K first stage. `phi` starts at
/// `initial_factor * 2 sqrt(2) / eps` and doubles on each condition failure,
/// up to `max_retries` redraws.
#[derive(Debug, Clone, Copy)]
pub struct PhiPolicy {
    pub initial_factor: f64,
    pub max_retries: u32,
}

impl Default for PhiPolicy {
    fn default() -> Self {
        PhiPolicy {
            initial_factor: 4.0,
            max_retries: 3,
        }
    }
}

impl PhiPolicy {
    fn initial_phi(&self, epsilon: f64) -> f64 {
        self.initial_factor * (2.0 * std::f64::consts::SQRT_2 / epsilon)
    }
}

/// Uses the override when given, otherwise the single-pass d-index bound.
fn resolve_d(dataset: &Dataset, d_override: Option<usize>) -> Result<usize> {
    let d = match d_override {
        Some(d) => d,
        None => complexity::dindex_upper_bound_stream(dataset.transactions(), dataset.num_items()),
    };
    if d == 0 {
        return Err(Error::InvalidParameter(
            "the dataset's d-index bound is 0; pass an explicit d".into(),
        ));
    }
    Ok(d)
}

/// The transactions a plan mines: a drawn sample, or the dataset when clamped.
enum MiningSource {
    Drawn(Sample),
    Full,
}

impl MiningSource {
    fn obtain(dataset: &Dataset, plan: &SamplePlan, seed: u64) -> Result<MiningSource> {
        if plan.clamped {
            Ok(MiningSource::Full)
        } else {
            Ok(MiningSource::Drawn(sampler::draw(
                dataset,
                plan.sample_size,
                seed,
            )?))
        }
    }

    fn transactions<'a>(&'a self, dataset: &'a Dataset) -> &'a [Transaction] {
        match self {
            MiningSource::Drawn(s) => s.transactions(),
            MiningSource::Full => dataset.transactions(),
        }
    }
}

/// Approximate `FI(D, I, theta)` from one sample mined at the adjusted
/// threshold (`theta - eps/2` absolute, `(1 - eps/2) theta` relative).
#[allow(clippy::too_many_arguments)]
pub fn approx_fi(
    dataset: &Dataset,
    theta: f64,
    epsilon: f64,
    delta: f64,
    mode: Mode,
    constants: &Constants,
    d_override: Option<usize>,
    seed: u64,
) -> Result<ApproxResult> {
    let d = resolve_d(dataset, d_override)?;
    let spec = TaskSpec::fi(mode, theta, epsilon, delta);
    let plan = bounds::sample_size(&spec, d, constants, dataset.len() as u64)?;
    let adjusted = plan.adjusted_theta.expect("FI plans carry a threshold");
    let source = MiningSource::obtain(dataset, &plan, seed)?;
    let collection = miner::mine_fi(source.transactions(dataset), adjusted)?;
    Ok(ApproxResult {
        collection,
        plan,
        mode,
        guarantee: Guarantee {
            epsilon,
            delta,
            theta: Some(theta),
            gamma: None,
            k: None,
        },
        seeds: vec![seed],
    })
}

/// Approximate `TOPK(D, I, k)`.
///
/// Absolute mode draws one sample, reads off its K-th frequency, and re-mines
/// it at `f_S^(K) - eps/2`. Relative mode draws a first sample to lower-bound
/// the K-th frequency; if that estimate clears `2 sqrt(2) / (eps phi)` a
/// second sample is sized from it and mined, otherwise `phi` doubles and the
/// first stage is redrawn per the policy.
#[allow(clippy::too_many_arguments)]
pub fn approx_topk(
    dataset: &Dataset,
    k: usize,
    epsilon: f64,
    delta: f64,
    mode: Mode,
    constants: &Constants,
    phi_policy: PhiPolicy,
    d_override: Option<usize>,
    seed: u64,
) -> Result<ApproxResult> {
    let d = resolve_d(dataset, d_override)?;
    let spec = TaskSpec::topk(mode, k, epsilon, delta);
    spec.validate()?;
    let population = dataset.len() as u64;
    let guarantee = Guarantee {
        epsilon,
        delta,
        theta: None,
        gamma: None,
        k: Some(k),
    };
    match mode {
        Mode::Absolute => {
            let mut plan = bounds::topk_abs_plan(epsilon, delta, d, constants, population)?;
            let source = MiningSource::obtain(dataset, &plan, seed)?;
            let transactions = source.transactions(dataset);
            let top = miner::mine_topk(transactions, k)?;
            let threshold = top.fk - epsilon / 2.0;
            let collection = if threshold > 0.0 {
                miner::mine_fi(transactions, threshold)?
            } else {
                // The sample's K-th frequency sits inside the slack; fall
                // back to every itemset with positive support.
                miner::mine_fi_at_count(transactions, 1, threshold)?
            };
            plan.adjusted_theta = Some(threshold);
            Ok(ApproxResult {
                collection,
                plan,
                mode,
                guarantee,
                seeds: vec![seed],
            })
        }
        Mode::Relative => {
            let (delta1, delta2) = bounds::delta_split(delta);
            let mut phi = phi_policy.initial_phi(epsilon);
            let mut seeds = Vec::new();
            let mut seed_stream = ChaCha8Rng::seed_from_u64(seed);
            let mut attempts = 0;
            loop {
                attempts += 1;
                let stage1 =
                    bounds::topk_rel_stage1_plan(epsilon, delta1, phi, d, constants, population)?;
                let s1_seed = seed_stream.next_u64();
                seeds.push(s1_seed);
                let source1 = MiningSource::obtain(dataset, &stage1, s1_seed)?;
                let transactions1 = source1.transactions(dataset);
                let top1 = miner::mine_topk(transactions1, k)?;
                let condition_floor = 2.0 * std::f64::consts::SQRT_2 / (epsilon * phi);
                let holds = exact::ratio_ge(
                    top1.fk_support,
                    transactions1.len() as u64,
                    condition_floor,
                );
                if holds {
                    let stage2 = bounds::topk_rel_stage2_plan(
                        top1.fk, epsilon, delta2, phi, d, constants, population,
                    )?;
                    let s2_seed = seed_stream.next_u64();
                    seeds.push(s2_seed);
                    let source2 = MiningSource::obtain(dataset, &stage2, s2_seed)?;
                    let adjusted = stage2.adjusted_theta.expect("stage-2 threshold");
                    let collection =
                        miner::mine_fi(source2.transactions(dataset), adjusted)?;
                    let mut plan = stage1;
                    plan.second_stage = Some(Box::new(stage2));
                    return Ok(ApproxResult {
                        collection,
                        plan,
                        mode,
                        guarantee,
                        seeds,
                    });
                }
                if attempts > phi_policy.max_retries {
                    return Err(Error::TopkConditionFailed {
                        attempts,
                        fk: top1.fk,
                        min_phi: 2.0 * std::f64::consts::SQRT_2 / (epsilon * top1.fk),
                    });
                }
                phi *= 2.0;
            }
        }
    }
}

/// Approximate `AR(D, I, theta, gamma)` from one sample mined at
/// `((1 - eta) theta, gamma (1 - eta) / (1 + eta))`.
#[allow(clippy::too_many_arguments)]
pub fn approx_ar(
    dataset: &Dataset,
    theta: f64,
    gamma: f64,
    epsilon: f64,
    delta: f64,
    mode: Mode,
    constants: &Constants,
    d_override: Option<usize>,
    seed: u64,
) -> Result<ApproxResult> {
    let d = resolve_d(dataset, d_override)?;
    let plan = bounds::ar_plan(
        theta,
        gamma,
        epsilon,
        delta,
        mode,
        d,
        constants,
        dataset.len() as u64,
    )?;
    let adjusted_theta = plan.adjusted_theta.expect("AR plans carry a threshold");
    let adjusted_gamma = plan.adjusted_gamma.expect("AR plans carry a confidence");
    let source = MiningSource::obtain(dataset, &plan, seed)?;
    let collection = miner::mine_ar(source.transactions(dataset), adjusted_theta, adjusted_gamma)?;
    Ok(ApproxResult {
        collection,
        plan,
        mode,
        guarantee: Guarantee {
            epsilon,
            delta,
            theta: Some(theta),
            gamma: Some(gamma),
            k: None,
        },
        seeds: vec![seed],
    })
}
