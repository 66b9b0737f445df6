//! Seeded simulation of families, used as an independent check on the
//! exact results.
//!
//! Family `i` draws its randomness from ChaCha8 keyed by the seed, on
//! stream `i`, so a run is reproducible bit for bit no matter how the
//! families are split across worker threads. Categorical draws compare a
//! uniform 64-bit word against `floor(cdf * 2^64)` computed exactly from
//! the rational cell probabilities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::inference::{conditional, probability, EventExpr, InferenceError};
use crate::ratfunc::{to_decimal, RatFuncError, Rational};
use crate::samplespace::{
    build_distribution, Child, CountTable, FamilyOutcome, NameClass, NumericTable, Regime,
    RegimeKind, SampleSpaceError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("n_families must be at least 1")]
    NoFamilies,
    #[error("no simulated family satisfied the condition `{0}`")]
    NoTrials(String),
    #[error("the condition `{event}` has probability zero at r = {r}")]
    ImpossibleCondition { event: String, r: String },
    #[error(transparent)]
    SampleSpace(#[from] SampleSpaceError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Arithmetic(#[from] RatFuncError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Two independent children, or the unique-name joint table drawn
    /// directly.
    Direct,
    /// Shared-name families with duplicate-name families discarded and
    /// redrawn. This is a different model from `Direct` under unique names.
    Reject,
}

impl std::str::FromStr for SamplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(SamplingMode::Direct),
            "reject" => Ok(SamplingMode::Reject),
            other => Err(format!("unknown mode `{other}` (expected direct or reject)")),
        }
    }
}

fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    #[serde(serialize_with = "serialize_regime")]
    pub regime: Regime,
    #[serde(serialize_with = "serialize_rational")]
    pub r: Rational,
    pub n_families: u64,
    pub seed: u64,
    pub mode: SamplingMode,
}

fn serialize_regime<S: Serializer>(r: &Regime, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(r.kind.code())
}

impl SimConfig {
    pub fn new(regime: Regime, r: Rational, n_families: u64, seed: u64) -> Result<Self, SimError> {
        if n_families == 0 {
            return Err(SimError::NoFamilies);
        }
        regime.check_admissible(&r)?;
        Ok(SimConfig {
            regime,
            r,
            n_families,
            seed,
            mode: SamplingMode::Direct,
        })
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Inverse-CDF table over `k` categories.
#[derive(Clone, Debug)]
struct Categorical {
    /// `floor(cdf * 2^64)`, the last entry being `2^64`.
    cuts: Vec<u128>,
}

impl Categorical {
    fn new(probs: &[Rational]) -> Self {
        let two64 = Rational::from_integer(BigInt::from(1u128 << 64));
        let mut acc = Rational::from_integer(0.into());
        let mut cuts: Vec<u128> = probs
            .iter()
            .map(|p| {
                acc += p;
                (&acc * &two64).floor().to_integer().to_u128().expect("cdf within [0, 1]")
            })
            .collect();
        if let Some(last) = cuts.last_mut() {
            *last = 1u128 << 64;
        }
        Categorical { cuts }
    }

    fn draw(&self, word: u64) -> usize {
        let w = word as u128;
        self.cuts.iter().position(|&c| w < c).expect("last cut is 2^64")
    }
}

/// Draws families for one configuration.
#[derive(Clone, Debug)]
pub struct Sampler {
    children: Vec<Child>,
    base: ChaCha8Rng,
    per_child: Categorical,
    /// Joint table over `children x children`, used for unique names.
    joint: Option<Categorical>,
    reject_duplicates: bool,
}

impl Sampler {
    pub fn new(cfg: &SimConfig) -> Result<Self, SimError> {
        let regime = cfg.regime;
        let children = regime.children();
        let priors = children
            .iter()
            .map(|c| regime.child_prior(c).eval_at(&cfg.r))
            .collect::<Result<Vec<_>, _>>()?;
        let unique = regime.kind == RegimeKind::UniqueNames;
        let joint = if unique && cfg.mode == SamplingMode::Direct {
            let d = build_distribution(regime);
            let probs = regime
                .outcome_grid()
                .iter()
                .map(|o| d.get(o).eval_at(&cfg.r))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Categorical::new(&probs))
        } else {
            None
        };
        Ok(Sampler {
            children,
            base: ChaCha8Rng::seed_from_u64(cfg.seed),
            per_child: Categorical::new(&priors),
            joint,
            reject_duplicates: unique && cfg.mode == SamplingMode::Reject,
        })
    }

    pub fn children(&self) -> &[Child] {
        &self.children
    }

    /// Grid indices `(eldest, youngest)` into [`Sampler::children`] for
    /// family `index`.
    pub fn family_indices(&self, index: u64) -> (usize, usize) {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        if let Some(joint) = &self.joint {
            let k = joint.draw(rng.next_u64());
            return (k / self.children.len(), k % self.children.len());
        }
        loop {
            let e = self.per_child.draw(rng.next_u64());
            let y = self.per_child.draw(rng.next_u64());
            let duplicate = self.children[e].name_class == NameClass::TheName
                && self.children[y].name_class == NameClass::TheName;
            if !(self.reject_duplicates && duplicate) {
                return (e, y);
            }
        }
    }

    pub fn family(&self, index: u64) -> FamilyOutcome {
        let (e, y) = self.family_indices(index);
        FamilyOutcome::new(self.children[e], self.children[y])
    }
}

/// Draws family `index` of the run described by `cfg`.
pub fn sample_family(cfg: &SimConfig, index: u64) -> Result<FamilyOutcome, SimError> {
    Ok(Sampler::new(cfg)?.family(index))
}

/// Number of simulated families per outcome. Families are split into
/// `workers` contiguous ranges; counts merge by addition.
pub fn simulate_counts(cfg: &SimConfig, workers: usize) -> Result<BTreeMap<FamilyOutcome, u64>, SimError> {
    let sampler = Sampler::new(cfg)?;
    let k = sampler.children().len();
    let workers = workers.max(1) as u64;
    let n = cfg.n_families;
    let chunk = n.div_ceil(workers);

    let histograms: Vec<Vec<u64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let sampler = &sampler;
                let (lo, hi) = ((w * chunk).min(n), ((w + 1) * chunk).min(n));
                scope.spawn(move || {
                    let mut h = vec![0u64; k * k];
                    for i in lo..hi {
                        let (e, y) = sampler.family_indices(i);
                        h[e * k + y] += 1;
                    }
                    h
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut total = vec![0u64; k * k];
    for h in histograms {
        for (t, c) in total.iter_mut().zip(h) {
            *t += c;
        }
    }
    let children = sampler.children();
    Ok(total
        .into_iter()
        .enumerate()
        .map(|(idx, c)| (FamilyOutcome::new(children[idx / k], children[idx % k]), c))
        .collect())
}

/// Empirical conditional frequency compared with the exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    /// `sqrt(p_hat (1 - p_hat) / trials)`
    pub stderr: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub analytic: Rational,
    pub analytic_decimal: String,
    /// `(p_hat - analytic) / stderr`; infinite if `stderr` is zero and the
    /// two disagree.
    pub z_score: f64,
}

impl Estimate {
    fn new(successes: u64, trials: u64, analytic: Rational) -> Self {
        let p_hat = successes as f64 / trials as f64;
        let stderr = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        let target = analytic.to_f64().unwrap_or(f64::NAN);
        let diff = p_hat - target;
        let z_score = if stderr > 0.0 {
            diff / stderr
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        Estimate {
            successes,
            trials,
            p_hat,
            stderr,
            analytic_decimal: to_decimal(&analytic, 5),
            analytic,
            z_score,
        }
    }

    pub fn within_sigmas(&self, sigmas: f64) -> bool {
        self.z_score.abs() <= sigmas
    }
}

/// Simulates `cfg` and estimates `P(a | b)` as the fraction of families
/// satisfying `b` that also satisfy `a`.
pub fn estimate_conditional(
    cfg: &SimConfig,
    a: &EventExpr,
    b: &EventExpr,
    workers: usize,
) -> Result<Estimate, SimError> {
    let d = build_distribution(cfg.regime);
    let pb = probability(&d, b)?.eval_at(&cfg.r)?;
    if pb == Rational::from_integer(0.into()) {
        return Err(SimError::ImpossibleCondition {
            event: b.to_string(),
            r: cfg.r.to_string(),
        });
    }
    let analytic = conditional(&d, a, b)?.eval_at(&cfg.r)?;
    let counts = simulate_counts(cfg, workers)?;
    let (mut successes, mut trials) = (0u64, 0u64);
    for (o, c) in &counts {
        if b.holds(o) {
            trials += c;
            if a.holds(o) {
                successes += c;
            }
        }
    }
    if trials == 0 {
        return Err(SimError::NoTrials(b.to_string()));
    }
    Ok(Estimate::new(successes, trials, analytic))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountsReport {
    /// Exact probabilities times `n_families`, rounded half-even.
    pub analytic: CountTable,
    pub empirical: CountTable,
}

pub fn expected_counts(cfg: &SimConfig, workers: usize) -> Result<CountsReport, SimError> {
    let d = build_distribution(cfg.regime);
    let analytic = NumericTable::evaluate(&d, &cfg.r)?.counts(cfg.n_families);
    let counts = simulate_counts(cfg, workers)?;
    let children = cfg.regime.children();
    let k = children.len();
    let mut grid = vec![vec![Some(0u64); k + 1]; k + 1];
    for (i, &e) in children.iter().enumerate() {
        for (j, &y) in children.iter().enumerate() {
            let o = FamilyOutcome::new(e, y);
            let c = counts.get(&o).copied().unwrap_or(0);
            grid[i][j] = if cfg.regime.is_possible(&o) { Some(c) } else { None };
            for (a, b) in [(i, k), (k, j), (k, k)] {
                grid[a][b] = grid[a][b].map(|t| t + c);
            }
        }
    }
    Ok(CountsReport {
        empirical: CountTable {
            families: cfg.n_families,
            labels: analytic.labels.clone(),
            grid,
        },
        analytic,
    })
}
