//! Seed-indexed fuzz engine.
//!
//! Each trial derives its own RNG stream from `(master_seed, trial_index)`,
//! builds an admissible scenario, and runs it through the same dispatcher
//! the CLI uses, so any persisted scenario replays to the identical margin.
//! Aggregation is commutative (counts, min-by-(margin, index), histogram
//! sums), which makes the summary independent of worker count and execution
//! order.

use std::fs;
use std::path::PathBuf;

use grusslab_core::rng::{derive_seed, SplitMix64};
use grusslab_core::ToleranceConfig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formats::Scenario;
use crate::generators::{scenario_for, MapFamily};
use crate::runcheck::run_check;
use crate::HarnessError;

pub const TIGHTNESS_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub inequality_id: String,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub master_seed: u64,
    pub tol: ToleranceConfig,
    pub map_family: MapFamily,
    /// Directory for the summary, worst scenario and violation replays.
    pub output: Option<PathBuf>,
    /// 0 = rayon's default parallelism.
    pub workers: usize,
}

impl FuzzConfig {
    pub fn new(inequality_id: impl Into<String>, dims: Vec<usize>, trials: u64, master_seed: u64) -> Self {
        FuzzConfig {
            inequality_id: inequality_id.into(),
            dims,
            trials,
            master_seed,
            tol: ToleranceConfig::default(),
            map_family: MapFamily::CpKraus,
            output: None,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub inequality_id: String,
    pub trials_run: u64,
    /// Trials whose check came back unsatisfied.
    pub violations: u64,
    /// Trials that failed to run (hypothesis or schema errors); kept at zero
    /// by the generators, counted separately from violations.
    pub errors: u64,
    pub min_margin: f64,
    pub min_margin_trial: u64,
    /// Histogram of lhs/rhs ratios in [0,1], 20 bins.
    pub tightness_histogram: Vec<u64>,
    pub worst_scenario: Option<Scenario>,
}

struct TrialOutcome {
    index: u64,
    margin: f64,
    satisfied: bool,
    errored: bool,
    tightness: Option<f64>,
    scenario: Scenario,
}

fn run_trial(config: &FuzzConfig, index: u64) -> Result<TrialOutcome, HarnessError> {
    let mut rng = SplitMix64::new(derive_seed(config.master_seed, index));
    let scenario = scenario_for(
        &config.inequality_id,
        &config.map_family,
        &config.dims,
        &mut rng,
        config.tol,
    )?;
    match run_check(&scenario, None) {
        Ok(report) => Ok(TrialOutcome {
            index,
            margin: report.margin,
            satisfied: report.satisfied,
            errored: false,
            tightness: report.tightness(),
            scenario,
        }),
        Err(HarnessError::Check(_)) => Ok(TrialOutcome {
            index,
            margin: f64::INFINITY,
            satisfied: true,
            errored: true,
            tightness: None,
            scenario,
        }),
        Err(other) => Err(other),
    }
}

#[derive(Clone)]
struct Accumulator {
    trials: u64,
    violations: u64,
    errors: u64,
    min_margin: f64,
    min_index: u64,
    histogram: Vec<u64>,
    worst: Option<(f64, u64, Scenario)>,
    violating: Vec<(u64, Scenario)>,
}

impl Accumulator {
    fn empty() -> Self {
        Accumulator {
            trials: 0,
            violations: 0,
            errors: 0,
            min_margin: f64::INFINITY,
            min_index: u64::MAX,
            histogram: vec![0; TIGHTNESS_BINS],
            worst: None,
            violating: Vec::new(),
        }
    }

    fn push(mut self, outcome: TrialOutcome) -> Self {
        self.trials += 1;
        if outcome.errored {
            self.errors += 1;
            return self;
        }
        if !outcome.satisfied {
            self.violations += 1;
            self.violating.push((outcome.index, outcome.scenario.clone()));
        }
        if let Some(t) = outcome.tightness {
            let bin = ((t * TIGHTNESS_BINS as f64) as usize).min(TIGHTNESS_BINS - 1);
            self.histogram[bin] += 1;
        }
        // Ties break toward the smaller trial index for order-independence.
        let better = outcome.margin < self.min_margin
            || (outcome.margin == self.min_margin && outcome.index < self.min_index);
        if better {
            self.min_margin = outcome.margin;
            self.min_index = outcome.index;
            self.worst = Some((outcome.margin, outcome.index, outcome.scenario));
        }
        self
    }

    fn merge(mut self, other: Accumulator) -> Self {
        self.trials += other.trials;
        self.violations += other.violations;
        self.errors += other.errors;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.violating.extend(other.violating);
        let take_other = other.min_margin < self.min_margin
            || (other.min_margin == self.min_margin && other.min_index < self.min_index);
        if take_other {
            self.min_margin = other.min_margin;
            self.min_index = other.min_index;
            self.worst = other.worst;
        }
        self
    }
}

/// Runs the configured fuzz campaign. The summary is identical for any
/// worker count; violating scenarios and the worst scenario are persisted
/// under `config.output` for replay.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary, HarnessError> {
    let fold = || -> Result<Accumulator, HarnessError> {
        (0..config.trials)
            .into_par_iter()
            .map(|index| run_trial(config, index))
            .try_fold(Accumulator::empty, |acc, outcome| Ok(acc.push(outcome?)))
            .try_reduce(Accumulator::empty, |a, b| Ok(a.merge(b)))
    };

    let acc = if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| HarnessError::Schema(format!("thread pool: {e}")))?;
        pool.install(fold)?
    } else {
        fold()?
    };

    let mut summary = FuzzSummary {
        inequality_id: config.inequality_id.clone(),
        trials_run: acc.trials,
        violations: acc.violations,
        errors: acc.errors,
        min_margin: acc.min_margin,
        min_margin_trial: acc.min_index,
        tightness_histogram: acc.histogram,
        worst_scenario: acc.worst.map(|(_, _, s)| s),
    };
    if summary.trials_run == 0 {
        summary.min_margin = 0.0;
        summary.min_margin_trial = 0;
    }

    if let Some(dir) = &config.output {
        fs::create_dir_all(dir)?;
        let mut sorted = acc.violating;
        sorted.sort_by_key(|(idx, _)| *idx);
        for (idx, scenario) in &sorted {
            let path = dir.join(format!("violation_{idx:06}.json"));
            fs::write(path, serde_json::to_string_pretty(scenario)?)?;
        }
        if let Some(worst) = &summary.worst_scenario {
            fs::write(dir.join("worst_scenario.json"), serde_json::to_string_pretty(worst)?)?;
        }
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
        fs::write(dir.join("config.json"), serde_json::to_string_pretty(config)?)?;
    }

    Ok(summary)
}
