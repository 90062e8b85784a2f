//! Synthetic scenario generation and the three sweep experiments.
//!
//! A scenario draws a universe of scored candidates, thins one group per an
//! activeness grid, and measures what the platform's own representative
//! ranking costs that group: lost top-k places, rank displacement against
//! the individual-fair baseline, and group skew against the group-fair
//! baseline. Every trial derives its own seed from the master seed, so whole
//! sweeps are reproducible byte for byte.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::ActivityModel;
use crate::ideal::{group_fair_rerank, individual_fair_rerank};
use crate::metrics::{individual_unfairness_literal, rank_difference, skew};
use crate::model::{
    ratio_from_pool, AttributeValue, Candidate, CandidatePool, Ranking, RepresentationRatio,
};
use crate::ranker::{detconst_rank, representative_rank};
use crate::rng::{derive_seed, SeededRng};

/// Experiment identifiers, also used as seed-derivation tags.
const TAG_MISSED: u64 = 1;
const TAG_RANK_DIFF: u64 = 2;
const TAG_SKEW: u64 = 3;

/// Saturation for zero-count skew in the sweep.
const SKEW_CAP: f64 = 50.0;

/// Estimator replicates averaged into each trial's estimated-series value.
/// The estimated re-ranking is stochastic; integrating over its internal
/// draws for a fixed platform realization measures the same per-trial mean
/// with far less noise than a single draw.
const ESTIMATOR_REPLICATES: u32 = 64;

/// Prefix for the skew experiment: top-10000 or the whole universe when
/// smaller.
const SKEW_PREFIX_CAP: usize = 10_000;

/// One group of the synthetic universe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub attribute: String,
    pub size: usize,
    /// Joining probability. The swept group's value is replaced by each
    /// grid point in turn; other groups keep theirs.
    pub activeness: f64,
}

/// Score model for generated universes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreDistribution {
    /// Independent draws from (0, 1].
    #[default]
    Uniform01,
}

/// Inputs of one simulation sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub score_distribution: ScoreDistribution,
    /// Cut sizes for the missed-opportunity sweep.
    pub k_grid: Vec<usize>,
    /// Activeness values swept for the sub-active group.
    pub activeness_grid: Vec<f64>,
    pub trials: u32,
    pub master_seed: u64,
    /// Attribute swept over `activeness_grid`. Defaults to the first group
    /// with activeness below 1, else the first group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_attribute: Option<String>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(Error::InvalidConfig("no groups configured".into()));
        }
        let mut seen = Vec::new();
        let mut total = 0usize;
        for g in &self.groups {
            if g.attribute.is_empty() {
                return Err(Error::InvalidConfig("empty group attribute".into()));
            }
            if seen.contains(&&g.attribute) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate group attribute `{}`",
                    g.attribute
                )));
            }
            seen.push(&g.attribute);
            if g.size == 0 {
                return Err(Error::InvalidConfig(format!(
                    "group `{}` has size 0",
                    g.attribute
                )));
            }
            if !(0.0..=1.0).contains(&g.activeness) {
                return Err(Error::InvalidConfig(format!(
                    "group `{}` activeness {} outside [0, 1]",
                    g.attribute, g.activeness
                )));
            }
            total += g.size;
        }
        for &k in &self.k_grid {
            if k > total {
                return Err(Error::InvalidConfig(format!(
                    "k = {k} exceeds the universe size {total}"
                )));
            }
        }
        for &f in &self.activeness_grid {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidConfig(format!(
                    "activeness grid value {f} outside [0, 1]"
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(attr) = &self.sweep_attribute {
            if !self.groups.iter().any(|g| &g.attribute == attr) {
                return Err(Error::InvalidConfig(format!(
                    "sweep attribute `{attr}` is not a configured group"
                )));
            }
        }
        Ok(())
    }

    /// The attribute whose activeness the grid replaces.
    pub fn sweep_attribute(&self) -> AttributeValue {
        if let Some(attr) = &self.sweep_attribute {
            return AttributeValue::new(attr.clone());
        }
        let spec = self
            .groups
            .iter()
            .find(|g| g.activeness < 1.0)
            .unwrap_or(&self.groups[0]);
        AttributeValue::new(spec.attribute.clone())
    }

    pub fn universe_size(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    /// Activity model with the sweep group's fraction set to `f`.
    fn activity_at(&self, f: f64) -> ActivityModel {
        let sweep = self.sweep_attribute();
        let fractions = self
            .groups
            .iter()
            .map(|g| {
                let attr = AttributeValue::new(g.attribute.clone());
                let frac = if attr == sweep { f } else { g.activeness };
                (attr, frac)
            })
            .collect();
        ActivityModel::uniform_at_random(fractions).expect("validated fractions")
    }
}

/// One output cell: a trial value or a per-cell mean (`trial == None`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub f: f64,
    pub k: Option<usize>,
    pub trial: Option<u32>,
    pub value: f64,
}

/// Rows of one experiment (or of a whole run), sorted for emission.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
}

impl ExperimentResult {
    /// Appends trial values plus their mean for one cell.
    fn push_cell(&mut self, experiment: &str, f: f64, k: Option<usize>, values: &[f64]) {
        for (t, &v) in values.iter().enumerate() {
            self.rows.push(ResultRow {
                experiment: experiment.to_string(),
                f,
                k,
                trial: Some(t as u32),
                value: v,
            });
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        self.rows.push(ResultRow {
            experiment: experiment.to_string(),
            f,
            k,
            trial: None,
            value: mean,
        });
    }

    /// Mean row value for one cell, when present.
    pub fn mean(&self, experiment: &str, f: f64, k: Option<usize>) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.experiment == experiment && r.f == f && r.k == k && r.trial.is_none()
            })
            .map(|r| r.value)
    }

    /// Stable emission order: experiment, f, k, trial (means last per cell).
    pub fn sorted_rows(&self) -> Vec<&ResultRow> {
        let mut rows: Vec<&ResultRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            a.experiment
                .cmp(&b.experiment)
                .then(a.f.total_cmp(&b.f))
                .then(a.k.cmp(&b.k))
                .then(a.trial.map_or(u64::MAX, u64::from).cmp(&b.trial.map_or(u64::MAX, u64::from)))
        });
        rows
    }
}

/// Draws a universe with the configured group sizes; ids are
/// `<attribute><index>` and scores are independent draws from (0, 1].
pub fn generate_universe(config: &ScenarioConfig, rng: &mut SeededRng) -> Result<CandidatePool> {
    config.validate()?;
    let ScoreDistribution::Uniform01 = config.score_distribution;
    let mut candidates = Vec::with_capacity(config.universe_size());
    for g in &config.groups {
        for i in 1..=g.size {
            let score = 1.0 - rng.gen::<f64>(); // (0, 1]
            candidates.push(Candidate::new(
                format!("{}{}", g.attribute, i),
                g.attribute.clone(),
                score,
            ));
        }
    }
    let domain = config
        .groups
        .iter()
        .map(|g| AttributeValue::new(g.attribute.clone()))
        .collect();
    CandidatePool::new("synthetic", domain, candidates)
}

/// Keeps each candidate independently with its group's active fraction.
pub fn sample_platform(
    universe: &CandidatePool,
    activity: &ActivityModel,
    rng: &mut SeededRng,
) -> Result<CandidatePool> {
    let mut kept = Vec::with_capacity(universe.len());
    for c in universe.candidates() {
        let f = activity
            .fraction(&c.attribute)
            .ok_or_else(|| Error::ActivityDomainMismatch(c.attribute.to_string()))?;
        let keep = if f >= 1.0 {
            true
        } else if f <= 0.0 {
            false
        } else {
            rng.gen::<f64>() < f
        };
        if keep {
            kept.push(c.clone());
        }
    }
    CandidatePool::new(
        universe.query_id(),
        universe.attribute_domain().to_vec(),
        kept,
    )
}

struct Trial {
    universe: CandidatePool,
    platform: CandidatePool,
    universal_ratio: RepresentationRatio,
    reference: Ranking,
    rng: SeededRng,
}

fn run_trial(config: &ScenarioConfig, tag: u64, f: f64, trial: u32) -> Result<Trial> {
    let seed = derive_seed(config.master_seed, &[tag, f.to_bits(), u64::from(trial)]);
    let mut rng = SeededRng::new(seed);
    let universe = generate_universe(config, &mut rng)?;
    let platform = sample_platform(&universe, &config.activity_at(f), &mut rng)?;
    let universal_ratio = ratio_from_pool(&universe)?;
    let reference = representative_rank(&universe, &universal_ratio)?;
    Ok(Trial {
        universe,
        platform,
        universal_ratio,
        reference,
        rng,
    })
}

/// The platform's own representative ranking, or an empty ranking when
/// nobody joined.
fn platform_ranking(platform: &CandidatePool) -> Result<Ranking> {
    if platform.is_empty() {
        return Ranking::from_entries(Vec::new());
    }
    representative_rank(platform, &ratio_from_pool(platform)?)
}

/// Counts, per (activeness, k) cell, the sweep-group candidates holding a
/// reference top-k place but no platform top-k place — non-joiners included,
/// since a place lost by staying away is still an opportunity the group
/// loses.
pub fn missed_opportunity_experiment(config: &ScenarioConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let sweep = config.sweep_attribute();
    let mut result = ExperimentResult::default();
    for &f in &config.activeness_grid {
        let mut per_k: Vec<Vec<f64>> = vec![Vec::new(); config.k_grid.len()];
        for t in 0..config.trials {
            let trial = run_trial(config, TAG_MISSED, f, t)?;
            let lrr = platform_ranking(&trial.platform)?;
            let sweep_ids: Vec<_> = trial
                .universe
                .candidates()
                .iter()
                .filter(|c| c.attribute == sweep)
                .map(|c| c.id.clone())
                .collect();
            for (ki, &k) in config.k_grid.iter().enumerate() {
                let missed = sweep_ids
                    .iter()
                    .filter(|id| individual_unfairness_literal(id, &trial.reference, &lrr, k))
                    .count();
                per_k[ki].push(missed as f64);
            }
        }
        for (ki, &k) in config.k_grid.iter().enumerate() {
            result.push_cell("missed_opportunity", f, Some(k), &per_k[ki]);
        }
    }
    Ok(result)
}

/// Mean rank displacement of the sweep group's platform members against the
/// individual-fair baseline, for the platform's own ranking and for the
/// estimated re-ranking.
pub fn rank_difference_experiment(config: &ScenarioConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let sweep = config.sweep_attribute();
    let mut result = ExperimentResult::default();
    for &f in &config.activeness_grid {
        let mut lrr_means = Vec::with_capacity(config.trials as usize);
        let mut est_means = Vec::with_capacity(config.trials as usize);
        for t in 0..config.trials {
            let mut trial = run_trial(config, TAG_RANK_DIFF, f, t)?;
            let ideal = individual_fair_rerank(&trial.reference, &trial.platform)?;
            let lrr = platform_ranking(&trial.platform)?;
            let members: Vec<_> = trial
                .platform
                .candidates()
                .iter()
                .filter(|c| c.attribute == sweep)
                .map(|c| c.id.clone())
                .collect();
            if members.is_empty() {
                lrr_means.push(0.0);
                est_means.push(0.0);
                continue;
            }
            let mut lrr_sum = 0.0;
            for id in &members {
                lrr_sum += rank_difference(id, &lrr, &ideal)? as f64;
            }
            lrr_means.push(lrr_sum / members.len() as f64);

            // ideal rank per platform candidate index, for the replicate loop
            let ideal_rank_by_index: Vec<i64> = trial
                .platform
                .candidates()
                .iter()
                .map(|c| ideal.rank(&c.id).expect("platform member") as i64)
                .collect();
            let is_sweep: Vec<bool> = trial
                .platform
                .candidates()
                .iter()
                .map(|c| c.attribute == sweep)
                .collect();
            let activity = config.activity_at(f);
            let mut est_acc = 0.0;
            for _ in 0..ESTIMATOR_REPLICATES {
                let order = crate::estimator::estimated_order(
                    &trial.platform,
                    &trial.universal_ratio,
                    &activity,
                    &mut trial.rng,
                )?;
                let mut est_sum = 0.0;
                for (pos, &ci) in order.iter().enumerate() {
                    if is_sweep[ci] {
                        est_sum += (pos as i64 + 1 - ideal_rank_by_index[ci]) as f64;
                    }
                }
                est_acc += est_sum / members.len() as f64;
            }
            est_means.push(est_acc / f64::from(ESTIMATOR_REPLICATES));
        }
        result.push_cell("rank_difference_lrr", f, None, &lrr_means);
        result.push_cell("rank_difference_estimated", f, None, &est_means);
    }
    Ok(result)
}

/// Skew of the sweep group against the group-fair baseline at the capped
/// prefix, for the platform's own ranking and for the constrained-sort
/// ranking run with the universal proportions.
pub fn skew_experiment(config: &ScenarioConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let sweep = config.sweep_attribute();
    let prefix = SKEW_PREFIX_CAP.min(config.universe_size());
    let mut result = ExperimentResult::default();
    for &f in &config.activeness_grid {
        let mut lrr_values = Vec::with_capacity(config.trials as usize);
        let mut gen_values = Vec::with_capacity(config.trials as usize);
        for t in 0..config.trials {
            let trial = run_trial(config, TAG_SKEW, f, t)?;
            let ideal = group_fair_rerank(&trial.reference, &trial.platform)?;
            let lrr = platform_ranking(&trial.platform)?;
            let generated = detconst_rank(&trial.platform, &trial.universal_ratio)?;
            lrr_values.push(skew(&sweep, &lrr, &ideal, prefix, SKEW_CAP));
            gen_values.push(skew(&sweep, &generated, &ideal, prefix, SKEW_CAP));
        }
        result.push_cell("skew_lrr", f, Some(prefix), &lrr_values);
        result.push_cell("skew_generated", f, Some(prefix), &gen_values);
    }
    Ok(result)
}

/// Run metadata written alongside the result tables.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub master_seed: u64,
    pub seed_derivation: &'static str,
    pub experiments: Vec<String>,
    pub rows: Vec<(String, usize)>,
    pub config: ScenarioConfig,
}

/// All three experiments plus the manifest describing the run.
pub struct RunOutput {
    pub missed_opportunity: ExperimentResult,
    pub rank_difference: ExperimentResult,
    pub skew: ExperimentResult,
    pub manifest: Manifest,
}

pub fn run_all(config: &ScenarioConfig) -> Result<RunOutput> {
    config.validate()?;
    let missed_opportunity = missed_opportunity_experiment(config)?;
    let rank_difference = rank_difference_experiment(config)?;
    let skew = skew_experiment(config)?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        master_seed: config.master_seed,
        seed_derivation:
            "splitmix64 chain over (master_seed, experiment tag, activeness bits, trial)",
        experiments: vec![
            "missed_opportunity".into(),
            "rank_difference".into(),
            "skew".into(),
        ],
        rows: vec![
            ("missed_opportunity".into(), missed_opportunity.rows.len()),
            ("rank_difference".into(), rank_difference.rows.len()),
            ("skew".into(), skew.rows.len()),
        ],
        config: config.clone(),
    };
    Ok(RunOutput {
        missed_opportunity,
        rank_difference,
        skew,
        manifest,
    })
}
