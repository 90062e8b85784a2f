//! Probabilistic reconstruction of the individual-fair re-ranking when only
//! the platform pool, the universal proportions, and per-group activeness
//! are known.
//!
//! The procedure lays out the round-target slot pattern over the group sizes
//! the platform counts imply (`ceil(n_a / f_a)` per group), then walks it:
//! a slot reserved for group `a` receives that group's next unplaced
//! candidate with probability `f_a`, and otherwise vanishes, letting later
//! candidates move up — mirroring how the full-information projection
//! compresses around absent candidates. Candidates still unplaced after the
//! pattern are appended, again interleaved by the universal proportions, so
//! prefix shares stay stable.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{AttributeValue, CandidatePool, Ranking, RepresentationRatio};
use crate::num::ceil_int;
use crate::ranker::{round_target_slots, TieBreak};
use crate::rng::SeededRng;

/// How candidates go missing from the platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ActivityKind {
    /// Each member of a group joins independently with the group's fraction.
    /// Score-correlated joining models would extend this enum.
    #[default]
    UniformAtRandom,
}

/// Per-group active fractions under a missingness model.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityModel {
    pub kind: ActivityKind,
    fractions: Vec<(AttributeValue, f64)>,
}

impl ActivityModel {
    pub fn uniform_at_random(fractions: Vec<(AttributeValue, f64)>) -> Result<Self> {
        for (attr, f) in &fractions {
            if !f.is_finite() || *f < 0.0 || *f > 1.0 {
                return Err(Error::ActivityOutOfRange {
                    attribute: attr.to_string(),
                    value: *f,
                });
            }
        }
        Ok(Self {
            kind: ActivityKind::UniformAtRandom,
            fractions,
        })
    }

    pub fn fraction(&self, attribute: &AttributeValue) -> Option<f64> {
        self.fractions
            .iter()
            .find(|(a, _)| a == attribute)
            .map(|&(_, f)| f)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AttributeValue, f64)> {
        self.fractions.iter().map(|(a, f)| (a, *f))
    }
}

/// Estimated individual-fair re-ranking of `platform`.
///
/// Deterministic for a fixed `rng` seed. With every fraction at 1 the output
/// is exactly the round-target representative ranking of the platform under
/// `universal_ratio` (no draw is consumed). Callers running concurrent
/// trials should derive one rng per trial via [`SeededRng::derive`].
pub fn estimated_individual_rerank(
    platform: &CandidatePool,
    universal_ratio: &RepresentationRatio,
    activity: &ActivityModel,
    rng: &mut SeededRng,
) -> Result<Ranking> {
    let order = estimated_order(platform, universal_ratio, activity, rng)?;
    Ok(crate::model::Ranking::from_pool_indices(platform, order))
}

/// The placement order as candidate indices into `platform.candidates()`.
/// Backs [`estimated_individual_rerank`]; the sweep engine reads positions
/// straight off this to avoid building a ranking per replicate.
pub(crate) fn estimated_order(
    platform: &CandidatePool,
    universal_ratio: &RepresentationRatio,
    activity: &ActivityModel,
    rng: &mut SeededRng,
) -> Result<Vec<usize>> {
    let domain = platform.attribute_domain();
    let groups = platform.groups_by_domain();

    let mut proportions = Vec::with_capacity(domain.len());
    let mut fractions = Vec::with_capacity(domain.len());
    let mut implied_sizes = Vec::with_capacity(domain.len());
    for (attr, members) in domain.iter().zip(groups) {
        let p = universal_ratio
            .get(attr)
            .ok_or_else(|| Error::RatioDomainMismatch(attr.to_string()))?;
        let f = activity
            .fraction(attr)
            .ok_or_else(|| Error::ActivityDomainMismatch(attr.to_string()))?;
        let n = members.len();
        let implied = if n == 0 {
            0
        } else if f == 0.0 {
            return Err(Error::InfeasibleActivity(attr.to_string()));
        } else {
            ceil_int(n as f64 / f)
        };
        proportions.push(p);
        fractions.push(f);
        implied_sizes.push(implied);
    }

    let slots = round_target_slots(&implied_sizes, &proportions, TieBreak::LargerProportionFirst);
    let mut cursors = vec![0usize; domain.len()];
    let mut order = Vec::with_capacity(platform.len());
    for g in slots {
        if cursors[g] >= groups[g].len() {
            continue; // group already fully placed; no draw consumed
        }
        let f = fractions[g];
        if f >= 1.0 || rng.gen::<f64>() < f {
            order.push(groups[g][cursors[g]]);
            cursors[g] += 1;
        }
    }

    // pattern underestimated: append leftovers, still ratio-interleaved
    let leftover: Vec<usize> = (0..domain.len())
        .map(|g| groups[g].len() - cursors[g])
        .collect();
    if leftover.iter().any(|&n| n > 0) {
        for g in round_target_slots(&leftover, &proportions, TieBreak::LargerProportionFirst) {
            order.push(groups[g][cursors[g]]);
            cursors[g] += 1;
        }
    }

    Ok(order)
}
