//! Full-information baseline re-rankings of a platform pool.
//!
//! Given the reference ranking over the whole eligible set and the pool of
//! candidates actually present on a platform:
//!
//! * [`individual_fair_rerank`] keeps every present candidate at its relative
//!   reference position (the projection of the reference onto the platform).
//! * [`group_fair_rerank`] walks the reference slot by slot and substitutes
//!   the highest-ranked not-yet-placed platform candidate of the slot's
//!   group; slots whose group is exhausted on the platform are dropped and
//!   the list compresses.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{CandidatePool, RankEntry, Ranking};

fn require_subset(reference: &Ranking, platform: &CandidatePool) -> Result<()> {
    for c in platform.candidates() {
        if !reference.contains(&c.id) {
            return Err(Error::PlatformNotSubset(c.id.to_string()));
        }
    }
    Ok(())
}

/// Projection of `reference` onto the members of `platform`.
///
/// The output has length `platform.len()` and no platform member ever ranks
/// above a platform member it trailed in the reference, so no present
/// candidate loses a top-k place it held there.
pub fn individual_fair_rerank(reference: &Ranking, platform: &CandidatePool) -> Result<Ranking> {
    require_subset(reference, platform)?;
    let entries: Vec<RankEntry> = reference
        .entries()
        .iter()
        .filter(|e| platform.contains_id(&e.id))
        .cloned()
        .collect();
    Ranking::from_entries(entries)
}

/// Slot-substitution re-ranking: for every reference position, emit the next
/// unplaced platform candidate of that position's attribute, skipping the
/// slot when the platform has no such candidate left.
///
/// Built on top of [`individual_fair_rerank`], whose output provides the
/// per-group queues in reference order. For every reference prefix, the
/// number of group-`a` candidates placed so far equals
/// `min(count_a(reference prefix), platform group size)`.
pub fn group_fair_rerank(reference: &Ranking, platform: &CandidatePool) -> Result<Ranking> {
    let projected = individual_fair_rerank(reference, platform)?;

    // per-attribute queues in projected (reference) order
    let mut queues: HashMap<&crate::model::AttributeValue, std::collections::VecDeque<&RankEntry>> =
        HashMap::new();
    for e in projected.entries() {
        queues.entry(&e.attribute).or_default().push_back(e);
    }

    let mut entries = Vec::with_capacity(platform.len());
    for slot in reference.entries() {
        if let Some(queue) = queues.get_mut(&slot.attribute) {
            if let Some(e) = queue.pop_front() {
                entries.push(e.clone());
            }
        }
    }
    Ranking::from_entries(entries)
}
