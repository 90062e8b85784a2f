//! Representative merge procedures.
//!
//! Two merge procedures produce a full representative ranking of a pool
//! against target proportions, both preserving within-group order:
//!
//! * [`representative_rank`] — the round-target merge. At each index `k` a
//!   group is in deficit while its count is below `round_half_up(p * k)`;
//!   the slot goes to a deficit group's next candidate.
//! * [`detconst_rank`] — the floor/ceiling constrained sort. Groups strictly
//!   below `floor(k * p)` are served first (highest next score wins); else
//!   groups below `ceil(k * p)` are served by smallest `ceil(k * p) / p`.
//!
//! The two disagree on tie positions: with proportions 5/6 and 1/6 the round
//! target puts the minority at index 4 where the floor/ceiling rule waits.
//! Both are exposed because downstream audits pin exact outputs of each.

use crate::error::{Error, Result};
use crate::model::{AttributeValue, CandidatePool, Ranking, RepresentationRatio};
use crate::num::{ceil_int, cmp_approx, floor_int, round_half_up};

/// Which merge procedure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeKind {
    /// Round-half-up targets per prefix index.
    RoundTarget,
    /// Floor/ceiling window per prefix index.
    DetConstSort,
}

/// How to resolve ties between groups that are equally eligible for a slot.
/// Proportion ties fall through to attribute-domain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    LargerProportionFirst,
    SmallerProportionFirst,
}

/// Merge procedure selection plus its tie rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergePolicy {
    pub kind: MergeKind,
    pub tie_break: TieBreak,
}

impl MergePolicy {
    /// Round-target merge; deficits tie toward the larger proportion.
    pub fn round_target() -> Self {
        Self {
            kind: MergeKind::RoundTarget,
            tie_break: TieBreak::LargerProportionFirst,
        }
    }

    /// Floor/ceiling merge; window ties go to the smaller proportion.
    pub fn det_const_sort() -> Self {
        Self {
            kind: MergeKind::DetConstSort,
            tie_break: TieBreak::SmallerProportionFirst,
        }
    }
}

/// Per-group state shared by both merges: ordered candidate indices, the
/// target proportion, and a cursor over candidates already emitted.
struct GroupState<'a> {
    attribute: &'a AttributeValue,
    members: &'a [usize],
    proportion: f64,
    emitted: usize,
}

impl GroupState<'_> {
    fn exhausted(&self) -> bool {
        self.emitted >= self.members.len()
    }

    fn next_index(&self) -> usize {
        self.members[self.emitted]
    }
}

fn group_states<'a>(
    pool: &'a CandidatePool,
    ratio: &'a RepresentationRatio,
) -> Result<Vec<GroupState<'a>>> {
    pool.attribute_domain()
        .iter()
        .zip(pool.groups_by_domain())
        .map(|(attribute, members)| {
            let proportion = ratio
                .get(attribute)
                .ok_or_else(|| Error::RatioDomainMismatch(attribute.to_string()))?;
            Ok(GroupState {
                attribute,
                members,
                proportion,
                emitted: 0,
            })
        })
        .collect()
}

/// Among `eligible` group indices, pick one by the proportion tie rule; equal
/// proportions resolve to the earliest attribute-domain position.
fn pick_by_proportion(states: &[GroupState], eligible: &[usize], tie: TieBreak) -> usize {
    let mut best = eligible[0];
    for &g in &eligible[1..] {
        let ord = cmp_approx(states[g].proportion, states[best].proportion);
        let better = match tie {
            TieBreak::LargerProportionFirst => ord == std::cmp::Ordering::Greater,
            TieBreak::SmallerProportionFirst => ord == std::cmp::Ordering::Less,
        };
        if better {
            best = g;
        }
    }
    best
}

/// The slot sequence of the round-target merge over abstract group sizes.
///
/// Returns, for every output index, which group fills it. Selection at index
/// `k` (1-based): any non-exhausted group with `emitted < round_half_up(p*k)`
/// is in deficit; ties resolve by `tie`, then domain order. With no deficit
/// (every target met, or deficit groups exhausted) the slot goes to the
/// non-exhausted group with the largest proportion.
pub(crate) fn round_target_slots(sizes: &[usize], proportions: &[f64], tie: TieBreak) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut emitted = vec![0usize; sizes.len()];
    let mut slots = Vec::with_capacity(total);
    let mut deficit = Vec::with_capacity(sizes.len());
    for k in 1..=total {
        deficit.clear();
        for g in 0..sizes.len() {
            if emitted[g] < sizes[g] && emitted[g] < round_half_up(proportions[g] * k as f64) {
                deficit.push(g);
            }
        }
        let chosen = if deficit.is_empty() {
            let mut best = None;
            for g in 0..sizes.len() {
                if emitted[g] < sizes[g]
                    && best.is_none_or(|b: usize| {
                        cmp_approx(proportions[g], proportions[b]) == std::cmp::Ordering::Greater
                    })
                {
                    best = Some(g);
                }
            }
            best.expect("k <= total slots, so some group has candidates left")
        } else {
            let mut best = deficit[0];
            for &g in &deficit[1..] {
                let ord = cmp_approx(proportions[g], proportions[best]);
                let better = match tie {
                    TieBreak::LargerProportionFirst => ord == std::cmp::Ordering::Greater,
                    TieBreak::SmallerProportionFirst => ord == std::cmp::Ordering::Less,
                };
                if better {
                    best = g;
                }
            }
            best
        };
        emitted[chosen] += 1;
        slots.push(chosen);
    }
    slots
}

/// Round-target representative ranking with the default tie rule.
pub fn representative_rank(pool: &CandidatePool, ratio: &RepresentationRatio) -> Result<Ranking> {
    rank_with_policy(pool, ratio, MergePolicy::round_target())
}

/// Floor/ceiling constrained-sort ranking with the default tie rule.
///
/// Rejects proportions of exactly zero for non-empty groups: the selection
/// criterion `ceil(k*p)/p` is undefined there.
pub fn detconst_rank(pool: &CandidatePool, ratio: &RepresentationRatio) -> Result<Ranking> {
    rank_with_policy(pool, ratio, MergePolicy::det_const_sort())
}

/// Runs the selected merge procedure over the pool.
pub fn rank_with_policy(
    pool: &CandidatePool,
    ratio: &RepresentationRatio,
    policy: MergePolicy,
) -> Result<Ranking> {
    match policy.kind {
        MergeKind::RoundTarget => round_target_rank(pool, ratio, policy.tie_break),
        MergeKind::DetConstSort => det_const_sort_rank(pool, ratio, policy.tie_break),
    }
}

fn round_target_rank(
    pool: &CandidatePool,
    ratio: &RepresentationRatio,
    tie: TieBreak,
) -> Result<Ranking> {
    let states = group_states(pool, ratio)?;
    let sizes: Vec<usize> = states.iter().map(|s| s.members.len()).collect();
    let proportions: Vec<f64> = states.iter().map(|s| s.proportion).collect();
    let slots = round_target_slots(&sizes, &proportions, tie);

    let mut cursors = vec![0usize; states.len()];
    let mut order = Vec::with_capacity(pool.len());
    for g in slots {
        order.push(states[g].members[cursors[g]]);
        cursors[g] += 1;
    }
    Ok(Ranking::from_pool_indices(pool, order))
}

fn det_const_sort_rank(
    pool: &CandidatePool,
    ratio: &RepresentationRatio,
    tie: TieBreak,
) -> Result<Ranking> {
    let mut states = group_states(pool, ratio)?;
    for s in &states {
        if s.proportion == 0.0 && !s.members.is_empty() {
            return Err(Error::ZeroProportionWithCandidates(s.attribute.to_string()));
        }
    }

    let total = pool.len();
    let mut order = Vec::with_capacity(total);
    let mut under_rep = Vec::with_capacity(states.len());
    let mut under_limit = Vec::with_capacity(states.len());
    for k in 1..=total {
        under_rep.clear();
        under_limit.clear();
        for (g, s) in states.iter().enumerate() {
            if s.exhausted() {
                continue;
            }
            let lower = floor_int(s.proportion * k as f64);
            if s.emitted < lower {
                under_rep.push(g);
            } else if s.emitted < ceil_int(s.proportion * k as f64) {
                under_limit.push(g);
            }
        }

        let chosen = if !under_rep.is_empty() {
            // highest next score wins; score ties fall back to the proportion rule
            let mut best = under_rep[0];
            for &g in &under_rep[1..] {
                let score_g = pool.candidates()[states[g].next_index()].score;
                let score_b = pool.candidates()[states[best].next_index()].score;
                if score_g > score_b {
                    best = g;
                } else if score_g == score_b {
                    best = pick_by_proportion(&states, &[best, g], tie);
                }
            }
            best
        } else if !under_limit.is_empty() {
            let criterion = |s: &GroupState| {
                ceil_int(s.proportion * k as f64) as f64 / s.proportion
            };
            let mut best = under_limit[0];
            for &g in &under_limit[1..] {
                match cmp_approx(criterion(&states[g]), criterion(&states[best])) {
                    std::cmp::Ordering::Less => best = g,
                    std::cmp::Ordering::Equal => {
                        best = pick_by_proportion(&states, &[best, g], tie);
                    }
                    std::cmp::Ordering::Greater => {}
                }
            }
            best
        } else {
            // every group is at its ceiling or exhausted; keep the output a
            // full permutation by serving the group furthest behind its share
            let mut best: Option<usize> = None;
            for (g, s) in states.iter().enumerate() {
                if s.exhausted() || s.proportion == 0.0 {
                    continue;
                }
                let c = s.emitted as f64 / s.proportion;
                match best {
                    None => best = Some(g),
                    Some(b) => {
                        let cb = states[b].emitted as f64 / states[b].proportion;
                        match cmp_approx(c, cb) {
                            std::cmp::Ordering::Less => best = Some(g),
                            std::cmp::Ordering::Equal => {
                                best = Some(pick_by_proportion(&states, &[b, g], tie));
                            }
                            std::cmp::Ordering::Greater => {}
                        }
                    }
                }
            }
            best.expect("non-exhausted group exists while slots remain")
        };

        order.push(states[chosen].next_index());
        states[chosen].emitted += 1;
    }
    Ok(Ranking::from_pool_indices(pool, order))
}
