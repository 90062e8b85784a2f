//! Fairness predicates, rank metrics, and the aggregate audit report.
//!
//! All predicates compare a platform ranking against a reference ranking at
//! a top-k cut. Candidates absent from a ranking count as ranked below every
//! cut. The unfairness indicator is scoped to platform members by default —
//! someone who never joined is not treated unfairly by the platform — with
//! an opt-in literal mode that counts absentees too.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AttributeValue, CandidateId, CandidatePool, GroupCounts, Ranking};

/// True when the candidate sits inside the platform ranking's top-k.
pub fn is_benefited(candidate: &CandidateId, platform_ranking: &Ranking, k: usize) -> bool {
    platform_ranking.rank(candidate).is_some_and(|r| r <= k)
}

/// Unfairness indicator: a platform member holding a reference top-k place
/// but not a platform top-k place.
pub fn individual_unfairness(
    candidate: &CandidateId,
    reference: &Ranking,
    platform_ranking: &Ranking,
    platform: &CandidatePool,
    k: usize,
) -> bool {
    platform.contains_id(candidate)
        && individual_unfairness_literal(candidate, reference, platform_ranking, k)
}

/// Literal unfairness indicator: reference top-k membership lost, whether or
/// not the candidate ever joined the platform.
pub fn individual_unfairness_literal(
    candidate: &CandidateId,
    reference: &Ranking,
    platform_ranking: &Ranking,
    k: usize,
) -> bool {
    reference.rank(candidate).is_some_and(|r| r <= k)
        && !platform_ranking.rank(candidate).is_some_and(|r| r <= k)
}

/// True when the candidate holds a platform top-k place it does not hold in
/// the reference.
pub fn is_favored(
    candidate: &CandidateId,
    reference: &Ranking,
    platform_ranking: &Ranking,
    k: usize,
) -> bool {
    platform_ranking.rank(candidate).is_some_and(|r| r <= k)
        && !reference.rank(candidate).is_some_and(|r| r <= k)
}

/// True when the group holds fewer platform top-k places than reference
/// top-k places.
pub fn group_unfair(
    attribute: &AttributeValue,
    reference: &Ranking,
    platform_ranking: &Ranking,
    k: usize,
) -> bool {
    platform_ranking.group_count(attribute, k) < reference.group_count(attribute, k)
}

/// True when the group holds more platform top-k places than reference
/// top-k places.
pub fn group_favored(
    attribute: &AttributeValue,
    reference: &Ranking,
    platform_ranking: &Ranking,
    k: usize,
) -> bool {
    platform_ranking.group_count(attribute, k) > reference.group_count(attribute, k)
}

/// Rank in `first` minus rank in `second`; positive means the candidate sits
/// lower (is treated worse) in `first`.
pub fn rank_difference(
    candidate: &CandidateId,
    first: &Ranking,
    second: &Ranking,
) -> Result<i64> {
    let r1 = first
        .rank(candidate)
        .ok_or_else(|| Error::MissingFromRanking {
            candidate: candidate.to_string(),
            which: "first",
        })?;
    let r2 = second
        .rank(candidate)
        .ok_or_else(|| Error::MissingFromRanking {
            candidate: candidate.to_string(),
            which: "second",
        })?;
    Ok(r1 as i64 - r2 as i64)
}

/// Natural log of the ratio of the group's top-k counts in `first` vs
/// `second`; negative means under-representation in `first`. When exactly
/// one count is zero the result saturates at `±cap`, signed toward the zero
/// side; two zero counts yield 0.
pub fn skew(
    attribute: &AttributeValue,
    first: &Ranking,
    second: &Ranking,
    k: usize,
    cap: f64,
) -> f64 {
    let c1 = first.group_count(attribute, k);
    let c2 = second.group_count(attribute, k);
    match (c1, c2) {
        (0, 0) => 0.0,
        (0, _) => -cap,
        (_, 0) => cap,
        (c1, c2) => (c1 as f64 / c2 as f64).ln(),
    }
}

/// Options for [`fairness_report`].
#[derive(Debug, Clone, Copy)]
pub struct AuditOptions {
    /// Saturation value for zero-count skew.
    pub skew_cap: f64,
    /// Count reference-top-k candidates who never joined the platform as
    /// individually unfair (the literal reading) instead of skipping them.
    pub count_absent_as_unfair: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            skew_cap: 50.0,
            count_absent_as_unfair: false,
        }
    }
}

/// Per-candidate verdicts at one cut.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateVerdict {
    pub id: CandidateId,
    pub attribute: AttributeValue,
    pub benefited: bool,
    pub individually_unfair: bool,
    pub favored: bool,
    /// Platform rank minus reference rank; absent when the candidate is
    /// missing from either ranking.
    pub rank_difference: Option<i64>,
}

/// Per-group verdicts at one cut.
#[derive(Debug, Clone, Serialize)]
pub struct GroupVerdict {
    pub attribute: AttributeValue,
    pub count_reference_topk: usize,
    pub count_platform_topk: usize,
    pub unfair: bool,
    pub favored: bool,
    /// Skew of the platform ranking against the reference at this cut.
    pub skew: f64,
}

/// Aggregate totals of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportTotals {
    pub n_unfair: usize,
    pub n_favored: usize,
    /// Reference top-k candidates missing from the platform pool.
    pub n_absent_from_platform: usize,
}

/// Full audit of a platform ranking against a reference at one cut.
#[derive(Debug, Clone, Serialize)]
pub struct FairnessReport {
    pub k: usize,
    pub totals: ReportTotals,
    pub candidates: Vec<CandidateVerdict>,
    pub groups: Vec<GroupVerdict>,
}

/// Audits `platform_ranking` against `reference` at cut `k`.
///
/// Candidate verdicts cover every candidate of either ranking (reference
/// order first). For cuts no larger than both ranking lengths the totals
/// satisfy `n_favored = n_unfair + n_absent_from_platform` under the default
/// scoping.
pub fn fairness_report(
    reference: &Ranking,
    platform_ranking: &Ranking,
    platform: &CandidatePool,
    k: usize,
    options: AuditOptions,
) -> FairnessReport {
    let mut candidates = Vec::with_capacity(reference.len());
    let mut n_unfair = 0;
    let mut n_favored = 0;

    let mut verdict_for = |id: &CandidateId, attribute: &AttributeValue| {
        let unfair = if options.count_absent_as_unfair {
            individual_unfairness_literal(id, reference, platform_ranking, k)
        } else {
            individual_unfairness(id, reference, platform_ranking, platform, k)
        };
        let favored = is_favored(id, reference, platform_ranking, k);
        n_unfair += usize::from(unfair);
        n_favored += usize::from(favored);
        let rank_difference = match (platform_ranking.rank(id), reference.rank(id)) {
            (Some(rp), Some(rr)) => Some(rp as i64 - rr as i64),
            _ => None,
        };
        CandidateVerdict {
            id: id.clone(),
            attribute: attribute.clone(),
            benefited: is_benefited(id, platform_ranking, k),
            individually_unfair: unfair,
            favored,
            rank_difference,
        }
    };

    for e in reference.entries() {
        candidates.push(verdict_for(&e.id, &e.attribute));
    }
    for e in platform_ranking.entries() {
        if !reference.contains(&e.id) {
            candidates.push(verdict_for(&e.id, &e.attribute));
        }
    }

    let n_absent_from_platform = reference
        .top(k)
        .iter()
        .filter(|e| !platform.contains_id(&e.id))
        .count();

    // group verdicts follow the platform domain, then any extra attributes
    // observed in the rankings
    let mut attributes: Vec<AttributeValue> = platform.attribute_domain().to_vec();
    for e in reference.entries().iter().chain(platform_ranking.entries()) {
        if !attributes.contains(&e.attribute) {
            attributes.push(e.attribute.clone());
        }
    }
    let groups = attributes
        .into_iter()
        .map(|attribute| {
            let count_reference_topk = reference.group_count(&attribute, k);
            let count_platform_topk = platform_ranking.group_count(&attribute, k);
            GroupVerdict {
                unfair: count_platform_topk < count_reference_topk,
                favored: count_platform_topk > count_reference_topk,
                skew: skew(&attribute, platform_ranking, reference, k, options.skew_cap),
                attribute,
                count_reference_topk,
                count_platform_topk,
            }
        })
        .collect();

    FairnessReport {
        k,
        totals: ReportTotals {
            n_unfair,
            n_favored,
            n_absent_from_platform,
        },
        candidates,
        groups,
    }
}

/// Convenience re-export of prefix group counts for report consumers.
pub fn group_counts_at(ranking: &Ranking, k: usize) -> GroupCounts {
    ranking.group_counts(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio_from_pool, Candidate, CandidatePool};
    use crate::ranker::representative_rank;

    fn intro_universe() -> CandidatePool {
        let mut candidates = Vec::new();
        for i in 1..=10 {
            candidates.push(Candidate::new(format!("b{i}"), "b", 1.0 - i as f64 * 0.05));
        }
        for i in 1..=5 {
            candidates.push(Candidate::new(format!("g{i}"), "g", 1.0 - i as f64 * 0.05));
        }
        CandidatePool::from_candidates("intro", candidates).unwrap()
    }

    struct Scenario {
        universe: CandidatePool,
        platform: CandidatePool,
        reference: Ranking,
        platform_ranking: Ranking,
    }

    fn scenario(joined_g: &[&str]) -> Scenario {
        let universe = intro_universe();
        let platform = universe
            .filtered(|c| c.attribute.as_str() == "b" || joined_g.contains(&c.id.as_str()));
        let reference =
            representative_rank(&universe, &ratio_from_pool(&universe).unwrap()).unwrap();
        let platform_ranking =
            representative_rank(&platform, &ratio_from_pool(&platform).unwrap()).unwrap();
        Scenario {
            universe,
            platform,
            reference,
            platform_ranking,
        }
    }

    #[test]
    fn benefited_follows_platform_topk() {
        let s = scenario(&["g1", "g2"]);
        assert!(is_benefited(&"g1".into(), &s.platform_ranking, 6)); // rank 4
        assert!(!is_benefited(&"g2".into(), &s.platform_ranking, 6));
        // a cut at full length benefits every platform member
        for c in s.platform.candidates() {
            assert!(is_benefited(&c.id, &s.platform_ranking, s.platform_ranking.len()));
        }
    }

    #[test]
    fn unfairness_indicator_matches_worked_scenario() {
        let s = scenario(&["g1", "g2"]);
        assert!(individual_unfairness(
            &"g2".into(),
            &s.reference,
            &s.platform_ranking,
            &s.platform,
            6
        ));
        assert!(!individual_unfairness(
            &"b1".into(),
            &s.reference,
            &s.platform_ranking,
            &s.platform,
            6
        ));
        // non-joiner g3 is not unfair under the default scope...
        assert!(!individual_unfairness(
            &"g3".into(),
            &s.reference,
            &s.platform_ranking,
            &s.platform,
            8
        ));
        // ...but counts under the literal scope when it held a reference place
        assert!(s.reference.rank(&"g3".into()).unwrap() <= 8);
        assert!(individual_unfairness_literal(
            &"g3".into(),
            &s.reference,
            &s.platform_ranking,
            8
        ));
    }

    #[test]
    fn favored_matches_worked_scenarios() {
        let s = scenario(&["g1", "g2"]);
        assert!(is_favored(&"b5".into(), &s.reference, &s.platform_ranking, 6));
        assert!(!is_favored(&"b1".into(), &s.reference, &s.platform_ranking, 6));

        // two-joiner scenario: b5 favored while nobody is unfair
        let s = scenario(&["g2", "g4"]);
        assert!(is_favored(&"b5".into(), &s.reference, &s.platform_ranking, 6));
        for c in s.universe.candidates() {
            assert!(!individual_unfairness(
                &c.id,
                &s.reference,
                &s.platform_ranking,
                &s.platform,
                6
            ));
        }
    }

    #[test]
    fn group_verdicts_match_worked_scenario() {
        let s = scenario(&["g1", "g2"]);
        assert!(group_unfair(&"g".into(), &s.reference, &s.platform_ranking, 6));
        assert!(!group_unfair(&"b".into(), &s.reference, &s.platform_ranking, 6));
        assert!(group_favored(&"b".into(), &s.reference, &s.platform_ranking, 6));
        assert!(!group_favored(&"g".into(), &s.reference, &s.platform_ranking, 6));
        // identical rankings: neither unfair nor favored
        for a in ["b", "g"] {
            assert!(!group_unfair(&a.into(), &s.reference, &s.reference, 6));
            assert!(!group_favored(&a.into(), &s.reference, &s.reference, 6));
        }
    }

    #[test]
    fn rank_difference_signs() {
        let s = scenario(&["g1", "g2"]);
        let ideal =
            crate::ideal::individual_fair_rerank(&s.reference, &s.platform).unwrap();
        assert_eq!(s.platform_ranking.rank(&"g2".into()), Some(10));
        assert_eq!(ideal.rank(&"g2".into()), Some(5));
        assert_eq!(
            rank_difference(&"g2".into(), &s.platform_ranking, &ideal).unwrap(),
            5
        );
        // identical rankings: zero everywhere
        for c in s.platform.candidates() {
            assert_eq!(rank_difference(&c.id, &ideal, &ideal).unwrap(), 0);
        }
        // adjacent swap: +1 and -1
        let pool = CandidatePool::from_candidates(
            "q",
            vec![Candidate::new("x", "a", 0.9), Candidate::new("y", "b", 0.8)],
        )
        .unwrap();
        let r1 = Ranking::from_order(&pool, &["x".into(), "y".into()]).unwrap();
        let r2 = Ranking::from_order(&pool, &["y".into(), "x".into()]).unwrap();
        assert_eq!(rank_difference(&"x".into(), &r1, &r2).unwrap(), -1);
        assert_eq!(rank_difference(&"y".into(), &r1, &r2).unwrap(), 1);
        assert_eq!(
            rank_difference(&"zz".into(), &r1, &r2).unwrap_err().code(),
            "MissingFromRanking"
        );
    }

    #[test]
    fn skew_values_and_sign_convention() {
        let s = scenario(&["g1", "g2"]);
        // one minority member in the platform top-6 against two in the
        // reference top-6
        let v = skew(&"g".into(), &s.platform_ranking, &s.reference, 6, 50.0);
        assert!((v - (1.0f64 / 2.0).ln()).abs() < 1e-12);
        assert!(v < 0.0);
        // equal counts
        assert_eq!(skew(&"g".into(), &s.reference, &s.reference, 6, 50.0), 0.0);
        // zero against nonzero saturates toward the zero side
        assert_eq!(skew(&"g".into(), &s.platform_ranking, &s.reference, 3, 50.0), -50.0);
        assert_eq!(skew(&"g".into(), &s.reference, &s.platform_ranking, 3, 50.0), 50.0);
        // both zero
        assert_eq!(skew(&"zz".into(), &s.reference, &s.platform_ranking, 6, 50.0), 0.0);
    }

    #[test]
    fn report_matches_worked_scenarios() {
        let s = scenario(&["g1", "g2"]);
        let report = fairness_report(
            &s.reference,
            &s.platform_ranking,
            &s.platform,
            6,
            AuditOptions::default(),
        );
        assert_eq!(
            report.totals,
            ReportTotals {
                n_unfair: 1,
                n_favored: 1,
                n_absent_from_platform: 0
            }
        );
        let g2 = report
            .candidates
            .iter()
            .find(|v| v.id.as_str() == "g2")
            .unwrap();
        assert!(g2.individually_unfair && !g2.benefited && !g2.favored);
        let b5 = report
            .candidates
            .iter()
            .find(|v| v.id.as_str() == "b5")
            .unwrap();
        assert!(b5.favored && b5.benefited);

        let s = scenario(&["g2", "g4"]);
        let report = fairness_report(
            &s.reference,
            &s.platform_ranking,
            &s.platform,
            6,
            AuditOptions::default(),
        );
        assert_eq!(
            report.totals,
            ReportTotals {
                n_unfair: 0,
                n_favored: 1,
                n_absent_from_platform: 1
            }
        );
    }

    #[test]
    fn report_on_projection_of_full_pool_is_all_zero() {
        let s = scenario(&["g1", "g2", "g3", "g4", "g5"]);
        // platform == universe, so the platform ranking is the reference
        for k in [1, 3, 6, 10, 15] {
            let report = fairness_report(
                &s.reference,
                &s.platform_ranking,
                &s.platform,
                k,
                AuditOptions::default(),
            );
            assert_eq!(
                report.totals,
                ReportTotals {
                    n_unfair: 0,
                    n_favored: 0,
                    n_absent_from_platform: 0
                }
            );
        }
    }

    #[test]
    fn verdict_implications_hold() {
        let s = scenario(&["g1", "g3"]);
        for k in 1..=s.platform_ranking.len() {
            let report = fairness_report(
                &s.reference,
                &s.platform_ranking,
                &s.platform,
                k,
                AuditOptions::default(),
            );
            for v in &report.candidates {
                assert!(!(v.benefited && v.individually_unfair));
                assert!(!v.favored || v.benefited);
            }
            for g in &report.groups {
                assert!(!(g.unfair && g.favored));
            }
        }
    }
}
