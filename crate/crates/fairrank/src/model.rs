//! Domain types: candidates, pools, target proportions, and rankings.
//!
//! All types are immutable after construction and safe to share across
//! threads. Pools derive their per-group orderings once, at construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One value of the protected attribute (an opaque, non-empty label).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttributeValue(String);

impl AttributeValue {
    pub fn new(label: impl Into<String>) -> Self {
        Self(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AttributeValue {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// Unique candidate identifier, opaque and non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateId(String);

impl CandidateId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CandidateId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// One eligible person for a query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: CandidateId,
    pub attribute: AttributeValue,
    /// Relevance for the query. Any finite real; simulations draw from (0, 1].
    pub score: f64,
}

impl Candidate {
    pub fn new(id: impl Into<String>, attribute: impl Into<String>, score: f64) -> Self {
        Self {
            id: CandidateId::new(id),
            attribute: AttributeValue::new(attribute.into()),
            score,
        }
    }
}

/// A set of eligible candidates for one query, together with the attribute
/// domain and per-group orderings (score descending, id ascending on ties).
///
/// Construction validates every invariant: distinct domain labels, unique
/// candidate ids, finite scores, and attributes drawn from the domain.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    query_id: String,
    attribute_domain: Vec<AttributeValue>,
    candidates: Vec<Candidate>,
    by_id: HashMap<CandidateId, usize>,
    /// Candidate indices per domain attribute, in within-group rank order.
    groups: Vec<Vec<usize>>,
}

impl CandidatePool {
    pub fn new(
        query_id: impl Into<String>,
        attribute_domain: Vec<AttributeValue>,
        candidates: Vec<Candidate>,
    ) -> Result<Self> {
        let query_id = query_id.into();
        let mut attr_index: HashMap<&AttributeValue, usize> = HashMap::new();
        for (i, attr) in attribute_domain.iter().enumerate() {
            if attr.as_str().is_empty() {
                return Err(Error::EmptyIdentifier("attribute"));
            }
            if attr_index.insert(attr, i).is_some() {
                return Err(Error::DuplicateAttribute(attr.to_string()));
            }
        }

        let mut by_id = HashMap::with_capacity(candidates.len());
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); attribute_domain.len()];
        for (i, c) in candidates.iter().enumerate() {
            if c.id.as_str().is_empty() {
                return Err(Error::EmptyIdentifier("candidate"));
            }
            if !c.score.is_finite() {
                return Err(Error::NonFiniteScore(c.id.to_string()));
            }
            let Some(&g) = attr_index.get(&c.attribute) else {
                return Err(Error::UnknownAttribute {
                    candidate: c.id.to_string(),
                    attribute: c.attribute.to_string(),
                });
            };
            if by_id.insert(c.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(c.id.to_string()));
            }
            groups[g].push(i);
        }
        for group in &mut groups {
            group.sort_by(|&a, &b| {
                candidates[b]
                    .score
                    .partial_cmp(&candidates[a].score)
                    .expect("scores validated finite")
                    .then_with(|| candidates[a].id.cmp(&candidates[b].id))
            });
        }

        Ok(Self {
            query_id,
            attribute_domain,
            candidates,
            by_id,
            groups,
        })
    }

    /// Builds a pool whose attribute domain is the order of first appearance.
    pub fn from_candidates(
        query_id: impl Into<String>,
        candidates: Vec<Candidate>,
    ) -> Result<Self> {
        let mut domain: Vec<AttributeValue> = Vec::new();
        for c in &candidates {
            if !domain.contains(&c.attribute) {
                domain.push(c.attribute.clone());
            }
        }
        Self::new(query_id, domain, candidates)
    }

    /// A new pool with the same query and domain, keeping only the candidates
    /// the predicate accepts.
    pub fn filtered(&self, mut keep: impl FnMut(&Candidate) -> bool) -> Self {
        let candidates = self
            .candidates
            .iter()
            .filter(|c| keep(c))
            .cloned()
            .collect();
        Self::new(self.query_id.clone(), self.attribute_domain.clone(), candidates)
            .expect("subset of a valid pool is valid")
    }

    pub fn query_id(&self) -> &str {
        &self.query_id
    }

    pub fn attribute_domain(&self) -> &[AttributeValue] {
        &self.attribute_domain
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn contains_id(&self, id: &CandidateId) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn get(&self, id: &CandidateId) -> Option<&Candidate> {
        self.by_id.get(id).map(|&i| &self.candidates[i])
    }

    /// Number of candidates carrying `attribute`.
    pub fn group_size(&self, attribute: &AttributeValue) -> usize {
        self.group_indices(attribute).map_or(0, <[usize]>::len)
    }

    pub(crate) fn group_indices(&self, attribute: &AttributeValue) -> Option<&[usize]> {
        self.attribute_domain
            .iter()
            .position(|a| a == attribute)
            .map(|g| self.groups[g].as_slice())
    }

    pub(crate) fn groups_by_domain(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// True when every candidate id of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &CandidatePool) -> bool {
        self.candidates.iter().all(|c| other.contains_id(&c.id))
    }
}

/// Splits the pool into per-attribute groups, each in within-group rank
/// order. Attributes with no candidates yield empty groups.
pub fn partition_groups(pool: &CandidatePool) -> Vec<(AttributeValue, Vec<Candidate>)> {
    pool.attribute_domain
        .iter()
        .zip(&pool.groups)
        .map(|(attr, idxs)| {
            (
                attr.clone(),
                idxs.iter().map(|&i| pool.candidates[i].clone()).collect(),
            )
        })
        .collect()
}

/// Orders one group by score descending; equal scores break by ascending id.
///
/// Callers pass candidates sharing one attribute; the sort itself does not
/// depend on that.
pub fn within_group_rank(group: &[Candidate]) -> Vec<Candidate> {
    let mut sorted = group.to_vec();
    sorted.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("finite scores")
            .then_with(|| a.id.cmp(&b.id))
    });
    sorted
}

/// Target proportions per attribute value, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationRatio {
    entries: Vec<(AttributeValue, f64)>,
}

impl RepresentationRatio {
    pub fn new(entries: Vec<(AttributeValue, f64)>) -> Result<Self> {
        let mut seen: Vec<&AttributeValue> = Vec::new();
        for (attr, p) in &entries {
            if seen.contains(&attr) {
                return Err(Error::DuplicateAttribute(attr.to_string()));
            }
            seen.push(attr);
            if !p.is_finite() || *p < 0.0 || *p > 1.0 {
                return Err(Error::RatioOutOfRange {
                    attribute: attr.to_string(),
                    value: *p,
                });
            }
        }
        let sum: f64 = entries.iter().map(|(_, p)| p).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::RatioSumMismatch(sum));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, attribute: &AttributeValue) -> Option<f64> {
        self.entries
            .iter()
            .find(|(a, _)| a == attribute)
            .map(|&(_, p)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AttributeValue, f64)> {
        self.entries.iter().map(|(a, p)| (a, *p))
    }
}

/// Observed group proportions of a pool: p_a = |group a| / |pool|.
pub fn ratio_from_pool(pool: &CandidatePool) -> Result<RepresentationRatio> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let total = pool.len() as f64;
    let entries = pool
        .attribute_domain()
        .iter()
        .zip(pool.groups_by_domain())
        .map(|(attr, idxs)| (attr.clone(), idxs.len() as f64 / total))
        .collect();
    RepresentationRatio::new(entries)
}

/// One placed candidate inside a ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub id: CandidateId,
    pub attribute: AttributeValue,
    pub score: f64,
}

/// Per-attribute candidate counts inside a ranking prefix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupCounts {
    counts: Vec<(AttributeValue, usize)>,
}

impl GroupCounts {
    pub fn get(&self, attribute: &AttributeValue) -> usize {
        self.counts
            .iter()
            .find(|(a, _)| a == attribute)
            .map_or(0, |&(_, n)| n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AttributeValue, usize)> {
        self.counts.iter().map(|(a, n)| (a, *n))
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&(_, n)| n).sum()
    }

    fn bump(&mut self, attribute: &AttributeValue) {
        match self.counts.iter_mut().find(|(a, _)| a == attribute) {
            Some((_, n)) => *n += 1,
            None => self.counts.push((attribute.clone(), 1)),
        }
    }
}

/// An ordered, duplicate-free list of candidates with 1-indexed rank lookup.
///
/// Within each attribute group the entries keep non-increasing score order;
/// every construction path validates or preserves that.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    entries: Vec<RankEntry>,
    rank_by_id: HashMap<CandidateId, usize>,
}

impl Ranking {
    /// Builds a ranking over `ids`, resolving attribute and score from `pool`.
    pub fn from_order(pool: &CandidatePool, ids: &[CandidateId]) -> Result<Self> {
        let mut entries = Vec::with_capacity(ids.len());
        for id in ids {
            let Some(c) = pool.get(id) else {
                return Err(Error::InvalidRanking(format!(
                    "candidate `{id}` is not in the source pool"
                )));
            };
            entries.push(RankEntry {
                id: c.id.clone(),
                attribute: c.attribute.clone(),
                score: c.score,
            });
        }
        Self::from_entries(entries)
    }

    /// Builds and validates a ranking from raw entries (file loading path).
    pub fn from_entries(entries: Vec<RankEntry>) -> Result<Self> {
        let mut rank_by_id = HashMap::with_capacity(entries.len());
        let mut last_score: HashMap<&AttributeValue, f64> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if !e.score.is_finite() {
                return Err(Error::NonFiniteScore(e.id.to_string()));
            }
            if rank_by_id.insert(e.id.clone(), i + 1).is_some() {
                return Err(Error::DuplicateId(e.id.to_string()));
            }
            if let Some(&prev) = last_score.get(&e.attribute) {
                if e.score > prev {
                    return Err(Error::InvalidRanking(format!(
                        "within-group score order violated at `{}`",
                        e.id
                    )));
                }
            }
            last_score.insert(&e.attribute, e.score);
        }
        // borrow of entries ends here
        let _ = last_score;
        Ok(Self {
            entries,
            rank_by_id,
        })
    }

    pub(crate) fn from_pool_indices(pool: &CandidatePool, order: Vec<usize>) -> Self {
        let entries: Vec<RankEntry> = order
            .into_iter()
            .map(|i| {
                let c = &pool.candidates[i];
                RankEntry {
                    id: c.id.clone(),
                    attribute: c.attribute.clone(),
                    score: c.score,
                }
            })
            .collect();
        let rank_by_id = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i + 1))
            .collect();
        Self {
            entries,
            rank_by_id,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-indexed rank of `id`, or `None` when absent.
    pub fn rank(&self, id: &CandidateId) -> Option<usize> {
        self.rank_by_id.get(id).copied()
    }

    pub fn contains(&self, id: &CandidateId) -> bool {
        self.rank_by_id.contains_key(id)
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    /// The first `k` entries, clamped to the ranking length.
    pub fn top(&self, k: usize) -> &[RankEntry] {
        &self.entries[..k.min(self.entries.len())]
    }

    /// Count of `attribute` inside the top-`k` prefix.
    pub fn group_count(&self, attribute: &AttributeValue, k: usize) -> usize {
        self.top(k).iter().filter(|e| &e.attribute == attribute).count()
    }

    /// All per-attribute counts inside the top-`k` prefix.
    pub fn group_counts(&self, k: usize) -> GroupCounts {
        let mut counts = GroupCounts::default();
        for e in self.top(k) {
            counts.bump(&e.attribute);
        }
        counts
    }

    pub fn ids(&self) -> impl Iterator<Item = &CandidateId> {
        self.entries.iter().map(|e| &e.id)
    }
}
