//! Ball spaces of any finite chain-intersection rank.
//!
//! Start from a finite family 𝔄 over seed atoms. Each set `A` gets its own fresh atoms
//! `e_{A,0}, e_{A,1}, …` and `E_n(A) = A ∪ {e_{A,i} : i ≥ n}`. Level `k+1` consists of the sets
//! `E_n(S)` for `S` on level `k`; the gadget of depth `r` is level `r`. Each application of
//! `ci` recovers one level below, so the rank is `r`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{fail, Report};
use crate::bits::PointSet;
use crate::{Error, Result};

pub const MAX_GADGET_DEPTH: usize = 3;

/// A set identifier: seed index followed by the tail starts of each level.
pub type SetId = Vec<u32>;

/// Seed atoms plus, for each owner id, the tail `{e_{id,i} : i ≥ start}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GSet {
    pub base: PointSet,
    pub tails: BTreeMap<SetId, u32>,
}

impl GSet {
    pub fn is_subset(&self, other: &Self) -> bool {
        self.base.is_subset(&other.base)
            && self.tails.iter().all(|(id, s)| other.tails.get(id).is_some_and(|t| t <= s))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let tails = self
            .tails
            .iter()
            .filter_map(|(id, s)| other.tails.get(id).map(|t| (id.clone(), *s.max(t))))
            .collect();
        Self { base: self.base.intersection(&other.base), tails }
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty() && self.tails.is_empty()
    }
}

/// A named member of some level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GMember {
    pub id: SetId,
    pub set: GSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankGadget {
    pub depth: usize,
    pub seed_atoms: Vec<String>,
    pub seeds: Vec<PointSet>,
    /// How many tail starts are instantiated per level when sampling.
    pub width: u32,
}

impl RankGadget {
    pub fn new(seed_atoms: Vec<String>, seeds: Vec<PointSet>, depth: usize) -> Result<Self> {
        if depth > MAX_GADGET_DEPTH {
            return Err(Error::BoundExceeded { size: depth, bound: MAX_GADGET_DEPTH });
        }
        if seeds.is_empty() || seeds.iter().any(|s| s.is_empty() || s.iter().any(|a| a >= seed_atoms.len())) {
            return Err(Error::Invalid("seed sets must be nonempty subsets of the atoms".into()));
        }
        let distinct: BTreeSet<&PointSet> = seeds.iter().collect();
        if distinct.len() != seeds.len() {
            return Err(Error::Invalid("seed sets must be distinct".into()));
        }
        Ok(Self { depth, seed_atoms, seeds, width: 3 })
    }

    /// `𝔄 = {{a}, {b}}`.
    pub fn standard(depth: usize) -> Result<Self> {
        Self::new(vec!["a".into(), "b".into()], vec![PointSet::singleton(0), PointSet::singleton(1)], depth)
    }

    /// `E_n(S)`.
    pub fn extend(s: &GMember, n: u32) -> GMember {
        let mut set = s.set.clone();
        set.tails.insert(s.id.clone(), n);
        let mut id = s.id.clone();
        id.push(n);
        GMember { id, set }
    }

    /// Sampled members of level `k` with tail starts below `width`.
    pub fn level(&self, k: usize) -> Result<Vec<GMember>> {
        let mut cur: Vec<GMember> = self
            .seeds
            .iter()
            .enumerate()
            .map(|(i, s)| GMember { id: vec![i as u32], set: GSet { base: s.clone(), tails: BTreeMap::new() } })
            .collect();
        for _ in 0..k {
            cur = cur.iter().flat_map(|s| (0..self.width).map(move |n| Self::extend(s, n))).collect();
        }
        // Guard: distinct owners, so tails of distinct sets never share atoms.
        let ids: BTreeSet<&SetId> = cur.iter().map(|m| &m.id).collect();
        if ids.len() != cur.len() {
            return Err(Error::Invalid("tail owners collide".into()));
        }
        Ok(cur)
    }

    /// Limit of `E_n(S)` as `n → ∞`: the sampled prefix is intersected and every tail whose
    /// start moves along the sequence is dropped.
    pub fn chain_limit(s: &GMember, samples: u32) -> Result<GSet> {
        let seq: Vec<GSet> = (0..samples).map(|n| Self::extend(s, n).set).collect();
        for w in seq.windows(2) {
            if !w[1].is_subset(&w[0]) || w[0].is_subset(&w[1]) {
                return Err(Error::Invalid(format!("E_n({:?}) is not strictly decreasing", s.id)));
            }
        }
        let mut meet = seq.iter().skip(1).fold(seq[0].clone(), |acc, x| acc.intersection(x));
        let moving: Vec<SetId> = meet
            .tails
            .keys()
            .filter(|id| seq[0].tails.get(*id) != seq[seq.len() - 1].tails.get(*id))
            .cloned()
            .collect();
        for id in moving {
            meet.tails.remove(&id);
        }
        Ok(meet)
    }
}

/// Outcome of the iterated `ci` on the gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRank {
    pub rank: usize,
    /// Levels present after each step, top level first.
    pub steps: Vec<Vec<usize>>,
}

/// Iterates `ci` over levels: the declared chains with no least member are `{E_n(S)}_n` for `S`
/// one level below a present level; their limits are checked on samples before the level is
/// added.
pub fn gadget_cir(g: &RankGadget, samples: u32) -> Result<GadgetRank> {
    let mut present: BTreeSet<usize> = BTreeSet::from([g.depth]);
    let mut steps = Vec::new();
    loop {
        let mut new = BTreeSet::new();
        for &k in &present {
            if k == 0 {
                continue;
            }
            for s in g.level(k - 1)? {
                let limit = RankGadget::chain_limit(&s, samples)?;
                if limit != s.set || limit.is_empty() {
                    return Err(Error::Invalid(format!("chain over {:?} does not meet in its base", s.id)));
                }
            }
            if !present.contains(&(k - 1)) {
                new.insert(k - 1);
            }
        }
        if new.is_empty() {
            return Ok(GadgetRank { rank: steps.len(), steps });
        }
        present.extend(new);
        steps.push(present.iter().rev().copied().collect());
    }
}

/// Checks each level and the rank.
pub fn rank_gadget_verify(g: &RankGadget, samples: u32) -> Result<Report> {
    let samples = samples.max(4);
    let mut report = Report::new(&format!("rank gadget, depth {}", g.depth));
    for k in 1..=g.depth {
        report.check(&format!("a{k}"), &format!("{{E_n(S)}}_n is a chain meeting in S, S on level {}", k - 1), || {
            let lower = g.level(k - 1)?;
            for s in &lower {
                let limit = RankGadget::chain_limit(s, samples)?;
                if limit != s.set {
                    return Err(fail("a", format!("limit over {:?} is not S", s.id)));
                }
            }
            Ok(format!("{} chains", lower.len()))
        });
        report.check(&format!("b{k}"), &format!("E_i(S), E_j(T) on level {k} comparable iff S = T"), || {
            let members: Vec<(SetId, GMember)> = g
                .level(k - 1)?
                .iter()
                .flat_map(|s| (0..g.width + 1).map(move |n| (s.id.clone(), RankGadget::extend(s, n))))
                .collect();
            let mut pairs = 0;
            for (s, a) in &members {
                for (t, b) in &members {
                    let comparable = a.set.is_subset(&b.set) || b.set.is_subset(&a.set);
                    if comparable != (s == t) {
                        return Err(fail("b", format!("{:?} vs {:?}", a.id, b.id)));
                    }
                    pairs += 1;
                }
            }
            Ok(format!("{pairs} ordered pairs"))
        });
    }
    report.check("c", &format!("cir = {}", g.depth), || {
        let r = gadget_cir(g, samples)?;
        if r.rank != g.depth {
            return Err(fail("c", format!("rank {}", r.rank)));
        }
        Ok(format!("rank {}", r.rank))
    });
    Ok(report)
}
