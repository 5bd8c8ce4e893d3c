use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bits::PointSet;
use crate::{Error, Result};

/// Default cap on the family size for chain enumeration.
pub const DEFAULT_MAX_BALLS: usize = 15;

/// A finite point set with a nonempty list of distinct nonempty balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBallSpace {
    points: Vec<String>,
    balls: Vec<PointSet>,
}

impl FiniteBallSpace {
    pub fn new(points: Vec<String>, balls: Vec<PointSet>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidBallSpace(format!("duplicate point `{p}`")));
            }
        }
        if balls.is_empty() {
            return Err(Error::InvalidBallSpace("no balls".into()));
        }
        let all = PointSet::full(points.len());
        let mut seen = BTreeSet::new();
        for (i, b) in balls.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidBallSpace(format!("ball {i} is empty")));
            }
            if !b.is_subset(&all) {
                return Err(Error::InvalidBallSpace(format!("ball {i} mentions unknown points")));
            }
            if !seen.insert(b.clone()) {
                return Err(Error::InvalidBallSpace(format!("ball {i} is a duplicate")));
            }
        }
        Ok(Self { points, balls })
    }

    /// Like [`FiniteBallSpace::new`] but drops duplicate balls, keeping first occurrences.
    pub fn dedup(points: Vec<String>, balls: Vec<PointSet>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let balls = balls.into_iter().filter(|b| seen.insert(b.clone())).collect();
        Self::new(points, balls)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn balls(&self) -> &[PointSet] {
        &self.balls
    }

    pub fn position(&self, ball: &PointSet) -> Option<usize> {
        self.balls.iter().position(|b| b == ball)
    }

    /// First intersecting pair that is not ⊆-comparable.
    pub fn tree_like_violation(&self) -> Option<(usize, usize)> {
        let b = &self.balls;
        (0..b.len()).find_map(|i| {
            (0..i).find_map(|j| (b[i].intersects(&b[j]) && !b[i].comparable(&b[j])).then_some((j, i)))
        })
    }

    pub fn is_tree_like(&self) -> bool {
        self.tree_like_violation().is_none()
    }

    /// Every up-set `{C : C ⊇ B}` is linearly ordered.
    pub fn is_generalized_tree(&self) -> bool {
        let b = &self.balls;
        b.iter().all(|base| {
            let above: Vec<&PointSet> = b.iter().filter(|c| base.is_subset(c)).collect();
            above.iter().enumerate().all(|(k, x)| above[..k].iter().all(|y| x.comparable(y)))
        })
    }

    pub fn closed_under_finite_intersections(&self) -> bool {
        let set: BTreeSet<&PointSet> = self.balls.iter().collect();
        let b = &self.balls;
        (0..b.len()).all(|i| {
            (0..i).all(|j| {
                let m = b[i].intersection(&b[j]);
                m.is_empty() || set.contains(&m)
            })
        })
    }

    /// Visits every chain once as a strictly increasing index list together with its
    /// intersection.
    pub fn for_each_chain(&self, bound: usize, mut f: impl FnMut(&[usize], &PointSet)) -> Result<usize> {
        if self.balls.len() > bound {
            return Err(Error::BoundExceeded { size: self.balls.len(), bound });
        }
        let mut count = 0;
        let mut chain = Vec::new();
        self.extend_chains(0, &mut chain, None, &mut |c, m| {
            count += 1;
            f(c, m)
        });
        Ok(count)
    }

    fn extend_chains(
        &self,
        from: usize,
        chain: &mut Vec<usize>,
        meet: Option<&PointSet>,
        f: &mut dyn FnMut(&[usize], &PointSet),
    ) {
        for j in from..self.balls.len() {
            let b = &self.balls[j];
            if chain.iter().all(|&i| self.balls[i].comparable(b)) {
                let m = meet.map_or_else(|| b.clone(), |m| m.intersection(b));
                chain.push(j);
                f(chain, &m);
                self.extend_chains(j + 1, chain, Some(&m), f);
                chain.pop();
            }
        }
    }

    pub fn structure_report(&self, bound: usize) -> StructureReport {
        let mut report = StructureReport {
            tree_like: self.is_tree_like(),
            tree_like_witness: self.tree_like_violation(),
            generalized_tree: self.is_generalized_tree(),
            closed_under_finite_intersections: self.closed_under_finite_intersections(),
            chain_intersection_closed: None,
            spherically_complete: None,
            chains: None,
            refusal: None,
        };
        let set: BTreeSet<&PointSet> = self.balls.iter().collect();
        let mut closed = true;
        let mut complete = true;
        match self.for_each_chain(bound, |_, m| {
            complete &= !m.is_empty();
            closed &= m.is_empty() || set.contains(m);
        }) {
            Ok(n) => {
                report.chains = Some(n);
                report.chain_intersection_closed = Some(closed);
                report.spherically_complete = Some(complete);
            }
            Err(e) => report.refusal = Some(format!("{e}")),
        }
        report
    }

    /// `ci(B)`: the nonempty intersections of all chains, with the enumeration log.
    ///
    /// For finite families this is the input again; the result is checked against it.
    pub fn ci(&self, bound: usize) -> Result<CiFinite> {
        let mut found: Vec<PointSet> = Vec::new();
        let mut log = Vec::new();
        let mut empty_chain = None;
        self.for_each_chain(bound, |c, m| {
            if m.is_empty() {
                empty_chain.get_or_insert_with(|| c.to_vec());
                return;
            }
            let idx = match found.iter().position(|f| f == m) {
                Some(i) => i,
                None => {
                    found.push(m.clone());
                    found.len() - 1
                }
            };
            log.push(ChainRecord { chain: c.to_vec(), intersection: idx });
        })?;
        if let Some(c) = empty_chain {
            return Err(Error::InvalidBallSpace(format!("chain {c:?} has empty intersection")));
        }
        let lhs: BTreeSet<&PointSet> = found.iter().collect();
        let rhs: BTreeSet<&PointSet> = self.balls.iter().collect();
        if lhs != rhs {
            return Err(Error::InvalidBallSpace("ci differs from the input family".into()));
        }
        let family = Self::new(self.points.clone(), found)?;
        Ok(CiFinite { family, log })
    }

    /// Every ball of `self` is a ball of `other`, over the same point set.
    pub fn is_expansion_of_by(&self, other: &Self) -> Result<bool> {
        let mut mine: Vec<&String> = self.points.iter().collect();
        let mut theirs: Vec<&String> = other.points.iter().collect();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::PointMismatch("ball spaces are over different point sets".into()));
        }
        let remap: Vec<usize> = self
            .points
            .iter()
            .map(|p| other.points.iter().position(|q| q == p).expect("same point set"))
            .collect();
        let targets: BTreeSet<&PointSet> = other.balls.iter().collect();
        Ok(self.balls.iter().all(|b| {
            let mapped: PointSet = b.iter().map(|i| remap[i]).collect();
            targets.contains(&mapped)
        }))
    }

    /// Whether `sub` is linked and, if so, whether it is a chain.
    pub fn linked_is_chain_check(&self, sub: &[usize]) -> Result<LinkedCheck> {
        if let Some(&i) = sub.iter().find(|&&i| i >= self.balls.len()) {
            return Err(Error::Invalid(format!("ball index {i} out of range")));
        }
        let b = &self.balls;
        let linked = sub
            .iter()
            .enumerate()
            .all(|(k, &i)| sub[..k].iter().all(|&j| b[i].intersects(&b[j])));
        let chain = linked
            && sub.iter().enumerate().all(|(k, &i)| sub[..k].iter().all(|&j| b[i].comparable(&b[j])));
        Ok(LinkedCheck { linked, chain })
    }
}

/// `b2` is an expansion of `b`.
pub fn is_expansion(b: &FiniteBallSpace, b2: &FiniteBallSpace) -> Result<bool> {
    b.is_expansion_of_by(b2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub tree_like: bool,
    /// First intersecting, ⊆-incomparable pair of ball indices.
    pub tree_like_witness: Option<(usize, usize)>,
    pub generalized_tree: bool,
    pub closed_under_finite_intersections: bool,
    pub chain_intersection_closed: Option<bool>,
    pub spherically_complete: Option<bool>,
    pub chains: Option<usize>,
    /// Set when chain enumeration was refused.
    pub refusal: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub chain: Vec<usize>,
    /// Index into the returned family.
    pub intersection: usize,
}

#[derive(Clone, Debug)]
pub struct CiFinite {
    pub family: FiniteBallSpace,
    pub log: Vec<ChainRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedCheck {
    pub linked: bool,
    pub chain: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn pts(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn set(v: &[usize]) -> PointSet {
        v.iter().copied().collect()
    }

    #[test]
    fn simplest_non_tree_like() {
        let b = FiniteBallSpace::new(pts(3), vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let r = b.structure_report(DEFAULT_MAX_BALLS);
        assert!(r.generalized_tree);
        assert!(!r.tree_like);
        assert_eq!(r.tree_like_witness, Some((0, 1)));
        assert_eq!(r.chain_intersection_closed, Some(true));
        assert_eq!(r.spherically_complete, Some(true));
        let lc = b.linked_is_chain_check(&[0, 1]).unwrap();
        assert_eq!(lc, LinkedCheck { linked: true, chain: false });
    }

    #[test]
    fn disjoint_pair_not_linked() {
        let b = FiniteBallSpace::new(pts(2), vec![set(&[0]), set(&[1])]).unwrap();
        assert!(!b.linked_is_chain_check(&[0, 1]).unwrap().linked);
    }

    #[test]
    fn ci_of_small_families() {
        let b = FiniteBallSpace::new(pts(3), vec![set(&[0, 1]), set(&[0, 1, 2])]).unwrap();
        assert_eq!(b.ci(DEFAULT_MAX_BALLS).unwrap().family.balls(), b.balls());
        let single = FiniteBallSpace::new(pts(1), vec![set(&[0])]).unwrap();
        let ci = single.ci(DEFAULT_MAX_BALLS).unwrap();
        assert_eq!(ci.family, single);
        assert_eq!(ci.log.len(), 1);
    }

    #[test]
    fn bound_refusal_keeps_pairwise_flags() {
        let balls: Vec<PointSet> = (0..16).map(|i| set(&[i])).collect();
        let b = FiniteBallSpace::new(pts(16), balls).unwrap();
        let r = b.structure_report(DEFAULT_MAX_BALLS);
        assert!(r.tree_like);
        assert!(r.refusal.is_some());
        assert_eq!(r.spherically_complete, None);
        assert!(matches!(b.ci(DEFAULT_MAX_BALLS), Err(Error::BoundExceeded { size: 16, bound: 15 })));
    }

    #[test]
    fn expansions() {
        let base = FiniteBallSpace::new(pts(2), vec![set(&[0])]).unwrap();
        let bigger = FiniteBallSpace::new(pts(2), vec![set(&[0]), set(&[0, 1])]).unwrap();
        assert!(is_expansion(&base, &bigger).unwrap());
        assert!(is_expansion(&base, &base).unwrap());
        let other = FiniteBallSpace::new(pts(2), vec![set(&[1])]).unwrap();
        assert!(!is_expansion(&base, &other).unwrap());
        let shuffled =
            FiniteBallSpace::new(vec!["1".into(), "0".into()], vec![set(&[1])]).unwrap();
        assert!(is_expansion(&base, &shuffled).unwrap());
        let elsewhere = FiniteBallSpace::new(pts(3), vec![set(&[0])]).unwrap();
        assert!(is_expansion(&base, &elsewhere).is_err());
    }

    #[test]
    fn invalid_spaces_rejected() {
        assert!(FiniteBallSpace::new(pts(2), vec![]).is_err());
        assert!(FiniteBallSpace::new(pts(2), vec![PointSet::new()]).is_err());
        assert!(FiniteBallSpace::new(pts(2), vec![set(&[5])]).is_err());
        assert!(FiniteBallSpace::new(pts(2), vec![set(&[0]), set(&[0])]).is_err());
    }

    fn arb_space(max_balls: usize) -> impl Strategy<Value = FiniteBallSpace> {
        prop::collection::vec(1u32..(1 << 8), 1..=max_balls).prop_map(|masks| {
            let balls = masks
                .into_iter()
                .map(|m| (0..8).filter(|i| m & (1 << i) != 0).collect())
                .collect();
            FiniteBallSpace::dedup(pts(8), balls).unwrap()
        })
    }

    // Greedily keeps masks that are nested with or disjoint from every kept one.
    fn arb_laminar(max_balls: usize) -> impl Strategy<Value = FiniteBallSpace> {
        prop::collection::vec(1u32..(1 << 8), 1..=max_balls).prop_map(|masks| {
            let mut kept: Vec<u32> = Vec::new();
            for m in masks {
                if kept.iter().all(|&k| k & m == 0 || k & m == k || k & m == m) && !kept.contains(&m) {
                    kept.push(m);
                }
            }
            let balls = kept.into_iter().map(|m| (0..8).filter(|i| m & (1 << i) != 0).collect()).collect();
            FiniteBallSpace::new(pts(8), balls).unwrap()
        })
    }

    proptest! {
        #[test]
        fn chain_enumeration_matches_oracle(b in arb_space(10)) {
            let mut chains = Vec::new();
            b.for_each_chain(DEFAULT_MAX_BALLS, |c, m| {
                assert_eq!(&oracle::intersect_all(b.balls(), c), m);
                chains.push(c.to_vec());
            }).unwrap();
            chains.sort();
            let mut expected = oracle::all_chains(b.balls());
            expected.sort();
            prop_assert_eq!(chains, expected);
            let ci = b.ci(DEFAULT_MAX_BALLS).unwrap();
            prop_assert_eq!(ci.family.balls().len(), b.balls().len());
        }

        #[test]
        fn tree_like_chains_union_is_chain(b in arb_laminar(12)) {
            // For tree-like families, chains whose members pairwise intersect merge into a chain.
            prop_assert!(b.is_tree_like());
            let chains = oracle::all_chains(b.balls());
            for c1 in chains.iter().take(40) {
                for c2 in chains.iter().take(40) {
                    let linked = c1.iter().all(|&i| c2.iter().all(|&j| b.balls()[i].intersects(&b.balls()[j])));
                    if linked {
                        let mut u: Vec<usize> = c1.iter().chain(c2).copied().collect();
                        u.sort();
                        u.dedup();
                        prop_assert!(b.linked_is_chain_check(&u).unwrap().chain);
                    }
                }
            }
        }
    }
}
