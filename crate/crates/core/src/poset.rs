//! Finite posets: width, chain covers, directedness.
//!
//! Width and the minimum chain cover both come out of one maximum matching on the bipartite
//! graph of strict comparabilities; the antichain is read off a König vertex cover. Ties are
//! broken by element input order throughout.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::PointSet;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<String>,
    /// `up[i]` = `{ j : i ≤ j }`.
    up: Vec<PointSet>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of the cover pairs `(a, b)` meaning `a ≤ b`.
    pub fn from_covers(elements: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let n = elements.len();
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(Error::InvalidPoset(format!("duplicate element `{e}`")));
            }
        }
        let index = |name: &str| {
            elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::UnknownId(name.into()))
        };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in covers {
            let (i, j) = (index(a)?, index(b)?);
            if i != j && !succ[i].contains(&j) {
                succ[i].push(j);
            }
        }
        if let Some(cycle) = find_cycle(&succ) {
            let names: Vec<&str> = cycle.iter().map(|&i| elements[i].as_str()).collect();
            return Err(Error::InvalidPoset(format!("cycle {}", names.join(" -> "))));
        }
        Ok(Self::close(elements, &succ))
    }

    /// Builds a poset from a relation given as a predicate, checking all three axioms.
    pub fn from_fn(elements: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = elements.len();
        let up: Vec<PointSet> = (0..n).map(|i| (0..n).filter(|&j| le(i, j)).collect()).collect();
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(Error::InvalidPoset(format!("not reflexive at `{}`", elements[i])));
            }
            for j in up[i].iter() {
                if i != j && up[j].contains(i) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric: `{}` and `{}`",
                        elements[i], elements[j]
                    )));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::InvalidPoset(format!(
                        "not transitive through `{}` ≤ `{}`",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        Ok(Self { elements, up })
    }

    /// The chain `0 < 1 < … < n-1` with the given names.
    pub fn chain(elements: Vec<String>) -> Self {
        let n = elements.len();
        Self { elements, up: (0..n).map(|i| (i..n).collect()).collect() }
    }

    fn close(elements: Vec<String>, succ: &[Vec<usize>]) -> Self {
        let n = elements.len();
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        // Reverse topological order: every successor's up-set is final before it is used.
        for &i in topo_order(succ).iter().rev() {
            for &j in &succ[i] {
                up[i] = up[i].union(&up[j]);
            }
        }
        Self { elements, up }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    pub fn up_set(&self, i: usize) -> &PointSet {
        &self.up[i]
    }

    pub fn down_set(&self, i: usize) -> PointSet {
        (0..self.len()).filter(|&j| self.le(j, i)).collect()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.comparable(i, j)))
    }

    pub fn is_antichain(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &i)| set[..k].iter().all(|&j| !self.comparable(i, j)))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].len() == 1).collect()
    }

    fn matching(&self) -> Matching {
        Matching::maximum(self)
    }

    /// A maximum antichain (König).
    pub fn max_antichain(&self) -> Vec<usize> {
        let m = self.matching();
        let n = self.len();
        // Alternating reachability from unmatched left vertices.
        let mut left_seen = vec![false; n];
        let mut right_seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&i| m.right_of[i].is_none()).collect();
        for &i in &stack {
            left_seen[i] = true;
        }
        while let Some(i) = stack.pop() {
            for j in self.up[i].iter().filter(|&j| j != i) {
                if !right_seen[j] {
                    right_seen[j] = true;
                    if let Some(k) = m.left_of[j] {
                        if !left_seen[k] {
                            left_seen[k] = true;
                            stack.push(k);
                        }
                    }
                }
            }
        }
        (0..n).filter(|&i| left_seen[i] && !right_seen[i]).collect()
    }

    pub fn width(&self) -> usize {
        self.len() - self.matching().size
    }

    /// A minimum partition into chains, each listed bottom-up.
    pub fn dilworth_cover(&self) -> Vec<Vec<usize>> {
        let m = self.matching();
        let n = self.len();
        let mut chains = Vec::new();
        for start in (0..n).filter(|&j| m.left_of[j].is_none()) {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(next) = m.right_of[cur] {
                chain.push(next);
                cur = next;
            }
            chains.push(chain);
        }
        chains
    }

    /// Antichain partition by height (Mirsky); its size is the length of a longest chain.
    pub fn height_partition(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let order = {
            let succ: Vec<Vec<usize>> =
                (0..n).map(|i| self.up[i].iter().filter(|&j| j != i).collect()).collect();
            topo_order(&succ)
        };
        let mut height = vec![0usize; n];
        for &i in &order {
            for j in self.up[i].iter().filter(|&j| j != i) {
                height[j] = height[j].max(height[i] + 1);
            }
        }
        let levels = height.iter().max().map_or(0, |h| h + 1);
        let mut parts = vec![Vec::new(); levels];
        for i in 0..n {
            parts[height[i]].push(i);
        }
        parts
    }

    /// A longest chain, bottom-up.
    pub fn longest_chain(&self) -> Vec<usize> {
        let parts = self.height_partition();
        let Some(top) = parts.last().and_then(|p| p.first()) else {
            return Vec::new();
        };
        let mut chain = vec![*top];
        for level in parts[..parts.len() - 1].iter().rev() {
            let cur = *chain.last().unwrap();
            let below = level.iter().copied().find(|&i| self.lt(i, cur));
            chain.push(below.expect("height levels are witnessed by a lower element"));
        }
        chain.reverse();
        chain
    }

    /// Every two members of `subset` have an upper bound inside `subset`.
    pub fn is_directed(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        let inside: PointSet = subset.iter().copied().collect();
        subset.iter().enumerate().all(|(k, &a)| {
            subset[..k]
                .iter()
                .all(|&b| self.up[a].intersection(&self.up[b]).intersects(&inside))
        })
    }

    /// Principal down-sets of the maximal elements, in input order.
    pub fn directed_decomposition(&self) -> Vec<Vec<usize>> {
        self.maximal_elements().into_iter().map(|m| self.down_set(m).iter().collect()).collect()
    }
}

struct Matching {
    /// Matched right partner of a left vertex (`i < right_of[i]`).
    right_of: Vec<Option<usize>>,
    left_of: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    fn maximum(p: &FinitePoset) -> Self {
        let n = p.len();
        let mut m = Self { right_of: vec![None; n], left_of: vec![None; n], size: 0 };
        for i in 0..n {
            let mut seen = vec![false; n];
            if m.augment(p, i, &mut seen) {
                m.size += 1;
            }
        }
        m
    }

    fn augment(&mut self, p: &FinitePoset, i: usize, seen: &mut [bool]) -> bool {
        for j in p.up[i].iter().filter(|&j| j != i) {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            let free = match self.left_of[j] {
                None => true,
                Some(k) => self.augment(p, k, seen),
            };
            if free {
                self.left_of[j] = Some(i);
                self.right_of[i] = Some(j);
                return true;
            }
        }
        false
    }
}

fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = succ.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < succ[v].len() {
                let w = succ[v][top.1];
                top.1 += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    1 => {
                        let mut cycle = vec![w];
                        let mut cur = v;
                        while cur != w {
                            cycle.push(cur);
                            cur = parent[cur];
                        }
                        cycle.push(w);
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

fn topo_order(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in succ {
        for &j in s {
            indeg[j] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for &j in succ[i].iter().rev() {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(j);
            }
        }
    }
    order
}

/// A poset with a least element ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuePoset {
    base: FinitePoset,
    bottom: usize,
}

impl ValuePoset {
    pub fn new(base: FinitePoset, bottom: usize) -> Result<Self> {
        if bottom >= base.len() {
            return Err(Error::InvalidPoset("bottom out of range".into()));
        }
        if let Some(x) = (0..base.len()).find(|&x| !base.le(bottom, x)) {
            return Err(Error::InvalidPoset(format!(
                "`{}` is not above bottom `{}`",
                base.name(x),
                base.name(bottom)
            )));
        }
        Ok(Self { base, bottom })
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.base.le(i, j)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.base.is_chain()
    }
}

/// Outcome of extracting a chain from a linked family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkedChain {
    /// Indices into the input family, smallest ball first.
    pub chain: Vec<usize>,
    pub gamma_width: usize,
    /// `⌈n / width(Γ)⌉`.
    pub bound: usize,
}

/// From a linked family of balls with an ultra-diameter into `gamma`, extracts a ⊆-chain of
/// size at least `⌈n / width(Γ)⌉`.
///
/// Linked plus (D2) makes ⊆-incomparable balls have incomparable values, so the inclusion order
/// on the family is no wider than `gamma`; a largest chain of its Dilworth cover meets the bound.
pub fn extract_chain_from_linked(
    balls: &[PointSet],
    delta: &[usize],
    gamma: &FinitePoset,
) -> Result<LinkedChain> {
    if balls.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    if delta.len() != balls.len() {
        return Err(Error::Invalid("delta must give one value per ball".into()));
    }
    for i in 0..balls.len() {
        for j in 0..i {
            if !balls[i].intersects(&balls[j]) {
                return Err(Error::Invalid(format!("not linked: balls {j} and {i} are disjoint")));
            }
            if balls[i] == balls[j] {
                return Err(Error::Invalid(format!("balls {j} and {i} coincide")));
            }
        }
    }
    crate::ultrametric::validate_ultra_diameter(balls, delta, gamma)
        .map_err(|v| Error::Invalid(format!("{v}")))?;
    let names: Vec<String> = (0..balls.len()).map(|i| format!("{i}")).collect();
    let inclusion = FinitePoset::from_fn(names, |i, j| balls[i].is_subset(&balls[j]))?;
    let cover = inclusion.dilworth_cover();
    let chain = cover
        .into_iter()
        .enumerate()
        .max_by_key(|(k, c)| (c.len(), core::cmp::Reverse(*k)))
        .map(|(_, c)| c)
        .expect("nonempty family");
    let gamma_width = gamma.width();
    Ok(LinkedChain { chain, gamma_width, bound: balls.len().div_ceil(gamma_width) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn covers(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn abc() -> Vec<String> {
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_and_cycles() {
        let p = FinitePoset::from_covers(abc(), &covers(&[("a", "b"), ("b", "c")])).unwrap();
        assert!(p.le(0, 2));
        let err = FinitePoset::from_covers(abc(), &covers(&[("a", "b"), ("b", "a")])).unwrap_err();
        assert!(matches!(err, Error::InvalidPoset(ref m) if m.contains("cycle")), "{err}");
        let anti = FinitePoset::from_covers(abc(), &[]).unwrap();
        assert_eq!(anti.width(), 3);
        let dup = FinitePoset::from_covers(vec!["a".into(), "a".into()], &[]);
        assert!(dup.is_err());
    }

    #[test]
    fn width_examples() {
        let anti = FinitePoset::from_fn(names(2), |i, j| i == j).unwrap();
        assert_eq!(anti.width(), 2);
        let chain = FinitePoset::chain(names(5));
        assert_eq!(chain.width(), 1);
        assert_eq!(chain.dilworth_cover(), vec![vec![0, 1, 2, 3, 4]]);
        let grid = FinitePoset::from_fn(names(16), |i, j| i / 4 <= j / 4 && i % 4 <= j % 4).unwrap();
        assert_eq!(grid.width(), 4);
        assert!(grid.is_antichain(&grid.max_antichain()));
        let anti3 = FinitePoset::from_fn(names(3), |i, j| i == j).unwrap();
        assert_eq!(anti3.dilworth_cover(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn directed_examples() {
        let grid = FinitePoset::from_fn(names(16), |i, j| i / 4 <= j / 4 && i % 4 <= j % 4).unwrap();
        assert!(grid.is_directed(&(0..16).collect::<Vec<_>>()));
        assert_eq!(grid.directed_decomposition().len(), 1);
        let anti = FinitePoset::from_fn(names(2), |i, j| i == j).unwrap();
        assert!(!anti.is_directed(&[0, 1]));
        assert_eq!(anti.directed_decomposition().len(), 2);
        assert_eq!(FinitePoset::chain(names(4)).directed_decomposition().len(), 1);
        for i in 0..16 {
            let down: Vec<usize> = grid.down_set(i).iter().collect();
            assert!(grid.is_directed(&down));
        }
    }

    #[test]
    fn value_poset_requires_bottom() {
        let chain = FinitePoset::chain(names(3));
        assert!(ValuePoset::new(chain.clone(), 0).is_ok());
        assert!(ValuePoset::new(chain, 1).is_err());
    }

    #[test]
    fn linked_chain_in_linear_gamma() {
        let balls: Vec<PointSet> =
            vec![[0].into_iter().collect(), [0, 1].into_iter().collect(), [0, 1, 2].into_iter().collect()];
        let gamma = FinitePoset::chain(names(3));
        let out = extract_chain_from_linked(&balls, &[0, 1, 2], &gamma).unwrap();
        assert_eq!(out.chain, vec![0, 1, 2]);
        let single = extract_chain_from_linked(&balls[..1], &[0], &gamma).unwrap();
        assert_eq!(single.chain, vec![0]);
        let disjoint = [PointSet::singleton(0), PointSet::singleton(1)];
        assert!(extract_chain_from_linked(&disjoint, &[0, 0], &gamma).is_err());
    }

    fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                // Random DAG on the index order, then closed.
                let succ: Vec<Vec<usize>> = (0..n)
                    .map(|i| ((i + 1)..n).filter(|&j| bits[i * n + j]).collect())
                    .collect();
                let covers: Vec<(String, String)> = succ
                    .iter()
                    .enumerate()
                    .flat_map(|(i, s)| s.iter().map(move |&j| (i.to_string(), j.to_string())))
                    .collect();
                FinitePoset::from_covers(names(n), &covers).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn dilworth_equals_oracle_width(p in arb_poset(12)) {
            let le = |i: usize, j: usize| p.le(i, j);
            let w = oracle::max_antichain_size(p.len(), &le);
            let cover = p.dilworth_cover();
            prop_assert_eq!(cover.len(), w);
            prop_assert_eq!(p.max_antichain().len(), w);
            prop_assert!(p.is_antichain(&p.max_antichain()));
            let mut seen: Vec<usize> = cover.iter().flatten().copied().collect();
            seen.sort();
            prop_assert_eq!(seen, (0..p.len()).collect::<Vec<_>>());
            for c in &cover {
                prop_assert!(c.windows(2).all(|w| p.lt(w[0], w[1])));
            }
        }

        #[test]
        fn mirsky_dual(p in arb_poset(10)) {
            let le = |i: usize, j: usize| p.le(i, j);
            let parts = p.height_partition();
            prop_assert_eq!(parts.len(), oracle::longest_chain_len(p.len(), &le));
            prop_assert!(parts.iter().all(|a| p.is_antichain(a)));
            let chain = p.longest_chain();
            prop_assert_eq!(chain.len(), parts.len());
            prop_assert!(chain.windows(2).all(|w| p.lt(w[0], w[1])));
        }

        #[test]
        fn decomposition_parts_directed(p in arb_poset(12)) {
            let parts = p.directed_decomposition();
            prop_assert_eq!(parts.len(), p.maximal_elements().len());
            let mut all = PointSet::new();
            for part in &parts {
                prop_assert!(p.is_directed(part));
                all = all.union(&part.iter().copied().collect());
            }
            prop_assert_eq!(all, PointSet::full(p.len()));
        }
    }
}
