//! Brute-force reference implementations.
//!
//! Nothing in here calls the algorithms it is used to check: membership is evaluated on raw
//! coefficient triples, chains and antichains are found by subset enumeration, and axioms are
//! checked by direct quantification.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::PointSet;
use crate::ordinal::Ordinal;
use crate::region::{HiKind, Region};

type Triple = (u32, u32, u32);

fn triple(x: Ordinal) -> Triple {
    x.coefficients()
}

/// A region flattened to raw `(lo, hi, open)` triples.
#[derive(Clone, Debug)]
pub struct NaiveRegion {
    boxes: Vec<Vec<(Triple, Triple, bool)>>,
}

impl From<&Region> for NaiveRegion {
    fn from(r: &Region) -> Self {
        let boxes = r
            .boxes()
            .iter()
            .map(|b| {
                b.sides()
                    .iter()
                    .map(|s| (triple(s.lo()), triple(s.hi()), s.hi_kind() == HiKind::Open))
                    .collect()
            })
            .collect();
        Self { boxes }
    }
}

impl NaiveRegion {
    pub fn contains(&self, p: &[Ordinal]) -> bool {
        self.boxes.iter().any(|b| {
            b.iter().zip(p).all(|((lo, hi, open), x)| {
                let x = triple(*x);
                *lo <= x && if *open { x < *hi } else { x <= *hi }
            })
        })
    }
}

/// The per-coordinate test lattice `T(E)` for endpoint set `E`: `0`, `E`, successors of `E`,
/// and for every limit `λ ∈ E` the successor of the largest lattice point below `λ`.
pub fn test_lattice(endpoints: &BTreeSet<Ordinal>) -> Vec<Ordinal> {
    let mut t: BTreeSet<Ordinal> = endpoints.iter().copied().collect();
    t.insert(Ordinal::ZERO);
    t.extend(endpoints.iter().map(|e| e.succ()));
    let approach: Vec<Ordinal> = endpoints
        .iter()
        .filter(|e| e.is_limit())
        .filter_map(|lam| t.range(..*lam).next_back().map(|x| x.succ()))
        .collect();
    t.extend(approach);
    t.into_iter().collect()
}

/// All points of `T(E)^dim` where `E` collects the endpoints of the given regions.
pub fn lattice_points(regions: &[&Region], dim: usize) -> Vec<Vec<Ordinal>> {
    let endpoints: BTreeSet<Ordinal> = regions.iter().flat_map(|r| r.endpoints()).collect();
    let axis = test_lattice(&endpoints);
    let mut pts: Vec<Vec<Ordinal>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(*x);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Every chain (nonempty, pairwise ⊆-comparable subfamily) by subset enumeration.
pub fn all_chains(balls: &[PointSet]) -> Vec<Vec<usize>> {
    let n = balls.len();
    assert!(n < 24, "subset enumeration limited to 23 sets");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let chain = members.iter().all(|&i| {
            members.iter().all(|&j| balls[i].is_subset(&balls[j]) || balls[j].is_subset(&balls[i]))
        });
        if chain {
            out.push(members);
        }
    }
    out
}

/// Intersection of the listed sets.
pub fn intersect_all(balls: &[PointSet], members: &[usize]) -> PointSet {
    let mut it = members.iter();
    let first = balls[*it.next().expect("nonempty")].clone();
    it.fold(first, |acc, &i| acc.intersection(&balls[i]))
}

/// Size of a largest antichain of the order `le` on `0..n`, found by exhaustive branching.
pub fn max_antichain_size(n: usize, le: &dyn Fn(usize, usize) -> bool) -> usize {
    fn go(i: usize, n: usize, chosen: &mut Vec<usize>, le: &dyn Fn(usize, usize) -> bool) -> usize {
        if i == n {
            return chosen.len();
        }
        // Bound: even taking every remaining element cannot matter if it does not beat a skip.
        let skip = go(i + 1, n, chosen, le);
        if skip >= chosen.len() + (n - i) {
            return skip;
        }
        if chosen.iter().all(|&j| !le(i, j) && !le(j, i)) {
            chosen.push(i);
            let take = go(i + 1, n, chosen, le);
            chosen.pop();
            skip.max(take)
        } else {
            skip
        }
    }
    go(0, n, &mut Vec::new(), le)
}

/// Length of a longest chain of the order `le` on `0..n`, by subset enumeration.
pub fn longest_chain_len(n: usize, le: &dyn Fn(usize, usize) -> bool) -> usize {
    assert!(n < 24);
    (0u32..(1 << n))
        .filter(|mask| {
            let m: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            m.iter().all(|&i| m.iter().all(|&j| le(i, j) || le(j, i)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// First `(x, y, z, γ)` with `d(x,y) ≤ γ`, `d(y,z) ≤ γ` and `d(x,z) ≰ γ`, by direct quantification.
pub fn naive_u2_witness(
    d: &[Vec<usize>],
    gamma_size: usize,
    le: &dyn Fn(usize, usize) -> bool,
) -> Option<(usize, usize, usize, usize)> {
    let n = d.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..gamma_size {
                    if le(d[x][y], g) && le(d[y][z], g) && !le(d[x][z], g) {
                        return Some((x, y, z, g));
                    }
                }
            }
        }
    }
    None
}

/// The ⊆-least set containing both points, if the family has one.
pub fn smallest_member(sets: &[PointSet], x: usize, y: usize) -> Option<usize> {
    let covering: Vec<usize> =
        (0..sets.len()).filter(|&i| sets[i].contains(x) && sets[i].contains(y)).collect();
    covering.iter().copied().find(|&i| covering.iter().all(|&j| sets[i].is_subset(&sets[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_separates_limits() {
        let e: BTreeSet<Ordinal> = [Ordinal::nat(3), Ordinal::OMEGA].into_iter().collect();
        let t = test_lattice(&e);
        // 0, 3, 4, 5 (approach witness for ω), ω, ω+1
        assert_eq!(t.len(), 6);
        assert!(t.contains(&Ordinal::nat(5)));
    }

    #[test]
    fn antichain_of_grid() {
        // 4×4 product order; width 4.
        let le = |i: usize, j: usize| i / 4 <= j / 4 && i % 4 <= j % 4;
        assert_eq!(max_antichain_size(16, &le), 4);
        assert_eq!(longest_chain_len(16, &le), 7);
    }
}
