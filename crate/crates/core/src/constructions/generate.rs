//! Seeded random instances. Every generator is deterministic in its seed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ballspace::FiniteBallSpace;
use crate::bits::PointSet;
use crate::poset::{FinitePoset, ValuePoset};
use crate::ultrametric::{validate_ultrametric, FiniteUltrametricSpace};
use crate::{Error, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Linear,
    Narrow,
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Levels `0..=depth` of nested partitions: level 0 is discrete, level `depth` is one block.
/// Returns `d(x,y)` = the lowest level at which `x` and `y` share a block.
fn hierarchy(n: usize, depth: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut d = vec![vec![0usize; n]; n];
    let mut blocks: Vec<Vec<usize>> = vec![(0..n).collect()];
    for level in (1..=depth).rev() {
        let mut next = Vec::new();
        for b in blocks {
            for &x in &b {
                for &y in &b {
                    if x != y {
                        d[x][y] = level;
                    }
                }
            }
            if level == 1 {
                continue;
            }
            let mut b = b;
            b.shuffle(rng);
            let parts = rng.gen_range(1..=3usize).min(b.len());
            let mut cuts: Vec<usize> = (1..b.len()).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
            cuts.sort_unstable();
            let mut start = 0;
            for c in cuts.into_iter().chain([b.len()]) {
                next.push(b[start..c].to_vec());
                start = c;
            }
        }
        blocks = next;
    }
    d
}

/// A valid ultrametric built from nested partitions. `Linear` uses the chain `0 < … < depth`;
/// `Narrow` pairs two independent hierarchies with values in the product of two chains.
pub fn random_ultrametric(n: usize, kind: ValueKind, depth: usize, seed: u64) -> Result<FiniteUltrametricSpace> {
    if !(2..=64).contains(&n) {
        return Err(Error::Invalid(format!("n = {n} outside 2..=64")));
    }
    if depth == 0 {
        return Err(Error::Invalid("depth must be positive".into()));
    }
    let mut rng = rng(seed);
    let l = depth + 1;
    let (gamma, d) = match kind {
        ValueKind::Linear => {
            let g = ValuePoset::new(FinitePoset::chain(names(l)), 0)?;
            (g, hierarchy(n, depth, &mut rng))
        }
        ValueKind::Narrow => {
            let d1 = hierarchy(n, depth, &mut rng);
            let d2 = hierarchy(n, depth, &mut rng);
            let elems: Vec<String> = (0..l * l).map(|i| format!("{}.{}", i / l, i % l)).collect();
            let base = FinitePoset::from_fn(elems, |i, j| i / l <= j / l && i % l <= j % l)?;
            let d = (0..n).map(|x| (0..n).map(|y| d1[x][y] * l + d2[x][y]).collect()).collect();
            (ValuePoset::new(base, 0)?, d)
        }
    };
    validate_ultrametric(names(n), gamma, d).map_err(|v| Error::Invalid(format!("generator produced {v}")))
}

/// Changes one off-diagonal entry, symmetrically, to a random value.
pub fn mutate_entry(s: &FiniteUltrametricSpace, rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, (usize, usize)) {
    let mut d = s.table().to_vec();
    let n = s.len();
    let x = rng.gen_range(0..n);
    let y = (x + rng.gen_range(1..n)) % n;
    let v = rng.gen_range(0..s.gamma().len());
    d[x][y] = v;
    d[y][x] = v;
    (d, (x, y))
}

/// Random nonempty subsets of `0..n`, deduplicated.
pub fn random_ball_space(n: usize, max_balls: usize, rng: &mut ChaCha8Rng) -> FiniteBallSpace {
    let count = rng.gen_range(1..=max_balls.max(1));
    let balls = (0..count)
        .map(|_| {
            let mut s: PointSet = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            if s.is_empty() {
                s.insert(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    FiniteBallSpace::dedup(names(n), balls).expect("nonempty balls")
}

/// A random order on `0..n` extending the index order, with edge density `p`.
pub fn random_poset(n: usize, p: f64, rng: &mut ChaCha8Rng) -> FinitePoset {
    let mut covers = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                covers.push((i.to_string(), j.to_string()));
            }
        }
    }
    FinitePoset::from_covers(names(n), &covers).expect("acyclic by construction")
}

/// A family with the smallest-set property: a laminar family plus `X`, or a family closed
/// under intersection plus `X`.
pub fn random_tau(n: usize, rng: &mut ChaCha8Rng) -> Vec<PointSet> {
    let mut tau: Vec<PointSet> = vec![PointSet::full(n)];
    if rng.gen_bool(0.5) {
        for _ in 0..rng.gen_range(1..=2 * n) {
            let s: PointSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if s.len() >= 2 && tau.iter().all(|t| t.is_subset(&s) || s.is_subset(t) || !t.intersects(&s)) && !tau.contains(&s) {
                tau.push(s);
            }
        }
    } else {
        for _ in 0..rng.gen_range(1..=n) {
            let s: PointSet = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            if s.len() >= 2 && !tau.contains(&s) {
                tau.push(s);
            }
        }
        loop {
            let mut added = false;
            for i in 0..tau.len() {
                for j in 0..i {
                    let m = tau[i].intersection(&tau[j]);
                    if m.len() >= 2 && !tau.contains(&m) {
                        tau.push(m);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
    }
    tau
}

/// Indices of a random subfamily of balls that all contain one chosen point; such a family is
/// linked.
pub fn random_linked_family(balls: &[PointSet], n_points: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let x = rng.gen_range(0..n_points);
    let mut through: Vec<usize> = (0..balls.len()).filter(|&i| balls[i].contains(x)).collect();
    through.shuffle(rng);
    let keep = rng.gen_range(1..=through.len().max(1)).min(through.len());
    let mut out: Vec<usize> = through.into_iter().take(keep).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ultrametric::{construct_from_tau, ultra_diameter_from};

    #[test]
    fn two_points() {
        let s = random_ultrametric(2, ValueKind::Linear, 1, 7).unwrap();
        assert_eq!(s.dist(0, 1), 1);
    }

    #[test]
    fn linear_and_narrow() {
        for seed in 0..20 {
            let s = random_ultrametric(8, ValueKind::Linear, 3, seed).unwrap();
            assert!(s.ball_space().is_tree_like());
            let s = random_ultrametric(8, ValueKind::Narrow, 3, seed).unwrap();
            assert!(ultra_diameter_from(&s).is_ok());
        }
    }

    #[test]
    fn deterministic() {
        let a = random_ultrametric(10, ValueKind::Narrow, 3, 42).unwrap();
        let b = random_ultrametric(10, ValueKind::Narrow, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(random_tau(6, &mut rng(3)), random_tau(6, &mut rng(3)));
    }

    #[test]
    fn tau_has_smallest_sets() {
        let mut r = rng(11);
        for _ in 0..50 {
            let tau = random_tau(7, &mut r);
            assert!(construct_from_tau(names(7), &tau).is_ok());
        }
    }

    #[test]
    fn linked_families_are_linked() {
        let s = random_ultrametric(9, ValueKind::Narrow, 3, 5).unwrap();
        let b = s.ball_space();
        let mut r = rng(1);
        for _ in 0..20 {
            let f = random_linked_family(b.balls(), 9, &mut r);
            assert!(b.linked_is_chain_check(&f).unwrap().linked);
        }
    }
}
