//! The acceptance criteria as runnable checks over seeded random instances.

use std::time::{Duration, Instant};

use bsp_core::ballspace::FiniteBallSpace;
use bsp_core::constructions::{
    ex1_verify, ex2_verify, mutate_entry, random_ball_space, random_linked_family, random_poset,
    random_tau, random_ultrametric, rank_gadget_verify, rng, RankGadget, Report, ValueKind,
};
use bsp_core::oracle::{self, NaiveRegion};
use bsp_core::poset::{extract_chain_from_linked, FinitePoset, ValuePoset};
use bsp_core::ultrametric::{
    check_ut, construct_from_tau, ultra_diameter_from, validate_ultra_diameter,
    validate_ultrametric, FiniteUltrametricSpace, Violation,
};
use bsp_core::{HiKind, Interval, OrdBox, Ordinal, PointSet, Region};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub truncation: usize,
    pub samples: usize,
    pub max_balls: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 1, trials: 200, truncation: 12, samples: 32, max_balls: 15 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall time; left out of JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "ultrametric validation on hierarchies and mutations"),
    (2, "linear values give tree-like, ci-closed ball spaces"),
    (3, "induced ultra-diameters and planted (D1)/(D2) violations"),
    (4, "smallest-set families round-trip through u_τ"),
    (5, "first construction certificate"),
    (6, "second construction certificate"),
    (7, "rank gadget reaches each finite rank"),
    (8, "poset width, decomposition and linked chains"),
    (9, "region algebra against the lattice oracle"),
    (10, "finite ci agrees with chain enumeration"),
];

/// Wall-time limit per criterion, where one applies.
pub fn time_limit(id: u8) -> Option<Duration> {
    let secs = match id {
        1 => 20,
        5 => 10,
        6 | 7 => 5,
        8 => 15,
        9 => 10,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

/// Rayon is used unless `BSP_NO_PARALLEL` is set.
pub fn parallel() -> bool {
    std::env::var_os("BSP_NO_PARALLEL").is_none()
}

fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if parallel() {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

fn trial_rng(seed: u64, criterion: u8, i: usize) -> ChaCha8Rng {
    rng(seed ^ (u64::from(criterion) << 56) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn first_error(results: Vec<Result<(), String>>) -> Result<(), String> {
    results.into_iter().collect()
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => c1(cfg),
        2 => c2(cfg),
        3 => c3(cfg),
        4 => c4(cfg),
        5 => report_outcome(ex1_verify(cfg.truncation, cfg.samples)),
        6 => report_outcome(ex2_verify(cfg.samples)),
        7 => c7(cfg),
        8 => c8(cfg),
        9 => c9(cfg),
        10 => c10(cfg),
        _ => Err(format!("no criterion {id}")),
    };
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    CriterionResult { id, title, passed, detail, elapsed: start.elapsed() }
}

/// Criteria in order. Each criterion parallelizes internally, so they run one after another.
pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect()
}

fn report_outcome(r: bsp_core::Result<Report>) -> Result<String, String> {
    let r = r.map_err(|e| e.to_string())?;
    for w in &r.witnesses {
        w.verify().map_err(|e| format!("witness does not re-verify: {e}"))?;
    }
    let failed: Vec<String> = r.clauses.iter().filter(|c| !c.passed).map(|c| format!("({}) {}", c.id, c.detail)).collect();
    if failed.is_empty() {
        Ok(format!("{} clauses, {} witnesses", r.clauses.len(), r.witnesses.len()))
    } else {
        Err(failed.join("; "))
    }
}

/// Re-checks a reported violation against the table.
pub fn violation_holds(d: &[Vec<usize>], gamma: &ValuePoset, v: &Violation) -> bool {
    match *v {
        Violation::U1 { x, y } => (d[x][y] == gamma.bottom()) != (x == y),
        Violation::U2 { x, y, z, gamma: g } => gamma.le(d[x][y], g) && gamma.le(d[y][z], g) && !gamma.le(d[x][z], g),
        Violation::U3 { x, y } => d[x][y] != d[y][x],
        Violation::Ut { x, y, z } => {
            let m = if gamma.le(d[x][y], d[y][z]) { d[y][z] } else { d[x][y] };
            !gamma.le(d[x][z], m)
        }
        _ => false,
    }
}

fn exhaustive_ok(d: &[Vec<usize>], gamma: &ValuePoset) -> bool {
    let n = d.len();
    let base = gamma.base();
    (0..n).all(|x| (0..n).all(|y| (d[x][y] == gamma.bottom()) == (x == y) && d[x][y] == d[y][x]))
        && oracle::naive_u2_witness(d, gamma.len(), &|a, b| base.le(a, b)).is_none()
}

fn c1(cfg: &SuiteConfig) -> Result<String, String> {
    let stats = par_map(cfg.trials, |i| -> Result<(bool, bool), String> {
        let mut r = trial_rng(cfg.seed, 1, i);
        let n = 2 + i % 11;
        let kind = if i % 2 == 0 { ValueKind::Linear } else { ValueKind::Narrow };
        let s = random_ultrametric(n, kind, 2 + i % 2, r.gen()).map_err(|e| e.to_string())?;
        if !exhaustive_ok(s.table(), s.gamma()) {
            return Err(format!("trial {i}: accepted table fails the exhaustive check"));
        }
        let (d, _) = mutate_entry(&s, &mut r);
        let linear = s.gamma().is_linear();
        match validate_ultrametric(names(n), s.gamma().clone(), d.clone()) {
            Ok(_) => {
                if !exhaustive_ok(&d, s.gamma()) {
                    return Err(format!("trial {i}: mutated table accepted but invalid"));
                }
                if linear && check_ut(&d, s.gamma()).is_some() {
                    return Err(format!("trial {i}: (U2) holds, (UT) fails"));
                }
                Ok((false, linear))
            }
            Err(v) => {
                if !violation_holds(&d, s.gamma(), &v) {
                    return Err(format!("trial {i}: witness {v} does not hold"));
                }
                if exhaustive_ok(&d, s.gamma()) {
                    return Err(format!("trial {i}: valid table rejected with {v}"));
                }
                if linear && matches!(v, Violation::U2 { .. }) && check_ut(&d, s.gamma()).is_none() {
                    return Err(format!("trial {i}: (U2) fails, (UT) holds"));
                }
                Ok((true, linear))
            }
        }
    });
    let stats: Vec<(bool, bool)> = stats.into_iter().collect::<Result<_, _>>()?;
    let rejected = stats.iter().filter(|s| s.0).count();
    Ok(format!(
        "{} instances accepted; {} mutations: {} rejected with verified witnesses, {} still valid",
        cfg.trials,
        stats.len(),
        rejected,
        stats.len() - rejected
    ))
}

fn is_chain(b: &[PointSet]) -> bool {
    b.iter().all(|x| b.iter().all(|y| x.comparable(y)))
}

fn c2(cfg: &SuiteConfig) -> Result<String, String> {
    let counts = par_map(cfg.trials, |i| -> Result<usize, String> {
        let mut r = trial_rng(cfg.seed, 2, i);
        let n = 2 + i % 7;
        let s = random_ultrametric(n, ValueKind::Linear, 1 + i % 3, r.gen()).map_err(|e| e.to_string())?;
        let b = s.ball_space();
        let rep = b.structure_report(cfg.max_balls);
        if !rep.tree_like {
            return Err(format!("trial {i}: B_d not tree-like at {:?}", rep.tree_like_witness));
        }
        let ci = b.ci(cfg.max_balls).map_err(|e| e.to_string())?;
        let mut got: Vec<&PointSet> = ci.family.balls().iter().collect();
        let mut want: Vec<&PointSet> = b.balls().iter().collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(format!("trial {i}: ci(B_d) ≠ B_d"));
        }
        let mut linked = 0;
        for k in 0..50 {
            let sub = if k % 2 == 0 {
                random_linked_family(b.balls(), n, &mut r)
            } else {
                let mut all: Vec<usize> = (0..b.balls().len()).collect();
                all.shuffle(&mut r);
                all.truncate(r.gen_range(1..=all.len()));
                all.sort_unstable();
                all
            };
            let check = b.linked_is_chain_check(&sub).map_err(|e| e.to_string())?;
            if check.linked {
                linked += 1;
                let fam: Vec<PointSet> = sub.iter().map(|&j| b.balls()[j].clone()).collect();
                if !check.chain || !is_chain(&fam) {
                    return Err(format!("trial {i}: linked subfamily {sub:?} is not a chain"));
                }
            }
        }
        Ok(linked)
    });
    let linked: usize = counts.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().sum();
    Ok(format!("{} spaces; {linked} linked subfamilies, all chains", cfg.trials))
}

/// A value not below `v`, if there is one.
fn value_not_below(g: &FinitePoset, v: usize) -> Option<usize> {
    (0..g.len()).find(|&w| !g.le(w, v))
}

fn diameter_violation_holds(balls: &[PointSet], delta: &[usize], g: &FinitePoset, v: &Violation) -> bool {
    match *v {
        Violation::D1 { small, large } => balls[small].is_subset(&balls[large]) && !g.le(delta[small], delta[large]),
        Violation::D2 { b0, b1 } => {
            balls[b0].intersects(&balls[b1]) && g.le(delta[b0], delta[b1]) && !balls[b0].is_subset(&balls[b1])
        }
        _ => false,
    }
}

fn c3(cfg: &SuiteConfig) -> Result<String, String> {
    let planted = par_map(cfg.trials, |i| -> Result<usize, String> {
        let mut r = trial_rng(cfg.seed, 3, i);
        let kind = if i % 2 == 0 { ValueKind::Linear } else { ValueKind::Narrow };
        let s = random_ultrametric(3 + i % 8, kind, 2 + i % 2, r.gen()).map_err(|e| e.to_string())?;
        let u = ultra_diameter_from(&s).map_err(|e| format!("trial {i}: {e}"))?;
        let n = u.balls.len();
        let mut caught = 0;
        let mut plant = |delta: Vec<usize>, what: &str| -> Result<(), String> {
            match validate_ultra_diameter(&u.balls, &delta, &u.gamma) {
                Ok(()) => Err(format!("trial {i}: planted {what} violation not caught")),
                Err(v) if diameter_violation_holds(&u.balls, &delta, &u.gamma, &v) => {
                    caught += 1;
                    Ok(())
                }
                Err(v) => Err(format!("trial {i}: witness {v} does not hold")),
            }
        };
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && u.balls[a].is_subset(&u.balls[b]))
            .collect();
        if let Some(&(a, b, w)) = pairs
            .iter()
            .filter_map(|&(a, b)| value_not_below(&u.gamma, u.delta[b]).map(|w| (a, b, w)))
            .collect::<Vec<_>>()
            .choose(&mut r)
        {
            let mut delta = u.delta.clone();
            delta[a] = w;
            let _ = b;
            plant(delta, "(D1)")?;
        }
        if let Some(&(a, b)) = pairs.choose(&mut r) {
            let mut delta = u.delta.clone();
            delta[b] = u.delta[a];
            plant(delta, "(D2)")?;
        }
        Ok(caught)
    });
    let caught: usize = planted.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().sum();
    Ok(format!("{} induced δ valid; {caught} planted violations caught with verified witnesses", cfg.trials))
}

fn c4(cfg: &SuiteConfig) -> Result<String, String> {
    let trials = 100;
    first_error(par_map(trials, |i| {
        let mut r = trial_rng(cfg.seed, 4, i);
        let n = 2 + i % 7;
        let tau = random_tau(n, &mut r);
        let s = construct_from_tau(names(n), &tau).map_err(|e| format!("trial {i}: {e}"))?;
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let want = oracle::smallest_member(&tau, x, y).ok_or(format!("trial {i}: τ has no smallest cover"))?;
                if s.precise_ball(x, y).map_err(|e| e.to_string())? != tau[want] {
                    return Err(format!("trial {i}: B({x},{y}) ≠ B_τ({x},{y})"));
                }
            }
        }
        Ok(())
    }))?;
    Ok(format!("{trials} families; every precise ball equals B_τ"))
}

fn c7(cfg: &SuiteConfig) -> Result<String, String> {
    let mut details = Vec::new();
    for r in 1..=3 {
        let g = RankGadget::standard(r).map_err(|e| e.to_string())?;
        let rep = report_outcome(rank_gadget_verify(&g, cfg.samples.min(8) as u32))?;
        details.push(format!("r = {r}: {rep}"));
    }
    Ok(details.join("; "))
}

fn is_partition_into_chains(p: &FinitePoset, cover: &[Vec<usize>]) -> bool {
    let mut seen = PointSet::new();
    for c in cover {
        for &x in c {
            if seen.contains(x) {
                return false;
            }
            seen.insert(x);
            if c.iter().any(|&y| !p.comparable(x, y)) {
                return false;
            }
        }
    }
    seen == PointSet::full(p.len())
}

fn c8(cfg: &SuiteConfig) -> Result<String, String> {
    first_error(par_map(cfg.trials, |i| {
        let mut r = trial_rng(cfg.seed, 8, i);
        let n = 1 + i % 15;
        let density = r.gen_range(0.05..0.5);
        let p = random_poset(n, density, &mut r);
        let want = oracle::max_antichain_size(n, &|a, b| p.le(a, b));
        let cover = p.dilworth_cover();
        let anti = p.max_antichain();
        if cover.len() != want || anti.len() != want || !p.is_antichain(&anti) {
            return Err(format!("poset {i}: width {want}, cover {}, antichain {}", cover.len(), anti.len()));
        }
        if !is_partition_into_chains(&p, &cover) {
            return Err(format!("poset {i}: cover is not a chain partition"));
        }
        let parts = p.directed_decomposition();
        if parts.len() > want || parts.iter().any(|d| !p.is_directed(d)) {
            return Err(format!("poset {i}: bad directed decomposition"));
        }
        let covered: PointSet = parts.iter().flatten().copied().collect();
        if covered != PointSet::full(n) {
            return Err(format!("poset {i}: decomposition misses elements"));
        }
        Ok(())
    }))?;
    let linked = 100;
    first_error(par_map(linked, |i| {
        let mut r = trial_rng(cfg.seed, 80, i);
        let n = 4 + i % 7;
        let s: FiniteUltrametricSpace =
            random_ultrametric(n, ValueKind::Narrow, 2 + i % 2, r.gen()).map_err(|e| e.to_string())?;
        let u = ultra_diameter_from(&s).map_err(|e| e.to_string())?;
        let sub = random_linked_family(&u.balls, n, &mut r);
        let balls: Vec<PointSet> = sub.iter().map(|&j| u.balls[j].clone()).collect();
        let delta: Vec<usize> = sub.iter().map(|&j| u.delta[j]).collect();
        let c = extract_chain_from_linked(&balls, &delta, &u.gamma).map_err(|e| format!("family {i}: {e}"))?;
        let chain: Vec<PointSet> = c.chain.iter().map(|&j| balls[j].clone()).collect();
        if c.chain.len() < c.bound || c.bound < balls.len().div_ceil(u.gamma.width()) || !is_chain(&chain) {
            return Err(format!("family {i}: chain of {} below bound {}", c.chain.len(), c.bound));
        }
        Ok(())
    }))?;
    Ok(format!("{} posets match the oracle width; {linked} linked families meet the chain bound", cfg.trials))
}

fn pool() -> Vec<Ordinal> {
    let mut v: Vec<Ordinal> = (0..=5).map(Ordinal::nat).collect();
    v.extend((0..=5).map(|c| Ordinal::omega_plus(1, c)));
    v.extend([Ordinal::OMEGA1, Ordinal::OMEGA1.succ()]);
    v
}

fn random_interval(r: &mut ChaCha8Rng) -> Interval {
    let pool = pool();
    loop {
        let a = *pool.choose(r).expect("nonempty");
        let b = *pool.choose(r).expect("nonempty");
        let kind = if r.gen_bool(0.5) { HiKind::Open } else { HiKind::Closed };
        if let Some(iv) = Interval::new(a.min(b), a.max(b), kind) {
            return iv;
        }
    }
}

pub fn random_region(dim: usize, r: &mut ChaCha8Rng) -> Region {
    let boxes = (0..r.gen_range(1..=3))
        .map(|_| OrdBox::new((0..dim).map(|_| random_interval(r)).collect()).expect("dimension"))
        .collect();
    Region::new(dim, boxes).expect("dimension")
}

fn c9(cfg: &SuiteConfig) -> Result<String, String> {
    let pairs = 1000;
    first_error(par_map(pairs, |i| {
        let mut r = trial_rng(cfg.seed, 9, i);
        let dim = 1 + i % 2;
        let a = random_region(dim, &mut r);
        let b = random_region(dim, &mut r);
        let e = |x: bsp_core::Error| format!("pair {i}: {x}");
        let meet = a.intersect(&b).map_err(e)?;
        let diff = a.diff(&b).map_err(e)?;
        let join = a.union(&b).map_err(e)?;
        let (na, nb) = (NaiveRegion::from(&a), NaiveRegion::from(&b));
        let (nm, nd, nj) = (NaiveRegion::from(&meet), NaiveRegion::from(&diff), NaiveRegion::from(&join));
        let mut subset = true;
        let mut equal = true;
        for p in oracle::lattice_points(&[&a, &b, &meet, &diff], dim) {
            let (x, y) = (na.contains(&p), nb.contains(&p));
            if nm.contains(&p) != (x && y) || nd.contains(&p) != (x && !y) || nj.contains(&p) != (x || y) {
                return Err(format!("pair {i}: set operation wrong at {p:?} for {a} and {b}"));
            }
            subset &= !x || y;
            equal &= x == y;
        }
        if a.subset(&b).map_err(e)? != subset || a.set_eq(&b).map_err(e)? != equal {
            return Err(format!("pair {i}: subset or equality wrong for {a} and {b}"));
        }
        Ok(())
    }))?;
    Ok(format!("{pairs} region pairs agree with the lattice oracle"))
}

fn c10(cfg: &SuiteConfig) -> Result<String, String> {
    first_error(par_map(cfg.trials, |i| {
        let mut r = trial_rng(cfg.seed, 10, i);
        let b: FiniteBallSpace = random_ball_space(8, 12.min(cfg.max_balls), &mut r);
        let mut count_nonempty = true;
        let chains = b
            .for_each_chain(cfg.max_balls, |_, meet| count_nonempty &= !meet.is_empty())
            .map_err(|e| format!("space {i}: {e}"))?;
        if !count_nonempty {
            return Err(format!("space {i}: a chain has empty intersection"));
        }
        let oracle_chains = oracle::all_chains(b.balls());
        if chains != oracle_chains.len() {
            return Err(format!("space {i}: {chains} chains, oracle {}", oracle_chains.len()));
        }
        let ci = b.ci(cfg.max_balls).map_err(|e| format!("space {i}: {e}"))?;
        let mut got: Vec<&PointSet> = ci.family.balls().iter().collect();
        let mut want: Vec<&PointSet> = b.balls().iter().collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(format!("space {i}: ci(B) ≠ B"));
        }
        Ok(())
    }))?;
    Ok(format!("{} finite spaces; ci(B) = B", cfg.trials))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = SuiteConfig { trials: 10, ..SuiteConfig::default() };
        for id in [1, 2, 3, 4, 8, 10] {
            let r = run_criterion(id, &cfg);
            assert!(r.passed, "{}: {}", r.id, r.detail);
        }
    }

    #[test]
    fn witnesses_are_checked() {
        let g = ValuePoset::new(FinitePoset::chain(names(3)), 0).unwrap();
        let d = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
        let v = validate_ultrametric(names(3), g.clone(), d.clone()).unwrap_err();
        assert!(violation_holds(&d, &g, &v));
        assert!(!violation_holds(&d, &g, &Violation::U3 { x: 0, y: 1 }));
    }
}
