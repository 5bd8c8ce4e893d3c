//! `X = (ω+1) × ω` with the balls `B_{m,k} = [m,ω]×{k} ∪ {ω}×[k,ω)`, the two-point sets on
//! the top column, and `X`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{fail, Report};
use crate::ballspace::{
    chain_intersection, ci_symbolic, cir, refute_sc_expansion, refute_stability, Arg, Family,
    MemberOf, RegionTemplate, SchemaFamily, SideTemplate, SymbolicBallSpace, VaryingBox, VaryingSide,
};
use crate::bits::PointSet;
use crate::ordinal::{IndexDomain, Ordinal, Sampler};
use crate::ballspace::Term;
use crate::region::{HiKind, Region};
use crate::ultrametric::construct_from_tau;
use crate::{Error, Result};

const W: Ordinal = Ordinal::OMEGA;
use HiKind::{Closed, Open};

pub fn ex1_universe() -> Region {
    Region::from_sides(2, &[&[(Ordinal::ZERO, W, Closed), (Ordinal::ZERO, W, Open)]]).expect("valid")
}

pub fn ex1_ball(m: Ordinal, k: Ordinal) -> Region {
    Region::from_sides(2, &[&[(m, W, Closed), (k, k, Closed)], &[(W, W, Closed), (k, W, Open)]])
        .expect("valid")
}

pub fn ex1_pair(k: Ordinal, l: Ordinal) -> Region {
    Region::from_sides(2, &[&[(W, W, Closed), (k, k, Closed)], &[(W, W, Closed), (l, l, Closed)]])
        .expect("valid")
}

/// `{ω} × [k, ω)`, the intersection of the chains `{B_{m_i,k}}_i`.
pub fn ex1_column_tail(k: Ordinal) -> Region {
    Region::from_sides(2, &[&[(W, W, Closed), (k, W, Open)]]).expect("valid")
}

pub fn ex1_space() -> SymbolicBallSpace {
    let p = Term::param;
    let ball = Family::new(
        "B",
        vec![IndexDomain::Omega, IndexDomain::Omega],
        RegionTemplate::new(
            2,
            vec![
                vec![SideTemplate::new(p(0), W, Closed), SideTemplate::new(p(1), p(1), Closed)],
                vec![SideTemplate::new(W, W, Closed), SideTemplate::new(p(1), W, Open)],
            ],
        ),
    );
    let pair = Family::new(
        "pair",
        vec![IndexDomain::Omega, IndexDomain::Omega],
        RegionTemplate::new(
            2,
            vec![
                vec![SideTemplate::new(W, W, Closed), SideTemplate::new(p(0), p(0), Closed)],
                vec![SideTemplate::new(W, W, Closed), SideTemplate::new(p(1), p(1), Closed)],
            ],
        ),
    )
    .with_distinct(0, 1);
    let universe = ex1_universe();
    SymbolicBallSpace {
        name: "ex1".into(),
        dim: 2,
        families: vec![ball, pair, Family::single("X", &universe)],
        universe,
        chain_schemas: vec![ex1_chain_schema()],
        notes: vec![
            "a chain without a least ball lies in one row family {B_{m,k}}_m with m unbounded".into(),
        ],
    }
}

/// For each `k`, the chain `{B_{i,k}}_{i<ω}`.
pub fn ex1_chain_schema() -> SchemaFamily {
    let p = Term::param;
    SchemaFamily {
        name: "B(·,k)".into(),
        params: vec![IndexDomain::Omega],
        index: IndexDomain::Omega,
        varying: vec![VaryingBox {
            sides: vec![
                VaryingSide::increasing(W, Sampler::Identity, W, Closed),
                VaryingSide::fixed(p(0), p(0), Closed),
            ],
        }],
        constant: RegionTemplate::new(
            2,
            vec![vec![SideTemplate::new(W, W, Closed), SideTemplate::new(p(0), W, Open)]],
        ),
        member_of: Some(MemberOf { family: "B".into(), args: vec![Arg::Index, Arg::Term(p(0))] }),
        note: "any chain of B without a least member is {B_{m_i,k}} with m_i strictly increasing; \
               its intersection does not depend on the sequence"
            .into(),
    }
}

/// The nest `N = { {ω}×[k,ω) : k < ω }` of chain intersections.
pub fn ex1_nest() -> SchemaFamily {
    SchemaFamily {
        name: "N".into(),
        params: Vec::new(),
        index: IndexDomain::Omega,
        varying: vec![VaryingBox {
            sides: vec![
                VaryingSide::fixed(W, W, Closed),
                VaryingSide::increasing(W, Sampler::Identity, W, Open),
            ],
        }],
        constant: RegionTemplate::new(2, Vec::new()),
        member_of: Some(MemberOf { family: "ci(B(·,k))".into(), args: vec![Arg::Index] }),
        note: String::new(),
    }
}

fn in_universe(p: [Ordinal; 2]) -> bool {
    p[0] <= W && p[1].is_finite()
}

/// The smallest ball of τ containing `p` and `q`; the empty region when `p = q`.
pub fn ex1_btau(p: [Ordinal; 2], q: [Ordinal; 2]) -> Result<Region> {
    for x in [p, q] {
        if !in_universe(x) {
            return Err(Error::Invalid(format!("({}, {}) is not a point of X", x[0], x[1])));
        }
    }
    if p == q {
        return Ok(Region::empty(2));
    }
    let (p, q) = if p[0] <= q[0] { (p, q) } else { (q, p) };
    let ([m, k], [n, l]) = (p, q);
    Ok(if n < W {
        if k == l {
            ex1_ball(m, k)
        } else {
            ex1_universe()
        }
    } else if m < W {
        if k <= l {
            ex1_ball(m, k)
        } else {
            ex1_universe()
        }
    } else {
        ex1_pair(k.min(l), k.max(l))
    })
}

fn to_bits(r: &Region, grid: &[[Ordinal; 2]]) -> Result<PointSet> {
    let mut s = PointSet::new();
    for (i, p) in grid.iter().enumerate() {
        if r.member(p)? {
            s.insert(i);
        }
    }
    Ok(s)
}

struct Truncation {
    grid: Vec<[Ordinal; 2]>,
    tau: Vec<PointSet>,
}

fn truncation(n: u32) -> Result<Truncation> {
    let xs: Vec<Ordinal> = (0..=n).map(Ordinal::nat).chain([W]).collect();
    let grid: Vec<[Ordinal; 2]> =
        xs.iter().flat_map(|&x| (0..=n).map(move |y| [x, Ordinal::nat(y)])).collect();
    let mut tau = Vec::new();
    for m in 0..=n {
        for k in 0..=n {
            tau.push(to_bits(&ex1_ball(Ordinal::nat(m), Ordinal::nat(k)), &grid)?);
        }
    }
    for k in 0..=n {
        for l in k + 1..=n {
            tau.push(to_bits(&ex1_pair(Ordinal::nat(k), Ordinal::nat(l)), &grid)?);
        }
    }
    tau.push(PointSet::full(grid.len()));
    Ok(Truncation { grid, tau })
}

/// Runs every check on the truncated grid `({0..N} ∪ {ω}) × {0..N}` and symbolically.
pub fn ex1_verify(truncation_n: usize, samples: usize) -> Result<Report> {
    if truncation_n < 4 {
        return Err(Error::Invalid("truncation must be at least 4".into()));
    }
    let n = u32::try_from(truncation_n).map_err(|_| Error::Invalid("truncation too large".into()))?;
    let t = truncation(n)?;
    let space = ex1_space();
    let mut report = Report::new("ex1");
    let mut witnesses = Vec::new();

    report.check("a", "B_τ agrees with the smallest covering member on the truncated grid", || {
        let mut cache: BTreeMap<String, PointSet> = BTreeMap::new();
        let mut pairs = 0usize;
        for (i, &p) in t.grid.iter().enumerate() {
            for (j, &q) in t.grid.iter().enumerate() {
                pairs += 1;
                let r = ex1_btau(p, q)?;
                if i == j {
                    if !r.is_empty() {
                        return Err(fail("a", format!("B_τ(p,p) nonempty at {i}")));
                    }
                    continue;
                }
                let covering: Vec<&PointSet> =
                    t.tau.iter().filter(|s| s.contains(i) && s.contains(j)).collect();
                let meet = covering
                    .iter()
                    .skip(1)
                    .fold(covering[0].clone(), |acc, s| acc.intersection(s));
                if !covering.iter().any(|s| **s == meet) {
                    return Err(fail("a", format!("no smallest member covers points {i}, {j}")));
                }
                let key = r.serialize_key();
                let bits = match cache.get(&key) {
                    Some(b) => b.clone(),
                    None => {
                        let b = to_bits(&r, &t.grid)?;
                        cache.insert(key, b.clone());
                        b
                    }
                };
                if bits != meet {
                    return Err(fail(
                        "a",
                        format!("B_τ(({}, {}), ({}, {})) = {r} is not the smallest member", p[0], p[1], q[0], q[1]),
                    ));
                }
            }
        }
        Ok(format!("{pairs} ordered pairs on {} grid points", t.grid.len()))
    });

    report.check("b", "u_τ on the truncation satisfies (U1)-(U3)", || {
        let names: Vec<String> = t.grid.iter().map(|p| format!("({},{})", p[0], p[1])).collect();
        let s = construct_from_tau(names, &t.tau).map_err(|e| fail("b", format!("{e}")))?;
        let balls = s.ball_space();
        let missing = t.tau.iter().filter(|b| balls.position(b).is_none()).count();
        if missing > 0 {
            return Err(fail("b", format!("{missing} members of τ are not precise balls")));
        }
        Ok(format!("{} points, {} values", s.len(), s.gamma().len()))
    });

    report.check("c", "chain intersections: least member, or {ω}×[k,ω) for row chains", || {
        let mut finite = 0;
        for k in 0..4u32 {
            for l in k + 1..5 {
                for j in 0..=k {
                    let mut chain = vec![ex1_universe()];
                    chain.extend((0..3).map(|m| ex1_ball(Ordinal::nat(m), Ordinal::nat(j))));
                    chain.push(ex1_pair(Ordinal::nat(k), Ordinal::nat(l)));
                    for w in chain.windows(2) {
                        if !w[1].subset(&w[0])? {
                            return Err(fail("c", format!("{} ⊄ {}", w[1], w[0])));
                        }
                    }
                    let meet = chain.iter().try_fold(ex1_universe(), |acc, b| acc.intersect(b))?;
                    if !meet.set_eq(chain.last().expect("nonempty"))? {
                        return Err(fail("c", format!("finite chain intersection {meet} is not its least member")));
                    }
                    finite += 1;
                }
            }
        }
        let schema = ex1_chain_schema();
        for params in schema.sampled_params(samples) {
            let r = chain_intersection(&schema.instantiate(&params)?, samples)?;
            if !r.set_eq(&ex1_column_tail(params[0]))? {
                return Err(fail("c", format!("row chain k={} meets in {r}", params[0])));
            }
        }
        let zero = chain_intersection(&schema.instantiate(&[Ordinal::ZERO])?, samples)?;
        Ok(format!("{finite} finite chains; row chain k=0 meets in {zero}"))
    });

    report.check("d", "ci(τ) = τ ∪ N", || {
        let ci = ci_symbolic(&space, samples)?;
        if ci.new_families.len() != 1 {
            return Err(fail("d", format!("{} new families", ci.new_families.len())));
        }
        let f = &ci.new_families[0];
        for (args, r) in f.sampled_instances(samples)? {
            if !r.set_eq(&ex1_column_tail(args[0]))? {
                return Err(fail("d", format!("{}{args:?} = {r}", f.name)));
            }
        }
        Ok(format!("new family {}", f.name))
    });

    report.check("e", "N is a nest of ci-balls with empty intersection", || {
        let w = refute_sc_expansion(&space, &ex1_nest(), samples)?;
        let detail = format!("overall intersection {}", w.overall);
        witnesses.push(w);
        Ok(detail)
    });

    report.check("f", "cir = 1", || {
        let mut supplier = |new: &[Family]| {
            if new.iter().any(|f| f.name == "ci(B(·,k))") {
                vec![ex1_nest()]
            } else {
                Vec::new()
            }
        };
        let out = cir(&space, &mut supplier, 4, samples)?;
        if out.rank != 1 || !out.fixpoint {
            return Err(fail("f", format!("rank {} (fixpoint {})", out.rank, out.fixpoint)));
        }
        Ok("rank 1, fixpoint reached".to_string())
    });

    report.witnesses = witnesses;
    report.notes.extend(space.notes.iter().cloned());
    Ok(report)
}

/// The stability refutation over the row chains.
pub fn ex1_stability_witness(samples: usize) -> Result<crate::ballspace::Witness> {
    refute_stability(&ex1_space(), &[ex1_chain_schema()], samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballspace::{schema_is_chain, WitnessKind};

    fn nat(n: u32) -> Ordinal {
        Ordinal::nat(n)
    }

    #[test]
    fn btau_cases() {
        assert!(ex1_btau([W, nat(1)], [W, nat(2)]).unwrap().set_eq(&ex1_pair(nat(1), nat(2))).unwrap());
        assert!(ex1_btau([nat(0), nat(0)], [W, nat(0)]).unwrap().set_eq(&ex1_ball(nat(0), nat(0))).unwrap());
        assert!(ex1_btau([nat(2), nat(0)], [nat(5), nat(3)]).unwrap().set_eq(&ex1_universe()).unwrap());
        assert!(ex1_btau([W, nat(4)], [nat(2), nat(1)]).unwrap().set_eq(&ex1_ball(nat(2), nat(1))).unwrap());
        assert!(ex1_btau([W, nat(0)], [nat(2), nat(1)]).unwrap().set_eq(&ex1_universe()).unwrap());
        assert!(ex1_btau([W, nat(3)], [W, nat(3)]).unwrap().is_empty());
        assert!(ex1_btau([W.succ(), nat(0)], [W, nat(3)]).is_err());
    }

    #[test]
    fn row_chain() {
        let s = ex1_chain_schema().instantiate(&[nat(0)]).unwrap();
        assert!(schema_is_chain(&s, 16).ok);
        let r = chain_intersection(&s, 16).unwrap();
        assert!(r.set_eq(&ex1_column_tail(nat(0))).unwrap());
    }

    #[test]
    fn swapped_endpoints_are_not_a_chain() {
        let mut s = ex1_chain_schema().instantiate(&[nat(0)]).unwrap();
        // Growing balls: lower endpoint fixed at 5, the constant part shrunk to a point.
        s.varying[0].sides[0].lo = crate::ordinal::EndpointFn::Const(nat(5));
        s.constant = Region::point(&[W, nat(0)]);
        s.varying[0].sides[1].hi = W;
        s.varying[0].sides[1].hi_kind = Open;
        s.varying[0].sides[1].lo = crate::ordinal::EndpointFn::StrictIncreasingTo {
            limit: W,
            sampler: Sampler::Identity,
        };
        assert!(schema_is_chain(&s, 8).ok);
        s.varying[0].sides[1].lo = crate::ordinal::EndpointFn::Const(nat(0));
        s.varying[0].sides[1].hi = nat(3);
        s.varying[0].sides[1].hi_kind = Closed;
        s.varying[0].sides[0].lo = crate::ordinal::EndpointFn::StrictIncreasingTo {
            limit: nat(3),
            sampler: Sampler::Explicit(vec![nat(2), nat(1), nat(0)]),
        };
        assert!(!schema_is_chain(&s, 8).ok);
    }

    #[test]
    fn nest_is_empty() {
        let n = ex1_nest().instantiate(&[]).unwrap();
        assert!(chain_intersection(&n, 32).unwrap().is_empty());
    }

    #[test]
    fn verify_small() {
        let r = ex1_verify(5, 12).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.clauses.len(), 6);
        assert_eq!(r.witnesses.len(), 1);
        r.witnesses[0].verify().unwrap();
        assert!(ex1_verify(3, 12).is_err());
    }

    #[test]
    fn stability_refuted() {
        let w = ex1_stability_witness(16).unwrap();
        assert_eq!(w.kind, WitnessKind::StabilityRefuted);
        assert!(w.overall.is_empty());
    }

    #[test]
    fn constant_nest_rejected() {
        let mut nest = ex1_nest();
        nest.varying[0].sides[1] = VaryingSide::fixed(Ordinal::ZERO, W, Open);
        nest.index = IndexDomain::Fin(3);
        assert!(refute_sc_expansion(&ex1_space(), &nest, 8).is_err());
    }

    #[test]
    fn ci_with_no_schemas_is_unchanged() {
        let mut s = ex1_space();
        s.chain_schemas.clear();
        let ci = ci_symbolic(&s, 8).unwrap();
        assert!(ci.new_families.is_empty());
        assert_eq!(ci.space, s);
    }
}
