//! `X = (ω₁+1) × (ω+1) ∖ {(ω₁,ω)}` with the rectangles `B_{α,n} = {(x,y) ∈ X : α ≤ x, n ≤ y}`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{fail, Report};
use crate::ballspace::{
    chain_intersection, refute_sc_expansion, refute_stability, Arg, Family, MemberOf,
    RegionTemplate, SchemaFamily, SideTemplate, SymbolicBallSpace, Term, VaryingBox, VaryingSide,
};
use crate::ordinal::{IndexDomain, Ordinal, Sampler};
use crate::region::{HiKind, Region};
use crate::{Error, Result};

use HiKind::{Closed, Open};

const W: Ordinal = Ordinal::OMEGA;
const W1: Ordinal = Ordinal::OMEGA1;
const Z: Ordinal = Ordinal::ZERO;

pub fn ex2_universe() -> Region {
    Region::from_sides(2, &[&[(Z, W1, Closed), (Z, W, Open)], &[(Z, W1, Open), (W, W, Closed)]])
        .expect("valid")
}

/// `B_{α,n}` for countable `α` and finite `n`.
pub fn ex2_ball(alpha: Ordinal, n: Ordinal) -> Region {
    Region::from_sides(2, &[&[(alpha, W1, Closed), (n, W, Open)], &[(alpha, W1, Open), (W, W, Closed)]])
        .expect("valid")
}

/// `[α, ω₁) × {ω}`, the intersection of `C_α`.
pub fn ex2_top_row(alpha: Ordinal) -> Region {
    Region::from_sides(2, &[&[(alpha, W1, Open), (W, W, Closed)]]).expect("valid")
}

pub fn ex2_space() -> SymbolicBallSpace {
    let p = Term::param;
    let ball = Family::new(
        "B",
        vec![IndexDomain::Omega1, IndexDomain::Omega],
        RegionTemplate::new(
            2,
            vec![
                vec![SideTemplate::new(p(0), W1, Closed), SideTemplate::new(p(1), W, Open)],
                vec![SideTemplate::new(p(0), W1, Open), SideTemplate::new(W, W, Closed)],
            ],
        ),
    );
    SymbolicBallSpace {
        name: "ex2".into(),
        dim: 2,
        universe: ex2_universe(),
        families: vec![ball],
        chain_schemas: vec![ex2_column_chain(), ex2_diagonal_chain()],
        notes: vec![
            "a chain without a least ball either has unbounded second index with eventually \
             constant first index (C_α), or unbounded first index"
                .into(),
        ],
    }
}

/// `C_α = {B_{α,n}}_{n<ω}`.
pub fn ex2_column_chain() -> SchemaFamily {
    let p = Term::param;
    SchemaFamily {
        name: "C".into(),
        params: vec![IndexDomain::Omega1],
        index: IndexDomain::Omega,
        varying: vec![VaryingBox {
            sides: vec![
                VaryingSide::fixed(p(0), W1, Closed),
                VaryingSide::increasing(W, Sampler::Identity, W, Open),
            ],
        }],
        constant: RegionTemplate::new(
            2,
            vec![vec![SideTemplate::new(p(0), W1, Open), SideTemplate::new(W, W, Closed)]],
        ),
        member_of: Some(MemberOf { family: "B".into(), args: vec![Arg::Term(p(0)), Arg::Index] }),
        note: "second index unbounded, first index eventually constant".into(),
    }
}

/// `{B_{α,n}}_{α<ω₁}` for fixed `n`; it meets in `{ω₁} × [n, ω)`.
pub fn ex2_diagonal_chain() -> SchemaFamily {
    let p = Term::param;
    SchemaFamily {
        name: "D".into(),
        params: vec![IndexDomain::Omega],
        index: IndexDomain::Omega1,
        varying: vec![
            VaryingBox {
                sides: vec![
                    VaryingSide::increasing(W1, Sampler::Identity, W1, Closed),
                    VaryingSide::fixed(p(0), W, Open),
                ],
            },
            VaryingBox {
                sides: vec![
                    VaryingSide::increasing(W1, Sampler::Identity, W1, Open),
                    VaryingSide::fixed(W, W, Closed),
                ],
            },
        ],
        constant: RegionTemplate::new(2, Vec::new()),
        member_of: Some(MemberOf { family: "B".into(), args: vec![Arg::Index, Arg::Term(p(0))] }),
        note: "first index unbounded in ω₁; uncountably many members share a second index".into(),
    }
}

/// The nest `{[α,ω₁)×{ω}}_{α<ω₁}` of chain intersections.
pub fn ex2_nest() -> SchemaFamily {
    SchemaFamily {
        name: "top rows".into(),
        params: Vec::new(),
        index: IndexDomain::Omega1,
        varying: vec![VaryingBox {
            sides: vec![
                VaryingSide::increasing(W1, Sampler::Identity, W1, Open),
                VaryingSide::fixed(W, W, Closed),
            ],
        }],
        constant: RegionTemplate::new(2, Vec::new()),
        member_of: Some(MemberOf { family: "ci(C)".into(), args: vec![Arg::Index] }),
        note: String::new(),
    }
}

fn alphas(samples: usize) -> Vec<Ordinal> {
    IndexDomain::Omega1.sample(samples.clamp(8, 12))
}

const NS: [u32; 3] = [0, 1, 5];

pub fn ex2_verify(samples: usize) -> Result<Report> {
    if samples < 8 {
        return Err(Error::Invalid("at least 8 samples required".into()));
    }
    let space = ex2_space();
    space.validate(samples)?;
    let mut report = Report::new("ex2");
    let mut witnesses = Vec::new();
    let alphas = alphas(samples);

    report.check("a", "B_{α,n} ∩ B_{β,m} = B_{max(α,β),max(n,m)}", || {
        let mut tuples = 0;
        let mut cases: Vec<(Ordinal, u32, Ordinal, u32)> = vec![(W, 1, Ordinal::nat(3), 5)];
        for &a in &alphas {
            for &b in &alphas {
                for n in NS {
                    for m in NS {
                        cases.push((a, n, b, m));
                    }
                }
            }
        }
        for (a, n, b, m) in cases {
            let lhs = ex2_ball(a, Ordinal::nat(n)).intersect(&ex2_ball(b, Ordinal::nat(m)))?;
            let rhs = ex2_ball(a.max(b), Ordinal::nat(n.max(m)));
            if !lhs.set_eq(&rhs)? {
                return Err(fail("a", format!("B_{{{a},{n}}} ∩ B_{{{b},{m}}} = {lhs}")));
            }
            tuples += 1;
        }
        Ok(format!("{tuples} index tuples"))
    });

    report.check("b", "B_{α,n} ⊆ B_{β,m} iff β ≤ α and m ≤ n", || {
        let mut pairs = 0;
        for &a in &alphas {
            for &b in &alphas {
                for n in NS {
                    for m in NS {
                        let sub = ex2_ball(a, Ordinal::nat(n)).subset(&ex2_ball(b, Ordinal::nat(m)))?;
                        if sub != (b <= a && m <= n) {
                            return Err(fail("b", format!("inclusion of B_{{{a},{n}}} in B_{{{b},{m}}} is {sub}")));
                        }
                        pairs += 1;
                    }
                }
            }
        }
        Ok(format!("{pairs} ordered pairs; the order is the product ω₁ × ω"))
    });

    report.check("c", "⋂C_α = [α,ω₁) × {ω}", || {
        let schema = ex2_column_chain();
        for &a in &alphas {
            let r = chain_intersection(&schema.instantiate(&[a])?, samples)?;
            if !r.set_eq(&ex2_top_row(a))? {
                return Err(fail("c", format!("⋂C_{a} = {r}")));
            }
        }
        let zero = chain_intersection(&schema.instantiate(&[Z])?, samples)?;
        Ok(format!("⋂C_0 = {zero}"))
    });

    report.check("d", "the intersections of the C_α form a nest with empty intersection", || {
        let w = refute_stability(&space, &[ex2_column_chain()], samples)?;
        let detail = format!("overall intersection {}", w.overall);
        witnesses.push(w);
        Ok(detail)
    });

    report.check("e", "the nest {[α,ω₁)×{ω}} lies in ci(B) and has empty intersection", || {
        let w = refute_sc_expansion(&space, &ex2_nest(), samples)?;
        let detail = format!("overall intersection {}", w.overall);
        witnesses.push(w);
        Ok(detail)
    });

    report.check("f", "no smallest ball contains (0,ω) and (ω,ω)", || {
        let (p, q) = ([Z, W], [W, W]);
        for &a in &alphas {
            for n in 0..samples as u32 {
                let b = ex2_ball(a, Ordinal::nat(n));
                let covers = b.member(&p)? && b.member(&q)?;
                if covers != (a == Z) {
                    return Err(fail("f", format!("B_{{{a},{n}}} covering is {covers}")));
                }
            }
        }
        for n in 0..samples as u32 {
            let b = ex2_ball(Z, Ordinal::nat(n));
            let next = ex2_ball(Z, Ordinal::nat(n + 1));
            if !(next.member(&p)? && next.member(&q)? && next.subset(&b)? && !b.subset(&next)?) {
                return Err(fail("f", format!("B_{{0,{}}} does not undercut B_{{0,{n}}}", n + 1)));
            }
        }
        Ok("covering balls are B_{0,n}; each is strictly above B_{0,n+1}".into())
    });

    report.witnesses = witnesses;
    report.notes.extend(space.notes.iter().cloned());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballspace::{ci_symbolic, Witness};

    #[test]
    fn law_example() {
        let lhs = ex2_ball(W, Ordinal::nat(1)).intersect(&ex2_ball(Ordinal::nat(3), Ordinal::nat(5))).unwrap();
        assert!(lhs.set_eq(&ex2_ball(W, Ordinal::nat(5))).unwrap());
    }

    #[test]
    fn verify_passes() {
        let r = ex2_verify(16).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.witnesses.len(), 2);
        for w in &r.witnesses {
            w.verify().unwrap();
        }
    }

    #[test]
    fn ci_adds_top_rows_and_the_right_column() {
        let ci = ci_symbolic(&ex2_space(), 12).unwrap();
        let names: Vec<&str> = ci.new_families.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names.len(), 2);
        assert!(names.contains(&"ci(C)") && names.contains(&"ci(D)"));
        let d = ci.new_families.iter().find(|f| f.name == "ci(D)").unwrap();
        let right = Region::from_sides(2, &[&[(W1, W1, Closed), (Ordinal::nat(2), W, Open)]]).unwrap();
        assert!(d.instance(&[Ordinal::nat(2)]).unwrap().set_eq(&right).unwrap());
    }

    #[test]
    fn witness_round_trips_through_json() {
        let w = refute_stability(&ex2_space(), &[ex2_column_chain()], 12).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        back.verify().unwrap();
        let mut broken = back.clone();
        broken.overall = ex2_top_row(Z);
        assert!(broken.verify().is_err());
    }
}
