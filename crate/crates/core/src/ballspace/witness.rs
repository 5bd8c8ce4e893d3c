//! Self-checking certificates for the two refutations on symbolic ball spaces.
//!
//! A [`Witness`] embeds every family and schema it relies on, so [`Witness::verify`] can
//! re-derive each claim after a round trip through JSON without the originating space.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::symbolic::{
    chain_intersection, ci_symbolic, family_as_chain, validate_schema, Family, SchemaFamily,
    SymbolicBallSpace,
};
use crate::ordinal::Ordinal;
use crate::region::Region;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `ci(𝔅)` is not spherically complete: its chain of intersections has empty intersection.
    StabilityRefuted,
    /// A nest of balls of `ci(𝔅)` with empty intersection.
    ExpansionRefuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledIntersection {
    pub schema: String,
    pub params: Vec<Ordinal>,
    pub intersection: Region,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub dim: usize,
    pub samples: usize,
    /// Families of the original space.
    pub families: Vec<Family>,
    /// Chains of the original space whose intersections are used.
    pub schemas: Vec<SchemaFamily>,
    /// `ci(schema)` for each entry of `schemas`.
    pub intersections: Vec<Family>,
    /// The chain with empty intersection; its members belong to `families ∪ intersections`.
    pub meta: SchemaFamily,
    pub sampled: Vec<SampledIntersection>,
    pub overall: Region,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn cert(clause: &str, msg: String) -> Error {
    Error::Certificate { clause: clause.into(), msg }
}

/// Pairwise ⊆-comparability of the regions.
fn linearly_ordered(regions: &[(Vec<Ordinal>, Region)]) -> Result<Option<(Vec<Ordinal>, Vec<Ordinal>)>> {
    for (i, (a, ra)) in regions.iter().enumerate() {
        for (b, rb) in &regions[i + 1..] {
            if !ra.subset(rb)? && !rb.subset(ra)? {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

fn sample_intersections(schemas: &[SchemaFamily], samples: usize) -> Result<Vec<SampledIntersection>> {
    let mut out = Vec::new();
    for s in schemas {
        for params in s.sampled_params(samples) {
            let intersection = chain_intersection(&s.instantiate(&params)?, samples)?;
            out.push(SampledIntersection { schema: s.name.clone(), params, intersection });
        }
    }
    Ok(out)
}

impl Witness {
    /// Re-checks every claim from the embedded data.
    pub fn verify(&self) -> Result<()> {
        let n = self.samples;
        if self.schemas.len() != self.intersections.len() {
            return Err(cert("a", "one intersection family per schema required".into()));
        }
        for (s, f) in self.schemas.iter().zip(&self.intersections) {
            validate_schema(s, &self.families, n).map_err(|e| cert("a", format!("{e}")))?;
            let expect = s.intersection_family()?;
            if expect.name != f.name || expect.params != f.params {
                return Err(cert("b", format!("`{}` is not the intersection family of `{}`", f.name, s.name)));
            }
            for params in s.sampled_params(n) {
                let direct = chain_intersection(&s.instantiate(&params)?, n)?;
                let claimed = f.instance(&params)?;
                if !direct.set_eq(&claimed)? {
                    return Err(cert("b", format!("{} differs from the chain intersection at {params:?}", f.name)));
                }
                if claimed.is_empty() {
                    return Err(cert("b", format!("{} is empty at {params:?}", f.name)));
                }
            }
        }
        for rec in &self.sampled {
            let s = self
                .schemas
                .iter()
                .find(|s| s.name == rec.schema)
                .ok_or_else(|| cert("b", format!("unknown schema `{}`", rec.schema)))?;
            let direct = chain_intersection(&s.instantiate(&rec.params)?, n)?;
            if !direct.set_eq(&rec.intersection)? {
                return Err(cert("b", format!("recorded intersection of {} at {:?} is wrong", rec.schema, rec.params)));
            }
        }

        let member = self
            .meta
            .member_of
            .as_ref()
            .ok_or_else(|| cert("c", "nest members carry no membership claim".into()))?;
        let mut pool = self.families.clone();
        pool.extend(self.intersections.iter().cloned());
        if self.kind == WitnessKind::StabilityRefuted {
            let f = self
                .intersections
                .iter()
                .find(|f| f.name == member.family)
                .ok_or_else(|| cert("c", format!("`{}` is not an intersection family", member.family)))?;
            let inst = f.sampled_instances(n)?;
            if let Some((a, b)) = linearly_ordered(&inst)? {
                return Err(cert("c", format!("{} at {a:?} and {b:?} are incomparable", f.name)));
            }
        }
        if !self.meta.params.is_empty() {
            return Err(cert("c", "the nest must not have parameters".into()));
        }
        validate_schema(&self.meta, &pool, n).map_err(|e| cert("c", format!("{e}")))?;
        let overall = chain_intersection(&self.meta.instantiate(&[])?, n)?;
        if !overall.set_eq(&self.overall)? {
            return Err(cert("d", "recorded overall intersection is wrong".into()));
        }
        if !overall.is_empty() {
            return Err(cert("d", format!("overall intersection {overall} is nonempty")));
        }
        Ok(())
    }
}

/// Certifies that `ci(s)` is not spherically complete using the given chains of `s`.
///
/// Supported inputs are a single one-parameter schema family, whose intersections then form
/// the nest, or schemas without parameters, which can never succeed since a finite chain of
/// nonempty sets has nonempty intersection.
pub fn refute_stability(s: &SymbolicBallSpace, schemas: &[SchemaFamily], samples: usize) -> Result<Witness> {
    if schemas.is_empty() {
        return Err(cert("a", "no chains given".into()));
    }
    let mut intersections = Vec::new();
    for schema in schemas {
        validate_schema(schema, &s.families, samples).map_err(|e| cert("a", format!("{e}")))?;
        let f = schema.intersection_family().map_err(|e| cert("a", format!("{e}")))?;
        for params in schema.sampled_params(samples) {
            if f.instance(&params)?.is_empty() {
                return Err(cert("b", format!("intersection of {} at {params:?} is empty", schema.name)));
            }
        }
        intersections.push(f);
    }
    let sampled = sample_intersections(schemas, samples)?;

    if schemas.iter().all(|x| x.params.is_empty()) {
        let regions: Vec<(Vec<Ordinal>, Region)> =
            sampled.iter().map(|r| (Vec::new(), r.intersection.clone())).collect();
        if linearly_ordered(&regions)?.is_some() {
            return Err(cert("c", "chain intersections are not linearly ordered".into()));
        }
        let mut overall = s.universe.clone();
        for r in &regions {
            overall = overall.intersect(&r.1)?;
        }
        return Err(cert(
            "d",
            format!("overall intersection {overall} is nonempty: a finite chain of nonempty balls has a least member"),
        ));
    }
    if schemas.len() != 1 || schemas[0].params.len() != 1 {
        return Err(Error::Invalid(
            "expected one schema family with one parameter, or schemas without parameters".into(),
        ));
    }
    let f = &intersections[0];
    let inst = f.sampled_instances(samples)?;
    if let Some((a, b)) = linearly_ordered(&inst)? {
        return Err(cert("c", format!("{} at {a:?} and {b:?} are incomparable", f.name)));
    }
    let meta = family_as_chain(f, &format!("nest({})", f.name)).map_err(|e| {
        // An upper endpoint moving with the parameter makes the sets grow; the smallest
        // one is then the overall intersection.
        cert("d", format!("{e}; the intersections do not shrink to empty"))
    })?;
    let overall = chain_intersection(&meta.instantiate(&[])?, samples)?;
    if !overall.is_empty() {
        return Err(cert("d", format!("overall intersection {overall} is nonempty")));
    }
    let w = Witness {
        kind: WitnessKind::StabilityRefuted,
        dim: s.dim,
        samples,
        families: s.families.clone(),
        schemas: schemas.to_vec(),
        intersections,
        meta,
        sampled,
        overall,
        notes: schemas.iter().filter(|x| !x.note.is_empty()).map(|x| x.note.clone()).collect(),
    };
    w.verify()?;
    Ok(w)
}

/// Certifies that `ci(s)` is not a spherically complete expansion of `s`: `nest` is a chain of
/// balls of `ci(s)` with empty intersection.
pub fn refute_sc_expansion(s: &SymbolicBallSpace, nest: &SchemaFamily, samples: usize) -> Result<Witness> {
    if !nest.params.is_empty() {
        return Err(cert("a", "the nest must not have parameters".into()));
    }
    let member = nest
        .member_of
        .as_ref()
        .ok_or_else(|| cert("a", "nest members carry no membership claim".into()))?;
    let ci = ci_symbolic(s, samples)?;
    let (schemas, intersections) = if s.family(&member.family).is_some() {
        (Vec::new(), Vec::new())
    } else {
        let f = ci
            .new_families
            .iter()
            .find(|f| f.name == member.family)
            .ok_or_else(|| cert("a", format!("`{}` is not a family of ci", member.family)))?;
        let schema = s
            .chain_schemas
            .iter()
            .find(|x| format!("ci({})", x.name) == f.name)
            .ok_or_else(|| cert("a", format!("no chain produces `{}`", f.name)))?;
        (alloc::vec![schema.clone()], alloc::vec![f.clone()])
    };
    let mut pool = s.families.clone();
    pool.extend(intersections.iter().cloned());
    validate_schema(nest, &pool, samples).map_err(|e| cert("a", format!("{e}")))?;
    let overall = chain_intersection(&nest.instantiate(&[])?, samples)?;
    if !overall.is_empty() {
        return Err(cert("b", format!("nest intersection {overall} is nonempty")));
    }
    let sampled = sample_intersections(&schemas, samples)?;
    let w = Witness {
        kind: WitnessKind::ExpansionRefuted,
        dim: s.dim,
        samples,
        families: s.families.clone(),
        schemas,
        intersections,
        meta: nest.clone(),
        sampled,
        overall,
        notes: Vec::new(),
    };
    w.verify()?;
    Ok(w)
}
