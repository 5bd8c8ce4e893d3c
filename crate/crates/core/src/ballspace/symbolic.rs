//! Parametric ball families over ordinal regions and declared chain schemas.
//!
//! A [`Family`] is a region template whose endpoints may mention parameters drawn from
//! index domains. A [`SchemaFamily`] describes, for each value of its own parameters, one
//! chain of balls indexed by an infinite (or finite) domain: each ball is a union of
//! *varying* boxes whose lower endpoints may increase with the index, and a *constant*
//! region. Because every varying box shrinks along the index, the intersection of the chain
//! is the union of the limit boxes and the constant part.
//!
//! Nothing here enumerates infinite sets. Declared sequences and chains are verified on a
//! finite number of sampled indices; exhaustiveness of the declared schemas is not inferred.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ordinal::{endpoint_sup, EndpointFn, IndexDomain, Ordinal, Sampler};
use crate::region::{HiKind, Interval, OrdBox, Region};
use crate::{Error, Result};

/// A constant ordinal or a reference to a parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Param { param: usize },
    Const(Ordinal),
}

impl Term {
    pub fn param(i: usize) -> Self {
        Term::Param { param: i }
    }

    pub fn eval(&self, params: &[Ordinal]) -> Result<Ordinal> {
        match self {
            Term::Const(v) => Ok(*v),
            Term::Param { param } => params
                .get(*param)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("parameter {param} not bound"))),
        }
    }

    fn max_param(&self) -> Option<usize> {
        match self {
            Term::Param { param } => Some(*param),
            Term::Const(_) => None,
        }
    }
}

impl From<Ordinal> for Term {
    fn from(v: Ordinal) -> Self {
        Term::Const(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideTemplate {
    pub lo: Term,
    pub hi: Term,
    pub hi_kind: HiKind,
}

impl SideTemplate {
    pub fn new(lo: impl Into<Term>, hi: impl Into<Term>, hi_kind: HiKind) -> Self {
        Self { lo: lo.into(), hi: hi.into(), hi_kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxTemplate {
    pub sides: Vec<SideTemplate>,
}

/// A region whose endpoints may refer to parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTemplate {
    pub dim: usize,
    pub boxes: Vec<BoxTemplate>,
}

impl RegionTemplate {
    pub fn new(dim: usize, boxes: Vec<Vec<SideTemplate>>) -> Self {
        Self { dim, boxes: boxes.into_iter().map(|sides| BoxTemplate { sides }).collect() }
    }

    pub fn constant(r: &Region) -> Self {
        let boxes = r
            .boxes()
            .iter()
            .map(|b| BoxTemplate {
                sides: b
                    .sides()
                    .iter()
                    .map(|s| SideTemplate::new(s.lo(), s.hi(), s.hi_kind()))
                    .collect(),
            })
            .collect();
        Self { dim: r.dim(), boxes }
    }

    /// Instantiates the template, dropping boxes that come out empty.
    pub fn instantiate(&self, params: &[Ordinal]) -> Result<Region> {
        let mut boxes = Vec::new();
        for b in &self.boxes {
            if b.sides.len() != self.dim {
                return Err(Error::Dimension { expected: self.dim, got: b.sides.len() });
            }
            let mut sides = Vec::with_capacity(self.dim);
            for s in &b.sides {
                match Interval::new(s.lo.eval(params)?, s.hi.eval(params)?, s.hi_kind) {
                    Some(iv) => sides.push(iv),
                    None => break,
                }
            }
            if sides.len() == self.dim {
                boxes.push(OrdBox::new(sides)?);
            }
        }
        Region::new(self.dim, boxes)
    }

    /// Drops boxes contained in another box for every parameter value.
    pub fn prune_absorbed(&mut self, domains: &[IndexDomain]) {
        let mut i = 0;
        while i < self.boxes.len() {
            let absorbed = (0..self.boxes.len())
                .any(|j| j != i && box_within(&self.boxes[i], &self.boxes[j], domains) && (j < i || !box_within(&self.boxes[j], &self.boxes[i], domains)));
            if absorbed {
                self.boxes.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn max_param(&self) -> Option<usize> {
        self.boxes
            .iter()
            .flat_map(|b| b.sides.iter().flat_map(|s| [s.lo.max_param(), s.hi.max_param()]))
            .flatten()
            .max()
    }
}

/// `a ≤ b` for every admissible parameter value (`a < b` when `strict`).
fn term_le(a: &Term, b: &Term, domains: &[IndexDomain], strict: bool) -> bool {
    match (a, b) {
        (Term::Const(x), Term::Const(y)) => if strict { x < y } else { x <= y },
        (Term::Param { param: p }, Term::Param { param: q }) => p == q && !strict,
        // Every parameter lies strictly below the order type of its domain.
        (Term::Param { param }, Term::Const(c)) => domains.get(*param).is_some_and(|d| d.order_type() <= *c),
        (Term::Const(c), Term::Param { .. }) => !strict && *c == Ordinal::ZERO,
    }
}

fn box_within(a: &BoxTemplate, b: &BoxTemplate, domains: &[IndexDomain]) -> bool {
    a.sides.len() == b.sides.len()
        && a.sides.iter().zip(&b.sides).all(|(x, y)| {
            let strict = y.hi_kind == HiKind::Open && x.hi_kind == HiKind::Closed;
            term_le(&y.lo, &x.lo, domains, false) && term_le(&x.hi, &y.hi, domains, strict)
        })
}

/// A parametric family of balls `{ region(params) : params ∈ domains }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    #[serde(default)]
    pub params: Vec<IndexDomain>,
    pub region: RegionTemplate,
    /// Parameter pairs that must differ.
    #[serde(default)]
    pub distinct: Vec<[usize; 2]>,
}

impl Family {
    pub fn new(name: &str, params: Vec<IndexDomain>, region: RegionTemplate) -> Self {
        Self { name: name.into(), params, region, distinct: Vec::new() }
    }

    pub fn single(name: &str, r: &Region) -> Self {
        Self::new(name, Vec::new(), RegionTemplate::constant(r))
    }

    pub fn with_distinct(mut self, i: usize, j: usize) -> Self {
        self.distinct.push([i, j]);
        self
    }

    fn check_shape(&self) -> Result<()> {
        if let Some(p) = self.region.max_param() {
            if p >= self.params.len() {
                return Err(Error::Invalid(format!(
                    "family `{}` refers to parameter {p} but declares {}",
                    self.name,
                    self.params.len()
                )));
            }
        }
        Ok(())
    }

    pub fn admits(&self, args: &[Ordinal]) -> bool {
        args.len() == self.params.len()
            && self.params.iter().zip(args).all(|(d, a)| d.contains(*a))
            && self.distinct.iter().all(|[i, j]| args[*i] != args[*j])
    }

    pub fn instance(&self, args: &[Ordinal]) -> Result<Region> {
        if !self.admits(args) {
            return Err(Error::Invalid(format!(
                "arguments {args:?} outside the parameter domain of `{}`",
                self.name
            )));
        }
        self.region.instantiate(args)
    }

    /// Admissible parameter tuples built from the first `samples` values of each domain.
    pub fn sampled_args(&self, samples: usize) -> Vec<Vec<Ordinal>> {
        let per: Vec<Vec<Ordinal>> = self.params.iter().map(|d| d.sample(samples)).collect();
        product(&per).into_iter().filter(|a| self.admits(a)).collect()
    }

    pub fn sampled_instances(&self, samples: usize) -> Result<Vec<(Vec<Ordinal>, Region)>> {
        self.sampled_args(samples)
            .into_iter()
            .map(|a| {
                let r = self.instance(&a)?;
                Ok((a, r))
            })
            .collect()
    }

    /// Searches for parameters giving a region set-equal to `target`. Candidates are the
    /// endpoints of `target` lying in each domain plus the first `samples` domain values.
    pub fn find_args(&self, target: &Region, samples: usize) -> Result<Option<Vec<Ordinal>>> {
        if target.dim() != self.region.dim {
            return Ok(None);
        }
        let ends: BTreeSet<Ordinal> = target.endpoints().flat_map(|e| [e, e.succ()]).collect();
        let per: Vec<Vec<Ordinal>> = self
            .params
            .iter()
            .map(|d| {
                let mut c: BTreeSet<Ordinal> = d.sample(samples).into_iter().collect();
                c.extend(ends.iter().copied().filter(|e| d.contains(*e)));
                c.into_iter().collect()
            })
            .collect();
        for args in product(&per) {
            if !self.admits(&args) {
                continue;
            }
            if self.instance(&args)?.set_eq(target)? {
                return Ok(Some(args));
            }
        }
        Ok(None)
    }
}

fn product(per: &[Vec<Ordinal>]) -> Vec<Vec<Ordinal>> {
    let mut out: Vec<Vec<Ordinal>> = vec![Vec::new()];
    for values in per {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Lower endpoint of a varying side: fixed, or strictly increasing in the chain index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerTemplate {
    Fixed(Term),
    Increasing { limit: Ordinal, sampler: Sampler },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaryingSide {
    pub lo: LowerTemplate,
    pub hi: Term,
    pub hi_kind: HiKind,
}

impl VaryingSide {
    pub fn fixed(lo: impl Into<Term>, hi: impl Into<Term>, hi_kind: HiKind) -> Self {
        Self { lo: LowerTemplate::Fixed(lo.into()), hi: hi.into(), hi_kind }
    }

    pub fn increasing(limit: Ordinal, sampler: Sampler, hi: impl Into<Term>, hi_kind: HiKind) -> Self {
        Self { lo: LowerTemplate::Increasing { limit, sampler }, hi: hi.into(), hi_kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaryingBox {
    pub sides: Vec<VaryingSide>,
}

/// Argument of a membership claim: the chain index itself or a term over the schema's
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Index,
    Term(Term),
}

impl Serialize for Arg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Arg::Index => s.serialize_str("index"),
            Arg::Term(t) => t.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Arg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Param { param: usize },
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) if s == "index" => Ok(Arg::Index),
            Repr::Str(s) => s.parse().map(|o| Arg::Term(Term::Const(o))).map_err(serde::de::Error::custom),
            Repr::Param { param } => Ok(Arg::Term(Term::Param { param })),
        }
    }
}

/// Claim that ball `i` of a chain equals `family(args)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberOf {
    pub family: String,
    pub args: Vec<Arg>,
}

/// A parametric family of chains. With no parameters it is a single chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaFamily {
    pub name: String,
    #[serde(default)]
    pub params: Vec<IndexDomain>,
    pub index: IndexDomain,
    #[serde(default)]
    pub varying: Vec<VaryingBox>,
    pub constant: RegionTemplate,
    #[serde(default)]
    pub member_of: Option<MemberOf>,
    /// Why the declared schemas exhaust the chains without a minimum.
    #[serde(default)]
    pub note: String,
}

impl SchemaFamily {
    pub fn dim(&self) -> usize {
        self.constant.dim
    }

    pub fn instantiate(&self, params: &[Ordinal]) -> Result<BallSchema> {
        if params.len() != self.params.len() {
            return Err(self.invalid(format!("expects {} parameters", self.params.len())));
        }
        let dim = self.dim();
        let mut varying = Vec::with_capacity(self.varying.len());
        for b in &self.varying {
            if b.sides.len() != dim {
                return Err(Error::Dimension { expected: dim, got: b.sides.len() });
            }
            let mut sides = Vec::with_capacity(dim);
            for s in &b.sides {
                let lo = match &s.lo {
                    LowerTemplate::Fixed(t) => EndpointFn::Const(t.eval(params)?),
                    LowerTemplate::Increasing { limit, sampler } => {
                        EndpointFn::StrictIncreasingTo { limit: *limit, sampler: sampler.clone() }
                    }
                };
                sides.push(SchemaSide { lo, hi: s.hi.eval(params)?, hi_kind: s.hi_kind });
            }
            varying.push(SchemaBox { sides });
        }
        Ok(BallSchema {
            name: self.name.clone(),
            index_domain: self.index.clone(),
            varying,
            constant: self.constant.instantiate(params)?,
        })
    }

    pub fn sampled_params(&self, samples: usize) -> Vec<Vec<Ordinal>> {
        let per: Vec<Vec<Ordinal>> = self.params.iter().map(|d| d.sample(samples)).collect();
        product(&per)
    }

    /// The chain intersections as a family over the same parameters: every increasing lower
    /// endpoint is replaced by its limit.
    pub fn intersection_family(&self) -> Result<Family> {
        if self.index.is_finite() {
            return Err(self.invalid("finite chains have a minimum; no limit family".into()));
        }
        let mut boxes = Vec::new();
        for b in &self.varying {
            let sides = b
                .sides
                .iter()
                .map(|s| SideTemplate {
                    lo: match &s.lo {
                        LowerTemplate::Fixed(t) => t.clone(),
                        LowerTemplate::Increasing { limit, .. } => Term::Const(*limit),
                    },
                    hi: s.hi.clone(),
                    hi_kind: s.hi_kind,
                })
                .collect();
            boxes.push(BoxTemplate { sides });
        }
        boxes.extend(self.constant.boxes.iter().cloned());
        let mut region = RegionTemplate { dim: self.dim(), boxes };
        region.prune_absorbed(&self.params);
        Ok(Family { name: format!("ci({})", self.name), params: self.params.clone(), region, distinct: Vec::new() })
    }

    fn invalid(&self, msg: String) -> Error {
        Error::InvalidSchema { name: self.name.clone(), msg }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaSide {
    pub lo: EndpointFn,
    pub hi: Ordinal,
    pub hi_kind: HiKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaBox {
    pub sides: Vec<SchemaSide>,
}

/// One declared chain: `ball(i) = ⋃ varying(i) ∪ constant`.
///
/// Upper endpoints are constant: a decreasing sequence of ordinals stabilizes, so only lower
/// endpoints may move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSchema {
    pub name: String,
    pub index_domain: IndexDomain,
    pub varying: Vec<SchemaBox>,
    pub constant: Region,
}

/// Result of [`schema_is_chain`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

impl ChainCheck {
    fn fail(msg: String) -> Self {
        Self { ok: false, diagnostic: Some(msg) }
    }
}

impl BallSchema {
    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    /// The ball at the `position`-th sampled index.
    pub fn ball(&self, index: Ordinal, position: usize) -> Result<Region> {
        let mut boxes = Vec::new();
        for b in &self.varying {
            let mut sides = Vec::with_capacity(b.sides.len());
            for s in &b.sides {
                let lo = s.lo.eval(index, position).ok_or_else(|| {
                    Error::Endpoint(format!("no sample at position {position}"))
                })?;
                match Interval::new(lo, s.hi, s.hi_kind) {
                    Some(iv) => sides.push(iv),
                    None => break,
                }
            }
            if sides.len() == b.sides.len() {
                boxes.push(OrdBox::new(sides)?);
            }
        }
        Region::new(self.dim(), boxes)?.union(&self.constant)
    }

    /// Sampled `(index, ball)` pairs, stopping early where an explicit sampler runs out.
    pub fn sampled_balls(&self, samples: usize) -> Result<Vec<(Ordinal, Region)>> {
        let mut out = Vec::new();
        for (pos, idx) in self.index_domain.sample(samples).into_iter().enumerate() {
            let exhausted = self
                .varying
                .iter()
                .flat_map(|b| b.sides.iter())
                .any(|s| s.lo.eval(idx, pos).is_none());
            if exhausted {
                break;
            }
            out.push((idx, self.ball(idx, pos)?));
        }
        Ok(out)
    }

    fn endpoint_fns(&self) -> impl Iterator<Item = &EndpointFn> {
        self.varying.iter().flat_map(|b| b.sides.iter().map(|s| &s.lo))
    }

    fn has_moving_endpoint(&self) -> bool {
        self.endpoint_fns().any(|f| matches!(f, EndpointFn::StrictIncreasingTo { .. }))
    }
}

/// Checks declared endpoint monotonicity and that the sampled balls are nonempty and
/// ⊇-decreasing along the index.
pub fn schema_is_chain(s: &BallSchema, samples: usize) -> ChainCheck {
    for f in s.endpoint_fns() {
        if let Err(e) = f.validate(&s.index_domain, samples) {
            return ChainCheck::fail(format!("{e}"));
        }
    }
    let balls = match s.sampled_balls(samples) {
        Ok(b) => b,
        Err(e) => return ChainCheck::fail(format!("{e}")),
    };
    if balls.is_empty() {
        return ChainCheck::fail("no sampled balls".into());
    }
    for (i, (idx, b)) in balls.iter().enumerate() {
        if b.is_empty() {
            return ChainCheck::fail(format!("ball at index {idx} is empty"));
        }
        for (jdx, c) in &balls[i + 1..] {
            match c.subset(b) {
                Ok(true) => {}
                Ok(false) => {
                    return ChainCheck::fail(format!(
                        "ball at index {jdx} is not contained in ball at index {idx}"
                    ))
                }
                Err(e) => return ChainCheck::fail(format!("{e}")),
            }
        }
    }
    ChainCheck { ok: true, diagnostic: None }
}

/// Intersection of the chain: the constant part together with every varying box whose moving
/// lower endpoints are replaced by their limits. Finite chains yield their last ball.
pub fn chain_intersection(s: &BallSchema, samples: usize) -> Result<Region> {
    let check = schema_is_chain(s, samples);
    if !check.ok {
        return Err(Error::InvalidSchema {
            name: s.name.clone(),
            msg: check.diagnostic.unwrap_or_default(),
        });
    }
    let result = if s.index_domain.is_finite() || !s.has_moving_endpoint() {
        let balls = s.sampled_balls(samples.max(1))?;
        let last = if let IndexDomain::Fin(n) = s.index_domain {
            let n = n as usize;
            let idx = Ordinal::nat(n as u32 - 1);
            s.ball(idx, n - 1)?
        } else {
            // Nothing moves: every ball is the same set.
            balls.last().map(|(_, b)| b.clone()).expect("checked nonempty")
        };
        last
    } else {
        let mut boxes = Vec::new();
        for b in &s.varying {
            let mut sides = Vec::with_capacity(b.sides.len());
            for side in &b.sides {
                let lo = endpoint_sup(&side.lo, &s.index_domain, samples)?;
                match Interval::new(lo, side.hi, side.hi_kind) {
                    Some(iv) => sides.push(iv),
                    None => break,
                }
            }
            if sides.len() == b.sides.len() {
                boxes.push(OrdBox::new(sides)?);
            }
        }
        Region::new(s.dim(), boxes)?.union(&s.constant)?
    };
    for (idx, ball) in s.sampled_balls(samples)? {
        if !result.subset(&ball)? {
            return Err(Error::InvalidSchema {
                name: s.name.clone(),
                msg: format!("computed intersection not contained in ball at index {idx}"),
            });
        }
    }
    Ok(result)
}

/// A ball space given by parametric families over a region universe, together with the
/// chain schemas declared to cover every chain without a least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicBallSpace {
    pub name: String,
    pub dim: usize,
    pub universe: Region,
    pub families: Vec<Family>,
    #[serde(default)]
    pub chain_schemas: Vec<SchemaFamily>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl SymbolicBallSpace {
    pub fn family(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.name == name)
    }

    /// Checks every sampled family instance is nonempty and inside the universe, and every
    /// declared schema.
    pub fn validate(&self, samples: usize) -> Result<()> {
        if self.universe.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: self.universe.dim() });
        }
        for f in &self.families {
            f.check_shape()?;
            if f.region.dim != self.dim {
                return Err(Error::Dimension { expected: self.dim, got: f.region.dim });
            }
            for (args, r) in f.sampled_instances(samples)? {
                if r.is_empty() {
                    return Err(Error::InvalidBallSpace(format!(
                        "family `{}` is empty at {args:?}",
                        f.name
                    )));
                }
                if !r.subset(&self.universe)? {
                    return Err(Error::InvalidBallSpace(format!(
                        "family `{}` leaves the universe at {args:?}",
                        f.name
                    )));
                }
            }
        }
        for s in &self.chain_schemas {
            validate_schema(s, &self.families, samples)?;
        }
        Ok(())
    }

    /// A family member set-equal to `r`, if the sampled search finds one.
    pub fn find_instance(&self, r: &Region, samples: usize) -> Result<Option<(String, Vec<Ordinal>)>> {
        find_in(&self.families, r, samples)
    }
}

fn find_in(families: &[Family], r: &Region, samples: usize) -> Result<Option<(String, Vec<Ordinal>)>> {
    for f in families {
        if let Some(args) = f.find_args(r, samples)? {
            return Ok(Some((f.name.clone(), args)));
        }
    }
    Ok(None)
}

/// Validates every sampled instance of a schema family: it is a chain, and its balls are
/// members of `families` (through `member_of`, or by search when absent).
pub fn validate_schema(s: &SchemaFamily, families: &[Family], samples: usize) -> Result<()> {
    let invalid = |msg: String| Error::InvalidSchema { name: s.name.clone(), msg };
    if let Some(p) = [s.constant.max_param()]
        .into_iter()
        .chain(s.varying.iter().flat_map(|b| {
            b.sides.iter().map(|side| {
                let lo = match &side.lo {
                    LowerTemplate::Fixed(t) => t.max_param(),
                    LowerTemplate::Increasing { .. } => None,
                };
                lo.max(side.hi.max_param())
            })
        }))
        .flatten()
        .max()
    {
        if p >= s.params.len() {
            return Err(invalid(format!("refers to undeclared parameter {p}")));
        }
    }
    let target = match &s.member_of {
        Some(m) => Some(
            families
                .iter()
                .find(|f| f.name == m.family)
                .ok_or_else(|| invalid(format!("unknown family `{}`", m.family)))?,
        ),
        None => None,
    };
    for params in s.sampled_params(samples) {
        let schema = s.instantiate(&params)?;
        let check = schema_is_chain(&schema, samples);
        if !check.ok {
            return Err(invalid(format!(
                "not a chain at {params:?}: {}",
                check.diagnostic.unwrap_or_default()
            )));
        }
        for (idx, ball) in schema.sampled_balls(samples)? {
            match (&s.member_of, target) {
                (Some(m), Some(f)) => {
                    let args: Vec<Ordinal> = m
                        .args
                        .iter()
                        .map(|a| match a {
                            Arg::Index => Ok(idx),
                            Arg::Term(t) => t.eval(&params),
                        })
                        .collect::<Result<_>>()?;
                    let claimed = f.instance(&args)?;
                    if !claimed.set_eq(&ball)? {
                        return Err(invalid(format!(
                            "ball at index {idx} ({ball}) differs from {}{args:?} ({claimed})",
                            f.name
                        )));
                    }
                }
                _ => {
                    if find_in(families, &ball, samples.min(8))?.is_none() {
                        return Err(invalid(format!("ball at index {idx} ({ball}) is not a member")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Outcome of one symbolic `ci` step.
#[derive(Clone, Debug)]
pub struct CiSymbolic {
    pub space: SymbolicBallSpace,
    /// Families of chain intersections not already present, in deterministic order.
    pub new_families: Vec<Family>,
    pub log: Vec<String>,
}

/// One application of `ci` at the symbolic level: every declared schema's intersection family
/// is computed (and cross-checked against the per-instance limit computation); nonempty
/// families not already present are appended.
pub fn ci_symbolic(s: &SymbolicBallSpace, samples: usize) -> Result<CiSymbolic> {
    s.validate(samples)?;
    let mut log = Vec::new();
    let mut fresh: Vec<(String, Family)> = Vec::new();
    for schema in &s.chain_schemas {
        if schema.index.is_finite() {
            log.push(format!("{}: finite chain, intersection is its last ball", schema.name));
            continue;
        }
        let fam = schema.intersection_family()?;
        let mut empties = 0;
        let mut instances = Vec::new();
        for params in schema.sampled_params(samples) {
            let direct = chain_intersection(&schema.instantiate(&params)?, samples)?;
            let symbolic = fam.region.instantiate(&params)?;
            if !direct.set_eq(&symbolic)? {
                return Err(Error::InvalidSchema {
                    name: schema.name.clone(),
                    msg: format!("limit family disagrees with chain intersection at {params:?}"),
                });
            }
            if symbolic.is_empty() {
                empties += 1;
            }
            instances.push(symbolic);
        }
        if empties == instances.len() {
            log.push(format!("{}: intersection empty, no ball", schema.name));
            continue;
        }
        if empties > 0 {
            return Err(Error::InvalidSchema {
                name: schema.name.clone(),
                msg: "intersection is empty for some parameters only".into(),
            });
        }
        let mut present = 0;
        let mut known: Vec<Family> = s.families.clone();
        known.extend(fresh.iter().map(|(_, f)| f.clone()));
        for r in &instances {
            if find_in(&known, r, 4)?.is_some() {
                present += 1;
            }
        }
        if present == instances.len() {
            log.push(format!("{}: every intersection already a ball", schema.name));
            continue;
        }
        log.push(format!(
            "{}: new family {} ({} of {} sampled instances new)",
            schema.name,
            fam.name,
            instances.len() - present,
            instances.len()
        ));
        let key = instances[0].serialize_key();
        fresh.push((key, fam));
    }
    fresh.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.name.cmp(&b.1.name)));
    let new_families: Vec<Family> = fresh.into_iter().map(|(_, f)| f).collect();
    let mut space = s.clone();
    space.families.extend(new_families.iter().cloned());
    Ok(CiSymbolic { space, new_families, log })
}

/// Result of iterating [`ci_symbolic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirOutcome {
    /// Number of steps that added balls before the first step that added none.
    pub rank: usize,
    /// False when `max_iter` ran out first.
    pub fixpoint: bool,
    /// Names of the families added at each step.
    pub steps: Vec<Vec<String>>,
}

/// Chain-intersection rank by iteration. After each step `supplier` receives the newly added
/// families and returns the schemas for chains among them.
pub fn cir(
    s: &SymbolicBallSpace,
    supplier: &mut dyn FnMut(&[Family]) -> Vec<SchemaFamily>,
    max_iter: usize,
    samples: usize,
) -> Result<CirOutcome> {
    if max_iter == 0 {
        return Err(Error::Invalid("max_iter must be at least 1".into()));
    }
    let mut current = s.clone();
    let mut steps = Vec::new();
    for _ in 0..max_iter {
        let out = ci_symbolic(&current, samples)?;
        if out.new_families.is_empty() {
            return Ok(CirOutcome { rank: steps.len(), fixpoint: true, steps });
        }
        steps.push(out.new_families.iter().map(|f| f.name.clone()).collect());
        let extra = supplier(&out.new_families);
        current = out.space;
        current.chain_schemas.extend(extra);
    }
    Ok(CirOutcome { rank: steps.len(), fixpoint: false, steps })
}

/// Converts a one-parameter family into the chain `{family(p)}` indexed by its parameter.
/// Parameters may only occur in lower endpoints, which then increase to the order type of
/// the parameter domain.
pub fn family_as_chain(f: &Family, name: &str) -> Result<SchemaFamily> {
    if f.params.len() != 1 {
        return Err(Error::Invalid(format!(
            "family `{}` has {} parameters; a chain needs exactly one",
            f.name,
            f.params.len()
        )));
    }
    let domain = f.params[0].clone();
    if domain.is_finite() {
        return Err(Error::Invalid("finite parameter domain".into()));
    }
    let mut varying = Vec::new();
    for b in &f.region.boxes {
        let mut sides = Vec::new();
        for s in &b.sides {
            if s.hi.max_param().is_some() {
                return Err(Error::Invalid(format!(
                    "family `{}` moves an upper endpoint with its parameter",
                    f.name
                )));
            }
            let lo = match &s.lo {
                Term::Param { .. } => LowerTemplate::Increasing {
                    limit: domain.order_type(),
                    sampler: Sampler::Identity,
                },
                t @ Term::Const(_) => LowerTemplate::Fixed(t.clone()),
            };
            sides.push(VaryingSide { lo, hi: s.hi.clone(), hi_kind: s.hi_kind });
        }
        varying.push(VaryingBox { sides });
    }
    Ok(SchemaFamily {
        name: name.to_string(),
        params: Vec::new(),
        index: domain,
        varying,
        constant: RegionTemplate { dim: f.region.dim, boxes: Vec::new() },
        member_of: Some(MemberOf { family: f.name.clone(), args: vec![Arg::Index] }),
        note: format!("the members of `{}` along their parameter", f.name),
    })
}
