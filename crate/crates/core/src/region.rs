//! Finite unions of ordinal-interval boxes.
//!
//! Lower bounds are always closed (`x > d` is `x ≥ d+1`). Upper bounds carry an open/closed
//! flag since limit ordinals have no predecessor. Open upper bounds at successor ordinals are
//! normalized to closed ones, so every nonempty interval has exactly one stored form. Regions
//! are not normalized; equality is semantic ([`Region::set_eq`]).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HiKind {
    Closed,
    Open,
}

/// A nonempty ordinal interval `[lo, hi]` or `[lo, hi)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: Ordinal,
    hi: Ordinal,
    hi_kind: HiKind,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: Ordinal,
    hi: Ordinal,
    hi_kind: HiKind,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(r: RawInterval) -> Result<Self> {
        Interval::new(r.lo, r.hi, r.hi_kind).ok_or_else(|| {
            Error::EmptyInterval(format!("lo={} hi={} {:?}", r.lo, r.hi, r.hi_kind))
        })
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval { lo: i.lo, hi: i.hi, hi_kind: i.hi_kind }
    }
}

impl Interval {
    /// `None` when the interval is empty.
    pub fn new(lo: Ordinal, hi: Ordinal, hi_kind: HiKind) -> Option<Self> {
        let (hi, hi_kind) = match (hi_kind, hi.pred()) {
            (HiKind::Open, Some(p)) => (p, HiKind::Closed),
            _ => (hi, hi_kind),
        };
        let nonempty = match hi_kind {
            HiKind::Closed => lo <= hi,
            HiKind::Open => lo < hi,
        };
        nonempty.then_some(Self { lo, hi, hi_kind })
    }

    pub fn closed(lo: Ordinal, hi: Ordinal) -> Option<Self> {
        Self::new(lo, hi, HiKind::Closed)
    }

    pub fn open(lo: Ordinal, hi: Ordinal) -> Option<Self> {
        Self::new(lo, hi, HiKind::Open)
    }

    pub fn point(x: Ordinal) -> Self {
        Self { lo: x, hi: x, hi_kind: HiKind::Closed }
    }

    pub fn lo(&self) -> Ordinal {
        self.lo
    }

    pub fn hi(&self) -> Ordinal {
        self.hi
    }

    pub fn hi_kind(&self) -> HiKind {
        self.hi_kind
    }

    pub fn contains(&self, x: Ordinal) -> bool {
        self.lo <= x
            && match self.hi_kind {
                HiKind::Closed => x <= self.hi,
                HiKind::Open => x < self.hi,
            }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let (hi, kind) = match self.hi.cmp(&other.hi) {
            core::cmp::Ordering::Less => (self.hi, self.hi_kind),
            core::cmp::Ordering::Greater => (other.hi, other.hi_kind),
            core::cmp::Ordering::Equal => (self.hi, self.hi_kind.max(other.hi_kind)),
        };
        Self::new(lo, hi, kind)
    }

    /// `self ∖ other` as at most two disjoint intervals (below, above).
    pub fn diff(&self, other: &Self) -> Vec<Self> {
        let mut out = Vec::with_capacity(2);
        if let Some(below) = Self::open(Ordinal::ZERO, other.lo).and_then(|b| self.intersect(&b)) {
            out.push(below);
        }
        let above_start = match other.hi_kind {
            HiKind::Closed => other.hi.succ(),
            HiKind::Open => other.hi,
        };
        if let Some(above) = Self::new(self.lo.max(above_start), self.hi, self.hi_kind) {
            out.push(above);
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        other.lo <= self.lo
            && match (self.hi.cmp(&other.hi), self.hi_kind, other.hi_kind) {
                (core::cmp::Ordering::Less, _, _) => true,
                (core::cmp::Ordering::Equal, k1, k2) => k1 >= k2,
                (core::cmp::Ordering::Greater, _, _) => false,
            }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi_kind {
            HiKind::Closed if self.lo == self.hi => write!(f, "{{{}}}", self.lo),
            HiKind::Closed => write!(f, "[{},{}]", self.lo, self.hi),
            HiKind::Open => write!(f, "[{},{})", self.lo, self.hi),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A product of nonempty intervals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct OrdBox {
    sides: Vec<Interval>,
}

#[derive(Deserialize)]
struct RawBox {
    sides: Vec<Interval>,
}

impl TryFrom<RawBox> for OrdBox {
    type Error = Error;

    fn try_from(r: RawBox) -> Result<Self> {
        OrdBox::new(r.sides)
    }
}

impl OrdBox {
    pub fn new(sides: Vec<Interval>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        Ok(Self { sides })
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn contains(&self, p: &[Ordinal]) -> bool {
        p.len() == self.sides.len() && self.sides.iter().zip(p).all(|(s, x)| s.contains(*x))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let sides: Option<Vec<_>> =
            self.sides.iter().zip(&other.sides).map(|(a, b)| a.intersect(b)).collect();
        sides.map(|sides| Self { sides })
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.sides.iter().zip(&other.sides).all(|(a, b)| a.is_subset(b))
    }

    /// `self ∖ other` as pairwise disjoint boxes.
    pub fn diff(&self, other: &Self) -> Vec<Self> {
        let Some(common) = self.intersect(other) else {
            return alloc::vec![self.clone()];
        };
        let mut out = Vec::new();
        for d in 0..self.dim() {
            for piece in self.sides[d].diff(&other.sides[d]) {
                let mut sides = Vec::with_capacity(self.dim());
                sides.extend_from_slice(&common.sides[..d]);
                sides.push(piece);
                sides.extend_from_slice(&self.sides[d + 1..]);
                out.push(Self { sides });
            }
        }
        out
    }
}

impl fmt::Display for OrdBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sides.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OrdBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite union of boxes of a common dimension. The empty list is the empty set.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRegion")]
pub struct Region {
    dim: usize,
    boxes: Vec<OrdBox>,
}

#[derive(Deserialize)]
struct RawRegion {
    dim: usize,
    boxes: Vec<OrdBox>,
}

impl TryFrom<RawRegion> for Region {
    type Error = Error;

    fn try_from(r: RawRegion) -> Result<Self> {
        Region::new(r.dim, r.boxes)
    }
}

impl Region {
    pub fn new(dim: usize, boxes: Vec<OrdBox>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::Dimension { expected: dim, got: b.dim() });
        }
        Ok(Self { dim, boxes })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, boxes: Vec::new() }
    }

    pub fn from_box(b: OrdBox) -> Self {
        Self { dim: b.dim(), boxes: alloc::vec![b] }
    }

    /// Builds a region from `(lo, hi, kind)` triples per side, dropping empty boxes.
    pub fn from_sides(dim: usize, boxes: &[&[(Ordinal, Ordinal, HiKind)]]) -> Result<Self> {
        let mut out = Vec::new();
        for sides in boxes {
            if sides.len() != dim {
                return Err(Error::Dimension { expected: dim, got: sides.len() });
            }
            let ivs: Option<Vec<_>> =
                sides.iter().map(|(lo, hi, k)| Interval::new(*lo, *hi, *k)).collect();
            if let Some(ivs) = ivs {
                out.push(OrdBox { sides: ivs });
            }
        }
        Ok(Self { dim, boxes: out })
    }

    pub fn point(p: &[Ordinal]) -> Self {
        Self::from_box(OrdBox { sides: p.iter().map(|x| Interval::point(*x)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[OrdBox] {
        &self.boxes
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    pub fn member(&self, p: &[Ordinal]) -> Result<bool> {
        if p.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: p.len() });
        }
        Ok(self.boxes.iter().any(|b| b.contains(p)))
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(Self { dim: self.dim, boxes })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        Ok(Self { dim: self.dim, boxes })
    }

    pub fn diff(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut pieces = self.boxes.clone();
        for b in &other.boxes {
            if pieces.is_empty() {
                break;
            }
            pieces = pieces.iter().flat_map(|p| p.diff(b)).collect();
        }
        Ok(Self { dim: self.dim, boxes: pieces })
    }

    pub fn subset(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        // Fast path: every box inside a single box of `other`.
        if self.boxes.iter().all(|a| other.boxes.iter().any(|b| a.is_subset(b))) {
            return Ok(true);
        }
        Ok(self.diff(other)?.is_empty())
    }

    pub fn set_eq(&self, other: &Self) -> Result<bool> {
        if self.hull() != other.hull() {
            self.check_dim(other)?;
            return Ok(false);
        }
        Ok(self.subset(other)? && other.subset(self)?)
    }

    /// Smallest enclosing box as per-side `(min lo, max (hi, kind))`; `None` for the empty set.
    /// Set-equal regions have equal hulls because intervals are stored in normal form.
    pub fn hull(&self) -> Option<Vec<Interval>> {
        let first = self.boxes.first()?;
        let mut sides = first.sides.clone();
        for b in &self.boxes[1..] {
            for (h, s) in sides.iter_mut().zip(&b.sides) {
                let lo = h.lo.min(s.lo);
                let (hi, kind) = if (s.hi, s.hi_kind == HiKind::Closed)
                    > (h.hi, h.hi_kind == HiKind::Closed)
                {
                    (s.hi, s.hi_kind)
                } else {
                    (h.hi, h.hi_kind)
                };
                *h = Interval { lo, hi, hi_kind: kind };
            }
        }
        Some(sides)
    }

    /// All endpoints mentioned by the region.
    pub fn endpoints(&self) -> impl Iterator<Item = Ordinal> + '_ {
        self.boxes.iter().flat_map(|b| b.sides.iter().flat_map(|s| [s.lo, s.hi]))
    }

    /// Deterministic textual form used for ordering ties.
    pub fn serialize_key(&self) -> String {
        let mut boxes: Vec<String> = self.boxes.iter().map(|b| format!("{b}")).collect();
        boxes.sort();
        boxes.join(" u ")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return f.write_str("∅");
        }
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{lattice_points, NaiveRegion};
    use alloc::vec::Vec;
    use proptest::prelude::*;

    const W: Ordinal = Ordinal::OMEGA;
    const W1: Ordinal = Ordinal::OMEGA1;
    const C: HiKind = HiKind::Closed;
    const O: HiKind = HiKind::Open;

    fn n(k: u32) -> Ordinal {
        Ordinal::nat(k)
    }

    /// B_{m,k} = [m,ω]×{k} ∪ {ω}×[k,ω).
    fn ex1_ball(m: u32, k: u32) -> Region {
        Region::from_sides(2, &[&[(n(m), W, C), (n(k), n(k), C)], &[(W, W, C), (n(k), W, O)]])
            .unwrap()
    }

    fn ex2_universe() -> Region {
        Region::from_sides(2, &[&[(n(0), W1, C), (n(0), W, O)], &[(n(0), W1, O), (W, W, C)]])
            .unwrap()
    }

    #[test]
    fn interval_normal_form() {
        let a = Interval::open(n(0), n(5)).unwrap();
        assert_eq!(a, Interval::closed(n(0), n(4)).unwrap());
        assert!(Interval::open(W, W).is_none());
        assert!(Interval::open(n(0), W).unwrap().hi_kind() == O);
    }

    #[test]
    fn membership_examples() {
        assert!(ex1_ball(2, 3).member(&[W, n(3)]).unwrap());
        assert!(!ex2_universe().member(&[W1, W]).unwrap());
        assert!(!Region::empty(2).member(&[n(0), n(0)]).unwrap());
        assert!(matches!(ex2_universe().member(&[n(0)]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn intersection_examples() {
        let a = Region::from_sides(2, &[&[(n(0), W, C), (n(2), n(2), C)]]).unwrap();
        let b = Region::from_sides(2, &[&[(W, W, C), (n(0), W, O)]]).unwrap();
        let got = a.intersect(&b).unwrap();
        assert!(got.set_eq(&Region::point(&[W, n(2)])).unwrap());
        assert!(a.intersect(&a).unwrap().set_eq(&a).unwrap());
        assert!(matches!(a.intersect(&Region::empty(3)), Err(Error::Dimension { .. })));
    }

    #[test]
    fn difference_examples() {
        let full = Region::from_sides(2, &[&[(n(0), W1, C), (n(0), W, C)]]).unwrap();
        let got = full.diff(&Region::point(&[W1, W])).unwrap();
        assert!(got.set_eq(&ex2_universe()).unwrap());
        assert!(full.diff(&full).unwrap().is_empty());
        assert!(full.diff(&Region::empty(2)).unwrap().set_eq(&full).unwrap());
    }

    #[test]
    fn subset_examples() {
        let alpha = Ordinal::omega_plus(1, 3);
        let row = Region::from_sides(2, &[&[(alpha, W1, O), (W, W, C)]]).unwrap();
        assert!(row.subset(&ex2_universe()).unwrap());
        assert!(Region::empty(2).subset(&row).unwrap());
        assert!(ex1_ball(5, 3).subset(&ex1_ball(2, 3)).unwrap());
        assert!(!ex1_ball(2, 3).subset(&ex1_ball(5, 3)).unwrap());
    }

    fn endpoint_pool() -> Vec<Ordinal> {
        let mut v: Vec<Ordinal> = (0..6).map(n).collect();
        v.extend((0..6).map(|c| Ordinal::omega_plus(1, c)));
        v.push(W1);
        v.push(W1.succ());
        v
    }

    fn arb_region(dim: usize) -> impl Strategy<Value = Region> {
        let pool = endpoint_pool();
        let side = (0..pool.len(), 0..pool.len(), any::<bool>()).prop_map(move |(i, j, open)| {
            let (lo, hi) = if pool[i] <= pool[j] { (pool[i], pool[j]) } else { (pool[j], pool[i]) };
            Interval::new(lo, hi, if open { O } else { C })
        });
        prop::collection::vec(prop::collection::vec(side, dim), 0..4).prop_map(move |boxes| {
            let boxes = boxes
                .into_iter()
                .filter_map(|sides| sides.into_iter().collect::<Option<Vec<_>>>())
                .map(|sides| OrdBox::new(sides).unwrap())
                .collect();
            Region::new(dim, boxes).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ops_agree_with_lattice(r in arb_region(2), s in arb_region(2)) {
            let pts = lattice_points(&[&r, &s], 2);
            let (nr, ns) = (NaiveRegion::from(&r), NaiveRegion::from(&s));
            let i = r.intersect(&s).unwrap();
            let d = r.diff(&s).unwrap();
            for p in &pts {
                prop_assert_eq!(i.member(p).unwrap(), nr.contains(p) && ns.contains(p));
                prop_assert_eq!(d.member(p).unwrap(), nr.contains(p) && !ns.contains(p));
            }
            let naive_subset = pts.iter().all(|p| !nr.contains(p) || ns.contains(p));
            prop_assert_eq!(r.subset(&s).unwrap(), naive_subset);
        }

        #[test]
        fn algebraic_laws(r in arb_region(2), s in arb_region(2), t in arb_region(2)) {
            prop_assert!(r.intersect(&s).unwrap().set_eq(&s.intersect(&r).unwrap()).unwrap());
            let left = r.intersect(&s).unwrap().intersect(&t).unwrap();
            let right = r.intersect(&s.intersect(&t).unwrap()).unwrap();
            prop_assert!(left.set_eq(&right).unwrap());
            let twice = r.diff(&r.diff(&s).unwrap()).unwrap();
            prop_assert!(twice.set_eq(&r.intersect(&s).unwrap()).unwrap());
        }

        #[test]
        fn hull_respects_set_eq(r in arb_region(1), s in arb_region(1)) {
            let u1 = r.union(&s).unwrap();
            let u2 = Region::new(1, u1.diff(&s).unwrap().boxes().iter().cloned()
                .chain(s.boxes().iter().cloned()).collect()).unwrap();
            prop_assert_eq!(u1.hull(), u2.hull());
            prop_assert!(u1.set_eq(&u2).unwrap());
        }
    }
}
