//! Finite ultrametric spaces with values in a poset with least element.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ballspace::FiniteBallSpace;
use crate::bits::PointSet;
use crate::poset::{FinitePoset, ValuePoset};
use crate::{Error, Result};

/// A failed axiom with a witness. Indices refer to points, values or balls as named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d(x,y) = ⊥` exactly when `x = y` fails at this pair.
    U1 { x: usize, y: usize },
    /// `d(x,y) ≤ γ` and `d(y,z) ≤ γ` but not `d(x,z) ≤ γ`.
    U2 { x: usize, y: usize, z: usize, gamma: usize },
    U3 { x: usize, y: usize },
    /// `d(x,z) > max(d(x,y), d(y,z))` in a linear value set.
    Ut { x: usize, y: usize, z: usize },
    /// Ball `small ⊆ large` but `δ(small) ≰ δ(large)`.
    D1 { small: usize, large: usize },
    /// Balls meet and `δ(b0) ≤ δ(b1)` but `b0 ⊄ b1`.
    D2 { b0: usize, b1: usize },
    Table(String),
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::U1 { .. } => "U1",
            Violation::U2 { .. } => "U2",
            Violation::U3 { .. } => "U3",
            Violation::Ut { .. } => "UT",
            Violation::D1 { .. } => "D1",
            Violation::D2 { .. } => "D2",
            Violation::Table(_) => "table",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::U1 { x, y } => write!(f, "(U1) fails at points {x}, {y}"),
            Violation::U2 { x, y, z, gamma } => {
                write!(f, "(U2) fails: d({x},{y}) ≤ {gamma} and d({y},{z}) ≤ {gamma} but d({x},{z}) ≰ {gamma}")
            }
            Violation::U3 { x, y } => write!(f, "(U3) fails: d({x},{y}) ≠ d({y},{x})"),
            Violation::Ut { x, y, z } => {
                write!(f, "(UT) fails: d({x},{z}) > max(d({x},{y}), d({y},{z}))")
            }
            Violation::D1 { small, large } => {
                write!(f, "(D1) fails: ball {small} ⊆ ball {large} but δ({small}) ≰ δ({large})")
            }
            Violation::D2 { b0, b1 } => {
                write!(f, "(D2) fails: balls {b0}, {b1} meet, δ({b0}) ≤ δ({b1}) but ball {b0} ⊄ ball {b1}")
            }
            Violation::Table(m) => write!(f, "malformed table: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteUltrametricSpace {
    points: Vec<String>,
    gamma: ValuePoset,
    d: Vec<Vec<usize>>,
}

/// Validates the table and returns the space, or the first violated axiom.
pub fn validate_ultrametric(
    points: Vec<String>,
    gamma: ValuePoset,
    d: Vec<Vec<usize>>,
) -> core::result::Result<FiniteUltrametricSpace, Violation> {
    let n = points.len();
    if d.len() != n || d.iter().any(|r| r.len() != n) {
        return Err(Violation::Table(format!("expected a {n}×{n} table")));
    }
    if let Some((x, y)) = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| d[x][y] >= gamma.len()) {
        return Err(Violation::Table(format!("d({x},{y}) is not a value")));
    }
    for x in 0..n {
        for y in 0..n {
            if (d[x][y] == gamma.bottom()) != (x == y) {
                return Err(Violation::U1 { x, y });
            }
            if d[x][y] != d[y][x] {
                return Err(Violation::U3 { x: x.min(y), y: x.max(y) });
            }
        }
    }
    if let Some(v) = check_u2(&d, &gamma) {
        return Err(v);
    }
    if gamma.is_linear() {
        let ut = check_ut(&d, &gamma);
        assert!(ut.is_none(), "(U2) holds but (UT) fails: {ut:?}");
    }
    Ok(FiniteUltrametricSpace { points, gamma, d })
}

fn rows(d: &[Vec<usize>], gamma: &ValuePoset, g: usize) -> Vec<PointSet> {
    d.iter()
        .map(|row| row.iter().enumerate().filter(|(_, v)| gamma.le(**v, g)).map(|(y, _)| y).collect())
        .collect()
}

/// (U2) over every `γ ∈ Γ`: the relation `d(x,y) ≤ γ` must be transitive.
pub fn check_u2(d: &[Vec<usize>], gamma: &ValuePoset) -> Option<Violation> {
    for g in 0..gamma.len() {
        let r = rows(d, gamma, g);
        for x in 0..d.len() {
            for y in r[x].iter() {
                if let Some(z) = r[y].difference(&r[x]).first() {
                    return Some(Violation::U2 { x, y, z, gamma: g });
                }
            }
        }
    }
    None
}

/// The ultrametric triangle law; only meaningful for a linear value set.
pub fn check_ut(d: &[Vec<usize>], gamma: &ValuePoset) -> Option<Violation> {
    let n = d.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let m = if gamma.le(d[x][y], d[y][z]) { d[y][z] } else { d[x][y] };
                if !gamma.le(d[x][z], m) {
                    return Some(Violation::Ut { x, y, z });
                }
            }
        }
    }
    None
}

/// A downward-closed set of values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialSegment {
    members: PointSet,
}

impl InitialSegment {
    pub fn new(gamma: &ValuePoset, members: PointSet) -> Result<Self> {
        for x in members.iter() {
            if x >= gamma.len() {
                return Err(Error::UnknownId(format!("value {x}")));
            }
            if let Some(y) = (0..gamma.len()).find(|&y| gamma.le(y, x) && !members.contains(y)) {
                return Err(Error::Invalid(format!(
                    "not an initial segment: {} ≤ {} is missing",
                    gamma.base().name(y),
                    gamma.base().name(x)
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }
}

/// A closed ball `B_α(x)` and whether some `y` has `d(x,y) = α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedBall {
    pub set: PointSet,
    pub precise: bool,
}

/// `δ` on a family of balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltraDiameter {
    pub balls: Vec<PointSet>,
    pub gamma: FinitePoset,
    pub delta: Vec<usize>,
}

impl FiniteUltrametricSpace {
    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn gamma(&self) -> &ValuePoset {
        &self.gamma
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> usize {
        self.d[x][y]
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownId(format!("point {x}")))
        }
    }

    /// `B(x,y) = { z : d(x,z) ≤ d(x,y) }`.
    pub fn precise_ball(&self, x: usize, y: usize) -> Result<PointSet> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.closed_set(x, self.d[x][y]))
    }

    fn closed_set(&self, x: usize, alpha: usize) -> PointSet {
        (0..self.len()).filter(|&z| self.gamma.le(self.d[x][z], alpha)).collect()
    }

    /// `B_α(x) = { y : d(x,y) ≤ α }`.
    pub fn closed_ball(&self, x: usize, alpha: usize) -> Result<ClosedBall> {
        self.check_point(x)?;
        if alpha >= self.gamma.len() {
            return Err(Error::UnknownId(format!("value {alpha}")));
        }
        Ok(ClosedBall {
            set: self.closed_set(x, alpha),
            precise: self.d[x].contains(&alpha),
        })
    }

    /// `B_S(x) = { y : d(x,y) ∈ S }`.
    pub fn segment_ball(&self, x: usize, s: &InitialSegment) -> Result<PointSet> {
        self.check_point(x)?;
        Ok((0..self.len()).filter(|&y| s.members.contains(self.d[x][y])).collect())
    }

    /// `B_d`: all precise balls, deduplicated by set equality in order of first appearance.
    pub fn ball_space(&self) -> FiniteBallSpace {
        let (balls, _) = self.balls_with_values();
        FiniteBallSpace::new(self.points.clone(), balls).expect("precise balls are nonempty")
    }

    fn balls_with_values(&self) -> (Vec<PointSet>, Vec<Result<usize, (usize, usize)>>) {
        let mut index: BTreeMap<PointSet, usize> = BTreeMap::new();
        let mut balls = Vec::new();
        let mut values: Vec<Result<usize, (usize, usize)>> = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                let b = self.closed_set(x, self.d[x][y]);
                let v = self.d[x][y];
                match index.get(&b) {
                    Some(&i) => {
                        if values[i] != Ok(v) && values[i].is_ok() {
                            let prev = values[i].unwrap();
                            values[i] = Err((prev, v));
                        }
                    }
                    None => {
                        index.insert(b.clone(), balls.len());
                        balls.push(b);
                        values.push(Ok(v));
                    }
                }
            }
        }
        (balls, values)
    }

    /// `δ(B(x,y)) = d(x,y)`, checked to be well defined and to satisfy (D1)/(D2).
    pub fn ultra_diameter(&self) -> Result<UltraDiameter> {
        let (balls, values) = self.balls_with_values();
        let mut delta = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            match v {
                Ok(v) => delta.push(v),
                Err((a, b)) => {
                    return Err(Error::Invalid(format!(
                        "δ not well defined: ball {i} is represented with values {} and {}",
                        self.gamma.base().name(a),
                        self.gamma.base().name(b)
                    )))
                }
            }
        }
        let gamma = self.gamma.base().clone();
        validate_ultra_diameter(&balls, &delta, &gamma)
            .map_err(|v| Error::Invalid(format!("induced δ: {v}")))?;
        Ok(UltraDiameter { balls, gamma, delta })
    }
}

/// The ultra-diameter induced by `s`.
pub fn ultra_diameter_from(s: &FiniteUltrametricSpace) -> Result<UltraDiameter> {
    s.ultra_diameter()
}

/// Exhaustive pairwise check of (D1) and (D2).
pub fn validate_ultra_diameter(
    balls: &[PointSet],
    delta: &[usize],
    gamma: &FinitePoset,
) -> core::result::Result<(), Violation> {
    if balls.len() != delta.len() {
        return Err(Violation::Table("one value per ball required".into()));
    }
    if let Some(i) = delta.iter().position(|&v| v >= gamma.len()) {
        return Err(Violation::Table(format!("δ of ball {i} is not a value")));
    }
    for i in 0..balls.len() {
        for j in 0..balls.len() {
            if balls[i].is_subset(&balls[j]) && !gamma.le(delta[i], delta[j]) {
                return Err(Violation::D1 { small: i, large: j });
            }
            if balls[i].intersects(&balls[j]) && gamma.le(delta[i], delta[j]) && !balls[i].is_subset(&balls[j]) {
                return Err(Violation::D2 { b0: i, b1: j });
            }
        }
    }
    Ok(())
}

/// Why `construct_from_tau` could not build a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauError {
    /// No member of τ contains both points.
    NoCover { x: usize, y: usize },
    /// Several ⊆-minimal members contain both points.
    NoSmallest { x: usize, y: usize, minimal: Vec<PointSet> },
    Invalid(String),
}

impl fmt::Display for TauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauError::NoCover { x, y } => write!(f, "no set contains both {x} and {y}"),
            TauError::NoSmallest { x, y, minimal } => write!(
                f,
                "no smallest set contains {x} and {y}; minimal covers: {}",
                minimal.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ")
            ),
            TauError::Invalid(m) => f.write_str(m),
        }
    }
}

fn set_name(points: &[String], s: &PointSet) -> String {
    let names: Vec<&str> = s.iter().map(|i| points[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// The smallest member of `tau` containing `x` and `y`.
pub fn smallest_cover(tau: &[PointSet], x: usize, y: usize) -> core::result::Result<usize, TauError> {
    let covering: Vec<usize> = (0..tau.len()).filter(|&i| tau[i].contains(x) && tau[i].contains(y)).collect();
    if covering.is_empty() {
        return Err(TauError::NoCover { x, y });
    }
    if let Some(&i) = covering.iter().find(|&&i| covering.iter().all(|&j| tau[i].is_subset(&tau[j]))) {
        return Ok(i);
    }
    let minimal = covering
        .iter()
        .filter(|&&i| !covering.iter().any(|&j| tau[j] != tau[i] && tau[j].is_subset(&tau[i])))
        .map(|&i| tau[i].clone())
        .collect();
    Err(TauError::NoSmallest { x, y, minimal })
}

/// The ultrametric `u_τ(x,y) = B_τ(x,y)` with values in `(τ ∪ {∅}, ⊆)`.
pub fn construct_from_tau(
    points: Vec<String>,
    tau: &[PointSet],
) -> core::result::Result<FiniteUltrametricSpace, TauError> {
    let n = points.len();
    let mut sets: Vec<PointSet> = vec![PointSet::new()];
    for s in tau {
        if s.iter().any(|i| i >= n) {
            return Err(TauError::Invalid(format!("set {s:?} mentions an unknown point")));
        }
        if !s.is_empty() && !sets.contains(s) {
            sets.push(s.clone());
        }
    }
    let mut d = vec![vec![0usize; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let v = smallest_cover(&sets, x, y)?;
            d[x][y] = v;
            d[y][x] = v;
        }
    }
    let names: Vec<String> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| if i == 0 { "∅".into() } else { set_name(&points, s) })
        .collect();
    let base = FinitePoset::from_fn(names, |i, j| sets[i].is_subset(&sets[j]))
        .map_err(|e| TauError::Invalid(format!("{e}")))?;
    let gamma = ValuePoset::new(base, 0).map_err(|e| TauError::Invalid(format!("{e}")))?;
    let space = validate_ultrametric(points, gamma, d).map_err(|v| TauError::Invalid(format!("u_τ: {v}")))?;
    for x in 0..n {
        for y in 0..n {
            if x != y && space.precise_ball(x, y).expect("in range") != sets[space.dist(x, y)] {
                return Err(TauError::Invalid(format!("B({x},{y}) differs from B_τ({x},{y})")));
            }
        }
    }
    Ok(space)
}

/// Whether every pair of points has a smallest covering ball; if so, the induced space.
#[derive(Clone, Debug)]
pub struct SmallestBallReport {
    pub holds: bool,
    pub failure: Option<TauError>,
    pub space: Option<FiniteUltrametricSpace>,
}

pub fn smallest_ball_property(b: &FiniteBallSpace) -> SmallestBallReport {
    match construct_from_tau(b.points().to_vec(), b.balls()) {
        Ok(space) => SmallestBallReport { holds: true, failure: None, space: Some(space) },
        Err(e) => SmallestBallReport { holds: false, failure: Some(e), space: None },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyReport {
    pub t1: bool,
    /// The values `u_τ(x,y)`, `x ≠ y`, are pairwise ⊆-incomparable.
    pub antichain: bool,
    /// At most one distinct value off ⊥, so the antichain test says nothing.
    pub degenerate: bool,
    /// Distinct values off ⊥, by name.
    pub values: Vec<String>,
    /// Strict inclusions among them.
    pub order: Vec<(String, String)>,
}

/// The ultrametric induced by the nonempty closed sets of a finite topology.
pub fn induced_from_topology(
    points: Vec<String>,
    closed_sets: &[PointSet],
) -> Result<(FiniteUltrametricSpace, TopologyReport)> {
    let n = points.len();
    let full = PointSet::full(n);
    if !closed_sets.iter().any(|s| s.is_empty()) || !closed_sets.contains(&full) {
        return Err(Error::Invalid("closed sets must contain ∅ and X".into()));
    }
    for a in closed_sets {
        if a.iter().any(|i| i >= n) {
            return Err(Error::Invalid(format!("closed set {a:?} mentions an unknown point")));
        }
        for b in closed_sets {
            if !closed_sets.contains(&a.union(b)) {
                return Err(Error::Invalid(format!("not closed under unions: {a:?} ∪ {b:?}")));
            }
            if !closed_sets.contains(&a.intersection(b)) {
                return Err(Error::Invalid(format!("not closed under intersections: {a:?} ∩ {b:?}")));
            }
        }
    }
    let tau: Vec<PointSet> = closed_sets.iter().filter(|s| !s.is_empty()).cloned().collect();
    let space = construct_from_tau(points, &tau).map_err(|e| Error::Invalid(format!("{e}")))?;
    let t1 = (0..n).all(|i| closed_sets.contains(&PointSet::singleton(i)));
    let mut used: Vec<usize> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .map(|(x, y)| space.dist(x, y))
        .collect();
    used.sort_unstable();
    used.dedup();
    let g = space.gamma();
    let mut order = Vec::new();
    for &a in &used {
        for &b in &used {
            if a != b && g.le(a, b) {
                order.push((g.base().name(a).into(), g.base().name(b).into()));
            }
        }
    }
    let report = TopologyReport {
        t1,
        antichain: order.is_empty(),
        degenerate: used.len() <= 1,
        values: used.iter().map(|&v| g.base().name(v).into()).collect(),
        order,
    };
    Ok((space, report))
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

    fn chain(k: usize) -> ValuePoset {
        ValuePoset::new(FinitePoset::chain(names(k)), 0).unwrap()
    }

    fn discrete(n: usize) -> FiniteUltrametricSpace {
        let d = (0..n).map(|x| (0..n).map(|y| usize::from(x != y)).collect()).collect();
        validate_ultrametric(names(n), chain(2), d).unwrap()
    }

    fn set(v: &[usize]) -> PointSet {
        v.iter().copied().collect()
    }

    // Two blocks {0,1} and {2,3} at level 1, joined at level 2.
    fn blocks() -> FiniteUltrametricSpace {
        let lvl = |x: usize, y: usize| if x == y { 0 } else if x / 2 == y / 2 { 1 } else { 2 };
        let d = (0..4).map(|x| (0..4).map(|y| lvl(x, y)).collect()).collect();
        validate_ultrametric(names(4), chain(3), d).unwrap()
    }

    #[test]
    fn discrete_is_valid() {
        let s = discrete(4);
        assert_eq!(s.precise_ball(0, 0).unwrap(), set(&[0]));
        assert_eq!(s.precise_ball(0, 2).unwrap(), PointSet::full(4));
    }

    #[test]
    fn u1_violation() {
        let d = vec![vec![1, 1], vec![1, 0]];
        assert_eq!(validate_ultrametric(names(2), chain(2), d).unwrap_err(), Violation::U1 { x: 0, y: 0 });
    }

    #[test]
    fn raised_entry_breaks_u2() {
        let mut d: Vec<Vec<usize>> = blocks().table().to_vec();
        // Lift d(0,1) to a value above the block level: 0~2 and 2~1 at level 2 remain, fine;
        // but with a 4th value the join fails.
        let g = chain(4);
        d[0][1] = 3;
        d[1][0] = 3;
        match validate_ultrametric(names(4), g, d) {
            Err(Violation::U2 { .. }) => {}
            other => panic!("expected U2, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_table() {
        let d = vec![vec![0, 1], vec![2, 0]];
        assert_eq!(validate_ultrametric(names(2), chain(3), d).unwrap_err(), Violation::U3 { x: 0, y: 1 });
    }

    #[test]
    fn block_balls() {
        let s = blocks();
        assert_eq!(s.precise_ball(0, 1).unwrap(), set(&[0, 1]));
        assert_eq!(s.precise_ball(3, 2).unwrap(), set(&[2, 3]));
        let b = s.ball_space();
        assert_eq!(b.balls().len(), 7);
        assert!(b.is_tree_like());
    }

    #[test]
    fn discrete_ball_space() {
        let b = discrete(3).ball_space();
        let mut got: Vec<PointSet> = b.balls().to_vec();
        got.sort();
        let mut want = vec![set(&[0]), set(&[1]), set(&[2]), set(&[0, 1, 2])];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(discrete(1).ball_space().balls(), &[set(&[0])]);
    }

    #[test]
    fn closed_and_segment_balls() {
        let s = blocks();
        assert_eq!(s.closed_ball(2, 0).unwrap().set, set(&[2]));
        let all = InitialSegment::new(s.gamma(), PointSet::full(3)).unwrap();
        assert_eq!(s.segment_ball(1, &all).unwrap(), PointSet::full(4));
        let low = InitialSegment::new(s.gamma(), set(&[0, 1])).unwrap();
        assert_eq!(s.segment_ball(1, &low).unwrap(), set(&[0, 1]));
        assert!(InitialSegment::new(s.gamma(), set(&[1])).is_err());

        // Values 0 < 1 < 2 < 3 with 2 attained by nobody from point 0.
        let d = vec![vec![0, 1, 3], vec![1, 0, 3], vec![3, 3, 0]];
        let s = validate_ultrametric(names(3), chain(4), d).unwrap();
        let b = s.closed_ball(0, 2).unwrap();
        assert!(!b.precise);
        assert_eq!(b.set, set(&[0, 1]));
        assert!(s.closed_ball(0, 1).unwrap().precise);
    }

    #[test]
    fn diameter_of_discrete() {
        let u = ultra_diameter_from(&discrete(3)).unwrap();
        let top = u.balls.iter().position(|b| b.len() == 3).unwrap();
        assert_eq!(u.delta[top], 1);
        let single = u.balls.iter().position(|b| *b == set(&[0])).unwrap();
        assert_eq!(u.delta[single], 0);
    }

    #[test]
    fn diameter_axioms() {
        let balls = vec![set(&[0]), set(&[0, 1]), set(&[1, 2]), set(&[0, 1, 2])];
        let inclusion = FinitePoset::from_fn(names(4), |i, j| balls[i].is_subset(&balls[j])).unwrap();
        assert!(validate_ultra_diameter(&balls, &[0, 1, 2, 3], &inclusion).is_ok());

        let flat = FinitePoset::chain(names(2));
        assert!(matches!(
            validate_ultra_diameter(&balls[1..3], &[0, 0], &flat),
            Err(Violation::D2 { .. })
        ));
        assert_eq!(
            validate_ultra_diameter(&balls[..2], &[1, 0], &flat),
            Err(Violation::D1 { small: 0, large: 1 })
        );
    }

    #[test]
    fn tau_pairs_plus_top_is_antichain() {
        let mut tau: Vec<PointSet> = Vec::new();
        for x in 0..4 {
            for y in x + 1..4 {
                tau.push(set(&[x, y]));
            }
        }
        tau.push(PointSet::full(4));
        let s = construct_from_tau(names(4), &tau).unwrap();
        let g = s.gamma();
        for (x, y, u, w) in (0..4).flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| (a, b, c, c ^ 1)))) {
            if x != y && u != w && s.dist(x, y) != s.dist(u, w) {
                assert!(!g.le(s.dist(x, y), s.dist(u, w)));
            }
        }
    }

    #[test]
    fn tau_without_smallest_set() {
        let tau = vec![set(&[0, 1, 2]), set(&[0, 1, 3]), PointSet::full(4)];
        match construct_from_tau(names(4), &tau) {
            Err(TauError::NoSmallest { x: 0, y: 1, minimal }) => assert_eq!(minimal.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn smallest_ball_small_family() {
        let b = FiniteBallSpace::new(names(3), vec![set(&[0, 1]), set(&[1, 2]), set(&[0, 1, 2])]).unwrap();
        let r = smallest_ball_property(&b);
        assert!(r.holds);
        let s = r.space.unwrap();
        assert_eq!(s.precise_ball(0, 2).unwrap(), PointSet::full(3));
    }

    #[test]
    fn topologies() {
        let all: Vec<PointSet> = (0u32..8).map(|m| (0..3).filter(|i| m & (1 << i) != 0).collect()).collect();
        let (_, r) = induced_from_topology(names(3), &all).unwrap();
        assert!(r.t1 && r.antichain && !r.degenerate);

        let sierpinski = vec![PointSet::new(), set(&[1]), PointSet::full(2)];
        let (_, r) = induced_from_topology(names(2), &sierpinski).unwrap();
        assert!(!r.t1 && r.degenerate);

        // Closed sets of a 3-point chain: ∅ ⊂ {2} ⊂ {1,2} ⊂ X.
        let nested = vec![PointSet::new(), set(&[2]), set(&[1, 2]), PointSet::full(3)];
        let (_, r) = induced_from_topology(names(3), &nested).unwrap();
        assert!(!r.t1 && !r.antichain);

        let (s, r) = induced_from_topology(names(3), &[PointSet::new(), PointSet::full(3)]).unwrap();
        assert_eq!(r.values, vec!["{0,1,2}".to_string()]);
        assert_eq!(s.precise_ball(0, 1).unwrap(), PointSet::full(3));

        assert!(induced_from_topology(names(3), &[PointSet::new(), set(&[0]), set(&[1]), PointSet::full(3)]).is_err());
    }

    fn table(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
        proptest::collection::vec(1..k, n * (n - 1) / 2).prop_map(move |upper| {
            let mut d = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for x in 0..n {
                for y in x + 1..n {
                    let v = it.next().unwrap();
                    d[x][y] = v;
                    d[y][x] = v;
                }
            }
            d
        })
    }

    proptest! {
        #[test]
        fn u2_matches_oracle_and_ut(d in table(5, 4)) {
            let g = chain(4);
            let fast = check_u2(&d, &g).is_some();
            let naive = oracle::naive_u2_witness(&d, 4, &|a, b| g.le(a, b)).is_some();
            prop_assert_eq!(fast, naive);
            prop_assert_eq!(fast, check_ut(&d, &g).is_some());
        }

        #[test]
        fn u2_matches_oracle_on_diamond(d in table(5, 4)) {
            // ⊥ < a, b < ⊤
            let base = FinitePoset::from_covers(
                names(4),
                &[("0".into(), "1".into()), ("0".into(), "2".into()), ("1".into(), "3".into()), ("2".into(), "3".into())],
            ).unwrap();
            let g = ValuePoset::new(base, 0).unwrap();
            prop_assert_eq!(check_u2(&d, &g).is_some(), oracle::naive_u2_witness(&d, 4, &|a, b| g.le(a, b)).is_some());
        }

        #[test]
        fn valid_tables_have_sound_balls(d in table(6, 4)) {
            let Ok(s) = validate_ultrametric(names(6), chain(4), d) else { return Ok(()) };
            for x in 0..6 {
                for y in 0..6 {
                    let b = s.precise_ball(x, y).unwrap();
                    prop_assert!(b.contains(x) && b.contains(y));
                    prop_assert_eq!(&b, &s.precise_ball(y, x).unwrap());
                    for u in b.iter() {
                        for w in b.iter() {
                            if s.dist(u, w) == s.dist(x, y) {
                                prop_assert_eq!(&s.precise_ball(u, w).unwrap(), &b);
                            }
                        }
                    }
                }
            }
            prop_assert!(ultra_diameter_from(&s).is_ok());
            prop_assert!(s.ball_space().is_tree_like());
        }
    }
}
