//! Bounded ordinal notation `ω₁·a + ω·b + c`.
//!
//! Comparison is lexicographic on `(a, b, c)`. Every notation value has a successor; limits are
//! exactly the nonzero values with `c = 0`. Parametric sequences are described by an
//! [`EndpointFn`], i.e. a declared limit plus a sampler that the engine checks on finitely
//! many indices.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_OMEGA1_COEFF: u32 = 2;
pub const MAX_COEFF: u32 = (1 << 31) - 1;

/// Default number of sampled indices when checking declared sequences.
pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    a: u32,
    b: u32,
    c: u32,
}

impl Ordinal {
    pub const ZERO: Ordinal = Ordinal { a: 0, b: 0, c: 0 };
    pub const OMEGA: Ordinal = Ordinal { a: 0, b: 1, c: 0 };
    pub const OMEGA1: Ordinal = Ordinal { a: 1, b: 0, c: 0 };

    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        if a > MAX_OMEGA1_COEFF || b > MAX_COEFF || c > MAX_COEFF {
            return Err(Error::OrdinalRange(format!("w1*{a}+w*{b}+{c}")));
        }
        Ok(Self { a, b, c })
    }

    pub const fn nat(c: u32) -> Self {
        Self { a: 0, b: 0, c }
    }

    /// `ω·b + c`.
    pub const fn omega_plus(b: u32, c: u32) -> Self {
        Self { a: 0, b, c }
    }

    pub fn coefficients(self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    pub fn succ(self) -> Self {
        Self { c: self.c + 1, ..self }
    }

    pub fn is_limit(self) -> bool {
        self.c == 0 && (self.a, self.b) != (0, 0)
    }

    pub fn is_finite(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_countable(self) -> bool {
        self.a == 0
    }

    /// Immediate predecessor of a successor ordinal.
    pub fn pred(self) -> Option<Self> {
        (self.c > 0).then(|| Self { c: self.c - 1, ..self })
    }

    /// Ordinal addition `self + rhs`; only the part of `self` above the leading term of `rhs`
    /// survives.
    pub fn add(self, rhs: Self) -> Self {
        if rhs.a > 0 {
            Self { a: self.a + rhs.a, b: rhs.b, c: rhs.c }
        } else if rhs.b > 0 {
            Self { a: self.a, b: self.b + rhs.b, c: rhs.c }
        } else {
            Self { c: self.c + rhs.c, ..self }
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.a {
            0 => {}
            1 => parts.push("w1".into()),
            a => parts.push(format!("w1*{a}")),
        }
        match self.b {
            0 => {}
            1 => parts.push("w".into()),
            b => parts.push(format!("w*{b}")),
        }
        if self.c > 0 || parts.is_empty() {
            parts.push(self.c.to_string());
        }
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Parses `w1*1+w*2+3`, `w`, `5`, ... Terms must appear in descending order, each at
    /// most once. Case-insensitive; no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let bytes = lower.as_bytes();
        if bytes.is_empty() {
            return Err(Error::OrdinalParse { pos: 0, msg: "empty literal".into() });
        }
        let mut coeffs = [None::<u32>; 3];
        let mut last_rank = 3usize;
        let mut pos = 0;
        loop {
            let start = pos;
            let rank;
            let coeff;
            if bytes[pos] == b'w' {
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'1' {
                    rank = 0;
                    pos += 1;
                } else {
                    rank = 1;
                }
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                    let (v, next) = parse_nat(bytes, pos)?;
                    coeff = v;
                    pos = next;
                } else {
                    coeff = 1;
                }
            } else if bytes[pos].is_ascii_digit() {
                let (v, next) = parse_nat(bytes, pos)?;
                rank = 2;
                coeff = v;
                pos = next;
            } else {
                return Err(Error::OrdinalParse {
                    pos,
                    msg: format!("unexpected character `{}`", bytes[pos] as char),
                });
            }
            if (last_rank != 3 && rank <= last_rank) || coeffs[rank].is_some() {
                return Err(Error::OrdinalParse {
                    pos: start,
                    msg: "terms must be distinct and in descending order".into(),
                });
            }
            last_rank = rank;
            coeffs[rank] = Some(coeff);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'+' {
                return Err(Error::OrdinalParse {
                    pos,
                    msg: format!("expected `+`, found `{}`", bytes[pos] as char),
                });
            }
            pos += 1;
            if pos == bytes.len() {
                return Err(Error::OrdinalParse { pos, msg: "dangling `+`".into() });
            }
        }
        Ordinal::new(
            coeffs[0].unwrap_or(0),
            coeffs[1].unwrap_or(0),
            coeffs[2].unwrap_or(0),
        )
    }
}

fn parse_nat(bytes: &[u8], start: usize) -> Result<(u32, usize)> {
    let mut pos = start;
    let mut v: u64 = 0;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        v = v * 10 + u64::from(bytes[pos] - b'0');
        if v > u64::from(MAX_COEFF) {
            return Err(Error::OrdinalParse { pos: start, msg: "coefficient too large".into() });
        }
        pos += 1;
    }
    if pos == start {
        return Err(Error::OrdinalParse { pos, msg: "expected digits".into() });
    }
    Ok((v as u32, pos))
}

impl Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index set of a parametric family or chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDomain {
    /// `{0, …, n-1}`.
    Fin(u32),
    /// The naturals.
    Omega,
    /// The countable ordinals.
    Omega1,
}

impl IndexDomain {
    /// The first `n` sampled indices, strictly increasing.
    ///
    /// `Omega1` is sampled as `0, 1, 2, ω, ω+1, ω+2, ω·2, …` so that limit and successor
    /// indices both occur.
    pub fn sample(&self, n: usize) -> Vec<Ordinal> {
        match self {
            IndexDomain::Fin(k) => (0..(*k).min(n as u32)).map(Ordinal::nat).collect(),
            IndexDomain::Omega => (0..n as u32).map(Ordinal::nat).collect(),
            IndexDomain::Omega1 => {
                (0..n as u32).map(|j| Ordinal::omega_plus(j / 3, j % 3)).collect()
            }
        }
    }

    /// Order type of the domain.
    pub fn order_type(&self) -> Ordinal {
        match self {
            IndexDomain::Fin(k) => Ordinal::nat(*k),
            IndexDomain::Omega => Ordinal::OMEGA,
            IndexDomain::Omega1 => Ordinal::OMEGA1,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IndexDomain::Fin(_))
    }

    pub fn contains(&self, x: Ordinal) -> bool {
        x < self.order_type()
    }
}

/// How a strictly increasing sequence is generated from its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// `i ↦ i`.
    Identity,
    /// `i ↦ offset + i`.
    Offset(Ordinal),
    /// Explicit values at the first sampled positions; no closed form, so the limit is taken
    /// as declared.
    Explicit(Vec<Ordinal>),
}

impl Sampler {
    pub fn eval(&self, index: Ordinal, position: usize) -> Option<Ordinal> {
        match self {
            Sampler::Identity => Some(index),
            Sampler::Offset(o) => Some(o.add(index)),
            Sampler::Explicit(v) => v.get(position).copied(),
        }
    }

    /// Supremum over the whole domain when it has a closed form.
    pub fn sup_over(&self, domain: &IndexDomain) -> Option<Ordinal> {
        if domain.is_finite() {
            return None;
        }
        match self {
            Sampler::Identity => Some(domain.order_type()),
            Sampler::Offset(o) => Some(o.add(domain.order_type())),
            Sampler::Explicit(_) => None,
        }
    }
}

/// A lower endpoint as a function of a chain index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointFn {
    Const(Ordinal),
    StrictIncreasingTo { limit: Ordinal, sampler: Sampler },
}

impl EndpointFn {
    /// Value at the `position`-th sampled index.
    pub fn eval(&self, index: Ordinal, position: usize) -> Option<Ordinal> {
        match self {
            EndpointFn::Const(v) => Some(*v),
            EndpointFn::StrictIncreasingTo { sampler, .. } => sampler.eval(index, position),
        }
    }

    /// Checks the declared sequence on `samples` indices of `domain`: strictly increasing,
    /// below the limit, limit a limit ordinal, and (for closed-form samplers) the declared
    /// limit equals the true supremum.
    pub fn validate(&self, domain: &IndexDomain, samples: usize) -> Result<()> {
        let EndpointFn::StrictIncreasingTo { limit, sampler } = self else {
            return Ok(());
        };
        if domain.is_finite() {
            return Err(Error::Endpoint(
                "strictly increasing endpoints need an infinite index domain".into(),
            ));
        }
        if !limit.is_limit() {
            return Err(Error::Endpoint(format!("declared limit {limit} is not a limit ordinal")));
        }
        if let Some(sup) = sampler.sup_over(domain) {
            if sup != *limit {
                return Err(Error::Endpoint(format!(
                    "declared limit {limit} differs from supremum {sup}"
                )));
            }
        }
        let mut prev: Option<Ordinal> = None;
        for (pos, idx) in domain.sample(samples).into_iter().enumerate() {
            let Some(v) = sampler.eval(idx, pos) else { break };
            if v >= *limit {
                return Err(Error::Endpoint(format!("sample {pos} = {v} reaches limit {limit}")));
            }
            if let Some(p) = prev {
                if v <= p {
                    return Err(Error::Endpoint(format!(
                        "sample {pos} = {v} does not exceed previous {p}"
                    )));
                }
            }
            prev = Some(v);
        }
        Ok(())
    }
}

/// Supremum realized by the endpoint sequence: for strictly increasing `f` below `λ`,
/// `{x : x ≥ f(i) ∀i} = {x : x ≥ λ}`.
pub fn endpoint_sup(f: &EndpointFn, domain: &IndexDomain, samples: usize) -> Result<Ordinal> {
    f.validate(domain, samples)?;
    Ok(match f {
        EndpointFn::Const(v) => *v,
        EndpointFn::StrictIncreasingTo { limit, .. } => *limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::cmp::Ordering;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
        assert_eq!(o("w1").cmp(&o("w*7+3")), Ordering::Greater);
        assert_eq!(o("w+2").cmp(&o("w+2")), Ordering::Equal);
    }

    #[test]
    fn succ_and_limits() {
        assert_eq!(o("w").succ(), o("w+1"));
        assert!(o("w1").is_limit());
        assert!(!o("3").is_limit());
        assert!(!Ordinal::ZERO.is_limit());
        assert_eq!(o("w+1").pred(), Some(o("w")));
        assert_eq!(o("w").pred(), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(o("W1*1+W*2+3"), Ordinal::new(1, 2, 3).unwrap());
        assert_eq!(o("w1*2"), Ordinal::new(2, 0, 0).unwrap());
        assert_eq!(o("0").to_string(), "0");
        assert_eq!(o("w*1+0").to_string(), "w");
        assert_eq!(Ordinal::new(1, 2, 3).unwrap().to_string(), "w1+w*2+3");
        for bad in ["", "w+", "3+w", "w+w", "x", "w1*3", "w*"] {
            assert!(bad.parse::<Ordinal>().is_err(), "{bad}");
        }
        match "w+x".parse::<Ordinal>() {
            Err(Error::OrdinalParse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn addition() {
        assert_eq!(o("w+3").add(o("2")), o("w+5"));
        assert_eq!(o("w+3").add(o("w")), o("w*2"));
        assert_eq!(o("5").add(o("w")), o("w"));
        assert_eq!(o("w*4").add(o("w1")), o("w1"));
    }

    #[test]
    fn endpoint_sups() {
        let d = IndexDomain::Omega;
        assert_eq!(endpoint_sup(&EndpointFn::Const(o("w+4")), &d, 32).unwrap(), o("w+4"));
        let to_omega =
            EndpointFn::StrictIncreasingTo { limit: Ordinal::OMEGA, sampler: Sampler::Identity };
        assert_eq!(endpoint_sup(&to_omega, &d, 32).unwrap(), Ordinal::OMEGA);
        let to_omega1 =
            EndpointFn::StrictIncreasingTo { limit: Ordinal::OMEGA1, sampler: Sampler::Identity };
        assert_eq!(endpoint_sup(&to_omega1, &IndexDomain::Omega1, 32).unwrap(), Ordinal::OMEGA1);
    }

    #[test]
    fn malformed_endpoints_rejected() {
        let d = IndexDomain::Omega;
        let flat = EndpointFn::StrictIncreasingTo {
            limit: Ordinal::OMEGA,
            sampler: Sampler::Explicit(alloc::vec![o("1"), o("1")]),
        };
        assert!(endpoint_sup(&flat, &d, 32).is_err());
        let reaching = EndpointFn::StrictIncreasingTo {
            limit: Ordinal::OMEGA,
            sampler: Sampler::Explicit(alloc::vec![o("1"), o("w")]),
        };
        assert!(endpoint_sup(&reaching, &d, 32).is_err());
        let wrong_sup =
            EndpointFn::StrictIncreasingTo { limit: Ordinal::OMEGA1, sampler: Sampler::Identity };
        assert!(endpoint_sup(&wrong_sup, &d, 32).is_err());
        let not_limit =
            EndpointFn::StrictIncreasingTo { limit: o("w+1"), sampler: Sampler::Identity };
        assert!(endpoint_sup(&not_limit, &d, 32).is_err());
        let finite =
            EndpointFn::StrictIncreasingTo { limit: Ordinal::OMEGA, sampler: Sampler::Identity };
        assert!(endpoint_sup(&finite, &IndexDomain::Fin(3), 32).is_err());
    }

    #[test]
    fn omega1_samples_are_increasing_and_countable() {
        let s = IndexDomain::Omega1.sample(32);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|x| x.is_countable()));
        assert!(s.contains(&Ordinal::OMEGA) && s.contains(&Ordinal::OMEGA.succ()));
    }

    fn grid() -> impl Strategy<Value = Ordinal> {
        (0u32..3, 0u32..4, 0u32..4).prop_map(|(a, b, c)| Ordinal::new(a, b, c).unwrap())
    }

    proptest! {
        #[test]
        fn total_order(x in grid(), y in grid(), z in grid()) {
            let n = [x < y, x == y, x > y].iter().filter(|b| **b).count();
            prop_assert_eq!(n, 1);
            if x <= y && y <= z {
                prop_assert!(x <= z);
            }
        }

        #[test]
        fn successor_is_cover(x in grid(), y in grid()) {
            prop_assert!(x.succ() > x);
            prop_assert!(!(x < y && y < x.succ()));
        }

        #[test]
        fn display_round_trips(x in grid()) {
            prop_assert_eq!(x.to_string().parse::<Ordinal>().unwrap(), x);
        }

        #[test]
        fn sup_bounds_samples(offset in grid(), n in 1usize..40) {
            // Offsets below ω₁ with an ω-indexed identity-like shift.
            let offset = Ordinal::new(0, offset.coefficients().1, offset.coefficients().2).unwrap();
            let f = EndpointFn::StrictIncreasingTo {
                limit: offset.add(Ordinal::OMEGA),
                sampler: Sampler::Offset(offset),
            };
            let sup = endpoint_sup(&f, &IndexDomain::Omega, n).unwrap();
            let samples: Vec<Ordinal> = IndexDomain::Omega
                .sample(n)
                .into_iter()
                .enumerate()
                .map(|(p, i)| f.eval(i, p).unwrap())
                .collect();
            prop_assert!(samples.iter().all(|s| *s < sup));
            // Least notation value above all samples of every length is the limit: any smaller
            // notation value is overtaken by a later sample.
            let (a, b, _) = sup.coefficients();
            for below in [Ordinal::new(a, b - 1, 0).unwrap(), Ordinal::new(a, b - 1, 1000).unwrap()] {
                let k = below.coefficients().2 - offset.coefficients().2.min(below.coefficients().2) + 1;
                prop_assert!(f.eval(Ordinal::nat(k), k as usize).unwrap() > below);
            }
        }
    }
}
