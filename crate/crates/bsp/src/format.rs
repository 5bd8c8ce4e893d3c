//! JSON file formats. Points, poset elements and values are referred to by string id.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use bsp_core::ballspace::FiniteBallSpace;
use bsp_core::poset::{FinitePoset, ValuePoset};
use bsp_core::ultrametric::FiniteUltrametricSpace;
use bsp_core::PointSet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {msg}")]
    Parse { path: String, line: usize, column: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<bsp_core::Error> for InputError {
    fn from(e: bsp_core::Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str, path: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    parse_json(&text, &path.display().to_string())
}

fn index(names: &[String]) -> Result<HashMap<&str, usize>, InputError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(InputError::Invalid(format!("duplicate id `{n}`")));
        }
    }
    Ok(map)
}

fn to_set(map: &HashMap<&str, usize>, members: &[String]) -> Result<PointSet, InputError> {
    members
        .iter()
        .map(|m| map.get(m.as_str()).copied().ok_or_else(|| InputError::Invalid(format!("unknown point `{m}`"))))
        .collect()
}

fn set_names(points: &[String], s: &PointSet) -> Vec<String> {
    s.iter().map(|i| points[i].clone()).collect()
}

/// `{"points": [...], "balls": [[...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallSpaceFile {
    pub points: Vec<String>,
    pub balls: Vec<Vec<String>>,
}

impl BallSpaceFile {
    pub fn to_space(&self) -> Result<FiniteBallSpace, InputError> {
        let map = index(&self.points)?;
        let balls = self.balls.iter().map(|b| to_set(&map, b)).collect::<Result<_, _>>()?;
        Ok(FiniteBallSpace::new(self.points.clone(), balls)?)
    }

    pub fn from_space(b: &FiniteBallSpace) -> Self {
        Self {
            points: b.points().to_vec(),
            balls: b.balls().iter().map(|s| set_names(b.points(), s)).collect(),
        }
    }
}

/// `{"elements": [...], "covers": [["a","b"], ...], "bottom": "a"}`; a pair means `a ≤ b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<FinitePoset, InputError> {
        Ok(FinitePoset::from_covers(self.elements.clone(), &self.covers)?)
    }

    pub fn to_value_poset(&self) -> Result<ValuePoset, InputError> {
        let base = self.to_poset()?;
        let bottom = self.bottom.as_deref().ok_or_else(|| InputError::Invalid("value poset needs a `bottom`".into()))?;
        let b = base.index_of(bottom).ok_or_else(|| InputError::Invalid(format!("unknown bottom `{bottom}`")))?;
        Ok(ValuePoset::new(base, b)?)
    }

    /// The cover pairs of `p`.
    pub fn from_poset(p: &FinitePoset, bottom: Option<usize>) -> Self {
        let n = p.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if p.lt(i, j) && !(0..n).any(|k| p.lt(i, k) && p.lt(k, j)) {
                    covers.push((p.name(i).to_string(), p.name(j).to_string()));
                }
            }
        }
        Self { elements: p.elements().to_vec(), covers, bottom: bottom.map(|b| p.name(b).to_string()) }
    }
}

/// `{"points": [...], "gamma": {poset, "bottom": ...}, "d": [[value ids, row-major]]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UltrametricFile {
    pub points: Vec<String>,
    pub gamma: PosetFile,
    pub d: Vec<Vec<String>>,
}

/// A decoded but not yet validated ultrametric table.
pub struct RawUltrametric {
    pub points: Vec<String>,
    pub gamma: ValuePoset,
    pub d: Vec<Vec<usize>>,
}

impl UltrametricFile {
    pub fn decode(&self) -> Result<RawUltrametric, InputError> {
        index(&self.points)?;
        let gamma = self.gamma.to_value_poset()?;
        let n = self.points.len();
        if self.d.len() != n || self.d.iter().any(|r| r.len() != n) {
            return Err(InputError::Invalid(format!("`d` must be a {n}×{n} table")));
        }
        let d = self
            .d
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| gamma.base().index_of(v).ok_or_else(|| InputError::Invalid(format!("unknown value `{v}`"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(RawUltrametric { points: self.points.clone(), gamma, d })
    }

    pub fn from_space(s: &FiniteUltrametricSpace) -> Self {
        let g = s.gamma().base();
        Self {
            points: s.points().to_vec(),
            gamma: PosetFile::from_poset(g, Some(s.gamma().bottom())),
            d: s.table().iter().map(|r| r.iter().map(|&v| g.name(v).to_string()).collect()).collect(),
        }
    }
}

/// `{"points": [...], "tau": [[...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauFile {
    pub points: Vec<String>,
    pub tau: Vec<Vec<String>>,
}

impl TauFile {
    pub fn decode(&self) -> Result<Vec<PointSet>, InputError> {
        let map = index(&self.points)?;
        self.tau.iter().map(|s| to_set(&map, s)).collect()
    }
}

/// `{"points": [...], "closed_sets": [[...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyFile {
    pub points: Vec<String>,
    pub closed_sets: Vec<Vec<String>>,
}

impl TopologyFile {
    pub fn decode(&self) -> Result<Vec<PointSet>, InputError> {
        let map = index(&self.points)?;
        self.closed_sets.iter().map(|s| to_set(&map, s)).collect()
    }
}

pub fn names_of(points: &[String], s: &PointSet) -> Vec<String> {
    set_names(points, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bsp_core::constructions::{random_ultrametric, ValueKind};

    #[test]
    fn parse_error_has_position() {
        let e = parse_json::<BallSpaceFile>("{\n  \"points\": [1,", "x.json").unwrap_err();
        match e {
            InputError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn ball_space_round_trip() {
        let f: BallSpaceFile = parse_json(r#"{"points":["a","b","c"],"balls":[["a"],["a","b"]]}"#, "-").unwrap();
        let b = f.to_space().unwrap();
        assert_eq!(b.balls().len(), 2);
        assert_eq!(BallSpaceFile::from_space(&b).balls, f.balls);
        let bad: BallSpaceFile = parse_json(r#"{"points":["a"],"balls":[["z"]]}"#, "-").unwrap();
        assert!(bad.to_space().is_err());
    }

    #[test]
    fn ultrametric_round_trip() {
        let s = random_ultrametric(6, ValueKind::Narrow, 2, 3).unwrap();
        let f = UltrametricFile::from_space(&s);
        let raw = f.decode().unwrap();
        assert_eq!(raw.d, s.table());
        assert_eq!(raw.gamma, *s.gamma());
    }
}
