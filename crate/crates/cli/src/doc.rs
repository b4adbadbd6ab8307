//! Space description files read by `coarsetop check`.
//!
//! ```json
//! {
//!   "version": 1,
//!   "carrier": ["a", "b", "c"],
//!   "prebornology": {"generators": [["a", "b"]]},
//!   "coarse": {"generators": [[["a", "b"]]]},
//!   "pseudometric": {"entries": [["a", "b", "1"], ["b", "c", "inf"]]},
//!   "topology": {"opens": [[], ["a"], ["a", "b", "c"]]},
//!   "uniformity": {"classes": [["a", "b"], ["c"]]},
//!   "group": {"table": [["a", "b"], ["b", "a"]]},
//!   "maps": [{"name": "f", "graph": {"a": "b", "b": "b", "c": "c"}}],
//!   "family": ["f"],
//!   "checks": ["bornological", "proper"]
//! }
//! ```
//!
//! `prebornology` takes either `generators` or the full `family` of bounded
//! sets. Pseudometric pairs that are not listed are at distance `inf`.
//! Group tables are indexed in carrier order. Maps go from the space to
//! itself.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use coarsetop::{Carrier, Point, PointSet};

pub const DOC_VERSION: u32 = 1;

/// Largest carrier accepted by `check`.
pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub version: u32,
    pub carrier: Vec<String>,
    pub prebornology: Option<PrebornologyDoc>,
    pub coarse: Option<CoarseDoc>,
    pub pseudometric: Option<PseudometricDoc>,
    pub topology: Option<TopologyDoc>,
    pub uniformity: Option<UniformityDoc>,
    pub group: Option<GroupDoc>,
    #[serde(default)]
    pub maps: Vec<MapDoc>,
    #[serde(default)]
    pub family: Vec<String>,
    #[serde(default)]
    pub checks: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrebornologyDoc {
    pub generators: Option<Vec<Vec<String>>>,
    pub family: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseDoc {
    pub generators: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudometricDoc {
    pub entries: Vec<(String, String, DistDoc)>,
}

/// A distance written as a string (`"1/2"`, `"inf"`) or a JSON number.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DistDoc {
    Text(String),
    Int(u64),
    Float(f64),
}

impl DistDoc {
    pub fn as_text(&self) -> String {
        match self {
            DistDoc::Text(s) => s.clone(),
            DistDoc::Int(n) => n.to_string(),
            DistDoc::Float(x) => x.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDoc {
    pub opens: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformityDoc {
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub name: String,
    pub graph: BTreeMap<String, String>,
}

/// A schema violation: where it is and what is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() || self.path == "." {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn err(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.into(), message: message.into() }
}

impl SpaceDoc {
    /// Parses JSON text. Syntax errors carry line and column, type errors
    /// the path of the offending value.
    pub fn parse(text: &str) -> Result<SpaceDoc, SchemaError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: SpaceDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                err("", format!("malformed JSON: {inner}"))
            } else {
                err(path, inner.to_string())
            }
        })?;
        doc.check_shape()?;
        Ok(doc)
    }

    fn check_shape(&self) -> Result<(), SchemaError> {
        if self.version != DOC_VERSION {
            return Err(err("version", format!("unsupported version {}, expected {DOC_VERSION}", self.version)));
        }
        if self.carrier.len() > MAX_CARRIER {
            return Err(err("carrier", format!("at most {MAX_CARRIER} points are supported")));
        }
        if let Some(p) = &self.prebornology {
            if p.generators.is_some() == p.family.is_some() {
                return Err(err("prebornology", "give exactly one of `generators` or `family`"));
            }
        }
        let mut names = BTreeSet::new();
        for (i, m) in self.maps.iter().enumerate() {
            if !names.insert(m.name.as_str()) {
                return Err(err(format!("maps[{i}].name"), format!("duplicate map name `{}`", m.name)));
            }
        }
        for (i, f) in self.family.iter().enumerate() {
            if !names.contains(f.as_str()) {
                return Err(err(format!("family[{i}]"), format!("unknown map `{f}`")));
            }
        }
        Ok(())
    }

    pub fn carrier(&self) -> Result<Carrier, SchemaError> {
        Carrier::new(&self.carrier).map_err(|e| err("carrier", e.to_string()))
    }
}

/// Resolves labels against a carrier, reporting the path of unknown ones.
pub struct Resolver<'a> {
    pub carrier: &'a Carrier,
}

impl Resolver<'_> {
    pub fn point(&self, path: &str, label: &str) -> Result<Point, SchemaError> {
        self.carrier.point(label).map_err(|e| err(path, e.to_string()))
    }

    pub fn set(&self, path: &str, labels: &[String]) -> Result<PointSet, SchemaError> {
        labels.iter().enumerate().map(|(i, l)| self.point(&format!("{path}[{i}]"), l)).collect()
    }

    pub fn sets(&self, path: &str, sets: &[Vec<String>]) -> Result<Vec<PointSet>, SchemaError> {
        sets.iter().enumerate().map(|(i, s)| self.set(&format!("{path}[{i}]"), s)).collect()
    }

    pub fn pairs(&self, path: &str, pairs: &[(String, String)]) -> Result<Vec<(Point, Point)>, SchemaError> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (x, y))| {
                let p = format!("{path}[{i}]");
                Ok((self.point(&format!("{p}[0]"), x)?, self.point(&format!("{p}[1]"), y)?))
            })
            .collect()
    }

    /// A total graph `x ↦ y`, indexed by source point.
    pub fn graph(&self, path: &str, graph: &BTreeMap<String, String>) -> Result<Vec<Point>, SchemaError> {
        let mut table = vec![None; self.carrier.len()];
        for (x, y) in graph {
            let p = format!("{path}.{x}");
            let xi = self.point(&p, x)?;
            table[xi] = Some(self.point(&p, y)?);
        }
        table
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| err(path, format!("`{}` has no image", self.carrier.label(x)))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let d = SpaceDoc::parse(r#"{"version": 1, "carrier": ["a", "b"]}"#).unwrap();
        assert_eq!(d.carrier, ["a", "b"]);
        assert!(d.maps.is_empty() && d.checks.is_empty());
    }

    #[test]
    fn syntax_error_has_position() {
        let e = SpaceDoc::parse("{\"version\": 1,\n  \"carrier\": [\"a\",]}").unwrap_err();
        assert!(e.message.starts_with("malformed JSON") && e.message.contains("line 2 column"), "{e}");
    }

    #[test]
    fn type_error_has_path() {
        let e = SpaceDoc::parse(r#"{"version": 1, "carrier": ["a"], "prebornology": {"generators": [["a", 3]]}}"#)
            .unwrap_err();
        assert_eq!(e.path, "prebornology.generators[0][1]");
        let e = SpaceDoc::parse(r#"{"version": 1, "carrier": [], "colour": 1}"#).unwrap_err();
        assert!(e.message.contains("unknown field `colour`"), "{e}");
    }

    #[test]
    fn shape_errors() {
        let e = SpaceDoc::parse(r#"{"version": 2, "carrier": []}"#).unwrap_err();
        assert_eq!(e.path, "version");
        let e = SpaceDoc::parse(r#"{"version": 1, "carrier": ["a"], "prebornology": {}}"#).unwrap_err();
        assert_eq!(e.path, "prebornology");
        let e = SpaceDoc::parse(r#"{"version": 1, "carrier": ["a"], "family": ["g"]}"#).unwrap_err();
        assert_eq!(e.path, "family[0]");
    }

    #[test]
    fn resolver_paths() {
        let c = Carrier::new(["a", "b"]).unwrap();
        let r = Resolver { carrier: &c };
        let e = r.sets("topology.opens", &[vec!["a".into()], vec!["z".into()]]).unwrap_err();
        assert_eq!(e.path, "topology.opens[1][0]");
        let g = BTreeMap::from([("a".to_string(), "b".to_string())]);
        let e = r.graph("maps[0].graph", &g).unwrap_err();
        assert!(e.message.contains("`b` has no image"));
    }
}
