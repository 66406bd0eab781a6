//! Named reference maps shipped as JSON under `catalog/`, with a manifest
//! recording where each came from and the properties it must have.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{anchored_normal_form, classify_type, ClassifyError, ClassifyOptions};
use crate::codec::{parse_map, CodecError};
use crate::covering::{build_cover, CoverError, CycleSpec};
use crate::map::PolyhedralMap;
use crate::vertex_type::VertexType;

const MANIFEST: &str = include_str!("../../../catalog/manifest.json");

const FILES: [(&str, &str); 8] = [
    ("n1.json", include_str!("../../../catalog/n1.json")),
    (
        "tetrahedron.json",
        include_str!("../../../catalog/tetrahedron.json"),
    ),
    ("rp2_6.json", include_str!("../../../catalog/rp2_6.json")),
    (
        "cube_with_pyramid.json",
        include_str!("../../../catalog/cube_with_pyramid.json"),
    ),
    (
        "k1_3-4_10.json",
        include_str!("../../../catalog/k1_3-4_10.json"),
    ),
    (
        "k2_3-4_10.json",
        include_str!("../../../catalog/k2_3-4_10.json"),
    ),
    (
        "n1_cover2.json",
        include_str!("../../../catalog/n1_cover2.json"),
    ),
    (
        "n1_cover3.json",
        include_str!("../../../catalog/n1_cover3.json"),
    ),
];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {name:?}; available: {}", available.join(", "))]
    Unknown {
        name: String,
        available: Vec<String>,
    },
    #[error("catalog entry {name}: {source}")]
    Corrupt { name: String, source: CodecError },
    #[error("catalog entry {name}: expected {what}")]
    Mismatch { name: String, what: String },
    #[error("catalog entry {0} is not derived")]
    NotDerived(String),
    #[error("regenerating {name}: {source}")]
    Classify { name: String, source: ClassifyError },
    #[error("regenerating {name}: {source}")]
    Cover { name: String, source: CoverError },
}

/// How an entry came to be.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A face list copied verbatim from the literature or a textbook solid.
    Transcribed { source: String },
    /// Output of the library, reproducible from `recipe`.
    Derived { command: String, recipe: Recipe },
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Transcribed { .. } => "transcribed",
            Provenance::Derived { .. } => "derived",
        }
    }
}

/// Machine-readable form of a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Recipe {
    /// Representative `index` of `classify_type(type, chi)`, relabelled so
    /// that the `anchor`-gons are consecutive blocks of labels from 1.
    Classify {
        vertex_type: String,
        chi: i64,
        index: usize,
        anchor: usize,
    },
    /// `build_cover(base, cycle, m)`.
    Cover {
        base: String,
        cycle: Vec<u32>,
        m: usize,
    },
}

/// Properties every stored map is checked against on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub vertex_type: Option<String>,
    pub vertices: usize,
    pub chi: i64,
    pub orientable: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub provenance: Provenance,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub map: PolyhedralMap,
    pub provenance: Provenance,
    pub expected: Expected,
    /// The stored JSON text.
    pub source: &'static str,
}

/// The manifest, in its stored order.
pub fn manifest() -> Vec<ManifestEntry> {
    serde_json::from_str(MANIFEST).expect("catalog manifest is well-formed")
}

/// Entry names with their provenance tags.
pub fn list() -> Vec<(String, &'static str)> {
    manifest()
        .into_iter()
        .map(|e| (e.name, e.provenance.tag()))
        .collect()
}

/// Loads and revalidates an entry.
pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    let entries = manifest();
    let Some(entry) = entries.iter().find(|e| e.name == name) else {
        return Err(CatalogError::Unknown {
            name: name.to_string(),
            available: entries.iter().map(|e| e.name.clone()).collect(),
        });
    };
    let source = FILES
        .iter()
        .find(|(f, _)| *f == entry.file)
        .map(|(_, text)| *text)
        .ok_or_else(|| CatalogError::Mismatch {
            name: name.to_string(),
            what: format!("a bundled file {}", entry.file),
        })?;
    let (_, map) = parse_map(source).map_err(|source| CatalogError::Corrupt {
        name: name.to_string(),
        source,
    })?;
    check(name, &map, &entry.expected)?;
    Ok(CatalogEntry {
        name: entry.name.clone(),
        map,
        provenance: entry.provenance.clone(),
        expected: entry.expected.clone(),
        source,
    })
}

fn check(name: &str, map: &PolyhedralMap, want: &Expected) -> Result<(), CatalogError> {
    let mismatch = |what: String| CatalogError::Mismatch {
        name: name.to_string(),
        what,
    };
    if let Some(t) = &want.vertex_type {
        let t: VertexType = t
            .parse()
            .map_err(|_| mismatch(format!("a parsable type, got {t}")))?;
        if map.semi_equivelar_type().as_ref() != Some(&t) {
            return Err(mismatch(format!("type {t}")));
        }
    }
    if map.num_vertices() != want.vertices {
        return Err(mismatch(format!(
            "{} vertices, found {}",
            want.vertices,
            map.num_vertices()
        )));
    }
    if map.euler_characteristic() != want.chi {
        return Err(mismatch(format!(
            "χ = {}, found {}",
            want.chi,
            map.euler_characteristic()
        )));
    }
    if let Some(o) = want.orientable {
        if map.is_orientable() != o {
            return Err(mismatch(format!("orientable = {o}")));
        }
    }
    Ok(())
}

/// Recomputes a derived entry from its recipe.
pub fn regenerate(name: &str) -> Result<PolyhedralMap, CatalogError> {
    let entry = get(name)?;
    let Provenance::Derived { recipe, .. } = &entry.provenance else {
        return Err(CatalogError::NotDerived(name.to_string()));
    };
    match recipe {
        Recipe::Classify {
            vertex_type,
            chi,
            index,
            anchor,
        } => {
            let t: VertexType = vertex_type.parse().map_err(|_| CatalogError::Mismatch {
                name: name.to_string(),
                what: format!("a parsable type, got {vertex_type}"),
            })?;
            let c = classify_type(&t, *chi, &ClassifyOptions::default()).map_err(|source| {
                CatalogError::Classify {
                    name: name.to_string(),
                    source,
                }
            })?;
            c.maps
                .get(*index)
                .and_then(|m| anchored_normal_form(m, *anchor))
                .ok_or_else(|| CatalogError::Mismatch {
                    name: name.to_string(),
                    what: format!(
                        "representative {index} with {anchor}-gons partitioning the vertices"
                    ),
                })
        }
        Recipe::Cover { base, cycle, m } => {
            let base = get(base)?;
            build_cover(&base.map, &CycleSpec::new(cycle.clone()), *m)
                .map(|r| r.cover)
                .map_err(|source| CatalogError::Cover {
                    name: name.to_string(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn every_entry_loads() {
        for (name, _) in list() {
            get(&name).unwrap();
        }
    }

    #[test]
    fn transcribed_entries_match_fixtures() {
        assert_eq!(get("N1").unwrap().map, fixtures::n1());
        assert_eq!(get("tetrahedron").unwrap().map, fixtures::tetrahedron());
        assert_eq!(get("rp2_6").unwrap().map, fixtures::rp2_6());
        assert_eq!(
            get("cube_with_pyramid").unwrap().map,
            fixtures::cube_with_pyramid()
        );
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = get("K9").unwrap_err().to_string();
        assert!(err.contains("N1") && err.contains("tetrahedron"), "{err}");
    }

    #[test]
    fn decagons_are_consecutive() {
        for name in ["K1_3-4_10", "K2_3-4_10"] {
            let m = get(name).unwrap().map;
            let mut decagons: Vec<Vec<u32>> = m
                .standard_faces()
                .into_iter()
                .filter(|f| f.len() == 10)
                .collect();
            decagons.sort();
            let want: Vec<Vec<u32>> = (0..3)
                .map(|k| (10 * k + 1..=10 * k + 10).collect())
                .collect();
            assert_eq!(decagons, want, "{name}");
        }
    }
}
