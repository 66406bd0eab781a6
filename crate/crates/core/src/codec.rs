//! JSON map format: `{"name": <optional string>, "faces": [[v, ...], ...]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{MapError, PolyhedralMap};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("malformed map document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid map: {0}")]
    Invalid(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub faces: Vec<Vec<u32>>,
}

impl MapDocument {
    pub fn from_map(map: &PolyhedralMap, name: Option<&str>) -> Self {
        MapDocument {
            name: name.map(str::to_string),
            faces: map.labeled_faces(),
        }
    }

    pub fn to_map(&self) -> Result<PolyhedralMap, MapError> {
        PolyhedralMap::from_faces(&self.faces)
    }
}

/// Parses a map document, returning its optional name and the validated map.
pub fn parse_map(text: &str) -> Result<(Option<String>, PolyhedralMap), CodecError> {
    let doc: MapDocument = serde_json::from_str(text)?;
    let map = doc.to_map()?;
    Ok((doc.name, map))
}

/// One face per line, so diffs of catalog files stay readable.
pub fn serialize_map(map: &PolyhedralMap, name: Option<&str>) -> String {
    let faces: Vec<String> = map
        .labeled_faces()
        .iter()
        .map(|f| serde_json::to_string(f).expect("integers serialize"))
        .collect();
    let mut out = String::from("{\n");
    if let Some(n) = name {
        out.push_str(&format!(
            "  \"name\": {},\n",
            serde_json::to_string(n).expect("string")
        ));
    }
    out.push_str("  \"faces\": [\n    ");
    out.push_str(&faces.join(",\n    "));
    out.push_str("\n  ]\n}\n");
    out
}
