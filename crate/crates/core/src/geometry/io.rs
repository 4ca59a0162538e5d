//! JSON geometry files:
//!
//! ```json
//! { "format_version": 1, "name": "PG(2,2)", "num_points": 7,
//!   "lines": [[0, 1, 3], [1, 2, 4], ...] }
//! ```
//!
//! Point indices are 0-based and each inner array is strictly increasing.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Geometry;
use crate::error::{Error, Result};

pub const GEOMETRY_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub format_version: u32,
    pub name: String,
    pub num_points: usize,
    pub lines: Vec<Vec<u32>>,
}

impl From<&Geometry> for GeometryFile {
    fn from(g: &Geometry) -> Self {
        GeometryFile {
            format_version: GEOMETRY_FORMAT_VERSION,
            name: g.name().to_string(),
            num_points: g.num_points(),
            lines: g.lines().to_vec(),
        }
    }
}

/// Serializes with one line of the geometry per text line.
pub(crate) fn to_json_string(g: &Geometry) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!(
        "  \"format_version\": {GEOMETRY_FORMAT_VERSION},\n"
    ));
    out.push_str(&format!(
        "  \"name\": {},\n",
        serde_json::to_string(g.name()).expect("string serializes")
    ));
    out.push_str(&format!("  \"num_points\": {},\n", g.num_points()));
    out.push_str("  \"lines\": [");
    for (k, line) in g.lines().iter().enumerate() {
        out.push_str(if k == 0 { "\n    " } else { ",\n    " });
        out.push_str(&serde_json::to_string(line).expect("ints serialize"));
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn save_geometry(g: &Geometry, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json_string(g)).map_err(|e| Error::io(path, e))
}

pub fn load_geometry(path: impl AsRef<Path>) -> Result<Geometry> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_geometry(&text, path)
}

/// Parses geometry JSON; `origin` is only used in error messages.
pub fn parse_geometry(text: &str, origin: impl AsRef<Path>) -> Result<Geometry> {
    let origin = origin.as_ref();
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let file: GeometryFile =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if file.format_version != GEOMETRY_FORMAT_VERSION {
        return Err(parse_err(
            1,
            format!(
                "unsupported format_version {} (expected {GEOMETRY_FORMAT_VERSION})",
                file.format_version
            ),
        ));
    }
    for (k, line) in file.lines.iter().enumerate() {
        let msg = if let Some(&p) = line.iter().find(|&&p| p as usize >= file.num_points) {
            Some(format!(
                "line {k}: point index {p} out of range (num_points = {})",
                file.num_points
            ))
        } else if line.windows(2).any(|w| w[0] == w[1]) {
            Some(format!("line {k}: duplicate point"))
        } else if line.windows(2).any(|w| w[0] > w[1]) {
            Some(format!("line {k}: point indices not strictly increasing"))
        } else {
            None
        };
        if let Some(msg) = msg {
            return Err(parse_err(
                text_line_of_inner_array(text, k).unwrap_or(1),
                msg,
            ));
        }
    }
    Geometry::new(file.name, file.num_points, file.lines)
}

/// 1-based text line on which the `k`-th inner array of `"lines"` starts.
fn text_line_of_inner_array(text: &str, k: usize) -> Option<usize> {
    let key = text.find("\"lines\"")?;
    let bytes = text.as_bytes();
    let mut pos = key + "\"lines\"".len();
    while pos < bytes.len() && bytes[pos] != b'[' {
        pos += 1;
    }
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut line_no = 1 + text[..pos].matches('\n').count();
    for &b in &bytes[pos..] {
        match b {
            b'\n' => line_no += 1,
            b'[' => {
                depth += 1;
                if depth == 2 {
                    if seen == k {
                        return Some(line_no);
                    }
                    seen += 1;
                }
            }
            b']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::fano;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fano.json");
        let g = fano();
        save_geometry(&g, &path).unwrap();
        let h = load_geometry(&path).unwrap();
        assert!(h.same_incidence(&g));
        assert_eq!(h.name(), "fano");
    }

    #[test]
    fn out_of_range_reports_text_line() {
        let text = "{\n \"format_version\": 1,\n \"name\": \"x\",\n \"num_points\": 3,\n \"lines\": [\n  [0, 1],\n  [1, 3]\n ]\n}";
        match parse_geometry(text, "x.json").unwrap_err() {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 7);
                assert!(msg.contains("out of range"), "{msg}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn duplicate_point_rejected() {
        let text = r#"{"format_version":1,"name":"x","num_points":3,"lines":[[0,0]]}"#;
        let err = parse_geometry(text, "x.json").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn malformed_json_rejected() {
        let err = parse_geometry("{\"format_version\": 1,\n \"name\": ", "x.json").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_geometry(
            r#"{"format_version":2,"name":"x","num_points":1,"lines":[]}"#,
            "x.json",
        )
        .unwrap_err();
        assert!(err.to_string().contains("format_version"));
    }
}
