//! JSON colex files.
//!
//! ```json
//! {"version": 1, "n_sites": 16, "links": [[0, 1, "r"], ...], "closed": true, "first_betti_number": 0}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{validate, Colex, Color, Link, Mode};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColexFile {
    pub version: u32,
    pub n_sites: usize,
    pub links: Vec<(usize, usize, Color)>,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_betti_number: Option<u32>,
}

impl From<&Colex> for ColexFile {
    fn from(c: &Colex) -> Self {
        ColexFile {
            version: FORMAT_VERSION,
            n_sites: c.n_sites(),
            links: c.links().iter().map(|l| (l.a, l.b, l.color)).collect(),
            closed: c.is_closed(),
            first_betti_number: c.first_betti_number(),
        }
    }
}

pub fn to_json_string(colex: &Colex) -> String {
    serde_json::to_string_pretty(&ColexFile::from(colex)).expect("colex file serializes")
}

/// Parses and validates a colex document.
pub fn from_json_str(text: &str) -> Result<Colex> {
    let file: ColexFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse { context: format!("line {} column {}", e.line(), e.column()), message: e.to_string() })?;
    if file.version != FORMAT_VERSION {
        return Err(Error::Parse {
            context: "field `version`".into(),
            message: format!("unsupported version {} (expected {FORMAT_VERSION})", file.version),
        });
    }
    let links = file.links.iter().map(|&(a, b, color)| Link { a, b, color }).collect();
    let colex = Colex::new(file.n_sites, links, file.closed, file.first_betti_number)?;
    let mode = if file.closed { Mode::Closed } else { Mode::Punctured };
    let report = validate(&colex, mode);
    if !report.passed {
        let summary: Vec<String> = report.violations.iter().take(5).map(|v| format!("{}: {}", v.axiom, v.witness)).collect();
        return Err(Error::Validation(summary.join("; ")));
    }
    Ok(colex.recover_torus_geometry())
}

pub fn save_colex(colex: &Colex, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json_string(colex) + "\n").map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn load_colex(path: impl AsRef<Path>) -> Result<Colex> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_tesseract, build_torus};

    #[test]
    fn round_trip_builders() {
        let dir = tempfile::tempdir().unwrap();
        let tess = build_tesseract();
        let cases = [tess.clone(), tess.puncture(0).unwrap(), build_torus(2).unwrap()];
        for (i, c) in cases.iter().enumerate() {
            let path = dir.path().join(format!("c{i}.json"));
            save_colex(c, &path).unwrap();
            let back = load_colex(&path).unwrap();
            assert_eq!(&back, c);
            assert_eq!(back.faces(), c.faces());
            assert_eq!(back.cells(), c.cells());
            assert_eq!(back.geometry().is_some(), c.geometry().is_some());
        }
    }

    #[test]
    fn unknown_color_is_a_parse_error() {
        let text = r#"{"version": 1, "n_sites": 2, "links": [[0, 1, "q"]], "closed": true}"#;
        match from_json_str(text) {
            Err(Error::Parse { message, context }) => {
                assert!(message.contains("unknown color token"), "{message}");
                assert!(context.contains("line 1"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_a_parse_error() {
        let text = r#"{"version": 1, "links": [], "closed": true}"#;
        match from_json_str(text) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("n_sites")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn degree_five_site_fails_validation() {
        let mut file = ColexFile::from(&build_tesseract());
        file.links.push((0, 15, Color::R));
        let text = serde_json::to_string(&file).unwrap();
        match from_json_str(&text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("site-degree"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }
}
