use std::collections::HashSet;

use serde::Serialize;

use super::{Colex, Color, Counts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Closed,
    Punctured,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub mode: Mode,
    pub violations: Vec<Violation>,
    pub counts: Counts,
    pub parity: &'static str,
}

/// Checks the colex axioms for `mode`. Never fails; problems become violations.
pub fn validate(colex: &Colex, mode: Mode) -> ValidationReport {
    let mut v = Vec::new();
    let mut push = |axiom: &'static str, witness: String| v.push(Violation { axiom, witness });

    let mut seen_pairs = HashSet::new();
    for (i, l) in colex.links().iter().enumerate() {
        if !seen_pairs.insert((l.a.min(l.b), l.a.max(l.b))) {
            push("simple-graph", format!("link {i} duplicates sites {}-{}", l.a, l.b));
        }
    }

    let mut degree_three = Vec::new();
    for s in 0..colex.n_sites() {
        let deg = colex.degree(s);
        let ok = match mode {
            Mode::Closed => deg == 4,
            Mode::Punctured => deg == 4 || deg == 3,
        };
        if !ok {
            push("site-degree", format!("site {s} has degree {deg}"));
        }
        if deg == 3 {
            degree_three.push(s);
        }
        let mut colors: Vec<Color> = colex.incident_links(s).iter().map(|&l| colex.links()[l].color).collect();
        colors.sort();
        if colors.windows(2).any(|w| w[0] == w[1]) {
            push("distinct-link-colors", format!("site {s} has repeated link colors {colors:?}"));
        }
    }

    for (pair, sites) in &colex.malformed_faces {
        push("face-components", format!("{pair} component at sites {sites:?} is not an alternating cycle or path"));
    }
    for (i, f) in colex.faces().iter().enumerate() {
        if f.sites.len() % 2 != 0 {
            push("face-components", format!("face {i} ({}) has odd length {}", f.pair, f.sites.len()));
        }
    }

    match mode {
        Mode::Closed => {
            for f in colex.boundary_faces() {
                push("face-components", format!("{} component starting at site {} is an open path", f.pair, f.sites[0]));
            }
            for (color, sites) in &colex.open_cell_sites {
                push("cell-components", format!("{color} component at sites {sites:?} is not 3-valent"));
            }
            let mut per_link = vec![0usize; colex.links().len()];
            for f in colex.faces() {
                for &l in &f.links {
                    per_link[l] += 1;
                }
            }
            for (l, &c) in per_link.iter().enumerate() {
                if c != 3 {
                    push("link-in-three-faces", format!("link {l} lies in {c} faces"));
                }
            }
            for f in 0..colex.faces().len() {
                let n = colex.cells_of_face(f).len();
                if n != 2 {
                    push("face-in-two-cells", format!("face {f} lies in {n} cells"));
                }
            }
            if !colex.n_sites().is_multiple_of(2) {
                push("site-parity", format!("closed colex has odd site count {}", colex.n_sites()));
            }
        }
        Mode::Punctured => {
            let boundary: HashSet<usize> = degree_three.iter().copied().collect();
            for f in colex.boundary_faces() {
                let ends = [f.sites[0], *f.sites.last().unwrap()];
                if !ends.iter().all(|s| boundary.contains(s)) {
                    push("face-components", format!("open {} path at sites {:?} ends away from the puncture", f.pair, f.sites));
                }
            }
            for (color, sites) in &colex.open_cell_sites {
                if !sites.iter().any(|s| boundary.contains(s)) {
                    push("cell-components", format!("{color} component at sites {sites:?} is open away from the puncture"));
                }
            }
            let mut missing: Vec<Color> =
                degree_three.iter().filter_map(|&s| Color::ALL.into_iter().find(|&c| colex.link_at(s, c).is_none())).collect();
            missing.sort();
            if degree_three.len() != 4 || missing != Color::ALL.to_vec() {
                push("puncture-boundary", format!("expected four degree-3 sites missing one link of each color, found {degree_three:?}"));
            }
            for f in 0..colex.faces().len() {
                let n = colex.cells_of_face(f).len();
                if n == 0 {
                    push("face-in-two-cells", format!("face {f} lies in no cell"));
                }
            }
            if colex.n_sites().is_multiple_of(2) {
                push("site-parity", format!("punctured colex has even site count {}", colex.n_sites()));
            }
        }
    }

    ValidationReport {
        passed: v.is_empty(),
        mode,
        violations: v,
        counts: colex.counts(),
        parity: if colex.n_sites().is_multiple_of(2) { "even" } else { "odd" },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_tesseract, build_torus, Link};

    #[test]
    fn builders_pass() {
        assert!(validate(&build_tesseract(), Mode::Closed).passed);
        assert!(validate(&build_torus(2).unwrap(), Mode::Closed).passed);
        assert!(validate(&build_torus(4).unwrap(), Mode::Closed).passed);
    }

    #[test]
    fn punctured_passes_with_odd_parity() {
        let t = build_tesseract();
        for s in [0, 7, 15] {
            let r = validate(&t.puncture(s).unwrap(), Mode::Punctured);
            assert!(r.passed, "{:?}", r.violations);
            assert_eq!(r.parity, "odd");
        }
        // A punctured colex is not closed.
        assert!(!validate(&t.puncture(0).unwrap(), Mode::Closed).passed);
    }

    #[test]
    fn recolored_link_is_caught() {
        let t = build_tesseract();
        let mut links = t.links().to_vec();
        // Link 0 joins 0000-0001 (r); give it the color of another link at site 0.
        links[0].color = Color::G;
        let bad = Colex::new(16, links, true, Some(0)).unwrap();
        let r = validate(&bad, Mode::Closed);
        assert!(!r.passed);
        assert!(r.violations.iter().any(|v| v.axiom == "distinct-link-colors"));
    }

    #[test]
    fn extra_link_is_caught() {
        let t = build_tesseract();
        let mut links = t.links().to_vec();
        links.push(Link { a: 0, b: 15, color: Color::R });
        let bad = Colex::new(16, links, true, Some(0)).unwrap();
        let r = validate(&bad, Mode::Closed);
        assert!(r.violations.iter().any(|v| v.axiom == "site-degree" && v.witness.contains("site 0 ")));
        assert_eq!(r.passed, r.violations.is_empty());
    }
}
