//! 3-colexes: 4-valent graphs with 4-colored links.
//!
//! A colex is stored as its sites and colored links only. Faces are the
//! connected components of 2-color subgraphs and cells the components of
//! 3-color subgraphs; both are re-derived whenever a colex is constructed.
//! A face takes the two colors *not* used by its links (it lies between a
//! cell of each of those colors) and a cell takes the one color its links
//! do not use.
//!
//! In a punctured colex the components touching the removed site are no
//! longer closed. Those remnants are kept separately as boundary faces and
//! are not stabilizer generators.

mod build;
mod io;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use build::{build_tesseract, build_torus, TorusGeometry};
pub use io::{from_json_str, load_colex, save_colex, to_json_string, ColexFile, FORMAT_VERSION};
pub use validate::{validate, Mode, ValidationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    R,
    G,
    B,
    Y,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::R, Color::G, Color::B, Color::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i]
    }

    pub fn as_char(self) -> char {
        ['r', 'g', 'b', 'y'][self.index()]
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'r' => Some(Color::R),
            'g' => Some(Color::G),
            'b' => Some(Color::B),
            'y' => Some(Color::Y),
            _ => None,
        }
    }

    /// The other three colors, in order.
    pub fn others(self) -> [Color; 3] {
        let mut out = [Color::R; 3];
        let mut k = 0;
        for c in Color::ALL {
            if c != self {
                out[k] = c;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Color> {
        let mut chars = s.chars();
        match (chars.next().and_then(Color::from_char), chars.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(Error::Parse { context: "color".into(), message: format!("unknown color token {s:?}") }),
        }
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(format!("unknown color token {s:?}")))
    }
}

/// An unordered pair of distinct colors, stored low-first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorPair(Color, Color);

impl ColorPair {
    pub fn new(a: Color, b: Color) -> Option<ColorPair> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(ColorPair(a, b)),
            std::cmp::Ordering::Greater => Some(ColorPair(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn all() -> [ColorPair; 6] {
        use Color::*;
        [ColorPair(R, G), ColorPair(R, B), ColorPair(R, Y), ColorPair(G, B), ColorPair(G, Y), ColorPair(B, Y)]
    }

    pub fn colors(self) -> [Color; 2] {
        [self.0, self.1]
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 == c || self.1 == c
    }

    pub fn complement(self) -> ColorPair {
        let rest: Vec<Color> = Color::ALL.into_iter().filter(|&c| !self.contains(c)).collect();
        ColorPair(rest[0], rest[1])
    }
}

impl fmt::Display for ColorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl Serialize for ColorPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

impl Link {
    pub fn other(&self, site: usize) -> usize {
        if self.a == site {
            self.b
        } else {
            self.a
        }
    }
}

/// A closed 2-color cycle, or an open path on the boundary of a punctured colex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// The colors of the two cells this face separates.
    pub pair: ColorPair,
    /// Sites in traversal order (cyclic for closed faces).
    pub sites: Vec<usize>,
    pub links: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub color: Color,
    /// Sorted site ids.
    pub sites: Vec<usize>,
    /// Ids of the closed faces on the cell boundary.
    pub faces: Vec<usize>,
}

/// A 3-colex with its derived faces and cells.
#[derive(Clone, Debug)]
pub struct Colex {
    n_sites: usize,
    links: Vec<Link>,
    closed: bool,
    first_betti_number: Option<u32>,
    incident: Vec<Vec<usize>>,
    faces: Vec<Face>,
    boundary_faces: Vec<Face>,
    /// Component shapes that are neither cycles nor paths; only possible in malformed input.
    malformed_faces: Vec<(ColorPair, Vec<usize>)>,
    cells: Vec<Cell>,
    /// Sites whose 3-color component is not a complete cell, by cell color.
    open_cell_sites: Vec<(Color, Vec<usize>)>,
    cell_of: Vec<[Option<usize>; 4]>,
    original_ids: Option<Vec<usize>>,
    geometry: Option<Arc<TorusGeometry>>,
}

impl PartialEq for Colex {
    /// Structural equality: same sites, same colored links, same flags.
    fn eq(&self, other: &Self) -> bool {
        self.n_sites == other.n_sites
            && self.closed == other.closed
            && self.first_betti_number == other.first_betti_number
            && self.links.len() == other.links.len()
            && self
                .links
                .iter()
                .zip(&other.links)
                .all(|(a, b)| a.color == b.color && ((a.a == b.a && a.b == b.b) || (a.a == b.b && a.b == b.a)))
    }
}

impl Colex {
    /// Builds a colex from sites and colored links and derives its faces and cells.
    ///
    /// Only structural problems that make derivation impossible are errors
    /// (endpoints out of range, self-loops). Axiom violations are reported by
    /// [`validate`].
    pub fn new(n_sites: usize, links: Vec<Link>, closed: bool, first_betti_number: Option<u32>) -> Result<Colex> {
        let mut incident = vec![Vec::new(); n_sites];
        for (i, l) in links.iter().enumerate() {
            for s in [l.a, l.b] {
                if s >= n_sites {
                    return Err(Error::Validation(format!("link {i} endpoint {s} out of range for {n_sites} sites")));
                }
            }
            if l.a == l.b {
                return Err(Error::Validation(format!("link {i} is a self-loop at site {}", l.a)));
            }
            incident[l.a].push(i);
            incident[l.b].push(i);
        }
        let mut colex = Colex {
            n_sites,
            links,
            closed,
            first_betti_number,
            incident,
            faces: Vec::new(),
            boundary_faces: Vec::new(),
            malformed_faces: Vec::new(),
            cells: Vec::new(),
            open_cell_sites: Vec::new(),
            cell_of: vec![[None; 4]; n_sites],
            original_ids: None,
            geometry: None,
        };
        colex.derive_faces();
        colex.derive_cells();
        Ok(colex)
    }

    fn components(&self, colors: &[Color]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_sites];
        let mut out = Vec::new();
        for start in 0..self.n_sites {
            if seen[start] || !self.incident[start].iter().any(|&l| colors.contains(&self.links[l].color)) {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &l in &self.incident[u] {
                    let link = &self.links[l];
                    if colors.contains(&link.color) {
                        let v = link.other(u);
                        if !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn links_of_colors(&self, site: usize, colors: &[Color]) -> Vec<usize> {
        self.incident[site].iter().copied().filter(|&l| colors.contains(&self.links[l].color)).collect()
    }

    fn derive_faces(&mut self) {
        for pair in ColorPair::all() {
            let link_colors = pair.complement().colors();
            for comp in self.components(&link_colors) {
                let degs: Vec<Vec<usize>> = comp.iter().map(|&s| self.links_of_colors(s, &link_colors)).collect();
                let alternating =
                    degs.iter().all(|ls| ls.len() <= 2 && (ls.len() < 2 || self.links[ls[0]].color != self.links[ls[1]].color));
                let ends: Vec<usize> = comp.iter().zip(&degs).filter(|(_, ls)| ls.len() == 1).map(|(&s, _)| s).collect();
                if !alternating || !(ends.is_empty() || ends.len() == 2) {
                    self.malformed_faces.push((pair, comp));
                    continue;
                }
                let start = ends.first().copied().unwrap_or(comp[0]);
                let (sites, links) = self.walk(start, &link_colors, comp.len());
                let face = Face { pair, sites, links };
                if ends.is_empty() {
                    self.faces.push(face);
                } else {
                    self.boundary_faces.push(face);
                }
            }
        }
    }

    /// Traverses a cycle or path component from `start`.
    fn walk(&self, start: usize, colors: &[Color], size: usize) -> (Vec<usize>, Vec<usize>) {
        let mut sites = vec![start];
        let mut links = Vec::new();
        let mut prev_link = None;
        let mut cur = start;
        loop {
            let next = self.links_of_colors(cur, colors).into_iter().find(|&l| Some(l) != prev_link);
            let Some(l) = next else { break };
            links.push(l);
            let v = self.links[l].other(cur);
            if v == start || sites.len() == size {
                break;
            }
            sites.push(v);
            prev_link = Some(l);
            cur = v;
        }
        (sites, links)
    }

    fn derive_cells(&mut self) {
        for color in Color::ALL {
            let link_colors = color.others();
            for comp in self.components(&link_colors) {
                let complete = comp.iter().all(|&s| {
                    let ls = self.links_of_colors(s, &link_colors);
                    ls.len() == 3 && link_colors.iter().all(|c| ls.iter().filter(|&&l| self.links[l].color == *c).count() == 1)
                });
                if !complete {
                    self.open_cell_sites.push((color, comp));
                    continue;
                }
                let id = self.cells.len();
                for &s in &comp {
                    self.cell_of[s][color.index()] = Some(id);
                }
                self.cells.push(Cell { color, sites: comp, faces: Vec::new() });
            }
        }
        for (fid, face) in self.faces.iter().enumerate() {
            for c in face.pair.colors() {
                if let Some(cell) = self.cell_of[face.sites[0]][c.index()] {
                    self.cells[cell].faces.push(fid);
                }
            }
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Open 2-color paths left on the surface of a punctured colex.
    pub fn boundary_faces(&self) -> &[Face] {
        &self.boundary_faces
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn first_betti_number(&self) -> Option<u32> {
        self.first_betti_number
    }

    pub fn incident_links(&self, site: usize) -> &[usize] {
        &self.incident[site]
    }

    pub fn degree(&self, site: usize) -> usize {
        self.incident[site].len()
    }

    /// The link of `color` at `site`, if present.
    pub fn link_at(&self, site: usize, color: Color) -> Option<usize> {
        self.incident[site].iter().copied().find(|&l| self.links[l].color == color)
    }

    /// The complete cell of `color` containing `site`, if any.
    pub fn cell_of(&self, site: usize, color: Color) -> Option<usize> {
        self.cell_of[site][color.index()]
    }

    /// The cells a face lies between (one or two in a punctured colex).
    pub fn cells_of_face(&self, face: usize) -> Vec<usize> {
        let f = &self.faces[face];
        f.pair.colors().iter().filter_map(|&c| self.cell_of(f.sites[0], c)).collect()
    }

    /// Faces incident to a site.
    pub fn faces_at(&self, site: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].sites.contains(&site)).collect()
    }

    /// For a punctured colex, the original id of each site before removal.
    pub fn original_ids(&self) -> Option<&[usize]> {
        self.original_ids.as_deref()
    }

    pub fn geometry(&self) -> Option<&TorusGeometry> {
        self.geometry.as_deref()
    }

    pub(crate) fn with_geometry(mut self, g: TorusGeometry) -> Colex {
        self.geometry = Some(Arc::new(g));
        self
    }

    /// Attaches a torus embedding when this colex is structurally identical to `build_torus(L)` for some L.
    pub fn recover_torus_geometry(self) -> Colex {
        if self.geometry.is_some() || !self.closed || !self.n_sites.is_multiple_of(12) {
            return self;
        }
        let l3 = self.n_sites / 12;
        let l = (1..=l3).find(|l| l * l * l == l3);
        match l.filter(|l| l % 2 == 0).and_then(|l| build_torus(l).ok()) {
            Some(t) if t == self => {
                let g = t.geometry.clone();
                Colex { geometry: g, ..self }
            }
            _ => self,
        }
    }

    pub fn face_sites(&self, face: usize) -> &[usize] {
        &self.faces[face].sites
    }

    /// Removes a site with its links, faces and cells.
    pub fn puncture(&self, site: usize) -> Result<Colex> {
        self.puncture_with_report(site).map(|(c, _)| c)
    }

    /// [`Colex::puncture`] plus the removal bookkeeping.
    pub fn puncture_with_report(&self, site: usize) -> Result<(Colex, PunctureReport)> {
        if !self.closed {
            return Err(Error::NotClosed);
        }
        if site >= self.n_sites {
            return Err(Error::IndexOutOfRange { index: site, len: self.n_sites });
        }
        let remap = |s: usize| if s < site { s } else { s - 1 };
        let links: Vec<Link> = self
            .links
            .iter()
            .filter(|l| l.a != site && l.b != site)
            .map(|l| Link { a: remap(l.a), b: remap(l.b), color: l.color })
            .collect();
        let mut out = Colex::new(self.n_sites - 1, links, false, None)?;
        let original: Vec<usize> = (0..self.n_sites).filter(|&s| s != site).collect();
        out.original_ids = Some(original.clone());
        let report = PunctureReport {
            removed_site: site,
            removed_sites: self.n_sites - out.n_sites,
            removed_links: self.links.len() - out.links.len(),
            removed_faces: self.faces.len() - out.faces.len(),
            removed_cells: self.cells.len() - out.cells.len(),
            original_ids: original,
        };
        Ok((out, report))
    }

    pub fn counts(&self) -> Counts {
        Counts { sites: self.n_sites, links: self.links.len(), faces: self.faces.len(), cells: self.cells.len() }
    }

    /// Site count of each face and cell, keyed by kind, for the multiple-of-4/8 check.
    pub fn size_histogram(&self) -> HashMap<(&'static str, usize), usize> {
        let mut h = HashMap::new();
        for f in &self.faces {
            *h.entry(("face", f.sites.len())).or_insert(0) += 1;
        }
        for c in &self.cells {
            *h.entry(("cell", c.sites.len())).or_insert(0) += 1;
        }
        h
    }

    /// Whether every face has a multiple of 4 sites and every cell a multiple of 8.
    pub fn satisfies_weight_condition(&self) -> bool {
        self.faces.iter().all(|f| f.sites.len() % 4 == 0) && self.cells.iter().all(|c| c.sites.len() % 8 == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub sites: usize,
    pub links: usize,
    pub faces: usize,
    pub cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PunctureReport {
    pub removed_site: usize,
    pub removed_sites: usize,
    pub removed_links: usize,
    pub removed_faces: usize,
    pub removed_cells: usize,
    /// `original_ids[new] = old`.
    pub original_ids: Vec<usize>,
}
