//! Builders for the shipped closed colexes.

use std::collections::HashMap;

use super::{Colex, Color, Link};
use crate::error::{Error, Result};

/// The boundary of the 4-cube as a colex on the 3-sphere.
///
/// Sites are the 16 four-bit strings, links join strings at Hamming
/// distance 1 and take the color of the flipped bit (bit 0 = r, …, bit 3 = y).
/// The cells are the 8 cubic facets and the faces the 24 squares.
pub fn build_tesseract() -> Colex {
    let mut links = Vec::with_capacity(32);
    for v in 0..16usize {
        for bit in 0..4 {
            let w = v ^ (1 << bit);
            if v < w {
                links.push(Link { a: v, b: w, color: Color::from_index(bit) });
            }
        }
    }
    Colex::new(16, links, true, Some(0)).expect("tesseract links are well formed")
}

/// Embedding data for a torus colex: integer site positions and cell
/// centers in the doubled-coordinate lattice, periodic with `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusGeometry {
    pub period: i64,
    pub positions: Vec<[i64; 3]>,
    /// Indexed like [`Colex::cells`].
    pub cell_centers: Vec<[i64; 3]>,
}

impl TorusGeometry {
    /// Shortest representative of `v` modulo the period, per coordinate.
    pub fn min_image(&self, v: [i64; 3]) -> [i64; 3] {
        let p = self.period;
        v.map(|x| {
            let r = x.rem_euclid(p);
            if r > p / 2 {
                r - p
            } else {
                r
            }
        })
    }

    pub fn diff(&self, to: [i64; 3], from: [i64; 3]) -> [i64; 3] {
        self.min_image([to[0] - from[0], to[1] - from[1], to[2] - from[2]])
    }
}

/// The bitruncated cubic honeycomb on the 3-torus with `l` cubic periods per axis.
///
/// Cells are truncated octahedra centered on a body-centered cubic lattice;
/// in doubled coordinates the centers are the points with all coordinates
/// ≡ 0 (mod 4) or all ≡ 2 (mod 4), and the vertices of the cell at `c` are
/// `c + perm(0, ±1, ±2)`. Cells are 4-colored by backtracking over the
/// "shares a site" graph and each link takes the one color not used by the
/// three cells around it.
pub fn build_torus(l: usize) -> Result<Colex> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(Error::OddPeriod(l));
    }
    let period = 4 * l as i64;
    let wrap = |v: [i64; 3]| v.map(|x| x.rem_euclid(period));

    let mut centers = Vec::new();
    for a in 0..l as i64 {
        for b in 0..l as i64 {
            for c in 0..l as i64 {
                centers.push([4 * a, 4 * b, 4 * c]);
                centers.push([4 * a + 2, 4 * b + 2, 4 * c + 2]);
            }
        }
    }

    let mut offsets = Vec::with_capacity(24);
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        for sy in [1, -1] {
            for sz in [1, -1] {
                let mag = [0i64, sy, 2 * sz];
                offsets.push([mag[perm[0]], mag[perm[1]], mag[perm[2]]]);
            }
        }
    }

    let mut site_id: HashMap<[i64; 3], usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut cell_sites: Vec<Vec<usize>> = Vec::with_capacity(centers.len());
    for c in &centers {
        let mut sites = Vec::with_capacity(24);
        for o in &offsets {
            let p = wrap([c[0] + o[0], c[1] + o[1], c[2] + o[2]]);
            let id = *site_id.entry(p).or_insert_with(|| {
                positions.push(p);
                positions.len() - 1
            });
            sites.push(id);
        }
        sites.sort_unstable();
        cell_sites.push(sites);
    }
    let n = positions.len();

    let mut cells_at = vec![Vec::new(); n];
    for (ci, sites) in cell_sites.iter().enumerate() {
        for &s in sites {
            cells_at[s].push(ci);
        }
    }
    let mut neighbors = vec![Vec::new(); centers.len()];
    for cs in &cells_at {
        for &a in cs {
            for &b in cs {
                if a != b && !neighbors[a].contains(&b) {
                    neighbors[a].push(b);
                }
            }
        }
    }
    let colors = color_cells(&neighbors).ok_or_else(|| Error::SearchFailed("no 4-coloring of torus cells".into()))?;

    // Links: site pairs at squared distance 2.
    let mut links = Vec::with_capacity(2 * n);
    for (s, p) in positions.iter().enumerate() {
        for d in [[1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1]] {
            for sign in [1, -1] {
                let q = wrap([p[0] + sign * d[0], p[1] + sign * d[1], p[2] + sign * d[2]]);
                let Some(&t) = site_id.get(&q) else { continue };
                if s >= t {
                    continue;
                }
                let around: Vec<usize> = cells_at[s].iter().copied().filter(|c| cells_at[t].contains(c)).collect();
                let mut used = [false; 4];
                for &c in &around {
                    used[colors[c]] = true;
                }
                let free: Vec<usize> = (0..4).filter(|&i| !used[i]).collect();
                if around.len() != 3 || free.len() != 1 {
                    return Err(Error::SearchFailed(format!("link {s}-{t} lies in {} cells", around.len())));
                }
                links.push(Link { a: s, b: t, color: Color::from_index(free[0]) });
            }
        }
    }

    let colex = Colex::new(n, links, true, Some(3))?;
    let center_of: HashMap<&[usize], [i64; 3]> = cell_sites.iter().zip(&centers).map(|(s, c)| (s.as_slice(), *c)).collect();
    let cell_centers = colex
        .cells()
        .iter()
        .map(|c| center_of.get(c.sites.as_slice()).copied())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::SearchFailed("derived cells do not match truncated octahedra".into()))?;
    Ok(colex.with_geometry(TorusGeometry { period, positions, cell_centers }))
}

/// Greedy-order backtracking 4-coloring; vertices are visited in BFS order from 0.
fn color_cells(neighbors: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = neighbors.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut color = vec![usize::MAX; n];
    fn go(k: usize, order: &[usize], neighbors: &[Vec<usize>], color: &mut [usize]) -> bool {
        let Some(&u) = order.get(k) else { return true };
        for c in 0..4 {
            if neighbors[u].iter().all(|&v| color[v] != c) {
                color[u] = c;
                if go(k + 1, order, neighbors, color) {
                    return true;
                }
            }
        }
        color[u] = usize::MAX;
        false
    }
    go(0, &order, neighbors, &mut color).then_some(color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{validate, Mode};

    #[test]
    fn torus_rejects_odd_period() {
        assert!(matches!(build_torus(3), Err(Error::OddPeriod(3))));
        assert!(matches!(build_torus(0), Err(Error::OddPeriod(0))));
    }

    #[test]
    fn torus_l2_shape() {
        let t = build_torus(2).unwrap();
        assert_eq!(t.n_sites(), 96);
        assert_eq!(t.n_sites() % 2, 0);
        assert_eq!(t.links().len(), 192);
        assert_eq!(t.faces().len(), 112);
        assert_eq!(t.cells().len(), 16);
        assert!(validate(&t, Mode::Closed).passed);
        let g = t.geometry().unwrap();
        assert_eq!(g.cell_centers.len(), 16);
    }

    #[test]
    fn torus_cells_are_four_colored() {
        let t = build_torus(2).unwrap();
        for c in Color::ALL {
            assert_eq!(t.cells().iter().filter(|cell| cell.color == c).count(), 4);
        }
    }
}
