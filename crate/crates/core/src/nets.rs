//! String and membrane operators.
//!
//! A q-string is a set of q-colored links; its operator is `Z` on the sites
//! touched an odd number of times, and its endpoints are q-cells. A
//! pq-membrane is a set of pq-faces; its operator is `X` on the parity of
//! the face supports, and its border excites faces. Crossing numbers are
//! never computed geometrically: the parity of the support overlap is the
//! definition used throughout.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::code::{CssCode, Syndrome};
use crate::colex::{Colex, Color, ColorPair, Face};
use crate::error::{Error, Result};
use crate::gf2::{enumerate_span, kernel_basis, BitMatrix, BitVector, RowSpace, DEFAULT_ENUMERATION_CAP};
use crate::pauli::{PauliKind, PauliOp};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorString {
    pub color: Color,
    pub links: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membrane {
    pub pair: ColorPair,
    pub faces: BTreeSet<usize>,
}

impl ColorString {
    pub fn new(color: Color, links: impl IntoIterator<Item = usize>) -> ColorString {
        ColorString { color, links: links.into_iter().collect() }
    }
}

impl Membrane {
    pub fn new(pair: ColorPair, faces: impl IntoIterator<Item = usize>) -> Membrane {
        Membrane { pair, faces: faces.into_iter().collect() }
    }
}

fn check_string(colex: &Colex, s: &ColorString) -> Result<()> {
    for &l in &s.links {
        let link = colex.links().get(l).ok_or(Error::IndexOutOfRange { index: l, len: colex.links().len() })?;
        if link.color != s.color {
            return Err(Error::WrongLinkColor { link: l, actual: link.color.as_char(), expected: s.color.as_char() });
        }
    }
    Ok(())
}

fn check_membrane(colex: &Colex, m: &Membrane) -> Result<()> {
    for &f in &m.faces {
        let face = colex.faces().get(f).ok_or(Error::IndexOutOfRange { index: f, len: colex.faces().len() })?;
        if face.pair != m.pair {
            return Err(Error::WrongFaceColor { face: f, actual: face.pair.to_string(), expected: m.pair.to_string() });
        }
    }
    Ok(())
}

fn string_support(colex: &Colex, links: impl IntoIterator<Item = usize>) -> BitVector {
    let mut v = BitVector::zeros(colex.n_sites());
    for l in links {
        let link = &colex.links()[l];
        v.flip(link.a);
        v.flip(link.b);
    }
    v
}

fn face_support(n: usize, face: &Face) -> BitVector {
    BitVector::from_indices(n, face.sites.iter().copied())
}

/// `B_s^Z`.
pub fn string_operator(colex: &Colex, s: &ColorString) -> Result<PauliOp> {
    check_string(colex, s)?;
    Ok(PauliOp::from_bits(PauliKind::Z, string_support(colex, s.links.iter().copied())))
}

/// `B_m^X`.
pub fn membrane_operator(colex: &Colex, m: &Membrane) -> Result<PauliOp> {
    check_membrane(colex, m)?;
    let mut v = BitVector::zeros(colex.n_sites());
    for &f in &m.faces {
        v.xor_assign(&face_support(colex.n_sites(), &colex.faces()[f]));
    }
    Ok(PauliOp::from_bits(PauliKind::X, v))
}

/// The q-cells met an odd number of times by the ends of the string's links.
pub fn endpoints(colex: &Colex, s: &ColorString) -> Result<Vec<usize>> {
    check_string(colex, s)?;
    let mut odd = BTreeSet::new();
    for &l in &s.links {
        let link = &colex.links()[l];
        for site in [link.a, link.b] {
            if let Some(c) = colex.cell_of(site, s.color) {
                if !odd.remove(&c) {
                    odd.insert(c);
                }
            }
        }
    }
    Ok(odd.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub overlap: usize,
    pub commutes: bool,
    pub shares_color: bool,
    pub passed: bool,
}

/// Commutation of `B_s^Z` and `B_m^X` against the overlap parity, and
/// unconditional commutation when the string color is not in the pair.
pub fn crossing_anticommutation_check(colex: &Colex, s: &ColorString, m: &Membrane) -> Result<CrossingReport> {
    let zs = string_operator(colex, s)?;
    let xm = membrane_operator(colex, m)?;
    let overlap = zs.z_bits().overlap(xm.x_bits());
    let commutes = zs.commutes(&xm)?;
    let shares_color = m.pair.contains(s.color);
    let passed = commutes == (overlap % 2 == 0) && (shares_color || commutes);
    Ok(CrossingReport { overlap, commutes, shares_color, passed })
}

/// Exhaustive over single links and single faces of disjoint colors; by
/// linearity this covers every string/membrane pair of those colors.
pub fn disjoint_color_commutation(colex: &Colex) -> Result<usize> {
    let n = colex.n_sites();
    let mut checked = 0;
    for (l, link) in colex.links().iter().enumerate() {
        let s = string_support(colex, [l]);
        for face in colex.faces().iter().filter(|f| !f.pair.contains(link.color)) {
            if s.dot(&face_support(n, face)) {
                return Err(Error::Validation(format!("link {l} anticommutes with a {} face", face.pair)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `(link, neighbor cell, winding shift)` for every q-link leaving a q-cell.
type CellEdges = Vec<Vec<(usize, Option<usize>, [i64; 3])>>;

fn q_cell_graph(colex: &Colex, q: Color) -> CellEdges {
    let geometry = colex.geometry();
    let mut edges: CellEdges = vec![Vec::new(); colex.cells().len()];
    for (l, link) in colex.links().iter().enumerate().filter(|(_, k)| k.color == q) {
        for (from, to) in [(link.a, link.b), (link.b, link.a)] {
            let Some(a) = colex.cell_of(from, q) else { continue };
            let b = colex.cell_of(to, q);
            let shift = match (geometry, b) {
                (Some(g), Some(b)) => {
                    let (ca, cb) = (g.cell_centers[a], g.cell_centers[b]);
                    let (pa, pb) = (g.positions[from], g.positions[to]);
                    let d1 = g.diff(pa, ca);
                    let d2 = g.diff(pb, pa);
                    let d3 = g.diff(cb, pb);
                    let d = [0, 1, 2].map(|i| d1[i] + d2[i] + d3[i]);
                    [0, 1, 2].map(|i| (ca[i] + d[i] - cb[i]).div_euclid(g.period))
                }
                _ => [0; 3],
            };
            edges[a].push((l, b, shift));
        }
    }
    edges
}

/// Walks back through BFS parents collecting links.
fn trace<K: std::hash::Hash + Eq + Copy>(parent: &HashMap<K, (K, usize)>, mut node: K, start: K) -> Vec<usize> {
    let mut links = Vec::new();
    while node != start {
        let (prev, l) = parent[&node];
        links.push(l);
        node = prev;
    }
    links.reverse();
    links
}

fn toggle_set(links: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    for l in links {
        if !set.remove(&l) {
            set.insert(l);
        }
    }
    set
}

/// A closed q-string winding once along axis `dir` of a torus colex.
///
/// BFS runs on the covering graph whose nodes are (q-cell, lattice
/// translation); the string closes nontrivially because its winding vector
/// is the unit vector along `dir`.
pub fn torus_cycle_string(colex: &Colex, q: Color, dir: usize) -> Result<ColorString> {
    if colex.geometry().is_none() {
        return Err(Error::SearchFailed("colex has no torus embedding".into()));
    }
    if dir >= 3 {
        return Err(Error::IndexOutOfRange { index: dir, len: 3 });
    }
    let edges = q_cell_graph(colex, q);
    let c0 = colex.cells().iter().position(|c| c.color == q).ok_or_else(|| Error::SearchFailed(format!("no {q}-cell")))?;
    let start = (c0, [0i64; 3]);
    let mut goal = [0i64; 3];
    goal[dir] = 1;
    let mut parent = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, (start, usize::MAX));
    while let Some((cell, t)) = queue.pop_front() {
        if (cell, t) == (c0, goal) {
            let path = trace(&parent, (cell, t), start);
            return Ok(ColorString { color: q, links: toggle_set(path) });
        }
        for &(l, next, shift) in &edges[cell] {
            let Some(next) = next else { continue };
            let t2 = [0, 1, 2].map(|i| t[i] + shift[i]);
            if t2.iter().any(|x| x.abs() > 2) {
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((next, t2)) {
                e.insert(((cell, t), l));
                queue.push_back((next, t2));
            }
        }
    }
    Err(Error::SearchFailed(format!("no {q}-cycle along axis {dir}")))
}

/// Kernel basis of the closed pq-membranes: face combinations with no border.
pub fn closed_membranes(code: &CssCode, colex: &Colex, pair: ColorPair) -> Result<Vec<Membrane>> {
    let ids: Vec<usize> = (0..colex.faces().len()).filter(|&f| colex.faces()[f].pair == pair).collect();
    let n = colex.n_sites();
    let borders = ids.iter().map(|&f| code.hz().mul_vec(&face_support(n, &colex.faces()[f]))).collect::<Result<Vec<_>>>()?;
    let s = BitMatrix::from_rows(code.n_faces(), borders)?;
    Ok(kernel_basis(&s.transpose()).rows().iter().map(|y| Membrane::new(pair, y.iter_ones().map(|i| ids[i]))).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorCombinationReport {
    /// Per axis: `B_r·B_g·B_b` equals `B_y` up to stabilizers.
    pub per_direction: [bool; 3],
    /// Rank of the r, g, b strings along the three axes modulo the face span.
    pub string_rank: usize,
    pub passed: bool,
}

/// Strings of three colors along three axes span the Z logicals, and the
/// fourth color is the product of the other three.
pub fn color_combination_check(code: &CssCode, colex: &Colex) -> Result<ColorCombinationReport> {
    let mut per_direction = [false; 3];
    let mut span = code.hz_space().clone();
    let mut string_rank = 0;
    for (dir, ok) in per_direction.iter_mut().enumerate() {
        let mut product = PauliOp::identity(code.n());
        for q in [Color::R, Color::G, Color::B] {
            let op = string_operator(colex, &torus_cycle_string(colex, q, dir)?)?;
            if span.insert(op.z_bits()) {
                string_rank += 1;
            }
            product = product.multiply(&op)?;
        }
        let y = string_operator(colex, &torus_cycle_string(colex, Color::Y, dir)?)?;
        *ok = code.equivalent_mod_stabilizers(&product, &y)?;
    }
    let passed = per_direction.iter().all(|&b| b) && string_rank == code.k();
    Ok(ColorCombinationReport { per_direction, string_rank, passed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringNet {
    pub branch_site: usize,
    /// One string per color, each from the branch site's cell to the boundary.
    pub strings: Vec<ColorString>,
    pub operator: PauliOp,
}

/// A Z logical of a tetrahedral code: four strings, one per color, joined at
/// a branch site and ending on the missing cells.
pub fn tetra_string_net(code: &CssCode, colex: &Colex) -> Result<StringNet> {
    if code.k() != 1 || colex.is_closed() {
        return Err(Error::LogicalCount(code.k(), "a punctured colex with one logical qubit"));
    }
    let graphs: Vec<CellEdges> = Color::ALL.iter().map(|&q| q_cell_graph(colex, q)).collect();
    // Branch sites meet one complete cell of each color, so all four strings are nonempty.
    for b in (0..colex.n_sites()).filter(|&b| Color::ALL.iter().all(|&q| colex.cell_of(b, q).is_some())) {
        let mut strings = Vec::with_capacity(4);
        for q in Color::ALL {
            let start = colex.cell_of(b, q).expect("filtered above");
            match path_to_boundary(&graphs[q.index()], start) {
                Some(path) => strings.push(ColorString { color: q, links: toggle_set(path) }),
                None => break,
            }
        }
        if strings.len() != 4 {
            continue;
        }
        let mut support = BitVector::from_indices(colex.n_sites(), [b]);
        for s in &strings {
            support.xor_assign(&string_support(colex, s.links.iter().copied()));
        }
        let operator = PauliOp::from_bits(PauliKind::Z, support);
        if code.in_normalizer(&operator)? && !operator.commutes(&code.logical_x()[0])? {
            return Ok(StringNet { branch_site: b, strings, operator });
        }
    }
    Err(Error::SearchFailed("no branch site yields a string-net logical".into()))
}

fn path_to_boundary(edges: &CellEdges, start: usize) -> Option<Vec<usize>> {
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::from([(start, (start, usize::MAX))]);
    let mut queue = VecDeque::from([start]);
    while let Some(cell) = queue.pop_front() {
        for &(l, next, _) in &edges[cell] {
            match next {
                None => {
                    let mut path = trace(&parent, cell, start);
                    path.push(l);
                    return Some(path);
                }
                Some(next) => {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                        e.insert((cell, l));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembraneNet {
    /// Complete faces used.
    pub faces: Vec<usize>,
    /// Open face remnants at the puncture (indices into `boundary_faces`).
    pub boundary_remnants: Vec<usize>,
    pub pairs: Vec<ColorPair>,
    pub operator: PauliOp,
}

/// An X logical of a tetrahedral code built from faces and face remnants of
/// several color pairs. Among all borderless odd-weight combinations, the
/// one using the most color pairs and then the fewest pieces is returned.
pub fn tetra_membrane_net(code: &CssCode, colex: &Colex) -> Result<MembraneNet> {
    if code.k() != 1 || colex.is_closed() {
        return Err(Error::LogicalCount(code.k(), "a punctured colex with one logical qubit"));
    }
    let n = colex.n_sites();
    let pieces: Vec<&Face> = colex.faces().iter().chain(colex.boundary_faces()).collect();
    let m = pieces.len();
    let supports: Vec<BitVector> = pieces.iter().map(|f| face_support(n, f)).collect();
    let borders = supports.iter().map(|s| code.hz().mul_vec(s)).collect::<Result<Vec<_>>>()?;
    let kernel = kernel_basis(&BitMatrix::from_rows(code.n_faces(), borders)?.transpose());
    let rows = kernel
        .rows()
        .iter()
        .map(|y| {
            let mut s = BitVector::zeros(n);
            for i in y.iter_ones() {
                s.xor_assign(&supports[i]);
            }
            y.concat(&s)
        })
        .collect();
    let combined = BitMatrix::from_rows(m + n, rows)?;

    let mut best: Option<(usize, usize, BitVector)> = None;
    for v in enumerate_span(&combined, DEFAULT_ENUMERATION_CAP)? {
        let support = v.slice(m, m + n);
        if support.weight() % 2 == 0 {
            continue;
        }
        let y = v.slice(0, m);
        let pairs: BTreeSet<ColorPair> = y.iter_ones().map(|i| pieces[i].pair).collect();
        let key = (6 - pairs.len(), y.weight());
        if best.as_ref().is_none_or(|(a, b, yb)| (key.0, key.1, &y) < (*a, *b, yb)) {
            best = Some((key.0, key.1, y));
        }
    }
    let (_, _, y) = best.ok_or_else(|| Error::SearchFailed("no odd borderless membrane combination".into()))?;
    let mut support = BitVector::zeros(n);
    for i in y.iter_ones() {
        support.xor_assign(&supports[i]);
    }
    let nf = colex.faces().len();
    let pairs: BTreeSet<ColorPair> = y.iter_ones().map(|i| pieces[i].pair).collect();
    Ok(MembraneNet {
        faces: y.iter_ones().filter(|&i| i < nf).collect(),
        boundary_remnants: y.iter_ones().filter(|&i| i >= nf).map(|i| i - nf).collect(),
        pairs: pairs.into_iter().collect(),
        operator: PauliOp::from_bits(PauliKind::X, support),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcitationReport {
    pub sites_checked: usize,
    /// Single-site Z excites one cell of each color.
    pub z_ok: bool,
    /// Single-site X excites six faces covering all six pairs.
    pub x_ok: bool,
    /// For each color q, the excited faces whose pair contains q lie in the
    /// q-cell at the site and close a loop around it.
    pub flux_loops_ok: bool,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Exhaustive single-site excitation structure on a closed colex.
pub fn elementary_excitations(code: &CssCode, colex: &Colex) -> Result<ExcitationReport> {
    let n = colex.n_sites();
    let (mut z_ok, mut x_ok, mut loops_ok) = (true, true, true);
    let mut failures = Vec::new();
    for site in 0..n {
        let z = code.syndrome(&PauliOp::single(PauliKind::Z, site, n)?)?;
        let mut colors: Vec<Color> = z.cell_defects.iter().map(|&c| colex.cells()[c].color).collect();
        colors.sort();
        if colors != Color::ALL.to_vec() || !z.face_defects.is_empty() {
            z_ok = false;
            failures.push(format!("site {site}: Z excites cells {:?}", z.cell_defects));
        }

        let x = code.syndrome(&PauliOp::single(PauliKind::X, site, n)?)?;
        let pairs: BTreeSet<ColorPair> = x.face_defects.iter().map(|&f| colex.faces()[f].pair).collect();
        if x.face_defects.len() != 6 || pairs.len() != 6 || !x.cell_defects.is_empty() {
            x_ok = false;
            failures.push(format!("site {site}: X excites faces {:?}", x.face_defects));
        }
        for q in Color::ALL {
            if !flux_loop(colex, site, q, &x) {
                loops_ok = false;
                failures.push(format!("site {site}: {q} flux does not close"));
            }
        }
    }
    Ok(ExcitationReport {
        sites_checked: n,
        z_ok,
        x_ok,
        flux_loops_ok: loops_ok,
        passed: z_ok && x_ok && loops_ok && failures.is_empty(),
        failures,
    })
}

/// The three excited faces containing `q` in their pair belong to the
/// q-cell at `site`, and each two of them share a link at the site.
fn flux_loop(colex: &Colex, site: usize, q: Color, s: &Syndrome) -> bool {
    let faces: Vec<usize> = s.face_defects.iter().copied().filter(|&f| colex.faces()[f].pair.contains(q)).collect();
    let Some(cell) = colex.cell_of(site, q) else { return false };
    if faces.len() != 3 || !faces.iter().all(|&f| colex.cells_of_face(f).contains(&cell)) {
        return false;
    }
    let at_site: Vec<BTreeSet<usize>> = faces
        .iter()
        .map(|&f| colex.faces()[f].links.iter().copied().filter(|l| colex.incident_links(site).contains(l)).collect())
        .collect();
    (0..3).all(|i| at_site[i].intersection(&at_site[(i + 1) % 3]).count() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorRecord {
    pub name: String,
    pub kind: PauliKind,
    pub support: Vec<usize>,
    pub syndrome: Syndrome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetsReport {
    pub passed: bool,
    pub operators: Vec<OperatorRecord>,
    pub checks: Vec<NetCheck>,
}

impl NetsReport {
    fn record(&mut self, code: &CssCode, name: String, op: &PauliOp) -> Result<()> {
        let kind = op.pure_kind().unwrap_or(PauliKind::Z);
        self.operators.push(OperatorRecord { name, kind, support: op.bits(kind).iter_ones().collect(), syndrome: code.syndrome(op)? });
        Ok(())
    }

    fn check(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(NetCheck { name, passed, detail });
    }

    pub fn check_named(&self, name: &str) -> Option<&NetCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs every string/membrane check that applies to the code's colex:
/// local laws everywhere, excitations on closed colexes, cycle strings and
/// closed membranes on tori, and the nets on tetrahedral codes.
pub fn nets_report(code: &CssCode) -> Result<NetsReport> {
    let colex = code.source().ok_or_else(|| Error::Validation("code has no source colex".into()))?;
    let mut report = NetsReport { passed: true, operators: Vec::new(), checks: Vec::new() };

    let mut law_ok = true;
    for (l, link) in colex.links().iter().enumerate() {
        let s = ColorString::new(link.color, [l]);
        let ends = endpoints(colex, &s)?;
        let syn = code.syndrome(&string_operator(colex, &s)?)?;
        law_ok &= ends == syn.cell_defects && syn.face_defects.is_empty() && ends.iter().all(|&c| colex.cells()[c].color == link.color);
    }
    report.check("endpoint-color-law", law_ok, format!("{} single-link strings", colex.links().len()));
    let mut no_cells = true;
    for (f, face) in colex.faces().iter().enumerate() {
        no_cells &= code.syndrome(&membrane_operator(colex, &Membrane::new(face.pair, [f]))?)?.cell_defects.is_empty();
    }
    report.check("membranes-excite-no-cells", no_cells, format!("{} single-face membranes", colex.faces().len()));
    let disjoint = disjoint_color_commutation(colex);
    report.check(
        "disjoint-color-commutation",
        disjoint.is_ok(),
        match &disjoint {
            Ok(n) => format!("{n} link/face pairs"),
            Err(e) => e.to_string(),
        },
    );

    if colex.is_closed() {
        let ex = elementary_excitations(code, colex)?;
        let detail = if ex.failures.is_empty() {
            format!("{} sites; 4 cell defects and 6 face defects in 4 loops each", ex.sites_checked)
        } else {
            ex.failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        };
        report.check("elementary-excitations", ex.passed, detail);
    }

    if colex.geometry().is_some() {
        torus_checks(code, colex, &mut report)?;
    }

    if code.k() == 1 && !colex.is_closed() {
        let sn = tetra_string_net(code, colex)?;
        let mn = tetra_membrane_net(code, colex)?;
        report.record(code, format!("string-net@{}", sn.branch_site), &sn.operator)?;
        report.record(code, "membrane-net".into(), &mn.operator)?;
        let zl = &code.logical_z()[0];
        let xl = &code.logical_x()[0];
        report.check(
            "string-net",
            code.in_normalizer(&sn.operator)? && code.equivalent_mod_stabilizers(&sn.operator, zl)?,
            format!("branch site {}, weight {}", sn.branch_site, sn.operator.weight()),
        );
        report.check(
            "membrane-net",
            code.in_normalizer(&mn.operator)? && code.equivalent_mod_stabilizers(&mn.operator, xl)?,
            format!(
                "{} faces, {} remnants, {} color pairs, weight {}",
                mn.faces.len(),
                mn.boundary_remnants.len(),
                mn.pairs.len(),
                mn.operator.weight()
            ),
        );
        report.check("net-pairing", !sn.operator.commutes(&mn.operator)?, "string-net and membrane-net anticommute".into());
    }

    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(report)
}

fn torus_checks(code: &CssCode, colex: &Colex, report: &mut NetsReport) -> Result<()> {
    let mut strings = Vec::new();
    let mut strings_ok = true;
    for q in Color::ALL {
        for dir in 0..3 {
            let s = torus_cycle_string(colex, q, dir)?;
            let op = string_operator(colex, &s)?;
            strings_ok &= code.syndrome(&op)?.is_empty() && !code.hz_space().contains(op.z_bits());
            report.record(code, format!("{q}-string/axis{dir}"), &op)?;
            strings.push(s);
        }
    }
    report.check("closed-strings", strings_ok, format!("{} winding strings, empty syndromes, nontrivial", strings.len()));

    let mut membranes = Vec::new();
    let mut membranes_ok = true;
    let mut x_logicals = code.hx_space().clone();
    let mut membrane_rank = 0;
    for pair in ColorPair::all() {
        for m in closed_membranes(code, colex, pair)? {
            let op = membrane_operator(colex, &m)?;
            membranes_ok &= code.syndrome(&op)?.is_empty();
            if !code.hx_space().contains(op.x_bits()) {
                if x_logicals.insert(op.x_bits()) {
                    membrane_rank += 1;
                }
                report.record(code, format!("{pair}-membrane#{}", membranes.len()), &op)?;
                membranes.push(m);
            }
        }
    }
    report.check(
        "closed-membranes",
        membranes_ok && membrane_rank == code.k(),
        format!("{} nontrivial closed membranes, logical rank {membrane_rank}", membranes.len()),
    );

    let (mut consistent, mut anticommuting) = (true, 0);
    let mut deformation_ok = true;
    for s in &strings {
        let zs = string_operator(colex, s)?;
        for m in &membranes {
            let r = crossing_anticommutation_check(colex, s, m)?;
            consistent &= r.passed;
            if !r.commutes {
                anticommuting += 1;
                // Deforming the string by a face stabilizer keeps the commutation.
                let xm = membrane_operator(colex, m)?;
                for f in 0..code.n_faces().min(8) {
                    deformation_ok &= zs.multiply(&code.face_operator(f))?.commutes(&xm)? == r.commutes;
                }
            }
        }
    }
    report.check(
        "crossing-parity",
        consistent && anticommuting > 0 && deformation_ok,
        format!("{} pairs, {anticommuting} anticommuting", strings.len() * membranes.len()),
    );

    let cc = color_combination_check(code, colex)?;
    report.check("color-combination", cc.passed, format!("r*g*b ~ y per axis {:?}; string rank {}", cc.per_direction, cc.string_rank));
    Ok(())
}

/// Rank of a set of pure operators of one kind modulo a span.
pub fn quotient_rank(ops: &[PauliOp], kind: PauliKind, base: &RowSpace) -> usize {
    let mut span = base.clone();
    ops.iter().filter(|op| span.insert(op.bits(kind))).count()
}
