//! CSS codes from colexes.
//!
//! Every cell gives an X-type generator `B_c^X` and every face a Z-type
//! generator `B_f^Z`. The code space is the common +1 eigenspace, i.e. the
//! ground space of `H = -Σ_c B_c^X - Σ_f B_f^Z`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::colex::Colex;
use crate::error::{Error, Result};
use crate::gf2::{enumerate_coset, enumerate_span, kernel_basis, rank, BitMatrix, BitVector, RowSpace};
use crate::parallel::worker_count;
use crate::pauli::{PauliKind, PauliOp};

/// Distance asserted for the 15-qubit tetrahedral code in the published construction.
pub const PUBLISHED_DISTANCE_CLAIM: usize = 5;

#[derive(Clone, Debug)]
pub struct CssCode {
    n: usize,
    hx: BitMatrix,
    hz: BitMatrix,
    hx_space: RowSpace,
    hz_space: RowSpace,
    k: usize,
    logical_x: Vec<PauliOp>,
    logical_z: Vec<PauliOp>,
    source: Option<Arc<Colex>>,
}

/// Violated generators: cells (quasiparticles) and faces (fluxes).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Syndrome {
    pub cell_defects: Vec<usize>,
    pub face_defects: Vec<usize>,
}

impl Syndrome {
    pub fn is_empty(&self) -> bool {
        self.cell_defects.is_empty() && self.face_defects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cell_defects.len() + self.face_defects.len()
    }
}

impl CssCode {
    /// A CSS code from explicit check matrices. X and Z checks must commute.
    pub fn from_checks(hx: BitMatrix, hz: BitMatrix) -> Result<CssCode> {
        if hx.n_cols() != hz.n_cols() {
            return Err(Error::LengthMismatch { expected: hx.n_cols(), actual: hz.n_cols() });
        }
        if !hx.mul_transpose(&hz)?.is_zero() {
            return Err(Error::Validation("X and Z checks do not commute".into()));
        }
        let n = hx.n_cols();
        let hx_space = RowSpace::from_matrix(&hx);
        let hz_space = RowSpace::from_matrix(&hz);
        let k = n - hx_space.dim() - hz_space.dim();
        let (xs, zs) = logical_pairs(&hx, &hz, &hx_space, &hz_space, k);
        Ok(CssCode {
            n,
            hx,
            hz,
            hx_space,
            hz_space,
            k,
            logical_x: xs.into_iter().map(|v| PauliOp::from_bits(PauliKind::X, v)).collect(),
            logical_z: zs.into_iter().map(|v| PauliOp::from_bits(PauliKind::Z, v)).collect(),
            source: None,
        })
    }

    /// The code of a validated colex. For a single-qubit code on an odd number
    /// of sites where they are valid logicals, the logical pair is fixed to the
    /// transversal operators X̂ and Ẑ.
    pub fn from_colex(colex: &Colex) -> Result<CssCode> {
        let n = colex.n_sites();
        let hx = BitMatrix::from_rows(n, colex.cells().iter().map(|c| BitVector::from_indices(n, c.sites.iter().copied())).collect())?;
        let hz = BitMatrix::from_rows(n, colex.faces().iter().map(|f| BitVector::from_indices(n, f.sites.iter().copied())).collect())?;
        let mut code = CssCode::from_checks(hx, hz)?;
        if code.k == 1 && n % 2 == 1 {
            let ones = BitVector::ones(n);
            if code.hz.mul_vec(&ones)?.is_zero() && code.hx.mul_vec(&ones)?.is_zero() {
                code.logical_x = vec![PauliOp::transversal(PauliKind::X, n)];
                code.logical_z = vec![PauliOp::transversal(PauliKind::Z, n)];
            }
        }
        code.source = Some(Arc::new(colex.clone()));
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn hx_space(&self) -> &RowSpace {
        &self.hx_space
    }

    pub fn hz_space(&self) -> &RowSpace {
        &self.hz_space
    }

    pub fn logical_x(&self) -> &[PauliOp] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOp] {
        &self.logical_z
    }

    pub fn source(&self) -> Option<&Colex> {
        self.source.as_deref()
    }

    pub fn n_cells(&self) -> usize {
        self.hx.n_rows()
    }

    pub fn n_faces(&self) -> usize {
        self.hz.n_rows()
    }

    pub fn cell_operator(&self, i: usize) -> PauliOp {
        PauliOp::from_bits(PauliKind::X, self.hx.row(i).clone())
    }

    pub fn face_operator(&self, j: usize) -> PauliOp {
        PauliOp::from_bits(PauliKind::Z, self.hz.row(j).clone())
    }

    /// All generators: cells first, then faces.
    pub fn generators(&self) -> impl Iterator<Item = PauliOp> + '_ {
        (0..self.n_cells()).map(|i| self.cell_operator(i)).chain((0..self.n_faces()).map(|j| self.face_operator(j)))
    }

    /// Membership in the stabilizer group. With X written left of Z, group
    /// elements are exactly the phase-0 operators with X part in the cell
    /// span and Z part in the face span.
    pub fn is_stabilizer(&self, p: &PauliOp) -> Result<bool> {
        self.check_n(p)?;
        Ok(p.phase() == 0 && self.hx_space.contains(p.x_bits()) && self.hz_space.contains(p.z_bits()))
    }

    /// Commutes with every generator.
    pub fn in_normalizer(&self, p: &PauliOp) -> Result<bool> {
        self.check_n(p)?;
        Ok(self.hx.mul_vec(p.z_bits())?.is_zero() && self.hz.mul_vec(p.x_bits())?.is_zero())
    }

    fn check_n(&self, p: &PauliOp) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: p.n() });
        }
        Ok(())
    }

    pub fn syndrome(&self, e: &PauliOp) -> Result<Syndrome> {
        self.check_n(e)?;
        Ok(Syndrome {
            cell_defects: self.hx.mul_vec(e.z_bits())?.iter_ones().collect(),
            face_defects: self.hz.mul_vec(e.x_bits())?.iter_ones().collect(),
        })
    }

    /// `-(|C| + |F|) + 2·(defects)`.
    pub fn energy(&self, s: &Syndrome) -> i64 {
        self.ground_energy() + 2 * s.len() as i64
    }

    pub fn ground_energy(&self) -> i64 {
        -((self.n_cells() + self.n_faces()) as i64)
    }

    /// Whether `p` and `q` differ by an element of the stabilizer group.
    /// Both must be pure operators of the same kind.
    pub fn equivalent_mod_stabilizers(&self, p: &PauliOp, q: &PauliOp) -> Result<bool> {
        self.check_n(p)?;
        self.check_n(q)?;
        let kind = match (p.pure_kind(), q.pure_kind()) {
            (Some(a), Some(b)) if a == b => a,
            (Some(_), Some(_)) if p.is_identity() || q.is_identity() => {
                if p.is_identity() {
                    q.pure_kind().unwrap()
                } else {
                    p.pure_kind().unwrap()
                }
            }
            _ => return Err(Error::MixedType),
        };
        let diff = p.bits(kind).xor(q.bits(kind));
        Ok(match kind {
            PauliKind::X => self.hx_space.contains(&diff),
            PauliKind::Z => self.hz_space.contains(&diff),
        })
    }
}

/// CSS completion followed by symplectic Gram-Schmidt pairing.
fn logical_pairs(hx: &BitMatrix, hz: &BitMatrix, hx_space: &RowSpace, hz_space: &RowSpace, k: usize) -> (Vec<BitVector>, Vec<BitVector>) {
    let extend = |kernel: BitMatrix, base: &RowSpace| {
        let mut span = base.clone();
        kernel.rows().iter().filter(|v| span.insert(v)).cloned().collect::<Vec<_>>()
    };
    // Z logicals commute with cells: kernel of Hx beyond the face span.
    let mut zs = extend(kernel_basis(hx), hz_space);
    let mut xs = extend(kernel_basis(hz), hx_space);
    debug_assert_eq!(zs.len(), k);
    debug_assert_eq!(xs.len(), k);
    for i in 0..k {
        let found = (i..k).flat_map(|a| (i..k).map(move |b| (a, b))).find(|&(a, b)| xs[a].dot(&zs[b]));
        let (a, b) = found.expect("logical space has a nondegenerate pairing");
        xs.swap(i, a);
        zs.swap(i, b);
        for j in i + 1..k {
            if xs[j].dot(&zs[i]) {
                let xi = xs[i].clone();
                xs[j].xor_assign(&xi);
            }
            if xs[i].dot(&zs[j]) {
                let zi = zs[i].clone();
                zs[j].xor_assign(&zi);
            }
        }
    }
    // Clean the earlier pairs against the later ones.
    for i in (0..k).rev() {
        for j in 0..i {
            if xs[j].dot(&zs[i]) {
                let xi = xs[i].clone();
                xs[j].xor_assign(&xi);
            }
            if xs[i].dot(&zs[j]) {
                let zi = zs[i].clone();
                zs[j].xor_assign(&zi);
            }
        }
    }
    (xs, zs)
}

pub fn code_from_colex(colex: &Colex) -> Result<CssCode> {
    CssCode::from_colex(colex)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub dx: usize,
    pub dz: usize,
    pub d: usize,
    /// A minimum-weight X-type logical representative.
    pub min_x_logical: Vec<usize>,
    pub min_z_logical: Vec<usize>,
    /// Number of kernel elements scanned for X and Z logicals.
    pub scanned: (u64, u64),
}

/// Exhaustive minimum weight of logicals of each type.
///
/// `dz` is the minimum weight over `ker(Hx) \ rowspace(Hz)` and `dx` over
/// `ker(Hz) \ rowspace(Hx)`; each kernel is enumerated in Gray-code order,
/// split across workers by fixing the leading basis coefficients.
pub fn compute_distance(code: &CssCode, cap: u64) -> Result<DistanceReport> {
    if code.k == 0 {
        return Err(Error::LogicalCount(0, "at least one logical qubit"));
    }
    let kz = kernel_basis(&code.hx);
    let kx = kernel_basis(&code.hz);
    for k in [&kz, &kx] {
        if k.n_rows() >= 64 || (1u64 << k.n_rows()) > cap {
            return Err(Error::CapExceeded { dim: k.n_rows(), cap });
        }
    }
    let workers = worker_count();
    let (dz, min_z, scanned_z) = min_weight_outside(&kz, &code.hz_space, workers)?;
    let (dx, min_x, scanned_x) = min_weight_outside(&kx, &code.hx_space, workers)?;
    Ok(DistanceReport {
        dx,
        dz,
        d: dx.min(dz),
        min_x_logical: min_x.iter_ones().collect(),
        min_z_logical: min_z.iter_ones().collect(),
        scanned: (scanned_x, scanned_z),
    })
}

fn min_weight_outside(kernel: &BitMatrix, exclude: &RowSpace, workers: usize) -> Result<(usize, BitVector, u64)> {
    let dim = kernel.n_rows();
    let split = (usize::BITS - (workers.max(1) * 4 - 1).leading_zeros()) as usize;
    let split = split.min(dim);
    let head = BitMatrix::from_rows(kernel.n_cols(), kernel.rows()[..split].to_vec())?;
    let tail = BitMatrix::from_rows(kernel.n_cols(), kernel.rows()[split..].to_vec())?;
    let offsets: Vec<BitVector> = enumerate_span(&head, u64::MAX)?.collect();

    let scan = |offset: &BitVector| -> Result<Option<(usize, BitVector)>> {
        let mut best: Option<(usize, BitVector)> = None;
        for v in enumerate_coset(&tail, offset, u64::MAX)? {
            let w = v.weight();
            if w == 0 || best.as_ref().is_some_and(|(bw, bv)| (w, &v) >= (*bw, bv)) {
                continue;
            }
            if !exclude.contains(&v) {
                best = Some((w, v));
            }
        }
        Ok(best)
    };

    let chunks: Vec<Result<Option<(usize, BitVector)>>> = if workers <= 1 || offsets.len() <= 1 {
        offsets.iter().map(scan).collect()
    } else {
        let per = offsets.len().div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = offsets.chunks(per).map(|group| s.spawn(move || group.iter().map(scan).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("distance worker panicked")).collect()
        })
    };
    let mut best: Option<(usize, BitVector)> = None;
    for c in chunks {
        if let Some(cand) = c? {
            if best.as_ref().is_none_or(|b| (cand.0, &cand.1) < (b.0, &b.1)) {
                best = Some(cand);
            }
        }
    }
    let (w, v) = best.ok_or_else(|| Error::SearchFailed("kernel has no element outside the stabilizer span".into()))?;
    Ok((w, v, 1u64 << dim))
}

/// Result of enumerating the X-stabilizer span and the shared-site lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub passed: bool,
    pub all_weights_mod8_zero: bool,
    pub lemma_shared_sites_ok: bool,
    /// Faces have a multiple of 4 sites and cells a multiple of 8.
    pub face_cell_sizes_ok: bool,
    pub elements_checked: u64,
    /// Weight → number of span elements with that weight.
    pub weight_histogram: BTreeMap<usize, u64>,
    pub pairs_checked: u64,
    /// Distinct shared-site counts `s` observed.
    pub shared_site_values: BTreeSet<usize>,
    pub counterexamples: Vec<String>,
}

/// Checks that every element of the cell span has weight ≡ 0 (mod 8), and
/// that every cell meets every product of the other cells in `s ≡ 0, 4 (mod 8)` sites.
pub fn check_weight_congruence(code: &CssCode, cap: u64) -> Result<CongruenceReport> {
    let basis = code.hx_space.to_matrix();
    let mut histogram = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut elements = 0u64;
    for v in enumerate_span(&basis, cap)? {
        elements += 1;
        let w = v.weight();
        *histogram.entry(w).or_insert(0) += 1;
        if w % 8 != 0 && counterexamples.len() < 16 {
            counterexamples.push(format!("span element {:?} has weight {w}", v.iter_ones().collect::<Vec<_>>()));
        }
    }
    let all_mod8 = histogram.keys().all(|w| w % 8 == 0);

    let m = code.n_cells();
    if m > 0 && (m > 64 || (1u64 << (m - 1)) > cap) {
        return Err(Error::CapExceeded { dim: m - 1, cap });
    }
    let mut pairs = 0u64;
    let mut values = BTreeSet::new();
    let mut lemma_ok = true;
    for c in 0..m {
        let others = BitMatrix::from_rows(code.n, (0..m).filter(|&j| j != c).map(|j| code.hx.row(j).clone()).collect())?;
        let cell = code.hx.row(c);
        // Gray-code walk over all subsets of the other rows (rows may be dependent).
        let mut pi = BitVector::zeros(code.n);
        let total = if m == 0 { 0 } else { 1u64 << (m - 1) };
        for idx in 0..total {
            if idx > 0 {
                pi.xor_assign(others.row(idx.trailing_zeros() as usize));
            }
            pairs += 1;
            let s = pi.overlap(cell);
            values.insert(s);
            let step_ok = pi.xor(cell).weight() == pi.weight() + cell.weight() - 2 * s;
            if !s.is_multiple_of(8) && s % 8 != 4 || !step_ok {
                lemma_ok = false;
                if counterexamples.len() < 32 {
                    counterexamples.push(format!("cell {c} shares {s} sites with product {:?}", pi.iter_ones().collect::<Vec<_>>()));
                }
            }
        }
    }
    let sizes_ok = code.hz.rows().iter().all(|r| r.weight() % 4 == 0) && code.hx.rows().iter().all(|r| r.weight() % 8 == 0);
    Ok(CongruenceReport {
        passed: all_mod8 && lemma_ok && counterexamples.is_empty(),
        all_weights_mod8_zero: all_mod8,
        lemma_shared_sites_ok: lemma_ok,
        face_cell_sizes_ok: sizes_ok,
        elements_checked: elements,
        weight_histogram: histogram,
        pairs_checked: pairs,
        shared_site_values: values,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalMapCheck {
    pub name: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnotReport {
    pub passed: bool,
    pub stabilizer_images_checked: usize,
    pub stabilizer_images_in_group: usize,
    pub logical_maps: Vec<LogicalMapCheck>,
}

/// Checks that the pairwise CNOT between two copies of a single-qubit code
/// preserves the doubled stabilizer group and acts as a logical CNOT.
pub fn verify_transversal_cnot(code: &CssCode) -> Result<CnotReport> {
    if code.k != 1 {
        return Err(Error::LogicalCount(code.k, "exactly one logical qubit"));
    }
    let doubled = CssCode::from_checks(code.hx.direct_sum(&code.hx), code.hz.direct_sum(&code.hz))?;
    let id = PauliOp::identity(code.n);
    let mut checked = 0;
    let mut in_group = 0;
    for g in code.generators() {
        for lifted in [g.tensor(&id), id.tensor(&g)] {
            checked += 1;
            if doubled.is_stabilizer(&lifted.conjugate_by_transversal_cnot()?)? {
                in_group += 1;
            }
        }
    }
    let (xl, zl) = (&code.logical_x[0], &code.logical_z[0]);
    let cases: [(&'static str, PauliOp, PauliOp); 4] = [
        ("XI->XX", xl.tensor(&id), xl.tensor(xl)),
        ("IX->IX", id.tensor(xl), id.tensor(xl)),
        ("ZI->ZI", zl.tensor(&id), zl.tensor(&id)),
        ("IZ->ZZ", id.tensor(zl), zl.tensor(zl)),
    ];
    let mut maps = Vec::new();
    for (name, input, expected) in cases {
        let image = input.conjugate_by_transversal_cnot()?;
        let ok = image.phase() == expected.phase()
            && doubled.hx_space.contains(&image.x_bits().xor(expected.x_bits()))
            && doubled.hz_space.contains(&image.z_bits().xor(expected.z_bits()));
        maps.push(LogicalMapCheck { name, ok });
    }
    Ok(CnotReport {
        passed: checked == in_group && maps.iter().all(|m| m.ok),
        stabilizer_images_checked: checked,
        stabilizer_images_in_group: in_group,
        logical_maps: maps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerCounts {
    pub cells: usize,
    pub faces: usize,
    pub rank_x: usize,
    pub rank_z: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalWeights {
    pub x: Vec<usize>,
    pub z: Vec<usize>,
    pub min_x: Option<usize>,
    pub min_z: Option<usize>,
}

/// The `code-report` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    pub dx: Option<usize>,
    pub dz: Option<usize>,
    pub d: Option<usize>,
    pub paper_claim_d: Option<usize>,
    /// `AGREES`/`DISAGREES` against the published claim, when one applies.
    pub agrees: Option<&'static str>,
    pub stabilizer_counts: StabilizerCounts,
    pub logical_weights: LogicalWeights,
}

impl CodeReport {
    /// `claim` is the published distance to compare against, if any.
    pub fn new(code: &CssCode, distance: Option<&DistanceReport>, claim: Option<usize>) -> CodeReport {
        let agrees = match (distance, claim) {
            (Some(d), Some(c)) => Some(if d.d == c { "AGREES" } else { "DISAGREES" }),
            _ => None,
        };
        CodeReport {
            n: code.n,
            k: code.k,
            dx: distance.map(|d| d.dx),
            dz: distance.map(|d| d.dz),
            d: distance.map(|d| d.d),
            paper_claim_d: claim,
            agrees,
            stabilizer_counts: StabilizerCounts {
                cells: code.n_cells(),
                faces: code.n_faces(),
                rank_x: code.hx_space.dim(),
                rank_z: code.hz_space.dim(),
            },
            logical_weights: LogicalWeights {
                x: code.logical_x.iter().map(PauliOp::weight).collect(),
                z: code.logical_z.iter().map(PauliOp::weight).collect(),
                min_x: distance.map(|d| d.dx),
                min_z: distance.map(|d| d.dz),
            },
        }
    }
}

/// `rank(Hx) + rank(Hz)`, the number of independent generators.
pub fn independent_generators(code: &CssCode) -> usize {
    rank(&code.hx) + rank(&code.hz)
}
