//! Syndrome-lookup decoding and Monte Carlo logical error rates.
//!
//! X and Z errors are decoded independently. X errors flip face checks and
//! are looked up in a table keyed by the face syndrome; Z errors flip cell
//! checks and use a table keyed by the cell syndrome. Tables hold a
//! minimal-weight representative for every error of weight at most
//! `t = ⌊(d−1)/2⌋`; a second table extends this to weight `t + 2` for
//! best-effort decoding, and anything beyond falls back to a GF(2) solve.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{CssCode, Syndrome};
use crate::error::{Error, Result};
use crate::gf2::{solve_row_combination, BitMatrix, BitVector, RowSpace};
use crate::parallel::worker_count;
use crate::pauli::{PauliKind, PauliOp};

/// Largest number of error patterns enumerated per table.
pub const TABLE_CAP: u64 = 1 << 22;

/// Fixed shard count for Monte Carlo; results do not depend on worker count.
pub const SHARDS: u64 = 64;

/// Generator identifier recorded in every report.
pub const RNG_ID: &str = "chacha8/rand_chacha-0.9/seed_from_u64+stream(grid<<32|shard)";

/// Table for one error kind.
#[derive(Clone, Debug)]
struct Table {
    /// Checks the errors flip: `Hz` for X errors, `Hx` for Z errors.
    checks: BitMatrix,
    checks_t: BitMatrix,
    exact: HashMap<BitVector, BitVector>,
    extended: HashMap<BitVector, BitVector>,
}

#[derive(Clone, Debug)]
pub struct LookupDecoder {
    n: usize,
    t: usize,
    x: Table,
    z: Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub correction: PauliOp,
    /// The syndrome was outside the weight-`t` guarantee.
    pub best_effort: bool,
}

fn patterns_up_to(n: usize, w: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for k in 0..=w.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - k) as u64) / (k as u64 + 1);
    }
    total
}

impl Table {
    /// `stabilizers` is the span whose elements act trivially on the code space.
    fn build(n: usize, checks: &BitMatrix, stabilizers: &RowSpace, t: usize) -> Result<Table> {
        let mut exact: HashMap<BitVector, BitVector> = HashMap::new();
        for w in 0..=t.min(n) {
            for support in (0..n).combinations(w) {
                let e = BitVector::from_indices(n, support);
                let s = checks.mul_vec(&e)?;
                match exact.get(&s) {
                    Some(prev) => {
                        if !stabilizers.contains(&prev.xor(&e)) {
                            return Err(Error::Collision { weight: w, t });
                        }
                    }
                    None => {
                        exact.insert(s, e);
                    }
                }
            }
        }
        let mut extended = HashMap::new();
        let reach = (t + 2).min(n);
        if patterns_up_to(n, reach) <= TABLE_CAP {
            for w in t + 1..=reach {
                for support in (0..n).combinations(w) {
                    let e = BitVector::from_indices(n, support);
                    let s = checks.mul_vec(&e)?;
                    if !exact.contains_key(&s) {
                        extended.entry(s).or_insert(e);
                    }
                }
            }
        }
        Ok(Table { checks: checks.clone(), checks_t: checks.transpose(), exact, extended })
    }

    fn decode(&self, syndrome: &BitVector) -> (BitVector, bool) {
        if let Some(e) = self.exact.get(syndrome) {
            return (e.clone(), false);
        }
        if let Some(e) = self.extended.get(syndrome) {
            return (e.clone(), true);
        }
        let n = self.checks.n_cols();
        let e = solve_row_combination(&self.checks_t, syndrome).ok().flatten().unwrap_or_else(|| BitVector::zeros(n));
        (e, true)
    }
}

impl LookupDecoder {
    /// Builds both tables for distance `d`. A collision between two
    /// inequivalent patterns of weight at most `t` means `d` is overstated.
    pub fn build(code: &CssCode, d: usize) -> Result<LookupDecoder> {
        if code.k() != 1 {
            return Err(Error::LogicalCount(code.k(), "exactly one logical qubit"));
        }
        let n = code.n();
        let t = d.saturating_sub(1) / 2;
        let count = patterns_up_to(n, t);
        if count > TABLE_CAP {
            return Err(Error::CapExceeded { dim: t, cap: TABLE_CAP });
        }
        let x = Table::build(n, code.hz(), code.hx_space(), t)?;
        let z = Table::build(n, code.hx(), code.hz_space(), t)?;
        Ok(LookupDecoder { n, t, x, z })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct syndromes keyed in the exact tables, X then Z.
    pub fn table_sizes(&self) -> (usize, usize) {
        (self.x.exact.len(), self.z.exact.len())
    }

    /// Correction for bit flips (X errors) from the face syndrome.
    pub fn decode_x_errors(&self, face_syndrome: &BitVector) -> (BitVector, bool) {
        self.x.decode(face_syndrome)
    }

    /// Correction for phase flips (Z errors) from the cell syndrome.
    pub fn decode_z_errors(&self, cell_syndrome: &BitVector) -> (BitVector, bool) {
        self.z.decode(cell_syndrome)
    }

    pub fn decode(&self, s: &Syndrome) -> Result<Decoded> {
        let faces = self.x.checks.n_rows();
        let cells = self.z.checks.n_rows();
        if let Some(&bad) = s.face_defects.iter().find(|&&f| f >= faces) {
            return Err(Error::IndexOutOfRange { index: bad, len: faces });
        }
        if let Some(&bad) = s.cell_defects.iter().find(|&&c| c >= cells) {
            return Err(Error::IndexOutOfRange { index: bad, len: cells });
        }
        let (x, bx) = self.x.decode(&BitVector::from_indices(faces, s.face_defects.iter().copied()));
        let (z, bz) = self.z.decode(&BitVector::from_indices(cells, s.cell_defects.iter().copied()));
        Ok(Decoded { correction: PauliOp::new(x, z, 0)?, best_effort: bx || bz })
    }
}

pub fn build_lookup(code: &CssCode, d: usize) -> Result<LookupDecoder> {
    LookupDecoder::build(code, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub raw: BitVector,
    pub decoded: bool,
    pub best_effort: bool,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Random element of the span of `basis` rows.
fn random_codeword<R: Rng>(basis: &RowSpace, n: usize, rng: &mut R) -> BitVector {
    let mut v = BitVector::zeros(n);
    for row in basis.basis() {
        if rng.random::<bool>() {
            v.xor_assign(row);
        }
    }
    v
}

/// Destructive single-qubit measurement of every qubit in `basis`.
///
/// In the Z basis the outcome is a uniform codeword of the cell span, shifted
/// by `X̄` for logical 1; bit flips are decoded from the face syndrome and the
/// logical value is the parity against `Z̄`. The X basis is the same with the
/// roles of cells and faces exchanged.
pub fn simulate_measurement<R: Rng>(
    code: &CssCode,
    dec: &LookupDecoder,
    logical: bool,
    p: f64,
    basis: PauliKind,
    rng: &mut R,
) -> Result<Measurement> {
    check_probability(p)?;
    let n = code.n();
    let (span, shift, readout) = match basis {
        PauliKind::Z => (code.hx_space(), code.logical_x()[0].x_bits(), code.logical_z()[0].z_bits()),
        PauliKind::X => (code.hz_space(), code.logical_z()[0].z_bits(), code.logical_x()[0].x_bits()),
    };
    let mut raw = random_codeword(span, n, rng);
    if logical {
        raw.xor_assign(shift);
    }
    if p > 0.0 {
        for i in 0..n {
            if rng.random_bool(p) {
                raw.flip(i);
            }
        }
    }
    let (decoded, best_effort) = decode_readout(code, dec, &raw, basis, readout)?;
    Ok(Measurement { raw, decoded, best_effort })
}

fn decode_readout(code: &CssCode, dec: &LookupDecoder, raw: &BitVector, basis: PauliKind, readout: &BitVector) -> Result<(bool, bool)> {
    let (correction, best_effort) = match basis {
        PauliKind::Z => dec.decode_x_errors(&code.hz().mul_vec(raw)?),
        PauliKind::X => dec.decode_z_errors(&code.hx().mul_vec(raw)?),
    };
    Ok((raw.xor(&correction).dot(readout), best_effort))
}

/// Decodes a deterministic flip pattern applied to a codeword of `logical`.
pub fn decode_injected(code: &CssCode, dec: &LookupDecoder, logical: bool, basis: PauliKind, flips: &BitVector) -> Result<bool> {
    let (shift, readout) = match basis {
        PauliKind::Z => (code.logical_x()[0].x_bits(), code.logical_z()[0].z_bits()),
        PauliKind::X => (code.logical_z()[0].z_bits(), code.logical_x()[0].x_bits()),
    };
    let mut raw = flips.clone();
    if logical {
        raw.xor_assign(shift);
    }
    Ok(decode_readout(code, dec, &raw, basis, readout)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub seed: u64,
    pub rng_id: &'static str,
    pub best_effort_count: u64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    failures: u64,
    best_effort: u64,
}

/// One generator per (grid point, shard).
pub fn shard_rng(seed: u64, grid_index: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((grid_index << 32) | shard);
    rng
}

/// Each trial draws a random logical value and measures it in both bases;
/// the trial fails if either readout is wrong.
fn run_shard(code: &CssCode, dec: &LookupDecoder, compact: Option<&Compact>, p: f64, trials: u64, rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for _ in 0..trials {
        let logical = rng.random::<bool>();
        let (z, x) = match compact {
            Some(c) => (c.z.measure(logical, p, rng), c.x.measure(logical, p, rng)),
            None => {
                let z = simulate_measurement(code, dec, logical, p, PauliKind::Z, rng)?;
                let x = simulate_measurement(code, dec, logical, p, PauliKind::X, rng)?;
                ((z.decoded, z.best_effort), (x.decoded, x.best_effort))
            }
        };
        if z.0 != logical || x.0 != logical {
            tally.failures += 1;
        }
        tally.best_effort += z.1 as u64 + x.1 as u64;
    }
    Ok(tally)
}

/// Largest qubit and check counts for the word-packed sampler.
const COMPACT_LIMIT: usize = 20;

fn word(v: &BitVector) -> u64 {
    v.iter_ones().fold(0, |acc, i| acc | 1 << i)
}

/// One measurement basis packed into machine words, with the decoder
/// tabulated over every reachable syndrome. Consumes the generator exactly
/// like [`simulate_measurement`], so both paths give identical results.
struct CompactBasis {
    n: usize,
    span: Vec<u64>,
    shift: u64,
    readout: u64,
    checks: Vec<u64>,
    table: Vec<(u64, bool)>,
}

struct Compact {
    z: CompactBasis,
    x: CompactBasis,
}

impl CompactBasis {
    fn new(code: &CssCode, dec: &LookupDecoder, basis: PauliKind) -> CompactBasis {
        let (span, shift, readout, checks) = match basis {
            PauliKind::Z => (code.hx_space(), code.logical_x()[0].x_bits(), code.logical_z()[0].z_bits(), code.hz()),
            PauliKind::X => (code.hz_space(), code.logical_z()[0].z_bits(), code.logical_x()[0].x_bits(), code.hx()),
        };
        let n = code.n();
        let rows: Vec<u64> = checks.rows().iter().map(word).collect();
        let mut table = vec![(0, false); 1 << rows.len()];
        let mut filled = vec![false; 1 << rows.len()];
        for e in 0..1u64 << n {
            let s = syndrome_word(&rows, e);
            if !filled[s] {
                filled[s] = true;
                let sv = BitVector::from_u64(rows.len(), s as u64);
                let (c, best_effort) = match basis {
                    PauliKind::Z => dec.decode_x_errors(&sv),
                    PauliKind::X => dec.decode_z_errors(&sv),
                };
                table[s] = (word(&c), best_effort);
            }
        }
        CompactBasis { n, span: span.basis().map(word).collect(), shift: word(shift), readout: word(readout), checks: rows, table }
    }

    fn measure(&self, logical: bool, p: f64, rng: &mut ChaCha8Rng) -> (bool, bool) {
        let mut raw = 0u64;
        for &row in &self.span {
            if rng.random::<bool>() {
                raw ^= row;
            }
        }
        if logical {
            raw ^= self.shift;
        }
        if p > 0.0 {
            for i in 0..self.n {
                if rng.random_bool(p) {
                    raw ^= 1 << i;
                }
            }
        }
        let (c, best_effort) = self.table[syndrome_word(&self.checks, raw)];
        (((raw ^ c) & self.readout).count_ones() % 2 == 1, best_effort)
    }
}

fn syndrome_word(rows: &[u64], e: u64) -> usize {
    rows.iter().enumerate().fold(0, |acc, (i, r)| acc | (((r & e).count_ones() as usize) & 1) << i)
}

impl Compact {
    fn new(code: &CssCode, dec: &LookupDecoder) -> Option<Compact> {
        let small = code.n() <= COMPACT_LIMIT && code.n_faces() <= COMPACT_LIMIT && code.n_cells() <= COMPACT_LIMIT;
        small.then(|| Compact { z: CompactBasis::new(code, dec, PauliKind::Z), x: CompactBasis::new(code, dec, PauliKind::X) })
    }
}

/// Logical failure rates over a grid of physical error probabilities.
/// Deterministic for a fixed seed regardless of worker count.
pub fn monte_carlo(code: &CssCode, dec: &LookupDecoder, grid: &[f64], trials: u64, seed: u64) -> Result<Vec<MonteCarloReport>> {
    for &p in grid {
        check_probability(p)?;
    }
    let workers = worker_count().min(SHARDS as usize).max(1);
    let compact = Compact::new(code, dec);
    let mut reports = Vec::with_capacity(grid.len());
    for (gi, &p) in grid.iter().enumerate() {
        let next = AtomicUsize::new(0);
        let mut tallies = vec![Tally::default(); SHARDS as usize];
        let results: Vec<Result<Vec<(usize, Tally)>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut out = Vec::new();
                        loop {
                            let shard = next.fetch_add(1, Ordering::Relaxed);
                            if shard >= SHARDS as usize {
                                break;
                            }
                            let count = trials / SHARDS + u64::from((shard as u64) < trials % SHARDS);
                            let mut rng = shard_rng(seed, gi as u64, shard as u64);
                            out.push((shard, run_shard(code, dec, compact.as_ref(), p, count, &mut rng)?));
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("monte carlo worker panicked")).collect()
        });
        for r in results {
            for (shard, t) in r? {
                tallies[shard] = t;
            }
        }
        let failures: u64 = tallies.iter().map(|t| t.failures).sum();
        let best_effort_count = tallies.iter().map(|t| t.best_effort).sum();
        reports.push(MonteCarloReport {
            p,
            trials,
            failures,
            rate: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
            seed,
            rng_id: RNG_ID,
            best_effort_count,
        });
    }
    Ok(reports)
}

/// Log-log slope of the failure rate between two reports, if both are nonzero.
pub fn log_log_slope(lo: &MonteCarloReport, hi: &MonteCarloReport) -> Option<f64> {
    (lo.rate > 0.0 && hi.rate > 0.0).then(|| (hi.rate.ln() - lo.rate.ln()) / (hi.p.ln() - lo.p.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::compute_distance;
    use crate::colex::build_tesseract;
    use crate::gf2::DEFAULT_ENUMERATION_CAP;

    fn tetra() -> CssCode {
        CssCode::from_colex(&build_tesseract().puncture(0).unwrap()).unwrap()
    }

    fn decoder(code: &CssCode) -> LookupDecoder {
        let d = compute_distance(code, DEFAULT_ENUMERATION_CAP).unwrap().d;
        build_lookup(code, d).unwrap()
    }

    #[test]
    fn computed_distance_builds_without_collision() {
        let code = tetra();
        let dec = decoder(&code);
        assert_eq!(dec.t(), 1);
        assert_eq!(dec.table_sizes(), (16, 16));
    }

    #[test]
    fn overstated_distance_collides() {
        assert!(matches!(build_lookup(&tetra(), 5), Err(Error::Collision { weight: 2, t: 2 })));
    }

    #[test]
    fn weight_zero_and_single_errors() {
        let code = tetra();
        let dec = decoder(&code);
        let d = dec.decode(&Syndrome::default()).unwrap();
        assert!(d.correction.is_identity() && !d.best_effort);
        let e = PauliOp::single(PauliKind::X, 3, 15).unwrap();
        let d = dec.decode(&code.syndrome(&e).unwrap()).unwrap();
        assert!(code.is_stabilizer(&d.correction.multiply(&e).unwrap()).unwrap());
        assert!(!d.best_effort);
    }

    #[test]
    fn every_correctable_error_is_corrected() {
        let code = tetra();
        let dec = decoder(&code);
        for kind in [PauliKind::X, PauliKind::Z] {
            for w in 0..=dec.t() {
                for support in (0..15).combinations(w) {
                    let e = PauliOp::from_support(kind, support, 15).unwrap();
                    let d = dec.decode(&code.syndrome(&e).unwrap()).unwrap();
                    let residual = d.correction.multiply(&e).unwrap();
                    assert!(code.is_stabilizer(&PauliOp::new(residual.x_bits().clone(), residual.z_bits().clone(), 0).unwrap()).unwrap());
                    assert!(!d.best_effort);
                }
            }
        }
    }

    #[test]
    fn corrections_have_the_requested_syndrome() {
        let code = tetra();
        let dec = decoder(&code);
        for support in (0..15).combinations(3) {
            let e = PauliOp::from_support(PauliKind::X, support, 15).unwrap();
            let s = code.syndrome(&e).unwrap();
            let d = dec.decode(&s).unwrap();
            assert_eq!(code.syndrome(&d.correction).unwrap(), s);
        }
    }

    #[test]
    fn heavier_errors_are_best_effort() {
        let code = tetra();
        let dec = decoder(&code);
        let e = PauliOp::from_support(PauliKind::X, [0, 5], 15).unwrap();
        let s = code.syndrome(&e).unwrap();
        assert!(dec.decode(&s).unwrap().best_effort);
    }

    #[test]
    fn noiseless_measurement_reads_logical() {
        let code = tetra();
        let dec = decoder(&code);
        let mut rng = shard_rng(1, 0, 0);
        for logical in [false, true] {
            for basis in [PauliKind::Z, PauliKind::X] {
                for _ in 0..20 {
                    let m = simulate_measurement(&code, &dec, logical, 0.0, basis, &mut rng).unwrap();
                    assert_eq!(m.decoded, logical);
                }
            }
        }
        assert!(matches!(simulate_measurement(&code, &dec, false, 0.5, PauliKind::Z, &mut rng), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn injected_correctable_flips_decode() {
        let code = tetra();
        let dec = decoder(&code);
        for basis in [PauliKind::Z, PauliKind::X] {
            for logical in [false, true] {
                for w in 0..=dec.t() {
                    for support in (0..15).combinations(w) {
                        let flips = BitVector::from_indices(15, support);
                        assert_eq!(decode_injected(&code, &dec, logical, basis, &flips).unwrap(), logical);
                    }
                }
            }
        }
    }

    #[test]
    fn monte_carlo_edge_cases() {
        let code = tetra();
        let dec = decoder(&code);
        let r = monte_carlo(&code, &dec, &[0.0], 500, 7).unwrap();
        assert_eq!(r[0].failures, 0);
        let r = monte_carlo(&code, &dec, &[0.01], 0, 7).unwrap();
        assert_eq!((r[0].trials, r[0].failures, r[0].rate), (0, 0, 0.0));
        assert!(monte_carlo(&code, &dec, &[0.6], 10, 7).is_err());
        assert!(monte_carlo(&code, &dec, &[], 10, 7).unwrap().is_empty());
    }

    #[test]
    fn monte_carlo_is_reproducible_and_monotone() {
        let code = tetra();
        let dec = decoder(&code);
        let a = monte_carlo(&code, &dec, &[0.01, 0.05], 20_000, 42).unwrap();
        let b = monte_carlo(&code, &dec, &[0.01, 0.05], 20_000, 42).unwrap();
        assert_eq!(a, b);
        assert!(a[0].rate < a[1].rate);
        assert_eq!(a[0].rng_id, RNG_ID);
    }

    #[test]
    fn packed_sampler_matches_generic_path() {
        let code = tetra();
        let dec = decoder(&code);
        let compact = Compact::new(&code, &dec).unwrap();
        for p in [0.0, 0.03, 0.2] {
            let a = run_shard(&code, &dec, None, p, 3000, &mut shard_rng(5, 1, 2)).unwrap();
            let b = run_shard(&code, &dec, Some(&compact), p, 3000, &mut shard_rng(5, 1, 2)).unwrap();
            assert_eq!((a.failures, a.best_effort), (b.failures, b.best_effort));
        }
    }

    #[test]
    fn slope_of_rates() {
        let mk = |p, rate| MonteCarloReport { p, trials: 1, failures: 0, rate, seed: 0, rng_id: RNG_ID, best_effort_count: 0 };
        let s = log_log_slope(&mk(0.01, 1e-4), &mk(0.1, 1e-2)).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!(log_log_slope(&mk(0.01, 0.0), &mk(0.1, 0.5)).is_none());
    }
}
