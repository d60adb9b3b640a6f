//! Dense state vectors for up to 20 qubits.
//!
//! Basis index bit `i` is the value of qubit `i`. The phase gate used
//! transversally is `K^{1/2} = diag(1, e^{iπ/4})`; its action on a basis
//! state of weight `w` is the phase `e^{iπw/4}`, which is applied from an
//! exact table of eighth roots of unity so repeated application does not
//! accumulate rounding.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::code::{check_weight_congruence, CssCode};
use crate::error::{Error, Result};
use crate::gf2::{enumerate_span, BitVector, DEFAULT_ENUMERATION_CAP};
use crate::pauli::PauliOp;

pub const MAX_QUBITS: usize = 20;

/// Amplitude comparisons.
pub const AMPLITUDE_TOL: f64 = 1e-10;
/// Norm checks.
pub const NORM_TOL: f64 = 1e-12;

/// `e^{iπk/4}` for k = 0..8.
fn eighth_root(k: usize) -> Complex64 {
    const H: f64 = FRAC_1_SQRT_2;
    let (re, im) = [(1.0, 0.0), (H, H), (0.0, 1.0), (-H, H), (-1.0, 0.0), (-H, -H), (0.0, -1.0), (H, -H)][k % 8];
    Complex64::new(re, im)
}

fn i_power(k: u8) -> Complex64 {
    eighth_root(2 * k as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn basis_index(v: &BitVector) -> usize {
    v.iter_ones().fold(0, |acc, i| acc | 1 << i)
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<StateVector> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, cap: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<StateVector> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, cap: MAX_QUBITS });
        }
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, actual: amps.len() });
        }
        let mut s = StateVector { n, amps };
        s.normalize();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: &BitVector) -> Complex64 {
        self.amps[basis_index(basis)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    /// Nonzero amplitudes in basis-index order.
    pub fn nonzero(&self) -> Vec<(usize, Complex64)> {
        self.amps.iter().enumerate().filter(|(_, a)| a.norm() > AMPLITUDE_TOL).map(|(i, a)| (i, *a)).collect()
    }

    /// Largest amplitude difference to `other`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Nonzero amplitudes as JSON-friendly records.
    pub fn dump(&self) -> Vec<AmplitudeRecord> {
        self.nonzero().into_iter().map(|(index, a)| AmplitudeRecord { index, re: a.re, im: a.im }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeRecord {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

/// `i^phase X^x Z^z |ψ⟩`.
pub fn apply_pauli(state: &StateVector, p: &PauliOp) -> Result<StateVector> {
    if p.n() != state.n {
        return Err(Error::LengthMismatch { expected: state.n, actual: p.n() });
    }
    let x = basis_index(p.x_bits());
    let z = basis_index(p.z_bits());
    let global = i_power(p.phase());
    let mut out = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for (v, a) in state.amps.iter().enumerate() {
        let sign = if (v & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[v ^ x] = global * sign * a;
    }
    Ok(StateVector { n: state.n, amps: out })
}

/// `⟨a|b⟩`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n != b.n {
        return Err(Error::LengthMismatch { expected: a.n, actual: b.n });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `⟨ψ|P|ψ⟩`.
pub fn expectation(state: &StateVector, p: &PauliOp) -> Result<Complex64> {
    overlap(state, &apply_pauli(state, p)?)
}

/// Every cell and face generator has expectation +1.
pub fn check_ground_conditions(state: &StateVector, code: &CssCode) -> Result<bool> {
    for g in code.generators() {
        if (expectation(state, &g)? - Complex64::new(1.0, 0.0)).norm() > AMPLITUDE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⟨ψ|H|ψ⟩` for `H = -Σ_c B_c^X - Σ_f B_f^Z`.
pub fn energy_expectation(state: &StateVector, code: &CssCode) -> Result<f64> {
    let mut e = 0.0;
    for g in code.generators() {
        e -= expectation(state, &g)?.re;
    }
    Ok(e)
}

fn require_single_logical(code: &CssCode) -> Result<()> {
    if code.k() != 1 {
        return Err(Error::LogicalCount(code.k(), "exactly one logical qubit"));
    }
    if code.n() > MAX_QUBITS {
        return Err(Error::TooManyQubits { n: code.n(), cap: MAX_QUBITS });
    }
    Ok(())
}

/// `|0̂⟩`: the uniform superposition over the span of the cell rows.
pub fn encode_zero(code: &CssCode) -> Result<StateVector> {
    require_single_logical(code)?;
    let basis = code.hx_space().to_matrix();
    let size = 1u64 << basis.n_rows();
    let amp = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << code.n()];
    for v in enumerate_span(&basis, DEFAULT_ENUMERATION_CAP)? {
        amps[basis_index(&v)] = amp;
    }
    Ok(StateVector { n: code.n(), amps })
}

/// `|1̂⟩ = X̄|0̂⟩`.
pub fn encode_one(code: &CssCode) -> Result<StateVector> {
    apply_pauli(&encode_zero(code)?, &code.logical_x()[0])
}

/// `(K^{1/2})^{⊗n}` applied `repetitions` times.
pub fn apply_transversal_k_half(state: &StateVector, repetitions: usize) -> StateVector {
    let r = repetitions % 8;
    let amps = state.amps.iter().enumerate().map(|(v, a)| a * eighth_root(v.count_ones() as usize * r)).collect();
    StateVector { n: state.n, amps }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalPhaseReport {
    pub passed: bool,
    pub n: usize,
    /// `n mod 8`.
    pub l: usize,
    /// Repetitions `r` with `r·l ≡ 1 (mod 8)`.
    pub repetitions: usize,
    /// Phase on `|1̂⟩` after one application, in units of π/4.
    pub single_application_phase_eighths: Option<usize>,
    pub zero_fixed_deviation: f64,
    pub one_phase_deviation: f64,
    /// Amplitude deviation / infidelity of the logical action on |0̂⟩, |1̂⟩, |+̂⟩.
    pub logical_deviation: [f64; 3],
    pub logical_infidelity: [f64; 3],
}

/// The repetition count turning `l` into 1 modulo 8, for odd `l`.
pub fn inverse_mod8(l: usize) -> Option<usize> {
    (1..8).find(|r| (r * l) % 8 == 1)
}

/// Checks that the transversal phase gate acts on the code as a logical gate
/// and that `r` repetitions implement logical `K^{1/2}`.
pub fn verify_transversal_t(code: &CssCode) -> Result<TransversalPhaseReport> {
    require_single_logical(code)?;
    let congruence = check_weight_congruence(code, DEFAULT_ENUMERATION_CAP)?;
    if !congruence.all_weights_mod8_zero {
        return Err(Error::CongruenceViolated);
    }
    let n = code.n();
    let l = n % 8;
    let r = inverse_mod8(l).ok_or(Error::LogicalCount(code.k(), "odd n"))?;

    let zero = encode_zero(code)?;
    let one = encode_one(code)?;

    let once_zero = apply_transversal_k_half(&zero, 1);
    let once_one = apply_transversal_k_half(&one, 1);
    let expected_one = scale(&one, eighth_root(l));
    let zero_fixed = once_zero.max_deviation(&zero);
    let one_phase = once_one.max_deviation(&expected_one);
    let phase = measured_phase_eighths(&one, &once_one);

    let plus = superpose(&zero, &one, eighth_root(0));
    let inputs = [&zero, &one, &plus];
    let expected = [zero.clone(), scale(&one, eighth_root(1)), superpose(&zero, &one, eighth_root(1))];
    let mut deviation = [0.0; 3];
    let mut infidelity = [0.0; 3];
    for i in 0..3 {
        let out = apply_transversal_k_half(inputs[i], r);
        deviation[i] = out.max_deviation(&expected[i]);
        infidelity[i] = 1.0 - overlap(&expected[i], &out)?.norm_sqr();
    }
    let passed = zero_fixed < AMPLITUDE_TOL
        && one_phase < AMPLITUDE_TOL
        && deviation.iter().all(|&d| d < AMPLITUDE_TOL)
        && infidelity.iter().all(|&d| d.abs() < AMPLITUDE_TOL);
    Ok(TransversalPhaseReport {
        passed,
        n,
        l,
        repetitions: r,
        single_application_phase_eighths: phase,
        zero_fixed_deviation: zero_fixed,
        one_phase_deviation: one_phase,
        logical_deviation: deviation,
        logical_infidelity: infidelity,
    })
}

fn scale(s: &StateVector, c: Complex64) -> StateVector {
    StateVector { n: s.n, amps: s.amps.iter().map(|a| a * c).collect() }
}

/// `(|a⟩ + c|b⟩)/√2`.
fn superpose(a: &StateVector, b: &StateVector, c: Complex64) -> StateVector {
    let amps = a.amps.iter().zip(&b.amps).map(|(x, y)| (x + c * y) * FRAC_1_SQRT_2).collect();
    StateVector { n: a.n, amps }
}

/// The eighth root `k` with `after ≈ e^{iπk/4}·before`, if one matches.
fn measured_phase_eighths(before: &StateVector, after: &StateVector) -> Option<usize> {
    let ov = overlap(before, after).ok()?;
    (0..8).find(|&k| (ov - eighth_root(k)).norm() < AMPLITUDE_TOL)
}
