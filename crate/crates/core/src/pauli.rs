//! Pauli operators in the binary symplectic representation.
//!
//! An operator on `n` qubits is stored as `i^phase · X^x · Z^z`, where on each
//! qubit the X factor is written to the left of the Z factor. Under this
//! convention the product `X₀ · Z₀` is stored with phase 0 and both support
//! bits set, and equals `-i·Y₀`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Which single-qubit Pauli an operator built from a support set uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliKind {
    X,
    Z,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVector,
    z: BitVector,
    phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp { x: BitVector::zeros(n), z: BitVector::zeros(n), phase: 0 }
    }

    pub fn new(x: BitVector, z: BitVector, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch { expected: x.len(), actual: z.len() });
        }
        Ok(PauliOp { x, z, phase: phase % 4 })
    }

    /// `B_S^X` or `B_S^Z`: the chosen Pauli on every qubit of `sites`.
    pub fn from_support<I: IntoIterator<Item = usize>>(kind: PauliKind, sites: I, n: usize) -> Result<Self> {
        let mut v = BitVector::zeros(n);
        for s in sites {
            if s >= n {
                return Err(Error::IndexOutOfRange { index: s, len: n });
            }
            v.set(s, true);
        }
        Ok(Self::from_bits(kind, v))
    }

    pub fn from_bits(kind: PauliKind, bits: BitVector) -> Self {
        let zero = BitVector::zeros(bits.len());
        match kind {
            PauliKind::X => PauliOp { x: bits, z: zero, phase: 0 },
            PauliKind::Z => PauliOp { x: zero, z: bits, phase: 0 },
        }
    }

    /// The transversal operator `O^{⊗n}` for O = X or Z.
    pub fn transversal(kind: PauliKind, n: usize) -> Self {
        Self::from_bits(kind, BitVector::ones(n))
    }

    pub fn single(kind: PauliKind, site: usize, n: usize) -> Result<Self> {
        Self::from_support(kind, [site], n)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    /// Power of `i` in front of `X^x Z^z`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.x.weight() + self.z.weight() - self.x.overlap(&self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// `Some(kind)` when the operator has support of only one type (identity counts as both; reported as X).
    pub fn pure_kind(&self) -> Option<PauliKind> {
        match (self.x.is_zero(), self.z.is_zero()) {
            (_, true) => Some(PauliKind::X),
            (true, false) => Some(PauliKind::Z),
            (false, false) => None,
        }
    }

    /// Support bits for a pure operator of the given kind.
    pub fn bits(&self, kind: PauliKind) -> &BitVector {
        match kind {
            PauliKind::X => &self.x,
            PauliKind::Z => &self.z,
        }
    }

    fn check_size(&self, other: &PauliOp) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: other.n() });
        }
        Ok(())
    }

    /// Symplectic test: `⟨P.x, Q.z⟩ + ⟨P.z, Q.x⟩ = 0 (mod 2)`.
    pub fn commutes(&self, other: &PauliOp) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        self.check_size(other)?;
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1
        let swap = if self.z.dot(&other.x) { 2 } else { 0 };
        Ok(PauliOp { x: self.x.xor(&other.x), z: self.z.xor(&other.z), phase: (self.phase + other.phase + swap) % 4 })
    }

    /// Tensor product `self ⊗ other` (self on the low qubit indices).
    pub fn tensor(&self, other: &PauliOp) -> PauliOp {
        PauliOp { x: self.x.concat(&other.x), z: self.z.concat(&other.z), phase: (self.phase + other.phase) % 4 }
    }

    /// Image under the pairwise CNOT layer between two equal registers.
    ///
    /// Qubit `i` (source register) controls qubit `i + n/2` (target register):
    /// `X⊗I → X⊗X`, `I⊗X → I⊗X`, `Z⊗I → Z⊗I`, `I⊗Z → Z⊗Z`. Because the X
    /// part is kept left of the Z part the phase is unchanged.
    pub fn conjugate_by_transversal_cnot(&self) -> Result<PauliOp> {
        let total = self.n();
        if !total.is_multiple_of(2) {
            return Err(Error::LengthMismatch { expected: total + 1, actual: total });
        }
        let half = total / 2;
        let (xs, xt) = (self.x.slice(0, half), self.x.slice(half, total));
        let (zs, zt) = (self.z.slice(0, half), self.z.slice(half, total));
        Ok(PauliOp { x: xs.concat(&xt.xor(&xs)), z: zs.xor(&zt).concat(&zt), phase: self.phase })
    }

    /// Per-qubit letters without the phase prefix.
    pub fn letters(&self) -> String {
        (0..self.n())
            .map(|i| match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }

    /// Phase in front of the letter form, accounting for `XZ = -iY` on each Y.
    pub fn letter_phase(&self) -> u8 {
        let ys = self.x.overlap(&self.z) as u32;
        ((self.phase as u32 + 3 * ys) % 4) as u8
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.letter_phase() as usize];
        write!(f, "{prefix}{}", self.letters())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}
