//! Colex lattices and the topological CSS codes they define.
//!
//! The crate builds 3-colexes (4-valent lattices with 4-colored links),
//! turns them into CSS codes with one X-type generator per cell and one
//! Z-type generator per face, punctures closed colexes into single-qubit
//! tetrahedral codes, and verifies their properties exhaustively:
//! parameters and distance, the mod-8 weight congruence behind the
//! transversal phase gate, the transversal CNOT, string and membrane
//! operators, and lookup decoding under bit-flip noise.

pub mod code;
pub mod colex;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod nets;
pub mod parallel;
pub mod pauli;
pub mod statevec;

pub use colex::{build_tesseract, build_torus, Colex, Color, ColorPair};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use pauli::{PauliKind, PauliOp};

pub use code::{CssCode, Syndrome};
pub use decoder::{LookupDecoder, MonteCarloReport};
pub use statevec::StateVector;
