//! Architecture-aware synthesis of Pauli-gadget products into CNOT and
//! single-qubit Clifford+Rz circuits.
//!
//! Gadgets are reordered and simplified by propagating Clifford gates through
//! the rest of the product; the accumulated Clifford is synthesized at the end
//! up to a relabelling of the output wires.

pub mod bench;
pub mod circuit;
pub mod error;
pub mod pauli;
pub mod synth;
pub mod tableau;
pub mod topology;
pub mod verify;

pub use circuit::{Circuit, Gate, Metrics};
pub use error::{Error, Result};
pub use pauli::{CliffordGate, PauliGadget, PauliLetter, PauliPolynomial, PauliString};
pub use synth::{naive_synthesize, synthesize, Mode, SynthConfig, SynthesisResult};
pub use tableau::{CliffordTableau, QubitPermutation};
pub use topology::Topology;
