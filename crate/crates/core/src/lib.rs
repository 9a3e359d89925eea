//! Coherent information of noisy graph states across a bipartition.
//!
//! Qubits start in `|+>`, each one dephasing to `|->` with probability
//! `1 - P` before the CZ gates that build the graph state. The crate
//! computes the von Neumann entropies of the two subsystems and the
//! coherent informations `I_A = H(rho_A) - H(rho_AB)` and
//! `I_B = H(rho_B) - H(rho_AB)`, which lower-bound the one-way
//! distillable entanglement.
//!
//! The general engine ([`entropy`]) extracts the stabilizer subgroup
//! acting on one side via GF(2) elimination ([`gf2`]) and enumerates
//! initial-qubit configurations to build the weight vector. Analytic
//! fast paths for rank-1 and rank-2 biadjacency structure live in
//! [`closedform`], routed by the classifier in [`graphstate`]. An exact
//! density-matrix brute-force verifier lives in [`oracle`], and the
//! star-graph repetition-code decoder in [`repcode`].

pub mod closedform;
pub mod entropy;
pub mod gf2;
pub mod graphstate;
pub mod oracle;
pub mod repcode;

pub use entropy::{
    binary_entropy, coherent_information, coherent_information_with_caps, compute_weights,
    extract_generator_matrix, subsystem_entropy, CIResult, Caps, GeneratorMatrix, Method,
    MethodTag, WeightVector,
};
pub use gf2::{BitMatrix, EliminationResult};
pub use graphstate::{
    classify, BipartiteGraphState, NoiseModel, Side, StructureClass, StructureVariant,
};
pub use repcode::BellDiagonalState;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An enumeration dimension exceeds the configured cap.
    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("closed form not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
