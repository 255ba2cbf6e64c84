use thiserror::Error;

/// Errors raised by the laboratory's library layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} qubits vs {1} qubits")]
    Dimension(usize, usize),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("register of {0} qubits exceeds the packed-word limit of {max}", max = crate::pauli::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("invalid Pauli string {0:?}")]
    ParsePauli(String),

    #[error("gate {0} is not a unitary and cannot conjugate a Pauli")]
    NotUnitary(&'static str),

    #[error("gate {gate} expects {expected} qubit(s), got {got}")]
    Arity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("CNOT control and target coincide on qubit {0}")]
    CnotSelfLoop(usize),

    #[error("location {0} is not faultable")]
    NotFaultable(usize),

    #[error("location {0} does not exist")]
    UnknownLocation(usize),

    #[error("fault {fault} is not supported on the qubits of location {loc}")]
    UnsupportedFault { loc: usize, fault: String },

    #[error("circuit has {0} measurements; at most 64 outcome bits are tracked")]
    TooManyOutcomes(usize),

    #[error("inconsistent gadget specification: {0}")]
    Spec(String),

    #[error("unknown gadget {0:?}")]
    UnknownGadget(String),

    #[error("ω(ε) = {omega} ≥ 1 at ε = {eps}: above-threshold regime")]
    Divergence { eps: f64, omega: f64 },

    #[error("tail bound invalid: Γ·ε = {0} ≥ 1")]
    TailBound(f64),

    #[error("fixed-point iteration did not converge after {iterations} steps (last iterates {trace:?})")]
    NoConvergence { iterations: usize, trace: Vec<f64> },

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("cyclic exRec graph")]
    Cyclic,

    #[error("inconsistent carving labels: {0}")]
    Labels(String),

    #[error("gate arity {0} is not supported (at most 2)")]
    Arity2(usize),

    #[error("cluster size {size} exceeds the brute-force cap {cap}")]
    ResourceCap { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
