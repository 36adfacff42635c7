//! Symbolic Pauli-string algebra and logical-operator flow verification.

mod flow;
mod string;

pub use flow::{bias_check, equivalent_modulo, verify_flow, FlowReport, FlowStep, LogicalFlow, LogicalSet};
pub use string::{Letter, PauliString, Phase, MAX_QUBITS};
