//! Many-body operators assembled from Pauli term groups, low-lying spectra,
//! and the splitting statistics built on them.

mod eigen;
mod models;
mod sparse;

pub use eigen::{
    doublet_coupling, eigs_low, eigs_low_with, ground_splitting, DoubletCoupling, EigOptions,
    SpectrumResult, DENSE_MAX_DIM,
};
pub use models::{chain_bonds, chain_with_fields, imperfect_chain, ladder, single_chain, xx_chain, z_fields, Layout};
pub use sparse::{apply, SparsePauliOp};

use crate::pauli::{PauliString, Phase};

/// How a noise trace enters a group's coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseMode {
    /// coefficient = base·envelope + noise
    Additive,
    /// coefficient = envelope·(base + noise)
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseBinding {
    pub channel: usize,
    pub mode: NoiseMode,
}

/// Pauli terms sharing a strength, an envelope and a noise channel. Each term
/// enters the Hamiltonian as `-coefficient * term`.
#[derive(Clone, Debug)]
pub struct TermGroup {
    pub label: String,
    pub terms: Vec<PauliString>,
    pub base_strength: f64,
    /// Index into the owning schedule's envelope table; `None` means always on.
    pub envelope: Option<usize>,
    pub noise: Option<NoiseBinding>,
}

impl TermGroup {
    /// Group with strength `g`; a negative `g` is stored as `|g|` with negated terms.
    pub fn new(label: impl Into<String>, terms: Vec<PauliString>, g: f64) -> TermGroup {
        assert!(g.is_finite(), "non-finite strength");
        let n = terms.first().map(|t| t.n_qubits());
        assert!(terms.iter().all(|t| Some(t.n_qubits()) == n), "terms act on different qubit counts");
        let terms = if g < 0.0 {
            terms.into_iter().map(|t| { let ph = t.phase(); t.with_phase(ph * Phase::MINUS_ONE) }).collect()
        } else {
            terms
        };
        TermGroup { label: label.into(), terms, base_strength: g.abs(), envelope: None, noise: None }
    }

    pub fn with_envelope(mut self, envelope: usize) -> TermGroup {
        self.envelope = Some(envelope);
        self
    }

    pub fn with_noise(mut self, channel: usize, mode: NoiseMode) -> TermGroup {
        self.noise = Some(NoiseBinding { channel, mode });
        self
    }

    pub fn n_qubits(&self) -> Option<usize> {
        self.terms.first().map(|t| t.n_qubits())
    }
}

/// Base strengths of each group, the coefficients of a static Hamiltonian.
pub fn base_coefficients(groups: &[TermGroup]) -> Vec<f64> {
    groups.iter().map(|g| g.base_strength).collect()
}

/// Qubit count shared by all groups (`None` if every group is empty).
pub fn qubit_count(groups: &[TermGroup]) -> Option<usize> {
    groups.iter().find_map(|g| g.n_qubits())
}
