use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{eigs_low_with, EigOptions, SparsePauliOp, TermGroup};
use crate::pauli::PauliString;

/// Logical operators defining a two-qubit frame.
#[derive(Clone, Debug)]
pub struct FrameOperators {
    pub z_c: PauliString,
    pub z_t: PauliString,
    pub x_c: PauliString,
    pub x_t: PauliString,
}

/// Logical basis |00⟩, |01⟩, |10⟩, |11⟩ (control bit first) inside a 4-fold
/// ground space.
#[derive(Clone, Debug)]
pub struct LogicalFrame {
    pub basis: [Vec<C64>; 4],
    /// (Z̄_c, Z̄_t) expectation values of each basis state.
    pub labels: [(f64, f64); 4],
    /// Gap between the ground manifold and the next level.
    pub gap: f64,
}

/// `p|ψ⟩` for a Pauli string.
pub fn apply_pauli(p: &PauliString, psi: &[C64]) -> Vec<C64> {
    let (re, im) = p.phase().value();
    let w = C64::new(re, im) * C64::i().powu(p.y_count());
    let x = p.x_mask() as usize;
    let z = p.z_mask();
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    for (b, &a) in psi.iter().enumerate() {
        let s = if (b as u64 & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        out[b ^ x] = a * w * s;
    }
    out
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn expectation(p: &PauliString, psi: &[C64]) -> C64 {
    inner(psi, &apply_pauli(p, psi))
}

/// Frame in the ground space of a snapshot Hamiltonian.
pub fn logical_frame(groups: &[TermGroup], coefficients: &[f64], ops: &FrameOperators, seed: u64) -> Result<LogicalFrame> {
    // The fifth level only bounds the gap; it may sit in a noise-split cluster
    // whose members do not converge individually.
    let opts = EigOptions { want_vectors: true, seed, converge: Some(4), ..Default::default() };
    let spec = eigs_low_with(groups, coefficients, 5, &opts)?;
    // Noise splits the manifold slightly; require it to stay well separated.
    let e = &spec.eigenvalues;
    let gap = e[4] - e[3];
    if !(e[3] - e[0] <= 1e-2 * gap) {
        return Err(Error::Degeneracy { expected: "4-fold ground space".into(), found: spec.multiplicities() });
    }
    let vecs = spec.eigenstates.expect("requested eigenvectors");
    // Diagonalize Z̄_c + 2 Z̄_t inside the ground space; the label values are
    // ±1 ± 2, so the top eigenvector is |00⟩.
    let n = groups.iter().find_map(|g| g.n_qubits()).unwrap();
    let op = SparsePauliOp::from_terms([(&ops.z_c, -1.0), (&ops.z_t, -2.0)], n)?;
    let mut m = Matrix4::<C64>::zeros();
    let mut hv = vec![C64::new(0.0, 0.0); vecs[0].len()];
    for j in 0..4 {
        op.apply_into(&vecs[j], &mut hv);
        for i in 0..4 {
            m[(i, j)] = inner(&vecs[i], &hv);
        }
    }
    let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(m);
    let top = (0..4).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
    let mut b00 = vec![C64::new(0.0, 0.0); vecs[0].len()];
    for j in 0..4 {
        let c = eig.eigenvectors[(j, top)];
        for (o, v) in b00.iter_mut().zip(&vecs[j]) {
            *o += c * v;
        }
    }
    // fix the arbitrary global phase: largest component real positive
    let (_, big) = b00.iter().enumerate().fold((0, C64::new(0.0, 0.0)), |acc, (i, v)| if v.norm() > acc.1.norm() { (i, *v) } else { acc });
    let ph = big.conj() / big.norm();
    let norm = inner(&b00, &b00).re.sqrt();
    b00.iter_mut().for_each(|v| *v *= ph / norm);

    // X̄ images projected back into the ground space; the projection is the
    // identity when X̄ is an exact symmetry and removes O(noise/gap) admixture
    // when it is not.
    let project = |v: Vec<C64>| {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for basis in &vecs[..4] {
            let c = inner(basis, &v);
            for (o, b) in out.iter_mut().zip(basis) {
                *o += c * b;
            }
        }
        let norm = inner(&out, &out).re.sqrt();
        out.iter_mut().for_each(|a| *a /= norm);
        out
    };
    let b01 = project(apply_pauli(&ops.x_t, &b00));
    let b10 = project(apply_pauli(&ops.x_c, &b00));
    let b11 = project(apply_pauli(&ops.x_c, &b01));
    let basis = [b00, b01, b10, b11];
    let labels = [0, 1, 2, 3].map(|i| (expectation(&ops.z_c, &basis[i]).re, expectation(&ops.z_t, &basis[i]).re));
    Ok(LogicalFrame { basis, labels, gap })
}

impl LogicalFrame {
    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g = inner(&self.basis[i], &self.basis[j]);
                let e = if i == j { (g - 1.0).norm() } else { g.norm() };
                worst = worst.max(e);
            }
        }
        worst
    }

    /// Largest per-state deviation `1 - |⟨a_i|b_i⟩|`, blind to state phases.
    pub fn distance(&self, other: &LogicalFrame) -> f64 {
        (0..4).map(|i| 1.0 - inner(&self.basis[i], &other.basis[i]).norm()).fold(0.0, f64::max)
    }
}
