use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::frame::{apply_pauli, inner};
use super::propagate::propagate;
use crate::control::{GateKind, NoiseSet, Schedule};
use crate::error::{Error, Result};
use crate::operators::{eigs_low_with, EigOptions};
use crate::pauli::{Letter, PauliString};

#[derive(Clone, Debug)]
pub struct RotationResult {
    /// Logical 2×2 block in the (|0̄⟩, |1̄⟩) frame.
    pub u_tilde: Matrix2<C64>,
    /// |⟨1̄|U|0̄⟩|².
    pub flip_probability: f64,
    /// Bloch angle φ with U ≈ e^{iα} exp(iφX̄/2), reduced to [0, 2π).
    pub angle: f64,
    pub leakage: f64,
}

/// Z̄-labelled doublet of the chain Hamiltonian at time `t`.
fn chain_frame(schedule: &Schedule, noise: &NoiseSet, t: f64, l: usize) -> Result<[Vec<C64>; 2]> {
    let c = schedule.coefficients_at(t, noise);
    let opts = EigOptions { want_vectors: true, ..Default::default() };
    let s = eigs_low_with(&schedule.groups, &c, 3, &opts)?;
    let e = &s.eigenvalues;
    if !(e[1] - e[0] <= 1e-2 * (e[2] - e[1])) {
        return Err(Error::Degeneracy { expected: "2-fold ground space".into(), found: s.multiplicities() });
    }
    let v = s.eigenstates.expect("vectors");
    let n = schedule.n_qubits;
    let zbar = PauliString::product_of(n, &(0..l).collect::<Vec<_>>(), Letter::Z);
    let mut m = Matrix2::<C64>::zeros();
    for j in 0..2 {
        let zv = apply_pauli(&zbar, &v[j]);
        for i in 0..2 {
            m[(i, j)] = inner(&v[i], &zv);
        }
    }
    let eig = SymmetricEigen::new((m + m.adjoint()) * C64::new(0.5, 0.0));
    let top = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
    let combine = |coef: [C64; 2]| {
        let mut out = vec![C64::new(0.0, 0.0); v[0].len()];
        for (c, vec) in coef.iter().zip(&v) {
            for (o, a) in out.iter_mut().zip(vec) {
                *o += c * a;
            }
        }
        let norm = inner(&out, &out).re.sqrt();
        out.iter_mut().for_each(|a| *a /= norm);
        out
    };
    let zero = combine([eig.eigenvectors[(0, top)], eig.eigenvectors[(1, top)]]);
    let x1 = PauliString::from_sparse(n, &[(0, Letter::X)]);
    let moved = apply_pauli(&x1, &zero);
    let one = combine([inner(&v[0], &moved), inner(&v[1], &moved)]);
    Ok([zero, one])
}

/// Run a rotation schedule from the Z̄ eigenstates of the chain and read off
/// the logical X rotation.
pub fn rotation_run(schedule: &Schedule, noise: &NoiseSet, dt: f64) -> Result<RotationResult> {
    let l = match schedule.kind {
        GateKind::Rotation { chain_len } => chain_len,
        _ => return Err(Error::InvalidArgument("not a rotation schedule".into())),
    };
    let initial = chain_frame(schedule, noise, 0.0, l)?;
    let fin = chain_frame(schedule, noise, schedule.duration, l)?;
    let mut cols = initial.to_vec();
    propagate(schedule, noise, &mut cols, dt)?;
    let mut u = Matrix2::<C64>::zeros();
    for j in 0..2 {
        for i in 0..2 {
            u[(i, j)] = inner(&fin[i], &cols[j]);
        }
    }
    let leakage = 1.0 - (u.adjoint() * u).trace().re / 2.0;
    let alpha = u.determinant().arg() / 2.0;
    let rot = C64::from_polar(1.0, -alpha);
    let c = (u[(0, 0)] * rot).re;
    let s = (u[(1, 0)] * rot * C64::new(0.0, -1.0)).re;
    let angle = (2.0 * s.atan2(c)).rem_euclid(2.0 * std::f64::consts::PI);
    Ok(RotationResult { u_tilde: u, flip_probability: u[(1, 0)].norm_sqr(), angle, leakage })
}
