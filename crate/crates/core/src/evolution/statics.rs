//! Static checks: squeeze measurement and the detailed-balance factor.

use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::frame::{apply_pauli, expectation, inner};
use crate::error::{Error, Result};
use crate::operators::{eigs_low_with, xx_chain, z_fields, EigOptions};
use crate::pauli::{Letter, PauliString};

const PLANCK: f64 = 6.626_070_15e-34;
const BOLTZMANN: f64 = 1.380_649e-23;

/// exp(hE / k_B T) for E in GHz and T in mK.
pub fn thermal_factor(e_ghz: f64, t_mk: f64) -> Result<f64> {
    if !(t_mk > 0.0) {
        return Err(Error::InvalidArgument(format!("temperature {t_mk} mK")));
    }
    Ok((PLANCK * e_ghz * 1e9 / (BOLTZMANN * t_mk * 1e-3)).exp())
}

#[derive(Clone, Copy, Debug)]
pub struct SqueezeReport {
    /// min over the two Z̄-labelled ground states of |⟨Z_k⟩|.
    pub min_abs_zk: f64,
    /// (Z̄, ⟨Z_k⟩) for each ground state.
    pub states: [(f64, f64); 2],
    /// Whether sign(⟨Z_k⟩) equals the Z̄ label in both states.
    pub signs_match: bool,
}

/// Ground space of an L-chain with strong Z fields on every qubit but `k` (1-based).
pub fn squeeze_z_check(l: usize, g_xx: f64, g_big: f64, k: usize) -> Result<SqueezeReport> {
    if k == 0 || k > l {
        return Err(Error::InvalidArgument(format!("qubit {k} outside chain of {l}")));
    }
    let q: Vec<usize> = (0..l).collect();
    let others: Vec<usize> = q.iter().cloned().filter(|&i| i != k - 1).collect();
    let groups = vec![xx_chain(l, &q, g_xx), z_fields(l, &others, g_big)];
    let c = [g_xx, g_big];
    let s = eigs_low_with(&groups, &c, 2, &EigOptions { want_vectors: true, ..Default::default() })?;
    let v = s.eigenstates.expect("vectors");
    let zbar = PauliString::product_of(l, &q, Letter::Z);
    let zk = PauliString::from_sparse(l, &[(k - 1, Letter::Z)]);
    let mut m = Matrix2::<C64>::zeros();
    for j in 0..2 {
        let zv = apply_pauli(&zbar, &v[j]);
        for i in 0..2 {
            m[(i, j)] = inner(&v[i], &zv);
        }
    }
    let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(m);
    let mut states = [(0.0, 0.0); 2];
    for (slot, col) in states.iter_mut().zip(0..2) {
        let mut psi = vec![C64::new(0.0, 0.0); v[0].len()];
        for j in 0..2 {
            let c = eig.eigenvectors[(j, col)];
            for (o, a) in psi.iter_mut().zip(&v[j]) {
                *o += c * a;
            }
        }
        *slot = (expectation(&zbar, &psi).re, expectation(&zk, &psi).re);
    }
    let min_abs_zk = states.iter().map(|s| s.1.abs()).fold(f64::INFINITY, f64::min);
    let signs_match = states.iter().all(|(label, z)| label.signum() == z.signum());
    Ok(SqueezeReport { min_abs_zk, states, signs_match })
}
