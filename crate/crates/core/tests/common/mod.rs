//! Dense reference constructions, built letter by letter with Kronecker
//! products and independent of the bit-mask kernels under test.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use xxchain::operators::TermGroup;
use xxchain::pauli::{Letter, PauliString};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn letter_matrix(l: Letter) -> Matrix2<C64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        Letter::I => Matrix2::new(o, z, z, o),
        Letter::X => Matrix2::new(z, o, o, z),
        Letter::Y => Matrix2::new(z, -i, i, z),
        Letter::Z => Matrix2::new(o, z, z, -o),
    }
}

fn phase_value(p: &PauliString) -> C64 {
    let (re, im) = p.phase().value();
    c(re, im)
}

/// Matrix of a Pauli string; qubit 0 is the least significant index bit, so
/// it is the rightmost Kronecker factor.
pub fn pauli_dense(p: &PauliString) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..p.n_qubits()).rev() {
        let l = letter_matrix(p.letter(q));
        let l = DMatrix::from_fn(2, 2, |i, j| l[(i, j)]);
        m = m.kronecker(&l);
    }
    m * phase_value(p)
}

/// Dense `Σ_g c_g Σ_p (-1)·p`.
pub fn hamiltonian_dense(groups: &[TermGroup], coeffs: &[f64], n: usize) -> DMatrix<C64> {
    let dim = 1 << n;
    let mut h = DMatrix::zeros(dim, dim);
    for (g, &k) in groups.iter().zip(coeffs) {
        for p in &g.terms {
            h -= pauli_dense(p) * c(k, 0.0);
        }
    }
    h
}

/// `p|ψ⟩` applied one tensor factor at a time.
pub fn pauli_apply_factorwise(p: &PauliString, psi: &[C64]) -> Vec<C64> {
    let mut out = psi.to_vec();
    for q in 0..p.n_qubits() {
        let m = letter_matrix(p.letter(q));
        let stride = 1usize << q;
        for base in 0..out.len() {
            if base & stride != 0 {
                continue;
            }
            let (a0, a1) = (out[base], out[base | stride]);
            out[base] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            out[base | stride] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
    let ph = phase_value(p);
    out.iter_mut().for_each(|a| *a *= ph);
    out
}

/// `H|ψ⟩` via [`pauli_apply_factorwise`].
pub fn hamiltonian_apply_factorwise(groups: &[TermGroup], coeffs: &[f64], psi: &[C64]) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for (g, &k) in groups.iter().zip(coeffs) {
        for p in &g.terms {
            for (o, v) in out.iter_mut().zip(pauli_apply_factorwise(p, psi)) {
                *o -= v * k;
            }
        }
    }
    out
}

pub fn random_state(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..dim)
        .map(|_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Evenly log-spaced grid including both ends.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}
