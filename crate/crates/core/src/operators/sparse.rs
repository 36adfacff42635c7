use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::TermGroup;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug)]
struct OffTerm {
    x: u64,
    z: u64,
    w: C64,
}

/// Matrix-free Hermitian operator `Σ_g c_g Σ_p (-1)·p`.
///
/// Diagonal strings are folded into one real vector; the rest are merged by
/// symplectic mask. A string `w·X^x Z^z` maps `|b⟩` to `w·(-1)^{|b&z|} |b⊕x⟩`.
#[derive(Clone, Debug)]
pub struct SparsePauliOp {
    n: usize,
    diag: Vec<f64>,
    off: Vec<OffTerm>,
    real: bool,
}

fn parity(v: u64) -> f64 {
    if v.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Weight of `p` in letter-free form `w·X^x Z^z`, including the i^{#Y} factor.
fn letter_weight(p: &PauliString) -> C64 {
    let (re, im) = p.phase().value();
    let ph = C64::new(re, im);
    ph * C64::i().powu(p.y_count())
}

impl SparsePauliOp {
    pub fn new(groups: &[TermGroup], coefficients: &[f64], n_qubits: usize) -> Result<SparsePauliOp> {
        if coefficients.len() != groups.len() {
            return Err(Error::CoefficientCount { expected: groups.len(), found: coefficients.len() });
        }
        let terms = groups
            .iter()
            .zip(coefficients)
            .flat_map(|(g, &c)| g.terms.iter().map(move |t| (t, c)));
        Self::from_terms(terms, n_qubits)
    }

    /// Operator `Σ (-c)·p` over (string, c) pairs.
    pub fn from_terms<'a>(
        terms: impl IntoIterator<Item = (&'a PauliString, f64)>,
        n_qubits: usize,
    ) -> Result<SparsePauliOp> {
        assert!(n_qubits >= 1 && n_qubits <= 30, "qubit count {n_qubits} out of range");
        let dim = 1usize << n_qubits;
        let mut diag = vec![0.0; dim];
        let mut off: BTreeMap<(u64, u64), C64> = BTreeMap::new();
        for (p, c) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch { left: n_qubits, right: p.n_qubits() });
            }
            if !p.phase().is_real() {
                return Err(Error::NotHermitian(format!("term {p} has imaginary phase")));
            }
            if c == 0.0 {
                continue;
            }
            let w = letter_weight(p) * (-c);
            if p.x_mask() == 0 {
                let z = p.z_mask();
                for (b, d) in diag.iter_mut().enumerate() {
                    *d += w.re * parity(b as u64 & z);
                }
            } else {
                *off.entry((p.x_mask(), p.z_mask())).or_insert(C64::new(0.0, 0.0)) += w;
            }
        }
        let off: Vec<OffTerm> = off
            .into_iter()
            .filter(|(_, w)| w.norm() != 0.0)
            .map(|((x, z), w)| OffTerm { x, z, w })
            .collect();
        let real = off.iter().all(|t| t.w.im == 0.0);
        Ok(SparsePauliOp { n: n_qubits, diag, off, real })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// True when every matrix element is real.
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let radius: f64 = self.off.iter().map(|t| t.w.norm()).sum();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo - radius, hi + radius)
    }

    /// Largest absolute matrix-element scale, used for tolerances.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.spectral_bounds();
        lo.abs().max(hi.abs())
    }

    /// `y = H x`.
    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        let dim = self.dim();
        assert_eq!(x.len(), dim);
        assert_eq!(y.len(), dim);
        for b in 0..dim {
            y[b] = x[b] * self.diag[b];
        }
        for t in &self.off {
            let xm = t.x as usize;
            if t.z == 0 {
                for b in 0..dim {
                    y[b] += t.w * x[b ^ xm];
                }
            } else {
                for b in 0..dim {
                    let src = b ^ xm;
                    y[b] += t.w * x[src] * parity(src as u64 & t.z);
                }
            }
        }
    }

    /// `y = H x` for real operators.
    pub fn apply_real_into(&self, x: &[f64], y: &mut [f64]) {
        assert!(self.real, "operator has complex matrix elements");
        let dim = self.dim();
        assert_eq!(x.len(), dim);
        assert_eq!(y.len(), dim);
        for b in 0..dim {
            y[b] = x[b] * self.diag[b];
        }
        for t in &self.off {
            let xm = t.x as usize;
            let w = t.w.re;
            if t.z == 0 {
                for b in 0..dim {
                    y[b] += w * x[b ^ xm];
                }
            } else {
                for b in 0..dim {
                    let src = b ^ xm;
                    y[b] += w * x[src] * parity(src as u64 & t.z);
                }
            }
        }
    }

    pub fn dense(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let mut e = vec![C64::new(0.0, 0.0); dim];
        let mut col = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            e[j] = C64::new(1.0, 0.0);
            self.apply_into(&e, &mut col);
            e[j] = C64::new(0.0, 0.0);
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn dense_real(&self) -> DMatrix<f64> {
        assert!(self.real, "operator has complex matrix elements");
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for j in 0..dim {
            e[j] = 1.0;
            self.apply_real_into(&e, &mut col);
            e[j] = 0.0;
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal strings as (x mask, z mask, weight).
    pub fn off_diagonal(&self) -> impl Iterator<Item = (u64, u64, C64)> + '_ {
        self.off.iter().map(|t| (t.x, t.z, t.w))
    }
}

/// `H·state` with `H = Σ_g c_g Σ_p (-1)·p`.
pub fn apply(groups: &[TermGroup], coefficients: &[f64], state: &[C64]) -> Result<Vec<C64>> {
    let dim = state.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two().max(2), found: dim });
    }
    let n = dim.trailing_zeros() as usize;
    if let Some(m) = super::qubit_count(groups) {
        if m != n {
            return Err(Error::DimensionMismatch { expected: 1 << m, found: dim });
        }
    }
    let op = SparsePauliOp::new(groups, coefficients, n)?;
    let mut out = vec![C64::new(0.0, 0.0); dim];
    op.apply_into(state, &mut out);
    Ok(out)
}
