use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand::distr::Distribution;
use rand_chacha::ChaCha8Rng;

use super::frame::{apply_pauli, inner};
use crate::error::{Error, Result};
use crate::operators::{eigs_low_with, single_chain, EigOptions};
use crate::pauli::{Letter, PauliString};

/// Ground state of an L-chain in a uniform Z field with maximal ⟨Σ X_i⟩.
///
/// The parity ∏X_i takes the value +1 on both |+…+⟩ and |−…−⟩ when L is even,
/// so the magnetization selects the state instead; for odd L both choices
/// give the same vector.
pub fn x_ground_state(l: usize, g_xx: f64, g_z: f64) -> Result<Vec<C64>> {
    let groups = single_chain(l, g_xx, g_z);
    let c = crate::operators::base_coefficients(&groups);
    let opts = EigOptions { want_vectors: true, ..Default::default() };
    let s = eigs_low_with(&groups, &c, 2, &opts)?;
    let v = s.eigenstates.expect("vectors");
    let mut m = Matrix2::<C64>::zeros();
    for q in 0..l {
        let xq = PauliString::from_sparse(l, &[(q, Letter::X)]);
        for j in 0..2 {
            let xv = apply_pauli(&xq, &v[j]);
            for i in 0..2 {
                m[(i, j)] += inner(&v[i], &xv);
            }
        }
    }
    let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(m);
    let top = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
    let mut psi = vec![C64::new(0.0, 0.0); v[0].len()];
    for j in 0..2 {
        let c = eig.eigenvectors[(j, top)];
        for (o, a) in psi.iter_mut().zip(&v[j]) {
            *o += c * a;
        }
    }
    let norm = inner(&psi, &psi).re.sqrt();
    psi.iter_mut().for_each(|a| *a /= norm);
    Ok(psi)
}

/// Probabilities of X-basis outcomes; bit q of the index set means qubit q read −1.
pub fn x_outcome_distribution(state: &[C64]) -> Vec<f64> {
    let mut a = state.to_vec();
    let n = a.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / n as f64;
    a.iter().map(|v| v.norm_sqr() * scale).collect()
}

/// Majority vote on an L-bit outcome. Returns Some(true) for logical −1,
/// `None` on an even-L tie.
pub fn majority(bits: u64, l: usize) -> Option<bool> {
    let minus = bits.count_ones() as usize;
    let plus = l - minus;
    match minus.cmp(&plus) {
        std::cmp::Ordering::Greater => Some(true),
        std::cmp::Ordering::Less => Some(false),
        std::cmp::Ordering::Equal => None,
    }
}

/// Exhaustive maximum-agreement decoding: the logical value whose repetition
/// codeword is nearest in Hamming distance; `None` on ties.
pub fn max_agreement(bits: u64, l: usize) -> Option<bool> {
    let all = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };
    let d_plus = bits.count_ones();
    let d_minus = (bits ^ all).count_ones();
    match d_plus.cmp(&d_minus) {
        std::cmp::Ordering::Greater => Some(true),
        std::cmp::Ordering::Less => Some(false),
        std::cmp::Ordering::Equal => None,
    }
}

/// Exact probability of decoding to −1, by enumeration over outcomes and
/// measurement flips; ties count one half.
pub fn exact_logical_x_error(dist: &[f64], l: usize, p_meas: f64) -> f64 {
    let n = 1usize << l;
    assert_eq!(dist.len(), n);
    // probability that the readout pattern differs from the outcome by mask f
    let flip_prob: Vec<f64> = (0..n)
        .map(|f| {
            let k = (f as u64).count_ones() as i32;
            p_meas.powi(k) * (1.0 - p_meas).powi(l as i32 - k)
        })
        .collect();
    let mut err = 0.0;
    for (s, &ps) in dist.iter().enumerate() {
        if ps == 0.0 {
            continue;
        }
        for (f, &pf) in flip_prob.iter().enumerate() {
            if pf == 0.0 {
                continue;
            }
            let w = match majority((s ^ f) as u64, l) {
                Some(true) => 1.0,
                Some(false) => 0.0,
                None => 0.5,
            };
            err += ps * pf * w;
        }
    }
    err
}

/// Monte Carlo estimate of the logical X readout error of `state`.
pub fn sample_logical_x(state: &[C64], l: usize, shots: u64, p_meas: f64, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    if state.len() != 1 << l {
        return Err(Error::DimensionMismatch { expected: 1 << l, found: state.len() });
    }
    let dist = x_outcome_distribution(state);
    let sampler = WeightedIndex::new(&dist).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = 0u64;
    for _ in 0..shots {
        let mut bits = sampler.sample(&mut rng) as u64;
        if p_meas > 0.0 {
            for q in 0..l {
                if rng.random::<f64>() < p_meas {
                    bits ^= 1 << q;
                }
            }
        }
        let wrong = match majority(bits, l) {
            Some(v) => v,
            None => rng.random::<bool>(),
        };
        errors += wrong as u64;
    }
    Ok(errors as f64 / shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoders_agree() {
        for l in 1..=6 {
            for b in 0..(1u64 << l) {
                assert_eq!(majority(b, l), max_agreement(b, l));
            }
        }
    }

    #[test]
    fn ideal_state_never_errs() {
        let psi = x_ground_state(3, 1.0, 0.0).unwrap();
        let d = x_outcome_distribution(&psi);
        assert!((d[0] - 1.0).abs() < 1e-12);
        assert_eq!(sample_logical_x(&psi, 3, 10_000, 0.0, 1).unwrap(), 0.0);
        assert!(sample_logical_x(&psi, 3, 0, 0.0, 1).is_err());
    }
}
