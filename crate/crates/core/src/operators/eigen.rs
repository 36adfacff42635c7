use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::SparsePauliOp;
use super::{qubit_count, TermGroup};
use crate::error::{Error, Result};

/// Largest dimension handled by dense diagonalization.
pub const DENSE_MAX_DIM: usize = 256;

#[derive(Clone, Debug)]
pub struct EigOptions {
    pub want_vectors: bool,
    /// Residual tolerance relative to the largest coefficient.
    pub rel_tol: f64,
    /// Degeneracy grouping tolerance relative to the largest coefficient.
    pub degeneracy_rel_tol: f64,
    /// Seed of the iterative solver's starting block.
    pub seed: u64,
    /// Force the iterative solver regardless of dimension.
    pub force_iterative: bool,
    pub max_restarts: usize,
    /// Leading pairs that must meet the residual tolerance; all `k` when None.
    /// The rest are returned as Ritz estimates.
    pub converge: Option<usize>,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions {
            want_vectors: false,
            rel_tol: 1e-9,
            degeneracy_rel_tol: 1e-6,
            seed: 0x5eed,
            force_iterative: false,
            max_restarts: 400,
            converge: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub degeneracy_groups: Vec<Vec<usize>>,
    pub eigenstates: Option<Vec<Vec<C64>>>,
    /// Largest residual norm among returned pairs (0 for the dense path).
    pub residual: f64,
    pub tolerance: f64,
}

impl SpectrumResult {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.degeneracy_groups.iter().map(|g| g.len()).collect()
    }
}

fn group_levels(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - values[*g.last().unwrap()] <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn coefficient_scale(coefficients: &[f64], groups: &[TermGroup]) -> f64 {
    coefficients
        .iter()
        .zip(groups)
        .filter(|(_, g)| !g.terms.is_empty())
        .map(|(c, _)| c.abs())
        .fold(0.0, f64::max)
}

pub fn eigs_low(groups: &[TermGroup], coefficients: &[f64], k: usize) -> Result<SpectrumResult> {
    eigs_low_with(groups, coefficients, k, &EigOptions::default())
}

/// Lowest `k` eigenpairs of `Σ_g c_g Σ_p (-1)·p`.
pub fn eigs_low_with(
    groups: &[TermGroup],
    coefficients: &[f64],
    k: usize,
    opts: &EigOptions,
) -> Result<SpectrumResult> {
    let n = qubit_count(groups).ok_or_else(|| Error::InvalidArgument("no terms to size the Hilbert space".into()))?;
    let op = SparsePauliOp::new(groups, coefficients, n)?;
    let scale = coefficient_scale(coefficients, groups);
    eigs_of(&op, k, scale, opts)
}

pub(crate) fn eigs_of(op: &SparsePauliOp, k: usize, scale: f64, opts: &EigOptions) -> Result<SpectrumResult> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(Error::TooManyEigenpairs { k, dim });
    }
    let deg_tol = (opts.degeneracy_rel_tol * scale).max(1e-12);
    let (values, vectors, residual) = if dim <= DENSE_MAX_DIM && !opts.force_iterative {
        dense_low(op, k, opts.want_vectors)
    } else {
        if !op.is_real() {
            return Err(Error::ComplexIterative(dim));
        }
        let tol = (opts.rel_tol * scale).max(1e-13);
        block_krylov(op, k, tol, opts)?
    };
    let degeneracy_groups = group_levels(&values, deg_tol);
    Ok(SpectrumResult { eigenvalues: values, degeneracy_groups, eigenstates: vectors, residual, tolerance: deg_tol })
}

fn dense_low(op: &SparsePauliOp, k: usize, want: bool) -> (Vec<f64>, Option<Vec<Vec<C64>>>, f64) {
    if op.is_real() {
        let eig = SymmetricEigen::new(op.dense_real());
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = idx[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = want.then(|| {
            idx[..k]
                .iter()
                .map(|&i| eig.eigenvectors.column(i).iter().map(|&v| C64::new(v, 0.0)).collect())
                .collect()
        });
        (values, vectors, 0.0)
    } else {
        let eig = SymmetricEigen::new(op.dense());
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = idx[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = want.then(|| idx[..k].iter().map(|&i| eig.eigenvectors.column(i).iter().cloned().collect()).collect());
        (values, vectors, 0.0)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Orthonormalize `w` against `basis` (two Gram-Schmidt passes). Returns
/// false when the vector is numerically inside the span.
fn orthonormalize_against(w: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let norm0 = dot(w, w).sqrt();
    if norm0 == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for v in basis {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
    let norm = dot(w, w).sqrt();
    if norm <= 1e-10 * norm0 {
        return false;
    }
    w.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Restarted block Krylov (Rayleigh-Ritz on a fully reorthogonalized basis,
/// thick restart with the k+6 lowest Ritz vectors).
fn block_krylov(
    op: &SparsePauliOp,
    k: usize,
    tol: f64,
    opts: &EigOptions,
) -> Result<(Vec<f64>, Option<Vec<Vec<C64>>>, f64)> {
    let dim = op.dim();
    let keep = (k + 6).min(dim);
    let block = (k + 2).min(dim);
    let max_basis = (keep + 10 * block).max(3 * keep).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut pending: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..dim).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    let mut last_res = f64::INFINITY;

    for restart in 0..=opts.max_restarts {
        // expand
        loop {
            let mut added = Vec::new();
            for mut w in pending.drain(..) {
                if basis.len() >= max_basis {
                    break;
                }
                if orthonormalize_against(&mut w, &basis) {
                    let mut aw = vec![0.0; dim];
                    op.apply_real_into(&w, &mut aw);
                    basis.push(w);
                    images.push(aw);
                    added.push(images.len() - 1);
                }
            }
            if added.is_empty() || basis.len() >= max_basis {
                break;
            }
            pending = added.iter().map(|&i| images[i].clone()).collect();
        }

        // Rayleigh-Ritz
        let m = basis.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]));
                t[(i, j)] = v;
                t[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let take = keep.min(m);
        let mut ritz = Vec::with_capacity(take);
        let mut ritz_img = Vec::with_capacity(take);
        let mut residuals = Vec::with_capacity(take);
        for &c in &order[..take] {
            let y = eig.eigenvectors.column(c);
            let mut x = vec![0.0; dim];
            for (j, &yj) in y.iter().enumerate() {
                axpy(yj, &basis[j], &mut x);
            }
            // fresh product: recombined images drift over many restarts
            let mut ax = vec![0.0; dim];
            op.apply_real_into(&x, &mut ax);
            let theta = eig.eigenvalues[c];
            let r: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a - theta * b).collect();
            residuals.push((theta, r));
            ritz.push(x);
            ritz_img.push(ax);
        }
        let must = opts.converge.unwrap_or(k).min(k);
        let res = residuals[..must.min(take)].iter().map(|(_, r)| dot(r, r).sqrt()).fold(0.0, f64::max);
        last_res = res;
        if res <= tol || m == dim {
            let values = residuals[..k].iter().map(|(t, _)| *t).collect();
            let vectors = opts
                .want_vectors
                .then(|| ritz[..k].iter().map(|v| v.iter().map(|&a| C64::new(a, 0.0)).collect()).collect());
            return Ok((values, vectors, res));
        }
        if restart == opts.max_restarts {
            break;
        }
        pending = residuals.into_iter().map(|(_, r)| r).filter(|r| dot(r, r).sqrt() > tol).take(block).collect();
        basis = ritz;
        images = ritz_img;
    }
    Err(Error::NoConvergence { residual: last_res, iterations: opts.max_restarts })
}

/// Splitting `E1 - E0` of the two lowest levels.
pub fn ground_splitting(groups: &[TermGroup], coefficients: &[f64]) -> Result<f64> {
    let s = eigs_low(groups, coefficients, 2)?;
    Ok((s.eigenvalues[1] - s.eigenvalues[0]).max(0.0))
}

/// Doublet structure of the four lowest levels.
#[derive(Clone, Copy, Debug)]
pub struct DoubletCoupling {
    /// Logical coupling strength, half the doublet separation.
    pub coupling: f64,
    /// `(E2 + E3)/2 - (E0 + E1)/2`.
    pub separation: f64,
    /// Set when the levels do not split cleanly into 2 + 2.
    pub ambiguous: bool,
}

/// Logical coupling between two encoded qubits from their 4-level ground manifold.
pub fn doublet_coupling(groups: &[TermGroup], coefficients: &[f64]) -> Result<DoubletCoupling> {
    let n = qubit_count(groups).ok_or_else(|| Error::InvalidArgument("no terms".into()))?;
    let dim = 1usize << n;
    if dim < 4 {
        return Err(Error::TooManyEigenpairs { k: 4, dim });
    }
    let k = 5.min(dim);
    let s = eigs_low(groups, coefficients, k)?;
    let e = &s.eigenvalues;
    let tol = s.tolerance;
    let separation = (e[2] + e[3]) / 2.0 - (e[0] + e[1]) / 2.0;
    let inner = (e[1] - e[0]).max(e[3] - e[2]);
    let isolated = k < 5 || e[4] - e[3] > tol;
    let ambiguous = !isolated || (inner > tol && inner > 0.5 * (e[2] - e[1]));
    Ok(DoubletCoupling { coupling: 0.5 * separation, separation, ambiguous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{single_chain, TermGroup};

    #[test]
    fn grouping_by_tolerance() {
        let g = group_levels(&[0.0, 1e-9, 1.0, 1.0, 2.0], 1e-6);
        assert_eq!(g, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn iterative_matches_dense() {
        let groups = single_chain(8, 1.0, 0.3);
        let c = crate::operators::base_coefficients(&groups);
        let d = eigs_low(&groups, &c, 6).unwrap();
        let opts = EigOptions { force_iterative: true, ..Default::default() };
        let it = eigs_low_with(&groups, &c, 6, &opts).unwrap();
        for (a, b) in d.eigenvalues.iter().zip(&it.eigenvalues) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_hamiltonian() {
        let groups = vec![TermGroup::new("z", vec!["ZI".parse().unwrap()], 0.0)];
        let s = eigs_low(&groups, &[0.0], 4).unwrap();
        assert!(s.eigenvalues.iter().all(|&e| e == 0.0));
        assert_eq!(s.degeneracy_groups.len(), 1);
    }
}
