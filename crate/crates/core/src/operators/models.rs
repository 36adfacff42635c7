//! Builders for the chain, ladder and imperfect-chain Hamiltonians.

use super::TermGroup;
use crate::pauli::{Letter, PauliString};

/// Qubit indices of consecutive chains of equal length `l`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub chain_len: usize,
    pub n_chains: usize,
}

impl Layout {
    pub fn new(chain_len: usize, n_chains: usize) -> Layout {
        assert!(chain_len >= 1 && n_chains >= 1);
        Layout { chain_len, n_chains }
    }

    pub fn n_qubits(&self) -> usize {
        self.chain_len * self.n_chains
    }

    pub fn qubit(&self, chain: usize, site: usize) -> usize {
        assert!(chain < self.n_chains && site < self.chain_len);
        chain * self.chain_len + site
    }

    pub fn chain(&self, chain: usize) -> Vec<usize> {
        (0..self.chain_len).map(|i| self.qubit(chain, i)).collect()
    }
}

fn pair(n: usize, a: usize, b: usize, l: Letter) -> PauliString {
    PauliString::from_sparse(n, &[(a, l), (b, l)])
}

/// One term per nearest-neighbour XX bond along `qubits`.
pub fn chain_bonds(n: usize, qubits: &[usize]) -> Vec<PauliString> {
    qubits.windows(2).map(|w| pair(n, w[0], w[1], Letter::X)).collect()
}

/// XX chain on `qubits` with coupling `g`.
pub fn xx_chain(n: usize, qubits: &[usize], g: f64) -> TermGroup {
    TermGroup::new("xx", chain_bonds(n, qubits), g)
}

/// Uniform Z field `g` on `qubits`.
pub fn z_fields(n: usize, qubits: &[usize], g: f64) -> TermGroup {
    let terms = qubits.iter().map(|&q| PauliString::from_sparse(n, &[(q, Letter::Z)])).collect();
    TermGroup::new("z", terms, g)
}

/// Length-`l` XX chain with a uniform Z field.
pub fn single_chain(l: usize, g_xx: f64, g_z: f64) -> Vec<TermGroup> {
    let q: Vec<usize> = (0..l).collect();
    vec![xx_chain(l, &q, g_xx), z_fields(l, &q, g_z)]
}

/// Length-`l` XX chain with site-dependent Z fields.
pub fn chain_with_fields(l: usize, g_xx: f64, fields: &[f64]) -> Vec<TermGroup> {
    assert_eq!(fields.len(), l, "one field per site");
    let q: Vec<usize> = (0..l).collect();
    let mut groups = vec![xx_chain(l, &q, g_xx)];
    groups.extend(fields.iter().enumerate().map(|(i, &h)| z_fields(l, &[i], h)));
    groups
}

/// Two parallel length-`l` chains joined by `l` ZZ rungs.
pub fn ladder(l: usize, g_xx: f64, g_zz: f64) -> Vec<TermGroup> {
    let lay = Layout::new(l, 2);
    let n = lay.n_qubits();
    let mut bonds = chain_bonds(n, &lay.chain(0));
    bonds.extend(chain_bonds(n, &lay.chain(1)));
    let rungs = (0..l).map(|i| pair(n, lay.qubit(0, i), lay.qubit(1, i), Letter::Z)).collect();
    vec![TermGroup::new("xx", bonds, g_xx), TermGroup::new("zz", rungs, g_zz)]
}

/// Chain whose bond `i` reads `-g_xx XX + |g_yy[i]| YY - 0.2|g_yy[i]| ZZ`,
/// plus a uniform Z field.
pub fn imperfect_chain(l: usize, g_xx: f64, g_yy: &[f64], g_z: f64) -> Vec<TermGroup> {
    assert_eq!(g_yy.len(), l.saturating_sub(1), "one g_yy draw per bond");
    let q: Vec<usize> = (0..l).collect();
    let mut groups = vec![xx_chain(l, &q, g_xx)];
    for (i, &y) in g_yy.iter().enumerate() {
        let a = y.abs();
        groups.push(TermGroup::new(format!("yy{i}"), vec![pair(l, i, i + 1, Letter::Y)], -a));
        groups.push(TermGroup::new(format!("zz{i}"), vec![pair(l, i, i + 1, Letter::Z)], 0.2 * a));
    }
    groups.push(z_fields(l, &q, g_z));
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_indices() {
        let lay = Layout::new(3, 3);
        assert_eq!(lay.chain(1), vec![3, 4, 5]);
        assert_eq!(lay.qubit(2, 0), 6);
    }

    #[test]
    fn imperfect_signs() {
        let g = imperfect_chain(2, 1.0, &[-0.02], 0.0);
        // +|g_yy| YY enters as -(-|g_yy|)·YY
        assert_eq!(g[1].terms[0].to_string(), "-YY");
        assert!((g[1].base_strength - 0.02).abs() < 1e-15);
        assert_eq!(g[2].terms[0].to_string(), "ZZ");
        assert!((g[2].base_strength - 0.004).abs() < 1e-15);
    }
}
