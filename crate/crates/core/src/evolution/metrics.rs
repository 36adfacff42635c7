use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

pub type M4 = Matrix4<C64>;

const D: f64 = 4.0;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// CNOT in the |control, target⟩ basis ordering.
pub fn cnot() -> M4 {
    let mut m = M4::zeros();
    m[(0, 0)] = c(1.0);
    m[(1, 1)] = c(1.0);
    m[(2, 3)] = c(1.0);
    m[(3, 2)] = c(1.0);
    m
}

/// exp(i·π/4·Z⊗Z), the ideal basic-gate target.
pub fn zz_quarter() -> M4 {
    let p = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    M4::from_diagonal(&nalgebra::Vector4::new(p, p.conj(), p.conj(), p))
}

/// Single-qubit Pauli index: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli2(k: usize) -> nalgebra::Matrix2<C64> {
    let z = c(0.0);
    let o = c(1.0);
    let i = C64::new(0.0, 1.0);
    match k {
        0 => nalgebra::Matrix2::new(o, z, z, o),
        1 => nalgebra::Matrix2::new(z, o, o, z),
        2 => nalgebra::Matrix2::new(z, -i, i, z),
        _ => nalgebra::Matrix2::new(o, z, z, -o),
    }
}

/// `P_c ⊗ P_t` in the control-first ordering.
pub fn pauli_pair(pc: usize, pt: usize) -> M4 {
    pauli2(pc).kronecker(&pauli2(pt))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GateMetrics {
    pub avg_infidelity: f64,
    pub ent_infidelity: f64,
    pub leakage: f64,
}

/// Caption metrics for a simulated subspace map `u_tilde` against the unitary `u`.
pub fn gate_metrics(u_tilde: &M4, u: &M4) -> GateMetrics {
    let tuu = (u_tilde.adjoint() * u_tilde).trace().re;
    let overlap = (u_tilde.adjoint() * u).trace().norm_sqr();
    GateMetrics {
        avg_infidelity: 1.0 - (tuu + overlap) / (D * (D + 1.0)),
        ent_infidelity: 1.0 - overlap / (D * D),
        leakage: 1.0 - tuu / D,
    }
}

/// Fixed Pauli correction composed with the ideal gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PauliFrame {
    pub control: usize,
    pub target: usize,
}

impl PauliFrame {
    pub fn matrix(&self) -> M4 {
        pauli_pair(self.control, self.target)
    }

    /// Frame maximizing `|Tr(Ũ† P·G)|` over the 16 two-qubit Paulis.
    pub fn best_for(u_tilde: &M4, gate: &M4) -> PauliFrame {
        let mut best = (PauliFrame::default(), -1.0);
        for pc in 0..4 {
            for pt in 0..4 {
                let f = PauliFrame { control: pc, target: pt };
                let v = (u_tilde.adjoint() * f.matrix() * gate).trace().norm();
                if v > best.1 + 1e-12 {
                    best = (f, v);
                }
            }
        }
        best.0
    }

    pub fn label(&self) -> String {
        const L: [char; 4] = ['I', 'X', 'Y', 'Z'];
        format!("{}{}", L[self.control], L[self.target])
    }
}

/// Weight of error components containing X or Y on either logical qubit:
/// `Σ |Tr(P E)/4|²` over such P, with `E = U† Ũ`.
pub fn xy_error_weight(u_tilde: &M4, u: &M4) -> f64 {
    let e = u.adjoint() * u_tilde;
    let mut w = 0.0;
    for pc in 0..4 {
        for pt in 0..4 {
            let z_type = (pc == 0 || pc == 3) && (pt == 0 || pt == 3);
            if z_type {
                continue;
            }
            w += ((pauli_pair(pc, pt) * e).trace() / D).norm_sqr();
        }
    }
    w
}
