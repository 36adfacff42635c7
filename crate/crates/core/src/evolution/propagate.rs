use num_complex::Complex64 as C64;

use crate::control::{NoiseSet, Schedule};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Chebyshev coefficients below this magnitude are dropped.
const CHEB_CUTOFF: f64 = 1e-18;

/// Bessel functions J_0..=J_kmax at `rho` by Miller's downward recurrence.
pub(crate) fn bessel_j_sequence(rho: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if rho == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = kmax.max(rho as usize) + 20 + (40.0 * (kmax.max(rho as usize) as f64 + 1.0)).sqrt() as usize;
    let top = top + top % 2;
    let mut vals = vec![0.0; top + 2];
    vals[top] = 1e-300;
    for k in (1..=top).rev() {
        vals[k - 1] = 2.0 * k as f64 / rho * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm: f64 = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    for k in 0..=kmax {
        out[k] = vals[k] / norm;
    }
    out
}

#[derive(Clone, Debug)]
struct CompiledGroup {
    /// Unit diagonal: Σ_p -p over the group's Z-type strings.
    diag: Option<Vec<f64>>,
    /// Off-diagonal strings as (x, z, unit weight).
    off: Vec<(usize, u64, C64)>,
}

/// Schedule compiled for repeated evaluation of H(t).
#[derive(Clone, Debug)]
pub struct Propagator {
    dim: usize,
    groups: Vec<CompiledGroup>,
}

fn parity(v: u64) -> f64 {
    if v.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn unit_weight(p: &PauliString) -> C64 {
    let (re, im) = p.phase().value();
    -(C64::new(re, im) * C64::i().powu(p.y_count()))
}

/// H at one instant, shifted and scaled so its spectrum lies in [-1, 1].
struct StepOp {
    diag: Vec<f64>,
    off: Vec<(usize, u64, C64)>,
    center: f64,
    half_width: f64,
}

impl StepOp {
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for ((yb, xb), d) in y.iter_mut().zip(x).zip(&self.diag) {
            *yb = xb * d;
        }
        for &(xm, z, w) in &self.off {
            if z == 0 {
                if w.im == 0.0 {
                    let wr = w.re;
                    for (b, yb) in y.iter_mut().enumerate() {
                        *yb += x[b ^ xm] * wr;
                    }
                } else {
                    for (b, yb) in y.iter_mut().enumerate() {
                        *yb += x[b ^ xm] * w;
                    }
                }
            } else {
                for (b, yb) in y.iter_mut().enumerate() {
                    let src = b ^ xm;
                    *yb += x[src] * w * parity(src as u64 & z);
                }
            }
        }
    }
}

impl Propagator {
    pub fn new(schedule: &Schedule) -> Result<Propagator> {
        let n = schedule.n_qubits;
        let dim = 1usize << n;
        let mut groups = Vec::with_capacity(schedule.groups.len());
        for g in &schedule.groups {
            let mut diag: Option<Vec<f64>> = None;
            let mut off = Vec::new();
            for p in &g.terms {
                if p.n_qubits() != n {
                    return Err(Error::SizeMismatch { left: n, right: p.n_qubits() });
                }
                if !p.phase().is_real() {
                    return Err(Error::NotHermitian(format!("term {p} has imaginary phase")));
                }
                let w = unit_weight(p);
                if p.x_mask() == 0 {
                    let d = diag.get_or_insert_with(|| vec![0.0; dim]);
                    let z = p.z_mask();
                    for (b, v) in d.iter_mut().enumerate() {
                        *v += w.re * parity(b as u64 & z);
                    }
                } else {
                    off.push((p.x_mask() as usize, p.z_mask(), w));
                }
            }
            groups.push(CompiledGroup { diag, off });
        }
        Ok(Propagator { dim, groups })
    }

    fn step_op(&self, coeffs: &[f64]) -> StepOp {
        let mut diag = vec![0.0; self.dim];
        let mut off = Vec::new();
        for (g, &c) in self.groups.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            if let Some(d) = &g.diag {
                for (a, b) in diag.iter_mut().zip(d) {
                    *a += c * b;
                }
            }
            off.extend(g.off.iter().map(|&(x, z, w)| (x, z, w * c)));
        }
        let radius: f64 = off.iter().map(|t| t.2.norm()).sum();
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - radius;
        let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + radius;
        let center = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo);
        StepOp { diag, off, center, half_width }
    }

    /// Apply exp(-i·2π·H·tau) to each column.
    fn exp_step(&self, op: &mut StepOp, tau: f64, columns: &mut [Vec<C64>], scratch: &mut [Vec<C64>; 3]) {
        let phase = C64::from_polar(1.0, -TWO_PI * tau * op.center);
        if op.off.is_empty() {
            for col in columns.iter_mut() {
                for (v, d) in col.iter_mut().zip(&op.diag) {
                    *v *= C64::from_polar(1.0, -TWO_PI * tau * d);
                }
            }
            return;
        }
        let h = op.half_width;
        for d in op.diag.iter_mut() {
            *d = (*d - op.center) / h;
        }
        for t in op.off.iter_mut() {
            t.2 /= h;
        }
        let rho = TWO_PI * tau * h;
        let kmax = rho.ceil() as usize + 60;
        let j = bessel_j_sequence(rho, kmax);
        let k_last = (0..=kmax).rev().find(|&k| j[k].abs() > CHEB_CUTOFF).unwrap_or(0).max(1);
        // a_k = (2 - δ_k0) (-i)^k J_k(ρ)
        let minus_i = C64::new(0.0, -1.0);
        let coef: Vec<C64> = (0..=k_last)
            .map(|k| minus_i.powu(k as u32) * j[k] * if k == 0 { 1.0 } else { 2.0 })
            .collect();
        let [t0, t1, t2] = scratch;
        for col in columns.iter_mut() {
            t0.copy_from_slice(col);
            op.apply(t0, t1);
            for ((c, a), b) in col.iter_mut().zip(t0.iter()).zip(t1.iter()) {
                *c = a * coef[0] + b * coef[1];
            }
            for ck in coef.iter().skip(2) {
                op.apply(t1, t2);
                for ((v2, v0), c) in t2.iter_mut().zip(t0.iter()).zip(col.iter_mut()) {
                    *v2 = *v2 * 2.0 - v0;
                    *c += *v2 * ck;
                }
                std::mem::swap(t0, t1);
                std::mem::swap(t1, t2);
            }
            for c in col.iter_mut() {
                *c *= phase;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PropagationStats {
    pub steps: usize,
    pub dt: f64,
    pub max_norm_drift: f64,
}

/// Time-ordered evolution under `exp(-i·2π·H(t))` with midpoint steps.
///
/// Each step applies the exact exponential of H at the step midpoint by a
/// Chebyshev expansion truncated once the Bessel weights drop below 1e-18.
pub fn propagate(schedule: &Schedule, noise: &NoiseSet, columns: &mut [Vec<C64>], dt: f64) -> Result<PropagationStats> {
    let prop = Propagator::new(schedule)?;
    propagate_with(&prop, schedule, noise, columns, dt)
}

pub fn propagate_with(
    prop: &Propagator,
    schedule: &Schedule,
    noise: &NoiseSet,
    columns: &mut [Vec<C64>],
    dt: f64,
) -> Result<PropagationStats> {
    let duration = schedule.duration;
    if !(dt > 0.0) || !dt.is_finite() || !(duration >= 0.0) {
        return Err(Error::StepSize { dt, duration });
    }
    for c in columns.iter() {
        if c.len() != prop.dim {
            return Err(Error::DimensionMismatch { expected: prop.dim, found: c.len() });
        }
    }
    let norms0: Vec<f64> = columns.iter().map(|c| norm(c)).collect();
    let steps = if duration == 0.0 { 0 } else { (duration / dt).ceil() as usize };
    let h = if steps == 0 { 0.0 } else { duration / steps as f64 };
    let mut scratch = [vec![C64::new(0.0, 0.0); prop.dim], vec![C64::new(0.0, 0.0); prop.dim], vec![C64::new(0.0, 0.0); prop.dim]];
    for s in 0..steps {
        let t_mid = (s as f64 + 0.5) * h;
        let coeffs = schedule.coefficients_at(t_mid, noise);
        let mut op = prop.step_op(&coeffs);
        prop.exp_step(&mut op, h, columns, &mut scratch);
    }
    let drift = columns.iter().zip(&norms0).map(|(c, n0)| (norm(c) - n0).abs()).fold(0.0, f64::max);
    let bound = 1e-8 * steps.max(1) as f64;
    if drift > bound {
        return Err(Error::NormDrift { drift, bound });
    }
    Ok(PropagationStats { steps, dt: h, max_norm_drift: drift })
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        let j = bessel_j_sequence(1.0, 5);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((j[5] - 2.497_577_302_112_344e-4).abs() < 1e-16);
        let j = bessel_j_sequence(30.0, 90);
        assert!((j[0] - (-0.086_367_983_581_040_23)).abs() < 1e-13);
        let j = bessel_j_sequence(1e-3, 60);
        assert!((j[0] - 1.0).abs() < 1e-6 && j[60] >= 0.0);
    }
}
