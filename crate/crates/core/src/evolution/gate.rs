use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::frame::{inner, logical_frame, FrameOperators, LogicalFrame};
use super::metrics::{cnot, gate_metrics, zz_quarter, GateMetrics, PauliFrame, M4};
use super::propagate::{propagate_with, PropagationStats, Propagator};
use crate::control::{cnot_schedule, CnotParams, GateKind, NoiseParams, NoiseSet, Schedule};
use crate::error::Result;
use crate::operators::Layout;
use crate::pauli::{Letter, PauliString};

/// Default integrator step, ns.
pub const DEFAULT_DT: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct GateRunResult {
    pub u_tilde: M4,
    pub metrics: GateMetrics,
    pub steps: usize,
    pub max_norm_drift: f64,
}

/// Where the logical frames of a noisy run come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FrameMode {
    /// Ground spaces of the noiseless first and last snapshots.
    Snapshot,
    /// Ground spaces of the noisy Hamiltonian at t = 0 and t = T, so that
    /// noise present at the endpoints is not scored as leakage.
    #[default]
    Instantaneous,
}

impl std::str::FromStr for FrameMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<FrameMode> {
        match s {
            "snapshot" => Ok(FrameMode::Snapshot),
            "instantaneous" => Ok(FrameMode::Instantaneous),
            other => Err(crate::Error::InvalidArgument(format!("unknown frame mode {other:?}"))),
        }
    }
}

/// Schedule plus the frames and ideal gate needed to score runs.
#[derive(Clone, Debug)]
pub struct GateSetup {
    pub schedule: Schedule,
    pub initial: LogicalFrame,
    pub fin: LogicalFrame,
    pub ideal: M4,
    pub pauli_frame: PauliFrame,
    pub dt: f64,
    pub frame_mode: FrameMode,
    ops: Option<FrameOperators>,
    propagator: Propagator,
}

fn basis_state(dim: usize, idx: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[idx] = C64::new(1.0, 0.0);
    v
}

/// Logical operators of the CNOT layout: Z̄ = ∏Z over a chain, X̄ = X on the first qubit.
pub fn cnot_frame_operators(chain_len: usize) -> FrameOperators {
    let lay = Layout::new(chain_len, 3);
    let n = lay.n_qubits();
    FrameOperators {
        z_c: PauliString::product_of(n, &lay.chain(0), Letter::Z),
        z_t: PauliString::product_of(n, &lay.chain(2), Letter::Z),
        x_c: PauliString::from_sparse(n, &[(lay.qubit(0, 0), Letter::X)]),
        x_t: PauliString::from_sparse(n, &[(lay.qubit(2, 0), Letter::X)]),
    }
}

/// Computational basis frame of a bare two-qubit register.
fn computational_frame() -> LogicalFrame {
    LogicalFrame {
        basis: [0, 1, 2, 3].map(|k| {
            // control is qubit 0, target qubit 1; basis index bit q is qubit q
            let c = k >> 1;
            let t = k & 1;
            basis_state(4, c | t << 1)
        }),
        labels: [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)],
        gap: f64::INFINITY,
    }
}

impl GateSetup {
    /// Frames from the exact first and last snapshots; Pauli frame identity.
    pub fn new(schedule: Schedule, dt: f64) -> Result<GateSetup> {
        let (initial, fin, ideal, ops) = match schedule.kind {
            GateKind::Cnot { chain_len } => {
                let ops = cnot_frame_operators(chain_len);
                let (g0, c0) = schedule.snapshot_groups(0);
                let last = schedule.snapshot_times.len() - 1;
                let (g1, c1) = schedule.snapshot_groups(last);
                (logical_frame(&g0, &c0, &ops, 1)?, logical_frame(&g1, &c1, &ops, 1)?, cnot(), Some(ops))
            }
            GateKind::Basic => (computational_frame(), computational_frame(), zz_quarter(), None),
            GateKind::Rotation { .. } => {
                return Err(crate::Error::InvalidArgument("rotation schedules are scored with rotation_overlap".into()))
            }
        };
        let propagator = Propagator::new(&schedule)?;
        Ok(GateSetup {
            schedule,
            initial,
            fin,
            ideal,
            pauli_frame: PauliFrame::default(),
            dt,
            frame_mode: FrameMode::default(),
            ops,
            propagator,
        })
    }

    pub fn with_frame_mode(mut self, mode: FrameMode) -> GateSetup {
        self.frame_mode = mode;
        self
    }

    /// Initial and final frames used for a run with `noise`.
    pub fn frames_for(&self, noise: &NoiseSet) -> Result<(LogicalFrame, LogicalFrame)> {
        let silent = noise.traces.iter().all(|t| t.is_none());
        match (&self.ops, self.frame_mode) {
            (Some(ops), FrameMode::Instantaneous) if !silent => {
                let g = &self.schedule.groups;
                let c0 = self.schedule.coefficients_at(0.0, noise);
                let c1 = self.schedule.coefficients_at(self.schedule.duration, noise);
                Ok((logical_frame(g, &c0, ops, 1)?, logical_frame(g, &c1, ops, 1)?))
            }
            _ => Ok((self.initial.clone(), self.fin.clone())),
        }
    }

    /// CNOT setup whose Pauli frame comes from a noiseless run at `t_frame`.
    pub fn cnot(params: &CnotParams, dt: f64, t_frame: f64) -> Result<GateSetup> {
        let mut setup = GateSetup::new(cnot_schedule(params), dt)?;
        let cal_params = CnotParams { duration: t_frame, noise: NoiseParams::silent(), ..*params };
        let cal = GateSetup::new(cnot_schedule(&cal_params), dt)?;
        let u = cal.simulate(&NoiseSet::silent(cal.schedule.n_channels))?.0;
        setup.pauli_frame = PauliFrame::best_for(&u, &cal.ideal);
        Ok(setup)
    }

    pub fn target(&self) -> M4 {
        self.pauli_frame.matrix() * self.ideal
    }

    /// Evolve the four initial basis states and project on the final frame.
    pub fn simulate(&self, noise: &NoiseSet) -> Result<(M4, PropagationStats)> {
        let (initial, fin) = self.frames_for(noise)?;
        let mut cols: Vec<Vec<C64>> = initial.basis.to_vec();
        let stats = propagate_with(&self.propagator, &self.schedule, noise, &mut cols, self.dt)?;
        let mut u = M4::zeros();
        for j in 0..4 {
            for i in 0..4 {
                u[(i, j)] = inner(&fin.basis[i], &cols[j]);
            }
        }
        Ok((u, stats))
    }

    pub fn run(&self, noise: &NoiseSet) -> Result<GateRunResult> {
        let (u, stats) = self.simulate(noise)?;
        Ok(GateRunResult { metrics: gate_metrics(&u, &self.target()), u_tilde: u, steps: stats.steps, max_norm_drift: stats.max_norm_drift })
    }

    pub fn run_noiseless(&self) -> Result<GateRunResult> {
        self.run(&NoiseSet::silent(self.schedule.n_channels))
    }
}

/// Mean and standard error of one metric.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Estimate {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if values.len() < 2 {
            return Estimate { mean, stderr: 0.0 };
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Estimate { mean, stderr: (var / n).sqrt() }
    }
}

#[derive(Clone, Debug)]
pub struct MonteCarloSummary {
    pub avg_infidelity: Estimate,
    pub ent_infidelity: Estimate,
    pub leakage: Estimate,
    pub runs: Vec<GateRunResult>,
}

/// Channel selection for Monte Carlo noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelFilter {
    All,
    /// Only channels whose groups are Z-type strings.
    ZOnly,
}

/// Independent noise sets per run, sub-seeded by run index; runs execute on
/// the current rayon pool and are reduced in index order.
pub fn monte_carlo_gate(setup: &GateSetup, runs: usize, seed: u64, filter: ChannelFilter) -> Result<MonteCarloSummary> {
    assert!(runs >= 1, "runs must be positive");
    let keep = |c: usize| match filter {
        ChannelFilter::All => true,
        ChannelFilter::ZOnly => setup.schedule.channel_is_z_type(c),
    };
    let results: Vec<Result<GateRunResult>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let noise = setup.schedule.sample_noise(seed, r as u32, &keep)?;
            setup.run(&noise)
        })
        .collect();
    let runs: Vec<GateRunResult> = results.into_iter().collect::<Result<_>>()?;
    let pick = |f: fn(&GateMetrics) -> f64| Estimate::of(&runs.iter().map(|r| f(&r.metrics)).collect::<Vec<_>>());
    Ok(MonteCarloSummary {
        avg_infidelity: pick(|m| m.avg_infidelity),
        ent_infidelity: pick(|m| m.ent_infidelity),
        leakage: pick(|m| m.leakage),
        runs,
    })
}
