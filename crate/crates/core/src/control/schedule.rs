use super::envelope::{Envelope, BASIC_WIDTH_FRACTION};
use super::noise::{make_noise, NoiseParams, NoiseTrace};
use crate::error::Result;
use crate::operators::{chain_bonds, Layout, NoiseMode, TermGroup};
use crate::pauli::{Letter, PauliString};
use crate::seed::seed_stream;

/// Which gate a schedule implements; used to choose frames and targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Cnot { chain_len: usize },
    Basic,
    Rotation { chain_len: usize },
}

/// Time-dependent Hamiltonian of one gate.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub kind: GateKind,
    pub n_qubits: usize,
    pub duration: f64,
    pub groups: Vec<TermGroup>,
    pub envelopes: Vec<Envelope>,
    pub n_channels: usize,
    pub noise: NoiseParams,
    pub snapshot_times: Vec<f64>,
    /// Qubits before which a ';' is displayed.
    pub separators: Vec<usize>,
}

/// Noise traces indexed by channel; `None` channels are silent.
#[derive(Clone, Debug, Default)]
pub struct NoiseSet {
    pub traces: Vec<Option<NoiseTrace>>,
}

impl NoiseSet {
    pub fn silent(n_channels: usize) -> NoiseSet {
        NoiseSet { traces: vec![None; n_channels] }
    }

    pub fn value(&self, channel: usize, t: f64) -> f64 {
        self.traces.get(channel).and_then(|c| c.as_ref()).map_or(0.0, |tr| tr.at(t))
    }
}

impl Schedule {
    pub fn envelope_value(&self, group: &TermGroup, t: f64) -> f64 {
        group.envelope.map_or(1.0, |e| self.envelopes[e].value(t))
    }

    /// Per-group coefficients at time `t`.
    pub fn coefficients_at(&self, t: f64, noise: &NoiseSet) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| {
                let env = self.envelope_value(g, t);
                match g.noise {
                    None => g.base_strength * env,
                    Some(b) => {
                        let n = noise.value(b.channel, t);
                        match b.mode {
                            NoiseMode::Additive => g.base_strength * env + n,
                            NoiseMode::Multiplicative => env * (g.base_strength + n),
                        }
                    }
                }
            })
            .collect()
    }

    /// Terms that are on (envelope above one half, nonzero strength) at snapshot `k`.
    pub fn snapshot_terms(&self, k: usize) -> Vec<PauliString> {
        let t = self.snapshot_times[k];
        self.groups
            .iter()
            .filter(|g| g.base_strength > 0.0 && self.envelope_value(g, t) > 0.5)
            .flat_map(|g| g.terms.iter().map(|p| p.clone().with_separators(&self.separators)))
            .collect()
    }

    pub fn snapshots(&self) -> Vec<Vec<PauliString>> {
        (0..self.snapshot_times.len()).map(|k| self.snapshot_terms(k)).collect()
    }

    /// Snapshot `k` as term groups at full base strength.
    pub fn snapshot_groups(&self, k: usize) -> (Vec<TermGroup>, Vec<f64>) {
        let t = self.snapshot_times[k];
        let groups: Vec<TermGroup> = self
            .groups
            .iter()
            .filter(|g| g.base_strength > 0.0 && self.envelope_value(g, t) > 0.5)
            .cloned()
            .collect();
        let coeffs = groups.iter().map(|g| g.base_strength).collect();
        (groups, coeffs)
    }

    /// True when every group on the channel contains only Z-type strings.
    pub fn channel_is_z_type(&self, channel: usize) -> bool {
        self.groups
            .iter()
            .filter(|g| g.noise.map(|b| b.channel) == Some(channel))
            .all(|g| g.terms.iter().all(|p| p.x_mask() == 0))
    }

    /// Independent traces for one Monte Carlo run; channels rejected by
    /// `keep` stay silent.
    pub fn sample_noise(&self, master_seed: u64, run: u32, keep: &dyn Fn(usize) -> bool) -> Result<NoiseSet> {
        let mut traces = Vec::with_capacity(self.n_channels);
        for c in 0..self.n_channels {
            if self.noise.rms == 0.0 || !keep(c) {
                traces.push(None);
                continue;
            }
            let seed = seed_stream(master_seed, run, c as u32);
            traces.push(Some(make_noise(seed, c, self.duration, &self.noise)?));
        }
        Ok(NoiseSet { traces })
    }
}

/// Strengths of the CNOT schedule, all Pauli coefficients in h·GHz.
#[derive(Clone, Copy, Debug)]
pub struct CnotParams {
    pub chain_len: usize,
    pub g_xx: f64,
    pub g_zz: f64,
    pub g_z: f64,
    pub g_x: f64,
    pub duration: f64,
    pub noise: NoiseParams,
}

impl CnotParams {
    pub fn uniform(chain_len: usize, g: f64, duration: f64, noise: NoiseParams) -> CnotParams {
        CnotParams { chain_len, g_xx: g, g_zz: g, g_z: g, g_x: g, duration, noise }
    }
}

/// Adiabatic CNOT on chains c (control), a (ancilla), t (target) of length L,
/// qubits ordered c1..cL, a1..aL, t1..tL.
///
/// Snapshots at 0, T/3, 2T/3, T:
/// H1 = chains + Z fields on a; H2 = chains + XX bridge a_L t_1;
/// H3 = chains + ZZ rungs c_i a_i; H4 = chains + X field on a_L.
pub fn cnot_schedule(p: &CnotParams) -> Schedule {
    let l = p.chain_len;
    assert!(l >= 2, "chain length must be at least 2");
    let t = p.duration;
    let lay = Layout::new(l, 3);
    let n = lay.n_qubits();
    let (c, a, tq) = (lay.chain(0), lay.chain(1), lay.chain(2));

    let envelopes = vec![
        Envelope::start(t),
        Envelope::middle(t, t / 3.0),
        Envelope::middle(t, 2.0 * t / 3.0),
        Envelope::end(t),
    ];
    let (start, bridge_env, rung_env, end) = (0, 1, 2, 3);

    let mut groups = Vec::new();
    let mut ch = 0usize;
    for (name, chain) in [("c", &c), ("a", &a), ("t", &tq)] {
        for (i, bond) in chain_bonds(n, chain).into_iter().enumerate() {
            groups.push(TermGroup::new(format!("xx_{name}{}", i + 1), vec![bond], p.g_xx).with_noise(ch, NoiseMode::Multiplicative));
            ch += 1;
        }
    }
    let fields = a.iter().map(|&q| PauliString::from_sparse(n, &[(q, Letter::Z)])).collect();
    groups.push(TermGroup::new("z_a", fields, p.g_z).with_envelope(start).with_noise(ch, NoiseMode::Additive));
    ch += 1;
    let rungs = (0..l).map(|i| PauliString::from_sparse(n, &[(c[i], Letter::Z), (a[i], Letter::Z)])).collect();
    groups.push(TermGroup::new("zz_ca", rungs, p.g_zz).with_envelope(rung_env).with_noise(ch, NoiseMode::Additive));
    ch += 1;
    let bridge = PauliString::from_sparse(n, &[(a[l - 1], Letter::X), (tq[0], Letter::X)]);
    groups.push(TermGroup::new("xx_bridge", vec![bridge], p.g_xx).with_envelope(bridge_env).with_noise(ch, NoiseMode::Multiplicative));
    ch += 1;
    let xf = PauliString::from_sparse(n, &[(a[l - 1], Letter::X)]);
    groups.push(TermGroup::new("x_a", vec![xf], p.g_x).with_envelope(end).with_noise(ch, NoiseMode::Multiplicative));
    ch += 1;
    ch = push_ambient(&mut groups, n, ch);

    Schedule {
        kind: GateKind::Cnot { chain_len: l },
        n_qubits: n,
        duration: t,
        groups,
        envelopes,
        n_channels: ch,
        noise: p.noise,
        snapshot_times: vec![0.0, t / 3.0, 2.0 * t / 3.0, t],
        separators: vec![l],
    }
}

/// One zero-strength additive Z channel per qubit.
fn push_ambient(groups: &mut Vec<TermGroup>, n: usize, mut ch: usize) -> usize {
    for q in 0..n {
        let z = PauliString::from_sparse(n, &[(q, Letter::Z)]);
        groups.push(TermGroup::new(format!("ambient_{q}"), vec![z], 0.0).with_noise(ch, NoiseMode::Additive));
        ch += 1;
    }
    ch
}

/// Unprotected two-qubit ZZ gate: one pulse centred at T/2 with width 0.85T.
pub fn basic_gate_schedule(duration: f64, amplitude: f64, noise: NoiseParams) -> Schedule {
    let n = 2;
    let zz = PauliString::from_sparse(n, &[(0, Letter::Z), (1, Letter::Z)]);
    let env = Envelope::middle_with_width(duration, duration / 2.0, BASIC_WIDTH_FRACTION * duration);
    let mut groups = vec![TermGroup::new("zz", vec![zz], amplitude).with_envelope(0).with_noise(0, NoiseMode::Additive)];
    let ch = push_ambient(&mut groups, n, 1);
    Schedule {
        kind: GateKind::Basic,
        n_qubits: n,
        duration,
        groups,
        envelopes: vec![env],
        n_channels: ch,
        noise,
        snapshot_times: vec![0.0, duration],
        separators: vec![],
    }
}

/// Single chain with a middle-pulse X field on its first qubit.
pub fn rotation_schedule(chain_len: usize, g_xx: f64, g_x_amp: f64, duration: f64, noise: NoiseParams) -> Schedule {
    let n = chain_len;
    let q: Vec<usize> = (0..n).collect();
    let mut groups = Vec::new();
    let mut ch = 0;
    for (i, bond) in chain_bonds(n, &q).into_iter().enumerate() {
        groups.push(TermGroup::new(format!("xx_{}", i + 1), vec![bond], g_xx).with_noise(ch, NoiseMode::Multiplicative));
        ch += 1;
    }
    let x1 = PauliString::from_sparse(n, &[(0, Letter::X)]);
    groups.push(TermGroup::new("x_1", vec![x1], g_x_amp).with_envelope(0).with_noise(ch, NoiseMode::Multiplicative));
    ch += 1;
    ch = push_ambient(&mut groups, n, ch);
    Schedule {
        kind: GateKind::Rotation { chain_len },
        n_qubits: n,
        duration,
        groups,
        envelopes: vec![Envelope::middle(duration, duration / 2.0)],
        n_channels: ch,
        noise,
        snapshot_times: vec![0.0, duration],
        separators: vec![],
    }
}

/// Bloch-sphere angle of the logical X rotation produced by `rotation_schedule`.
/// The pulse contributes `exp(i·2π·g·∫env·X̄)`, a rotation by twice that phase.
pub fn rotation_angle(g_x_amp: f64, duration: f64) -> f64 {
    4.0 * std::f64::consts::PI * g_x_amp * Envelope::middle(duration, duration / 2.0).integral(0.0, duration)
}

/// Two length-2 logical qubits joined through `n_anc` ancillas into one XX
/// path of `4 + n_anc` qubits, with Z fields on the ancillas.
pub fn tunable_xx_terms(n_anc: usize, g_xx: f64, g_z: f64) -> Vec<TermGroup> {
    let n = 4 + n_anc;
    let q: Vec<usize> = (0..n).collect();
    let anc: Vec<usize> = (2..2 + n_anc).collect();
    let mut groups = vec![TermGroup::new("xx", chain_bonds(n, &q), g_xx)];
    if n_anc > 0 {
        let fields = anc.iter().map(|&i| PauliString::from_sparse(n, &[(i, Letter::Z)])).collect();
        groups.push(TermGroup::new("z_anc", fields, g_z));
    }
    groups
}
