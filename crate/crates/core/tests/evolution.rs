mod common;

use common::{c, loglog_slope};
use num_complex::Complex64 as C64;
use xxchain::control::{
    basic_area_amplitude, basic_gate_schedule, cnot_schedule, rotation_angle, rotation_schedule, CnotParams, GateKind,
    NoiseParams, NoiseSet, Schedule,
};
use xxchain::evolution::{
    cnot, exact_logical_x_error, gate_metrics, logical_frame, majority, max_agreement, monte_carlo_gate, pauli_pair,
    propagate, rotation_run, sample_logical_x, squeeze_z_check, thermal_factor, x_ground_state, x_outcome_distribution,
    cnot_frame_operators, ChannelFilter, GateSetup, PauliFrame, M4, DEFAULT_DT,
};
use xxchain::operators::TermGroup;
use xxchain::pauli::PauliString;
use xxchain::seed::seed_stream;

const NOISE: NoiseParams = NoiseParams { rms: 0.002, bandwidth: 0.25, dt: NoiseParams::DEFAULT_DT };

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn cnot_setup(l: usize, t: f64, noise: NoiseParams) -> GateSetup {
    GateSetup::new(cnot_schedule(&CnotParams::uniform(l, 2.5, t, noise)), DEFAULT_DT).unwrap()
}

#[test]
fn constant_field_rotates_single_qubit() {
    let (g, t) = (0.3, 2.0);
    let schedule = Schedule {
        kind: GateKind::Basic,
        n_qubits: 1,
        duration: t,
        groups: vec![TermGroup::new("x", vec!["X".parse().unwrap()], g)],
        envelopes: vec![],
        n_channels: 0,
        noise: NoiseParams::silent(),
        snapshot_times: vec![0.0, t],
        separators: vec![],
    };
    let mut cols = vec![vec![c(1.0, 0.0), c(0.0, 0.0)]];
    propagate(&schedule, &NoiseSet::silent(0), &mut cols, 0.01).unwrap();
    let phi = 2.0 * std::f64::consts::PI * g * t;
    assert!((cols[0][0] - c(phi.cos(), 0.0)).norm() < 1e-10);
    assert!((cols[0][1] - c(0.0, phi.sin())).norm() < 1e-10);
}

#[test]
fn cnot_runs_preserve_norm() {
    let setup = cnot_setup(2, 40.0, NOISE);
    assert!(setup.run_noiseless().unwrap().max_norm_drift < 1e-9);
    let noise = setup.schedule.sample_noise(5, 0, &|_| true).unwrap();
    assert!(setup.run(&noise).unwrap().max_norm_drift < 1e-9);
}

#[test]
fn halving_the_step_is_converged() {
    let coarse = cnot_setup(2, 50.0, NoiseParams::silent()).run_noiseless().unwrap().metrics.avg_infidelity;
    let fine = GateSetup::new(cnot_schedule(&CnotParams::uniform(2, 2.5, 50.0, NoiseParams::silent())), DEFAULT_DT / 2.0)
        .unwrap()
        .run_noiseless()
        .unwrap()
        .metrics
        .avg_infidelity;
    let diff = (coarse - fine).abs();
    assert!(diff < 0.1 * fine || diff < 1e-10, "{coarse} vs {fine}");
}

#[test]
fn first_snapshot_labels_are_exact() {
    let s = cnot_schedule(&CnotParams::uniform(2, 2.5, 60.0, NoiseParams::silent()));
    let (g, cf) = s.snapshot_groups(0);
    let f = logical_frame(&g, &cf, &cnot_frame_operators(2), 1).unwrap();
    let expected = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    for (got, want) in f.labels.iter().zip(expected) {
        assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12, "{got:?}");
    }
    assert!(f.orthonormality_error() < 1e-12);
}

#[test]
fn iterative_frames_are_orthonormal_and_seed_independent() {
    let s = cnot_schedule(&CnotParams::uniform(3, 2.5, 60.0, NoiseParams::silent()));
    let ops = cnot_frame_operators(3);
    for k in [0, 3] {
        let (g, cf) = s.snapshot_groups(k);
        let a = logical_frame(&g, &cf, &ops, 1).unwrap();
        let b = logical_frame(&g, &cf, &ops, 987_654).unwrap();
        assert!(a.orthonormality_error() < 1e-10);
        assert!(a.distance(&b) < 1e-9, "distance {}", a.distance(&b));
    }
}

fn phase_gate(theta: f64) -> M4 {
    let mut d = M4::identity();
    d[(3, 3)] = C64::from_polar(1.0, theta);
    d
}

#[test]
fn metric_formulas() {
    let m = gate_metrics(&cnot(), &cnot());
    assert!(m.avg_infidelity.abs() < 1e-15 && m.ent_infidelity.abs() < 1e-15);
    for theta in [1e-3, 1e-2, 0.05] {
        let u = cnot();
        let m = gate_metrics(&(u * phase_gate(theta)), &u);
        let ent = 1.0 - (10.0 + 6.0 * theta.cos()) / 16.0;
        assert!((m.ent_infidelity - ent).abs() < 1e-14);
        assert!((m.ent_infidelity / m.avg_infidelity - 1.25).abs() < 1e-8);
        assert!((m.avg_infidelity / (3.0 * theta * theta / 20.0) - 1.0).abs() < 1e-3);
        assert!(m.leakage.abs() < 1e-14);
    }
}

#[test]
fn pure_leakage_has_unit_ratio() {
    let u = cnot();
    let m = gate_metrics(&(u * c(0.99f64.sqrt(), 0.0)), &u);
    assert!((m.leakage - 0.01).abs() < 1e-14);
    assert!((m.avg_infidelity - 0.01).abs() < 1e-14);
    assert!((m.ent_infidelity - 0.01).abs() < 1e-14);
}

#[test]
fn pauli_frame_recovers_inserted_correction() {
    for pc in 0..4 {
        for pt in 0..4 {
            let u = pauli_pair(pc, pt) * cnot() * phase_gate(0.01);
            let f = PauliFrame::best_for(&u, &cnot());
            assert_eq!((f.control, f.target), (pc, pt));
        }
    }
}

#[test]
fn single_silent_run_equals_deterministic_result() {
    let setup = cnot_setup(2, 30.0, NoiseParams::silent());
    let mc = monte_carlo_gate(&setup, 1, 3, ChannelFilter::All).unwrap();
    let det = setup.run_noiseless().unwrap();
    assert_eq!(mc.avg_infidelity.mean, det.metrics.avg_infidelity);
    assert_eq!(mc.avg_infidelity.stderr, 0.0);
}

#[test]
fn monte_carlo_is_thread_count_independent() {
    let setup = cnot_setup(2, 30.0, NOISE);
    let a = pool(1).install(|| monte_carlo_gate(&setup, 6, 17, ChannelFilter::All).unwrap());
    let b = pool(3).install(|| monte_carlo_gate(&setup, 6, 17, ChannelFilter::All).unwrap());
    for (x, y) in a.runs.iter().zip(&b.runs) {
        assert_eq!(x.u_tilde, y.u_tilde);
    }
    assert_eq!(a.avg_infidelity, b.avg_infidelity);
    // Run r depends only on (seed, r).
    let noise = setup.schedule.sample_noise(17, 4, &|_| true).unwrap();
    assert_eq!(setup.run(&noise).unwrap().u_tilde, a.runs[4].u_tilde);
}

#[test]
fn noiseless_protected_error_falls_exponentially() {
    let times = [20.0, 30.0, 40.0, 50.0];
    let errs: Vec<f64> =
        times.iter().map(|&t| cnot_setup(2, t, NoiseParams::silent()).run_noiseless().unwrap().metrics.avg_infidelity).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    // Exponential rather than power law: the log-log slope steepens.
    let early = loglog_slope(&times[..2], &errs[..2]);
    let late = loglog_slope(&times[2..], &errs[2..]);
    assert!(late < early && late < -10.0, "{errs:?}");
}

#[test]
fn basic_gate_noise_level_at_ten_ns() {
    let t = 10.0;
    let setup = GateSetup::new(basic_gate_schedule(t, basic_area_amplitude(t), NOISE), DEFAULT_DT).unwrap();
    let mc = monte_carlo_gate(&setup, 100, 1, ChannelFilter::All).unwrap();
    assert!((3e-3..=3e-2).contains(&mc.avg_infidelity.mean), "{}", mc.avg_infidelity.mean);
    assert!(mc.leakage.mean.abs() < 1e-12);
}

#[test]
fn readout_is_perfect_without_field() {
    for l in 2..=6 {
        let psi = x_ground_state(l, 1.0, 0.0).unwrap();
        let dist = x_outcome_distribution(&psi);
        assert!(exact_logical_x_error(&dist, l, 0.0) < 1e-12);
    }
}

#[test]
fn readout_floor_from_measurement_error() {
    let p = 1e-3;
    // |++⟩ under independent flips: wrong on two flips, a coin toss on one.
    let oracle = p * p + 0.5 * 2.0 * p * (1.0 - p);
    let psi = x_ground_state(2, 1.0, 0.01).unwrap();
    let exact = exact_logical_x_error(&x_outcome_distribution(&psi), 2, p);
    assert!(exact / oracle < 3.0 && oracle / exact < 3.0, "{exact} vs {oracle}");
    let sampled = sample_logical_x(&psi, 2, 1_000_000, p, 9).unwrap();
    let sd = (exact / 1e6).sqrt();
    assert!((sampled - exact).abs() < 5.0 * sd, "{sampled} vs {exact}");
}

#[test]
fn decoders_agree_on_repetition_codes() {
    for l in 1..=7 {
        for bits in 0..(1u64 << l) {
            assert_eq!(majority(bits, l), max_agreement(bits, l));
        }
    }
}

#[test]
fn squeeze_examples() {
    let r = squeeze_z_check(3, 1.0, 10.0, 3).unwrap();
    assert!(r.min_abs_zk >= 0.99 && r.signs_match);
    let r0 = squeeze_z_check(3, 0.0, 10.0, 3).unwrap();
    assert_eq!(r0.min_abs_zk, 1.0);
    assert!(r0.signs_match);
}

#[test]
fn thermal_examples() {
    let a = thermal_factor(5.0, 40.0).unwrap();
    assert!((a - 403.0).abs() < 1.0, "{a}");
    let b = thermal_factor(10.0, 40.0).unwrap();
    assert!((b / 1.63e5 - 1.0).abs() < 0.01, "{b}");
    assert_eq!(thermal_factor(0.0, 40.0).unwrap(), 1.0);
    assert!(thermal_factor(5.0, 0.0).is_err());
}

fn pi_amplitude(t: f64) -> f64 {
    std::f64::consts::PI / rotation_angle(1.0, t)
}

#[test]
fn logical_pi_rotation_flips_the_chain() {
    let t = 20.0;
    let a = pi_amplitude(t);
    let r = rotation_run(&rotation_schedule(3, 2.5, a, t, NoiseParams::silent()), &NoiseSet::silent(7), DEFAULT_DT).unwrap();
    assert!((r.flip_probability - 1.0).abs() < 1e-9, "{}", r.flip_probability);
    assert!(r.leakage.abs() < 1e-9);
}

#[test]
fn rotation_angle_error_is_linear_in_amplitude_error() {
    let t = 20.0;
    let a = pi_amplitude(t);
    for eps in [-0.02, -0.005, 0.01, 0.03] {
        let s = rotation_schedule(3, 2.5, a * (1.0 + eps), t, NoiseParams::silent());
        let r = rotation_run(&s, &NoiseSet::silent(s.n_channels), DEFAULT_DT).unwrap();
        let err = r.angle - std::f64::consts::PI;
        assert!((err - std::f64::consts::PI * eps).abs() < 1e-8, "eps {eps}: {err}");
    }
}

#[test]
fn zero_amplitude_rotation_is_identity() {
    let s = rotation_schedule(2, 2.5, 0.0, 20.0, NoiseParams::silent());
    let r = rotation_run(&s, &NoiseSet::silent(s.n_channels), DEFAULT_DT).unwrap();
    assert!(r.flip_probability < 1e-20);
    assert!(r.angle < 1e-9 || (2.0 * std::f64::consts::PI - r.angle) < 1e-9);
}

#[test]
fn operator_images_of_the_frame() {
    // X̄_c maps |00⟩ to |10⟩ inside the first snapshot's ground space.
    let s = cnot_schedule(&CnotParams::uniform(2, 2.5, 60.0, NoiseParams::silent()));
    let (g, cf) = s.snapshot_groups(0);
    let ops = cnot_frame_operators(2);
    let f = logical_frame(&g, &cf, &ops, 1).unwrap();
    let img = xxchain::evolution::apply_pauli(&ops.x_c, &f.basis[0]);
    let ov = xxchain::evolution::inner(&f.basis[2], &img);
    assert!((ov.norm() - 1.0).abs() < 1e-10);
    let zc: &PauliString = &ops.z_c;
    assert!((xxchain::evolution::expectation(zc, &f.basis[3]).re + 1.0).abs() < 1e-12);
}

#[test]
fn noisy_frame_tolerates_split_excited_cluster() {
    // run 80 of this stream puts the fifth level of H(T) in a pair split by ~4e-10
    let params = CnotParams::uniform(3, 2.5, 100.0, NoiseParams::new(0.002, 0.25));
    let setup = GateSetup::cnot(&params, DEFAULT_DT, 100.0).unwrap();
    let noise = setup.schedule.sample_noise(seed_stream(1, 1, u32::MAX), 80, &|_| true).unwrap();
    let (a, b) = setup.frames_for(&noise).unwrap();
    assert!(a.gap > 1.0 && b.gap > 1.0);
}
