//! Values computed once by independent dense scripts (numpy `eigh`, exact
//! per-step exponentials at dt = 0.01 ns, scipy `brentq`) and frozen here.

use xxchain::control::{cnot_schedule, CnotParams, NoiseParams};
use xxchain::evolution::{GateSetup, DEFAULT_DT};
use xxchain::operators::{doublet_coupling, ladder};

/// (L, T, avg, ent, leakage) of the noiseless CNOT at g = 2.5.
const NOISELESS_CNOT: [(usize, f64, f64, f64, f64); 5] = [
    (2, 10.0, 5.813148311614613e-3, 5.814844929400542e-3, 5.806361840470786e-3),
    (2, 30.0, 2.476401395057337e-8, 2.4764014061595674e-8, 2.4764013728528766e-8),
    (3, 20.0, 2.4592630417491712e-2, 2.4623324525681944e-2, 2.4469853984731005e-2),
    (3, 40.0, 2.3324496505472414e-4, 2.3324768559618292e-4, 2.33234082888778e-4),
    (3, 80.0, 2.450911007478851e-8, 2.4509110185810812e-8, 2.450911007478851e-8),
];

/// g_ZZ/g_XX where the ladder's logical coupling falls to 1e-5·g_XX.
const TURN_OFF: [(usize, f64); 3] = [(2, 0.004472147135464739), (3, 0.034202853565466186), (4, 0.09462716291084297)];

#[test]
fn noiseless_cnot_matches_dense_reference() {
    for (l, t, avg, ent, leak) in NOISELESS_CNOT {
        let s = cnot_schedule(&CnotParams::uniform(l, 2.5, t, NoiseParams::silent()));
        let m = GateSetup::new(s, DEFAULT_DT).unwrap().run_noiseless().unwrap().metrics;
        for (got, want) in [(m.avg_infidelity, avg), (m.ent_infidelity, ent), (m.leakage, leak)] {
            assert!((got / want - 1.0).abs() < 0.01, "L={l} T={t}: {got} vs {want}");
        }
    }
}

fn coupling(l: usize, r: f64) -> f64 {
    doublet_coupling(&ladder(l, 1.0, r), &[1.0, r]).unwrap().coupling
}

#[test]
fn ladder_turn_off_matches_dense_reference() {
    for (l, want) in TURN_OFF {
        // Bisection in log r on the monotone low-strength branch.
        let (mut lo, mut hi) = (1e-4f64, 0.9f64);
        for _ in 0..60 {
            let mid = (lo * hi).sqrt();
            if coupling(l, mid) < 1e-5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let got = (lo * hi).sqrt();
        assert!((got / want - 1.0).abs() < 1e-6, "L={l}: {got} vs {want}");
    }
}

#[test]
fn ladder_maximum_coupling_at_two_sites() {
    // max over r of half the doublet separation, √2 − 1 at r = 1.
    let best = (1..200).map(|i| coupling(2, 0.5 + i as f64 * 0.005)).fold(0.0, f64::max);
    assert!((best - (2f64.sqrt() - 1.0)).abs() < 1e-9, "{best}");
}
