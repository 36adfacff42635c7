//! Figure-level experiment drivers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::config::{Config, Params};
use super::table::{ResultTable, Value};
use crate::control::{
    basic_gate_schedule, calibrate_basic_amplitude_with, cnot_schedule, rotation_angle, rotation_schedule,
    tunable_xx_terms, CnotParams, NoiseParams, NoiseSet,
};
use crate::error::{Error, Result};
use crate::evolution::{
    cnot_frame_operators, exact_logical_x_error, monte_carlo_gate, rotation_run, sample_logical_x, squeeze_z_check,
    thermal_factor, x_ground_state, x_outcome_distribution, xy_error_weight, ChannelFilter, Estimate, FrameMode,
    GateSetup, MonteCarloSummary,
};
use crate::operators::{
    base_coefficients, chain_with_fields, doublet_coupling, eigs_low, imperfect_chain, ladder, single_chain, DoubletCoupling,
};
use crate::pauli::{bias_check, verify_flow, Letter, LogicalSet, PauliString};
use crate::seed::seed_stream;

type Row = Vec<Value>;
type Defaults = &'static [(&'static str, &'static str)];

pub const SUBCOMMANDS: [&str; 13] = [
    "chain-spectrum",
    "chain-splitting",
    "readout-error",
    "transistor-zz",
    "transistor-xx",
    "cnot",
    "basic-gate",
    "yyzz",
    "bias-check",
    "verify-flow",
    "squeeze",
    "rotate-x",
    "thermal-factor",
];

const NOISE: [(&str, &str); 2] = [("noise_rms_mhz", "2"), ("noise_bw_ghz", "0.25")];

/// Accepted keys of a subcommand with their default values.
pub fn defaults(subcommand: &str) -> Option<Defaults> {
    Some(match subcommand {
        "chain-spectrum" => &[("chain_length", "range:2:6"), ("g_xx_ghz", "1"), ("seed", "1")],
        "chain-splitting" => &[
            ("chain_length", "range:2:6"),
            ("g_z_ratio", "log:0.01:1:25"),
            ("g_xx_ghz", "1"),
            ("random_fields", "0"),
            ("instances", "20"),
            ("seed", "1"),
        ],
        "readout-error" => &[
            ("chain_length", "range:2:6"),
            ("g_z_ratio", "log:0.03:0.3:10"),
            ("g_xx_ghz", "1"),
            ("p_meas", "0"),
            ("shots", "1000000"),
            ("seed", "1"),
        ],
        "transistor-zz" => &[
            ("chain_length", "range:2:6"),
            ("g_zz_ratio", "log:0.001:3:61"),
            ("g_xx_ghz", "1"),
            ("report", "summary"),
            ("threshold", "1e-5"),
            ("seed", "1"),
        ],
        "transistor-xx" => &[("n_anc", "range:1:4"), ("g_z_ratio", "3"), ("g_xx_ghz", "1"), ("seed", "1")],
        "cnot" => &[
            ("chain_length", "2,3"),
            ("gate_time_ns", "log:10:200:8"),
            ("runs", "auto"),
            NOISE[0],
            NOISE[1],
            ("g_xx_ghz", "2.5"),
            ("g_zz_ghz", "2.5"),
            ("g_z_ghz", "2.5"),
            ("g_x_ghz", "2.5"),
            ("dt_ns", "0.02"),
            ("frame", "instantaneous"),
            ("frame_time_ns", "100"),
            ("noise_channels", "all"),
            ("per_run", "0"),
            ("seed", "1"),
        ],
        "basic-gate" => &[
            ("gate_time_ns", "log:10:100:6"),
            ("runs", "200"),
            NOISE[0],
            NOISE[1],
            ("dt_ns", "0.02"),
            ("per_run", "0"),
            ("seed", "1"),
        ],
        "yyzz" => &[
            ("chain_length", "range:2:6"),
            ("g_z_ratio", "0,log:0.001:1:31"),
            ("yy_sigma", "0.01"),
            ("instances", "100"),
            ("g_xx_ghz", "1"),
            ("seed", "1"),
        ],
        "bias-check" => &[
            ("chain_length", "2,3,4"),
            ("numeric_max_length", "3"),
            ("gate_time_ns", "auto"),
            ("runs", "20"),
            NOISE[0],
            NOISE[1],
            ("g_ghz", "2.5"),
            ("dt_ns", "0.02"),
            ("xy_floor", "1e-18"),
            ("seed", "1"),
        ],
        "verify-flow" => &[("chain_length", "3"), ("seed", "1")],
        "squeeze" => &[("chain_length", "3"), ("g_big_ratio", "10"), ("qubit", "last"), ("g_xx_ghz", "1"), ("seed", "1")],
        "rotate-x" => &[
            ("chain_length", "3"),
            ("gate_time_ns", "20"),
            ("angle_rad", "3.141592653589793"),
            ("amplitude_error", "lin:-0.02:0.02:5"),
            ("g_xx_ghz", "2.5"),
            ("noise_rms_mhz", "0"),
            ("noise_bw_ghz", "0.25"),
            ("runs", "1"),
            ("dt_ns", "0.02"),
            ("seed", "1"),
        ],
        "thermal-factor" => &[("energy_ghz", "5,10"), ("temperature_mk", "40"), ("seed", "1")],
        _ => return None,
    })
}

/// Run one subcommand. The table header echoes every effective key.
pub fn run(subcommand: &str, cfg: &Config) -> Result<ResultTable> {
    let defs = defaults(subcommand).ok_or_else(|| Error::InvalidArgument(format!("unknown subcommand {subcommand:?}")))?;
    let p = Params::new(subcommand, cfg, defs)?;
    let seed = p.u64("seed")?;
    let (columns, rows): (&[&str], Vec<Row>) = match subcommand {
        "chain-spectrum" => chain_spectrum(&p)?,
        "chain-splitting" => chain_splitting(&p, seed)?,
        "readout-error" => readout_error(&p, seed)?,
        "transistor-zz" => transistor_zz(&p)?,
        "transistor-xx" => transistor_xx(&p)?,
        "cnot" => cnot(&p, seed)?,
        "basic-gate" => basic_gate(&p, seed)?,
        "yyzz" => yyzz(&p, seed)?,
        "bias-check" => bias(&p, seed)?,
        "verify-flow" => flow(&p)?,
        "squeeze" => squeeze(&p)?,
        "rotate-x" => rotate_x(&p, seed)?,
        "thermal-factor" => thermal(&p)?,
        _ => unreachable!(),
    };
    if rows.is_empty() {
        return Err(Error::Grid(format!("{subcommand}: empty grid")));
    }
    let mut table = ResultTable::new(subcommand, seed, &p.resolved(), columns);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

/// Map solver failures to a flagged row instead of an error.
fn flagged<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoConvergence { .. }) | Err(Error::Degeneracy { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn noise_params(p: &Params) -> Result<NoiseParams> {
    Ok(NoiseParams::new(p.f64("noise_rms_mhz")? * 1e-3, p.f64("noise_bw_ghz")?))
}

fn flag(p: &Params, key: &str) -> Result<bool> {
    match p.usize(key)? {
        0 => Ok(false),
        1 => Ok(true),
        v => Err(Error::Grid(format!("{key} = {v}: expected 0 or 1"))),
    }
}

fn chain_lengths(p: &Params, key: &str) -> Result<Vec<usize>> {
    let ls = p.int_axis(key)?;
    if let Some(l) = ls.iter().find(|&&l| !(2..=12).contains(&l)) {
        return Err(Error::Grid(format!("{key}: length {l} outside 2..=12")));
    }
    Ok(ls)
}

/// Least-squares slope and intercept of log y against log x.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let b = sxy / sxx;
    (b, (my - b * mx).exp())
}

fn chain_spectrum(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let rows = chain_lengths(p, "chain_length")?
        .into_par_iter()
        .map(|l| {
            let groups = single_chain(l, g, 0.0);
            let k = (2 * l + 1).min(1 << l);
            let row = match flagged(eigs_low(&groups, &base_coefficients(&groups), k))? {
                Some(s) => {
                    let m = s.multiplicities();
                    let e = &s.eigenvalues;
                    let ground = m[0];
                    let gap = if ground < e.len() { e[ground] - e[0] } else { f64::NAN };
                    vec![
                        l.into(),
                        e[0].into(),
                        ground.into(),
                        (e[ground - 1] - e[0]).into(),
                        gap.into(),
                        m.get(1).copied().unwrap_or(0).into(),
                        true.into(),
                    ]
                }
                None => vec![l.into(), f64::NAN.into(), 0usize.into(), f64::NAN.into(), f64::NAN.into(), 0usize.into(), false.into()],
            };
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "E0", "ground_degeneracy", "ground_spread", "gap", "gap_degeneracy", "converged"], rows))
}

fn chain_splitting(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let ratios = p.axis("g_z_ratio")?;
    // random_fields = 1: site fields r·g·u with u ~ U(0, 1), averaged over instances
    let random = p.usize("random_fields")? != 0;
    let instances = if random { p.usize("instances")? } else { 1 };
    if instances == 0 {
        return Err(Error::Grid("instances must be positive".into()));
    }
    let grid: Vec<(usize, f64)> = chain_lengths(p, "chain_length")?.into_iter().flat_map(|l| ratios.iter().map(move |&r| (l, r))).collect();
    let rows = grid
        .into_par_iter()
        .map(|(l, r)| {
            let mut splits = Vec::with_capacity(instances);
            for i in 0..instances {
                let scale: Vec<f64> = if random {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed_stream(seed, i as u32, l as u32));
                    (0..l).map(|_| rng.random::<f64>()).collect()
                } else {
                    vec![1.0; l]
                };
                let fields: Vec<f64> = scale.iter().map(|u| u * r * g).collect();
                let groups = chain_with_fields(l, g, &fields);
                match flagged(eigs_low(&groups, &base_coefficients(&groups), 2))? {
                    Some(s) => splits.push((s.eigenvalues[1] - s.eigenvalues[0]).max(0.0) / g),
                    None => return Ok(vec![l.into(), r.into(), f64::NAN.into(), r.abs().powi(l as i32).into(), false.into()]),
                }
            }
            let mean = splits.iter().sum::<f64>() / instances as f64;
            Ok(vec![l.into(), r.into(), mean.into(), r.abs().powi(l as i32).into(), true.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "g_z_ratio", "splitting_over_gxx", "power_law", "converged"], rows))
}

fn readout_error(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let ratios = p.axis("g_z_ratio")?;
    let p_meas = p.axis("p_meas")?;
    if p_meas.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
        return Err(Error::Grid("p_meas outside [0, 1]".into()));
    }
    let shots = p.u64("shots")?;
    let mut grid = Vec::new();
    for l in chain_lengths(p, "chain_length")? {
        for &q in &p_meas {
            for &r in &ratios {
                grid.push((l, q, r));
            }
        }
    }
    let points: Vec<(f64, f64, bool)> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(l, q, r))| {
            let Some(psi) = flagged(x_ground_state(l, g, r * g))? else {
                return Ok((f64::NAN, f64::NAN, false));
            };
            let exact = exact_logical_x_error(&x_outcome_distribution(&psi), l, q);
            let sampled = if shots > 0 { sample_logical_x(&psi, l, shots, q, seed_stream(seed, i as u32, 0))? } else { f64::NAN };
            Ok((exact, sampled, true))
        })
        .collect::<Result<Vec<_>>>()?;
    // power-law fit per (L, p_meas) on exact values
    let mut rows = Vec::new();
    for (chunk_grid, chunk) in grid.chunks(ratios.len()).zip(points.chunks(ratios.len())) {
        let y: Vec<f64> = chunk.iter().map(|c| c.0).collect();
        let (b, c) = loglog_fit(&ratios, &y);
        for (&(l, q, r), &(exact, sampled, ok)) in chunk_grid.iter().zip(chunk) {
            rows.push(vec![l.into(), r.into(), q.into(), exact.into(), sampled.into(), b.into(), c.into(), ok.into()]);
        }
    }
    Ok((&["L", "g_z_ratio", "p_meas", "error_exact", "error_sampled", "fit_b", "fit_c", "converged"], rows))
}

fn coupling_at(l: usize, g: f64, ratio: f64) -> Result<Option<DoubletCoupling>> {
    let groups = ladder(l, g, ratio * g);
    flagged(doublet_coupling(&groups, &base_coefficients(&groups)))
}

/// Summary of one ZZ-transistor curve.
#[derive(Clone, Copy, Debug)]
pub struct TransistorSummary {
    pub low_slope: f64,
    pub threshold_ratio: f64,
    pub max_coupling: f64,
    pub argmax_ratio: f64,
}

/// Low-end exponent from points with coupling in [1e-10, 1e-4]·g_XX, the
/// first log-log crossing of `threshold`, and the golden-refined maximum.
pub fn summarize_transistor(l: usize, g: f64, ratios: &[f64], couplings: &[f64], threshold: f64) -> Result<TransistorSummary> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        ratios.iter().zip(couplings).filter(|(_, &c)| (1e-10..=1e-4).contains(&c)).map(|(&r, &c)| (r, c)).unzip();
    let (low_slope, _) = loglog_fit(&xs, &ys);
    let mut threshold_ratio = f64::NAN;
    for i in 1..ratios.len() {
        let (c0, c1) = (couplings[i - 1], couplings[i]);
        if c0 < threshold && c1 >= threshold {
            let f = if c0 > 0.0 { (threshold.ln() - c0.ln()) / (c1.ln() - c0.ln()) } else { 1.0 };
            threshold_ratio = (ratios[i - 1].ln() + f * (ratios[i].ln() - ratios[i - 1].ln())).exp();
            break;
        }
    }
    let best = (0..couplings.len()).filter(|&i| couplings[i].is_finite()).max_by(|&a, &b| couplings[a].total_cmp(&couplings[b]));
    let (mut max_coupling, mut argmax_ratio) = best.map_or((f64::NAN, f64::NAN), |i| (couplings[i], ratios[i]));
    if let Some(i) = best {
        if i > 0 && i + 1 < ratios.len() {
            let f = |x: f64| -> Result<f64> { Ok(coupling_at(l, g, x.exp())?.map_or(f64::NAN, |d| d.coupling / g)) };
            let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (ratios[i - 1].ln(), ratios[i + 1].ln());
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let (mut f1, mut f2) = (f(x1)?, f(x2)?);
            for _ in 0..30 {
                if f1 >= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = f(x1)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = f(x2)?;
                }
            }
            let x = 0.5 * (lo + hi);
            let fx = f(x)?;
            if fx > max_coupling {
                max_coupling = fx;
                argmax_ratio = x.exp();
            }
        }
    }
    Ok(TransistorSummary { low_slope, threshold_ratio, max_coupling, argmax_ratio })
}

fn transistor_zz(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let ratios = p.axis("g_zz_ratio")?;
    let threshold = p.f64("threshold")?;
    let summary = match p.text("report") {
        "summary" => true,
        "curve" => false,
        other => return Err(Error::Grid(format!("report = {other}: expected summary or curve"))),
    };
    if summary && ratios.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("summary report needs increasing g_zz_ratio".into()));
    }
    let ls = chain_lengths(p, "chain_length")?;
    let grid: Vec<(usize, f64)> = ls.iter().flat_map(|&l| ratios.iter().map(move |&r| (l, r))).collect();
    let points = grid.par_iter().map(|&(l, r)| coupling_at(l, g, r)).collect::<Result<Vec<_>>>()?;
    if !summary {
        let rows = grid
            .iter()
            .zip(&points)
            .map(|(&(l, r), d)| match d {
                Some(d) => vec![l.into(), r.into(), (d.coupling / g).into(), (d.separation / g).into(), d.ambiguous.into(), true.into()],
                None => vec![l.into(), r.into(), f64::NAN.into(), f64::NAN.into(), true.into(), false.into()],
            })
            .collect();
        return Ok((&["L", "g_zz_ratio", "coupling_over_gxx", "separation_over_gxx", "ambiguous", "converged"], rows));
    }
    let rows = ls
        .par_iter()
        .zip(points.par_chunks(ratios.len()))
        .map(|(&l, chunk)| {
            let c: Vec<f64> = chunk.iter().map(|d| d.map_or(f64::NAN, |d| d.coupling / g)).collect();
            let all = chunk.iter().all(|d| d.is_some());
            let s = summarize_transistor(l, g, &ratios, &c, threshold)?;
            Ok(vec![
                l.into(),
                s.low_slope.into(),
                s.threshold_ratio.into(),
                s.max_coupling.into(),
                s.argmax_ratio.into(),
                all.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "low_slope", "threshold_ratio", "max_coupling_over_gxx", "argmax_ratio", "converged"], rows))
}

fn transistor_xx(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let ratios = p.axis("g_z_ratio")?;
    let grid: Vec<(usize, f64)> = p.int_axis("n_anc")?.into_iter().flat_map(|n| ratios.iter().map(move |&r| (n, r))).collect();
    if let Some((n, _)) = grid.iter().find(|(n, _)| *n > 16) {
        return Err(Error::Grid(format!("n_anc {n} too large")));
    }
    let rows = grid
        .into_par_iter()
        .map(|(n, r)| {
            let groups = tunable_xx_terms(n, g, r * g);
            Ok(match flagged(doublet_coupling(&groups, &base_coefficients(&groups)))? {
                Some(d) => vec![n.into(), r.into(), (d.coupling / g).into(), (d.separation / g).into(), d.ambiguous.into(), true.into()],
                None => vec![n.into(), r.into(), f64::NAN.into(), f64::NAN.into(), true.into(), false.into()],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["n_anc", "g_z_ratio", "coupling_over_gxx", "separation_over_gxx", "ambiguous", "converged"], rows))
}

fn runs_for(p: &Params, l: usize) -> Result<usize> {
    let runs = match p.text("runs") {
        "auto" => if l == 3 { 200 } else { 100 },
        _ => p.usize("runs")?,
    };
    if runs == 0 {
        return Err(Error::Grid("runs must be positive".into()));
    }
    Ok(runs)
}

fn summary_cells(mc: &MonteCarloSummary) -> Vec<Value> {
    let e = |x: Estimate| [Value::from(x.mean), Value::from(x.stderr)];
    let mut v = Vec::new();
    v.extend(e(mc.avg_infidelity));
    v.extend(e(mc.ent_infidelity));
    v.extend(e(mc.leakage));
    v
}

fn cnot(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let noise = noise_params(p)?;
    let dt = p.f64("dt_ns")?;
    let frame: FrameMode = p.text("frame").parse()?;
    let filter = match p.text("noise_channels") {
        "all" => ChannelFilter::All,
        "z" => ChannelFilter::ZOnly,
        other => return Err(Error::Grid(format!("noise_channels = {other}: expected all or z"))),
    };
    let per_run = flag(p, "per_run")?;
    let t_frame = p.f64("frame_time_ns")?;
    let times = p.axis("gate_time_ns")?;
    let ls = chain_lengths(p, "chain_length")?;
    if let Some(l) = ls.iter().find(|&&l| l > 4) {
        return Err(Error::Grid(format!("cnot chain length {l} above 4")));
    }
    let mut rows = Vec::new();
    let mut point = 0u32;
    for &l in &ls {
        for &t in &times {
            let params = CnotParams {
                chain_len: l,
                g_xx: p.f64("g_xx_ghz")?,
                g_zz: p.f64("g_zz_ghz")?,
                g_z: p.f64("g_z_ghz")?,
                g_x: p.f64("g_x_ghz")?,
                duration: t,
                noise,
            };
            let setup = GateSetup::cnot(&params, dt, t_frame)?.with_frame_mode(frame);
            let target = setup.target();
            let clean = setup.run_noiseless()?;
            let runs = if noise.rms == 0.0 { 1 } else { runs_for(p, l)? };
            let mc = monte_carlo_gate(&setup, runs, seed_stream(seed, point, u32::MAX), filter)?;
            point += 1;
            let xy: Vec<f64> = mc.runs.iter().map(|r| xy_error_weight(&r.u_tilde, &target)).collect();
            if per_run {
                for (i, (r, w)) in mc.runs.iter().zip(&xy).enumerate() {
                    let m = &r.metrics;
                    rows.push(vec![l.into(), t.into(), i.into(), m.avg_infidelity.into(), m.ent_infidelity.into(), m.leakage.into(), (*w).into()]);
                }
            } else {
                let mut row: Row = vec![l.into(), t.into(), runs.into()];
                row.extend(summary_cells(&mc));
                row.extend([
                    Estimate::of(&xy).mean.into(),
                    clean.metrics.avg_infidelity.into(),
                    clean.metrics.ent_infidelity.into(),
                    clean.metrics.leakage.into(),
                    xy_error_weight(&clean.u_tilde, &target).into(),
                    setup.pauli_frame.label().into(),
                ]);
                rows.push(row);
            }
        }
    }
    if per_run {
        return Ok((&["L", "T_ns", "run", "avg_infid", "ent_infid", "leakage", "xy_weight"], rows));
    }
    Ok((
        &[
            "L",
            "T_ns",
            "runs",
            "avg_infid",
            "avg_stderr",
            "ent_infid",
            "ent_stderr",
            "leakage",
            "leakage_stderr",
            "xy_weight",
            "noiseless_avg_infid",
            "noiseless_ent_infid",
            "noiseless_leakage",
            "noiseless_xy_weight",
            "pauli_frame",
        ],
        rows,
    ))
}

fn basic_gate(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let noise = noise_params(p)?;
    let dt = p.f64("dt_ns")?;
    let per_run = flag(p, "per_run")?;
    let mut rows = Vec::new();
    for (i, t) in p.axis("gate_time_ns")?.into_iter().enumerate() {
        let amp = calibrate_basic_amplitude_with(t, dt)?;
        let setup = GateSetup::new(basic_gate_schedule(t, amp, noise), dt)?;
        let clean = setup.run_noiseless()?;
        let runs = if noise.rms == 0.0 { 1 } else { runs_for(p, 0)? };
        let mc = monte_carlo_gate(&setup, runs, seed_stream(seed, i as u32, u32::MAX), ChannelFilter::All)?;
        if per_run {
            for (k, r) in mc.runs.iter().enumerate() {
                let m = &r.metrics;
                rows.push(vec![t.into(), amp.into(), k.into(), m.avg_infidelity.into(), m.ent_infidelity.into(), m.leakage.into()]);
            }
        } else {
            let mut row: Row = vec![t.into(), amp.into(), runs.into()];
            row.extend(summary_cells(&mc));
            row.push(clean.metrics.avg_infidelity.into());
            rows.push(row);
        }
    }
    if per_run {
        return Ok((&["T_ns", "amplitude_ghz", "run", "avg_infid", "ent_infid", "leakage"], rows));
    }
    Ok((
        &[
            "T_ns",
            "amplitude_ghz",
            "runs",
            "avg_infid",
            "avg_stderr",
            "ent_infid",
            "ent_stderr",
            "leakage",
            "leakage_stderr",
            "noiseless_avg_infid",
        ],
        rows,
    ))
}

fn yyzz(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let sigma = p.f64("yy_sigma")?;
    let instances = p.usize("instances")?;
    if instances == 0 {
        return Err(Error::Grid("instances must be positive".into()));
    }
    let ratios = p.axis("g_z_ratio")?;
    let ls = chain_lengths(p, "chain_length")?;
    // draws depend on (instance, L) only, so every field value sees the same ensemble
    let draws: Vec<Vec<Vec<f64>>> = ls
        .iter()
        .map(|&l| {
            (0..instances)
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed_stream(seed, i as u32, l as u32));
                    (0..l - 1).map(|_| sigma * g * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)).collect()
                })
                .collect()
        })
        .collect();
    let grid: Vec<(usize, usize, f64)> =
        ls.iter().enumerate().flat_map(|(li, &l)| ratios.iter().map(move |&r| (li, l, r))).collect();
    let rows = grid
        .into_par_iter()
        .map(|(li, l, r)| {
            let mut splits = Vec::with_capacity(instances);
            let mut ok = true;
            for yy in &draws[li] {
                let groups = imperfect_chain(l, g, yy, r * g);
                match flagged(eigs_low(&groups, &base_coefficients(&groups), 2))? {
                    Some(s) => splits.push((s.eigenvalues[1] - s.eigenvalues[0]).max(0.0) / g),
                    None => ok = false,
                }
            }
            let est = Estimate::of(&splits);
            let std = est.stderr * (splits.len() as f64).sqrt();
            let ideal = single_chain(l, g, r * g);
            let s = eigs_low(&ideal, &base_coefficients(&ideal), 2)?;
            let ideal_split = (s.eigenvalues[1] - s.eigenvalues[0]).max(0.0) / g;
            Ok(vec![l.into(), r.into(), est.mean.into(), est.stderr.into(), std.into(), ideal_split.into(), ok.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "g_z_ratio", "mean_splitting", "stderr", "std", "ideal_splitting", "converged"], rows))
}

/// Default gate time of the numeric bias check: near where the noiseless
/// error of each length reaches 1e-7.
fn bias_time(l: usize) -> f64 {
    match l {
        2 => 30.0,
        3 => 80.0,
        _ => 150.0,
    }
}

/// Flow logicals; X̄_c sits on the last control qubit, next to the rungs'
/// far end, which gives the shortest representative chain.
pub fn flow_logicals(l: usize) -> LogicalSet {
    let ops = cnot_frame_operators(l);
    let sep = |p: PauliString| p.with_separators(&[l]);
    let x_c = PauliString::from_sparse(3 * l, &[(l - 1, Letter::X)]);
    LogicalSet { x_c: sep(x_c), z_c: sep(ops.z_c), x_t: sep(ops.x_t), z_t: sep(ops.z_t) }
}

pub fn flow_snapshots(l: usize) -> Vec<Vec<PauliString>> {
    cnot_schedule(&CnotParams::uniform(l, 2.5, 100.0, NoiseParams::silent())).snapshots()
}

fn bias(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let noise = noise_params(p)?;
    let dt = p.f64("dt_ns")?;
    let g = p.f64("g_ghz")?;
    let runs = p.usize("runs")?;
    let floor = p.f64("xy_floor")?;
    let max_numeric = p.usize("numeric_max_length")?;
    let auto_time = p.text("gate_time_ns") == "auto";
    let ls = chain_lengths(p, "chain_length")?;
    let mut rows = Vec::new();
    for (i, &l) in ls.iter().enumerate() {
        let report = verify_flow(&flow_snapshots(l), &flow_logicals(l));
        let bias_pass = bias_check(&report);
        let numeric = l <= max_numeric;
        let t = if auto_time { bias_time(l) } else { p.f64("gate_time_ns")? };
        let (w0, wz, numeric_pass) = if numeric {
            if runs == 0 {
                return Err(Error::Grid("runs must be positive".into()));
            }
            let setup = GateSetup::cnot(&CnotParams::uniform(l, g, t, noise), dt, 100.0)?;
            let target = setup.target();
            let clean = setup.run_noiseless()?;
            let w0 = xy_error_weight(&clean.u_tilde, &target);
            let mc = monte_carlo_gate(&setup, runs, seed_stream(seed, i as u32, u32::MAX), ChannelFilter::ZOnly)?;
            let wz = Estimate::of(&mc.runs.iter().map(|r| xy_error_weight(&r.u_tilde, &target)).collect::<Vec<_>>()).mean;
            (w0, wz, wz <= 3.0 * w0.max(floor))
        } else {
            (0.0, 0.0, true)
        };
        let pass = report.pass && bias_pass && numeric_pass;
        rows.push(vec![
            l.into(),
            report.pass.into(),
            bias_pass.into(),
            numeric.into(),
            t.into(),
            w0.into(),
            wz.into(),
            numeric_pass.into(),
            pass.into(),
        ]);
    }
    Ok((&["L", "flow_pass", "bias_pass", "numeric", "T_ns", "xy_noiseless", "xy_z_noise", "numeric_pass", "pass"], rows))
}

fn flow(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let mut rows = Vec::new();
    for l in chain_lengths(p, "chain_length")? {
        let report = verify_flow(&flow_snapshots(l), &flow_logicals(l));
        for f in &report.flows {
            for (k, s) in f.steps.iter().enumerate() {
                let snaps = s.valid_snapshots.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
                let mult = s.multipliers.iter().map(|(a, b)| format!("H{}:{}", a + 1, b)).collect::<Vec<_>>().join(" ");
                rows.push(vec![
                    l.into(),
                    f.name.as_str().into(),
                    k.into(),
                    s.representative.to_string().into(),
                    snaps.into(),
                    mult.into(),
                    f.sign.map_or("none".to_string(), |s| s.to_string()).into(),
                    f.pass.into(),
                ]);
            }
        }
    }
    Ok((&["L", "logical", "step", "representative", "valid_snapshots", "multipliers", "sign", "pass"], rows))
}

fn squeeze(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let g = p.f64("g_xx_ghz")?;
    let ratios = p.axis("g_big_ratio")?;
    let mut grid = Vec::new();
    for l in chain_lengths(p, "chain_length")? {
        let ks = if p.text("qubit") == "last" { vec![l] } else { p.int_axis("qubit")? };
        for k in ks {
            for &r in &ratios {
                grid.push((l, k, r));
            }
        }
    }
    let rows = grid
        .into_par_iter()
        .map(|(l, k, r)| {
            let s = squeeze_z_check(l, g, r * g, k)?;
            Ok(vec![l.into(), k.into(), r.into(), s.min_abs_zk.into(), s.signs_match.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "k", "g_big_ratio", "min_abs_zk", "signs_match"], rows))
}

fn rotate_x(p: &Params, seed: u64) -> Result<(&'static [&'static str], Vec<Row>)> {
    let noise = noise_params(p)?;
    let dt = p.f64("dt_ns")?;
    let g = p.f64("g_xx_ghz")?;
    let target = p.f64("angle_rad")?;
    let runs = if noise.rms == 0.0 { 1 } else { p.usize("runs")? };
    if runs == 0 {
        return Err(Error::Grid("runs must be positive".into()));
    }
    let mut grid = Vec::new();
    for l in chain_lengths(p, "chain_length")? {
        for t in p.axis("gate_time_ns")? {
            for e in p.axis("amplitude_error")? {
                grid.push((l, t, e));
            }
        }
    }
    let rows = grid
        .into_iter()
        .enumerate()
        .map(|(i, (l, t, e))| {
            let amp = target / rotation_angle(1.0, t) * (1.0 + e);
            let schedule = rotation_schedule(l, g, amp, t, noise);
            let results = (0..runs)
                .into_par_iter()
                .map(|r| {
                    let ns = if noise.rms == 0.0 {
                        NoiseSet::silent(schedule.n_channels)
                    } else {
                        schedule.sample_noise(seed_stream(seed, i as u32, u32::MAX), r as u32, &|_| true)?
                    };
                    rotation_run(&schedule, &ns, dt)
                })
                .collect::<Result<Vec<_>>>()?;
            let mean = |f: fn(&crate::evolution::RotationResult) -> f64| results.iter().map(f).sum::<f64>() / runs as f64;
            Ok(vec![
                l.into(),
                t.into(),
                target.into(),
                e.into(),
                amp.into(),
                mean(|r| r.angle).into(),
                mean(|r| r.flip_probability).into(),
                mean(|r| r.leakage).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&["L", "T_ns", "target_angle", "amplitude_error", "amplitude_ghz", "angle", "flip_probability", "leakage"], rows))
}

fn thermal(p: &Params) -> Result<(&'static [&'static str], Vec<Row>)> {
    let mut rows = Vec::new();
    for e in p.axis("energy_ghz")? {
        for t in p.axis("temperature_mk")? {
            rows.push(vec![e.into(), t.into(), thermal_factor(e, t)?.into()]);
        }
    }
    Ok((&["energy_ghz", "temperature_mk", "factor"], rows))
}
