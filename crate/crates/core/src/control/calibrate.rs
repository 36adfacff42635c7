use super::envelope::{Envelope, BASIC_WIDTH_FRACTION};
use super::noise::NoiseParams;
use super::schedule::basic_gate_schedule;
use crate::error::{Error, Result};
use crate::evolution::{GateSetup, DEFAULT_DT};

/// Amplitude satisfying 2π·A·∫env = π/4.
pub fn basic_area_amplitude(duration: f64) -> f64 {
    let env = Envelope::middle_with_width(duration, duration / 2.0, BASIC_WIDTH_FRACTION * duration);
    0.125 / env.integral(0.0, duration)
}

/// Noiseless average infidelity of the basic gate at `amplitude`.
pub fn basic_infidelity(duration: f64, amplitude: f64, dt: f64) -> Result<f64> {
    let setup = GateSetup::new(basic_gate_schedule(duration, amplitude, NoiseParams::silent()), dt)?;
    Ok(setup.run_noiseless()?.metrics.avg_infidelity)
}

/// Golden-section minimization of the noiseless infidelity, bracketed ±20%
/// around the area-condition amplitude.
pub fn calibrate_basic_amplitude(duration: f64) -> Result<f64> {
    calibrate_basic_amplitude_with(duration, DEFAULT_DT)
}

pub fn calibrate_basic_amplitude_with(duration: f64, dt: f64) -> Result<f64> {
    if !(duration > 0.0) {
        return Err(Error::InvalidArgument(format!("gate time {duration}")));
    }
    let guess = basic_area_amplitude(duration);
    let f = |a: f64| basic_infidelity(duration, a, dt);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.8 * guess, 1.2 * guess);
    let (f_lo, f_hi, f_mid) = (f(lo)?, f(hi)?, f(guess)?);
    if !(f_mid < f_lo && f_mid < f_hi) {
        return Err(Error::Bracket(format!("no interior minimum in [{lo}, {hi}]")));
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-8 * guess {
        if f1 <= f2 {
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
    Ok(0.5 * (lo + hi))
}
