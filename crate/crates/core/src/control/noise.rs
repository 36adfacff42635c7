use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Parameters of the low-pass Gaussian noise process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    /// Post-filter rms, in coefficient units (h·GHz).
    pub rms: f64,
    /// 1/e² bandwidth B of the amplitude filter exp(-2|f|/B), GHz.
    pub bandwidth: f64,
    /// Sample spacing, ns.
    pub dt: f64,
}

impl NoiseParams {
    pub const DEFAULT_DT: f64 = 0.05;

    pub fn new(rms: f64, bandwidth: f64) -> NoiseParams {
        NoiseParams { rms, bandwidth, dt: Self::DEFAULT_DT }
    }

    pub fn silent() -> NoiseParams {
        NoiseParams { rms: 0.0, bandwidth: 0.25, dt: Self::DEFAULT_DT }
    }

    /// Filter amplitude A(f).
    pub fn amplitude(&self, f: f64) -> f64 {
        (-2.0 * f.abs() / self.bandwidth).exp()
    }
}

/// Sampled noise on a uniform grid starting at t = 0.
#[derive(Clone, Debug)]
pub struct NoiseTrace {
    pub channel: usize,
    pub dt: f64,
    pub samples: Vec<f64>,
    pub rms_target: f64,
    pub bandwidth: f64,
}

impl NoiseTrace {
    /// Linear interpolation, clamped to the sampled range.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.samples.len();
        if n == 0 {
            return 0.0;
        }
        let x = (t / self.dt).max(0.0);
        let i = x.floor() as usize;
        if i + 1 >= n {
            return self.samples[n - 1];
        }
        let f = x - i as f64;
        self.samples[i] * (1.0 - f) + self.samples[i + 1] * f
    }

    pub fn rms(&self) -> f64 {
        (self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64).sqrt()
    }
}

/// Gaussian white noise shaped by `A(f) = exp(-2|f|/B)` in the frequency
/// domain, rescaled to the target rms. The white sequence is drawn on a
/// zero-padded grid four times longer than the trace so the circular filter
/// does not wrap the trace onto itself. Channel `c` uses ChaCha stream `c`.
pub fn make_noise(seed: u64, channel: usize, duration: f64, params: &NoiseParams) -> Result<NoiseTrace> {
    let limit = 1.0 / (8.0 * params.bandwidth);
    if !(params.dt > 0.0) || params.dt > limit {
        return Err(Error::NoiseGrid { dt: params.dt, limit });
    }
    if !(duration >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise duration {duration}")));
    }
    let n = (duration / params.dt).ceil() as usize + 2;
    let mut trace = NoiseTrace { channel, dt: params.dt, samples: vec![0.0; n], rms_target: params.rms, bandwidth: params.bandwidth };
    if params.rms == 0.0 {
        return Ok(trace);
    }
    let len = (4 * n).next_power_of_two();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(channel as u64);
    let mut buf: Vec<C64> = (0..len).map(|_| C64::new(StandardNormal.sample(&mut rng), 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let df = 1.0 / (len as f64 * params.dt);
    for (k, v) in buf.iter_mut().enumerate() {
        let f = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 } * df;
        *v *= params.amplitude(f);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    for (s, v) in trace.samples.iter_mut().zip(&buf) {
        *s = v.re;
    }
    let rms = trace.rms();
    if rms > 0.0 {
        let scale = params.rms / rms;
        trace.samples.iter_mut().for_each(|s| *s *= scale);
    }
    Ok(trace)
}

/// Normalized autocorrelation of the filtered process at lag `k` samples,
/// evaluated on the same padded grid the generator uses.
pub fn filter_autocorrelation(params: &NoiseParams, len: usize, max_lag: usize) -> Vec<f64> {
    let mut buf: Vec<C64> = (0..len)
        .map(|k| {
            let f = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 } / (len as f64 * params.dt);
            C64::new(params.amplitude(f).powi(2), 0.0)
        })
        .collect();
    FftPlanner::<f64>::new().plan_fft_inverse(len).process(&mut buf);
    let c0 = buf[0].re;
    (0..=max_lag.min(len - 1)).map(|k| buf[k].re / c0).collect()
}
