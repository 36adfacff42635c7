use statrs::function::erf::erf;

/// Steepness factor: r = STEEPNESS / T.
pub const STEEPNESS: f64 = 35.0;
/// Default pulse width as a fraction of the gate time.
pub const WIDTH_FRACTION: f64 = 0.355;
/// Pulse width of the single-pulse basic gate.
pub const BASIC_WIDTH_FRACTION: f64 = 0.85;

/// Smooth erf-edged control envelope.
#[derive(Clone, Debug, PartialEq)]
pub enum Envelope {
    Constant,
    /// Plateau centred on `t_j`, half maximum at `t_j ± w/2`.
    Middle { t_j: f64, w: f64, r: f64 },
    /// On at t = 0, falling at `w/2`.
    Start { w: f64, r: f64 },
    /// Rising at `T - w/2`, on at t = T.
    End { duration: f64, w: f64, r: f64 },
    Sum(Vec<Envelope>),
}

/// Antiderivative of erf.
fn erf_integral(x: f64) -> f64 {
    x * erf(x) + (-x * x).exp() / std::f64::consts::PI.sqrt()
}

impl Envelope {
    pub fn middle(duration: f64, t_j: f64) -> Envelope {
        Envelope::middle_with_width(duration, t_j, WIDTH_FRACTION * duration)
    }

    pub fn middle_with_width(duration: f64, t_j: f64, w: f64) -> Envelope {
        Envelope::Middle { t_j, w, r: STEEPNESS / duration }
    }

    pub fn start(duration: f64) -> Envelope {
        Envelope::Start { w: WIDTH_FRACTION * duration, r: STEEPNESS / duration }
    }

    pub fn end(duration: f64) -> Envelope {
        Envelope::End { duration, w: WIDTH_FRACTION * duration, r: STEEPNESS / duration }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Envelope::Constant => 1.0,
            Envelope::Middle { t_j, w, r } => 0.5 * (erf(r * (t - t_j + w / 2.0)) + erf(r * (-t + t_j + w / 2.0))),
            Envelope::Start { w, r } => 0.5 * (1.0 + erf(r * (-t + w / 2.0))),
            Envelope::End { duration, w, r } => 0.5 * (erf(r * (t - duration + w / 2.0)) + 1.0),
            Envelope::Sum(parts) => parts.iter().map(|p| p.value(t)).sum(),
        }
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let span = |c: f64, r: f64| (erf_integral(r * (b - c)) - erf_integral(r * (a - c))) / r;
        match self {
            Envelope::Constant => b - a,
            Envelope::Middle { t_j, w, r } => 0.5 * (span(t_j - w / 2.0, *r) - span(t_j + w / 2.0, *r)),
            Envelope::Start { w, r } => 0.5 * ((b - a) - span(w / 2.0, *r)),
            Envelope::End { duration, w, r } => 0.5 * ((b - a) + span(duration - w / 2.0, *r)),
            Envelope::Sum(parts) => parts.iter().map(|p| p.integral(a, b)).sum(),
        }
    }
}
