//! Pulse envelopes, colored noise, and gate schedules.

mod calibrate;
mod envelope;
mod noise;
mod schedule;

pub use calibrate::{basic_area_amplitude, basic_infidelity, calibrate_basic_amplitude, calibrate_basic_amplitude_with};
pub use envelope::{Envelope, BASIC_WIDTH_FRACTION, STEEPNESS, WIDTH_FRACTION};
pub use noise::{filter_autocorrelation, make_noise, NoiseParams, NoiseTrace};
pub use schedule::{
    basic_gate_schedule, cnot_schedule, rotation_angle, rotation_schedule, tunable_xx_terms, CnotParams, GateKind,
    NoiseSet, Schedule,
};
