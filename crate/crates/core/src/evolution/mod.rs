//! Time evolution, logical frames, gate metrics, readout and static checks.

mod frame;
mod gate;
mod metrics;
mod propagate;
mod readout;
mod rotation;
mod statics;

pub use frame::{apply_pauli, expectation, inner, logical_frame, FrameOperators, LogicalFrame};
pub use gate::{
    cnot_frame_operators, monte_carlo_gate, ChannelFilter, Estimate, FrameMode, GateRunResult, GateSetup, MonteCarloSummary,
    DEFAULT_DT,
};
pub use metrics::{cnot, gate_metrics, pauli_pair, xy_error_weight, zz_quarter, GateMetrics, PauliFrame, M4};
pub use propagate::{propagate, propagate_with, PropagationStats, Propagator};
pub use readout::{
    exact_logical_x_error, majority, max_agreement, sample_logical_x, x_ground_state, x_outcome_distribution,
};
pub use rotation::{rotation_run, RotationResult};
pub use statics::{squeeze_z_check, thermal_factor, SqueezeReport};
