//! Linear resonate-and-fire neuron.
//!
//! The state `z = x + iy` follows the explicit Euler map
//! `z ← z + τ(b + iω)z`. The discrete map is the model: at the default step
//! it is slightly less damped than the continuous oscillator, and marginal
//! threshold crossings depend on that.
//!
//! One tick of [`simulate`] at grid time `t_k = kτ`:
//! 1. pulses snapped to `k` are added to `y`;
//! 2. if the previous sample spiked, `y` is forced to the reset value
//!    (pulses landing on the reset sample are absorbed);
//!    otherwise, if `y ≥ threshold`, a spike is recorded and `y` is set to
//!    the spike value;
//! 3. the sample is recorded and the Euler step advances to `t_{k+1}`.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuronError {
    #[error("invalid neuron parameters: {0}")]
    InvalidParams(&'static str),
    #[error("pulses must be sorted by time (pulse {index} at t={time})")]
    UnsortedPulses { index: usize, time: f64 },
    #[error("pulse time {0} is negative or not finite")]
    BadPulseTime(f64),
    #[error("duration {duration} ends before the last pulse at t={last}")]
    DurationTooShort { duration: f64, last: f64 },
}

pub type Result<T> = std::result::Result<T, NeuronError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronParams {
    /// Eigen-frequency in radians per time unit.
    pub omega: f64,
    pub damping: f64,
    /// Integration step.
    pub tau: f64,
    pub threshold: f64,
    pub spike_value: f64,
    pub reset_value: f64,
}

impl NeuronParams {
    pub const DEFAULT_DAMPING: f64 = -0.1;
    pub const DEFAULT_TAU: f64 = 0.005;
    pub const DEFAULT_THRESHOLD: f64 = 1.0;
    pub const DEFAULT_SPIKE_VALUE: f64 = 1.5;
    pub const DEFAULT_RESET_VALUE: f64 = 0.1;

    /// Default parameters tuned to `omega`.
    pub fn with_omega(omega: f64) -> Self {
        Self {
            omega,
            damping: Self::DEFAULT_DAMPING,
            tau: Self::DEFAULT_TAU,
            threshold: Self::DEFAULT_THRESHOLD,
            spike_value: Self::DEFAULT_SPIKE_VALUE,
            reset_value: Self::DEFAULT_RESET_VALUE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(NeuronError::InvalidParams("tau must be positive"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(NeuronError::InvalidParams("omega must be positive"));
        }
        if !self.threshold.is_finite() || !self.reset_value.is_finite() || self.threshold <= self.reset_value {
            return Err(NeuronError::InvalidParams("threshold must exceed the reset value"));
        }
        if !self.damping.is_finite() || !self.spike_value.is_finite() {
            return Err(NeuronError::InvalidParams("damping and spike value must be finite"));
        }
        Ok(())
    }

    /// Period of the eigen-frequency, `2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Modulus of one Euler step, `|1 + τ(b + iω)|`.
    pub fn step_gain(&self) -> f64 {
        (1.0 + self.tau * self.damping).hypot(self.tau * self.omega)
    }

    /// Grid index a pulse at `time` is applied on: the first grid point at
    /// or after it.
    pub fn snap(&self, time: f64) -> usize {
        let k = time / self.tau;
        let nearest = k.round();
        // absorb representation error from e.g. 1.0 / 0.005
        if (k - nearest).abs() < 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            k.ceil() as usize
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeuronState {
    /// Current-like (recovery) variable.
    pub x: f64,
    /// Voltage-like variable.
    pub y: f64,
    pub t: f64,
}

/// One Euler step of `ż = (b + iω)z`.
pub fn step(s: NeuronState, p: &NeuronParams) -> NeuronState {
    // (b + iω)(x + iy) = (bx − ωy) + i(ωx + by)
    let dx = p.damping * s.x - p.omega * s.y;
    let dy = p.omega * s.x + p.damping * s.y;
    NeuronState {
        x: s.x + p.tau * dx,
        y: s.y + p.tau * dy,
        t: s.t + p.tau,
    }
}

/// Pulses act on the voltage-like variable only.
pub fn inject(s: NeuronState, magnitude: f64) -> NeuronState {
    NeuronState {
        y: s.y + magnitude,
        ..s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub time: f64,
    pub magnitude: f64,
}

impl Pulse {
    pub fn new(time: f64, magnitude: f64) -> Self {
        Self { time, magnitude }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub spike: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub samples: Vec<Sample>,
    pub spikes: Vec<f64>,
}

impl Trace {
    pub fn spiked(&self) -> bool {
        !self.spikes.is_empty()
    }

    pub fn max_y(&self) -> f64 {
        self.samples.iter().map(|s| s.y).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Runs a neuron at rest from `t = 0` to `duration` (inclusive, rounded up
/// to the grid).
pub fn simulate(p: &NeuronParams, pulses: &[Pulse], duration: f64) -> Result<Trace> {
    p.validate()?;
    for (index, pulse) in pulses.iter().enumerate() {
        if !(pulse.time >= 0.0 && pulse.time.is_finite()) {
            return Err(NeuronError::BadPulseTime(pulse.time));
        }
        if index > 0 && pulse.time < pulses[index - 1].time {
            return Err(NeuronError::UnsortedPulses {
                index,
                time: pulse.time,
            });
        }
    }
    if let Some(last) = pulses.last() {
        if duration < last.time {
            return Err(NeuronError::DurationTooShort {
                duration,
                last: last.time,
            });
        }
    }
    let steps = if duration > 0.0 { p.snap(duration) } else { 0 };

    let mut trace = Trace {
        samples: Vec::with_capacity(steps + 1),
        spikes: Vec::new(),
    };
    let mut state = NeuronState::default();
    let mut next_pulse = 0;
    let mut reset_pending = false;
    for k in 0..=steps {
        let t = k as f64 * p.tau;
        state.t = t;
        while next_pulse < pulses.len() && p.snap(pulses[next_pulse].time) <= k {
            state = inject(state, pulses[next_pulse].magnitude);
            next_pulse += 1;
        }
        let mut spike = false;
        if reset_pending {
            state.y = p.reset_value;
            reset_pending = false;
        } else if state.y >= p.threshold {
            spike = true;
            state.y = p.spike_value;
            reset_pending = true;
            trace.spikes.push(t);
        }
        trace.samples.push(Sample {
            t,
            x: state.x,
            y: state.y,
            spike,
        });
        if k < steps {
            state = step(state, p);
        }
    }
    Ok(trace)
}

/// Three equal-spaced pulses at the period of `omega`, starting at `start`.
pub fn pulse_triple(omega: f64, start: f64, magnitudes: [f64; 3]) -> Vec<Pulse> {
    let period = 2.0 * PI / omega;
    magnitudes
        .iter()
        .enumerate()
        .map(|(i, &m)| Pulse::new(start + i as f64 * period, m))
        .collect()
}
