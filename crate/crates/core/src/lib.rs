//! Group decision making for autonomous units.
//!
//! Units negotiate relationships and exchange influences over a shared
//! frequency-multiplexed pulse channel, detected by banks of
//! resonate-and-fire neurons, then each unit independently solves the
//! group's reflexive game.
//!
//! * [`algebra`]: subsets of a universe of actions and expressions over them.
//! * [`rgt`]: relationship graphs, stratification, folding, forward and
//!   inverse tasks.
//! * [`neuron`]: the resonate-and-fire oscillator with its Euler map.
//! * [`codec`]: pulse-code book, pulse trains and resonator-bank detection.
//! * [`netsim`]: the shared medium, addressed messaging and group rounds.
//! * [`scenario`]: scenario files and the JSON/CSV artifacts.

pub mod algebra;
pub mod codec;
pub mod neuron;
pub mod netsim;
pub mod report;
pub mod rgt;
pub mod scenario;
