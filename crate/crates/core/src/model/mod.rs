//! The discrete-time bubble/crash dynamics.

pub mod dynamics;
pub mod normal;
pub mod params;
pub mod rng;
pub mod sim;

pub use dynamics::{
    bernoulli, bernoulli_threshold, cubic_increment, intensity, momentum_direct, momentum_update,
};
pub use normal::normal_cdf;
pub use params::ModelParams;
pub use rng::RngStream;
pub use sim::{simulate, simulate_with_rng, step, SimState, StepRecord, Trajectory};
