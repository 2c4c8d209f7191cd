//! Exact measure algebra and Monte Carlo walks.

pub mod measure;
pub mod sim;
pub mod step;

pub use measure::{big_to_f64, fmt_big, fmt_prob, prob_to_big, Measure, MeasureError, Prob};
pub use sim::{
    lamplighter_speed, local_time, local_time_event_probability, local_time_profile,
    sample_walk, speed_estimate, trial_rng, Estimate, Sampler, WalkTrace, RNG_ID,
};
pub use step::{sn_delta_member, StepDistribution};
