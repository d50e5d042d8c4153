//! Frozen set design toolkit for precoded polar codes.
//!
//! The pipeline: bit-channel reliabilities and entropies (`channel_model`),
//! ensemble-averaged weight distributions (`weight_dist`) feeding ML error
//! estimates (`ml_bounds`), SCL list-size bound profiles (`list_bounds`),
//! constrained genetic frozen set optimization (`frozen_opt`), and validation
//! with an SC/SCL decoder over simulated AWGN/BPSK (`codec`, `sim_harness`).

pub mod channel_model;
pub mod codec;
pub mod frozen_opt;
pub mod list_bounds;
pub mod ml_bounds;
pub mod polar_core;
pub mod sim_harness;
pub mod weight_dist;
