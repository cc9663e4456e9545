//! Simulator for correlation-aware resource management in wireless VR
//! networks, with echo-state transfer learners and Q-learning baselines.

pub mod channel;
pub mod correlation;
pub mod error;
pub mod harness;
pub mod learning;
pub mod qos;
pub mod rng;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};
