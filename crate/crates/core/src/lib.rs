//! Stochastic-geometry models for covert communication.
//!
//! The crate evaluates closed-form covertness, reliability and secrecy
//! expressions for networks whose receivers see Poisson-distributed
//! interference, and simulates the same quantities by Monte Carlo:
//!
//! * [`geometry`]: point processes, fading marks and path-loss laws
//! * [`shot_noise`]: aggregate interference power, its moments and tail bound
//! * [`awgn`]: the warden's radiometer, detection bounds, covert bits and
//!   spatial throughput in AWGN networks
//! * [`thz`]: terahertz link budget, blocking and interference statistics
//! * [`scattering`]: rough-surface scattering and secrecy capacity
//! * [`special`]: the exponential integral

// `!(x > 0.0)` is how parameter checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod awgn;
pub mod error;
pub mod geometry;
pub mod mc;
pub mod rng;
pub mod scattering;
pub mod shot_noise;
pub mod special;
pub mod thz;

pub use error::{Error, Result};
