//! Secure throughput of bursty traffic over a two-receiver fading broadcast
//! channel under statistical delay constraints.
//!
//! A transmitter sends a common message and two confidential messages, each
//! fed by a two-state Markovian source and protected by a QoS exponent `θ`.
//! The crate computes how much average traffic each stream can carry
//! (effective capacity matched against effective bandwidth), how that
//! throughput behaves in the low-SNR regime (minimum energy per bit and
//! wideband slope), what a fixed-rate transmitter without channel knowledge
//! achieves, and checks the exponential buffer tail by simulation.
//!
//! Module map:
//!
//! - [`sources`]: traffic models and effective bandwidths
//! - [`channel`]: fading, power splits and per-block secrecy rates
//! - [`expectation`]: Monte Carlo and Gauss–Laguerre averaging over fading
//! - [`qos`]: effective capacity and the maximum average arrival rate
//! - [`energy`]: low-SNR metrics, closed form and fitted
//! - [`nocsi`]: fixed-rate transmission without transmitter CSI
//! - [`simqueue`]: buffer simulation and overflow exponent fit
//! - [`experiment`]: scenario files, CSV tables, plots and bundled figures
//!
//! Rates are in bits per block and `snr` is linear unless a name says `_db`.

pub mod channel;
pub mod energy;
pub mod error;
pub mod expectation;
pub mod experiment;
pub mod nocsi;
pub mod qos;
pub mod rng;
pub mod simqueue;
pub mod sources;

pub use error::{Error, Result};
