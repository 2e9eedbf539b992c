//! Information hiding with chaotic iterations.
//!
//! A boolean state of `N` cells is iterated by updating one cell per step,
//! the cell being chosen by a *strategy*. Embedding replaces the least
//! significant bits of a cover medium with the iterated state, where the
//! strategy is derived either from the message and a secret key through a
//! piecewise linear chaotic map (CIIS) or from the cover itself (CIDS).
//!
//! Besides the embedding pipeline, the crate ships two labs:
//!
//! - [`security`] checks stego-security empirically: the distribution of
//!   watermarked contents against the host distribution, both exactly
//!   (exhaustive pushforward) and statistically (chi-square).
//! - [`dynamics`] probes the topological properties of the iteration map:
//!   expansivity, sensitivity and the constructive mixing argument.
//!
//! Run `cargo run --example` to list the runnable examples, one per
//! capability.

pub mod ci;
pub mod cli;
pub mod dynamics;
mod error;
pub mod metric;
pub mod rng;
pub mod security;
pub mod stego;
pub mod strategies;

pub use ci::{iterate, orbit, BitState, IterFunction, Negation, PhasePoint, Strategy, StrategySource};
pub use error::{Error, Result};
pub use metric::{d_state, d_strategy, d_total, DistanceValue};
pub use stego::{detect, embed, extract_lscs, CoverMedia, Detection, EmbedKey, Message, Mode};
pub use strategies::{cids_strategy, ciis_strategy, key_mix, plcm, Fraction64, PlcmParams, UnitValue};
