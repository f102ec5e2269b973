//! Wideband receive-array simulation for beam training with phase shifters
//! and true-time-delay (TTD) elements.
//!
//! The crate covers beam squint of phased arrays, rainbow beam codebooks
//! built from TTD taps, single-symbol OFDM angle-of-arrival estimation,
//! hardware impairments and the experiment drivers behind the
//! `rainbow-ttd` command line tool.

pub mod array;
pub mod channel;
pub mod codebook;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod impairments;
pub mod scenario;
pub mod squint;
pub mod waveform;

pub use array::{ArrayGeometry, DelayModel, ResponseModel, TapConfig};
pub use codebook::RainbowCodebook;
pub use error::{Error, Result};
pub use estimation::{EstimationResult, GainDictionary, MatchingDomain};
pub use impairments::{ImpairmentSpec, SweepAxis};
pub use scenario::{Scenario, ScenarioConfig};
pub use waveform::{Constellation, OfdmSpec};
