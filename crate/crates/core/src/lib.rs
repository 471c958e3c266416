//! Physical-layer network coding for the two-way relay channel with
//! distributed space-time coding in the multiple-access phase.
//!
//! * [`constellation`]: signal sets, labels and difference sets.
//! * [`stc_analysis`]: rank spectra and singular fade subspaces of linear
//!   space-time designs.
//! * [`dstc`]: distributed space-time codes, singularity minimality and
//!   coding gain.
//! * [`relay_decoder`]: equivalent real channel, QR and conditional ML
//!   decoding at the relay.
//! * [`channel`]: Rayleigh and Rician block fading with AWGN.
//! * [`protocol`]: the two-phase XOR baseline and the four-phase DSTC scheme.
//! * [`sim`]: Monte-Carlo BER sweeps.
//! * [`report`]: CSV and plot-data output.

pub mod channel;
pub mod constellation;
pub mod dstc;
pub mod error;
pub mod protocol;
pub mod relay_decoder;
pub mod report;
pub mod sim;
pub mod stc_analysis;

pub use error::{Error, Result};
pub use num_complex::Complex64;
