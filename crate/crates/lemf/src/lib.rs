//! Lightning electromagnetic field toolkit.
//!
//! Three pillars, validated against each other:
//!
//! * [`channel`] + [`reffields`] — a semi-analytical reference engine that sums
//!   differential current dipoles (with perfect-ground images) along an MTLE
//!   return-stroke channel driven by a Heidler channel-base current.
//! * [`groundfx`] — a frequency-domain filter chain that converts the
//!   perfect-ground fields into lossy-ground fields: ground-wave attenuation,
//!   wave tilt, the Cooray–Rubinstein correction, and underground decay.
//! * [`fdtd`] — in-house Yee solvers (2-D axisymmetric and 3-D Cartesian) with
//!   convolutional PML boundaries, driven by the same channel model.
//!
//! [`harness`] ties them together: scenario files, comparison metrics,
//! dispersion diagnostics, throughput benchmarks, and named experiments run
//! from the `lemf` command-line tool.

pub mod channel;
pub mod constants;
pub mod error;
pub mod fdtd;
pub mod groundfx;
pub mod harness;
pub mod reffields;
pub mod util;
pub mod waveform;

pub use error::{Error, Result};
