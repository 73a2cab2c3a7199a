//! Denoising of scanned ultrasonic wavefield frames.
//!
//! * [`frames`]: scan rasters, frames and their file formats.
//! * [`filters`]: adaptive (local Wiener) and non-adaptive (Gaussian, median,
//!   box) spatial filters, chained into pipelines.
//! * [`metrics`]: energy of the removed noise and line profiles.
//! * [`synth`]: FDTD wavefields, seeded noise and phantoms for ground truth.
//! * [`cli`]: the `wavescrub` command line.

pub mod cli;
pub mod error;
pub mod filters;
pub mod frames;
pub mod kv;
pub mod metrics;
pub mod numeric;
pub mod synth;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use filters::{run_pipeline, FilterStage, NoiseVariance, PipelineSpec, WindowSpec};
pub use frames::{geometry_from_scan, load_frame, save_frame, Frame, FrameFormat, FrameStack, ScanGeometry};
pub use metrics::{line_profile, noise_energy_removed, LineProfile, NoiseReport, Row};
pub use synth::{add_noise, make_phantom, simulate_wavefield, NoiseSpec, Phantom, SynthConfig};
