//! Spatial denoising filters and their composition into pipelines.
//!
//! All filters pad borders by replicating the edge pixels and return a frame
//! with the input's geometry and time stamp.

mod pipeline;
mod smooth;
mod stats;
mod wiener;

pub use pipeline::{run_pipeline, run_stages, Denoise, FilterStage, PipelineSpec};
pub use smooth::{box_filter, gaussian_kernel, gaussian_smooth, median_filter};
pub use stats::{estimate_noise_variance, local_stats, LocalStats, WindowSpec};
pub use wiener::{adaptive_wiener, wiener_gain, NoiseVariance};
