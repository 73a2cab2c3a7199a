//! Centre-row profile of a noisy frame before and after denoising, as CSV.
//!
//! `cargo run --example line_profile > profile.csv`

use wavescrub::filters::{run_pipeline, PipelineSpec};
use wavescrub::synth::{add_noise, simulate_wavefield, NoiseSpec, SynthConfig};
use wavescrub::{line_profile, Row};

fn main() -> wavescrub::Result<()> {
    let config = SynthConfig { snapshot_times_s: vec![0.9e-6], ..SynthConfig::default() };
    let (clean, _) = simulate_wavefield(&config)?;
    let (noisy, _) = add_noise(&clean.frames()[0], &NoiseSpec::gaussian(0.02), config.seed)?;
    let denoised = run_pipeline(&noisy, &PipelineSpec::default())?;

    let profile = line_profile(&noisy, &denoised, Row::Center)?;
    eprintln!("row {} with {} samples", profile.row_index, profile.len());
    print!("{}", profile.to_csv());
    Ok(())
}
