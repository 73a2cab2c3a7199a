//! Energy of the removed noise for a stack of synthetic frames, as a table.
//!
//! `cargo run --example noise_metric`

use wavescrub::filters::{run_pipeline, PipelineSpec};
use wavescrub::metrics::{report_table, NoiseReport};
use wavescrub::synth::{add_noise_to_stack, simulate_wavefield, NoiseSpec, SynthConfig};
use wavescrub::noise_energy_removed;

fn main() -> wavescrub::Result<()> {
    let config = SynthConfig::default();
    let (clean, _) = simulate_wavefield(&config)?;
    let (noisy, injected) = add_noise_to_stack(&clean, &NoiseSpec::gaussian(0.02), config.seed)?;

    let pipeline = PipelineSpec::default();
    let mut reports: Vec<NoiseReport> = Vec::new();
    for (k, frame) in noisy.iter().enumerate() {
        let denoised = run_pipeline(frame, &pipeline)?;
        reports.push(noise_energy_removed(frame, &denoised)?.with_label(format!("t{}", k + 1)));
        let left = noise_energy_removed(&denoised, &clean.frames()[k])?.energy_removed;
        println!("frame {k}: injected {:.3}, left after denoising {left:.3}", injected[k]);
    }
    println!();
    print!("{}", report_table(&reports)?);
    Ok(())
}
