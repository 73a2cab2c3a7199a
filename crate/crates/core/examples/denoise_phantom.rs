//! Compare the adaptive filter with non-adaptive smoothing on a noisy phantom.
//!
//! `cargo run --example denoise_phantom`

use wavescrub::filters::{
    adaptive_wiener, box_filter, estimate_noise_variance, gaussian_smooth, median_filter, run_pipeline,
    NoiseVariance, PipelineSpec, WindowSpec,
};
use wavescrub::frames::ScanGeometry;
use wavescrub::synth::{add_noise, make_phantom, NoiseSpec, Phantom};
use wavescrub::{noise_energy_removed, Frame};

fn residual(out: &Frame, clean: &Frame) -> f64 {
    noise_energy_removed(out, clean).unwrap().energy_removed
}

fn main() -> wavescrub::Result<()> {
    let geometry = ScanGeometry::from_counts(201, 201, 50.0)?;
    let clean = make_phantom(&Phantom::rings(3.0, 2.0), &geometry, 0)?;
    let sigma = 0.1 * clean.rms();
    let (noisy, injected) = add_noise(&clean, &NoiseSpec::gaussian(sigma), 1)?;

    let w = WindowSpec::new(2);
    println!("noise variance {:.3e}, estimated {:.3e}", sigma * sigma, estimate_noise_variance(&noisy, w)?);
    println!("{:<28} {:>10}", "filter", "residual");
    let candidates = [
        ("none", noisy.clone()),
        ("box h=2", box_filter(&noisy, w)?),
        ("gaussian sigma=1.5", gaussian_smooth(&noisy, 1.5)?),
        ("median h=1", median_filter(&noisy, WindowSpec::new(1))?),
        ("wiener h=2 nv=auto", adaptive_wiener(&noisy, w, NoiseVariance::Auto)?),
        ("default pipeline", run_pipeline(&noisy, &PipelineSpec::default())?),
    ];
    for (name, out) in &candidates {
        println!("{name:<28} {:>9.1}%", 100.0 * residual(out, &clean) / injected);
    }
    Ok(())
}
