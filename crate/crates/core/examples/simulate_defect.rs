//! Simulate a pulse scattering off a slow inclusion and show where the
//! defect changes the field.
//!
//! `cargo run --example simulate_defect`

use wavescrub::synth::{simulate_wavefield, SynthConfig};

fn main() -> wavescrub::Result<()> {
    let with_defect = SynthConfig { noise: None, ..SynthConfig::default() };
    let without = SynthConfig { defect: None, ..with_defect.clone() };

    let (scattered, meta) = simulate_wavefield(&with_defect)?;
    let (free, _) = simulate_wavefield(&without)?;
    println!(
        "dt = {:.3e} s, dx = {:.1e} m, {} steps on a {} x {} grid (sponge {} cells)",
        meta.dt_s, meta.dx_m, meta.steps, meta.grid_nx, meta.grid_ny, meta.sponge_cells
    );
    for (a, b) in scattered.iter().zip(free.iter()) {
        let peak = a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = a.values().iter().zip(b.values()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        println!(
            "t = {:.2} us: peak |u| {peak:.3e}, largest change from the defect {diff:.3e}",
            a.time_s().unwrap_or(0.0) * 1e6
        );
    }
    Ok(())
}
