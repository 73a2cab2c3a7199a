//! Synthetic ground truth: a 2D scalar-wave FDTD surrogate for a
//! point-contact scan, seeded noise injection and analytic phantoms.

mod config;
mod fdtd;
mod model;
mod noise;
mod phantom;

pub use config::SYNTH_KEYS;
pub use fdtd::Simulation;
pub use model::{
    DefectShape, DefectSpec, Material, NoiseSpec, SourcePulse, SynthConfig, CFL_LIMIT,
    DEFAULT_COURANT, PULSE_SUPPORT_WIDTHS, SPONGE_CELLS,
};
pub use noise::{add_noise, add_noise_to_stack, frame_seed, seeded_rng, RNG_IDENTITY};
pub use phantom::{make_phantom, Phantom};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::FrameStack;

/// Numerical parameters of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationMetadata {
    pub dt_s: f64,
    pub dx_m: f64,
    pub courant: f64,
    pub max_speed: f64,
    pub steps: usize,
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub sponge_cells: usize,
    pub source_node: (usize, usize),
    pub requested_times_s: Vec<f64>,
    pub snapshot_steps: Vec<usize>,
    pub snapshot_times_s: Vec<f64>,
}

/// Run the solver and keep one frame per snapshot time, taken at the
/// nearest time step.
pub fn simulate_wavefield(config: &SynthConfig) -> Result<(FrameStack, SimulationMetadata)> {
    let mut sim = Simulation::new(config)?;
    let dt = sim.dt();
    let snapshot_steps: Vec<usize> = config
        .snapshot_times_s
        .iter()
        .map(|t| (t / dt).round() as usize)
        .collect();
    if let Some(w) = snapshot_steps.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Config(format!(
            "two snapshot times round to the same time step {} (dt = {dt:e} s)",
            w[0]
        )));
    }

    let mut frames = Vec::with_capacity(snapshot_steps.len());
    let mut times = Vec::with_capacity(snapshot_steps.len());
    for (index, &target) in snapshot_steps.iter().enumerate() {
        while sim.step_index() < target {
            sim.step();
        }
        let frame = sim.frame()?;
        times.push(sim.time());
        frames.push(frame.clone().with_time(index, Some(sim.time())));
    }
    let stack = FrameStack::new(frames)?;
    let (grid_nx, grid_ny) = sim.grid_size();
    Ok((
        stack,
        SimulationMetadata {
            dt_s: dt,
            dx_m: sim.dx(),
            courant: config.courant,
            max_speed: config.max_speed(),
            steps: sim.step_index(),
            grid_nx,
            grid_ny,
            sponge_cells: SPONGE_CELLS,
            source_node: sim.source_node(),
            requested_times_s: config.snapshot_times_s.clone(),
            snapshot_steps,
            snapshot_times_s: times,
        },
    ))
}
