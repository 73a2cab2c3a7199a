use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::model::NoiseSpec;
use crate::error::Result;
use crate::frames::{Frame, FrameStack};
use crate::numeric::CompensatedSum;

/// Identity of the noise generator, recorded in run manifests.
pub const RNG_IDENTITY: &str = "ChaCha20Rng(rand_chacha 0.9, seed_from_u64) + StandardNormal(rand_distr 0.5)";

/// Seeded generator used for all randomness in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Add i.i.d. zero-mean Gaussian noise drawn row-major from [`seeded_rng`].
///
/// Returns the noisy frame and the injected energy `sum n^2`.
pub fn add_noise(frame: &Frame, noise: &NoiseSpec, seed: u64) -> Result<(Frame, f64)> {
    noise.validate()?;
    if noise.sigma == 0.0 {
        return Ok((frame.clone(), 0.0));
    }
    let mut rng = seeded_rng(seed);
    let mut energy = CompensatedSum::new();
    let values = frame
        .values()
        .iter()
        .map(|&x| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let n = noise.sigma * z;
            energy.add(n * n);
            x + n
        })
        .collect();
    Ok((frame.with_values(values)?, energy.value()))
}

/// Seed used for frame `index` of a stack seeded with `seed`.
pub fn frame_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Noise every frame of a stack; frame `k` uses [`frame_seed`]`(seed, k)`.
pub fn add_noise_to_stack(stack: &FrameStack, noise: &NoiseSpec, seed: u64) -> Result<(FrameStack, Vec<f64>)> {
    let mut frames = Vec::with_capacity(stack.len());
    let mut energies = Vec::with_capacity(stack.len());
    for (k, frame) in stack.iter().enumerate() {
        let (noisy, e) = add_noise(frame, noise, frame_seed(seed, k))?;
        frames.push(noisy);
        energies.push(e);
    }
    Ok((FrameStack::new(frames)?, energies))
}
