//! Non-adaptive filters: Gaussian, median and box.

use super::stats::{local_moments, WindowSpec};
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::numeric::clamp_index;

/// Normalized 1D Gaussian weights for offsets `-r..=r`, `r = ceil(3 sigma)`.
pub fn gaussian_kernel(sigma_px: f64) -> Result<Vec<f64>> {
    if !(sigma_px.is_finite() && sigma_px > 0.0) {
        return Err(Error::Domain(format!(
            "gaussian sigma must be positive and finite, got {sigma_px}"
        )));
    }
    let radius = (3.0 * sigma_px).ceil() as isize;
    let mut weights: Vec<f64> = (-radius..=radius)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma_px * sigma_px)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(weights)
}

/// Separable Gaussian blur, rows then columns, replicate borders.
pub fn gaussian_smooth(frame: &Frame, sigma_px: f64) -> Result<Frame> {
    let kernel = gaussian_kernel(sigma_px)?;
    let r = (kernel.len() / 2) as isize;
    let (nx, ny) = (frame.nx(), frame.ny());
    let src = frame.values();

    let mut horizontal = vec![0.0; src.len()];
    for j in 0..ny {
        let row = &src[j * nx..(j + 1) * nx];
        for i in 0..nx {
            horizontal[j * nx + i] = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * row[clamp_index(i as isize + k as isize - r, nx)])
                .sum();
        }
    }

    let mut out = vec![0.0; src.len()];
    for j in 0..ny {
        for i in 0..nx {
            out[j * nx + i] = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * horizontal[clamp_index(j as isize + k as isize - r, ny) * nx + i])
                .sum();
        }
    }
    frame.with_values(out)
}

/// Median of each replicate-padded `(2h + 1)^2` neighbourhood.
pub fn median_filter(frame: &Frame, window: WindowSpec) -> Result<Frame> {
    window.check_fits(frame.geometry())?;
    let h = window.half_width() as isize;
    let (nx, ny) = (frame.nx(), frame.ny());
    let src = frame.values();
    let mut scratch = Vec::with_capacity(window.count());
    let mut out = Vec::with_capacity(src.len());
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            scratch.clear();
            for dj in -h..=h {
                let row = clamp_index(j + dj, ny) * nx;
                scratch.extend((-h..=h).map(|di| src[row + clamp_index(i + di, nx)]));
            }
            let mid = scratch.len() / 2;
            let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
            out.push(*median);
        }
    }
    frame.with_values(out)
}

/// Moving average over the window; identical to the mean of `local_stats`.
pub fn box_filter(frame: &Frame, window: WindowSpec) -> Result<Frame> {
    let (mean, _) = local_moments(frame, window, false)?;
    frame.with_values(mean)
}
