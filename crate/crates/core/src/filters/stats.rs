use crate::error::{Error, Result};
use crate::frames::{Frame, ScanGeometry};
use crate::numeric::CompensatedSum;

/// Square neighbourhood of `(2h + 1) x (2h + 1)` pixels centred on a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowSpec {
    half_width: usize,
}

impl WindowSpec {
    pub const fn new(half_width: usize) -> Self {
        Self { half_width }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Side length `2h + 1`.
    pub fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn count(&self) -> usize {
        self.side() * self.side()
    }

    /// Fails unless `2h + 1 <= min(nx, ny)`.
    pub fn check_fits(&self, geometry: &ScanGeometry) -> Result<()> {
        let limit = geometry.nx().min(geometry.ny());
        if self.side() > limit {
            return Err(Error::Domain(format!(
                "window {0}x{0} (h={1}) does not fit a {2}x{3} frame",
                self.side(),
                self.half_width,
                geometry.nx(),
                geometry.ny()
            )));
        }
        Ok(())
    }
}

/// Per-pixel neighbourhood mean and population variance.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStats {
    pub mean: Frame,
    pub variance: Frame,
}

/// Summed-area table over the replicate-padded frame, shifted by a reference
/// value so that constant regions sum to exactly zero.
struct PaddedIntegral {
    width: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl PaddedIntegral {
    fn new(frame: &Frame, h: usize, reference: f64) -> Self {
        let (nx, ny) = (frame.nx(), frame.ny());
        let (pw, ph) = (nx + 2 * h, ny + 2 * h);
        let width = pw + 1;
        let mut sum = vec![0.0; width * (ph + 1)];
        let mut sum_sq = vec![0.0; width * (ph + 1)];
        for pj in 0..ph {
            let j = pj.saturating_sub(h).min(ny - 1);
            let row = frame.row(j);
            let (mut run, mut run_sq) = (0.0, 0.0);
            for pi in 0..pw {
                let i = pi.saturating_sub(h).min(nx - 1);
                let v = row[i] - reference;
                run += v;
                run_sq += v * v;
                let at = (pj + 1) * width + pi + 1;
                sum[at] = sum[at - width] + run;
                sum_sq[at] = sum_sq[at - width] + run_sq;
            }
        }
        Self { width, sum, sum_sq }
    }

    /// Sums over padded rows `j0..j1`, columns `i0..i1`.
    #[inline]
    fn rect(&self, table: &[f64], i0: usize, j0: usize, i1: usize, j1: usize) -> f64 {
        let w = self.width;
        table[j1 * w + i1] - table[j0 * w + i1] - table[j1 * w + i0] + table[j0 * w + i0]
    }
}

/// Neighbourhood mean and variance with replicate padding at the borders.
pub fn local_stats(frame: &Frame, window: WindowSpec) -> Result<LocalStats> {
    let (mean, variance) = local_moments(frame, window, true)?;
    Ok(LocalStats {
        mean: frame.with_values(mean)?,
        variance: frame.with_values(variance.expect("requested"))?,
    })
}

pub(crate) fn local_moments(
    frame: &Frame,
    window: WindowSpec,
    with_variance: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    window.check_fits(frame.geometry())?;
    let h = window.half_width();
    let side = window.side();
    let n = window.count() as f64;
    let reference = frame.values()[0];
    let table = PaddedIntegral::new(frame, h, reference);

    let (nx, ny) = (frame.nx(), frame.ny());
    let mut mean = Vec::with_capacity(frame.values().len());
    let mut variance = with_variance.then(|| Vec::with_capacity(frame.values().len()));
    for j in 0..ny {
        for i in 0..nx {
            let s = table.rect(&table.sum, i, j, i + side, j + side);
            let m = s / n;
            mean.push(reference + m);
            if let Some(var) = variance.as_mut() {
                let s2 = table.rect(&table.sum_sq, i, j, i + side, j + side);
                var.push((s2 / n - m * m).max(0.0));
            }
        }
    }
    Ok((mean, variance))
}

/// Mean of the local-variance image.
///
/// Over-estimates the noise power on structured images, since signal
/// variation inside each window counts as noise.
pub fn estimate_noise_variance(frame: &Frame, window: WindowSpec) -> Result<f64> {
    let (_, variance) = local_moments(frame, window, true)?;
    let variance = variance.expect("requested");
    let total: CompensatedSum = variance.iter().copied().collect();
    Ok(total.value() / variance.len() as f64)
}
