use std::fmt;
use std::str::FromStr;

use super::stats::{estimate_noise_variance, local_moments, WindowSpec};
use crate::error::{Error, Result};
use crate::frames::Frame;

/// Noise power used by the adaptive filter.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NoiseVariance {
    /// Mean local variance of the frame, measured with the filter's own window.
    #[default]
    Auto,
    Fixed(f64),
}

impl NoiseVariance {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseVariance::Fixed(v) if !(v.is_finite() && v >= 0.0) => Err(Error::Domain(format!(
                "noise variance must be finite and nonnegative, got {v}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, frame: &Frame, window: WindowSpec) -> Result<f64> {
        self.validate()?;
        match *self {
            NoiseVariance::Auto => estimate_noise_variance(frame, window),
            NoiseVariance::Fixed(v) => Ok(v),
        }
    }
}

impl fmt::Display for NoiseVariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseVariance::Auto => f.write_str("auto"),
            NoiseVariance::Fixed(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for NoiseVariance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(NoiseVariance::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Config(format!("noise variance {s:?} is neither a number nor 'auto'")))?;
        let nv = NoiseVariance::Fixed(v);
        nv.validate()?;
        Ok(nv)
    }
}

/// Gain `max(var - noise, 0) / var`.
///
/// Zero noise variance gives 1 everywhere, including where the local variance
/// rounds to 0; otherwise a zero local variance gives 0.
#[inline]
pub fn wiener_gain(local_variance: f64, noise_variance: f64) -> f64 {
    if noise_variance == 0.0 {
        1.0
    } else if local_variance > 0.0 {
        (local_variance - noise_variance).max(0.0) / local_variance
    } else {
        0.0
    }
}

/// Adaptive local-statistics (Wiener) filter.
///
/// Each pixel becomes `mean + g * (x - mean)` with `g` from [`wiener_gain`],
/// so flat neighbourhoods are pulled toward their mean and high-variance
/// ones (edges, wavefronts) are left close to the input. With zero noise
/// variance the output is the input, bit for bit.
pub fn adaptive_wiener(frame: &Frame, window: WindowSpec, noise: NoiseVariance) -> Result<Frame> {
    let nu = noise.resolve(frame, window)?;
    let (mean, variance) = local_moments(frame, window, true)?;
    let variance = variance.expect("requested");
    let out = frame
        .values()
        .iter()
        .zip(mean.iter().zip(&variance))
        .map(|(&x, (&mu, &var))| {
            let g = wiener_gain(var, nu);
            if g == 1.0 {
                x
            } else if g == 0.0 {
                mu
            } else {
                // Output stays between mean and input despite rounding.
                (mu + g * (x - mu)).clamp(mu.min(x), mu.max(x))
            }
        })
        .collect();
    frame.with_values(out)
}
