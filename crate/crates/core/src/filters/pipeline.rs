//! Filter stages and their composition.
//!
//! A pipeline is written one stage per line:
//!
//! ```text
//! # comments and blank lines are ignored
//! median h=1
//! wiener h=2 nv=auto
//! gaussian sigma=1.5
//! box h=1
//! ```

use std::fmt;
use std::str::FromStr;

use super::smooth::{box_filter, gaussian_smooth, median_filter};
use super::stats::WindowSpec;
use super::wiener::{adaptive_wiener, NoiseVariance};
use crate::error::{Error, Result};
use crate::frames::Frame;

/// Anything that maps a frame to a denoised frame of the same geometry.
///
/// [`FilterStage`] implements it; other denoisers (a learned model, say) can
/// be chained with the built-in stages through [`run_stages`].
pub trait Denoise {
    fn denoise(&self, frame: &Frame) -> Result<Frame>;

    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterStage {
    AdaptiveWiener { window: WindowSpec, noise: NoiseVariance },
    Gaussian { sigma_px: f64 },
    Median { window: WindowSpec },
    Box { window: WindowSpec },
}

impl FilterStage {
    pub fn validate(&self) -> Result<()> {
        match self {
            FilterStage::AdaptiveWiener { noise, .. } => noise.validate(),
            FilterStage::Gaussian { sigma_px } if !(sigma_px.is_finite() && *sigma_px > 0.0) => {
                Err(Error::Domain(format!(
                    "gaussian sigma must be positive and finite, got {sigma_px}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, frame: &Frame) -> Result<Frame> {
        match *self {
            FilterStage::AdaptiveWiener { window, noise } => adaptive_wiener(frame, window, noise),
            FilterStage::Gaussian { sigma_px } => gaussian_smooth(frame, sigma_px),
            FilterStage::Median { window } => median_filter(frame, window),
            FilterStage::Box { window } => box_filter(frame, window),
        }
    }
}

impl Denoise for FilterStage {
    fn denoise(&self, frame: &Frame) -> Result<Frame> {
        self.apply(frame)
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FilterStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterStage::AdaptiveWiener { window, noise } => {
                write!(f, "wiener h={} nv={noise}", window.half_width())
            }
            FilterStage::Gaussian { sigma_px } => write!(f, "gaussian sigma={sigma_px}"),
            FilterStage::Median { window } => write!(f, "median h={}", window.half_width()),
            FilterStage::Box { window } => write!(f, "box h={}", window.half_width()),
        }
    }
}

impl FromStr for FilterStage {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        let kind = tokens
            .next()
            .ok_or_else(|| Error::Config("empty stage".into()))?;
        let mut params = Vec::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("stage parameter {tok:?} is not key=value")))?;
            if params.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Config(format!("duplicate parameter {k:?} in {line:?}")));
            }
            params.push((k, v));
        }
        let take = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let allow = |keys: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !keys.contains(k)) {
                Some((k, _)) => Err(Error::Config(format!("unknown parameter {k:?} for {kind}"))),
                None => Ok(()),
            }
        };
        let window = || -> Result<WindowSpec> {
            let h = take("h").ok_or_else(|| Error::Config(format!("{kind} needs h=<int>")))?;
            h.parse()
                .map(WindowSpec::new)
                .map_err(|_| Error::Config(format!("h={h:?} is not a nonnegative integer")))
        };

        let stage = match kind {
            "wiener" | "adaptive_wiener" => {
                allow(&["h", "nv"])?;
                FilterStage::AdaptiveWiener {
                    window: window()?,
                    noise: take("nv").map_or(Ok(NoiseVariance::Auto), str::parse)?,
                }
            }
            "gaussian" => {
                allow(&["sigma"])?;
                let s = take("sigma").ok_or_else(|| Error::Config("gaussian needs sigma=<float>".into()))?;
                let sigma_px = s
                    .parse()
                    .map_err(|_| Error::Config(format!("sigma={s:?} is not a number")))?;
                FilterStage::Gaussian { sigma_px }
            }
            "median" => {
                allow(&["h"])?;
                FilterStage::Median { window: window()? }
            }
            "box" => {
                allow(&["h"])?;
                FilterStage::Box { window: window()? }
            }
            other => return Err(Error::Config(format!("unknown filter stage {other:?}"))),
        };
        stage.validate()?;
        Ok(stage)
    }
}

/// Ordered, nonempty list of stages.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSpec {
    stages: Vec<FilterStage>,
}

impl PipelineSpec {
    pub fn new(stages: Vec<FilterStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Validation("pipeline has no stages".into()));
        }
        for (index, stage) in stages.iter().enumerate() {
            stage.validate().map_err(|e| Error::Stage {
                index,
                stage: stage.to_string(),
                source: Box::new(e),
            })?;
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[FilterStage] {
        &self.stages
    }

    /// Parse the one-stage-per-line text form.
    pub fn parse(text: &str) -> Result<Self> {
        let stages = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(n, l)| {
                l.parse()
                    .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(stages)
    }
}

/// Median (h=1) to knock out impulses, then the adaptive filter (h=2) with
/// an automatic noise estimate.
impl Default for PipelineSpec {
    fn default() -> Self {
        Self {
            stages: vec![
                FilterStage::Median { window: WindowSpec::new(1) },
                FilterStage::AdaptiveWiener {
                    window: WindowSpec::new(2),
                    noise: NoiseVariance::Auto,
                },
            ],
        }
    }
}

impl fmt::Display for PipelineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stage in &self.stages {
            writeln!(f, "{stage}")?;
        }
        Ok(())
    }
}

impl FromStr for PipelineSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Apply the stages left to right.
pub fn run_pipeline(frame: &Frame, spec: &PipelineSpec) -> Result<Frame> {
    let stages: Vec<&dyn Denoise> = spec.stages().iter().map(|s| s as &dyn Denoise).collect();
    run_stages(frame, &stages)
}

/// Apply arbitrary denoisers left to right; errors carry the stage index.
pub fn run_stages(frame: &Frame, stages: &[&dyn Denoise]) -> Result<Frame> {
    if stages.is_empty() {
        return Err(Error::Validation("pipeline has no stages".into()));
    }
    let mut current = frame.clone();
    for (index, stage) in stages.iter().enumerate() {
        let next = stage.denoise(&current).map_err(|e| Error::Stage {
            index,
            stage: stage.name(),
            source: Box::new(e),
        })?;
        if !next.is_compatible(frame) {
            return Err(Error::Stage {
                index,
                stage: stage.name(),
                source: Box::new(Error::Dimension("stage changed the frame geometry".into())),
            });
        }
        current = next;
    }
    Ok(current)
}
