//! Analytic test images that stand in for full simulations.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::seq::index::sample;

use super::noise::seeded_rng;
use crate::error::{Error, Result};
use crate::frames::{Frame, ScanGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phantom {
    /// `amplitude * cos(2 pi (d - r) / wavelength) * exp(-((d - r) / envelope)^2)`
    /// with `d` the distance to `center_mm` (raster centre when `None`).
    /// Peaks on the circle of radius `radius_mm`.
    WavefrontRings {
        center_mm: Option<(f64, f64)>,
        radius_mm: f64,
        wavelength_mm: f64,
        envelope_mm: f64,
        amplitude: f64,
    },
    /// `count` pixels set to `amplitude` at seeded random positions, zero elsewhere.
    ImpulseField { count: usize, amplitude: f64 },
    Flat { value: f64 },
}

impl Phantom {
    pub fn rings(radius_mm: f64, wavelength_mm: f64) -> Self {
        Phantom::WavefrontRings {
            center_mm: None,
            radius_mm,
            wavelength_mm,
            envelope_mm: 2.0 * wavelength_mm,
            amplitude: 1.0,
        }
    }
}

/// Kind names with default parameters: `wavefront_rings` (radius 3 mm,
/// wavelength 2 mm, envelope 4 mm), `impulse_field` (16 unit impulses) and
/// `flat` (zero).
impl FromStr for Phantom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wavefront_rings" => Ok(Phantom::rings(3.0, 2.0)),
            "impulse_field" => Ok(Phantom::ImpulseField { count: 16, amplitude: 1.0 }),
            "flat" => Ok(Phantom::Flat { value: 0.0 }),
            other => Err(Error::Domain(format!("unknown phantom kind {other:?}"))),
        }
    }
}

pub fn make_phantom(phantom: &Phantom, geometry: &ScanGeometry, seed: u64) -> Result<Frame> {
    match *phantom {
        Phantom::WavefrontRings {
            center_mm,
            radius_mm,
            wavelength_mm,
            envelope_mm,
            amplitude,
        } => {
            if !(wavelength_mm > 0.0 && envelope_mm > 0.0 && radius_mm >= 0.0) {
                return Err(Error::Domain(
                    "rings need positive wavelength and envelope and a nonnegative radius".into(),
                ));
            }
            let (cx, cy) =
                center_mm.unwrap_or((geometry.extent_x_mm() / 2.0, geometry.extent_y_mm() / 2.0));
            Frame::from_fn(*geometry, |i, j| {
                let d = (geometry.x_mm(i) - cx).hypot(geometry.y_mm(j) - cy) - radius_mm;
                amplitude * (TAU * d / wavelength_mm).cos() * (-(d / envelope_mm).powi(2)).exp()
            })
        }
        Phantom::ImpulseField { count, amplitude } => {
            if count > geometry.len() {
                return Err(Error::Domain(format!(
                    "{count} impulses do not fit {} pixels",
                    geometry.len()
                )));
            }
            if count > 0 && amplitude == 0.0 {
                return Err(Error::Domain("impulse amplitude must be nonzero".into()));
            }
            let mut values = vec![0.0; geometry.len()];
            let mut rng = seeded_rng(seed);
            for k in sample(&mut rng, geometry.len(), count) {
                values[k] = amplitude;
            }
            Frame::new(*geometry, values)
        }
        Phantom::Flat { value } => Frame::constant(*geometry, value),
    }
}
