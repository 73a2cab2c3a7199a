use crate::error::{Error, Result};
use crate::frames::{geometry_from_scan, ScanGeometry};

/// Largest stable Courant number `c * dt / dx` for the 2D five-point scheme.
pub const CFL_LIMIT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Default Courant number.
pub const DEFAULT_COURANT: f64 = 0.4;

/// Width of the absorbing layer added around the scan raster, in cells.
pub const SPONGE_CELLS: usize = 20;

/// Pulses are cut to zero beyond this many widths from their centre.
pub const PULSE_SUPPORT_WIDTHS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Background sound speed, m/s.
    pub sound_speed: f64,
    /// Sound speed inside the defect, m/s.
    pub defect_speed: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self {
            sound_speed: 4000.0,
            defect_speed: 2000.0,
        }
    }
}

/// Short excitation pulse: a Gaussian in time whose full width at half
/// maximum is `width_s`, truncated to `center_time_s +- 4 * width_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePulse {
    pub width_s: f64,
    pub amplitude: f64,
    pub center_time_s: f64,
}

impl SourcePulse {
    /// Pulse of the given FWHM centred so that it switches on at `t = 0`.
    pub fn with_width(width_s: f64, amplitude: f64) -> Self {
        Self {
            width_s,
            amplitude,
            center_time_s: PULSE_SUPPORT_WIDTHS * width_s,
        }
    }

    /// Standard deviation of the Gaussian, `FWHM / (2 sqrt(2 ln 2))`.
    pub fn sigma_s(&self) -> f64 {
        self.width_s / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
    }

    pub fn end_time_s(&self) -> f64 {
        self.center_time_s + PULSE_SUPPORT_WIDTHS * self.width_s
    }

    pub fn value(&self, t: f64) -> f64 {
        let dt = t - self.center_time_s;
        if dt.abs() > PULSE_SUPPORT_WIDTHS * self.width_s {
            return 0.0;
        }
        let s = self.sigma_s();
        self.amplitude * (-dt * dt / (2.0 * s * s)).exp()
    }
}

impl Default for SourcePulse {
    fn default() -> Self {
        Self::with_width(60e-9, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefectShape {
    Disk { radius_mm: f64 },
    Rectangle { half_x_mm: f64, half_y_mm: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSpec {
    pub shape: DefectShape,
    pub center_mm: (f64, f64),
}

impl DefectSpec {
    pub fn contains(&self, x_mm: f64, y_mm: f64) -> bool {
        let (dx, dy) = (x_mm - self.center_mm.0, y_mm - self.center_mm.1);
        match self.shape {
            DefectShape::Disk { radius_mm } => dx * dx + dy * dy <= radius_mm * radius_mm,
            DefectShape::Rectangle { half_x_mm, half_y_mm } => {
                dx.abs() <= half_x_mm && dy.abs() <= half_y_mm
            }
        }
    }

    /// Half extents of the bounding box.
    pub fn half_extents_mm(&self) -> (f64, f64) {
        match self.shape {
            DefectShape::Disk { radius_mm } => (radius_mm, radius_mm),
            DefectShape::Rectangle { half_x_mm, half_y_mm } => (half_x_mm, half_y_mm),
        }
    }

    /// Distance from a point to the nearest point of the defect (0 inside).
    pub fn distance_mm(&self, x_mm: f64, y_mm: f64) -> f64 {
        let (dx, dy) = (x_mm - self.center_mm.0, y_mm - self.center_mm.1);
        match self.shape {
            DefectShape::Disk { radius_mm } => ((dx * dx + dy * dy).sqrt() - radius_mm).max(0.0),
            DefectShape::Rectangle { half_x_mm, half_y_mm } => {
                let ox = (dx.abs() - half_x_mm).max(0.0);
                let oy = (dy.abs() - half_y_mm).max(0.0);
                (ox * ox + oy * oy).sqrt()
            }
        }
    }
}

/// Additive i.i.d. Gaussian noise of standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn gaussian(sigma: f64) -> Self {
        Self { sigma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::Config(format!(
                "noise sigma must be finite and nonnegative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Everything needed to reproduce a synthetic wavefield run.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub geometry: ScanGeometry,
    pub material: Material,
    pub source: SourcePulse,
    pub source_position_mm: (f64, f64),
    pub defect: Option<DefectSpec>,
    pub snapshot_times_s: Vec<f64>,
    pub noise: Option<NoiseSpec>,
    pub seed: u64,
    /// Courant number `c_max * dt / dx`.
    pub courant: f64,
    /// Simulated duration; defaults to the last snapshot time.
    pub duration_s: Option<f64>,
}

impl Default for SynthConfig {
    /// 10 mm square scan at 50 um, point source at the centre, a 0.5 mm
    /// slow disk 1.5 mm to its right, three snapshots.
    fn default() -> Self {
        let geometry = geometry_from_scan(10.0, 10.0, 50.0).expect("valid default geometry");
        Self {
            geometry,
            material: Material::default(),
            source: SourcePulse::default(),
            source_position_mm: (5.0, 5.0),
            defect: Some(DefectSpec {
                shape: DefectShape::Disk { radius_mm: 0.5 },
                center_mm: (7.0, 5.0),
            }),
            snapshot_times_s: vec![0.6e-6, 0.9e-6, 1.2e-6],
            noise: Some(NoiseSpec::gaussian(0.02)),
            seed: 2024,
            courant: DEFAULT_COURANT,
            duration_s: None,
        }
    }
}

impl SynthConfig {
    pub fn max_speed(&self) -> f64 {
        match self.defect {
            Some(_) => self.material.sound_speed.max(self.material.defect_speed),
            None => self.material.sound_speed,
        }
    }

    pub fn dx_m(&self) -> f64 {
        self.geometry.step_um() * 1e-6
    }

    pub fn dt_s(&self) -> f64 {
        self.courant * self.dx_m() / self.max_speed()
    }

    pub fn duration(&self) -> f64 {
        self.duration_s
            .unwrap_or_else(|| self.snapshot_times_s.last().copied().unwrap_or(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("sound_speed", self.material.sound_speed)?;
        positive("defect_speed", self.material.defect_speed)?;
        positive("pulse width", self.source.width_s)?;
        positive("courant", self.courant)?;
        if !self.source.amplitude.is_finite() || !self.source.center_time_s.is_finite() {
            return Err(Error::Config("pulse amplitude and centre time must be finite".into()));
        }
        if self.courant * std::f64::consts::SQRT_2 > 1.0 {
            return Err(Error::Config(format!(
                "CFL condition violated: c_max*dt/dx = {} exceeds 1/sqrt(2) = {CFL_LIMIT:.6} \
                 (dt = {:e} s must not exceed dx/(c_max*sqrt(2)) = {:e} s)",
                self.courant,
                self.dt_s(),
                self.dx_m() / (self.max_speed() * std::f64::consts::SQRT_2)
            )));
        }

        let (ex, ey) = (self.geometry.extent_x_mm(), self.geometry.extent_y_mm());
        let (sx, sy) = self.source_position_mm;
        if !(0.0..=ex).contains(&sx) || !(0.0..=ey).contains(&sy) {
            return Err(Error::Config(format!(
                "source ({sx}, {sy}) mm lies outside the {ex} x {ey} mm raster"
            )));
        }
        if let Some(defect) = &self.defect {
            let (hx, hy) = defect.half_extents_mm();
            if !(hx > 0.0 && hy > 0.0 && hx.is_finite() && hy.is_finite()) {
                return Err(Error::Config("defect size must be positive".into()));
            }
            let (cx, cy) = defect.center_mm;
            if cx - hx < 0.0 || cx + hx > ex || cy - hy < 0.0 || cy + hy > ey {
                return Err(Error::Config(format!(
                    "defect at ({cx}, {cy}) mm with half extents ({hx}, {hy}) mm leaves the raster"
                )));
            }
        }

        if self.snapshot_times_s.is_empty() {
            return Err(Error::Config("at least one snapshot time is required".into()));
        }
        if self.snapshot_times_s.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::Config("snapshot times must be finite and nonnegative".into()));
        }
        if self.snapshot_times_s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("snapshot times must be strictly increasing".into()));
        }
        let duration = self.duration();
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::Config(format!("invalid duration {duration}")));
        }
        if let Some(&last) = self.snapshot_times_s.last() {
            if last > duration {
                return Err(Error::Domain(format!(
                    "snapshot at {last:e} s is beyond the simulated duration {duration:e} s"
                )));
            }
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }
}
