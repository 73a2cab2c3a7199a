//! Text form of [`SynthConfig`].
//!
//! ```text
//! extent_x_mm = 10
//! extent_y_mm = 10
//! step_um = 50
//! sound_speed = 4000          # m/s
//! defect_speed = 2000         # m/s inside the defect
//! pulse_width_s = 60e-9       # FWHM
//! pulse_amplitude = 1
//! pulse_center_s = 240e-9     # default 4 * pulse_width_s
//! source_x_mm = 5
//! source_y_mm = 5
//! defect = disk 7.0 5.0 0.5   # or: rectangle cx cy half_x half_y, or: none
//! snapshot_times_s = 0.6e-6, 0.9e-6, 1.2e-6
//! noise_sigma = 0.02          # or: none
//! seed = 2024
//! courant = 0.4
//! duration_s = 1.2e-6         # default: last snapshot
//! ```

use std::fmt::Write as _;

use super::model::{DefectShape, DefectSpec, Material, NoiseSpec, SourcePulse, SynthConfig};
use crate::error::{Error, Result};
use crate::frames::geometry_from_scan;
use crate::kv::KeyValues;

pub const SYNTH_KEYS: &[&str] = &[
    "extent_x_mm",
    "extent_y_mm",
    "step_um",
    "sound_speed",
    "defect_speed",
    "pulse_width_s",
    "pulse_amplitude",
    "pulse_center_s",
    "source_x_mm",
    "source_y_mm",
    "defect",
    "snapshot_times_s",
    "noise_sigma",
    "seed",
    "courant",
    "duration_s",
];

fn parse_defect(value: &str) -> Result<Option<DefectSpec>> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    let nums = |xs: &[&str]| -> Result<Vec<f64>> {
        xs.iter()
            .map(|x| {
                x.parse::<f64>()
                    .map_err(|_| Error::Config(format!("defect parameter {x:?} is not a number")))
            })
            .collect()
    };
    match parts.as_slice() {
        ["none"] => Ok(None),
        ["disk", rest @ ..] if rest.len() == 3 => {
            let v = nums(rest)?;
            Ok(Some(DefectSpec {
                shape: DefectShape::Disk { radius_mm: v[2] },
                center_mm: (v[0], v[1]),
            }))
        }
        ["rectangle", rest @ ..] if rest.len() == 4 => {
            let v = nums(rest)?;
            Ok(Some(DefectSpec {
                shape: DefectShape::Rectangle {
                    half_x_mm: v[2],
                    half_y_mm: v[3],
                },
                center_mm: (v[0], v[1]),
            }))
        }
        _ => Err(Error::Config(format!(
            "defect must be 'none', 'disk cx cy r' or 'rectangle cx cy hx hy', got {value:?}"
        ))),
    }
}

fn parse_times(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Config(format!("snapshot time {t:?} is not a number")))
        })
        .collect()
}

impl SynthConfig {
    /// Read from parsed key/value pairs; keys outside [`SYNTH_KEYS`] are the
    /// caller's business.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let d = SynthConfig::default();
        let extent_x = kv.parsed_or("extent_x_mm", d.geometry.extent_x_mm())?;
        let extent_y = kv.parsed_or("extent_y_mm", d.geometry.extent_y_mm())?;
        let step = kv.parsed_or("step_um", d.geometry.step_um())?;
        let geometry = geometry_from_scan(extent_x, extent_y, step)
            .map_err(|e| Error::Config(format!("scan geometry: {e}")))?;

        let width = kv.parsed_or("pulse_width_s", d.source.width_s)?;
        let mut source = SourcePulse::with_width(width, kv.parsed_or("pulse_amplitude", d.source.amplitude)?);
        if let Some(c) = kv.parsed("pulse_center_s")? {
            source.center_time_s = c;
        }

        let defect = match kv.get("defect")? {
            Some(v) => parse_defect(v)?,
            None => None,
        };
        let snapshot_times_s = match kv.get("snapshot_times_s")? {
            Some(v) => parse_times(v)?,
            None => return Err(Error::Config("snapshot_times_s is required".into())),
        };
        let noise = match kv.get("noise_sigma")? {
            None | Some("none") => None,
            Some(v) => Some(NoiseSpec::gaussian(
                v.parse()
                    .map_err(|_| Error::Config(format!("noise_sigma = {v:?} is not a number")))?,
            )),
        };

        let config = SynthConfig {
            geometry,
            material: Material {
                sound_speed: kv.parsed_or("sound_speed", d.material.sound_speed)?,
                defect_speed: kv.parsed_or("defect_speed", d.material.defect_speed)?,
            },
            source,
            source_position_mm: (
                kv.parsed_or("source_x_mm", geometry.extent_x_mm() / 2.0)?,
                kv.parsed_or("source_y_mm", geometry.extent_y_mm() / 2.0)?,
            ),
            defect,
            snapshot_times_s,
            noise,
            seed: kv.parsed_or("seed", d.seed)?,
            courant: kv.parsed_or("courant", d.courant)?,
            duration_s: kv.parsed("duration_s")?,
        };
        config.validate()?;
        Ok(config)
    }

    /// Parse a standalone synth config file.
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        kv.check_known(SYNTH_KEYS)?;
        Self::from_key_values(&kv)
    }

    /// Canonical text form; `parse(to_config_text())` reproduces the config.
    pub fn to_config_text(&self) -> String {
        let g = &self.geometry;
        let mut s = String::new();
        let mut line = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        line("extent_x_mm", format!("{:?}", g.extent_x_mm()));
        line("extent_y_mm", format!("{:?}", g.extent_y_mm()));
        line("step_um", format!("{:?}", g.step_um()));
        line("sound_speed", format!("{:?}", self.material.sound_speed));
        line("defect_speed", format!("{:?}", self.material.defect_speed));
        line("pulse_width_s", format!("{:?}", self.source.width_s));
        line("pulse_amplitude", format!("{:?}", self.source.amplitude));
        line("pulse_center_s", format!("{:?}", self.source.center_time_s));
        line("source_x_mm", format!("{:?}", self.source_position_mm.0));
        line("source_y_mm", format!("{:?}", self.source_position_mm.1));
        line(
            "defect",
            match &self.defect {
                None => "none".into(),
                Some(DefectSpec {
                    shape: DefectShape::Disk { radius_mm },
                    center_mm: (x, y),
                }) => format!("disk {x:?} {y:?} {radius_mm:?}"),
                Some(DefectSpec {
                    shape: DefectShape::Rectangle { half_x_mm, half_y_mm },
                    center_mm: (x, y),
                }) => format!("rectangle {x:?} {y:?} {half_x_mm:?} {half_y_mm:?}"),
            },
        );
        line(
            "snapshot_times_s",
            self.snapshot_times_s
                .iter()
                .map(|t| format!("{t:?}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        line(
            "noise_sigma",
            self.noise.map_or("none".into(), |n| format!("{:?}", n.sigma)),
        );
        line("seed", self.seed.to_string());
        line("courant", format!("{:?}", self.courant));
        if let Some(d) = self.duration_s {
            line("duration_s", format!("{d:?}"));
        }
        s
    }
}
