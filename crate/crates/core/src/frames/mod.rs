//! Scan frames, frame stacks and their on-disk formats.

mod geometry;
pub mod io;

pub use geometry::{geometry_from_scan, ScanGeometry};
pub use io::{decode_frame, encode_frame, load_frame, save_frame, FrameFormat};

use crate::error::{Error, Result};

/// One wavefield snapshot over a scan raster.
///
/// Values are row-major, `ny` rows of `nx` columns, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    geometry: ScanGeometry,
    values: Vec<f64>,
    time_index: usize,
    time_s: Option<f64>,
}

impl Frame {
    pub fn new(geometry: ScanGeometry, values: Vec<f64>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::Dimension(format!(
                "expected {}x{} = {} values, got {}",
                geometry.ny(),
                geometry.nx(),
                geometry.len(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / geometry.nx(),
                pos % geometry.nx()
            )));
        }
        Ok(Self {
            geometry,
            values,
            time_index: 0,
            time_s: None,
        })
    }

    /// A frame holding `value` everywhere.
    pub fn constant(geometry: ScanGeometry, value: f64) -> Result<Self> {
        Self::new(geometry, vec![value; geometry.len()])
    }

    /// Build from a row-major closure `f(column, row)`.
    pub fn from_fn(geometry: ScanGeometry, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(geometry.len());
        for j in 0..geometry.ny() {
            for i in 0..geometry.nx() {
                values.push(f(i, j));
            }
        }
        Self::new(geometry, values)
    }

    /// Convenience constructor from nested rows (row 0 first) at a given step.
    pub fn from_rows(rows: &[Vec<f64>], step_um: f64) -> Result<Self> {
        let ny = rows.len();
        let nx = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nx) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let geometry = ScanGeometry::from_counts(nx, ny, step_um)?;
        Self::new(geometry, rows.concat())
    }

    pub fn with_time(mut self, time_index: usize, time_s: Option<f64>) -> Self {
        self.time_index = time_index;
        self.time_s = time_s;
        self
    }

    pub fn geometry(&self) -> &ScanGeometry {
        &self.geometry
    }

    pub fn nx(&self) -> usize {
        self.geometry.nx()
    }

    pub fn ny(&self) -> usize {
        self.geometry.ny()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time_index(&self) -> usize {
        self.time_index
    }

    pub fn time_s(&self) -> Option<f64> {
        self.time_s
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.geometry.nx() + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.geometry.nx();
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.geometry.nx())
    }

    pub fn is_compatible(&self, other: &Frame) -> bool {
        self.geometry.is_compatible(&other.geometry)
    }

    /// Same geometry and time stamp, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(self.geometry, values)?.with_time(self.time_index, self.time_s))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Root mean square of the values.
    pub fn rms(&self) -> f64 {
        let sum_sq: f64 = self.values.iter().map(|v| v * v).sum();
        (sum_sq / self.values.len() as f64).sqrt()
    }

    /// Elementwise scaling.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.with_values(self.values.iter().map(|v| v * factor).collect())
    }
}

/// Time-ordered frames sharing one geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStack {
    frames: Vec<Frame>,
}

impl FrameStack {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Validation("frame stack must not be empty".into()))?;
        for pair in frames.windows(2) {
            if !first.is_compatible(&pair[1]) {
                return Err(Error::Dimension(
                    "all frames in a stack must share one geometry".into(),
                ));
            }
            if pair[1].time_index <= pair[0].time_index {
                return Err(Error::Validation(format!(
                    "time indices must strictly increase ({} then {})",
                    pair[0].time_index, pair[1].time_index
                )));
            }
        }
        Ok(Self { frames })
    }

    pub fn geometry(&self) -> &ScanGeometry {
        self.frames[0].geometry()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Frame> {
        self.frames.iter()
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }
}

impl<'a> IntoIterator for &'a FrameStack {
    type Item = &'a Frame;
    type IntoIter = std::slice::Iter<'a, Frame>;

    fn into_iter(self) -> Self::IntoIter {
        self.frames.iter()
    }
}
