use crate::error::{Error, Result};

/// Tolerance applied before flooring `extent / step` so that ratios such as
/// `0.3 mm / 100 um` (which is 2.9999999999999996 in binary) still count
/// their last sample.
const COUNT_EPS: f64 = 1e-9;

/// Physical raster of a C-scan: sample counts and step size.
///
/// Samples sit on inclusive endpoints, so an extent `E` scanned at step `s`
/// yields `floor(E / s) + 1` samples per axis. Row 0 is the smallest `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGeometry {
    nx: usize,
    ny: usize,
    step_um: f64,
}

impl ScanGeometry {
    /// Build a geometry directly from sample counts.
    pub fn from_counts(nx: usize, ny: usize, step_um: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Domain(format!(
                "sample counts must be positive, got {nx}x{ny}"
            )));
        }
        if !(step_um.is_finite() && step_um > 0.0) {
            return Err(Error::Domain(format!(
                "step must be positive and finite, got {step_um} um"
            )));
        }
        if u32::try_from(nx).is_err() || u32::try_from(ny).is_err() {
            return Err(Error::Domain(format!("sample counts {nx}x{ny} exceed u32")));
        }
        Ok(Self { nx, ny, step_um })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn step_um(&self) -> f64 {
        self.step_um
    }

    pub fn step_mm(&self) -> f64 {
        self.step_um / 1000.0
    }

    /// Extent spanned by the samples along x, in millimetres.
    pub fn extent_x_mm(&self) -> f64 {
        (self.nx - 1) as f64 * self.step_mm()
    }

    /// Extent spanned by the samples along y, in millimetres.
    pub fn extent_y_mm(&self) -> f64 {
        (self.ny - 1) as f64 * self.step_mm()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// x coordinate (mm) of column `i`.
    pub fn x_mm(&self, i: usize) -> f64 {
        i as f64 * self.step_mm()
    }

    /// y coordinate (mm) of row `j`.
    pub fn y_mm(&self, j: usize) -> f64 {
        j as f64 * self.step_mm()
    }

    /// Two frames are compatible iff their geometries are equal.
    pub fn is_compatible(&self, other: &ScanGeometry) -> bool {
        self == other
    }
}

/// Raster for a scan of `extent_x_mm` by `extent_y_mm` at `step_um`.
///
/// The 10 mm by 10 mm scan at 50 um steps gives 201 by 201 samples.
pub fn geometry_from_scan(extent_x_mm: f64, extent_y_mm: f64, step_um: f64) -> Result<ScanGeometry> {
    for (name, v) in [
        ("extent_x", extent_x_mm),
        ("extent_y", extent_y_mm),
        ("step", step_um),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let step_mm = step_um / 1000.0;
    if step_mm > extent_x_mm.min(extent_y_mm) {
        return Err(Error::Domain(format!(
            "step {step_um} um exceeds the smaller extent {} mm",
            extent_x_mm.min(extent_y_mm)
        )));
    }
    let count = |extent_mm: f64| (extent_mm * 1000.0 / step_um + COUNT_EPS).floor() as usize + 1;
    ScanGeometry::from_counts(count(extent_x_mm), count(extent_y_mm), step_um)
}
