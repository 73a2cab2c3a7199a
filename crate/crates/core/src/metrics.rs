//! Noise-energy-removed metric and line profiles.
//!
//! Without a noiseless reference, denoising is quantified by the energy of
//! what the denoiser took away: the sum over pixels of
//! `(original - denoised)^2`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::numeric::CompensatedSum;

/// Label of the metric row in the text table.
pub const ENERGY_ROW_LABEL: &str = "Energy of the noise removed";

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseReport {
    pub frame_label: String,
    pub energy_removed: f64,
    pub pixel_count: usize,
    pub mean_squared_difference: f64,
}

impl NoiseReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.frame_label = label.into();
        self
    }
}

fn check_compatible(original: &Frame, denoised: &Frame) -> Result<()> {
    if !original.is_compatible(denoised) {
        let (a, b) = (original.geometry(), denoised.geometry());
        return Err(Error::Dimension(format!(
            "frames are not compatible: {}x{} @ {} um vs {}x{} @ {} um",
            a.nx(),
            a.ny(),
            a.step_um(),
            b.nx(),
            b.ny(),
            b.step_um()
        )));
    }
    Ok(())
}

/// Sum of squared pixel differences, accumulated row-major with compensation.
pub fn noise_energy_removed(original: &Frame, denoised: &Frame) -> Result<NoiseReport> {
    check_compatible(original, denoised)?;
    let energy: CompensatedSum = original
        .values()
        .iter()
        .zip(denoised.values())
        .map(|(a, b)| (a - b) * (a - b))
        .collect();
    let energy_removed = energy.value();
    let pixel_count = original.values().len();
    Ok(NoiseReport {
        frame_label: String::new(),
        energy_removed,
        pixel_count,
        mean_squared_difference: energy_removed / pixel_count as f64,
    })
}

/// Row selector for [`line_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Row {
    /// Row `floor(ny / 2)`.
    #[default]
    Center,
    Index(usize),
}

impl Row {
    pub fn resolve(&self, ny: usize) -> Result<usize> {
        match *self {
            Row::Center => Ok(ny / 2),
            Row::Index(j) if j < ny => Ok(j),
            Row::Index(j) => Err(Error::Domain(format!("row {j} out of range 0..{ny}"))),
        }
    }
}

impl FromStr for Row {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "center" {
            return Ok(Row::Center);
        }
        s.parse()
            .map(Row::Index)
            .map_err(|_| Error::Config(format!("row must be 'center' or a nonnegative integer, got {s:?}")))
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Row::Center => f.write_str("center"),
            Row::Index(j) => write!(f, "{j}"),
        }
    }
}

/// Intensities of one horizontal line in both frames.
#[derive(Debug, Clone, PartialEq)]
pub struct LineProfile {
    pub row_index: usize,
    pub positions_mm: Vec<f64>,
    pub original: Vec<f64>,
    pub denoised: Vec<f64>,
}

impl LineProfile {
    pub fn len(&self) -> usize {
        self.positions_mm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions_mm.is_empty()
    }

    /// `position_mm,original,denoised` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("position_mm,original,denoised\n");
        for k in 0..self.len() {
            writeln!(
                out,
                "{:?},{:?},{:?}",
                self.positions_mm[k], self.original[k], self.denoised[k]
            )
            .unwrap();
        }
        out
    }
}

pub fn line_profile(original: &Frame, denoised: &Frame, row: Row) -> Result<LineProfile> {
    check_compatible(original, denoised)?;
    let g = original.geometry();
    let row_index = row.resolve(g.ny())?;
    Ok(LineProfile {
        row_index,
        positions_mm: (0..g.nx()).map(|i| g.x_mm(i)).collect(),
        original: original.row(row_index).to_vec(),
        denoised: denoised.row(row_index).to_vec(),
    })
}

/// Fixed-point rendering with round-half-even applied to the shortest
/// decimal representation of `value` (so `0.125` gives `"0.12"` at two
/// decimals, and `2.675` gives `"2.68"`).
pub fn format_half_even(value: f64, decimals: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{:e}", value.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i64 = exp.parse().expect("integer exponent");
    let mut digits: Vec<u8> = mantissa.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    // Number of digits before the decimal point in `digits`.
    let point = exp + 1;
    let keep = point + decimals as i64;

    let mut kept: Vec<u8> = if keep <= 0 {
        Vec::new()
    } else {
        digits.resize(digits.len().max(keep as usize), 0);
        digits[..keep as usize].to_vec()
    };
    let rest: &[u8] = if keep <= 0 {
        if keep == 0 { &digits } else { &[] }
    } else {
        &digits[keep as usize..]
    };
    let round_up = match rest.first() {
        Some(&d) if d > 5 => true,
        Some(&5) => rest[1..].iter().any(|&d| d != 0) || kept.last().is_some_and(|d| d % 2 == 1),
        _ => false,
    };
    if round_up {
        let mut carry = true;
        for d in kept.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                carry = false;
                break;
            }
        }
        if carry {
            kept.insert(0, 1);
        }
    }
    // Left-pad so there is at least one integer digit plus `decimals`.
    let int_digits = (kept.len() as i64 - decimals as i64).max(0) as usize;
    let mut all = vec![0u8; (decimals + int_digits).saturating_sub(kept.len())];
    all.extend_from_slice(&kept);
    let (int_part, frac_part) = all.split_at(all.len() - decimals);
    let mut out = String::new();
    if value < 0.0 && all.iter().any(|&d| d != 0) {
        out.push('-');
    }
    if int_part.is_empty() {
        out.push('0');
    } else {
        out.extend(int_part.iter().map(|d| (b'0' + d) as char));
    }
    if decimals > 0 {
        out.push('.');
        out.extend(frac_part.iter().map(|d| (b'0' + d) as char));
    }
    out
}

/// Text table with one column per frame, values to two decimals.
///
/// ```text
///                              Image (a)  Image (b)  Image (c)
/// Energy of the noise removed      37.08     336.24     960.64
/// ```
pub fn report_table(reports: &[NoiseReport]) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::Domain("no reports to tabulate".into()));
    }
    let cells: Vec<(String, String)> = reports
        .iter()
        .map(|r| (r.frame_label.clone(), format_half_even(r.energy_removed, 2)))
        .collect();
    let mut header = " ".repeat(ENERGY_ROW_LABEL.len());
    let mut row = ENERGY_ROW_LABEL.to_string();
    for (label, value) in &cells {
        let width = label.chars().count().max(value.len()) + 2;
        write!(header, "{label:>width$}").unwrap();
        write!(row, "{value:>width$}").unwrap();
    }
    Ok(format!("{}\n{row}\n", header.trim_end()))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `frame,energy_removed,pixel_count,msd` rows at full precision.
pub fn report_csv(reports: &[NoiseReport]) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::Domain("no reports to write".into()));
    }
    let mut out = String::from("frame,energy_removed,pixel_count,msd\n");
    for r in reports {
        writeln!(
            out,
            "{},{:?},{},{:?}",
            csv_field(&r.frame_label),
            r.energy_removed,
            r.pixel_count,
            r.mean_squared_difference
        )
        .unwrap();
    }
    Ok(out)
}
