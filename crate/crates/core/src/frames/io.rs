//! Frame file formats.
//!
//! * csv: `# wavescrub-frame nx=<int> ny=<int> step_um=<float> time_s=<float|na>`
//!   then `ny` lines of `nx` comma-separated values, 17 significant digits.
//!   Reading also accepts a bare header such as `nx=3,ny=2,step=50`.
//! * f64le: magic `WSCRB1\0\0`, `nx`, `ny` as u32 LE, `step_um`, `time_s` as
//!   f64 LE (NaN when absent), then `ny * nx` f64 LE values, row-major.
//! * pgm: binary P5 with 16-bit samples, linearly quantized over `[min, max]`;
//!   the mapping, step and time are kept in a `# wavescrub-pgm` comment line.
//!
//! In every format row 0 is written first. The stack position (`time_index`)
//! is not stored; loaded frames have `time_index == 0`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{Frame, ScanGeometry};
use crate::error::{Error, Result};

pub const F64LE_MAGIC: &[u8; 8] = b"WSCRB1\0\0";
const F64LE_HEADER_LEN: usize = 8 + 4 + 4 + 8 + 8;
const CSV_TAG: &str = "# wavescrub-frame";
const PGM_TAG: &str = "wavescrub-pgm";
const PGM_MAXVAL: u32 = 65535;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameFormat {
    Csv,
    F64le,
    Pgm,
}

impl FrameFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            FrameFormat::Csv => "csv",
            FrameFormat::F64le => "f64le",
            FrameFormat::Pgm => "pgm",
        }
    }

    /// Guess the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .ok_or_else(|| Error::Format(format!("{}: no file extension", path.display())))?;
        match ext.to_ascii_lowercase().as_str() {
            "bin" => Ok(FrameFormat::F64le),
            other => other.parse(),
        }
    }
}

impl FromStr for FrameFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FrameFormat::Csv),
            "f64le" => Ok(FrameFormat::F64le),
            "pgm" => Ok(FrameFormat::Pgm),
            other => Err(Error::Format(format!("unknown frame format {other:?}"))),
        }
    }
}

impl std::fmt::Display for FrameFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

pub fn load_frame(path: impl AsRef<Path>, format: FrameFormat) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::Io(e).at(path))?;
    decode_frame(&bytes, format).map_err(|e| e.at(path))
}

pub fn save_frame(frame: &Frame, path: impl AsRef<Path>, format: FrameFormat) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_frame(frame, format)).map_err(|e| Error::Io(e).at(path))
}

pub fn encode_frame(frame: &Frame, format: FrameFormat) -> Vec<u8> {
    match format {
        FrameFormat::Csv => encode_csv(frame).into_bytes(),
        FrameFormat::F64le => encode_f64le(frame),
        FrameFormat::Pgm => encode_pgm(frame),
    }
}

pub fn decode_frame(bytes: &[u8], format: FrameFormat) -> Result<Frame> {
    match format {
        FrameFormat::Csv => {
            let text = std::str::from_utf8(bytes)
                .map_err(|_| Error::Format("csv frame is not valid UTF-8".into()))?;
            decode_csv(text)
        }
        FrameFormat::F64le => decode_f64le(bytes),
        FrameFormat::Pgm => decode_pgm(bytes),
    }
}

fn fmt_time(time_s: Option<f64>) -> String {
    time_s.map_or_else(|| "na".to_string(), |t| format!("{t:?}"))
}

fn parse_time(s: &str) -> Result<Option<f64>> {
    if s == "na" {
        return Ok(None);
    }
    let t: f64 = s
        .parse()
        .map_err(|_| Error::Format(format!("bad time_s {s:?}")))?;
    if !t.is_finite() {
        return Err(Error::Data(format!("time_s must be finite, got {s}")));
    }
    Ok(Some(t))
}

/// `key=value` tokens after a tag.
fn header_fields(rest: &str) -> Result<Vec<(&str, &str)>> {
    rest.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.split_once('=')
                .ok_or_else(|| Error::Format(format!("header token {tok:?} is not key=value")))
        })
        .collect()
}

fn field<'a>(fields: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Format(format!("header is missing {key}")))
}

fn parse_num<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Format(format!("header field {key}={s:?} is not a number")))
}

fn encode_csv(frame: &Frame) -> String {
    let g = frame.geometry();
    let mut out = format!(
        "{CSV_TAG} nx={} ny={} step_um={:?} time_s={}\n",
        g.nx(),
        g.ny(),
        g.step_um(),
        fmt_time(frame.time_s())
    );
    for row in frame.rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            // 17 significant digits round-trips every f64.
            write!(out, "{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn decode_csv(text: &str) -> Result<Frame> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty csv frame".into()))?;
    let rest = header.strip_prefix(CSV_TAG).unwrap_or_else(|| {
        let h = header.trim_start();
        h.strip_prefix('#').unwrap_or(h)
    });
    let fields = header_fields(rest)
        .map_err(|e| Error::Format(format!("csv header must be {CSV_TAG:?} or key=value fields: {e}")))?;
    let nx: usize = parse_num("nx", field(&fields, "nx")?)?;
    let ny: usize = parse_num("ny", field(&fields, "ny")?)?;
    let step_um: f64 = match field(&fields, "step_um") {
        Ok(v) => parse_num("step_um", v)?,
        Err(_) => parse_num("step", field(&fields, "step")?)?,
    };
    let time_s = match fields.iter().find(|(k, _)| *k == "time_s") {
        Some((_, v)) => parse_time(v)?,
        None => None,
    };
    let geometry = ScanGeometry::from_counts(nx, ny, step_um)
        .map_err(|e| Error::Format(format!("invalid header: {e}")))?;

    let mut values = Vec::with_capacity(geometry.len());
    let mut rows = 0usize;
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        rows += 1;
        let before = values.len();
        for cell in line.split(',') {
            let cell = cell.trim();
            let v: f64 = cell.parse().map_err(|_| {
                Error::Format(format!("line {}: {cell:?} is not a number", lineno + 2))
            })?;
            values.push(v);
        }
        if values.len() - before != nx {
            return Err(Error::Dimension(format!(
                "line {}: expected {nx} values, found {}",
                lineno + 2,
                values.len() - before
            )));
        }
    }
    if rows != ny {
        return Err(Error::Dimension(format!(
            "header declares {ny} rows of {nx}, found {rows} rows ({} values)",
            values.len()
        )));
    }
    Ok(Frame::new(geometry, values)?.with_time(0, time_s))
}

fn encode_f64le(frame: &Frame) -> Vec<u8> {
    let g = frame.geometry();
    let mut out = Vec::with_capacity(F64LE_HEADER_LEN + 8 * g.len());
    out.extend_from_slice(F64LE_MAGIC);
    out.extend_from_slice(&(g.nx() as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny() as u32).to_le_bytes());
    out.extend_from_slice(&g.step_um().to_le_bytes());
    out.extend_from_slice(&frame.time_s().unwrap_or(f64::NAN).to_le_bytes());
    for v in frame.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode_f64le(bytes: &[u8]) -> Result<Frame> {
    if bytes.len() < F64LE_HEADER_LEN {
        return Err(Error::Format(format!(
            "f64le frame is {} bytes, shorter than its {F64LE_HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..8] != F64LE_MAGIC {
        return Err(Error::Format("bad f64le magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (nx, ny) = (u32_at(8), u32_at(12));
    let step_um = f64_at(16);
    let time = f64_at(24);
    let time_s = if time.is_nan() {
        None
    } else if time.is_finite() {
        Some(time)
    } else {
        return Err(Error::Data("time_s must be finite".into()));
    };
    let geometry = ScanGeometry::from_counts(nx, ny, step_um)
        .map_err(|e| Error::Format(format!("invalid header: {e}")))?;
    let payload = &bytes[F64LE_HEADER_LEN..];
    if payload.len() != 8 * geometry.len() {
        return Err(Error::Dimension(format!(
            "header declares {nx}x{ny} = {} values, payload holds {} bytes",
            geometry.len(),
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Frame::new(geometry, values)?.with_time(0, time_s))
}

/// Quantize to 16 bits over the frame's `[min, max]`. Constant frames map to
/// level 0 everywhere.
fn encode_pgm(frame: &Frame) -> Vec<u8> {
    let g = frame.geometry();
    let (lo, hi) = frame.min_max();
    let span = hi - lo;
    let mut out = format!(
        "P5\n# {PGM_TAG} step_um={:?} time_s={} min={lo:?} max={hi:?}\n{} {}\n{PGM_MAXVAL}\n",
        g.step_um(),
        fmt_time(frame.time_s()),
        g.nx(),
        g.ny()
    )
    .into_bytes();
    for &v in frame.values() {
        let level = if span > 0.0 {
            ((v - lo) / span * PGM_MAXVAL as f64).round().clamp(0.0, PGM_MAXVAL as f64) as u16
        } else {
            0
        };
        out.extend_from_slice(&level.to_be_bytes());
    }
    out
}

fn decode_pgm(bytes: &[u8]) -> Result<Frame> {
    // Header: magic, width, height, maxval separated by whitespace, with
    // comments running from '#' to end of line; one whitespace byte before data.
    let mut pos = 0usize;
    let mut tokens: Vec<String> = Vec::with_capacity(4);
    let mut tag_line: Option<String> = None;
    while tokens.len() < 4 {
        let &b = bytes
            .get(pos)
            .ok_or_else(|| Error::Format("truncated pgm header".into()))?;
        if b == b'#' {
            let end = bytes[pos..]
                .iter()
                .position(|&c| c == b'\n')
                .map_or(bytes.len(), |e| pos + e);
            let comment = String::from_utf8_lossy(&bytes[pos + 1..end]).trim().to_string();
            if let Some(rest) = comment.strip_prefix(PGM_TAG) {
                tag_line = Some(rest.to_string());
            }
            pos = end;
        } else if b.is_ascii_whitespace() {
            pos += 1;
        } else {
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
                pos += 1;
            }
            tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
    }
    if tokens[0] != "P5" {
        return Err(Error::Format(format!("expected P5 pgm, found {:?}", tokens[0])));
    }
    let nx: usize = parse_num("width", &tokens[1])?;
    let ny: usize = parse_num("height", &tokens[2])?;
    let maxval: u32 = parse_num("maxval", &tokens[3])?;
    if maxval == 0 || maxval > PGM_MAXVAL {
        return Err(Error::Format(format!("pgm maxval {maxval} out of range")));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("missing whitespace before pgm raster".into()));
    }
    pos += 1;

    let tag_line = tag_line.ok_or_else(|| {
        Error::Format(format!("pgm lacks the '# {PGM_TAG}' comment declaring step_um"))
    })?;
    let fields = header_fields(&tag_line)?;
    let step_um: f64 = parse_num("step_um", field(&fields, "step_um")?)?;
    let lo: f64 = parse_num("min", field(&fields, "min")?)?;
    let hi: f64 = parse_num("max", field(&fields, "max")?)?;
    let time_s = match fields.iter().find(|(k, _)| *k == "time_s") {
        Some((_, v)) => parse_time(v)?,
        None => None,
    };
    let geometry = ScanGeometry::from_counts(nx, ny, step_um)
        .map_err(|e| Error::Format(format!("invalid header: {e}")))?;

    let width = if maxval > 255 { 2 } else { 1 };
    let raster = &bytes[pos..];
    if raster.len() != width * geometry.len() {
        return Err(Error::Dimension(format!(
            "pgm declares {nx}x{ny} samples, raster holds {} bytes",
            raster.len()
        )));
    }
    let span = hi - lo;
    let values = raster
        .chunks_exact(width)
        .map(|c| {
            let level = if width == 2 {
                u16::from_be_bytes([c[0], c[1]]) as u32
            } else {
                c[0] as u32
            };
            lo + level.min(maxval) as f64 / maxval as f64 * span
        })
        .collect();
    Ok(Frame::new(geometry, values)?.with_time(0, time_s))
}
