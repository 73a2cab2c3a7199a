#![allow(dead_code)]

pub mod oracles;

use wavescrub::frames::{Frame, ScanGeometry};

pub fn random_frame(nx: usize, ny: usize, seed: u64) -> Frame {
    let g = ScanGeometry::from_counts(nx, ny, 50.0).unwrap();
    Frame::new(g, oracles::random_values(nx * ny, seed)).unwrap()
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}
