//! Test fixtures shared by the unit tests.

#[path = "../tests/common/oracles.rs"]
mod oracles;

pub use oracles::*;

use crate::frames::{Frame, ScanGeometry};

pub fn random_frame(nx: usize, ny: usize, seed: u64) -> Frame {
    let g = ScanGeometry::from_counts(nx, ny, 50.0).unwrap();
    Frame::new(g, random_values(nx * ny, seed)).unwrap()
}

pub fn naive_local_stats_of(frame: &Frame, h: usize) -> (Vec<f64>, Vec<f64>) {
    naive_local_stats(frame.nx(), frame.ny(), frame.values(), h)
}
