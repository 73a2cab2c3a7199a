//! Write a frame in every supported format and read it back.
//!
//! `cargo run --example frame_io`

use wavescrub::frames::{geometry_from_scan, Frame, FrameFormat};
use wavescrub::{load_frame, save_frame};

fn main() -> wavescrub::Result<()> {
    let geometry = geometry_from_scan(2.0, 1.0, 50.0)?;
    println!("2 mm x 1 mm at 50 um -> {} x {} samples", geometry.nx(), geometry.ny());

    let frame = Frame::from_fn(geometry, |i, j| (i as f64 * 0.3).sin() * (j as f64 * 0.2).cos())?
        .with_time(0, Some(4.0e-7));

    let dir = std::env::temp_dir().join("wavescrub-frame-io");
    std::fs::create_dir_all(&dir)?;
    for format in [FrameFormat::Csv, FrameFormat::F64le, FrameFormat::Pgm] {
        let path = dir.join(format!("frame.{format}"));
        save_frame(&frame, &path, format)?;
        let back = load_frame(&path, format)?;
        let worst = back
            .values()
            .iter()
            .zip(frame.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "{format:>6}: {:>6} bytes, max abs error {worst:.3e}, time {:?}",
            std::fs::metadata(&path)?.len(),
            back.time_s()
        );
    }
    Ok(())
}
