//! Synthesize, denoise, measure and profile in one run, writing files and a
//! manifest. Equivalent to `wavescrub pipeline --config <file> --out <dir>`.
//!
//! `cargo run --example end_to_end -- [config] [out_dir]`

use std::path::PathBuf;

use wavescrub::cli::cmd_pipeline;

fn main() -> wavescrub::Result<()> {
    let mut args = std::env::args_os().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/end_to_end.conf"));
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("wavescrub-end-to-end"));

    let run = cmd_pipeline(&config, &out, None, None)?;
    print!("{}", run.table);
    for (report, left) in run.reports.iter().zip(&run.residual_energy) {
        println!("{}: removed {:.4}, distance to clean {left:.4}", report.frame_label, report.energy_removed);
    }
    println!("{} files listed in {}", run.manifest.outputs.len(), out.join("manifest.json").display());
    Ok(())
}
