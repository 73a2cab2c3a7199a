//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p wavescrub --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::oracles::{
    close, free_space_response, naive_energy, naive_gaussian, naive_local_stats, naive_median,
    random_values,
};
use common::{max_abs, random_frame};
use wavescrub::filters::{
    adaptive_wiener, box_filter, gaussian_smooth, local_stats, median_filter, run_pipeline,
    NoiseVariance, PipelineSpec, WindowSpec,
};
use wavescrub::frames::io::{decode_frame, encode_frame};
use wavescrub::frames::{geometry_from_scan, Frame, FrameFormat, ScanGeometry};
use wavescrub::metrics::{line_profile, noise_energy_removed, Row};
use wavescrub::synth::{
    add_noise, make_phantom, simulate_wavefield, NoiseSpec, Phantom, Simulation, SourcePulse,
    SynthConfig,
};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Relative tolerance of the metric scaling axiom.
const METRIC_SCALING_TOL: f64 = 1e-12;
/// Relative tolerance of the metric/injected-energy identity.
const NOISE_IDENTITY_TOL: f64 = 1e-9;
/// Relative tolerance of fast filters against naive loops. Test data are
/// uniform on [-1, 1), so errors are taken relative to max(|expected|, 1).
const FILTER_ORACLE_TOL: f64 = 1e-9;
/// Residual energy after denoising, as a fraction of the injected energy.
/// The measured mean over seeds 0..10 is 0.158 (worst seed 0.163), so the
/// bound has about 3x headroom.
const EFFICACY_MAX_RESIDUAL_FRACTION: f64 = 0.5;
const LINEARITY_TOL: f64 = 1e-9;
const CAUSALITY_FLOOR: f64 = 1e-12;
/// Round-off allowance for the per-step energy comparison.
const ENERGY_ROUNDOFF: f64 = 1e-12;
const WAVEFRONT_TOL_CELLS: f64 = 2.0;

fn criterion_1_metric_axioms() -> Check {
    let mut pairs = 0;
    for k in 0..1000u64 {
        let nx = 2 + (k as usize * 7) % 63;
        let ny = 2 + (k as usize * 13) % 63;
        let g = ScanGeometry::from_counts(nx, ny, 50.0).unwrap();
        let a = Frame::new(g, random_values(nx * ny, 2 * k)).unwrap();
        let mut bv = random_values(nx * ny, 2 * k + 1);
        if k % 10 == 0 {
            // Pairs that differ in a single pixel.
            bv = a.values().to_vec();
            bv[(k as usize) % (nx * ny)] += 1e-3;
        }
        let b = Frame::new(g, bv).unwrap();
        let ab = noise_energy_removed(&a, &b).unwrap().energy_removed;
        let ba = noise_energy_removed(&b, &a).unwrap().energy_removed;
        ensure!(ab >= 0.0, "negative metric {ab} for pair {k}");
        ensure!(ab.to_bits() == ba.to_bits(), "asymmetric: {ab} vs {ba} for pair {k}");
        ensure!(ab > 0.0, "distinct frames gave zero metric for pair {k}");
        ensure!(noise_energy_removed(&a, &a).unwrap().energy_removed == 0.0, "metric(a, a) != 0");
        for alpha in [0.5, -3.0, 1e3, 0.1] {
            let scaled = noise_energy_removed(&a.scaled(alpha).unwrap(), &b.scaled(alpha).unwrap())
                .unwrap()
                .energy_removed;
            let expect = alpha * alpha * ab;
            ensure!(
                (scaled - expect).abs() <= METRIC_SCALING_TOL * expect,
                "scaling by {alpha}: {scaled} vs {expect} (pair {k})"
            );
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, sizes 2x2..64x64"))
}

fn criterion_2_noise_identity() -> Check {
    let config = SynthConfig {
        geometry: geometry_from_scan(5.0, 5.0, 50.0).unwrap(),
        source_position_mm: (2.5, 2.5),
        defect: None,
        snapshot_times_s: (1..=10).map(|k| k as f64 * 1e-7).collect(),
        noise: None,
        ..SynthConfig::default()
    };
    let (stack, _) = simulate_wavefield(&config).unwrap();
    let mut frames: Vec<Frame> = stack.into_frames();
    let g201 = ScanGeometry::from_counts(201, 201, 50.0).unwrap();
    for k in 0..10u64 {
        let phantom = match k % 3 {
            0 => Phantom::rings(1.0 + k as f64 * 0.3, 2.0),
            1 => Phantom::ImpulseField { count: 50, amplitude: 3.0 },
            _ => Phantom::Flat { value: 0.25 * k as f64 },
        };
        frames.push(make_phantom(&phantom, &g201, k).unwrap());
    }
    let mut worst = 0.0f64;
    for (k, clean) in frames.iter().enumerate() {
        let sigma = 0.01 * (1.0 + k as f64) * max_abs(clean.values()).max(1e-3);
        let (noisy, injected) = add_noise(clean, &NoiseSpec::gaussian(sigma), 1000 + k as u64).unwrap();
        let measured = noise_energy_removed(&noisy, clean).unwrap().energy_removed;
        let rel = (measured - injected).abs() / injected;
        worst = worst.max(rel);
        ensure!(rel <= NOISE_IDENTITY_TOL, "frame {k}: metric {measured} vs injected {injected}");
    }
    Ok(format!("{} injections (10 FDTD, 10 phantom), worst relative error {worst:.2e}", frames.len()))
}

fn criterion_3_filter_oracles() -> Check {
    let mut cases = 0;
    let sizes = [(8, 8), (13, 21), (32, 17), (64, 64), (40, 9)];
    for (s, &(nx, ny)) in sizes.iter().enumerate() {
        let f = random_frame(nx, ny, 300 + s as u64);
        for h in [1usize, 2, 3] {
            if 2 * h + 1 > nx.min(ny) {
                continue;
            }
            let w = WindowSpec::new(h);
            let stats = local_stats(&f, w).unwrap();
            let boxed = box_filter(&f, w).unwrap();
            let (mean, var) = naive_local_stats(nx, ny, f.values(), h);
            for p in 0..nx * ny {
                ensure!(
                    close(stats.mean.values()[p], mean[p], FILTER_ORACLE_TOL, 1.0),
                    "mean mismatch {nx}x{ny} h={h} pixel {p}"
                );
                ensure!(
                    close(stats.variance.values()[p], var[p], FILTER_ORACLE_TOL, 1.0),
                    "variance mismatch {nx}x{ny} h={h} pixel {p}"
                );
                ensure!(
                    close(boxed.values()[p], mean[p], FILTER_ORACLE_TOL, 1.0),
                    "box mismatch {nx}x{ny} h={h} pixel {p}"
                );
            }
            let median = median_filter(&f, w).unwrap();
            ensure!(
                median.values() == naive_median(nx, ny, f.values(), h).as_slice(),
                "median mismatch {nx}x{ny} h={h}"
            );
            cases += 1;
        }
        for sigma in [0.8, 1.5, 3.0] {
            let smooth = gaussian_smooth(&f, sigma).unwrap();
            let oracle = naive_gaussian(nx, ny, f.values(), sigma);
            for p in 0..nx * ny {
                ensure!(
                    close(smooth.values()[p], oracle[p], FILTER_ORACLE_TOL, 1.0),
                    "gaussian mismatch {nx}x{ny} sigma={sigma} pixel {p}"
                );
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} frame/parameter cases"))
}

fn criterion_4_adaptive_analytic() -> Check {
    let f = Frame::from_rows(
        &[vec![0.0, 0.0, 0.0], vec![0.0, 9.0, 0.0], vec![0.0, 0.0, 0.0]],
        50.0,
    )
    .unwrap();
    let stats = local_stats(&f, WindowSpec::new(1)).unwrap();
    ensure!(stats.mean.get(1, 1) == 1.0, "centre mean {}", stats.mean.get(1, 1));
    ensure!(stats.variance.get(1, 1) == 8.0, "centre variance {}", stats.variance.get(1, 1));
    let out = adaptive_wiener(&f, WindowSpec::new(1), NoiseVariance::Fixed(4.0)).unwrap();
    ensure!(out.get(1, 1) == 5.0, "centre output {} != 5", out.get(1, 1));
    for k in 0..50u64 {
        let nx = 5 + (k as usize * 3) % 40;
        let ny = 5 + (k as usize * 5) % 40;
        let g = ScanGeometry::from_counts(nx, ny, 50.0).unwrap();
        // Mix scales so that mean + (x - mean) would not round-trip.
        let values: Vec<f64> = random_values(nx * ny, 900 + k)
            .into_iter()
            .enumerate()
            .map(|(i, v)| if i % 7 == 0 { v * 1e6 } else { v })
            .collect();
        let f = Frame::new(g, values).unwrap();
        let h = 1 + (k as usize) % 2;
        let out = adaptive_wiener(&f, WindowSpec::new(h), NoiseVariance::Fixed(0.0)).unwrap();
        ensure!(
            out.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()),
            "nv=0 changed frame {k}"
        );
    }
    Ok("centre output 5.0 exactly; nv=0 identity on 50 frames".into())
}

fn criterion_5_efficacy() -> Check {
    let g = ScanGeometry::from_counts(201, 201, 50.0).unwrap();
    let clean = make_phantom(&"wavefront_rings".parse().unwrap(), &g, 0).unwrap();
    let sigma = 0.1 * clean.rms();
    let spec = PipelineSpec::default();
    let mut fractions = Vec::new();
    for seed in 0..10 {
        let (noisy, injected) = add_noise(&clean, &NoiseSpec::gaussian(sigma), seed).unwrap();
        let denoised = run_pipeline(&noisy, &spec).unwrap();
        let residual = naive_energy(denoised.values(), clean.values());
        fractions.push(residual / injected);
    }
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    ensure!(
        mean <= EFFICACY_MAX_RESIDUAL_FRACTION,
        "mean residual fraction {mean:.3} > {EFFICACY_MAX_RESIDUAL_FRACTION}"
    );
    Ok(format!(
        "mean residual/injected {mean:.3} (max {:.3}) <= {EFFICACY_MAX_RESIDUAL_FRACTION}",
        fractions.iter().cloned().fold(0.0, f64::max)
    ))
}

fn desk_config(amplitude: f64) -> SynthConfig {
    SynthConfig {
        geometry: geometry_from_scan(5.0, 5.0, 50.0).unwrap(),
        source: SourcePulse::with_width(60e-9, amplitude),
        source_position_mm: (2.5, 2.5),
        defect: None,
        snapshot_times_s: vec![3e-7, 5e-7, 7e-7],
        noise: None,
        ..SynthConfig::default()
    }
}

fn criterion_6_fdtd_physics() -> Check {
    let c = 4000.0;
    let cell = 50e-6;

    // Zero source.
    let (zero, _) = simulate_wavefield(&desk_config(0.0)).unwrap();
    ensure!(
        zero.iter().all(|f| f.values().iter().all(|&v| v == 0.0)),
        "zero source produced a nonzero field"
    );

    // Linearity.
    let (one, _) = simulate_wavefield(&desk_config(1.0)).unwrap();
    let (two, _) = simulate_wavefield(&desk_config(2.0)).unwrap();
    for (a, b) in one.iter().zip(two.iter()) {
        let scale = max_abs(b.values());
        ensure!(
            a.values().iter().zip(b.values()).all(|(x, y)| (2.0 * x - y).abs() <= LINEARITY_TOL * scale),
            "doubling the amplitude did not double the field"
        );
    }

    // Causality, energy decay and wavefront position from one stepped run.
    let config = desk_config(1.0);
    let pulse = config.source;
    let mut sim = Simulation::new(&config).unwrap();
    let (ci, cj) = sim.source_node();
    let mut prev_energy: Option<f64> = None;
    let mut energy_steps = 0;
    let mut worst_causality = 0.0f64;
    let mut worst_front = 0.0f64;
    let mut worst_peak = 0.0f64;
    for _ in 0..1000 {
        let injecting = sim.source_active();
        sim.step();
        let energy = sim.energy();
        if !injecting {
            if let Some(e0) = prev_energy {
                ensure!(
                    energy <= e0 * (1.0 + ENERGY_ROUNDOFF),
                    "energy rose from {e0:e} to {energy:e} at step {}",
                    sim.step_index()
                );
                energy_steps += 1;
            }
        }
        prev_energy = Some(energy);

        let n = sim.step_index();
        if n % 10 != 0 {
            continue;
        }
        let frame = sim.frame().unwrap();
        let t = sim.time();
        let peak = max_abs(frame.values());
        if peak == 0.0 {
            continue;
        }
        let limit_cells = (c * t + 3.0 * c * pulse.width_s) / cell;
        for j in 0..frame.ny() {
            for i in 0..frame.nx() {
                let r = ((i as f64 - ci as f64).powi(2) + (j as f64 - cj as f64).powi(2)).sqrt();
                if r > limit_cells {
                    let rel = frame.get(i, j).abs() / peak;
                    worst_causality = worst_causality.max(rel);
                    ensure!(rel < CAUSALITY_FLOOR, "|u|/max = {rel:e} at r = {r:.1} cells > {limit_cells:.1} (step {n})");
                }
            }
        }

        // Wavefront along +x while it is well inside the raster.
        let since_peak = t - pulse.center_time_s;
        let expected = c * since_peak / cell;
        if !(8.0..=40.0).contains(&expected) {
            continue;
        }
        let line: Vec<f64> = frame.row(cj)[ci..].iter().map(|v| v.abs()).collect();
        let (argmax, line_max) = line
            .iter()
            .enumerate()
            .skip(1)
            .fold((0, 0.0), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
        // Leading edge: outermost sample at or above half the line maximum,
        // refined by linear interpolation.
        let k = line.iter().rposition(|&v| v >= 0.5 * line_max).unwrap();
        let edge = if k + 1 < line.len() {
            k as f64 + (line[k] - 0.5 * line_max) / (line[k] - line[k + 1])
        } else {
            k as f64
        };
        worst_front = worst_front.max((edge - expected).abs());
        ensure!(
            (edge - expected).abs() <= WAVEFRONT_TOL_CELLS,
            "leading edge at {edge:.2} cells, c*t = {expected:.2} cells (step {n})"
        );

        // Peak of |u| against the exact free-space solution by quadrature.
        let exact_peak = (1..4000)
            .map(|q| q as f64 * 0.0125)
            .map(|r| (r, free_space_response(r * cell, t, c, |s| pulse.value(s)).abs()))
            .fold((0.0, 0.0), |best, (r, v)| if v > best.1 { (r, v) } else { best })
            .0;
        worst_peak = worst_peak.max((argmax as f64 - exact_peak).abs());
        ensure!(
            (argmax as f64 - exact_peak).abs() <= WAVEFRONT_TOL_CELLS,
            "max |u| at {argmax} cells, exact solution peaks at {exact_peak:.2} (step {n})"
        );
    }
    ensure!(energy_steps > 500, "only {energy_steps} source-free steps checked");
    Ok(format!(
        "101x101: zero-source exact, linear, causality worst {worst_causality:.1e}, \
         energy non-increasing over {energy_steps} steps, front error {worst_front:.2} cells, \
         peak vs exact {worst_peak:.2} cells"
    ))
}

fn criterion_7_geometry() -> Check {
    let g = geometry_from_scan(10.0, 10.0, 50.0).unwrap();
    ensure!(g.nx() == 201 && g.ny() == 201, "got {}x{}", g.nx(), g.ny());
    let f = make_phantom(&"wavefront_rings".parse().unwrap(), &g, 0).unwrap();
    let p = line_profile(&f, &f, Row::Center).unwrap();
    ensure!(p.row_index == 100, "centre row {}", p.row_index);
    ensure!(p.len() == 201, "{} samples", p.len());
    ensure!(
        p.positions_mm.windows(2).all(|w| ((w[1] - w[0]) - 0.05).abs() < 1e-12),
        "spacing is not 0.05 mm"
    );
    Ok("201x201, centre row 100, 201 samples at 0.05 mm".into())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavescrub"))
}

fn files_under(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn criterion_8_reproducibility() -> Check {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.conf");
    std::fs::write(
        &config,
        "extent_x_mm = 5\nextent_y_mm = 5\nstep_um = 50\nsource_x_mm = 2.5\nsource_y_mm = 2.5\n\
         defect = disk 3.5 2.5 0.4\nsnapshot_times_s = 3e-7, 5e-7, 7e-7\nnoise_sigma = 0.005\n\
         seed = 7\nstage = median h=1\nstage = wiener h=2 nv=auto\nformat = f64le\n",
    )
    .unwrap();
    let mut listings = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let status = bin()
            .args(["pipeline", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        ensure!(status.status.success(), "pipeline run {run} failed: {}", String::from_utf8_lossy(&status.stderr));
        listings.push(files_under(&out));
    }
    let (a, b) = (&listings[0], &listings[1]);
    ensure!(a.len() == b.len(), "different file sets");
    for ((na, da), (nb, db)) in a.iter().zip(b) {
        ensure!(na == nb, "file sets differ: {na} vs {nb}");
        ensure!(da == db, "{na} differs between runs");
    }
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    for required in ["metric.csv", "profile_000.csv", "manifest.json", "denoised/frame_002.f64le"] {
        ensure!(names.contains(&required), "missing {required}");
    }
    Ok(format!("{} files bit-identical across two runs", a.len()))
}

fn ulps(a: f64, b: f64) -> u64 {
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 { i64::MIN - bits } else { bits }
    };
    key(a).abs_diff(key(b))
}

fn criterion_9_io() -> Check {
    let mut frames = Vec::new();
    for k in 0..20u64 {
        let nx = 1 + (k as usize * 5) % 30;
        let ny = 1 + (k as usize * 11) % 30;
        let g = ScanGeometry::from_counts(nx, ny, 12.5 + k as f64).unwrap();
        let values = random_values(nx * ny, 50 + k)
            .into_iter()
            .enumerate()
            .map(|(i, v)| v * 10f64.powi((i % 41) as i32 - 20))
            .collect();
        let time = if k % 2 == 0 { Some(k as f64 * 1.1e-7) } else { None };
        frames.push(Frame::new(g, values).unwrap().with_time(0, time));
    }
    let mut worst_ulps = 0;
    for f in &frames {
        let bin = decode_frame(&encode_frame(f, FrameFormat::F64le), FrameFormat::F64le).unwrap();
        ensure!(bin.geometry() == f.geometry() && bin.time_s() == f.time_s(), "f64le header mismatch");
        ensure!(
            bin.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()),
            "f64le not bit-exact"
        );
        let csv = decode_frame(&encode_frame(f, FrameFormat::Csv), FrameFormat::Csv).unwrap();
        ensure!(csv.geometry() == f.geometry() && csv.time_s() == f.time_s(), "csv header mismatch");
        for (a, b) in csv.values().iter().zip(f.values()) {
            worst_ulps = worst_ulps.max(ulps(*a, *b));
        }
        ensure!(worst_ulps <= 1, "csv off by {worst_ulps} ulp");
    }

    // Malformed inputs: error classes from the library, exit code 2 from the CLI.
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.csv");
    std::fs::write(&good, "# wavescrub-frame nx=3 ny=2 step_um=50 time_s=na\n1,2,3\n4,5,6\n").unwrap();
    let cases: [(&str, &[u8], &str); 5] = [
        ("short.csv", b"# wavescrub-frame nx=3 ny=2 step_um=50 time_s=na\n1,2,3\n4,5\n", "dimension"),
        ("header.csv", b"# not-a-frame\n1,2,3\n", "format"),
        ("nan.csv", b"# wavescrub-frame nx=3 ny=1 step_um=50 time_s=na\n1,NaN,3\n", "data"),
        ("magic.f64le", b"WSCRB9\0\0\x03\0\0\0\x01\0\0\0", "format"),
        ("payload.f64le", &{
            let mut b = b"WSCRB1\0\0".to_vec();
            b.extend_from_slice(&3u32.to_le_bytes());
            b.extend_from_slice(&1u32.to_le_bytes());
            b.extend_from_slice(&50f64.to_le_bytes());
            b.extend_from_slice(&f64::NAN.to_le_bytes());
            b.extend_from_slice(&1f64.to_le_bytes());
            b
        }, "dimension"),
    ];
    for (name, bytes, class) in cases {
        let path = tmp.path().join(name);
        std::fs::write(&path, bytes).unwrap();
        let format = FrameFormat::from_path(&path).unwrap();
        let err = wavescrub::load_frame(&path, format).unwrap_err();
        ensure!(
            err.to_string().contains(&format!("{class} error")),
            "{name}: expected {class} error, got {err}"
        );
        let out = bin()
            .args(["profile", "--original"])
            .arg(&path)
            .arg("--denoised")
            .arg(&good)
            .output()
            .unwrap();
        ensure!(out.status.code() == Some(2), "{name}: exit code {:?}", out.status.code());
    }
    Ok(format!("{} frames: f64le bit-exact, csv worst {worst_ulps} ulp; 5 malformed files exit 2", frames.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("1 metric axioms", Duration::from_secs(10), criterion_1_metric_axioms),
        ("2 metric/noise identity", Duration::from_secs(30), criterion_2_noise_identity),
        ("3 filter oracle equivalence", Duration::from_secs(60), criterion_3_filter_oracles),
        ("4 adaptive analytic case", Duration::from_secs(60), criterion_4_adaptive_analytic),
        ("5 denoising efficacy", Duration::from_secs(60), criterion_5_efficacy),
        ("6 FDTD physics", Duration::from_secs(120), criterion_6_fdtd_physics),
        ("7 geometry", Duration::from_secs(60), criterion_7_geometry),
        ("8 reproducibility", Duration::from_secs(120), criterion_8_reproducibility),
        ("9 I/O round-trips", Duration::from_secs(60), criterion_9_io),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().map(String::as_str).or(p.downcast_ref::<&str>().copied()))));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  {name:<30} {elapsed:>8.2?}  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:<30} {elapsed:>8.2?}  {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
