//! The subcommands as library functions.

use std::fs;
use std::path::{Path, PathBuf};

use super::manifest::RunManifest;
use crate::error::{Error, Result};
use crate::filters::{run_pipeline, PipelineSpec};
use crate::frames::{encode_frame, load_frame, Frame, FrameFormat, FrameStack};
use crate::kv::KeyValues;
use crate::metrics::{line_profile, noise_energy_removed, report_csv, report_table, NoiseReport, Row};
use crate::synth::{add_noise_to_stack, simulate_wavefield, SynthConfig, RNG_IDENTITY, SYNTH_KEYS};

fn read_config(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Config(format!("cannot read config: {e}")).at(path))
}

fn utf8(bytes: &[u8], path: &Path) -> Result<String> {
    String::from_utf8(bytes.to_vec())
        .map_err(|_| Error::Config("config is not valid UTF-8".into()).at(path))
}

/// Hash input: config bytes plus any command-line seed override.
fn config_identity(bytes: &[u8], seed: Option<u64>) -> Vec<u8> {
    let mut v = bytes.to_vec();
    if let Some(s) = seed {
        v.extend_from_slice(format!("\n# --seed {s}\n").as_bytes());
    }
    v
}

fn frame_name(prefix: &str, index: usize, format: FrameFormat) -> String {
    format!("{prefix}/frame_{index:03}.{}", format.extension())
}

fn load_any(path: &Path, format: Option<FrameFormat>) -> Result<Frame> {
    let format = match format {
        Some(f) => f,
        None => FrameFormat::from_path(path).map_err(|e| e.at(path))?,
    };
    load_frame(path, format)
}

fn display(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

/// Synthetic run: clean stack, optional noisy stack.
pub struct SynthRun {
    pub clean: FrameStack,
    pub noisy: Option<FrameStack>,
    pub manifest: RunManifest,
}

fn synthesize(config: &SynthConfig, out_dir: &Path, format: FrameFormat, manifest: &mut RunManifest) -> Result<(FrameStack, Option<FrameStack>)> {
    let (clean, meta) = simulate_wavefield(config)?;
    for (k, frame) in clean.iter().enumerate() {
        manifest.write_output(out_dir, &frame_name("clean", k, format), "clean", frame.time_s(), &encode_frame(frame, format))?;
    }
    let noisy = match &config.noise {
        Some(noise) => {
            let (noisy, energies) = add_noise_to_stack(&clean, noise, config.seed)?;
            for (k, frame) in noisy.iter().enumerate() {
                manifest.write_output(out_dir, &frame_name("noisy", k, format), "noisy", frame.time_s(), &encode_frame(frame, format))?;
            }
            manifest.injected_energy = energies;
            Some(noisy)
        }
        None => None,
    };
    manifest.seed = Some(config.seed);
    manifest.rng = Some(RNG_IDENTITY.to_string());
    manifest.simulation = Some(meta);
    Ok((clean, noisy))
}

/// `synth`: simulate, add noise, write frames and manifest.
pub fn cmd_synth(config_path: &Path, out_dir: &Path, format: FrameFormat, seed: Option<u64>) -> Result<SynthRun> {
    let bytes = read_config(config_path)?;
    let mut config = SynthConfig::parse(&utf8(&bytes, config_path)?).map_err(|e| e.at(config_path))?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let mut manifest = RunManifest::new("synth", &config_identity(&bytes, seed));
    manifest.inputs.push(display(config_path));
    let (clean, noisy) = synthesize(&config, out_dir, format, &mut manifest)?;
    manifest.save(out_dir)?;
    Ok(SynthRun { clean, noisy, manifest })
}

pub struct DenoiseRun {
    pub outputs: Vec<PathBuf>,
    pub failures: Vec<(PathBuf, Error)>,
    pub manifest: RunManifest,
}

impl DenoiseRun {
    pub fn exit_code(&self) -> i32 {
        self.failures.iter().map(|(_, e)| e.exit_code()).max().unwrap_or(0)
    }
}

/// Load the pipeline from a file, or the default pipeline when `None`.
pub fn load_pipeline(path: Option<&Path>) -> Result<(PipelineSpec, Vec<u8>)> {
    match path {
        Some(p) => {
            let bytes = read_config(p)?;
            let spec = PipelineSpec::parse(&utf8(&bytes, p)?).map_err(|e| e.at(p))?;
            Ok((spec, bytes))
        }
        None => {
            let spec = PipelineSpec::default();
            let text = spec.to_string().into_bytes();
            Ok((spec, text))
        }
    }
}

/// `denoise`: run a pipeline over each input; a failing input is reported
/// and skipped.
pub fn cmd_denoise(
    inputs: &[PathBuf],
    pipeline_path: Option<&Path>,
    out_dir: &Path,
    format: Option<FrameFormat>,
) -> Result<DenoiseRun> {
    if inputs.is_empty() {
        return Err(Error::Validation("no input frames".into()));
    }
    let (spec, bytes) = load_pipeline(pipeline_path)?;
    let mut manifest = RunManifest::new("denoise", &bytes);
    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    for input in inputs {
        manifest.inputs.push(display(input));
        let result = (|| -> Result<PathBuf> {
            let in_format = FrameFormat::from_path(input).map_err(|e| e.at(input))?;
            let frame = load_frame(input, in_format)?;
            let denoised = run_pipeline(&frame, &spec).map_err(|e| e.at(input))?;
            let out_format = format.unwrap_or(in_format);
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "frame".into());
            let name = format!("{stem}.{}", out_format.extension());
            manifest.write_output(out_dir, &name, "denoised", denoised.time_s(), &encode_frame(&denoised, out_format))
        })();
        match result {
            Ok(p) => outputs.push(p),
            Err(e) => {
                manifest.failures.push(e.to_string());
                failures.push((input.clone(), e));
            }
        }
    }
    manifest.save(out_dir)?;
    Ok(DenoiseRun { outputs, failures, manifest })
}

pub struct MetricRun {
    pub reports: Vec<NoiseReport>,
    pub table: String,
    pub csv: String,
    pub manifest: Option<RunManifest>,
}

/// `metric`: noise energy removed for each (original, denoised) pair.
pub fn cmd_metric(
    originals: &[PathBuf],
    denoised: &[PathBuf],
    out_dir: Option<&Path>,
    format: Option<FrameFormat>,
) -> Result<MetricRun> {
    if originals.is_empty() {
        return Err(Error::Validation("no frames given".into()));
    }
    if originals.len() != denoised.len() {
        return Err(Error::Validation(format!(
            "{} original frames but {} denoised frames",
            originals.len(),
            denoised.len()
        )));
    }
    let mut reports = Vec::with_capacity(originals.len());
    for (o, d) in originals.iter().zip(denoised) {
        let a = load_any(o, format)?;
        let b = load_any(d, format)?;
        let label = o
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        reports.push(noise_energy_removed(&a, &b).map_err(|e| e.at(d))?.with_label(label));
    }
    let table = report_table(&reports)?;
    let csv = report_csv(&reports)?;
    let manifest = match out_dir {
        Some(dir) => {
            let mut m = RunManifest::new("metric", b"");
            m.inputs = originals.iter().chain(denoised).map(|p| display(p)).collect();
            m.write_output(dir, "metric.csv", "metric", None, csv.as_bytes())?;
            m.save(dir)?;
            Some(m)
        }
        None => None,
    };
    Ok(MetricRun { reports, table, csv, manifest })
}

pub struct ProfileRun {
    pub csv: String,
    pub row_index: usize,
    pub manifest: Option<RunManifest>,
}

/// `profile`: one row of both frames as CSV.
pub fn cmd_profile(
    original: &Path,
    denoised: &Path,
    row: Row,
    out_dir: Option<&Path>,
    format: Option<FrameFormat>,
) -> Result<ProfileRun> {
    let a = load_any(original, format)?;
    let b = load_any(denoised, format)?;
    let profile = line_profile(&a, &b, row)?;
    let csv = profile.to_csv();
    let manifest = match out_dir {
        Some(dir) => {
            let mut m = RunManifest::new("profile", format!("row={row}").as_bytes());
            m.inputs = vec![display(original), display(denoised)];
            m.write_output(dir, "profile.csv", "profile", a.time_s(), csv.as_bytes())?;
            m.save(dir)?;
            Some(m)
        }
        None => None,
    };
    Ok(ProfileRun { csv, row_index: profile.row_index, manifest })
}

/// End-to-end configuration: every synth key, plus
///
/// ```text
/// stage = median h=1          # repeatable, in order; default pipeline when absent
/// stage = wiener h=2 nv=auto
/// row = center                # profile row
/// format = f64le              # frame file format
/// ```
pub struct EndToEndConfig {
    pub synth: SynthConfig,
    pub pipeline: PipelineSpec,
    pub row: Row,
    pub format: FrameFormat,
}

impl EndToEndConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let mut allowed: Vec<&str> = SYNTH_KEYS.to_vec();
        allowed.extend(["stage", "row", "format"]);
        kv.check_known(&allowed)?;
        let stages = kv.all("stage");
        let pipeline = if stages.is_empty() {
            PipelineSpec::default()
        } else {
            PipelineSpec::parse(&stages.join("\n"))?
        };
        Ok(Self {
            synth: SynthConfig::from_key_values(&kv)?,
            pipeline,
            row: kv.parsed_or("row", Row::Center)?,
            format: kv.parsed_or("format", FrameFormat::F64le)?,
        })
    }
}

pub struct PipelineRun {
    pub reports: Vec<NoiseReport>,
    /// `sum (denoised - clean)^2` per frame.
    pub residual_energy: Vec<f64>,
    pub table: String,
    pub manifest: RunManifest,
}

/// `pipeline`: synth, denoise, metric and profiles in one run.
pub fn cmd_pipeline(
    config_path: &Path,
    out_dir: &Path,
    format: Option<FrameFormat>,
    seed: Option<u64>,
) -> Result<PipelineRun> {
    let bytes = read_config(config_path)?;
    let mut config = EndToEndConfig::parse(&utf8(&bytes, config_path)?).map_err(|e| e.at(config_path))?;
    if let Some(s) = seed {
        config.synth.seed = s;
    }
    let format = format.unwrap_or(config.format);
    let mut manifest = RunManifest::new("pipeline", &config_identity(&bytes, seed));
    manifest.inputs.push(display(config_path));

    let (clean, noisy) = synthesize(&config.synth, out_dir, format, &mut manifest)?;
    let observed = noisy.as_ref().unwrap_or(&clean);

    let mut reports = Vec::with_capacity(observed.len());
    let mut residual_energy = Vec::with_capacity(observed.len());
    for (k, (frame, truth)) in observed.iter().zip(clean.iter()).enumerate() {
        let denoised = run_pipeline(frame, &config.pipeline).map_err(|e| e.at(config_path))?;
        manifest.write_output(out_dir, &frame_name("denoised", k, format), "denoised", denoised.time_s(), &encode_frame(&denoised, format))?;
        reports.push(noise_energy_removed(frame, &denoised)?.with_label(format!("frame_{k:03}")));
        residual_energy.push(noise_energy_removed(&denoised, truth)?.energy_removed);
        let profile = line_profile(frame, &denoised, config.row)?;
        manifest.write_output(out_dir, &format!("profile_{k:03}.csv"), "profile", frame.time_s(), profile.to_csv().as_bytes())?;
    }
    let csv = report_csv(&reports)?;
    manifest.write_output(out_dir, "metric.csv", "metric", None, csv.as_bytes())?;
    manifest.save(out_dir)?;
    Ok(PipelineRun {
        table: report_table(&reports)?,
        reports,
        residual_energy,
        manifest,
    })
}
