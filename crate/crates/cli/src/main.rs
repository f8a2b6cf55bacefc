//! Command-line surface for the sliding-window persistence pipeline.
//!
//! Exit codes: 0 on success, 1 on computational failure (rank deficiency,
//! no valid delay, ...), 2 on input or usage errors.

mod svg;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use quasiper::bounds::{
    lower_bound, sigma_min_floor, vandermonde_report, BoundReport, CountingMode,
};
use quasiper::embedding::{
    feasible_start_times, hausdorff_distance, maxmin_sample, sliding_window, DistanceMatrix,
    EmbeddingParams, Metric, PointCloud, WindowSource,
};
use quasiper::io;
use quasiper::model::{Signal, SpectralModel};
use quasiper::params::{
    choose_d_with_rule, gamma, minimize_gamma, persistence_vs_tau_sweep, DelaySearchConfig,
    DimensionRule,
};
use quasiper::persistence::{rips_persistence, FiltrationInput, PersistenceDiagram};
use quasiper::spectral::{find_peaks, mirror_real_peaks, spectrum_with, Spectrum, SpectrumPeak, Window};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "quasiper",
    version,
    about = "Quasiperiodicity analysis: sliding-window embeddings, Rips persistence, and certified persistence bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for all randomized steps (landmark selection)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for pipeline bundles
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Number of maxmin landmarks (default: min(800, cloud size))
    #[arg(long, global = true)]
    landmarks: Option<usize>,
    /// Top homological dimension to compute
    #[arg(long, global = true, default_value_t = 2)]
    dims: usize,
    /// Rips scale cutoff (default: enclosing radius)
    #[arg(long, global = true)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a spectral model into a sampled signal (CSV or WAV by extension)
    Synth {
        /// Spectral model JSON
        #[arg(long)]
        model: PathBuf,
        /// Number of samples
        #[arg(long)]
        n: usize,
        /// Samples per unit time
        #[arg(long)]
        rate: f64,
        /// Time of the first sample
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Output file (.csv or .wav)
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the modulus spectrum and optionally detect peaks
    Spectrum {
        /// Input signal (.csv or .wav)
        #[arg(long)]
        input: PathBuf,
        /// Spectrum CSV output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Peaks JSON output
        #[arg(long)]
        peaks_out: Option<PathBuf>,
        #[command(flatten)]
        peaks: PeakArgs,
    },
    /// Select embedding parameters d and tau from the signal spectrum
    Params {
        #[arg(long)]
        input: PathBuf,
        /// Search range upper end (default (3/4) * duration / d)
        #[arg(long)]
        tau_max: Option<f64>,
        /// Grid points for the delay search (default: density tied to the peak gaps)
        #[arg(long)]
        grid: Option<usize>,
        /// Golden-section refinement tolerance
        #[arg(long, default_value_t = 1e-6)]
        refine_tol: f64,
        /// Use d = alpha - 1 instead of d = alpha
        #[arg(long)]
        d_minus_one: bool,
        #[command(flatten)]
        peaks: PeakArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the sliding-window point cloud of a signal
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tau: f64,
        /// Point-cloud CSV output
        #[arg(long)]
        out: PathBuf,
        /// Also write the landmark distance matrix (binary)
        #[arg(long)]
        dmat_out: Option<PathBuf>,
        /// Metric for the distance matrix
        #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
        metric: MetricArg,
    },
    /// Rips persistence diagrams of a point cloud or distance matrix
    Persist {
        /// Point-cloud CSV input
        #[arg(long, conflicts_with = "dmat")]
        cloud: Option<PathBuf>,
        /// Distance-matrix binary input
        #[arg(long)]
        dmat: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Vandermonde conditioning report and persistence lower bounds
    Bounds {
        /// Comma-separated frequencies (radians per unit time)
        #[arg(long, conflicts_with = "peaks_file")]
        freqs: Option<String>,
        /// Peaks JSON produced by `spectrum --peaks-out`
        #[arg(long)]
        peaks_file: Option<PathBuf>,
        /// Mirror peaks into signed pairs (for one-sided real-signal peaks)
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        d: usize,
        /// Comma-separated coefficient magnitudes, descending
        #[arg(long)]
        magnitudes: String,
        /// Sup-norm tail bound of the truncation error
        #[arg(long, default_value_t = 0.0)]
        tail: f64,
        /// Hausdorff subsampling correction
        #[arg(long, default_value_t = 0.0)]
        hausdorff: f64,
        /// Use the certified node-separation floor instead of the computed sigma_min
        #[arg(long)]
        floor: bool,
        /// Literal multiplicity summation (double-counts repeated magnitudes)
        #[arg(long)]
        literal_counts: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Persistence of the top features as a function of the delay
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tau_from: f64,
        #[arg(long)]
        tau_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        top_q: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full pipeline: spectrum, parameter selection, embedding, persistence, bounds, figures
    Pipeline {
        /// Model JSON, signal CSV, or WAV
        #[arg(long)]
        input: PathBuf,
        /// Samples to synthesize when the input is a model
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Sample rate when the input is a model
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        tau_max: Option<f64>,
        /// Sup-norm tail bound for the bound reports
        #[arg(long, default_value_t = 0.0)]
        tail: f64,
        /// Evaluate the delay sweep at this many values (0 = skip)
        #[arg(long, default_value_t = 0)]
        sweep_steps: usize,
        #[command(flatten)]
        peaks: PeakArgs,
    },
    /// Render a figure from a previously computed artifact
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        /// Input file (signal/spectrum/diagram/sweep/cloud depending on kind)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Bounds JSON whose bound values are drawn as dashed guide lines
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Orbit generator: comma-separated base frequencies
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 2000)]
        t_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        t_from: f64,
        #[arg(long, default_value_t = 1000.0)]
        t_to: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct PeakArgs {
    /// Absolute peak height threshold on the normalized modulus
    #[arg(long)]
    min_height: Option<f64>,
    /// Peak height threshold as a fraction of the maximum modulus
    #[arg(long, default_value_t = 0.04)]
    min_height_rel: f64,
    /// Minimum angular-frequency separation between kept peaks
    #[arg(long, default_value_t = 100.0)]
    min_sep: f64,
    /// Apply a Hann window before the transform
    #[arg(long)]
    hann: bool,
    /// Report the full signed spectrum even for real signals
    #[arg(long)]
    full_range: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Euclidean,
    Max,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Max => Metric::Max,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Signal,
    Spectrum,
    Diagram,
    Sweep,
    Orbit,
}

/// Input/usage errors exit with 2, computational failures with 1.
enum CliError {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

fn usage<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Usage(e.into())
}

fn compute<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Compute(e.into())
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

/// Hash of the resolved configuration, embedded in every JSON output.
fn config_hash(config: &Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.to_string().as_bytes());
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn envelope(seed: u64, config: &Value, payload: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("seed".into(), json!(seed));
    obj.insert("config_hash".into(), json!(config_hash(config)));
    if let Value::Object(p) = payload {
        obj.extend(p);
    }
    Value::Object(obj)
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(compute)?;
    fs::write(path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(usage)
}

fn load_signal(path: &Path) -> Result<Signal, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let file = fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(usage)?;
    match ext {
        "wav" => io::read_signal_wav(file).map_err(usage),
        _ => io::read_signal_csv(file).map_err(usage),
    }
}

fn load_model(path: &Path) -> Result<SpectralModel, CliError> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(usage)?;
    let value: Value = serde_json::from_str(&text).map_err(usage)?;
    io::model_from_json(&value).map_err(usage)
}

fn parse_float_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| usage(anyhow!("bad number '{p}': {e}"))))
        .collect()
}

struct PeakAnalysis {
    spectrum: Spectrum,
    peaks: Vec<SpectrumPeak>,
    signed_peaks: Vec<SpectrumPeak>,
}

fn analyze_peaks(signal: &Signal, args: &PeakArgs) -> PeakAnalysis {
    let window = if args.hann { Window::Hann } else { Window::Rectangular };
    let half_range = signal.is_real() && !args.full_range;
    let sp = spectrum_with(signal, window, half_range);
    let height = args.min_height.unwrap_or(args.min_height_rel * sp.max_modulus());
    let peaks = find_peaks(&sp, height, args.min_sep);
    let signed_peaks = if half_range { mirror_real_peaks(&peaks) } else { peaks.clone() };
    PeakAnalysis { spectrum: sp, peaks, signed_peaks }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth { ref model, n, rate, t0, ref out } => {
            let config = json!({"cmd": "synth", "model": model.display().to_string(), "n": n, "rate": rate, "t0": t0});
            let m = load_model(model)?;
            let signal = m.synthesize(n, rate, t0).map_err(usage)?;
            let ext = out.extension().and_then(|e| e.to_str()).unwrap_or("");
            let file = fs::File::create(out).map_err(usage)?;
            match ext {
                "wav" => io::write_signal_wav(file, &signal).map_err(compute)?,
                _ => io::write_signal_csv(file, &signal).map_err(compute)?,
            }
            let _ = config; // synth emits no JSON
            Ok(())
        }

        Command::Spectrum { ref input, ref out, ref peaks_out, ref peaks } => {
            let config = json!({
                "cmd": "spectrum", "input": input.display().to_string(),
                "min_height": peaks.min_height, "min_height_rel": peaks.min_height_rel,
                "min_sep": peaks.min_sep, "hann": peaks.hann, "full_range": peaks.full_range,
            });
            let signal = load_signal(input)?;
            if signal.len() < 2 {
                return Err(usage(anyhow!("no samples")));
            }
            let analysis = analyze_peaks(&signal, peaks);
            if let Some(out) = out {
                let file = fs::File::create(out).map_err(usage)?;
                io::write_spectrum_csv(file, &analysis.spectrum).map_err(compute)?;
            }
            if let Some(peaks_out) = peaks_out {
                let payload = json!({"peaks": io::peaks_to_json(&analysis.peaks)});
                write_json(peaks_out, &envelope(cli.seed, &config, payload))?;
            }
            Ok(())
        }

        Command::Params {
            ref input,
            tau_max,
            grid,
            refine_tol,
            d_minus_one,
            ref peaks,
            ref out,
        } => {
            let config = json!({
                "cmd": "params", "input": input.display().to_string(),
                "tau_max": tau_max, "grid": grid, "refine_tol": refine_tol,
                "d_minus_one": d_minus_one, "min_sep": peaks.min_sep,
            });
            let signal = load_signal(input)?;
            let analysis = analyze_peaks(&signal, peaks);
            let rule = if d_minus_one { DimensionRule::PeakCountMinusOne } else { DimensionRule::PeakCount };
            let d = choose_d_with_rule(&analysis.signed_peaks, rule).map_err(compute)?;
            let freqs: Vec<f64> = analysis.signed_peaks.iter().map(|p| p.frequency).collect();
            let tau_max = tau_max.unwrap_or_else(|| DelaySearchConfig::default_tau_max(signal.duration(), d));
            let mut config_search = DelaySearchConfig::for_frequencies(tau_max, &freqs, d);
            if let Some(g) = grid {
                config_search.grid_points = g;
            }
            config_search.refine_tol = refine_tol;
            let (tau, gamma_value) = minimize_gamma(&freqs, d, &config_search).map_err(compute)?;
            let payload = json!({"d": d, "tau": tau, "gamma": gamma_value});
            write_json(out, &envelope(cli.seed, &config, payload))
        }

        Command::Embed { ref input, d, tau, ref out, ref dmat_out, metric } => {
            let signal = load_signal(input)?;
            let params = EmbeddingParams::new(d, tau);
            let times = feasible_start_times(&signal, params);
            if times.is_empty() {
                return Err(compute(anyhow!(
                    "window span {} exceeds signal duration {}",
                    params.span(),
                    signal.duration()
                )));
            }
            let cloud =
                sliding_window(&WindowSource::Sampled(&signal), params, &times).map_err(compute)?;
            let cloud = subsample(&cloud, cli.landmarks, cli.seed)?;
            let file = fs::File::create(out).map_err(usage)?;
            io::write_cloud_csv(file, &cloud).map_err(compute)?;
            if let Some(dmat_out) = dmat_out {
                let dm = DistanceMatrix::from_cloud(&cloud, metric.into());
                let file = fs::File::create(dmat_out).map_err(usage)?;
                io::write_distance_matrix(file, &dm).map_err(compute)?;
            }
            Ok(())
        }

        Command::Persist { ref cloud, ref dmat, ref out } => {
            let config = json!({
                "cmd": "persist",
                "cloud": cloud.as_ref().map(|p| p.display().to_string()),
                "dmat": dmat.as_ref().map(|p| p.display().to_string()),
                "dims": cli.dims, "threshold": cli.threshold,
            });
            let dm = match (cloud, dmat) {
                (Some(path), None) => {
                    let file = fs::File::open(path).map_err(usage)?;
                    let cloud = io::read_cloud_csv(file).map_err(usage)?;
                    DistanceMatrix::from_cloud(&cloud, Metric::Euclidean)
                }
                (None, Some(path)) => {
                    let file = fs::File::open(path).map_err(usage)?;
                    io::read_distance_matrix(file).map_err(usage)?
                }
                _ => return Err(usage(anyhow!("exactly one of --cloud or --dmat is required"))),
            };
            let mut input = FiltrationInput::new(dm, cli.dims);
            input.threshold = cli.threshold;
            let diagrams = rips_persistence(&input).map_err(compute)?;
            let payload = json!({"diagrams": io::diagrams_to_json(&diagrams)});
            write_json(out, &envelope(cli.seed, &config, payload))
        }

        Command::Bounds {
            ref freqs,
            ref peaks_file,
            mirror,
            tau,
            d,
            ref magnitudes,
            tail,
            hausdorff,
            floor,
            literal_counts,
            ref out,
        } => {
            let config = json!({
                "cmd": "bounds", "tau": tau, "d": d, "magnitudes": magnitudes,
                "tail": tail, "hausdorff": hausdorff, "floor": floor,
                "literal_counts": literal_counts,
            });
            let freqs: Vec<f64> = match (freqs, peaks_file) {
                (Some(s), None) => parse_float_list(s)?,
                (None, Some(path)) => {
                    let text = fs::read_to_string(path).map_err(usage)?;
                    let value: Value = serde_json::from_str(&text).map_err(usage)?;
                    let peaks_val = value.get("peaks").unwrap_or(&value);
                    let peaks = io::peaks_from_json(peaks_val).map_err(usage)?;
                    let peaks = if mirror { mirror_real_peaks(&peaks) } else { peaks };
                    peaks.iter().map(|p| p.frequency).collect()
                }
                _ => return Err(usage(anyhow!("exactly one of --freqs or --peaks-file is required"))),
            };
            let mags = parse_float_list(magnitudes)?;
            let report = vandermonde_report(&freqs, tau, d).map_err(compute)?;
            let sigma = if floor {
                sigma_min_floor(d, report.delta_omega).map_err(compute)?
            } else {
                report.sigma_min
            };
            let mode = if literal_counts { CountingMode::Literal } else { CountingMode::DistinctRuns };
            let mut bound_reports: Vec<BoundReport> = Vec::new();
            for n in 1..=mags.len() {
                bound_reports
                    .push(lower_bound(&mags, n, sigma, d, tail, hausdorff, mode).map_err(compute)?);
            }
            let payload = json!({
                "vandermonde": {
                    "nodes": report.nodes.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                    "d": report.d,
                    "sigma_min": report.sigma_min,
                    "sigma_max": report.sigma_max,
                    "condition_number": report.condition_number,
                    "delta_omega": report.delta_omega,
                    "sigma_used": sigma,
                },
                "bounds": bound_reports,
            });
            write_json(out, &envelope(cli.seed, &config, payload))
        }

        Command::Sweep { ref input, d, tau_from, tau_to, steps, top_q, ref out } => {
            if steps < 2 || tau_to <= tau_from {
                return Err(usage(anyhow!("need steps >= 2 and tau_to > tau_from")));
            }
            let signal = load_signal(input)?;
            let taus: Vec<f64> = (0..steps)
                .map(|i| tau_from + (tau_to - tau_from) * i as f64 / (steps - 1) as f64)
                .collect();
            let times: Vec<f64> = (0..signal.len()).map(|n| signal.time(n)).collect();
            let dims: Vec<usize> = (1..=cli.dims).collect();
            let landmarks = cli.landmarks.unwrap_or(200);
            let rows = persistence_vs_tau_sweep(
                &WindowSource::Sampled(&signal),
                d,
                &taus,
                &times,
                landmarks,
                cli.seed,
                top_q,
                &dims,
            )
            .map_err(compute)?;
            let file = fs::File::create(out).map_err(usage)?;
            io::write_sweep_csv(file, &rows).map_err(compute)
        }

        Command::Pipeline {
            ref input,
            n,
            rate,
            t0,
            tau_max,
            tail,
            sweep_steps,
            ref peaks,
        } => run_pipeline(&cli, input, n, rate, t0, tau_max, tail, sweep_steps, peaks),

        Command::Plot {
            kind,
            ref input,
            ref bounds,
            ref beta,
            t_steps,
            t_from,
            t_to,
            ref out,
        } => {
            let svg_text = match kind {
                PlotKind::Signal => {
                    let path = input.as_ref().ok_or_else(|| usage(anyhow!("--input required")))?;
                    svg::signal_svg(&load_signal(path)?)
                }
                PlotKind::Spectrum => {
                    let path = input.as_ref().ok_or_else(|| usage(anyhow!("--input required")))?;
                    let signal = load_signal(path)?;
                    let analysis = analyze_peaks(&signal, &PeakArgs {
                        min_height: None,
                        min_height_rel: 0.04,
                        min_sep: 0.0,
                        hann: false,
                        full_range: false,
                    });
                    svg::spectrum_svg(&analysis.spectrum, &analysis.peaks)
                }
                PlotKind::Diagram => {
                    let path = input.as_ref().ok_or_else(|| usage(anyhow!("--input required")))?;
                    let text = fs::read_to_string(path).map_err(usage)?;
                    let value: Value = serde_json::from_str(&text).map_err(usage)?;
                    let diagrams_val = value.get("diagrams").unwrap_or(&value);
                    let diagrams: Vec<PersistenceDiagram> =
                        io::diagrams_from_json(diagrams_val).map_err(usage)?;
                    let bound_values = match bounds {
                        Some(bpath) => {
                            let text = fs::read_to_string(bpath).map_err(usage)?;
                            let value: Value = serde_json::from_str(&text).map_err(usage)?;
                            bound_values_from_json(&value)?
                        }
                        None => Vec::new(),
                    };
                    svg::diagram_svg(&diagrams, &bound_values)
                }
                PlotKind::Sweep => {
                    let path = input.as_ref().ok_or_else(|| usage(anyhow!("--input required")))?;
                    let file = fs::File::open(path).map_err(usage)?;
                    let rows = io::read_sweep_csv(file).map_err(usage)?;
                    svg::sweep_svg(&rows)
                }
                PlotKind::Orbit => match (input, beta) {
                    (Some(path), None) => {
                        let file = fs::File::open(path).map_err(usage)?;
                        let cloud = io::read_cloud_csv(file).map_err(usage)?;
                        let pts: Vec<Vec<f64>> =
                            (0..cloud.len()).map(|i| cloud.point(i).to_vec()).collect();
                        svg::orbit_svg(&pts)
                    }
                    (None, Some(beta)) => {
                        let b = parse_float_list(beta)?;
                        let times: Vec<f64> = (0..t_steps)
                            .map(|i| {
                                t_from + (t_to - t_from) * i as f64 / (t_steps.max(2) - 1) as f64
                            })
                            .collect();
                        let pts = quasiper::model::kronecker_orbit(&b, &times);
                        svg::orbit_svg(&pts)
                    }
                    _ => return Err(usage(anyhow!("orbit plots need exactly one of --input or --beta"))),
                },
            };
            fs::write(out, svg_text).map_err(usage)
        }
    }
}

fn subsample(cloud: &PointCloud, landmarks: Option<usize>, seed: u64) -> Result<PointCloud, CliError> {
    let m = landmarks.unwrap_or_else(|| cloud.len().min(800));
    if m >= cloud.len() {
        return Ok(cloud.clone());
    }
    let idx = maxmin_sample(cloud, m, seed).map_err(compute)?;
    Ok(cloud.select(&idx))
}

fn bound_values_from_json(value: &Value) -> Result<Vec<f64>, CliError> {
    let list = value
        .get("bounds")
        .and_then(Value::as_array)
        .ok_or_else(|| usage(anyhow!("bounds JSON needs a bounds array")))?;
    Ok(list
        .iter()
        .filter_map(|b| b.get("bound_value").and_then(Value::as_f64))
        .collect())
}

/// spectrum -> peaks -> d -> tau -> windows -> landmarks -> persistence ->
/// bounds, with every artifact written into the output directory.
#[allow(clippy::too_many_arguments)]
fn run_pipeline(
    cli: &Cli,
    input: &Path,
    n: usize,
    rate: Option<f64>,
    t0: f64,
    tau_max: Option<f64>,
    tail: f64,
    sweep_steps: usize,
    peaks: &PeakArgs,
) -> Result<(), CliError> {
    let out_dir = &cli.out_dir;
    fs::create_dir_all(out_dir).map_err(usage)?;
    let config = json!({
        "cmd": "pipeline", "input": input.display().to_string(), "n": n, "rate": rate,
        "t0": t0, "tau_max": tau_max, "tail": tail, "sweep_steps": sweep_steps,
        "landmarks": cli.landmarks, "dims": cli.dims, "threshold": cli.threshold,
        "min_height": peaks.min_height, "min_height_rel": peaks.min_height_rel,
        "min_sep": peaks.min_sep, "hann": peaks.hann,
    });

    // stage: input
    let ext = input.extension().and_then(|e| e.to_str()).unwrap_or("");
    let signal = if ext == "json" {
        let model = load_model(input)?;
        let rate = rate.ok_or_else(|| usage(anyhow!("pipeline: model input requires --rate")))?;
        let signal = model.synthesize(n, rate, t0).map_err(|e| compute(anyhow!("synth: {e}")))?;
        let file = fs::File::create(out_dir.join("signal.csv")).map_err(usage)?;
        io::write_signal_csv(file, &signal).map_err(compute)?;
        signal
    } else {
        load_signal(input)?
    };
    if signal.len() < 2 {
        return Err(usage(anyhow!("no samples")));
    }

    // stage: spectrum and peaks
    let analysis = analyze_peaks(&signal, peaks);
    let file = fs::File::create(out_dir.join("spectrum.csv")).map_err(usage)?;
    io::write_spectrum_csv(file, &analysis.spectrum)
        .map_err(|e| compute(anyhow!("spectrum: {e}")))?;
    write_json(
        &out_dir.join("peaks.json"),
        &envelope(cli.seed, &config, json!({"peaks": io::peaks_to_json(&analysis.peaks)})),
    )?;

    // stage: parameter selection
    let d = choose_d_with_rule(&analysis.signed_peaks, DimensionRule::PeakCount)
        .map_err(|e| compute(anyhow!("choose_d: {e}")))?;
    let freqs: Vec<f64> = analysis.signed_peaks.iter().map(|p| p.frequency).collect();
    let tau_hi = tau_max.unwrap_or_else(|| DelaySearchConfig::default_tau_max(signal.duration(), d));
    let search = DelaySearchConfig::for_frequencies(tau_hi, &freqs, d);
    let (tau, gamma_value) =
        minimize_gamma(&freqs, d, &search).map_err(|e| compute(anyhow!("minimize_gamma: {e}")))?;
    write_json(
        &out_dir.join("params.json"),
        &envelope(cli.seed, &config, json!({"d": d, "tau": tau, "gamma": gamma_value})),
    )?;

    // stage: embedding and landmarks
    let params = EmbeddingParams::new(d, tau);
    let times = feasible_start_times(&signal, params);
    if times.is_empty() {
        return Err(compute(anyhow!(
            "embed: window span {} exceeds signal duration {}",
            params.span(),
            signal.duration()
        )));
    }
    let cloud = sliding_window(&WindowSource::Sampled(&signal), params, &times)
        .map_err(|e| compute(anyhow!("embed: {e}")))?;
    let landmarks = subsample(&cloud, cli.landmarks, cli.seed)?;
    let haus = hausdorff_distance(&landmarks, &cloud).map_err(|e| compute(anyhow!("hausdorff: {e}")))?;

    // stage: persistence
    let dist = DistanceMatrix::from_cloud(&landmarks, Metric::Euclidean);
    let mut filt = FiltrationInput::new(dist, cli.dims);
    filt.threshold = cli.threshold;
    let diagrams = rips_persistence(&filt).map_err(|e| compute(anyhow!("persistence: {e}")))?;
    write_json(
        &out_dir.join("diagrams.json"),
        &envelope(cli.seed, &config, json!({"diagrams": io::diagrams_to_json(&diagrams)})),
    )?;

    // stage: bounds (magnitudes estimated from the one-sided peak amplitudes)
    let mut mags: Vec<f64> = analysis.peaks.iter().map(|p| p.amplitude).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let bounds_payload = if mags.len() >= 2 {
        match vandermonde_report(&freqs, tau, d) {
            Ok(report) => {
                let mut bound_reports = Vec::new();
                for level in 1..=mags.len() {
                    bound_reports.push(
                        lower_bound(
                            &mags,
                            level,
                            report.sigma_min,
                            d,
                            tail,
                            haus,
                            CountingMode::DistinctRuns,
                        )
                        .map_err(|e| compute(anyhow!("bounds: {e}")))?,
                    );
                }
                json!({
                    "hausdorff": haus,
                    "sigma_min": report.sigma_min,
                    "condition_number": report.condition_number,
                    "delta_omega": report.delta_omega,
                    "bounds": bound_reports,
                })
            }
            Err(e) => return Err(compute(anyhow!("bounds: {e}"))),
        }
    } else {
        json!({"hausdorff": haus, "bounds": []})
    };
    write_json(&out_dir.join("bounds.json"), &envelope(cli.seed, &config, bounds_payload.clone()))?;

    // stage: figures
    fs::write(out_dir.join("signal.svg"), svg::signal_svg(&signal)).map_err(usage)?;
    fs::write(
        out_dir.join("spectrum.svg"),
        svg::spectrum_svg(&analysis.spectrum, &analysis.peaks),
    )
    .map_err(usage)?;
    let bound_values: Vec<f64> = bounds_payload
        .get("bounds")
        .and_then(Value::as_array)
        .map(|arr| arr.iter().filter_map(|b| b.get("bound_value").and_then(Value::as_f64)).collect())
        .unwrap_or_default();
    fs::write(out_dir.join("diagram.svg"), svg::diagram_svg(&diagrams, &bound_values))
        .map_err(usage)?;

    // stage: optional delay sweep
    if sweep_steps > 0 {
        let taus: Vec<f64> = (0..sweep_steps)
            .map(|i| tau_hi * (i + 1) as f64 / sweep_steps as f64)
            .collect();
        let dims: Vec<usize> = (1..=cli.dims).collect();
        let rows = persistence_vs_tau_sweep(
            &WindowSource::Sampled(&signal),
            d,
            &taus,
            &times,
            cli.landmarks.unwrap_or(200).min(times.len()),
            cli.seed,
            3,
            &dims,
        )
        .map_err(|e| compute(anyhow!("sweep: {e}")))?;
        let file = fs::File::create(out_dir.join("sweep.csv")).map_err(usage)?;
        io::write_sweep_csv(file, &rows).map_err(compute)?;
        fs::write(out_dir.join("sweep.svg"), svg::sweep_svg(&rows)).map_err(usage)?;
    }

    // summary
    write_json(
        &out_dir.join("pipeline.json"),
        &envelope(
            cli.seed,
            &config,
            json!({
                "samples": signal.len(),
                "peaks": analysis.peaks.len(),
                "d": d,
                "tau": tau,
                "gamma": gamma_value,
                "windows": times.len(),
                "landmarks": landmarks.len(),
                "hausdorff": haus,
            }),
        ),
    )
}
