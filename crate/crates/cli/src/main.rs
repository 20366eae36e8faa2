//! `chromatrace`: encode multivariate sensor sequences as RGB images,
//! build image-folder datasets, and measure class separability.

use std::path::{Path, PathBuf};

use chromatrace::dataset::{build_dataset, DatasetBuildOptions};
use chromatrace::error::{Error, Result};
use chromatrace::eval::{evaluate_manifest, render_table, write_confusion_csv, EvalOptions};
use chromatrace::imageio::{read_png, write_png};
use chromatrace::ingest::{load_manifest, write_synth_dataset};
use chromatrace::pipeline::{encode_csv_file, PipelineConfig};
use chromatrace_core::augment::{augment_one, AugmentSpec};
use chromatrace_core::classify::ClassifierKind;
use chromatrace_core::fuse::FusePolicy;
use chromatrace_core::reduce::{ReductionConfig, TauBasis};
use chromatrace_core::render::{EncodingConfig, Rgb};
use chromatrace_core::signal::RangeMode;
use chromatrace_core::synth::{generate, SynthSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "chromatrace", version, about = "Signal sequences to color-coded images")]
struct Cli {
    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled dataset (sequence CSVs + manifest).
    Synth(SynthArgs),
    /// Encode one sequence CSV into one PNG.
    Encode(EncodeArgs),
    /// Export a manifest as an image-folder dataset, augmenting the train
    /// split when requested.
    Dataset(DatasetArgs),
    /// Write augmented variants of existing PNG images.
    Augment(AugmentArgs),
    /// Evaluate encoding separability with k-NN or nearest-centroid.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TauBasisArg {
    MaxSigma,
    MaxAbsValue,
}

#[derive(Clone, Copy, ValueEnum)]
enum FusePolicyArg {
    InterpolateToMax,
    SubsampleToMin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Knn,
    Centroid,
}

fn parse_rgb(s: &str) -> std::result::Result<Rgb, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected R,G,B; got `{s}`"));
    }
    let mut rgb = [0u8; 3];
    for (out, part) in rgb.iter_mut().zip(&parts) {
        *out = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid channel `{part}` (expected 0-255)"))?;
    }
    Ok(rgb)
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI; got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("invalid number `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("invalid number `{hi}`"))?;
    Ok((lo, hi))
}

fn parse_range(s: &str) -> std::result::Result<RangeMode, String> {
    if s == "per-sequence" {
        return Ok(RangeMode::PerSequence);
    }
    let (min, max) = parse_pair(s)?;
    Ok(RangeMode::Fixed { min, max })
}

/// Rendering/reduction/fusion flags shared by encode, dataset and eval.
#[derive(Args)]
struct PipelineFlags {
    /// Disable signal reduction.
    #[arg(long, conflicts_with = "reduce")]
    no_reduce: bool,
    /// Force-enable signal reduction (on by default).
    #[arg(long)]
    reduce: bool,
    /// Reduction threshold as a fraction of the basis, in [0, 1].
    #[arg(long, value_name = "RATIO")]
    tau_ratio: Option<f64>,
    /// What the threshold ratio scales.
    #[arg(long, value_enum)]
    tau_basis: Option<TauBasisArg>,
    /// Explicit dataset-global threshold; bypasses per-sequence computation.
    #[arg(long, value_name = "SIGMA")]
    tau: Option<f64>,
    /// Length harmonization when fusing multiple sources.
    #[arg(long, value_enum)]
    fuse_policy: Option<FusePolicyArg>,
    /// Output image width in pixels.
    #[arg(long)]
    width: Option<usize>,
    /// Output image height in pixels.
    #[arg(long)]
    height: Option<usize>,
    /// Polyline thickness in pixels.
    #[arg(long)]
    line_width: Option<usize>,
    /// Background color as R,G,B.
    #[arg(long, value_parser = parse_rgb)]
    background: Option<Rgb>,
    /// Palette saturation in [0, 1].
    #[arg(long)]
    saturation: Option<f64>,
    /// Palette value (brightness) in [0, 1].
    #[arg(long)]
    value: Option<f64>,
    /// Row mapping range: `per-sequence` or `MIN,MAX`.
    #[arg(long, value_parser = parse_range)]
    range: Option<RangeMode>,
    /// Draw flat base hues instead of the white-to-hue gradient.
    #[arg(long, conflicts_with = "gradient")]
    no_gradient: bool,
    /// Force-enable the temporal gradient (on by default).
    #[arg(long)]
    gradient: bool,
}

/// Augmentation parameter flags shared by dataset and augment.
#[derive(Args)]
struct AugmentFlags {
    /// Width-stretch factor range LO,HI.
    #[arg(long, value_parser = parse_pair)]
    stretch_range: Option<(f64, f64)>,
    /// Rotation range in degrees LO,HI.
    #[arg(long, value_parser = parse_pair)]
    rotation_range: Option<(f64, f64)>,
    /// Max perspective corner displacement as a fraction of min(H, W).
    #[arg(long)]
    perspective_jitter: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    /// Output dataset directory.
    #[arg(long)]
    out: PathBuf,
    /// Number of classes.
    #[arg(long)]
    classes: Option<usize>,
    /// Sequences generated per class.
    #[arg(long)]
    per_class: Option<usize>,
    /// Signals per sequence.
    #[arg(long)]
    signals: Option<usize>,
    /// Samples per signal.
    #[arg(long)]
    length: Option<usize>,
    /// Gaussian noise level added to every sample.
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Fraction of signals carrying class-dependent content.
    #[arg(long)]
    active_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Sequence CSV to encode.
    input: PathBuf,
    /// Output PNG path.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    pipeline: PipelineFlags,
}

#[derive(Args)]
struct DatasetArgs {
    /// Manifest JSON describing the dataset.
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory for the image-folder export.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Augmented variants per train image (0 disables).
    #[arg(long, value_name = "COUNT")]
    augment: Option<usize>,
    #[command(flatten)]
    augment_flags: AugmentFlags,
    /// Seed for augmentation parameters.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for batch encoding (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct AugmentArgs {
    /// Input PNG images.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Variants to write per input image.
    #[arg(long)]
    count: Option<usize>,
    #[command(flatten)]
    augment_flags: AugmentFlags,
    #[arg(long)]
    seed: Option<u64>,
    /// Fill color for uncovered pixels, as R,G,B.
    #[arg(long, value_parser = parse_rgb)]
    background: Option<Rgb>,
}

#[derive(Args)]
struct EvalArgs {
    /// Manifest JSON describing the dataset.
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Neighbors for the k-NN classifier (positive odd).
    #[arg(long)]
    k: Option<usize>,
    /// Grayscale thumbnail side length used as the feature vector.
    #[arg(long)]
    feature_side: Option<usize>,
    #[arg(long, value_enum)]
    classifier: Option<ClassifierArg>,
    /// Worker threads for batch encoding (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write the confusion matrix as CSV.
    #[arg(long, value_name = "FILE")]
    confusion_csv: Option<PathBuf>,
    /// Print a human-readable summary table to stderr.
    #[arg(long)]
    table: bool,
}

/// Config file sections; any subset may be present. Flags override fields.
#[derive(Default, Deserialize)]
#[serde(default)]
struct FileConfig {
    reduction: Option<ReductionConfig>,
    fuse_policy: Option<FusePolicy>,
    encoding: Option<EncodingConfig>,
    augment: Option<AugmentSpec>,
    synth: Option<SynthSpec>,
    eval: Option<EvalFileConfig>,
}

#[derive(Default, Deserialize)]
#[serde(default)]
struct EvalFileConfig {
    classifier: Option<ClassifierKind>,
    feature_side: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn resolve_pipeline(flags: &PipelineFlags, file: &FileConfig) -> PipelineConfig {
    let mut reduction = file.reduction.unwrap_or_default();
    if flags.no_reduce {
        reduction.enabled = false;
    } else if flags.reduce {
        reduction.enabled = true;
    }
    if let Some(ratio) = flags.tau_ratio {
        reduction.tau_ratio = ratio;
    }
    if let Some(basis) = flags.tau_basis {
        reduction.tau_basis = match basis {
            TauBasisArg::MaxSigma => TauBasis::MaxSigma,
            TauBasisArg::MaxAbsValue => TauBasis::MaxAbsValue,
        };
    }
    if let Some(tau) = flags.tau {
        reduction.explicit_tau = Some(tau);
    }

    let mut fuse_policy = file.fuse_policy.unwrap_or_default();
    if let Some(policy) = flags.fuse_policy {
        fuse_policy = match policy {
            FusePolicyArg::InterpolateToMax => FusePolicy::InterpolateToMax,
            FusePolicyArg::SubsampleToMin => FusePolicy::SubsampleToMin,
        };
    }

    let mut encoding = file.encoding.unwrap_or_default();
    if let Some(w) = flags.width {
        encoding.width = w;
    }
    if let Some(h) = flags.height {
        encoding.height = h;
    }
    if let Some(lw) = flags.line_width {
        encoding.line_width = lw;
    }
    if let Some(bg) = flags.background {
        encoding.background = bg;
    }
    if let Some(s) = flags.saturation {
        encoding.saturation = s;
    }
    if let Some(v) = flags.value {
        encoding.value = v;
    }
    if let Some(r) = flags.range {
        encoding.range_mode = r;
    }
    if flags.no_gradient {
        encoding.gradient = false;
    } else if flags.gradient {
        encoding.gradient = true;
    }

    PipelineConfig { reduction, fuse_policy, encoding }
}

fn resolve_augment(
    flags: &AugmentFlags,
    count: Option<usize>,
    seed: Option<u64>,
    file: &FileConfig,
) -> AugmentSpec {
    let mut spec = file.augment.unwrap_or_default();
    if let Some(range) = flags.stretch_range {
        spec.width_stretch_range = range;
    }
    if let Some(range) = flags.rotation_range {
        spec.rotation_range_deg = range;
    }
    if let Some(jitter) = flags.perspective_jitter {
        spec.perspective_jitter = jitter;
    }
    if let Some(count) = count {
        spec.count_per_image = count;
    }
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec
}

fn print_warnings(warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

fn cmd_synth(args: &SynthArgs, file: &FileConfig) -> Result<()> {
    let mut spec = file.synth.unwrap_or_default();
    if let Some(v) = args.classes {
        spec.n_classes = v;
    }
    if let Some(v) = args.per_class {
        spec.sequences_per_class = v;
    }
    if let Some(v) = args.signals {
        spec.n_signals = v;
    }
    if let Some(v) = args.length {
        spec.length = v;
    }
    if let Some(v) = args.noise_sigma {
        spec.noise_sigma = v;
    }
    if let Some(v) = args.active_fraction {
        spec.active_fraction = v;
    }
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    let dataset = generate(&spec)?;
    write_synth_dataset(&dataset, &args.out)?;
    println!(
        "wrote {} sequences over {} classes to {}",
        dataset.records.len(),
        spec.n_classes,
        args.out.display()
    );
    Ok(())
}

fn cmd_encode(args: &EncodeArgs, file: &FileConfig) -> Result<()> {
    let config = resolve_pipeline(&args.pipeline, file);
    let image = encode_csv_file(&args.input, &config)?;
    write_png(&image, &args.out)
}

fn cmd_dataset(args: &DatasetArgs, file: &FileConfig) -> Result<()> {
    let load = load_manifest(&args.manifest)?;
    print_warnings(&load.warnings);
    let spec = resolve_augment(&args.augment_flags, args.augment, args.seed, file);
    let options = DatasetBuildOptions {
        pipeline: resolve_pipeline(&args.pipeline, file),
        augment: (spec.count_per_image > 0).then_some(spec),
        threads: args.threads,
    };
    let inventory = build_dataset(&load, &options, &args.out)?;
    println!(
        "wrote {} images to {}",
        inventory.files.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_augment(args: &AugmentArgs, file: &FileConfig) -> Result<()> {
    let mut spec = resolve_augment(&args.augment_flags, args.count, args.seed, file);
    if args.count.is_none() && spec.count_per_image == 0 {
        spec.count_per_image = 1;
    }
    let background = args.background.unwrap_or([0, 0, 0]);
    let mut written = 0usize;
    for (index, input) in args.inputs.iter().enumerate() {
        let image = read_png(input)?;
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("image{index}"));
        for variant in 0..spec.count_per_image {
            let out = augment_one(&image, &spec, index as u64, variant as u64, background)?;
            write_png(&out, &args.out.join(format!("{stem}.aug{variant}.png")))?;
            written += 1;
        }
    }
    println!("wrote {written} augmented images to {}", args.out.display());
    Ok(())
}

fn cmd_eval(args: &EvalArgs, file: &FileConfig) -> Result<()> {
    let load = load_manifest(&args.manifest)?;
    print_warnings(&load.warnings);
    let eval_file = file.eval.as_ref();
    let mut classifier = eval_file.and_then(|e| e.classifier).unwrap_or_default();
    if let Some(kind) = args.classifier {
        classifier = match kind {
            ClassifierArg::Knn => ClassifierKind::Knn { k: args.k.unwrap_or(3) },
            ClassifierArg::Centroid => ClassifierKind::NearestCentroid,
        };
    } else if let Some(k) = args.k {
        classifier = ClassifierKind::Knn { k };
    }
    let options = EvalOptions {
        pipeline: resolve_pipeline(&args.pipeline, file),
        classifier,
        feature_side: args
            .feature_side
            .or(eval_file.and_then(|e| e.feature_side))
            .unwrap_or(32),
        threads: args.threads,
    };
    let output = evaluate_manifest(&load, &options)?;
    if let Some(path) = &args.confusion_csv {
        write_confusion_csv(&output, path)?;
    }
    if args.table {
        eprint!("{}", render_table(&output));
    }
    let json = serde_json::to_string_pretty(&output).expect("report serializes");
    println!("{json}");
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let file = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Synth(args) => cmd_synth(args, &file),
        Command::Encode(args) => cmd_encode(args, &file),
        Command::Dataset(args) => cmd_dataset(args, &file),
        Command::Augment(args) => cmd_augment(args, &file),
        Command::Eval(args) => cmd_eval(args, &file),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(cause) = source {
            eprintln!("  caused by: {cause}");
            source = cause.source();
        }
        std::process::exit(1);
    }
}
