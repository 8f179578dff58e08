use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use synthmotion_core::augmentation::Granularity;
use synthmotion_core::eval::benchmark::{augmentation_benefit, mean, order_sensitivity};
use synthmotion_core::eval::{evaluate, generate_toy_dataset, ToySpec};
use synthmotion_core::motion_file;
use synthmotion_core::motion_model::{smooth_pose_sequence, Kernel, MotionClip};
use synthmotion_core::rng;
use synthmotion_core::sampling::{
    num_test_clips, sample_test_clips, sample_train_clip, ClipIndices,
};
use synthmotion_core::scene::{build_manifest, AppearanceLibrary, ManifestConfig};
use synthmotion_core::Error;

use crate::config::Config;
use crate::{AugmentArgs, CliError, EvalArgs, SampleArgs, StrategyArgs};

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn emit(out: &mut impl Write, text: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::Data(format!("stdout: {e}")))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { emit($out, format_args!($($arg)*)) };
}

/// Core errors caused by configuration values rather than input data.
fn classify(e: Error) -> CliError {
    match e {
        Error::InvalidParameter(_) | Error::Config(_) => CliError::Usage(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

/// Every `*.motion.jsonl` file directly inside `dir`, sorted by path.
fn motion_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let suffix = format!(".{}", motion_file::EXTENSION);
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io_error(dir, e))? {
        let path = entry.map_err(|e| io_error(dir, e))?.path();
        let is_motion = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.ends_with(&suffix));
        if is_motion && path.is_file() {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no *{suffix} files found",
            dir.display()
        )));
    }
    files.sort();
    Ok(files)
}

fn load_clips(dir: &Path) -> Result<Vec<MotionClip>, CliError> {
    let mut clips = Vec::new();
    for path in motion_files(dir)? {
        let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
        let clip = motion_file::decode(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        clips.push(clip);
    }
    clips.sort_by(|a, b| a.source_id().cmp(b.source_id()));
    let mut seen = HashSet::new();
    for c in &clips {
        if !seen.insert(c.source_id()) {
            return Err(CliError::Data(format!(
                "{}: source id `{}` appears in more than one file",
                dir.display(),
                c.source_id()
            )));
        }
    }
    Ok(clips)
}

fn smooth_clip(clip: &MotionClip, kernel: &Kernel) -> Result<MotionClip, CliError> {
    let people = clip
        .people()
        .iter()
        .map(|p| smooth_pose_sequence(p, kernel))
        .collect::<Result<Vec<_>, _>>()
        .map_err(classify)?;
    clip.with_people(people).map_err(classify)
}

/// File-name-safe form of a source id.
fn file_stem(source_id: &str) -> String {
    source_id
        .chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '_' | '.' | '~' | '@' => c,
            _ => '_',
        })
        .collect()
}

pub fn augment(
    args: &AugmentArgs,
    config: &mut Config,
    seed: u64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let aug = &mut config.augmentation;
    if let Some(g) = args.noise {
        aug.noise = Some(g);
    }
    if let Some(sigma) = args.sigma {
        aug.sigma = sigma;
        aug.noise.get_or_insert(Granularity::Video);
    }
    aug.interpolate |= args.interpolate;
    if let Some(v) = args.views {
        config.scene_synthesis.views = v;
    }
    if let Some(r) = args.renders_per_view {
        config.scene_synthesis.renders_per_view = r;
    }

    let kernel = config.motion_model.kernel()?;
    let policy = config.augment_policy();
    policy.validate().map_err(classify)?;
    let manifest_config = ManifestConfig {
        camera: config.scene_synthesis.camera()?,
        renders_per_view: config.scene_synthesis.renders_per_view,
        policy,
        seed,
    };

    let clips = load_clips(&args.input)?
        .iter()
        .map(|c| smooth_clip(c, &kernel))
        .collect::<Result<Vec<_>, _>>()?;
    let library = AppearanceLibrary::synthetic_default(seed);
    let manifest = build_manifest(
        &clips,
        &manifest_config,
        library.pools(config.scene_synthesis.split),
    )
    .map_err(classify)?;

    let motions_dir = args.output.join("motions");
    let sources_dir = args.output.join("sources");
    for dir in [&motions_dir, &sources_dir] {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    let manifest_path = args.output.join("manifest.jsonl");
    write_file(&manifest_path, &manifest.to_jsonl())?;
    for (digest, clip) in &manifest.motions {
        let path = motions_dir.join(format!("{digest}.{}", motion_file::EXTENSION));
        write_file(&path, &motion_file::encode(clip))?;
    }
    for clip in &clips {
        let name = format!("{}.{}", file_stem(clip.source_id()), motion_file::EXTENSION);
        write_file(&sources_dir.join(name), &motion_file::encode(clip))?;
    }
    say!(
        out,
        "{} entries from {} clips ({} distinct motions) -> {}",
        manifest.entries.len(),
        clips.len(),
        manifest.motions.len(),
        manifest_path.display()
    )
}

fn apply_strategy_flags(config: &mut Config, flags: &StrategyArgs) {
    let s = &mut config.frame_sampling;
    if let Some(kind) = flags.strategy {
        s.strategy = kind;
    }
    if let Some(ordered) = flags.ordered {
        s.ordered = ordered;
    }
    if let Some(f) = flags.frames {
        s.frames_per_clip = f;
    }
    if let Some(stride) = flags.stride {
        s.stride = stride;
    }
}

pub fn eval(
    args: &EvalArgs,
    config: &mut Config,
    seed: u64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    apply_strategy_flags(config, &args.strategy);
    if let Some(n) = args.seeds {
        config.eval_harness.seeds = n;
    }
    let strategy = config.frame_sampling.strategy()?;
    let bench = config.eval_harness.benchmark(strategy);
    if config.eval_harness.seeds == 0 {
        return Err(CliError::Usage("seeds must be at least 1".into()));
    }

    let toy = ToySpec::new(bench.num_classes, bench.train_per_class, bench.frames, seed)
        .with_test(bench.test_per_class)
        .with_jitter(bench.jitter, bench.frame_jitter, bench.phase_jitter);
    let ds = generate_toy_dataset(&toy).map_err(classify)?;
    let result = evaluate(&ds.train(), &ds.test(), &strategy, seed, true).map_err(classify)?;
    say!(
        out,
        "strategy {} ordered={}",
        strategy.kind.as_str(),
        strategy.ordered
    )?;
    say!(out, "accuracy {:.4}", result.accuracy)?;
    say!(out, "confusion (rows: true class, columns: predicted)")?;
    write!(out, "{}", result.confusion.to_grid()).map_err(|e| CliError::Data(e.to_string()))?;

    let seeds: Vec<u64> = (0..config.eval_harness.seeds).map(|k| seed + k).collect();
    let mut rows = Vec::new();
    for &s in &seeds {
        let r = augmentation_benefit(&bench, s).map_err(classify)?;
        say!(
            out,
            "augmentation_benefit seed={} baseline={:.4} variant={:.4}",
            r.seed,
            r.baseline,
            r.variant
        )?;
        rows.push(r);
    }
    say!(
        out,
        "augmentation_benefit mean baseline={:.4} variant={:.4}",
        mean(rows.iter().map(|r| r.baseline)),
        mean(rows.iter().map(|r| r.variant))
    )?;

    let unordered = strategy.with_ordered(false);
    let mut rows = Vec::new();
    for &s in &seeds {
        let r = order_sensitivity(&bench, &unordered, s).map_err(classify)?;
        say!(
            out,
            "order_sensitivity seed={} ordered={:.4} unordered={:.4}",
            r.seed,
            r.baseline,
            r.variant
        )?;
        rows.push(r);
    }
    say!(
        out,
        "order_sensitivity mean ordered={:.4} unordered={:.4}",
        mean(rows.iter().map(|r| r.baseline)),
        mean(rows.iter().map(|r| r.variant))
    )
}

fn join(indices: &ClipIndices) -> String {
    indices
        .as_slice()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn sample(
    args: &SampleArgs,
    config: &mut Config,
    seed: u64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    apply_strategy_flags(config, &args.strategy);
    let strategy = config.frame_sampling.strategy()?;
    if args.total == 0 {
        return Err(CliError::Usage("--T must be at least 1".into()));
    }
    let mut r = rng::seeded(seed);
    let train = sample_train_clip(args.total, &strategy, &mut r).map_err(classify)?;
    let test = sample_test_clips(args.total, &strategy, &mut r).map_err(classify)?;
    say!(
        out,
        "T={} F={} S={} strategy={} ordered={}",
        args.total,
        strategy.frames_per_clip,
        strategy.stride,
        strategy.kind.as_str(),
        strategy.ordered
    )?;
    say!(out, "train: {}", join(&train))?;
    say!(
        out,
        "N={}",
        num_test_clips(args.total, strategy.frames_per_clip, strategy.stride)
    )?;
    for (k, clip) in test.iter().enumerate() {
        say!(out, "test[{k}]: {}", join(clip))?;
    }
    Ok(())
}
