use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use synthmotion_core::eval::{generate_toy_dataset, ToySpec};
use synthmotion_core::motion_file;
use synthmotion_core::motion_model::MotionClip;
use synthmotion_core::scene::parse_manifest_line;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_synthmotion"));
    cmd.env_remove("SYNTHMOTION_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Ten single-person clips, two per class.
fn write_inputs(dir: &Path) -> Vec<MotionClip> {
    let ds = generate_toy_dataset(&ToySpec::new(5, 2, 40, 11)).unwrap();
    let clips: Vec<MotionClip> = ds.items().iter().map(|i| i.clip.clone()).collect();
    for c in &clips {
        let path = dir.join(format!("{}.motion.jsonl", c.source_id()));
        fs::write(path, motion_file::encode(c)).unwrap();
    }
    clips
}

fn augment(input: &Path, output: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "augment",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn ten_files_eight_views_one_render() {
    let input = tempfile::tempdir().unwrap();
    let output = tempfile::tempdir().unwrap();
    write_inputs(input.path());
    let o = augment(
        input.path(),
        output.path(),
        &["--views", "8", "--renders-per-view", "1"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("80 entries"));
    let manifest = fs::read_to_string(output.path().join("manifest.jsonl")).unwrap();
    assert_eq!(manifest.lines().count(), 80);
    for line in manifest.lines() {
        let entry = parse_manifest_line(line).unwrap();
        let motion = output
            .path()
            .join("motions")
            .join(format!("{}.motion.jsonl", entry.motion.digest));
        assert!(motion.is_file());
    }
}

#[test]
fn zero_sigma_keeps_smoothed_poses() {
    let input = tempfile::tempdir().unwrap();
    let output = tempfile::tempdir().unwrap();
    write_inputs(input.path());
    let o = augment(
        input.path(),
        output.path(),
        &["--noise", "video", "--sigma", "0"],
    );
    assert!(o.status.success());
    let manifest = fs::read_to_string(output.path().join("manifest.jsonl")).unwrap();
    for line in manifest.lines() {
        let entry = parse_manifest_line(line).unwrap();
        assert_eq!(entry.augmentation.noise.unwrap().sigma, 0.0);
        let read = |p: PathBuf| motion_file::decode(&fs::read_to_string(p).unwrap()).unwrap();
        let processed = read(
            output
                .path()
                .join("motions")
                .join(format!("{}.motion.jsonl", entry.motion.digest)),
        );
        let smoothed = read(
            output
                .path()
                .join("sources")
                .join(format!("{}.motion.jsonl", entry.source_id)),
        );
        assert_eq!(processed.people()[0].poses(), smoothed.people()[0].poses());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let input = tempfile::tempdir().unwrap();
    write_inputs(input.path());
    let outs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for out in &outs {
        let o = augment(
            input.path(),
            out.path(),
            &["--noise", "frame", "--interpolate", "--seed", "5"],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(tree(outs[0].path()), tree(outs[1].path()));

    let other = tempfile::tempdir().unwrap();
    augment(
        input.path(),
        other.path(),
        &["--noise", "frame", "--interpolate", "--seed", "6"],
    );
    assert_ne!(
        fs::read(outs[0].path().join("manifest.jsonl")).unwrap(),
        fs::read(other.path().join("manifest.jsonl")).unwrap()
    );
}

#[test]
fn malformed_file_reports_file_and_field() {
    let input = tempfile::tempdir().unwrap();
    let output = tempfile::tempdir().unwrap();
    let clips = write_inputs(input.path());
    let victim = input
        .path()
        .join(format!("{}.motion.jsonl", clips[3].source_id()));
    let text = fs::read_to_string(&victim).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[4] = lines[4].replacen("\"pose\":[", "\"pose\":[0.0,", 1);
    fs::write(&victim, lines.join("\n")).unwrap();

    let o = augment(input.path(), output.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(clips[3].source_id()), "{err}");
    assert!(err.contains("pose"), "{err}");
    assert!(err.contains("24"), "{err}");
}

#[test]
fn empty_input_directory_is_an_error() {
    let input = tempfile::tempdir().unwrap();
    let output = tempfile::tempdir().unwrap();
    let o = augment(input.path(), output.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!output.path().join("manifest.jsonl").exists());
}

#[test]
fn config_file_and_environment() {
    let input = tempfile::tempdir().unwrap();
    let output = tempfile::tempdir().unwrap();
    write_inputs(input.path());
    let cfg = input.path().join("four.toml");
    fs::write(&cfg, "[scene_synthesis]\nviews = 4\nrenders_per_view = 2\n").unwrap();

    let o = augment(
        input.path(),
        output.path(),
        &["--config", cfg.to_str().unwrap()],
    );
    assert!(stdout(&o).starts_with("80 entries"));

    let o = bin()
        .env("SYNTHMOTION_CONFIG", &cfg)
        .args(["augment", "--input", input.path().to_str().unwrap()])
        .args(["--output", output.path().to_str().unwrap(), "--views", "2"])
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("40 entries"));

    fs::write(&cfg, "[scene_synthesis]\nviews = 7\n").unwrap();
    let o = augment(
        input.path(),
        output.path(),
        &["--config", cfg.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(1));
    fs::write(&cfg, "[scene]\nviews = 4\n").unwrap();
    let o = augment(
        input.path(),
        output.path(),
        &["--config", cfg.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(1));
}

fn line_value<'a>(text: &'a str, prefix: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(prefix))
        .unwrap_or_else(|| panic!("no `{prefix}` line in\n{text}"))
}

fn numbers(s: &str) -> Vec<usize> {
    s.split_whitespace().map(|v| v.parse().unwrap()).collect()
}

#[test]
fn sample_clip_count() {
    let o = run(&["sample", "--T", "84"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(line_value(&text, "N="), "6");
    assert_eq!(text.lines().filter(|l| l.starts_with("test[")).count(), 6);
}

#[test]
fn sample_short_video_takes_every_frame() {
    let text = stdout(&run(&["sample", "--T", "16"]));
    assert_eq!(
        numbers(line_value(&text, "train: ")),
        (0..16).collect::<Vec<_>>()
    );
    assert_eq!(line_value(&text, "N="), "1");
}

#[test]
fn sample_hybrid_one_index_per_segment() {
    for seed in ["0", "1", "2"] {
        let text = stdout(&run(&[
            "sample",
            "--T",
            "64",
            "--strategy",
            "hybrid_segments",
            "--seed",
            seed,
        ]));
        let idx = numbers(line_value(&text, "train: "));
        assert_eq!(idx.len(), 16);
        for (k, i) in idx.iter().enumerate() {
            assert!((4 * k..4 * k + 4).contains(i), "{idx:?}");
        }
    }
}

#[test]
fn sample_is_deterministic_and_validates_flags() {
    let a = run(&["sample", "--T", "50", "--seed", "9", "--ordered=false"]);
    let b = run(&["sample", "--T", "50", "--seed", "9", "--ordered=false"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["sample", "--T", "0"]).status.code(), Some(1));
    assert_eq!(
        run(&["sample", "--T", "10", "--strategy", "fastest"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["sample"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_emits_paired_rows() {
    let o = run(&["eval", "--seeds", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let acc: f64 = line_value(&text, "accuracy ").parse().unwrap();
    assert!((0.0..=1.0).contains(&acc));
    let rows = |p: &str| text.lines().filter(|l| l.starts_with(p)).count();
    assert_eq!(rows("augmentation_benefit seed="), 2);
    assert_eq!(rows("order_sensitivity seed="), 2);
    assert_eq!(rows("augmentation_benefit mean"), 1);
    assert_eq!(rows("order_sensitivity mean"), 1);
    assert_eq!(run(&["eval", "--seeds", "0"]).status.code(), Some(1));
}
