//! Line-delimited motion files.
//!
//! One JSON object per line, UTF-8:
//!
//! ```text
//! {"format":"motion-jsonl","version":1,"source_id":"…","action_label":3,"fps":30.0,"people":1,"frames":T}
//! {"person":0,"betas":[b0, …, b9]}
//! {"person":0,"frame":0,"pose":[72 axis-angle values, joint-major],"trans":[x,y,z]}
//! …
//! ```
//!
//! Each person contributes a `betas` line followed by its `T` frame lines, in
//! person order. Floats use shortest round-trip formatting, so encoding and
//! decoding is lossless.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::motion_model::{AxisAngle, MotionClip, Pose, PoseSequence, NUM_BETAS, NUM_JOINTS};

pub const FORMAT_NAME: &str = "motion-jsonl";
pub const FORMAT_VERSION: u64 = 1;
/// Conventional file suffix.
pub const EXTENSION: &str = "motion.jsonl";

#[derive(Serialize)]
struct Header<'a> {
    format: &'a str,
    version: u64,
    source_id: &'a str,
    action_label: u32,
    fps: f64,
    people: usize,
    frames: usize,
}

#[derive(Serialize)]
struct BetasLine<'a> {
    person: usize,
    betas: &'a [f64; NUM_BETAS],
}

#[derive(Serialize)]
struct FrameLine<'a> {
    person: usize,
    frame: usize,
    pose: &'a [f64],
    trans: &'a [f64; 3],
}

fn push_line<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("motion records serialize"));
    out.push('\n');
}

pub fn encode(clip: &MotionClip) -> String {
    let mut out = String::new();
    push_line(
        &mut out,
        &Header {
            format: FORMAT_NAME,
            version: FORMAT_VERSION,
            source_id: clip.source_id(),
            action_label: clip.action_label(),
            fps: clip.fps(),
            people: clip.people().len(),
            frames: clip.frames(),
        },
    );
    let mut flat = Vec::with_capacity(NUM_JOINTS * 3);
    for (p, person) in clip.people().iter().enumerate() {
        push_line(
            &mut out,
            &BetasLine {
                person: p,
                betas: person.betas(),
            },
        );
        for (t, (pose, trans)) in person.poses().iter().zip(person.trans()).enumerate() {
            flat.clear();
            flat.extend(pose.iter().flat_map(|a| a.to_array()));
            push_line(
                &mut out,
                &FrameLine {
                    person: p,
                    frame: t,
                    pose: &flat,
                    trans,
                },
            );
        }
    }
    out
}

/// Hex SHA-256 of the encoded clip; names files in a motion store.
pub fn digest(clip: &MotionClip) -> String {
    let hash = Sha256::digest(encode(clip).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn format_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

struct Record {
    line: usize,
    map: Map<String, Value>,
}

impl Record {
    fn get(&self, field: &str) -> Result<&Value> {
        self.map
            .get(field)
            .ok_or_else(|| format_err(self.line, field, "missing"))
    }

    fn uint(&self, field: &str) -> Result<u64> {
        self.get(field)?
            .as_u64()
            .ok_or_else(|| format_err(self.line, field, "expected a nonnegative integer"))
    }

    fn float(&self, field: &str) -> Result<f64> {
        self.get(field)?
            .as_f64()
            .ok_or_else(|| format_err(self.line, field, "expected a number"))
    }

    fn str(&self, field: &str) -> Result<&str> {
        self.get(field)?
            .as_str()
            .ok_or_else(|| format_err(self.line, field, "expected a string"))
    }

    fn floats(&self, field: &str, expected: usize, invariant: &str) -> Result<Vec<f64>> {
        let arr = self
            .get(field)?
            .as_array()
            .ok_or_else(|| format_err(self.line, field, "expected an array"))?;
        if arr.len() != expected {
            return Err(format_err(
                self.line,
                field,
                format!(
                    "{invariant} (got {} values, expected {expected})",
                    arr.len()
                ),
            ));
        }
        arr.iter()
            .map(|v| {
                v.as_f64()
                    .ok_or_else(|| format_err(self.line, field, "expected numbers"))
            })
            .collect()
    }

    fn expect_index(&self, field: &str, expected: usize) -> Result<()> {
        let got = self.uint(field)?;
        if got != expected as u64 {
            return Err(format_err(
                self.line,
                field,
                format!("expected {expected}, got {got}"),
            ));
        }
        Ok(())
    }
}

pub fn decode(text: &str) -> Result<MotionClip> {
    let mut records = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line = i + 1;
            match serde_json::from_str::<Value>(l) {
                Ok(Value::Object(map)) => Ok(Record { line, map }),
                Ok(_) => Err(format_err(line, "<record>", "expected a JSON object")),
                Err(e) => Err(format_err(line, "<record>", e.to_string())),
            }
        });

    let header = records
        .next()
        .ok_or_else(|| format_err(1, "format", "empty motion file"))??;
    if header.str("format")? != FORMAT_NAME {
        return Err(format_err(
            header.line,
            "format",
            format!("expected `{FORMAT_NAME}`"),
        ));
    }
    let version = header.uint("version")?;
    if version != FORMAT_VERSION {
        return Err(format_err(
            header.line,
            "version",
            format!("unsupported version {version}"),
        ));
    }
    let source_id = header.str("source_id")?.to_string();
    if source_id.is_empty() {
        return Err(format_err(
            header.line,
            "source_id",
            "source id must be nonempty",
        ));
    }
    let action_label = u32::try_from(header.uint("action_label")?)
        .map_err(|_| format_err(header.line, "action_label", "out of range"))?;
    let fps = header.float("fps")?;
    if fps.is_nan() || fps <= 0.0 {
        return Err(format_err(header.line, "fps", "fps must be positive"));
    }
    let num_people = header.uint("people")? as usize;
    if num_people == 0 {
        return Err(format_err(
            header.line,
            "people",
            "clip needs at least one person (≥1 person)",
        ));
    }
    let frames = header.uint("frames")? as usize;
    if frames == 0 {
        return Err(format_err(
            header.line,
            "frames",
            "sequence needs T ≥ 1 frames",
        ));
    }

    let mut people = Vec::with_capacity(num_people);
    for p in 0..num_people {
        let betas_rec = records.next().ok_or_else(|| {
            format_err(0, "betas", format!("missing betas line for person {p}"))
        })??;
        betas_rec.expect_index("person", p)?;
        let betas_vec = betas_rec.floats("betas", NUM_BETAS, "betas length exactly 10")?;
        let betas: [f64; NUM_BETAS] = betas_vec.try_into().expect("length checked");

        let mut poses: Vec<Pose> = Vec::with_capacity(frames);
        let mut trans = Vec::with_capacity(frames);
        for t in 0..frames {
            let rec = records.next().ok_or_else(|| {
                format_err(0, "frame", format!("person {p} is missing frame {t}"))
            })??;
            rec.expect_index("person", p)?;
            rec.expect_index("frame", t)?;
            let flat = rec.floats("pose", NUM_JOINTS * 3, "joint count exactly 24")?;
            let mut pose = [AxisAngle::IDENTITY; NUM_JOINTS];
            for (j, slot) in pose.iter_mut().enumerate() {
                *slot = AxisAngle::new(flat[3 * j], flat[3 * j + 1], flat[3 * j + 2]);
            }
            poses.push(pose);
            let tr = rec.floats("trans", 3, "translation has 3 components")?;
            trans.push([tr[0], tr[1], tr[2]]);
        }
        let seq = PoseSequence::new(poses, betas, trans, fps)
            .map_err(|e| format_err(betas_rec.line, "person", e.to_string()))?;
        people.push(seq);
    }
    if let Some(extra) = records.next() {
        let line = extra.map(|r| r.line).unwrap_or(0);
        return Err(format_err(line, "<record>", "unexpected trailing record"));
    }
    MotionClip::new(people, action_label, source_id)
        .map_err(|e| format_err(1, "people", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip() -> MotionClip {
        let mut pose = [AxisAngle::IDENTITY; NUM_JOINTS];
        pose[3] = AxisAngle::new(0.1, -0.2, 1e-17);
        pose[23] = AxisAngle::new(-3.0, 0.0, 0.3333333333333333);
        let a = PoseSequence::new(
            vec![pose; 3],
            [0.5, -1.25, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
            vec![[0.1, 0.2, 0.3], [0.0, -0.0, 1.0], [1e-300, 2.5, -7.0]],
            29.97,
        )
        .unwrap();
        MotionClip::new(vec![a.clone(), a.reversed()], 7, "S001C002P003R001A007").unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let c = clip();
        let text = encode(&c);
        assert_eq!(text.lines().count(), 1 + 2 * (1 + 3));
        assert_eq!(decode(&text).unwrap(), c);
        assert_eq!(encode(&decode(&text).unwrap()), text);
    }

    #[test]
    fn digest_is_stable_hex() {
        let d = digest(&clip());
        assert_eq!(d.len(), 64);
        assert_eq!(d, digest(&clip()));
    }

    #[test]
    fn wrong_joint_count_names_invariant() {
        let text = encode(&clip());
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut rec: Value = serde_json::from_str(&lines[2]).unwrap();
        rec["pose"].as_array_mut().unwrap().truncate(69);
        lines[2] = rec.to_string();
        let err = decode(&lines.join("\n")).unwrap_err();
        match err {
            Error::Format {
                line,
                field,
                message,
            } => {
                assert_eq!(line, 3);
                assert_eq!(field, "pose");
                assert!(message.contains("joint count exactly 24"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_betas_length() {
        let text = encode(&clip()).replacen("\"betas\":[0.5,", "\"betas\":[", 1);
        let err = decode(&text).unwrap_err();
        assert!(err.to_string().contains("betas length exactly 10"), "{err}");
    }

    #[test]
    fn missing_frames_and_trailing_data() {
        let text = encode(&clip());
        let truncated: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(decode(&truncated).is_err());
        let extra = format!("{text}{{\"person\":9}}\n");
        assert!(decode(&extra).is_err());
    }

    #[test]
    fn header_checks() {
        assert!(decode("").is_err());
        assert!(decode("{\"format\":\"other\"}").is_err());
        let text = encode(&clip()).replacen("\"frames\":3", "\"frames\":0", 1);
        let err = decode(&text).unwrap_err();
        assert!(err.to_string().contains("T ≥ 1"));
        assert!(decode("not json").is_err());
    }
}
