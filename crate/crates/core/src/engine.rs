//! Fully synchronous Look-Compute-Move scheduler.
//!
//! Each round every robot receives a snapshot expressed in its own frame,
//! computes a destination in that frame, and all moves are committed at
//! once. Frames are fixed for the whole run.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{inverse_transform, smallest_enclosing_circle, transform, Point, Tolerance};
use crate::protocols::MemoryBit;
use crate::symmetry::mirror_axes;

/// Whether all robots share the same clockwise direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Present,
    Absent,
}

/// A robot's local coordinate system. The origin is always the robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub rotation: f64,
    #[serde(default)]
    pub mirror: bool,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl Default for Frame {
    fn default() -> Self {
        Frame {
            rotation: 0.0,
            mirror: false,
            scale: 1.0,
        }
    }
}

impl Frame {
    pub fn rotated(rotation: f64) -> Self {
        Frame {
            rotation,
            ..Frame::default()
        }
    }

    pub fn to_global(&self, local: Point, origin: Point) -> Result<Point> {
        transform(local, self.rotation, self.mirror, self.scale, origin)
    }

    pub fn to_local(&self, global: Point, origin: Point) -> Result<Point> {
        inverse_transform(global, self.rotation, self.mirror, self.scale, origin)
    }

    /// Global direction of this frame's +x axis.
    pub fn x_direction(&self) -> Point {
        Point::from_angle(self.rotation)
    }
}

/// What one robot sees during Look.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Index of the observing robot; its entry in `points` is the origin.
    pub own: usize,
    pub points: Vec<Point>,
    /// Every robot's +x direction, in the observer's frame.
    pub frames: Option<Vec<Point>>,
}

impl Snapshot {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn to_local_snapshot(
    config: &[Point],
    frames: &[Frame],
    i: usize,
    visible: bool,
) -> Result<Snapshot> {
    if frames.len() != config.len() {
        return Err(Error::InvalidFrame(format!(
            "{} frames for {} robots",
            frames.len(),
            config.len()
        )));
    }
    let frame = frames
        .get(i)
        .ok_or_else(|| Error::InvalidFrame(format!("no robot {i}")))?;
    let origin = config[i];
    let mut points = config
        .iter()
        .map(|&p| frame.to_local(p, origin))
        .collect::<Result<Vec<_>>>()?;
    points[i] = Point::ORIGIN;
    let frames = if visible {
        let dirs = frames
            .iter()
            .map(|f| {
                frame
                    .to_local(origin + f.x_direction(), origin)
                    .map(Point::normalized)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(dirs)
    } else {
        None
    };
    Ok(Snapshot {
        own: i,
        points,
        frames,
    })
}

/// Compute function of a robot without persistent memory.
pub trait ObliviousRule: Sync {
    fn needs_visible_frames(&self) -> bool {
        false
    }

    /// Destination in the observer's frame.
    fn compute(&self, view: &Snapshot) -> Result<Point>;
}

/// Compute function of a robot carrying one persistent bit.
pub trait MemoryRule: Sync {
    fn compute(&self, view: &Snapshot, bit: MemoryBit) -> Result<(Point, MemoryBit)>;
}

#[derive(Clone, Copy)]
pub enum Algorithm<'a> {
    Oblivious(&'a dyn ObliviousRule),
    WithMemory(&'a dyn MemoryRule),
}

impl Algorithm<'_> {
    fn needs_visible_frames(&self) -> bool {
        match self {
            Algorithm::Oblivious(rule) => rule.needs_visible_frames(),
            Algorithm::WithMemory(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub positions: Vec<Point>,
    pub bits: Vec<MemoryBit>,
    /// Whether each robot moved during the round that produced this record.
    pub moved: Vec<bool>,
}

/// A failed round, attached to the last configuration that was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceError {
    /// The round that could not be completed.
    pub round: usize,
    /// Stable error label, see [`Error::name`].
    pub name: String,
    pub message: String,
}

impl TraceError {
    pub fn new(round: usize, error: &Error) -> Self {
        TraceError {
            round,
            name: error.name().to_string(),
            message: error.to_string(),
        }
    }
}

impl std::fmt::Display for TraceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.name, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub rounds: Vec<RoundRecord>,
    pub error: Option<TraceError>,
}

impl RunTrace {
    pub fn configurations(&self) -> impl Iterator<Item = &[Point]> {
        self.rounds.iter().map(|r| r.positions.as_slice())
    }

    pub fn robots(&self) -> usize {
        self.rounds.first().map_or(0, |r| r.positions.len())
    }
}

/// One synchronous round. Nothing is committed if any robot fails or two
/// destinations collide.
pub fn fsync_round(
    config: &[Point],
    frames: &[Frame],
    algorithm: Algorithm<'_>,
    bits: &[MemoryBit],
    tol: Tolerance,
) -> Result<RoundRecord> {
    let visible = algorithm.needs_visible_frames();
    let mut positions = Vec::with_capacity(config.len());
    let mut next_bits = Vec::with_capacity(config.len());
    for i in 0..config.len() {
        let attribute = |e: Error| Error::Robot {
            robot: i,
            source: Box::new(e),
        };
        let view = to_local_snapshot(config, frames, i, visible).map_err(attribute)?;
        let (local, bit) = match algorithm {
            Algorithm::Oblivious(rule) => (rule.compute(&view).map_err(attribute)?, bits[i]),
            Algorithm::WithMemory(rule) => rule.compute(&view, bits[i]).map_err(attribute)?,
        };
        positions.push(frames[i].to_global(local, config[i]).map_err(attribute)?);
        next_bits.push(bit);
    }
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i].approx_eq(positions[j], tol) {
                return Err(Error::CollisionDetected(i, j));
            }
        }
    }
    let moved = positions
        .iter()
        .zip(config)
        .map(|(a, b)| !a.approx_eq(*b, tol))
        .collect();
    Ok(RoundRecord {
        positions,
        bits: next_bits,
        moved,
    })
}

/// Runs `rounds` rounds from `c0`. Failures stop the run and are stored in
/// the trace instead of being returned.
pub fn run(
    c0: &[Point],
    frames: &[Frame],
    algorithm: Algorithm<'_>,
    rounds: usize,
    tol: Tolerance,
) -> RunTrace {
    let n = c0.len();
    let mut trace = RunTrace {
        rounds: vec![RoundRecord {
            positions: c0.to_vec(),
            bits: vec![MemoryBit::default(); n],
            moved: vec![false; n],
        }],
        error: None,
    };
    for round in 1..=rounds {
        let last = trace.rounds.last().expect("initial record");
        match fsync_round(&last.positions, frames, algorithm, &last.bits, tol) {
            Ok(record) => trace.rounds.push(record),
            Err(error) => {
                trace.error = Some(TraceError::new(round, &error));
                break;
            }
        }
    }
    trace
}

fn fmt_real(out: &mut String, x: f64) {
    // 17 significant digits.
    write!(out, "{x:.16e}").expect("write to string");
}

/// JSON Lines encoding, one record per configuration.
pub fn trace_to_jsonl(trace: &RunTrace) -> String {
    let mut out = String::new();
    let last = trace.rounds.len().saturating_sub(1);
    for (round, record) in trace.rounds.iter().enumerate() {
        write!(out, "{{\"round\":{round},\"positions\":[").unwrap();
        for (i, p) in record.positions.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            fmt_real(&mut out, p.x);
            out.push(',');
            fmt_real(&mut out, p.y);
            out.push(']');
        }
        out.push_str("],\"bits\":");
        let bits: Vec<u8> = record.bits.iter().map(|b| b.0).collect();
        out.push_str(&serde_json::to_string(&bits).unwrap());
        out.push_str(",\"moved\":");
        out.push_str(&serde_json::to_string(&record.moved).unwrap());
        if round == last {
            if let Some(err) = &trace.error {
                out.push_str(",\"error\":");
                out.push_str(&serde_json::to_string(&err.to_string()).unwrap());
            }
        }
        out.push_str("}\n");
    }
    out
}

#[derive(Deserialize)]
struct JsonRecord {
    round: usize,
    positions: Vec<[f64; 2]>,
    bits: Vec<u8>,
    moved: Vec<bool>,
    #[serde(default)]
    error: Option<String>,
}

pub fn trace_from_jsonl(text: &str) -> std::result::Result<RunTrace, String> {
    let mut rounds = Vec::new();
    let mut error = None;
    for (lineno, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let rec: JsonRecord =
            serde_json::from_str(line).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if rec.round != rounds.len() {
            return Err(format!(
                "line {}: expected round {}",
                lineno + 1,
                rounds.len()
            ));
        }
        if rec.bits.len() != rec.positions.len() || rec.moved.len() != rec.positions.len() {
            return Err(format!("line {}: field lengths disagree", lineno + 1));
        }
        if let Some(b) = rec.bits.iter().find(|&&b| b > 1) {
            return Err(format!("line {}: bit value {b}", lineno + 1));
        }
        if rounds
            .first()
            .is_some_and(|r: &RoundRecord| r.positions.len() != rec.positions.len())
        {
            return Err(format!("line {}: robot count changed", lineno + 1));
        }
        if error.is_some() {
            return Err(format!("line {}: record after an error", lineno + 1));
        }
        error = rec.error;
        rounds.push(RoundRecord {
            positions: rec.positions.into_iter().map(Point::from).collect(),
            bits: rec.bits.into_iter().map(MemoryBit).collect(),
            moved: rec.moved,
        });
    }
    if rounds.is_empty() {
        return Err("empty trace".into());
    }
    let error = error.map(|text| {
        let (name, message) = text.split_once(": ").unwrap_or((text.as_str(), ""));
        TraceError {
            round: rounds.len(),
            name: name.to_string(),
            message: message.to_string(),
        }
    });
    Ok(RunTrace { rounds, error })
}

/// Adversarial frame assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Identical,
    /// Non-central robots rotated by a quarter turn from the central one.
    RotatedQuarter,
    /// Distinct rotations, shared handedness.
    PairwiseDistinct,
    /// Robots paired across a mirror axis receive mirror-image frames.
    MirroredPairs,
    /// Each frame's +x axis points away from the SEC center, so robots in the
    /// same rotation orbit see identical snapshots.
    Symmetric,
    /// Random rotation, mirror flag and scale.
    Random,
}

impl std::str::FromStr for FrameKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| format!("unknown frame kind {s:?}"))
    }
}

pub fn adversary_frames(
    kind: FrameKind,
    c0: &[Point],
    seed: u64,
    angle: f64,
    tol: Tolerance,
) -> Result<Vec<Frame>> {
    let n = c0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames = match kind {
        FrameKind::Identical => vec![Frame::rotated(angle); n],
        FrameKind::RotatedQuarter => {
            let sec = smallest_enclosing_circle(c0, tol)?;
            let central = c0
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.dist(sec.center).total_cmp(&b.1.dist(sec.center)))
                .map(|(i, _)| i)
                .ok_or(Error::EmptyConfiguration)?;
            (0..n)
                .map(|i| {
                    let extra = if i == central { 0.0 } else { FRAC_PI_2 };
                    Frame::rotated(angle + extra)
                })
                .collect()
        }
        FrameKind::PairwiseDistinct => {
            let offset: f64 = rng.gen_range(0.0..TAU);
            let mut slots: Vec<f64> = (0..n)
                .map(|i| offset + TAU * (i as f64 + 0.25 + 0.5 * rng.gen::<f64>()) / n as f64)
                .collect();
            slots.shuffle(&mut rng);
            slots.into_iter().map(Frame::rotated).collect()
        }
        FrameKind::MirroredPairs => {
            let axes = mirror_axes(c0, tol)?;
            let axis = axes.first().ok_or(Error::MirrorSymmetric)?;
            let mut frames: Vec<Option<Frame>> = vec![None; n];
            for i in 0..n {
                if frames[i].is_some() {
                    continue;
                }
                let theta = angle + rng.gen_range(0.0..TAU);
                frames[i] = Some(Frame::rotated(theta));
                let image = axis.reflect(c0[i]);
                if let Some(j) = (i + 1..n).find(|&j| c0[j].approx_eq(image, tol)) {
                    frames[j] = Some(Frame {
                        rotation: 2.0 * axis.angle - theta,
                        mirror: true,
                        scale: 1.0,
                    });
                }
            }
            frames
                .into_iter()
                .map(|f| f.expect("every robot assigned"))
                .collect()
        }
        FrameKind::Symmetric => {
            let sec = smallest_enclosing_circle(c0, tol)?;
            c0.iter()
                .map(|&p| {
                    let v = p - sec.center;
                    let base = if v.norm() <= tol.eps { 0.0 } else { v.angle() };
                    Frame::rotated(base + angle)
                })
                .collect()
        }
        FrameKind::Random => (0..n)
            .map(|_| Frame {
                rotation: rng.gen_range(0.0..TAU),
                mirror: rng.gen_bool(0.5),
                scale: rng.gen_range(0.5..2.0),
            })
            .collect(),
    };
    Ok(frames)
}
