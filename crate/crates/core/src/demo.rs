//! Executable counterexamples: configurations and frame assignments on which
//! a protocol family cannot work, run until the obstruction shows.
//!
//! By default each demo runs the matching protocol, whose feasibility guard
//! refuses the configuration. With `force` the guard is bypassed by a rule
//! that breaks the tie some other way, and the run ends in a collision or a
//! spec violation instead.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::engine::{
    adversary_frames, run, Algorithm, Chirality, FrameKind, ObliviousRule, RunTrace, Snapshot,
};
use crate::error::Result;
use crate::geometry::{centroid, Handedness, Point, Tolerance};
use crate::protocols::{one_bit_step, MemoryBit, Protocol, ProtocolId};
use crate::symmetry::{in_c_dot, view_classes};
use crate::verify::{check_k_step_spec_with, ShiftCheck, Spec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoName {
    Thm2,
    Thm3,
    Thm5,
    Thm9,
}

impl DemoName {
    pub const ALL: [DemoName; 4] = [
        DemoName::Thm2,
        DemoName::Thm3,
        DemoName::Thm5,
        DemoName::Thm9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DemoName::Thm2 => "thm2",
            DemoName::Thm3 => "thm3",
            DemoName::Thm5 => "thm5",
            DemoName::Thm9 => "thm9",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            DemoName::Thm2 => "no oblivious 1-step Move-All from a square with a robot at its center",
            DemoName::Thm3 => {
                "no oblivious 2-step Visit-All from a centered square when the central robot's frame is a quarter turn off"
            }
            DemoName::Thm5 => "no Move-All without chirality when a mirror axis holds exactly one robot",
            DemoName::Thm9 => "no Visit-All without chirality when the configuration has two mirror axes",
        }
    }
}

impl std::str::FromStr for DemoName {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DemoName::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown demo {s:?}, expected one of thm2, thm3, thm5, thm9"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// The protocol refused to run.
    Refusal {
        round: usize,
        error: String,
        message: String,
    },
    Collision {
        round: usize,
        robots: (usize, usize),
    },
    /// The trace ran but does not meet the spec.
    SpecViolation { round: usize, reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub demo: &'static str,
    pub summary: &'static str,
    pub forced: bool,
    pub points: Vec<Point>,
    pub frames: FrameKind,
    pub rule: String,
    /// Sizes of the classes of robots with identical snapshots.
    pub view_classes: Vec<usize>,
    pub rounds_completed: usize,
    pub obstruction: Option<Obstruction>,
}

impl DemoReport {
    /// Whether the run ended in the obstruction the demo is built around.
    pub fn as_predicted(&self) -> bool {
        match (&self.obstruction, self.forced) {
            (Some(Obstruction::Refusal { error, .. }), false) => error == "NotOrderable",
            (Some(Obstruction::Collision { .. } | Obstruction::SpecViolation { .. }), true) => true,
            _ => false,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("demo {}: {}\n", self.demo, self.summary);
        out += &format!(
            "robots: {}, frames: {:?}, rule: {}\n",
            self.points.len(),
            self.frames,
            self.rule
        );
        out += &format!("robots with identical views: {:?}\n", self.view_classes);
        out += &format!("rounds completed: {}\n", self.rounds_completed);
        match &self.obstruction {
            Some(Obstruction::Refusal {
                round,
                error,
                message,
            }) => {
                out += &format!("obstruction: guard refused at round {round}: {error}: {message}\n")
            }
            Some(Obstruction::Collision {
                round,
                robots: (a, b),
            }) => out += &format!("obstruction: robots {a} and {b} collide in round {round}\n"),
            Some(Obstruction::SpecViolation { round, reason }) => {
                out += &format!("obstruction: spec violated at round {round}: {reason}\n")
            }
            None => out += "obstruction: none observed\n",
        }
        out += if self.as_predicted() {
            "result: as predicted\n"
        } else {
            "result: NOT as predicted\n"
        };
        out
    }
}

/// Cyclic sweep about the centroid starting from the robot nearest to the
/// observer's own +x direction; a robot at the centroid comes last.
struct LocalTieBreak {
    tol: Tolerance,
}

impl ObliviousRule for LocalTieBreak {
    fn compute(&self, view: &Snapshot) -> Result<Point> {
        let tol = self.tol;
        let c = centroid(&view.points)?;
        let angle = |p: Point| {
            let a = (p - c).angle().rem_euclid(TAU);
            if tol.eq(a, TAU) {
                0.0
            } else {
                a
            }
        };
        let mut seq: Vec<usize> = (0..view.len())
            .filter(|&i| !view.points[i].approx_eq(c, tol))
            .collect();
        seq.sort_by(|&a, &b| tol.cmp(angle(view.points[a]), angle(view.points[b])));
        seq.extend((0..view.len()).filter(|&i| view.points[i].approx_eq(c, tol)));
        let k = seq
            .iter()
            .position(|&i| i == view.own)
            .expect("observer is in its own view");
        Ok(view.points[seq[(k + 1) % seq.len()]])
    }
}

/// The one-bit protocol with the bit guessed from the configuration alone.
struct GuessedBit {
    tol: Tolerance,
}

impl ObliviousRule for GuessedBit {
    fn compute(&self, view: &Snapshot) -> Result<Point> {
        let bit = if in_c_dot(&view.points, self.tol)? {
            MemoryBit::ZERO
        } else {
            MemoryBit::ONE
        };
        one_bit_step(view, bit, Handedness::Ccw, self.tol).map(|(p, _)| p)
    }
}

fn centered_square() -> Vec<Point> {
    vec![
        Point::new(1., 1.),
        Point::new(-1., 1.),
        Point::new(-1., -1.),
        Point::new(1., -1.),
        Point::new(0., 0.),
    ]
}

fn outcome(trace: &RunTrace) -> Option<Obstruction> {
    let err = trace.error.as_ref()?;
    if err.name == "CollisionDetected" {
        let robots = parse_collision(&err.message)?;
        return Some(Obstruction::Collision {
            round: err.round,
            robots,
        });
    }
    Some(Obstruction::Refusal {
        round: err.round,
        error: err.name.clone(),
        message: err.message.clone(),
    })
}

fn parse_collision(message: &str) -> Option<(usize, usize)> {
    let nums: Vec<usize> = message
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|s| s.parse().ok())
        .collect();
    match nums.as_slice() {
        [a, b, ..] => Some((*a, *b)),
        _ => None,
    }
}

pub fn run_demo(demo: DemoName, force: bool) -> Result<DemoReport> {
    let tol = Tolerance::default();
    let (points, frames_kind, default_id, angle) = match demo {
        DemoName::Thm2 => (
            centered_square(),
            FrameKind::Symmetric,
            ProtocolId::VisitAllChirality,
            0.0,
        ),
        DemoName::Thm3 => (
            centered_square(),
            FrameKind::RotatedQuarter,
            ProtocolId::VisitAllChirality,
            0.3,
        ),
        DemoName::Thm5 => (
            vec![Point::new(-1., 0.), Point::new(1., 0.), Point::new(0., 3.)],
            FrameKind::MirroredPairs,
            ProtocolId::MoveAllNoChirality,
            0.0,
        ),
        DemoName::Thm9 => (
            vec![
                Point::new(2., 1.),
                Point::new(-2., 1.),
                Point::new(-2., -1.),
                Point::new(2., -1.),
            ],
            FrameKind::MirroredPairs,
            ProtocolId::VisitAllNoChirality,
            0.0,
        ),
    };
    let frames = adversary_frames(frames_kind, &points, 7, angle, tol)?;
    let chirality = if frames.iter().any(|f| f.mirror) {
        Chirality::Absent
    } else {
        Chirality::Present
    };
    let classes: Vec<usize> = view_classes(&points, &frames, chirality, tol)?
        .iter()
        .map(|c| c.len())
        .collect();
    let n = points.len();

    let default_protocol = Protocol::new(default_id, Handedness::Ccw, tol);
    let tie_break = LocalTieBreak { tol };
    let guessed = GuessedBit { tol };
    let swap_protocol = Protocol::new(ProtocolId::MoveAllNoChirality, Handedness::Ccw, tol);
    let sweep_protocol = Protocol::new(ProtocolId::VisitAllChirality, Handedness::Cw, tol);

    let (rule, trace, check): (String, RunTrace, Option<(Spec, usize)>) = if !force {
        let trace = run(&points, &frames, default_protocol.algorithm(), n, tol);
        (default_id.name().to_string(), trace, None)
    } else {
        match demo {
            DemoName::Thm2 => {
                let trace = run(&points, &frames, Algorithm::Oblivious(&tie_break), 1, tol);
                (
                    "sweep from own +x axis".into(),
                    trace,
                    Some((Spec::MoveAll, 1)),
                )
            }
            DemoName::Thm3 => {
                let trace = run(&points, &frames, Algorithm::Oblivious(&guessed), 4, tol);
                (
                    "one-bit steps with the bit guessed from the configuration".into(),
                    trace,
                    Some((Spec::VisitAll, 2)),
                )
            }
            DemoName::Thm5 => {
                let trace = run(&points, &frames, sweep_protocol.algorithm(), 1, tol);
                (
                    "VisitAllChirality with local clockwise sweep".into(),
                    trace,
                    Some((Spec::MoveAll, 1)),
                )
            }
            DemoName::Thm9 => {
                let trace = run(&points, &frames, swap_protocol.algorithm(), 2 * n, tol);
                (
                    "MoveAllNoChirality".into(),
                    trace,
                    Some((Spec::VisitAll, 1)),
                )
            }
        }
    };

    let mut obstruction = outcome(&trace);
    if let (Some((spec, k)), false) = (
        check,
        matches!(obstruction, Some(Obstruction::Collision { .. })),
    ) {
        let verdict = check_k_step_spec_with(&trace, spec, k, ShiftCheck::Every, tol);
        if let Some(v) = verdict.violation {
            if obstruction.is_none() {
                obstruction = Some(Obstruction::SpecViolation {
                    round: v.round,
                    reason: v.reason,
                });
            }
        }
    }
    Ok(DemoReport {
        demo: demo.name(),
        summary: demo.summary(),
        forced: force,
        points,
        frames: frames_kind,
        rule,
        view_classes: classes,
        rounds_completed: trace.rounds.len() - 1,
        obstruction,
    })
}
