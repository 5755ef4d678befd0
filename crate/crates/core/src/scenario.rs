//! JSON scenario files: an initial configuration, a frame assignment and the
//! protocol to run.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::engine::{adversary_frames, run, Frame, FrameKind, RunTrace};
use crate::error::Error;
use crate::geometry::{find_duplicate, Handedness, Point, Tolerance};
use crate::protocols::{Protocol, ProtocolId};
use crate::symmetry::{classify, symmetry_report};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Adversary {
        kind: FrameKind,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        angle: Option<f64>,
    },
    Explicit(Vec<Frame>),
}

fn default_tolerance() -> f64 {
    Tolerance::DEFAULT_EPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub points: Vec<Point>,
    pub frames: FrameSpec,
    pub protocol: ProtocolId,
    pub rounds: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub handedness: Handedness,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scenario::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |m: String| Err(ScenarioError::Invalid(m));
        if self.points.is_empty() {
            return invalid("no points".into());
        }
        if let Some(k) = self.points.iter().position(|p| !p.is_finite()) {
            return invalid(format!("point {k} is not finite"));
        }
        if self.rounds == 0 {
            return invalid("rounds must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return invalid(format!("tolerance {} must be positive", self.tolerance));
        }
        if let Some((i, j)) = find_duplicate(&self.points, self.tol()) {
            return invalid(format!("points {i} and {j} coincide"));
        }
        if let FrameSpec::Explicit(frames) = &self.frames {
            if frames.len() != self.points.len() {
                return invalid(format!(
                    "{} frames given for {} points",
                    frames.len(),
                    self.points.len()
                ));
            }
            if let Some(k) = frames
                .iter()
                .position(|f| f.scale.is_nan() || f.scale <= 0.0 || !f.rotation.is_finite())
            {
                return invalid(format!(
                    "frame {k} needs a finite rotation and positive scale"
                ));
            }
        }
        Ok(())
    }

    pub fn tol(&self) -> Tolerance {
        Tolerance::new(self.tolerance)
    }

    /// Replaces the seed of an adversarial frame assignment.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let FrameSpec::Adversary { seed: s, .. } = &mut self.frames {
            *s = seed;
        }
        self
    }

    pub fn frames(&self) -> Result<Vec<Frame>, ScenarioError> {
        match &self.frames {
            FrameSpec::Explicit(frames) => Ok(frames.clone()),
            FrameSpec::Adversary { kind, seed, angle } => Ok(adversary_frames(
                *kind,
                &self.points,
                *seed,
                angle.unwrap_or(0.0),
                self.tol(),
            )?),
        }
    }

    pub fn protocol(&self) -> Protocol {
        Protocol::new(self.protocol, self.handedness, self.tol())
    }

    pub fn run(&self) -> Result<RunTrace, ScenarioError> {
        let frames = self.frames()?;
        let protocol = self.protocol();
        Ok(run(
            &self.points,
            &frames,
            protocol.algorithm(),
            self.rounds,
            self.tol(),
        ))
    }
}

/// Why a protocol cannot run from a configuration, if it cannot.
pub fn blocking_condition(
    id: ProtocolId,
    points: &[Point],
    tol: Tolerance,
) -> Result<Option<&'static str>, Error> {
    let class = classify(points, tol)?;
    let report = symmetry_report(points, tol)?;
    const CENTRAL: &str = "a single robot at the center of a rotationally symmetric configuration";
    let blocked = match id {
        ProtocolId::VisitAllChirality if class.in_c_dot => Some(CENTRAL),
        ProtocolId::MoveAllNoChirality if class.in_c_dot => Some(CENTRAL),
        ProtocolId::MoveAllNoChirality if class.axis_with_single_robot => {
            Some("a mirror axis holding exactly one robot")
        }
        ProtocolId::VisitAllNoChirality if class.in_c_dot => Some(CENTRAL),
        ProtocolId::VisitAllNoChirality if class.axis_count >= 2 => Some("two or more mirror axes"),
        ProtocolId::VisitAllNoChirality
            if class.axis_count == 1 && report.robot_counts_on_axes[0] > 0 =>
        {
            Some("robots on the mirror axis")
        }
        _ => None,
    };
    Ok(blocked)
}

fn requirements(id: ProtocolId) -> &'static str {
    match id {
        ProtocolId::VisitAllChirality => "chirality",
        ProtocolId::MoveAllNoChirality | ProtocolId::VisitAllNoChirality => "none",
        ProtocolId::VotingVisitAll => "chirality, visible frames",
        ProtocolId::OneBitVisitAll => "chirality, one bit of memory",
    }
}

/// Symmetry data, class predicates and per-protocol feasibility as JSON.
pub fn classification_report(points: &[Point], tol: Tolerance) -> Result<serde_json::Value, Error> {
    let report = symmetry_report(points, tol)?;
    let class = classify(points, tol)?;
    let axes: Vec<_> = report
        .mirror_axes
        .iter()
        .zip(&report.robot_counts_on_axes)
        .map(|(a, &robots)| json!({"point": a.point, "angle": a.angle, "robots": robots}))
        .collect();
    let protocols = ProtocolId::ALL
        .into_iter()
        .map(|id| {
            let blocked = blocking_condition(id, points, tol)?;
            Ok(json!({
                "protocol": id.name(),
                "feasible": blocked.is_none(),
                "blocked_by": blocked,
                "requires": requirements(id),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "robots": points.len(),
        "symmetry": {
            "rho": report.rho,
            "rotational_order": report.rotational_order,
            "mirror_axes": axes,
            "has_central_robot": report.has_central_robot,
            "is_central_symmetric": report.is_central_symmetric,
        },
        "class": {
            "in_c_dot": class.in_c_dot,
            "k_without_center": class.k_without_center,
            "central_robot": class.central_robot,
            "axis_with_single_robot": class.axis_with_single_robot,
            "unique_axis_no_robots": class.unique_axis_no_robots,
            "axis_count": class.axis_count,
        },
        "protocols": protocols,
    }))
}
