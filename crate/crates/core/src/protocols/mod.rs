//! Robot-side Compute functions. Every step takes a snapshot in the robot's
//! own frame and returns a destination in that same frame.

mod memory;

pub use memory::{
    compute_movement_central, compute_movement_not_central, decode_hop, encode_hop, one_bit_step,
    reconstruct, LeaderMark,
};

use serde::{Deserialize, Serialize};

use crate::engine::{Algorithm, MemoryRule, ObliviousRule, Snapshot};
use crate::error::{Error, Result};
use crate::geometry::{centroid, Handedness, Point, Tolerance};
use crate::ordering::{
    agree_chirality, axis_orientation, order_from_leader, order_with_chirality,
    order_without_chirality, sort_along_axis, voting_elect, CyclicOrder,
};
use crate::symmetry::{central_robot, mirror_axes, rotational_order};

/// The single persistent bit of the one-bit protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MemoryBit(pub u8);

impl MemoryBit {
    pub const ZERO: MemoryBit = MemoryBit(0);
    pub const ONE: MemoryBit = MemoryBit(1);

    pub fn is_set(self) -> bool {
        self.0 != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String")]
pub enum ProtocolId {
    VisitAllChirality,
    MoveAllNoChirality,
    VisitAllNoChirality,
    VotingVisitAll,
    OneBitVisitAll,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 5] = [
        ProtocolId::VisitAllChirality,
        ProtocolId::MoveAllNoChirality,
        ProtocolId::VisitAllNoChirality,
        ProtocolId::VotingVisitAll,
        ProtocolId::OneBitVisitAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::VisitAllChirality => "VisitAllChirality",
            ProtocolId::MoveAllNoChirality => "MoveAllNoChirality",
            ProtocolId::VisitAllNoChirality => "VisitAllNoChirality",
            ProtocolId::VotingVisitAll => "VotingVisitAll",
            ProtocolId::OneBitVisitAll => "OneBitVisitAll",
        }
    }

    /// Kebab-case alias accepted on the command line.
    pub fn alias(self) -> &'static str {
        match self {
            ProtocolId::VisitAllChirality => "visit-all-chirality",
            ProtocolId::MoveAllNoChirality => "move-all-no-chirality",
            ProtocolId::VisitAllNoChirality => "visit-all-no-chirality",
            ProtocolId::VotingVisitAll => "voting-visit-all",
            ProtocolId::OneBitVisitAll => "one-bit-visit-all",
        }
    }

    pub fn uses_memory(self) -> bool {
        self == ProtocolId::OneBitVisitAll
    }

    /// Whether correctness relies on every robot sharing a handedness.
    pub fn needs_chirality(self) -> bool {
        matches!(
            self,
            ProtocolId::VisitAllChirality | ProtocolId::VotingVisitAll | ProtocolId::OneBitVisitAll
        )
    }

    /// Move-All protocols only promise a fixed-point-free step; the rest
    /// promise an n-cycle.
    pub fn is_move_all(self) -> bool {
        self == ProtocolId::MoveAllNoChirality
    }
}

impl std::fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl TryFrom<String> for ProtocolId {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl std::str::FromStr for ProtocolId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.name() == s || p.alias() == s)
            .ok_or_else(|| format!("unknown protocol {s:?}"))
    }
}

fn successor_point(points: &[Point], order: &CyclicOrder, own: usize) -> Result<Point> {
    let next = order
        .successor(own)
        .ok_or_else(|| Error::NotOrderable(format!("robot {own} missing from the order")))?;
    Ok(points[next])
}

pub fn visit_all_chirality_step(view: &Snapshot, h: Handedness, tol: Tolerance) -> Result<Point> {
    let order = order_with_chirality(&view.points, h, tol)?;
    successor_point(&view.points, &order, view.own)
}

pub fn visit_all_no_chirality_step(view: &Snapshot, tol: Tolerance) -> Result<Point> {
    let order = order_without_chirality(&view.points, tol)?;
    successor_point(&view.points, &order, view.own)
}

pub fn move_all_no_chirality_step(view: &Snapshot, tol: Tolerance) -> Result<Point> {
    let points = &view.points;
    let me = points[view.own];
    if central_robot(points, tol)?.is_some() {
        return Err(Error::NotOrderable(
            "one robot at the center of a rotationally symmetric configuration".into(),
        ));
    }
    let axes = mirror_axes(points, tol)?;
    let on_axis =
        |a: &crate::symmetry::Axis| points.iter().filter(|&&p| a.contains(p, tol)).count();
    if axes.iter().any(|a| on_axis(a) == 1) {
        return Err(Error::NotOrderable(
            "a mirror axis carries exactly one robot".into(),
        ));
    }
    let c = centroid(points)?;
    if rotational_order(points, tol)? % 2 == 0 {
        return Ok(c * 2.0 - me);
    }
    if axes.is_empty() {
        let h = agree_chirality(points, tol)?;
        return visit_all_chirality_step(view, h, tol);
    }
    if let Some(axis) = axes.iter().find(|a| a.contains(me, tol)) {
        let mut members: Vec<usize> = (0..points.len())
            .filter(|&i| axis.contains(points[i], tol))
            .collect();
        let u = axis_orientation(points, axis.point, axis.dir, tol);
        sort_along_axis(points, &mut members, axis.point, u, tol);
        let k = members
            .iter()
            .position(|&i| i == view.own)
            .expect("own robot is on the axis");
        return Ok(points[members[(k + 1) % members.len()]]);
    }
    let mut by_distance: Vec<(f64, usize)> = axes
        .iter()
        .enumerate()
        .map(|(k, a)| (a.distance(me), k))
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0));
    match by_distance.as_slice() {
        [(_, k)] => Ok(axes[*k].reflect(me)),
        [(d0, k), (d1, _), ..] if !tol.eq(*d0, *d1) => Ok(axes[*k].reflect(me)),
        _ => Ok(c * 2.0 - me),
    }
}

pub fn voting_visit_all_step(view: &Snapshot, h: Handedness, tol: Tolerance) -> Result<Point> {
    if central_robot(&view.points, tol)?.is_none() {
        return visit_all_chirality_step(view, h, tol);
    }
    let dirs = view
        .frames
        .as_ref()
        .ok_or_else(|| Error::InvalidFrame("voting needs every robot's frame".into()))?;
    let leader = voting_elect(&view.points, dirs, h, tol)?;
    let order = order_from_leader(&view.points, leader, h, tol)?;
    successor_point(&view.points, &order, view.own)
}

/// A protocol together with the parameters every robot runs it with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub id: ProtocolId,
    /// Local turning direction used by protocols that assume chirality.
    pub handedness: Handedness,
    pub tol: Tolerance,
}

impl Protocol {
    pub fn new(id: ProtocolId, handedness: Handedness, tol: Tolerance) -> Self {
        Protocol {
            id,
            handedness,
            tol,
        }
    }

    pub fn algorithm(&self) -> Algorithm<'_> {
        if self.id.uses_memory() {
            Algorithm::WithMemory(self)
        } else {
            Algorithm::Oblivious(self)
        }
    }
}

impl ObliviousRule for Protocol {
    fn needs_visible_frames(&self) -> bool {
        self.id == ProtocolId::VotingVisitAll
    }

    fn compute(&self, view: &Snapshot) -> Result<Point> {
        match self.id {
            ProtocolId::VisitAllChirality => {
                visit_all_chirality_step(view, self.handedness, self.tol)
            }
            ProtocolId::MoveAllNoChirality => move_all_no_chirality_step(view, self.tol),
            ProtocolId::VisitAllNoChirality => visit_all_no_chirality_step(view, self.tol),
            ProtocolId::VotingVisitAll => voting_visit_all_step(view, self.handedness, self.tol),
            ProtocolId::OneBitVisitAll => {
                one_bit_step(view, MemoryBit::ZERO, self.handedness, self.tol).map(|(p, _)| p)
            }
        }
    }
}

impl MemoryRule for Protocol {
    fn compute(&self, view: &Snapshot, bit: MemoryBit) -> Result<(Point, MemoryBit)> {
        if self.id.uses_memory() {
            one_bit_step(view, bit, self.handedness, self.tol)
        } else {
            ObliviousRule::compute(self, view).map(|p| (p, bit))
        }
    }
}
