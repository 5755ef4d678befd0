//! Visit-All with one persistent bit, for configurations with a single robot
//! at the center of a rotationally symmetric pattern.
//!
//! Such a pattern offers no agreed order. Rounds alternate: in a signalling
//! round the central robot (and, later, the leader) step off their positions
//! so that the pattern, a leader and a pivot vertex can all be read back from
//! the perturbed configuration; in the following round every robot moves to
//! its successor in the order anchored at the pivot.

use std::f64::consts::{FRAC_PI_2, TAU};

use super::{visit_all_chirality_step, MemoryBit};
use crate::engine::Snapshot;
use crate::error::{Error, Result};
use crate::geometry::{
    concentric_decomposition, polar, smallest_enclosing_circle, Handedness, Point, Tolerance,
};
use crate::ordering::{get_vote, order_from_leader_about};
use crate::symmetry::central_robot;

/// Fraction of the innermost radius the central robot travels.
const CENTRAL_STEP: f64 = 1.0 / 8.0;
/// Fraction of the segment length a leader slides by when n = 3.
const SEGMENT_SLIDE: f64 = 1.0 / 16.0;

/// Outcome of reading a signalling configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderMark {
    pub leader: usize,
    pub pivot: usize,
    /// The symmetric configuration before the signalling moves.
    pub reconstructed: Vec<Point>,
}

/// Maps hop `i` of `m` into `(1/2, 1)`.
pub fn encode_hop(i: usize, m: usize) -> Result<f64> {
    if m < 2 || i >= m {
        return Err(Error::InvalidHop { hop: i, ring: m });
    }
    Ok(0.5 + (i + 1) as f64 / (2.0 * (m + 1) as f64))
}

/// Inverse of [`encode_hop`]; tolerates perturbations below `1 / (4(m+1))`.
pub fn decode_hop(e: f64, m: usize) -> Result<usize> {
    if m < 2 || !e.is_finite() {
        return Err(Error::DecodeFailure(e));
    }
    let k = (2.0 * (e - 0.5) * (m + 1) as f64).round();
    if k < 1.0 || k > m as f64 {
        return Err(Error::DecodeFailure(e));
    }
    let i = k as usize - 1;
    let exact = encode_hop(i, m)?;
    if (e - exact).abs() > 1.0 / (4.0 * (m + 1) as f64) {
        return Err(Error::DecodeFailure(e));
    }
    Ok(i)
}

fn rotate_in(v: Point, angle: f64, h: Handedness) -> Point {
    v.rotated(angle * h.sign())
}

/// Innermost ring about `o`, sorted by angle in `h` starting from `start`.
fn ring_from(
    points: &[Point],
    ring: &[usize],
    o: Point,
    start: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<Vec<usize>> {
    let mut keyed = ring
        .iter()
        .map(|&i| Ok((polar(points[i], points[start], o, h, tol)?.theta, i)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|a, b| tol.cmp(a.0, b.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

fn innermost_ring(points: &[Point], o: Point, tol: Tolerance) -> Result<Vec<usize>> {
    let decomposition = concentric_decomposition(points, o, tol)?;
    decomposition
        .rings(tol)
        .first()
        .map(|l| l.members.clone())
        .ok_or(Error::EmptyConfiguration)
}

/// The pivot a robot selects: the innermost-ring vertex first met turning
/// in `h` from the robot's own +x axis placed at the center.
fn own_pivot(
    points: &[Point],
    ring: &[usize],
    o: Point,
    h: Handedness,
    tol: Tolerance,
) -> Result<usize> {
    get_vote(points, ring, o, Point::new(1.0, 0.0), h, tol)
}

/// Hop count from the ring vertex first met on the ray `o → from` to `pivot`.
fn hops_to(
    points: &[Point],
    ring: &[usize],
    o: Point,
    from: Point,
    pivot: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<usize> {
    let reference = get_vote(points, ring, o, (from - o).normalized(), h, tol)?;
    let walk = ring_from(points, ring, o, reference, h, tol)?;
    Ok(walk
        .iter()
        .position(|&i| i == pivot)
        .expect("pivot lies on the ring"))
}

/// Ring vertex `nhop` steps after the reference of the ray `o → from`.
fn vertex_after(
    points: &[Point],
    ring: &[usize],
    o: Point,
    from: Point,
    nhop: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<Option<usize>> {
    let reference = get_vote(points, ring, o, (from - o).normalized(), h, tol)?;
    let walk = ring_from(points, ring, o, reference, h, tol)?;
    Ok(walk.get(nhop).copied())
}

/// Signalling move of the central robot. Returns the destination and the
/// chosen pivot index.
pub fn compute_movement_central(
    points: &[Point],
    own: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<(Point, usize)> {
    let Some((rc, _)) = central_robot(points, tol)? else {
        return Err(Error::NotCentral);
    };
    if rc != own {
        return Err(Error::NotCentral);
    }
    let o = points[rc];
    let ring = innermost_ring(points, o, tol)?;
    let pivot = own_pivot(points, &ring, o, h, tol)?;
    let dest = if points.len() == 3 {
        let others: Vec<usize> = (0..3).filter(|&i| i != rc).collect();
        let s = points[others[0]].dist(points[others[1]]);
        o + rotate_in((points[pivot] - o).normalized(), -FRAC_PI_2, h) * (s / 2.0)
    } else {
        o + (points[pivot] - o) * CENTRAL_STEP
    };
    Ok((dest, pivot))
}

/// Signalling move of a leader that is not at the center.
pub fn compute_movement_not_central(
    points: &[Point],
    own: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<Point> {
    let Some((rc, _)) = central_robot(points, tol)? else {
        return Err(Error::InvalidCaller(
            "configuration has no central robot".into(),
        ));
    };
    if rc == own {
        return Err(Error::InvalidCaller("caller is the central robot".into()));
    }
    let o = points[rc];
    let me = points[own];
    let u = (me - o).normalized();
    let decomposition = concentric_decomposition(points, o, tol)?;
    let layers = &decomposition.layers;
    let ring = layers[1].members.clone();
    let pivot = own_pivot(points, &ring, o, h, tol)?;

    if points.len() == 3 {
        let other = (0..3).find(|&i| i != rc && i != own).expect("three robots");
        let s = me.dist(points[other]);
        let outward = (me - points[other]).normalized();
        let slide = if pivot == own {
            SEGMENT_SLIDE
        } else {
            -SEGMENT_SLIDE
        };
        return Ok(me + outward * (slide * s));
    }

    let e = encode_hop(hops_to(points, &ring, o, me, pivot, h, tol)?, ring.len())?;
    let j = decomposition
        .layer_of(own)
        .expect("own robot is in a layer");
    let outer = layers.len() - 1;
    let layer = &layers[j].members;
    if j == outer && layer.len() == 2 {
        let other = layer
            .iter()
            .copied()
            .find(|&i| i != own)
            .expect("two robots");
        let d = me.dist(points[other]);
        return Ok(points[other] + u * ((2.0 + e) * d));
    }
    if j == outer && layer.len() == 3 {
        let pred = layer
            .iter()
            .copied()
            .filter(|&i| i != own)
            .min_by(|&a, &b| {
                let ta = polar(me, points[a], o, h, tol).map_or(TAU, |p| p.theta);
                let tb = polar(me, points[b], o, h, tol).map_or(TAU, |p| p.theta);
                ta.total_cmp(&tb)
            })
            .expect("three robots");
        return Ok(o + rotate_in(points[pred] - o, e * TAU / 3.0, h));
    }
    let x = layers[j].radius - layers[j - 1].radius;
    Ok(o + u * (me.dist(o) - e * x / 2.0))
}

fn nearest_to(points: &[Point], members: impl Iterator<Item = usize>, o: Point) -> Option<usize> {
    members.min_by(|&a, &b| {
        points[a]
            .dist(o)
            .total_cmp(&points[b].dist(o))
            .then(a.cmp(&b))
    })
}

/// Accepts a candidate reconstruction only if it is a central configuration
/// whose central robot is `rc`.
fn accept(
    rec: Vec<Point>,
    rc: usize,
    leader: usize,
    pivot: usize,
    tol: Tolerance,
) -> Option<LeaderMark> {
    match central_robot(&rec, tol) {
        Ok(Some((c, _))) if c == rc => Some(LeaderMark {
            leader,
            pivot,
            reconstructed: rec,
        }),
        _ => None,
    }
}

/// Decodes the pivot from a leader's original position once the rest of the
/// configuration has been restored.
fn decoded_pivot(
    rec: &[Point],
    o: Point,
    leader_at: Point,
    e: f64,
    h: Handedness,
    tol: Tolerance,
) -> Option<usize> {
    let ring = innermost_ring(rec, o, tol).ok()?;
    let nhop = decode_hop(e, ring.len()).ok()?;
    vertex_after(rec, &ring, o, leader_at, nhop, h, tol).ok()?
}

fn reconstruct_three(points: &[Point], h: Handedness, tol: Tolerance) -> Option<LeaderMark> {
    let pairs = [(0, 1, 2), (1, 2, 0), (0, 2, 1)];
    let &(a, b, t) = pairs.iter().max_by(|x, y| {
        points[x.0]
            .dist(points[x.1])
            .total_cmp(&points[y.0].dist(points[y.1]))
    })?;
    let (pa, pb, pt) = (points[a], points[b], points[t]);
    let e = pa.dist(pb);
    let u = (pb - pa).normalized();
    let foot = pa + u * (pt - pa).dot(u);
    let height = pt.dist(foot);

    if tol.eq(height, e / 2.0) {
        let mid = (pa + pb) * 0.5;
        let mut rec = points.to_vec();
        rec[t] = mid;
        let quarter = |p: Point| polar(p, pt, mid, h, tol).map(|q| (q.theta - FRAC_PI_2).abs());
        let pivot = if quarter(pa).ok()? <= quarter(pb).ok()? {
            a
        } else {
            b
        };
        return accept(rec, t, t, pivot, tol);
    }

    let off = |p: Point| (p.dist(foot) - height).abs();
    let (leader, other) = if off(pa) >= off(pb) { (a, b) } else { (b, a) };
    if off(points[other]) > tol.eps.max(height * 1e-9) {
        return None;
    }
    let leader_at = foot + (points[leader] - foot).normalized() * height;
    let mut rec = points.to_vec();
    rec[t] = foot;
    rec[leader] = leader_at;
    let drift = (pa + pb) * 0.5 - foot;
    let pivot = if drift.dot(leader_at - foot) > 0.0 {
        leader
    } else {
        other
    };
    accept(rec, t, leader, pivot, tol)
}

/// Leader on a two-robot outer ring pushed outward along the diameter.
fn reconstruct_diameter(points: &[Point], h: Handedness, tol: Tolerance) -> Option<LeaderMark> {
    let sec = smallest_enclosing_circle(points, tol).ok()?;
    let boundary: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].dist(sec.center) >= sec.radius - tol.eps)
        .collect();
    let &[a, b] = boundary.as_slice() else {
        return None;
    };
    let rest: Vec<Point> = (0..points.len())
        .filter(|&i| i != a && i != b)
        .map(|i| points[i])
        .collect();
    let o = smallest_enclosing_circle(&rest, tol).ok()?.center;
    let (leader, rx) = if points[a].dist(o) >= points[b].dist(o) {
        (a, b)
    } else {
        (b, a)
    };
    let back = points[rx] - o;
    let d = 2.0 * back.norm();
    if d <= tol.eps {
        return None;
    }
    let e = points[a].dist(points[b]) / d - 2.0;
    let leader_at = o - back;
    if (points[leader] - o)
        .normalized()
        .cross(back.normalized())
        .abs()
        > tol.eps / d.min(1.0)
    {
        return None;
    }
    let rc = nearest_to(points, (0..points.len()).filter(|&i| i != a && i != b), o)?;
    let mut rec = points.to_vec();
    rec[rc] = o;
    rec[leader] = leader_at;
    let pivot = decoded_pivot(&rec, o, leader_at, e, h, tol)?;
    accept(rec, rc, leader, pivot, tol)
}

/// Decomposition of every robot except `skip` about `o`, with original
/// indices.
fn layers_without(
    points: &[Point],
    skip: usize,
    o: Point,
    tol: Tolerance,
) -> Option<Vec<(f64, Vec<usize>)>> {
    let idx: Vec<usize> = (0..points.len()).filter(|&i| i != skip).collect();
    let sub: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
    let decomposition = concentric_decomposition(&sub, o, tol).ok()?;
    Some(
        decomposition
            .layers
            .into_iter()
            .map(|l| (l.radius, l.members.into_iter().map(|k| idx[k]).collect()))
            .collect(),
    )
}

/// Leader alone between two layers after moving radially inward.
fn reconstruct_radial(points: &[Point], h: Handedness, tol: Tolerance) -> Option<LeaderMark> {
    let o = smallest_enclosing_circle(points, tol).ok()?.center;
    let rc = nearest_to(points, 0..points.len(), o)?;
    let layers = layers_without(points, rc, o, tol)?;
    let j = layers.iter().position(|(_, m)| m.len() == 1)?;
    let leader = layers[j].1[0];
    let rho_j = layers.get(j + 1)?.0;
    let rho_prev = if j == 0 { 0.0 } else { layers[j - 1].0 };
    let x = rho_j - rho_prev;
    let e = (rho_j - points[leader].dist(o)) / (x / 2.0);
    let leader_at = o + (points[leader] - o).normalized() * rho_j;
    let mut rec = points.to_vec();
    rec[rc] = o;
    rec[leader] = leader_at;
    let pivot = decoded_pivot(&rec, o, leader_at, e, h, tol)?;
    accept(rec, rc, leader, pivot, tol)
}

/// Leader on a three-robot outer ring moved toward its predecessor.
fn reconstruct_angular(points: &[Point], h: Handedness, tol: Tolerance) -> Option<LeaderMark> {
    let o = smallest_enclosing_circle(points, tol).ok()?.center;
    let rc = nearest_to(points, 0..points.len(), o)?;
    let layers = layers_without(points, rc, o, tol)?;
    let (radius, outer) = layers.last()?;
    if outer.len() != 3 {
        return None;
    }
    let walk = ring_from(points, outer, o, outer[0], h, tol).ok()?;
    let gap = |k: usize| -> Option<f64> {
        let (p, q) = (points[walk[k]], points[walk[(k + 1) % 3]]);
        polar(q, p, o, h, tol).ok().map(|c| c.theta)
    };
    let gaps = [gap(0)?, gap(1)?, gap(2)?];
    let third = TAU / 3.0;
    let angle_tol = 4.0 * tol.eps / radius;
    let exact: Vec<usize> = (0..3)
        .filter(|&k| (gaps[k] - third).abs() <= angle_tol)
        .collect();
    let &[k] = exact.as_slice() else {
        return None;
    };
    // Gap k runs from R to Q; the leader follows Q.
    let q = walk[(k + 1) % 3];
    let leader = walk[(k + 2) % 3];
    let e = gaps[(k + 1) % 3] / third;
    if e >= 1.0 - angle_tol {
        return None;
    }
    let leader_at = o + rotate_in(points[q] - o, third, h);
    let mut rec = points.to_vec();
    rec[rc] = o;
    rec[leader] = leader_at;
    let pivot = decoded_pivot(&rec, o, leader_at, e, h, tol)?;
    accept(rec, rc, leader, pivot, tol)
}

/// Only the central robot moved, toward the pivot.
fn reconstruct_central(points: &[Point], tol: Tolerance) -> Option<LeaderMark> {
    let o = smallest_enclosing_circle(points, tol).ok()?.center;
    let rc = nearest_to(points, 0..points.len(), o)?;
    let d = points[rc] - o;
    if d.norm() <= tol.eps {
        return None;
    }
    let mut rec = points.to_vec();
    rec[rc] = o;
    let ring = innermost_ring(&rec, o, tol).ok()?;
    let dir = d.normalized();
    let pivot = ring
        .iter()
        .copied()
        .filter(|&v| (points[v] - o).dot(dir) > 0.0)
        .min_by(|&a, &b| {
            dir.cross(points[a] - o)
                .abs()
                .total_cmp(&dir.cross(points[b] - o).abs())
        })?;
    if dir.cross(points[pivot] - o).abs() > tol.eps {
        return None;
    }
    accept(rec, rc, rc, pivot, tol)
}

/// Restores the central configuration that produced a signalling
/// configuration, and reads off the leader and the pivot.
pub fn reconstruct(points: &[Point], h: Handedness, tol: Tolerance) -> Result<LeaderMark> {
    let found = match points.len() {
        0..=2 => None,
        3 => reconstruct_three(points, h, tol),
        _ => reconstruct_diameter(points, h, tol)
            .or_else(|| reconstruct_radial(points, h, tol))
            .or_else(|| reconstruct_angular(points, h, tol))
            .or_else(|| reconstruct_central(points, tol)),
    };
    found.ok_or(Error::ReconstructFailure)
}

/// One Compute of the one-bit protocol: destination in the robot's frame
/// and the bit to keep.
pub fn one_bit_step(
    view: &Snapshot,
    bit: MemoryBit,
    h: Handedness,
    tol: Tolerance,
) -> Result<(Point, MemoryBit)> {
    let points = &view.points;
    let own = view.own;
    let central = central_robot(points, tol)?;
    match (central, bit.is_set()) {
        (None, false) => Ok((visit_all_chirality_step(view, h, tol)?, MemoryBit::ZERO)),
        (Some((rc, _)), false) => {
            let dest = if own == rc {
                compute_movement_central(points, own, h, tol)?.0
            } else {
                points[own]
            };
            Ok((dest, MemoryBit::ONE))
        }
        (Some((rc, _)), true) => {
            let dest = if own == rc {
                compute_movement_central(points, own, h, tol)?.0
            } else {
                compute_movement_not_central(points, own, h, tol)?
            };
            Ok((dest, MemoryBit::ONE))
        }
        (None, true) => {
            let mark = reconstruct(points, h, tol)?;
            let rec = &mark.reconstructed;
            let o = rec[central_robot(rec, tol)?.ok_or(Error::ReconstructFailure)?.0];
            let order = order_from_leader_about(rec, o, mark.pivot, h, tol)?;
            let next = order.successor(own).expect("every robot is ordered");
            let keep = if own == mark.leader {
                MemoryBit::ONE
            } else {
                MemoryBit::ZERO
            };
            Ok((rec[next], keep))
        }
    }
}
