//! Cyclic and total orders that every robot computes identically from its own
//! snapshot.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{
    centroid, concentric_decomposition, polar, smallest_enclosing_circle, Handedness, Point,
    Tolerance,
};
use crate::symmetry::{central_robot, mirror_axes};

/// Point indices read cyclically. Equality is up to rotation.
#[derive(Debug, Clone, Eq)]
pub struct CyclicOrder {
    pub seq: Vec<usize>,
}

impl CyclicOrder {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; seq.len()];
        for &i in &seq {
            if i >= seq.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(format!(
                    "{seq:?} is not a permutation"
                )));
            }
        }
        Ok(CyclicOrder { seq })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn position(&self, index: usize) -> Option<usize> {
        self.seq.iter().position(|&i| i == index)
    }

    pub fn successor(&self, index: usize) -> Option<usize> {
        self.position(index)
            .map(|k| self.seq[(k + 1) % self.seq.len()])
    }

    /// Successor map: `result[i]` is the index that follows `i`.
    pub fn successor_map(&self) -> Vec<usize> {
        let mut next = vec![0; self.seq.len()];
        for (k, &i) in self.seq.iter().enumerate() {
            next[i] = self.seq[(k + 1) % self.seq.len()];
        }
        next
    }

    /// The order read as geometric points.
    pub fn points(&self, config: &[Point]) -> Vec<Point> {
        self.seq.iter().map(|&i| config[i]).collect()
    }
}

impl PartialEq for CyclicOrder {
    fn eq(&self, other: &Self) -> bool {
        let n = self.seq.len();
        if n != other.seq.len() {
            return false;
        }
        if n == 0 {
            return true;
        }
        let Some(k) = other.position(self.seq[0]) else {
            return false;
        };
        (0..n).all(|j| self.seq[j] == other.seq[(k + j) % n])
    }
}

/// Whether two orders, each over its own labelling of the same point set,
/// visit the same points in the same cyclic sequence.
pub fn same_geometric_cycle(
    a: &CyclicOrder,
    pa: &[Point],
    b: &CyclicOrder,
    pb: &[Point],
    tol: Tolerance,
) -> bool {
    let (xa, xb) = (a.points(pa), b.points(pb));
    let n = xa.len();
    if n != xb.len() {
        return false;
    }
    if n == 0 {
        return true;
    }
    (0..n).any(|k| (0..n).all(|j| xa[j].approx_eq(xb[(k + j) % n], tol)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    /// Inner polygon vertices in the voting direction.
    pub polygon: Vec<usize>,
    /// Votes per polygon vertex.
    pub votes: Vec<usize>,
}

fn occupied_centroid(points: &[Point], c: Point, tol: Tolerance) -> Option<usize> {
    points.iter().position(|p| p.approx_eq(c, tol))
}

fn next_about(
    r: usize,
    points: &[Point],
    c: Point,
    h: Handedness,
    tol: Tolerance,
) -> Result<usize> {
    if points[r].approx_eq(c, tol) {
        return Err(Error::CentroidQuery);
    }
    let own = points[r].dist(c);
    let mut same_ray: Option<(f64, usize)> = None;
    let mut turn: Option<(f64, f64, usize)> = None;
    for (j, &p) in points.iter().enumerate() {
        if j == r || p.approx_eq(c, tol) {
            continue;
        }
        let pc = polar(p, points[r], c, h, tol)?;
        if tol.is_zero(pc.theta) {
            if pc.d > own + tol.eps && same_ray.is_none_or(|(d, _)| pc.d < d) {
                same_ray = Some((pc.d, j));
            }
            continue;
        }
        let better = match turn {
            None => true,
            Some((theta, d, _)) => match tol.cmp(pc.theta, theta) {
                Ordering::Less => true,
                Ordering::Equal => pc.d < d,
                Ordering::Greater => false,
            },
        };
        if better {
            turn = Some((pc.theta, pc.d, j));
        }
    }
    same_ray
        .map(|(_, j)| j)
        .or(turn.map(|(_, _, j)| j))
        .ok_or_else(|| Error::NotOrderable("no other point off the centroid".into()))
}

/// Successor of `r` in the angular sweep about the centroid.
pub fn next(r: usize, points: &[Point], h: Handedness, tol: Tolerance) -> Result<usize> {
    let c = centroid(points)?;
    next_about(r, points, c, h, tol)
}

/// Chains [`next`] over all points not at `c`, starting from the one nearest
/// to `c` (smallest index on ties).
fn sweep(points: &[Point], c: Point, h: Handedness, tol: Tolerance) -> Result<Vec<usize>> {
    let off: Vec<usize> = (0..points.len())
        .filter(|&i| !points[i].approx_eq(c, tol))
        .collect();
    let Some(&start) = off.iter().min_by(|&&a, &&b| {
        points[a]
            .dist(c)
            .total_cmp(&points[b].dist(c))
            .then(a.cmp(&b))
    }) else {
        return Ok(Vec::new());
    };
    let mut seq = vec![start];
    let mut cur = start;
    for _ in 1..off.len() {
        cur = next_about(cur, points, c, h, tol)?;
        if seq.contains(&cur) {
            return Err(Error::NotOrderable("angular sweep closed early".into()));
        }
        seq.push(cur);
    }
    if off.len() > 1 && next_about(cur, points, c, h, tol)? != start {
        return Err(Error::NotOrderable("angular sweep does not close".into()));
    }
    Ok(seq)
}

type Signature = Vec<(f64, f64)>;

/// Per-point (radius relative to the largest, angle to successor) along a
/// sweep. Invariant under rotation, translation and uniform scaling.
fn signature(
    points: &[Point],
    seq: &[usize],
    c: Point,
    h: Handedness,
    tol: Tolerance,
) -> Result<Signature> {
    let rmax = seq.iter().map(|&i| points[i].dist(c)).fold(0.0, f64::max);
    let m = seq.len();
    seq.iter()
        .enumerate()
        .map(|(k, &i)| {
            let succ = points[seq[(k + 1) % m]];
            let gap = if m == 1 {
                std::f64::consts::TAU
            } else {
                polar(succ, points[i], c, h, tol)?.theta
            };
            Ok((points[i].dist(c) / rmax, gap))
        })
        .collect()
}

fn cmp_rotations(sig: &[(f64, f64)], a: usize, b: usize, tol: Tolerance) -> Ordering {
    let m = sig.len();
    for j in 0..m {
        let (x, y) = (sig[(a + j) % m], sig[(b + j) % m]);
        let o = tol.cmp(x.0, y.0).then(tol.cmp(x.1, y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Start of the lexicographically minimal rotation, if unique.
fn min_rotation(sig: &[(f64, f64)], tol: Tolerance) -> Option<usize> {
    let mut best = 0;
    let mut tied = false;
    for k in 1..sig.len() {
        match cmp_rotations(sig, k, best, tol) {
            Ordering::Less => {
                best = k;
                tied = false;
            }
            Ordering::Equal => tied = true,
            Ordering::Greater => {}
        }
    }
    (!tied).then_some(best)
}

fn rotated(seq: &[usize], start: usize) -> Vec<usize> {
    seq[start..].iter().chain(&seq[..start]).copied().collect()
}

/// A total order every observer agrees on: the sweep of the points off the
/// centroid started at its unique lexicographically minimal signature, then
/// the point at the centroid (if any).
pub fn canonical_total_order(
    points: &[Point],
    h: Handedness,
    tol: Tolerance,
) -> Result<Vec<usize>> {
    let c = centroid(points)?;
    let seq = sweep(points, c, h, tol)?;
    let sig = signature(points, &seq, c, h, tol)?;
    let start = min_rotation(&sig, tol)
        .ok_or_else(|| Error::NotOrderable("configuration is rotationally symmetric".into()))?;
    let mut order = rotated(&seq, start);
    if let Some(i) = occupied_centroid(points, c, tol) {
        order.push(i);
    }
    Ok(order)
}

pub fn order_with_chirality(
    points: &[Point],
    h: Handedness,
    tol: Tolerance,
) -> Result<CyclicOrder> {
    if central_robot(points, tol)?.is_some() {
        return Err(Error::NotOrderable(
            "one robot at the center of a rotationally symmetric configuration".into(),
        ));
    }
    let c = centroid(points)?;
    if occupied_centroid(points, c, tol).is_some() {
        return CyclicOrder::new(canonical_total_order(points, h, tol)?);
    }
    CyclicOrder::new(sweep(points, c, h, tol)?)
}

/// Local handedness label under which every robot ends up turning the same
/// way, for configurations without a mirror axis.
pub fn agree_chirality(points: &[Point], tol: Tolerance) -> Result<Handedness> {
    if !mirror_axes(points, tol)?.is_empty() {
        return Err(Error::MirrorSymmetric);
    }
    let c = centroid(points)?;
    let best = |h: Handedness| -> Result<Signature> {
        let seq = sweep(points, c, h, tol)?;
        let sig = signature(points, &seq, c, h, tol)?;
        let start = (0..sig.len())
            .min_by(|&a, &b| cmp_rotations(&sig, a, b, tol))
            .unwrap_or(0);
        Ok(rotated_sig(&sig, start))
    };
    let (ccw, cw) = (best(Handedness::Ccw)?, best(Handedness::Cw)?);
    match cmp_rotations_pair(&ccw, &cw, tol) {
        Ordering::Less => Ok(Handedness::Ccw),
        Ordering::Greater => Ok(Handedness::Cw),
        Ordering::Equal => Err(Error::MirrorSymmetric),
    }
}

fn rotated_sig(sig: &[(f64, f64)], start: usize) -> Signature {
    sig[start..].iter().chain(&sig[..start]).copied().collect()
}

fn cmp_rotations_pair(a: &[(f64, f64)], b: &[(f64, f64)], tol: Tolerance) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| tol.cmp(x.0, y.0).then(tol.cmp(x.1, y.1)))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Direction of a unique mirror axis, oriented so the sorted
/// (along-axis, distance-from-axis) sequence is lexicographically smaller.
fn oriented_axis(points: &[Point], c: Point, dir: Point, tol: Tolerance) -> Point {
    let seq = |u: Point| {
        let mut v: Vec<(f64, f64)> = points
            .iter()
            .map(|&p| ((p - c).dot(u), u.cross(p - c).abs()))
            .collect();
        v.sort_by(|a, b| tol.cmp(a.0, b.0).then(tol.cmp(a.1, b.1)));
        v
    };
    if cmp_rotations_pair(&seq(-dir), &seq(dir), tol) == Ordering::Less {
        -dir
    } else {
        dir
    }
}

/// Points ordered along an axis through `c` with direction `u`, by
/// (coordinate along the axis, distance from the axis).
pub(crate) fn sort_along_axis(
    points: &[Point],
    members: &mut [usize],
    c: Point,
    u: Point,
    tol: Tolerance,
) {
    let key = |i: usize| ((points[i] - c).dot(u), u.cross(points[i] - c).abs());
    members.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        tol.cmp(ka.0, kb.0).then(tol.cmp(ka.1, kb.1))
    });
}

/// The deterministic orientation of a unique axis, as a unit vector.
pub(crate) fn axis_orientation(points: &[Point], c: Point, dir: Point, tol: Tolerance) -> Point {
    oriented_axis(points, c, dir, tol)
}

pub fn order_without_chirality(points: &[Point], tol: Tolerance) -> Result<CyclicOrder> {
    if central_robot(points, tol)?.is_some() {
        return Err(Error::NotOrderable(
            "one robot at the center of a rotationally symmetric configuration".into(),
        ));
    }
    let axes = mirror_axes(points, tol)?;
    match axes.as_slice() {
        [] => order_with_chirality(points, agree_chirality(points, tol)?, tol),
        [axis] => {
            if points.iter().any(|&p| axis.contains(p, tol)) {
                return Err(Error::NotOrderable("robots lie on the mirror axis".into()));
            }
            let u = oriented_axis(points, axis.point, axis.dir, tol);
            let normal = axis.dir.perp();
            let (mut first, mut second): (Vec<usize>, Vec<usize>) =
                (0..points.len()).partition(|&i| normal.dot(points[i] - axis.point) > 0.0);
            sort_along_axis(points, &mut first, axis.point, u, tol);
            sort_along_axis(points, &mut second, axis.point, u, tol);
            first.extend(second);
            CyclicOrder::new(first)
        }
        _ => Err(Error::NotOrderable(format!("{} mirror axes", axes.len()))),
    }
}

/// Innermost ring about the SEC center, in counter-clockwise angular order.
pub fn inner_polygon(points: &[Point], tol: Tolerance) -> Result<Vec<usize>> {
    inner_polygon_in(points, Handedness::Ccw, tol)
}

/// Innermost ring about the SEC center, sorted by angle in `h`.
pub fn inner_polygon_in(points: &[Point], h: Handedness, tol: Tolerance) -> Result<Vec<usize>> {
    let sec = smallest_enclosing_circle(points, tol)?;
    let decomposition = concentric_decomposition(points, sec.center, tol)?;
    let ring = decomposition
        .rings(tol)
        .first()
        .ok_or(Error::EmptyConfiguration)?;
    let mut members = ring.members.clone();
    let angle = |i: usize| {
        let a = (points[i] - sec.center).angle();
        if h == Handedness::Ccw {
            a
        } else {
            (-a).rem_euclid(std::f64::consts::TAU)
        }
    };
    members.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    Ok(members)
}

/// The vertex of `polygon` first reached when turning from `x_dir` (placed
/// at `center`) in direction `h`. Exact ties go to the smaller index.
pub fn get_vote(
    points: &[Point],
    polygon: &[usize],
    center: Point,
    x_dir: Point,
    h: Handedness,
    tol: Tolerance,
) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for &v in polygon {
        let theta = polar(points[v], center + x_dir, center, h, tol)?.theta;
        let better = match best {
            None => true,
            Some((t, i)) => match tol.cmp(theta, t) {
                Ordering::Less => true,
                Ordering::Equal => v < i,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((theta, v));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::EmptyConfiguration)
}

/// Tallies one vote per robot on the inner polygon.
pub fn tally_votes(
    points: &[Point],
    frame_dirs: &[Point],
    h: Handedness,
    tol: Tolerance,
) -> Result<VoteTally> {
    if frame_dirs.len() != points.len() {
        return Err(Error::InvalidFrame(
            "one frame direction per robot required".into(),
        ));
    }
    let sec = smallest_enclosing_circle(points, tol)?;
    let polygon = inner_polygon_in(points, h, tol)?;
    let mut votes = vec![0; polygon.len()];
    for dir in frame_dirs {
        let v = get_vote(points, &polygon, sec.center, dir.normalized(), h, tol)?;
        let k = polygon
            .iter()
            .position(|&p| p == v)
            .expect("vote is a polygon vertex");
        votes[k] += 1;
    }
    Ok(VoteTally { polygon, votes })
}

/// Start of the lexicographically maximal rotation of `votes`, if unique.
pub fn max_vote_rotation(votes: &[usize]) -> Option<usize> {
    let m = votes.len();
    let read = |s: usize| (0..m).map(move |j| votes[(s + j) % m]);
    let mut best = 0;
    let mut tied = false;
    for s in 1..m {
        match read(s).cmp(read(best)) {
            Ordering::Greater => {
                best = s;
                tied = false;
            }
            Ordering::Equal => tied = true,
            Ordering::Less => {}
        }
    }
    (!tied).then_some(best)
}

/// Leader elected from the votes of all robots' visible frames.
pub fn voting_elect(
    points: &[Point],
    frame_dirs: &[Point],
    h: Handedness,
    tol: Tolerance,
) -> Result<usize> {
    let tally = tally_votes(points, frame_dirs, h, tol)?;
    let start =
        max_vote_rotation(&tally.votes).ok_or_else(|| Error::VoteTie(tally.votes.clone()))?;
    Ok(tally.polygon[start])
}

/// Points sorted by (angle from the leader's ray in `h`, radius) about the
/// SEC center; a point at the center comes last.
pub fn order_from_leader(
    points: &[Point],
    leader: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<CyclicOrder> {
    let sec = smallest_enclosing_circle(points, tol)?;
    order_from_leader_about(points, sec.center, leader, h, tol)
}

pub(crate) fn order_from_leader_about(
    points: &[Point],
    center: Point,
    leader: usize,
    h: Handedness,
    tol: Tolerance,
) -> Result<CyclicOrder> {
    let lp = *points.get(leader).ok_or(Error::InvalidLeader(leader))?;
    if lp.approx_eq(center, tol) {
        return Err(Error::InvalidLeader(leader));
    }
    let mut keyed = Vec::with_capacity(points.len());
    let mut at_center = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        if p.approx_eq(center, tol) {
            at_center.push(i);
        } else {
            let pc = polar(p, lp, center, h, tol)?;
            keyed.push((pc.theta, pc.d, i));
        }
    }
    keyed.sort_by(|a, b| {
        tol.cmp(a.0, b.0)
            .then(tol.cmp(a.1, b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut seq: Vec<usize> = keyed.into_iter().map(|(_, _, i)| i).collect();
    seq.extend(at_center);
    CyclicOrder::new(seq)
}
