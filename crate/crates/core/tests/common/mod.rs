//! Configuration generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robot_permute::engine::Frame;
use robot_permute::{Point, Tolerance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerance {
    Tolerance::default()
}

fn far_from_all(points: &[Point], p: Point, gap: f64) -> bool {
    points.iter().all(|q| q.dist(p) >= gap)
}

/// `n` uniform points in `[-10, 10]²`, pairwise at least 0.05 apart.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if far_from_all(&points, p, 0.05) {
            points.push(p);
        }
    }
    points
}

/// Random points plus one more at their centroid.
pub fn random_with_centroid_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    loop {
        let mut points = random_points(rng, n - 1);
        let c = points.iter().fold(Point::ORIGIN, |a, &p| a + p) * (1.0 / (n - 1) as f64);
        if far_from_all(&points, c, 0.05) {
            points.push(c);
            return points;
        }
    }
}

pub fn random_frame(rng: &mut ChaCha8Rng, allow_mirror: bool) -> Frame {
    Frame {
        rotation: rng.gen_range(0.0..TAU),
        mirror: allow_mirror && rng.gen_bool(0.5),
        scale: rng.gen_range(0.5..3.0),
    }
}

pub fn random_frames(rng: &mut ChaCha8Rng, n: usize, allow_mirror: bool) -> Vec<Frame> {
    (0..n).map(|_| random_frame(rng, allow_mirror)).collect()
}

pub fn orbit(center: Point, k: usize, radius: f64, phase: f64) -> Vec<Point> {
    (0..k)
        .map(|j| center + Point::from_angle(phase + TAU * j as f64 / k as f64) * radius)
        .collect()
}

/// Shuffles point order so that generators carry no index structure.
pub fn shuffled(rng: &mut ChaCha8Rng, mut points: Vec<Point>) -> Vec<Point> {
    points.shuffle(rng);
    points
}

fn random_center(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

/// Distinct radii in `[1, 8]` at least 0.3 apart.
fn radii(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    while out.len() < count {
        let r: f64 = rng.gen_range(1.0..8.0);
        if out.iter().all(|&q| (q - r).abs() >= 0.3) {
            out.push(r);
        }
    }
    out
}

/// Phase in `[lo, hi]` of the `1/k` wedge, staying clear of the mirror
/// positions `0` and `π/k`.
fn generic_phase(rng: &mut ChaCha8Rng, k: usize) -> f64 {
    let wedge = PI / k as f64;
    rng.gen_range(0.15 * wedge..0.85 * wedge)
}

/// `orbits` chiral `k`-orbits about a common center, optionally with a robot
/// at the center. Rotational order `k`, no mirror axis (for `orbits ≥ 2`
/// with generic phases).
pub fn chiral_symmetric(rng: &mut ChaCha8Rng, k: usize, orbits: usize, center: bool) -> Vec<Point> {
    let o = random_center(rng);
    let mut points = Vec::new();
    let rs = radii(rng, orbits);
    let base = rng.gen_range(0.0..TAU);
    for (j, &r) in rs.iter().enumerate() {
        let phase = if j == 0 {
            0.0
        } else {
            generic_phase(rng, k) + (j as f64) * 0.01
        };
        points.extend(orbit(o, k, r, base + phase));
    }
    if center {
        points.push(o);
    }
    shuffled(rng, points)
}

/// A robot at the center of `(n-1)/k` rotationally symmetric `k`-orbits,
/// with `k ≥ 2` drawn from the divisors of `n - 1`. Some orbits share a
/// radius.
pub fn c_odot(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    assert!(n >= 3);
    let ks: Vec<usize> = (2..n).filter(|k| (n - 1).is_multiple_of(*k)).collect();
    let k = *ks.choose(rng).expect("n - 1 ≥ 2 has a divisor ≥ 2");
    c_odot_with(rng, k, (n - 1) / k)
}

pub fn c_odot_with(rng: &mut ChaCha8Rng, k: usize, orbits: usize) -> Vec<Point> {
    let o = random_center(rng);
    let scale = rng.gen_range(0.5..2.0);
    let rs = radii(rng, orbits);
    let base = rng.gen_range(0.0..TAU);
    let wedge = TAU / k as f64;
    let mut placed: Vec<(f64, f64)> = Vec::new();
    let mut points = vec![o];
    for (j, &fresh) in rs.iter().enumerate() {
        // Reuse an earlier radius now and then, at a phase well apart from
        // the orbits already on it.
        let share = j > 0 && rng.gen_bool(0.3);
        let r = if share {
            placed[rng.gen_range(0..placed.len())].0
        } else {
            fresh
        };
        let phase = loop {
            let t = rng.gen_range(0.0..wedge);
            let clear = placed.iter().filter(|(q, _)| *q == r).all(|&(_, s)| {
                let d = (t - s).rem_euclid(wedge);
                d.min(wedge - d) >= 0.08 * wedge
            });
            if clear {
                break t;
            }
        };
        placed.push((r, phase));
        points.extend(orbit(o, k, r * scale, base + phase));
    }
    shuffled(rng, points)
}

/// `k`-fold dihedral configuration: `generic` orbits of size `2k` off the
/// axes and `on_axes` orbits of size `k` on them, plus an optional center.
pub fn dihedral(
    rng: &mut ChaCha8Rng,
    k: usize,
    generic: usize,
    on_axes: usize,
    center: bool,
) -> Vec<Point> {
    let o = random_center(rng);
    let base = rng.gen_range(0.0..TAU);
    let rs = radii(rng, generic + on_axes);
    let mut points = Vec::new();
    for &r in &rs[..generic] {
        let t = generic_phase(rng, k);
        points.extend(orbit(o, k, r, base + t));
        points.extend(orbit(o, k, r, base - t));
    }
    for (j, &r) in rs[generic..].iter().enumerate() {
        // Alternate between the two kinds of axis position for even k.
        let offset = if j % 2 == 1 { PI / k as f64 } else { 0.0 };
        points.extend(orbit(o, k, r, base + offset));
    }
    if center {
        points.push(o);
    }
    shuffled(rng, points)
}

/// Mirror pairs across one random line, no robot on it. Generic pairs leave
/// that line as the only axis.
pub fn unique_empty_axis(rng: &mut ChaCha8Rng, pairs: usize) -> Vec<Point> {
    let o = random_center(rng);
    let dir = Point::from_angle(rng.gen_range(0.0..PI));
    let normal = dir.perp();
    let mut half: Vec<Point> = Vec::new();
    while half.len() < pairs {
        let p = o + dir * rng.gen_range(-8.0..8.0) + normal * rng.gen_range(0.2..8.0);
        let image = p.reflected(o, dir);
        if far_from_all(&half, p, 0.1) && far_from_all(&half, image, 0.1) {
            half.push(p);
        }
    }
    let mut points = half.clone();
    points.extend(half.iter().map(|&p| p.reflected(o, dir)));
    shuffled(rng, points)
}

/// Configuration with point symmetry about its centroid and no central
/// robot.
pub fn centrally_symmetric(rng: &mut ChaCha8Rng, pairs: usize) -> Vec<Point> {
    let o = random_center(rng);
    let mut half: Vec<Point> = Vec::new();
    while half.len() < pairs {
        let v = Point::from_angle(rng.gen_range(0.0..TAU)) * rng.gen_range(0.5..8.0);
        let clear = half
            .iter()
            .all(|&w| w.dist(v) >= 0.1 && w.dist(v * -1.0) >= 0.1);
        if clear {
            half.push(v);
        }
    }
    let mut points: Vec<Point> = half.iter().map(|&v| o + v).collect();
    points.extend(half.iter().map(|&v| o - v));
    shuffled(rng, points)
}

/// Smallest circle through two or three of the points that contains all of
/// them, by exhaustive search.
pub fn brute_force_sec(points: &[Point]) -> (Point, f64) {
    if points.len() == 1 {
        return (points[0], 0.0);
    }
    let contains = |c: Point, r: f64| {
        points
            .iter()
            .all(|p| p.dist(c) <= r * (1.0 + 1e-12) + 1e-12)
    };
    let mut best: Option<(Point, f64)> = None;
    let mut offer = |c: Point, r: f64| {
        if contains(c, r) && best.is_none_or(|(_, b)| r < b) {
            best = Some((c, r));
        }
    };
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = (points[i] + points[j]) * 0.5;
            offer(c, c.dist(points[i]));
            for l in j + 1..n {
                let (a, b, d) = (points[i], points[j], points[l]);
                let den = 2.0 * (a.x * (b.y - d.y) + b.x * (d.y - a.y) + d.x * (a.y - b.y));
                if den.abs() < 1e-14 {
                    continue;
                }
                let sq = |p: Point| p.x * p.x + p.y * p.y;
                let ux = (sq(a) * (b.y - d.y) + sq(b) * (d.y - a.y) + sq(d) * (a.y - b.y)) / den;
                let uy = (sq(a) * (d.x - b.x) + sq(b) * (a.x - d.x) + sq(d) * (b.x - a.x)) / den;
                let c = Point::new(ux, uy);
                offer(c, c.dist(a));
            }
        }
    }
    best.expect("some pair circle contains every point")
}

fn mean(points: &[Point]) -> Point {
    points.iter().fold(Point::ORIGIN, |a, &p| a + p) * (1.0 / points.len() as f64)
}

/// Set equality up to `eps`, by greedy matching.
pub fn same_set(a: &[Point], b: &[Point], eps: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(
        |p| match (0..b.len()).find(|&j| !used[j] && p.dist(b[j]) <= eps) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        },
    )
}

/// Largest `k` such that rotating about the centroid by `2π/k` maps the
/// configuration onto itself.
pub fn brute_force_rotational_order(points: &[Point], eps: f64) -> usize {
    let c = mean(points);
    (1..=points.len())
        .rev()
        .find(|&k| {
            let turned: Vec<Point> = points
                .iter()
                .map(|&p| c + (p - c).rotated(TAU / k as f64))
                .collect();
            same_set(points, &turned, eps)
        })
        .unwrap_or(1)
}

/// Angles in `[0, π)` of every line through the centroid that reflects the
/// configuration onto itself, found by trying every bisector of two points.
pub fn brute_force_mirror_axes(points: &[Point], eps: f64) -> Vec<f64> {
    let c = mean(points);
    let dirs: Vec<f64> = points
        .iter()
        .filter(|p| p.dist(c) > eps)
        .map(|&p| (p - c).angle())
        .collect();
    let mut candidates: Vec<f64> = Vec::new();
    for &a in &dirs {
        for &b in &dirs {
            candidates.push(((a + b) / 2.0).rem_euclid(PI));
            candidates.push(((a + b) / 2.0 + PI / 2.0).rem_euclid(PI));
        }
    }
    if dirs.is_empty() {
        candidates.push(0.0);
    }
    let mut axes: Vec<f64> = Vec::new();
    for theta in candidates {
        let dir = Point::from_angle(theta);
        let image: Vec<Point> = points.iter().map(|&p| p.reflected(c, dir)).collect();
        let duplicate = axes.iter().any(|&t| {
            let d = (t - theta).rem_euclid(PI);
            d.min(PI - d) < 1e-6
        });
        if !duplicate && same_set(points, &image, eps) {
            axes.push(theta);
        }
    }
    axes.sort_by(f64::total_cmp);
    axes
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
