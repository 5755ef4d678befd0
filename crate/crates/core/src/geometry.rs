//! Planar primitives shared by the rest of the crate.
//!
//! Every equality or membership test goes through a single [`Tolerance`]
//! value that callers thread explicitly.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta` (counter-clockwise from +x).
    pub fn from_angle(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Angle of the vector in `[0, 2π)`, counter-clockwise from +x.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn rotated_about(self, center: Point, theta: f64) -> Point {
        center + (self - center).rotated(theta)
    }

    /// Perpendicular vector (rotated by +π/2).
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Mirror image across the line through `on_line` with direction `dir`.
    pub fn reflected(self, on_line: Point, dir: Point) -> Point {
        let u = dir.normalized();
        let v = self - on_line;
        let along = u * v.dot(u);
        on_line + along * 2.0 - v
    }

    pub fn approx_eq(self, o: Point, tol: Tolerance) -> bool {
        self.dist(o) <= tol.eps
    }

    /// Lexicographic order on (x, y).
    pub fn lex_cmp(&self, o: &Point) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Absolute comparison tolerance used by every predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0 && eps.is_finite(), "tolerance must be positive");
        Tolerance { eps }
    }

    pub fn eq(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }

    pub fn is_zero(self, a: f64) -> bool {
        a.abs() <= self.eps
    }

    /// Three-way comparison that treats values within eps as equal.
    pub fn cmp(self, a: f64, b: f64) -> Ordering {
        if self.eq(a, b) {
            Ordering::Equal
        } else {
            a.total_cmp(&b)
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(Self::DEFAULT_EPS)
    }
}

/// The rotational sense in which angles grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    #[default]
    Ccw,
    Cw,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Ccw => 1.0,
            Handedness::Cw => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Handedness::Ccw => Handedness::Cw,
            Handedness::Cw => Handedness::Ccw,
        }
    }
}

impl std::str::FromStr for Handedness {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ccw" => Ok(Handedness::Ccw),
            "cw" => Ok(Handedness::Cw),
            other => Err(format!("unknown handedness {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point, tol: Tolerance) -> bool {
        p.dist(self.center) <= self.radius + tol.eps
    }

    fn diameter(a: Point, b: Point) -> Circle {
        let center = (a + b) * 0.5;
        Circle {
            center,
            radius: center.dist(a).max(center.dist(b)),
        }
    }

    /// Circle through three points, `None` when they are collinear.
    pub fn circumscribed(a: Point, b: Point, c: Point) -> Option<Circle> {
        let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
        let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
        let (ax, ay) = (a.x - ox, a.y - oy);
        let (bx, by) = (b.x - ox, b.y - oy);
        let (cx, cy) = (c.x - ox, c.y - oy);
        let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
        if d == 0.0 {
            return None;
        }
        let x = ((ax * ax + ay * ay) * (by - cy)
            + (bx * bx + by * by) * (cy - ay)
            + (cx * cx + cy * cy) * (ay - by))
            / d;
        let y = ((ax * ax + ay * ay) * (cx - bx)
            + (bx * bx + by * by) * (ax - cx)
            + (cx * cx + cy * cy) * (bx - ax))
            / d;
        let center = Point::new(ox + x, oy + y);
        let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
        Some(Circle { center, radius })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCoord {
    pub d: f64,
    pub theta: f64,
}

/// Maps any angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

pub fn centroid(points: &[Point]) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let n = points.len() as f64;
    let sum = points.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
    Ok(sum * (1.0 / n))
}

/// Minimum enclosing circle.
///
/// Points are sorted by (x, y) before the incremental pass, so the result
/// does not depend on input order.
pub fn smallest_enclosing_circle(points: &[Point], tol: Tolerance) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut pts = points.to_vec();
    pts.sort_by(Point::lex_cmp);
    // Containment during construction is checked with a relative slack far
    // below eps so boundary points are not re-added forever.
    let inner = Tolerance::new(tol.eps * 1e-3);
    let mut circle: Option<Circle> = None;
    for (i, &p) in pts.iter().enumerate() {
        if circle.is_none_or(|c| !c.contains(p, inner)) {
            circle = Some(circle_with_one(&pts[..i], p, inner));
        }
    }
    Ok(circle.expect("non-empty input"))
}

fn circle_with_one(pts: &[Point], p: Point, tol: Tolerance) -> Circle {
    let mut c = Circle {
        center: p,
        radius: 0.0,
    };
    for (j, &q) in pts.iter().enumerate() {
        if !c.contains(q, tol) {
            c = if c.radius == 0.0 {
                Circle::diameter(p, q)
            } else {
                circle_with_two(&pts[..j], p, q, tol)
            };
        }
    }
    c
}

fn circle_with_two(pts: &[Point], p: Point, q: Point, tol: Tolerance) -> Circle {
    let base = Circle::diameter(p, q);
    let pq = q - p;
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    for &r in pts {
        if base.contains(r, tol) {
            continue;
        }
        let cross = pq.cross(r - p);
        let Some(c) = Circle::circumscribed(p, q, r) else {
            continue;
        };
        if cross > 0.0 {
            if left.is_none_or(|l| pq.cross(c.center - p) > pq.cross(l.center - p)) {
                left = Some(c);
            }
        } else if cross < 0.0
            && right.is_none_or(|rc| pq.cross(c.center - p) < pq.cross(rc.center - p))
        {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

/// Polar coordinates of `p` around pole `c`, with the ray `c → reference`
/// as angle zero and angles growing in the given handedness.
///
/// The pole itself maps to `(0, 0)`. Angles within eps of a full turn are
/// reported as zero.
pub fn polar(
    p: Point,
    reference: Point,
    c: Point,
    handedness: Handedness,
    tol: Tolerance,
) -> Result<PolarCoord> {
    let r = reference - c;
    if r.norm() <= tol.eps {
        return Err(Error::DegenerateReference);
    }
    let v = p - c;
    let d = v.norm();
    if d <= tol.eps {
        return Ok(PolarCoord { d, theta: 0.0 });
    }
    let raw = r.cross(v).atan2(r.dot(v)) * handedness.sign();
    let mut theta = normalize_angle(raw);
    if TAU - theta <= tol.eps {
        theta = 0.0;
    }
    Ok(PolarCoord { d, theta })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub radius: f64,
    pub members: Vec<usize>,
}

/// Points grouped by distance to a fixed center, innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentricDecomposition {
    pub center: Point,
    pub layers: Vec<Layer>,
}

impl ConcentricDecomposition {
    /// Whether the innermost layer is the degenerate one at the center.
    pub fn has_center_layer(&self, tol: Tolerance) -> bool {
        self.layers.first().is_some_and(|l| tol.is_zero(l.radius))
    }

    /// Layers with positive radius.
    pub fn rings(&self, tol: Tolerance) -> &[Layer] {
        if self.has_center_layer(tol) {
            &self.layers[1..]
        } else {
            &self.layers
        }
    }

    pub fn layer_of(&self, index: usize) -> Option<usize> {
        self.layers.iter().position(|l| l.members.contains(&index))
    }
}

pub fn concentric_decomposition(
    points: &[Point],
    center: Point,
    tol: Tolerance,
) -> Result<ConcentricDecomposition> {
    if !center.is_finite() {
        return Err(Error::InvalidFrame("non-finite center".into()));
    }
    let mut by_dist: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.dist(center), i))
        .collect();
    by_dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut layers: Vec<Layer> = Vec::new();
    let mut span_start = 0.0;
    let mut last = f64::NEG_INFINITY;
    for (d, i) in by_dist {
        if d - last <= tol.eps {
            if d - span_start > tol.eps {
                return Err(Error::AmbiguousLayering {
                    low: span_start,
                    high: d,
                });
            }
            let layer = layers.last_mut().expect("chained onto an existing layer");
            layer.members.push(i);
        } else {
            span_start = d;
            layers.push(Layer {
                radius: d,
                members: vec![i],
            });
        }
        last = d;
    }
    for layer in &mut layers {
        let sum: f64 = layer.members.iter().map(|&i| points[i].dist(center)).sum();
        layer.radius = sum / layer.members.len() as f64;
        if layer.radius <= tol.eps {
            layer.radius = 0.0;
        }
    }
    Ok(ConcentricDecomposition { center, layers })
}

/// Mirror (across the x-axis), then rotate, then scale, then translate.
pub fn transform(
    p: Point,
    rotation: f64,
    mirror: bool,
    scale: f64,
    translate: Point,
) -> Result<Point> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidFrame(format!(
            "scale {scale} is not positive"
        )));
    }
    let m = if mirror { Point::new(p.x, -p.y) } else { p };
    Ok(m.rotated(rotation) * scale + translate)
}

/// Exact inverse of [`transform`] with the same parameters.
pub fn inverse_transform(
    p: Point,
    rotation: f64,
    mirror: bool,
    scale: f64,
    translate: Point,
) -> Result<Point> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidFrame(format!(
            "scale {scale} is not positive"
        )));
    }
    let q = ((p - translate) * (1.0 / scale)).rotated(-rotation);
    Ok(if mirror { Point::new(q.x, -q.y) } else { q })
}

/// First pair of indices closer than eps, if any.
pub fn find_duplicate(points: &[Point], tol: Tolerance) -> Option<(usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].approx_eq(points[j], tol) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether `b` is a re-ordering of `a` (as point sets, within eps).
///
/// Assumes the points of `a` are pairwise farther apart than eps.
pub fn same_point_set(a: &[Point], b: &[Point], tol: Tolerance) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; a.len()];
    'outer: for q in b {
        for (j, p) in a.iter().enumerate() {
            if !used[j] && p.approx_eq(*q, tol) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Index of the point within eps of `q`, if any.
pub fn locate(points: &[Point], q: Point, tol: Tolerance) -> Option<usize> {
    points.iter().position(|p| p.approx_eq(q, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn centroid_examples() {
        let sq = pts(&[(0., 0.), (2., 0.), (2., 2.), (0., 2.)]);
        assert_eq!(centroid(&sq).unwrap(), Point::new(1.0, 1.0));
        assert_eq!(centroid(&pts(&[(5., -3.)])).unwrap(), Point::new(5.0, -3.0));
        assert_eq!(
            centroid(&pts(&[(0., 0.), (3., 0.)])).unwrap(),
            Point::new(1.5, 0.0)
        );
        assert_eq!(centroid(&[]), Err(Error::EmptyConfiguration));
    }

    #[test]
    fn sec_examples() {
        let c = smallest_enclosing_circle(&pts(&[(0., 0.), (2., 0.), (2., 2.), (0., 2.)]), tol())
            .unwrap();
        assert!(c.center.approx_eq(Point::new(1.0, 1.0), tol()));
        assert!(tol().eq(c.radius, SQRT_2));

        let c = smallest_enclosing_circle(&pts(&[(0., 0.), (1., 0.), (4., 0.)]), tol()).unwrap();
        assert!(c.center.approx_eq(Point::new(2.0, 0.0), tol()));
        assert!(tol().eq(c.radius, 2.0));

        let single = smallest_enclosing_circle(&pts(&[(3., 4.)]), tol()).unwrap();
        assert_eq!(single.radius, 0.0);
        assert_eq!(
            smallest_enclosing_circle(&[], tol()),
            Err(Error::EmptyConfiguration)
        );
    }

    #[test]
    fn polar_examples() {
        let o = Point::ORIGIN;
        let p = polar(
            Point::new(0., 2.),
            Point::new(2., 0.),
            o,
            Handedness::Ccw,
            tol(),
        )
        .unwrap();
        assert!(tol().eq(p.d, 2.0) && tol().eq(p.theta, FRAC_PI_2));

        let r = Point::new(3., 1.);
        let p = polar(r, r, Point::new(1., 1.), Handedness::Ccw, tol()).unwrap();
        assert!(tol().eq(p.d, 2.0) && p.theta == 0.0);

        let p = polar(
            Point::new(-1., 0.),
            Point::new(1., 0.),
            o,
            Handedness::Cw,
            tol(),
        )
        .unwrap();
        assert!(tol().eq(p.d, 1.0) && tol().eq(p.theta, PI));

        let pole = polar(o, Point::new(1., 0.), o, Handedness::Ccw, tol()).unwrap();
        assert_eq!(pole, PolarCoord { d: 0.0, theta: 0.0 });

        assert_eq!(
            polar(o, o, o, Handedness::Ccw, tol()),
            Err(Error::DegenerateReference)
        );
    }

    #[test]
    fn decomposition_examples() {
        let c = pts(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.), (0., 0.)]);
        let d = concentric_decomposition(&c, Point::ORIGIN, tol()).unwrap();
        assert_eq!(d.layers.len(), 2);
        assert_eq!(d.layers[0].members, vec![4]);
        assert_eq!(d.layers[0].radius, 0.0);
        assert!(tol().eq(d.layers[1].radius, SQRT_2));
        assert_eq!(d.layers[1].members.len(), 4);

        let mut two = c.clone();
        two.extend(pts(&[(2., 2.), (-2., 2.), (-2., -2.), (2., -2.)]));
        let d = concentric_decomposition(&two, Point::ORIGIN, tol()).unwrap();
        assert_eq!(d.layers.len(), 3);
    }

    #[test]
    fn decomposition_rejects_chained_radii() {
        let eps = tol().eps;
        let c = pts(&[(1.0, 0.0), (0.0, 1.0 + 0.8 * eps), (-1.0 - 1.6 * eps, 0.0)]);
        assert!(matches!(
            concentric_decomposition(&c, Point::ORIGIN, tol()),
            Err(Error::AmbiguousLayering { .. })
        ));
    }

    #[test]
    fn transform_examples() {
        let p = Point::new(0.3, -1.7);
        assert_eq!(transform(p, 0.0, false, 1.0, Point::ORIGIN).unwrap(), p);
        let q = transform(Point::new(1., 0.), FRAC_PI_2, false, 1.0, Point::ORIGIN).unwrap();
        assert!(q.approx_eq(Point::new(0., 1.), tol()));
        assert!(matches!(
            transform(p, 0.0, false, 0.0, Point::ORIGIN),
            Err(Error::InvalidFrame(_))
        ));
    }

    #[test]
    fn reflection_across_diagonal() {
        let p = Point::new(1.0, 0.0).reflected(Point::ORIGIN, Point::new(1.0, 1.0));
        assert!(p.approx_eq(Point::new(0.0, 1.0), tol()));
    }
}
