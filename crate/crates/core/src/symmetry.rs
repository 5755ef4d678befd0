//! Rotational and mirror symmetry of point configurations, symmetricity,
//! and the solvability classes built on top of them.

use std::f64::consts::{PI, TAU};

use crate::engine::{to_local_snapshot, Chirality, Frame};
use crate::error::{Error, Result};
use crate::geometry::{
    centroid, concentric_decomposition, find_duplicate, same_point_set, smallest_enclosing_circle,
    ConcentricDecomposition, Point, Tolerance,
};

/// A line through the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub point: Point,
    /// Unit direction with angle in `[0, π)`.
    pub dir: Point,
    pub angle: f64,
}

impl Axis {
    fn through(point: Point, angle: f64) -> Self {
        let angle = angle.rem_euclid(PI);
        Axis {
            point,
            dir: Point::from_angle(angle),
            angle,
        }
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.dir.cross(p - self.point).abs()
    }

    pub fn contains(&self, p: Point, tol: Tolerance) -> bool {
        self.distance(p) <= tol.eps
    }

    pub fn reflect(&self, p: Point) -> Point {
        p.reflected(self.point, self.dir)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub rho: usize,
    pub rotational_order: usize,
    pub mirror_axes: Vec<Axis>,
    pub robot_counts_on_axes: Vec<usize>,
    pub has_central_robot: bool,
    pub is_central_symmetric: bool,
}

/// Solvability-relevant predicates of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigClass {
    /// One robot at the SEC center whose removal leaves a rotationally
    /// symmetric configuration.
    pub in_c_dot: bool,
    /// Symmetricity of the configuration without the central robot.
    pub k_without_center: usize,
    pub central_robot: Option<usize>,
    pub axis_with_single_robot: bool,
    pub unique_axis_no_robots: bool,
    pub axis_count: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Angular gaps between consecutive members of one ring, sorted by angle.
fn ring_gaps(points: &[Point], members: &[usize], center: Point) -> Vec<f64> {
    let mut angles: Vec<f64> = members
        .iter()
        .map(|&i| (points[i] - center).angle())
        .collect();
    angles.sort_by(f64::total_cmp);
    let m = angles.len();
    (0..m)
        .map(|i| {
            let next = if i + 1 == m {
                angles[0] + TAU
            } else {
                angles[i + 1]
            };
            next - angles[i]
        })
        .collect()
}

/// Largest k such that the cyclic gap sequence is invariant under a shift of
/// `m / k` positions.
fn ring_order(gaps: &[f64], angle_tol: f64) -> usize {
    let m = gaps.len();
    (1..=m)
        .rev()
        .filter(|k| m.is_multiple_of(*k))
        .find(|&k| {
            let shift = m / k;
            (0..m).all(|i| (gaps[i] - gaps[(i + shift) % m]).abs() <= angle_tol)
        })
        .unwrap_or(1)
}

fn rotational_order_about(
    points: &[Point],
    decomposition: &ConcentricDecomposition,
    tol: Tolerance,
) -> usize {
    let rings = decomposition.rings(tol);
    if rings.is_empty() {
        return 1;
    }
    rings.iter().fold(0, |acc, ring| {
        let gaps = ring_gaps(points, &ring.members, decomposition.center);
        gcd(acc, ring_order(&gaps, 2.0 * tol.eps / ring.radius))
    })
}

/// Order of the rotation group of `points` about their centroid.
pub fn rotational_order(points: &[Point], tol: Tolerance) -> Result<usize> {
    let c = centroid(points)?;
    let decomposition = concentric_decomposition(points, c, tol)?;
    Ok(rotational_order_about(points, &decomposition, tol))
}

/// All mirror axes through the centroid, sorted by angle in `[0, π)`.
///
/// Candidates come from the innermost non-degenerate ring: rays through its
/// members and bisectors of cyclically adjacent members.
pub fn mirror_axes(points: &[Point], tol: Tolerance) -> Result<Vec<Axis>> {
    let c = centroid(points)?;
    let decomposition = concentric_decomposition(points, c, tol)?;
    let Some(ring) = decomposition.rings(tol).first() else {
        return Ok(Vec::new());
    };
    let mut angles: Vec<f64> = ring
        .members
        .iter()
        .map(|&i| (points[i] - c).angle())
        .collect();
    angles.sort_by(f64::total_cmp);
    let m = angles.len();
    let mut candidates = Vec::with_capacity(2 * m);
    for i in 0..m {
        let next = if i + 1 == m {
            angles[0] + TAU
        } else {
            angles[i + 1]
        };
        candidates.push(angles[i].rem_euclid(PI));
        candidates.push(((angles[i] + next) / 2.0).rem_euclid(PI));
    }
    candidates.sort_by(f64::total_cmp);

    let angle_tol = tol.eps / ring.radius;
    let mut axes: Vec<Axis> = Vec::new();
    for theta in candidates {
        let dup = axes.iter().any(|a| {
            let d = (a.angle - theta).abs();
            d <= angle_tol || PI - d <= angle_tol
        });
        if dup {
            continue;
        }
        let axis = Axis::through(c, theta);
        let reflected: Vec<Point> = points.iter().map(|&p| axis.reflect(p)).collect();
        if same_point_set(points, &reflected, tol) {
            axes.push(axis);
        }
    }
    axes.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(axes)
}

fn check_distinct(points: &[Point], tol: Tolerance) -> Result<()> {
    match find_duplicate(points, tol) {
        Some((i, j)) => Err(Error::DuplicatePoints(i, j)),
        None => Ok(()),
    }
}

/// 1 when a robot sits on the centroid, otherwise the rotational order.
pub fn symmetricity_rho(points: &[Point], tol: Tolerance) -> Result<usize> {
    check_distinct(points, tol)?;
    let c = centroid(points)?;
    if points.iter().any(|p| p.approx_eq(c, tol)) {
        return Ok(1);
    }
    rotational_order(points, tol)
}

pub fn symmetry_report(points: &[Point], tol: Tolerance) -> Result<SymmetryReport> {
    check_distinct(points, tol)?;
    let c = centroid(points)?;
    let rotational_order = rotational_order(points, tol)?;
    let mirror_axes = mirror_axes(points, tol)?;
    let robot_counts_on_axes = mirror_axes
        .iter()
        .map(|a| points.iter().filter(|&&p| a.contains(p, tol)).count())
        .collect();
    let has_central_robot = points.iter().any(|p| p.approx_eq(c, tol));
    Ok(SymmetryReport {
        rho: if has_central_robot {
            1
        } else {
            rotational_order
        },
        rotational_order,
        mirror_axes,
        robot_counts_on_axes,
        has_central_robot,
        is_central_symmetric: rotational_order % 2 == 0,
    })
}

/// Index of the central robot when the configuration belongs to the
/// central-symmetric class, together with the symmetricity of the rest.
///
/// Cheaper than [`classify`]: no axis search.
pub fn central_robot(points: &[Point], tol: Tolerance) -> Result<Option<(usize, usize)>> {
    if points.len() < 2 {
        return Ok(None);
    }
    let sec = smallest_enclosing_circle(points, tol)?;
    let mut at_center = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.approx_eq(sec.center, tol))
        .map(|(i, _)| i);
    let (Some(rc), None) = (at_center.next(), at_center.next()) else {
        return Ok(None);
    };
    let rest: Vec<Point> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != rc)
        .map(|(_, &p)| p)
        .collect();
    let k = symmetricity_rho(&rest, tol)?;
    Ok((k > 1).then_some((rc, k)))
}

pub fn in_c_dot(points: &[Point], tol: Tolerance) -> Result<bool> {
    Ok(central_robot(points, tol)?.is_some())
}

pub fn classify(points: &[Point], tol: Tolerance) -> Result<ConfigClass> {
    check_distinct(points, tol)?;
    let central = central_robot(points, tol)?;
    let report = symmetry_report(points, tol)?;
    let counts = &report.robot_counts_on_axes;
    Ok(ConfigClass {
        in_c_dot: central.is_some(),
        k_without_center: central.map_or(1, |(_, k)| k),
        central_robot: central.map(|(i, _)| i),
        axis_with_single_robot: counts.contains(&1),
        unique_axis_no_robots: counts.len() == 1 && counts[0] == 0,
        axis_count: counts.len(),
    })
}

/// Whether two observer-centred snapshots coincide up to rotation, uniform
/// scale and (optionally) reflection.
pub fn same_view(a: &[Point], b: &[Point], allow_mirror: bool, tol: Tolerance) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let unit = |v: &[Point]| -> Option<Vec<Point>> {
        let s = v.iter().map(|p| p.norm()).fold(0.0, f64::max);
        (s > 0.0).then(|| v.iter().map(|&p| p * (1.0 / s)).collect())
    };
    let (Some(a), Some(b)) = (unit(a), unit(b)) else {
        return a.len() == b.len();
    };
    let mirrored: Vec<Point> = a.iter().map(|p| Point::new(p.x, -p.y)).collect();
    let variants: Vec<&Vec<Point>> = if allow_mirror {
        vec![&a, &mirrored]
    } else {
        vec![&a]
    };
    for va in variants {
        let anchor = *va
            .iter()
            .find(|p| tol.eq(p.norm(), 1.0))
            .expect("normalised");
        for fb in b.iter().filter(|p| tol.eq(p.norm(), 1.0)) {
            let theta = fb.angle() - anchor.angle();
            let rotated: Vec<Point> = va.iter().map(|p| p.rotated(theta)).collect();
            if same_point_set(&rotated, &b, tol) {
                return true;
            }
        }
    }
    false
}

/// Partition of robot indices into classes of equal views.
///
/// Classes are ordered by their smallest member. The largest class size is
/// the symmetricity of `(points, frames)`.
pub fn view_classes(
    points: &[Point],
    frames: &[Frame],
    chirality: Chirality,
    tol: Tolerance,
) -> Result<Vec<Vec<usize>>> {
    let snapshots = (0..points.len())
        .map(|i| to_local_snapshot(points, frames, i, false).map(|s| s.points))
        .collect::<Result<Vec<_>>>()?;
    let allow_mirror = chirality == Chirality::Absent;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, snap) in snapshots.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|cls| same_view(&snapshots[cls[0]], snap, allow_mirror, tol))
        {
            Some(cls) => cls.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn regular(n: usize, r: f64, phase: f64) -> Vec<Point> {
        (0..n)
            .map(|j| Point::from_angle(phase + TAU * j as f64 / n as f64) * r)
            .collect()
    }

    fn square() -> Vec<Point> {
        vec![
            Point::new(1., 1.),
            Point::new(-1., 1.),
            Point::new(-1., -1.),
            Point::new(1., -1.),
        ]
    }

    #[test]
    fn rotational_order_examples() {
        assert_eq!(rotational_order(&square(), tol()).unwrap(), 4);
        assert_eq!(rotational_order(&regular(7, 2.0, 0.3), tol()).unwrap(), 7);
        let scalene = vec![Point::new(0., 0.), Point::new(4., 0.), Point::new(1., 2.)];
        assert_eq!(rotational_order(&scalene, tol()).unwrap(), 1);
    }

    #[test]
    fn mirror_axes_examples() {
        assert_eq!(mirror_axes(&square(), tol()).unwrap().len(), 4);
        let scalene = vec![Point::new(0., 0.), Point::new(4., 0.), Point::new(1., 2.)];
        assert!(mirror_axes(&scalene, tol()).unwrap().is_empty());
        let iso = vec![Point::new(-1., 0.), Point::new(1., 0.), Point::new(0., 3.)];
        let axes = mirror_axes(&iso, tol()).unwrap();
        assert_eq!(axes.len(), 1);
        assert!((axes[0].angle - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(symmetricity_rho(&square(), tol()).unwrap(), 4);
        let mut sc = square();
        sc.push(Point::ORIGIN);
        assert_eq!(symmetricity_rho(&sc, tol()).unwrap(), 1);
        let line = vec![Point::new(-1., 0.), Point::new(0., 0.), Point::new(1., 0.)];
        assert_eq!(symmetricity_rho(&line, tol()).unwrap(), 1);
        let dup = vec![Point::new(0., 0.), Point::new(0., 0.)];
        assert_eq!(
            symmetricity_rho(&dup, tol()),
            Err(Error::DuplicatePoints(0, 1))
        );
    }

    #[test]
    fn classify_examples() {
        let mut sc = square();
        sc.push(Point::ORIGIN);
        let class = classify(&sc, tol()).unwrap();
        assert!(class.in_c_dot);
        assert_eq!(class.k_without_center, 4);
        assert_eq!(class.central_robot, Some(4));

        let line = vec![Point::new(-1., 0.), Point::new(0., 0.), Point::new(1., 0.)];
        let class = classify(&line, tol()).unwrap();
        assert!(class.in_c_dot);
        assert_eq!(class.k_without_center, 2);

        let iso = vec![Point::new(-1., 0.), Point::new(1., 0.), Point::new(0., 3.)];
        let class = classify(&iso, tol()).unwrap();
        assert!(!class.in_c_dot);
        assert!(class.axis_with_single_robot);
        assert_eq!(class.axis_count, 1);

        let iso4 = vec![
            Point::new(-1., 0.),
            Point::new(1., 0.),
            Point::new(-2., 3.),
            Point::new(2., 3.),
        ];
        assert!(classify(&iso4, tol()).unwrap().unique_axis_no_robots);
    }

    #[test]
    fn view_classes_of_square() {
        let frames = vec![Frame::default(); 4];
        let classes = view_classes(&square(), &frames, Chirality::Present, tol()).unwrap();
        assert_eq!(classes, vec![vec![0, 1, 2, 3]]);

        let mut sc = square();
        sc.push(Point::ORIGIN);
        let frames = vec![Frame::default(); 5];
        let classes = view_classes(&sc, &frames, Chirality::Present, tol()).unwrap();
        assert_eq!(classes, vec![vec![0, 1, 2, 3], vec![4]]);
    }

    #[test]
    fn report_flags() {
        let r = symmetry_report(&square(), tol()).unwrap();
        assert!(r.is_central_symmetric);
        assert_eq!(r.robot_counts_on_axes.iter().sum::<usize>(), 4);
        assert!(!r.has_central_robot);
    }
}
