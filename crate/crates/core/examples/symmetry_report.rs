//! Symmetry and class of a few small configurations.

use robot_permute::symmetry::{classify, symmetry_report};
use robot_permute::{Point, Tolerance};

fn main() -> robot_permute::Result<()> {
    let tol = Tolerance::default();
    let configs = [
        (
            "square",
            vec![(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)],
        ),
        (
            "square with center",
            vec![
                (1.0, 1.0),
                (-1.0, 1.0),
                (-1.0, -1.0),
                (1.0, -1.0),
                (0.0, 0.0),
            ],
        ),
        (
            "trapezoid",
            vec![(-1.0, 1.0), (1.0, 1.0), (-2.0, -1.0), (2.0, -1.0)],
        ),
        ("scalene", vec![(0.0, 0.0), (4.0, 0.0), (1.0, 2.5)]),
    ];
    for (name, coords) in configs {
        let points: Vec<Point> = coords.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let report = symmetry_report(&points, tol)?;
        let class = classify(&points, tol)?;
        println!(
            "{name}: rho {} rotation {} axes {} central robot {:?}",
            report.rho,
            report.rotational_order,
            report.mirror_axes.len(),
            class.central_robot
        );
    }
    Ok(())
}
