//! Visit-All with mirrored frames on a configuration with one empty axis.

use robot_permute::engine::{adversary_frames, run, FrameKind};
use robot_permute::protocols::{Protocol, ProtocolId};
use robot_permute::verify::{check_k_step_spec, Spec};
use robot_permute::{Handedness, Point, Tolerance};

fn main() -> robot_permute::Result<()> {
    let tol = Tolerance::default();
    let points = vec![
        Point::new(-1.0, 2.0),
        Point::new(1.0, 2.0),
        Point::new(-3.0, 0.5),
        Point::new(3.0, 0.5),
        Point::new(-2.0, -1.5),
        Point::new(2.0, -1.5),
    ];
    let frames = adversary_frames(FrameKind::MirroredPairs, &points, 4, 0.0, tol)?;
    let protocol = Protocol::new(ProtocolId::VisitAllNoChirality, Handedness::Ccw, tol);
    let trace = run(&points, &frames, protocol.algorithm(), points.len(), tol);
    for (round, record) in trace.rounds.iter().enumerate() {
        let cells: Vec<String> = record
            .positions
            .iter()
            .map(|p| format!("({:.1},{:.1})", p.x, p.y))
            .collect();
        println!("{round}: {}", cells.join(" "));
    }
    println!(
        "{}",
        check_k_step_spec(&trace, Spec::VisitAll, 1, tol).to_json()
    );
    Ok(())
}
