//! Visit-All in two-round steps with one persistent bit per robot.

use robot_permute::engine::{adversary_frames, run, FrameKind};
use robot_permute::protocols::{Protocol, ProtocolId};
use robot_permute::verify::{check_k_step_spec, Spec};
use robot_permute::{Handedness, Point, Tolerance};

fn main() -> robot_permute::Result<()> {
    let tol = Tolerance::default();
    let points = vec![
        Point::new(1.0, 1.0),
        Point::new(-1.0, 1.0),
        Point::new(-1.0, -1.0),
        Point::new(1.0, -1.0),
        Point::ORIGIN,
    ];
    let frames = adversary_frames(FrameKind::RotatedQuarter, &points, 0, 0.3, tol)?;
    let protocol = Protocol::new(ProtocolId::OneBitVisitAll, Handedness::Ccw, tol);
    let trace = run(
        &points,
        &frames,
        protocol.algorithm(),
        2 * points.len(),
        tol,
    );
    for (round, record) in trace.rounds.iter().enumerate() {
        let bits: String = record
            .bits
            .iter()
            .map(|b| if b.is_set() { '1' } else { '0' })
            .collect();
        let cells: Vec<String> = record
            .positions
            .iter()
            .map(|p| format!("({:.3},{:.3})", p.x, p.y))
            .collect();
        println!("{round:2} {bits} {}", cells.join(" "));
    }
    println!(
        "{}",
        check_k_step_spec(&trace, Spec::VisitAll, 2, tol).to_json()
    );
    Ok(())
}
