//! Move-All on a rectangle, where no robot can tell left from right.

use robot_permute::engine::{adversary_frames, run, FrameKind};
use robot_permute::protocols::{Protocol, ProtocolId};
use robot_permute::verify::{check_k_step_spec, extract_permutation, Spec};
use robot_permute::{Handedness, Point, Tolerance};

fn main() -> robot_permute::Result<()> {
    let tol = Tolerance::default();
    let points = vec![
        Point::new(2.0, 1.0),
        Point::new(-2.0, 1.0),
        Point::new(-2.0, -1.0),
        Point::new(2.0, -1.0),
    ];
    let frames = adversary_frames(FrameKind::MirroredPairs, &points, 1, 0.0, tol)?;
    let protocol = Protocol::new(ProtocolId::MoveAllNoChirality, Handedness::Ccw, tol);
    let trace = run(&points, &frames, protocol.algorithm(), 4, tol);
    let step = extract_permutation(&trace.rounds[0].positions, &trace.rounds[1].positions, tol)?;
    println!("cycles {:?}", step.cycles());
    println!(
        "{}",
        check_k_step_spec(&trace, Spec::MoveAll, 1, tol).to_json()
    );
    Ok(())
}
