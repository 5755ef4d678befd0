//! Leader election by votes on the innermost ring around a central robot.

use robot_permute::engine::{adversary_frames, run, FrameKind};
use robot_permute::ordering::{tally_votes, voting_elect};
use robot_permute::protocols::{Protocol, ProtocolId};
use robot_permute::verify::{check_k_step_spec, Spec};
use robot_permute::{Handedness, Point, Tolerance};

fn main() -> robot_permute::Result<()> {
    let tol = Tolerance::default();
    let mut points = vec![Point::ORIGIN];
    for k in 0..3 {
        points.push(Point::from_angle(
            0.3 + k as f64 * std::f64::consts::TAU / 3.0,
        ));
    }
    for k in 0..6 {
        points.push(Point::from_angle(0.1 + k as f64 * std::f64::consts::TAU / 6.0) * 2.0);
    }
    let frames = adversary_frames(FrameKind::PairwiseDistinct, &points, 9, 0.0, tol)?;
    let dirs: Vec<Point> = frames.iter().map(|f| f.x_direction()).collect();
    let tally = tally_votes(&points, &dirs, Handedness::Ccw, tol)?;
    println!("ring {:?} votes {:?}", tally.polygon, tally.votes);
    println!(
        "leader {}",
        voting_elect(&points, &dirs, Handedness::Ccw, tol)?
    );

    let protocol = Protocol::new(ProtocolId::VotingVisitAll, Handedness::Ccw, tol);
    let trace = run(&points, &frames, protocol.algorithm(), points.len(), tol);
    println!(
        "{}",
        check_k_step_spec(&trace, Spec::VisitAll, 1, tol).to_json()
    );
    Ok(())
}
