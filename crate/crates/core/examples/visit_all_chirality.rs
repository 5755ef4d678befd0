//! Visit-All on a random configuration with shared handedness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robot_permute::engine::{run, Frame};
use robot_permute::protocols::{Protocol, ProtocolId};
use robot_permute::verify::{check_k_step_spec, visit_matrix, Spec};
use robot_permute::{Handedness, Point, Tolerance};

fn main() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 7;
    let points: Vec<Point> = (0..n)
        .map(|_| Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
        .collect();
    let frames: Vec<Frame> = (0..n)
        .map(|_| Frame::rotated(rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let protocol = Protocol::new(ProtocolId::VisitAllChirality, Handedness::Ccw, tol);
    let trace = run(&points, &frames, protocol.algorithm(), n, tol);

    let verdict = check_k_step_spec(&trace, Spec::VisitAll, 1, tol);
    println!("{}", verdict.to_json());
    for (i, row) in visit_matrix(&trace, 1, tol).iter().enumerate() {
        println!("robot {i} visits {row:?}");
    }
}
