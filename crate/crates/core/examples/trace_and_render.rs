//! Runs a scenario, writes its trace as JSON Lines and an SVG next to it.

use robot_permute::engine::trace_to_jsonl;
use robot_permute::render::render_svg;
use robot_permute::scenario::Scenario;

const SCENARIO: &str = r#"{
  "points": [[3, 0], [1, 2], [-2, 2], [-3, -1], [0, -2], [2, -1.5]],
  "frames": {"kind": "pairwise_distinct", "seed": 11},
  "protocol": "VisitAllChirality",
  "rounds": 6
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::from_json(SCENARIO)?;
    let trace = scenario.run()?;
    let dir = std::env::temp_dir();
    let jsonl = dir.join("robot-permute-trace.jsonl");
    let svg = dir.join("robot-permute-trace.svg");
    std::fs::write(&jsonl, trace_to_jsonl(&trace))?;
    std::fs::write(&svg, render_svg(&trace))?;
    println!("{}\n{}", jsonl.display(), svg.display());
    Ok(())
}
