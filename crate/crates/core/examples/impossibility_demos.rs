//! The four obstruction demos, guarded and forced.

use robot_permute::demo::{run_demo, DemoName};

fn main() -> robot_permute::Result<()> {
    for demo in [
        DemoName::Thm2,
        DemoName::Thm3,
        DemoName::Thm5,
        DemoName::Thm9,
    ] {
        for force in [false, true] {
            let report = run_demo(demo, force)?;
            println!("{}", report.to_text());
        }
    }
    Ok(())
}
