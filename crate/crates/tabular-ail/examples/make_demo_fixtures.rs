//! Writes the fixture files used by `configs/quick_demo.toml`: a 12-state
//! cliff built by duplicating each state of a 6-state cliff, plus the
//! abstraction that collapses it back.
//!
//! ```bash
//! cargo run --example make_demo_fixtures
//! ```

use std::path::Path;

use tabular_ail::abstraction::duplicate_states;
use tabular_ail::envs::{build_reset_cliff, ResetCliffSpec};

fn main() -> tabular_ail::Result<()> {
    let spec = ResetCliffSpec {
        num_states: 6,
        num_actions: 3,
        horizon: 6,
        expert_trajectory_count_m: 30,
    };
    let base = build_reset_cliff(&spec)?;
    let (wide, abs) = duplicate_states(&base, 2)?;

    let dir = Path::new("configs");
    std::fs::create_dir_all(dir)?;
    wide.save(&dir.join("demo_wide_cliff.json"))?;
    abs.save(&dir.join("demo_wide_cliff_abstraction.json"))?;
    println!(
        "wrote configs/demo_wide_cliff.json ({} states) and its abstraction ({} blocks)",
        wide.num_states(),
        abs.num_abstract()
    );
    Ok(())
}
