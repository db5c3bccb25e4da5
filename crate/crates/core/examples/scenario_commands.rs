//! Loads a shipped scenario file and runs the same analyses as the
//! command-line tool.

use svo_games::coords::Family;
use svo_games::scenario::{cmd_blowup, cmd_bounds, cmd_equilibria, parse_theta, Format, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/rotated_7pi_16.json");
    let sc = Scenario::from_json(&std::fs::read_to_string(path)?, &["spec=1e-9".to_string()])?;

    print!("{}", cmd_equilibria(&sc)?.text);
    print!("{}", cmd_blowup(&sc, Family::E1, Some(vec![0.3, 0.9]), Format::Csv)?.text);
    let b = cmd_bounds(&sc, parse_theta("0.5,0.5")?)?;
    println!("bounds exit status {}", b.status);
    Ok(())
}
