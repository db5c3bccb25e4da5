//! Maps one theta to each family's (param, t) coordinate and back.

use svo_games::coords::{from_theta, to_theta, Family};
use svo_games::equilibria::SvoAngles;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = SvoAngles::new(0.4, 1.1)?;
    for family in Family::ALL {
        let c = from_theta(family, theta)?;
        let back = to_theta(c);
        println!(
            "{family}: param = {:.6}  t = {:.6}  round trip = ({:.12}, {:.12})",
            c.param, c.t, back.theta1, back.theta2
        );
    }
    Ok(())
}
