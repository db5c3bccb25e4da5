//! Nash, altruistic, per-player and social points of the 3D example, with
//! the assumption report and well-posedness cutoffs.

use svo_games::equilibria::classical_points;
use svo_games::game::{GameSpec, Player, QuadraticGame};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec: GameSpec = serde_json::from_str(
        r#"{"d1": 2, "d2": 1,
            "M1": [[8.75, 2.0, 0.5], [2.0, 3.75, 1.0], [0.5, 1.0, 3.75]],
            "M2": [[1.8, -1.6, 0.0], [-1.6, 3.0, -2.8], [0.0, -2.8, 7.0]],
            "c1": [2.9, -0.35, -1.5], "c2": [-1.54, 2.0, -1.12]}"#,
    )?;
    let game = QuadraticGame::from_spec(&spec)?;
    let eq = classical_points(&game)?;
    println!("u_N = {:?}", eq.u_nash.as_slice());
    println!("u_A = {:?}", eq.u_altruistic.as_slice());
    println!("u_1 = {:?}", eq.u_player1.as_slice());
    println!("u_2 = {:?}", eq.u_player2.as_slice());
    println!("u_S = {:?}", eq.u_social.as_slice());

    let rep = game.check_assumptions();
    println!("1a {}  1b {}  1c {}", rep.assump_1a, rep.assump_1b, rep.assump_1c);
    for p in [Player::One, Player::Two] {
        println!("cutoff {:?}: {:.6}", p, game.wellposed_cutoff(p)?);
    }
    Ok(())
}
