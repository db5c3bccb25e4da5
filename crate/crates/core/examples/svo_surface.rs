//! Direct SVO-Nash solves across a theta grid, checked against each
//! player's SVO gradient.

use std::f64::consts::FRAC_PI_2;

use svo_games::equilibria::{svo_nash_direct, svo_own_gradient, SvoAngles};
use svo_games::game::{Dims, Player, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m1 = Mat::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 2.0]);
    let m2 = Mat::from_row_slice(2, 2, &[1.7, 0.5, 0.5, 2.2]);
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    let game = QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1)?)?;

    let n = 5;
    let mut worst = 0.0f64;
    for i in 1..=n {
        for j in 1..=n {
            let th = SvoAngles::new(FRAC_PI_2 * i as f64 / (n + 1) as f64, FRAC_PI_2 * j as f64 / (n + 1) as f64)?;
            let u = svo_nash_direct(&game, th)?;
            for p in [Player::One, Player::Two] {
                worst = worst.max(svo_own_gradient(&game, p, th.of(p), &u).norm());
            }
            println!("theta = ({:.3}, {:.3})  u = ({:+.5}, {:+.5})", th.theta1, th.theta2, u[0], u[1]);
        }
    }
    println!("largest SVO gradient norm: {worst:e}");
    Ok(())
}
