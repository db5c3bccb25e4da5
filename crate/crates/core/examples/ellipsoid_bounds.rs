//! Ellipsoids around the ends of E1 and E2 curves, and the four-ball
//! enclosure at a few theta values.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use svo_games::bounds::{curve_bounds, theta_point_bounds, CurveBounds, ThetaBounds};
use svo_games::coords::Family;
use svo_games::equilibria::SvoAngles;
use svo_games::expansion::build_expansion;
use svo_games::game::{Dims, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m1 = Mat::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 2.0]);
    let m2 = Mat::from_row_slice(2, 2, &[1.7, 0.5, 0.5, 2.2]);
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    let game = QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1)?)?;

    for family in [Family::E1, Family::E2] {
        match curve_bounds(&build_expansion(&game, family, 0.8)?)? {
            CurveBounds::Certified { base, target, .. } => {
                println!("{family}: radius {:.4} around {:?} and {:?}", base.radius, base.center.as_slice(), target.center.as_slice())
            }
            CurveBounds::NotApplicable { offending, .. } => println!("{family}: not certified, {offending:?}"),
        }
    }

    for (a, b) in [(FRAC_PI_8, 3.0 * FRAC_PI_8), (3.0 * FRAC_PI_8, FRAC_PI_8), (FRAC_PI_4, FRAC_PI_4)] {
        match theta_point_bounds(&game, SvoAngles::new(a, b)?)? {
            ThetaBounds::Certified { u_theta, member, balls, .. } => {
                let slack: Vec<f64> = balls.iter().map(|ball| ball.slack(&u_theta)).collect();
                println!("theta = ({a:.4}, {b:.4}): inside all four = {member}, slacks {slack:.4?}");
            }
            ThetaBounds::NotApplicable { failed, .. } => println!("theta = ({a:.4}, {b:.4}): {} families fail", failed.len()),
        }
    }
    Ok(())
}
