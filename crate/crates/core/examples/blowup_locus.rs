//! Blow-up loci of the rotated example for several rotation angles, with the
//! asymptote check for the first event found.

use std::f64::consts::PI;

use svo_games::blowup::{blowup_locus, default_approach, param_grid, verify_asymptote};
use svo_games::coords::Family;
use svo_games::expansion::build_expansion;
use svo_games::game::{Dims, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

fn rotated(gamma: f64) -> Result<QuadraticGame, svo_games::error::SvoError> {
    let r = Mat::from_row_slice(2, 2, &[gamma.cos(), -gamma.sin(), gamma.sin(), gamma.cos()]);
    let m1 = Mat::from_row_slice(2, 2, &[1.2, -1.0, -1.0, 1.0]);
    let m2 = &r * Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.2]) * r.transpose();
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = param_grid(20);
    for k in [-2.0, 0.0, 2.0, 7.0, 8.0, 9.0] {
        let gamma = k * PI / 16.0;
        let game = rotated(gamma)?;
        let locus = blowup_locus(&game, Family::E1, &grid);
        println!("gamma = {k}pi/16: {} of {} params blow up", locus.nonempty_count(), grid.len());

        if let Some((param, _, theta)) = locus.polyline().first() {
            let exp = build_expansion(&game, Family::E1, *param)?;
            let entry = locus.entries.iter().find(|e| e.param == *param).unwrap();
            let ev = &entry.report.as_ref().unwrap().events[0];
            let check = verify_asymptote(&exp, ev, &default_approach(ev.t_star))?;
            let worst = check.samples.iter().map(|s| s.alignment_error).fold(0.0, f64::max);
            println!(
                "  first event: param {param:.4}, lambda {:.4}, theta* ({:.4}, {:.4}), worst alignment error {worst:.2e}",
                ev.lambda, theta[0], theta[1]
            );
        }
    }
    Ok(())
}
