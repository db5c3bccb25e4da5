//! Samples all four expansion families on the 2D example and compares each
//! point with a direct solve at the same theta.

use svo_games::coords::Family;
use svo_games::equilibria::svo_nash_direct;
use svo_games::expansion::{build_expansion, log_grid, sample_curve};
use svo_games::game::{Dims, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m1 = Mat::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 2.0]);
    let m2 = Mat::from_row_slice(2, 2, &[1.7, 0.5, 0.5, 2.2]);
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    let game = QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1)?)?;

    let grid = log_grid(1e-2, 1e2, 9);
    for family in Family::ALL {
        let exp = build_expansion(&game, family, 0.6)?;
        println!("{family} at param 0.6, spectrum {:?}", exp.eigenvalues.as_slice());
        for s in sample_curve(&exp, &grid, false)? {
            let Some(u) = &s.u else { continue };
            let err = (u - svo_nash_direct(&game, s.theta)?).norm() / u.norm();
            println!("  t = {:9.4}  u = ({:+.5}, {:+.5})  rel. diff vs direct = {err:.1e}", s.t, u[0], u[1]);
        }
    }
    Ok(())
}
