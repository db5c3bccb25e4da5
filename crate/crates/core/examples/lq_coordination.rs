//! Two planar single-integrator agents swapping sides: cutoffs, Nash
//! tracking error and the E1 blow-up events at phi = pi/4.

use std::f64::consts::FRAC_PI_4;

use svo_games::blowup::find_blowups;
use svo_games::blowup::cutoffs;
use svo_games::coords::Family;
use svo_games::equilibria::classical_points;
use svo_games::expansion::build_expansion;
use svo_games::lq::{max_position_deviation, single_integrator_scenario, trajectory_asymptotes, velocity_sign_changes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ltv = single_integrator_scenario();
    let cut = cutoffs(&ltv.game);
    println!("cutoffs: theta1 < {:.4}, theta2 < {:.4}", cut[0], cut[1]);

    let eq = classical_points(&ltv.game)?;
    let traj = ltv.rollout(&eq.u_nash)?;
    println!("Nash max position deviation: {:.4}", max_position_deviation(&traj, &ltv.costs.xbar1));

    let exp = build_expansion(&ltv.game, Family::E1, FRAC_PI_4)?;
    let report = find_blowups(&exp, cut);
    let clipped = report.events.iter().filter(|e| !e.well_posed).count();
    println!("{} events beyond the cutoffs omitted", clipped);
    for ev in report.events.iter().filter(|e| e.well_posed) {
        let asym = trajectory_asymptotes(&ltv, ev)?;
        println!(
            "lambda = {:8.4}  t* = {:7.4}  theta* = ({:.4}, {:.4})  mult = {}  velocity sign changes = {}",
            ev.lambda,
            ev.t_star,
            ev.theta_star[0],
            ev.theta_star[1],
            ev.multiplicity_indices.len(),
            velocity_sign_changes(&asym.x_inf)
        );
    }
    Ok(())
}
