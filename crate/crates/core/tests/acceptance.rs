//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::path::Path;
use std::time::Instant;

use common::*;
use rand::Rng;
use rayon::prelude::*;
use svo_games::blowup::{blowup_locus, cutoffs, find_blowups, param_grid, verify_asymptote};
use svo_games::bounds::{check_m1m2_spectrum, curve_bounds, theta_point_bounds, CurveBounds, ThetaBounds};
use svo_games::coords::{from_theta, Family};
use svo_games::equilibria::{classical_points, cost, svo_nash_direct, EquilibriumSet, SvoAngles};
use svo_games::expansion::{build_expansion, log_grid};
use svo_games::game::{Dims, Player, QuadraticGame};
use svo_games::linalg::Vector;
use svo_games::lq::{build_ltv_game, max_position_deviation, single_integrator_scenario, trajectory_asymptotes, velocity_sign_changes};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm().max(1e-12)
}

/// Oracle equivalence of E1-E4 with the direct solve on random games.
fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let grid = interior(15);
    let per_game: Vec<(usize, usize, f64)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut r = rng(1000 + seed);
            let (d1, d2) = random_dims(&mut r, 4);
            let game = random_pd_game(&mut r, d1, d2);
            let (mut compared, mut skipped, mut worst) = (0, 0, 0.0f64);
            for &a in &grid {
                for &b in &grid {
                    let th = SvoAngles::new(a, b).unwrap();
                    let Ok(direct) = svo_nash_direct(&game, th) else {
                        skipped += 4;
                        continue;
                    };
                    for f in Family::ALL {
                        let c = from_theta(f, th).unwrap();
                        let exp = build_expansion(&game, f, c.param).unwrap();
                        // Blow-up neighbourhoods are excluded.
                        if exp.min_spec_gap(c.t) < 1e-3 * c.t {
                            skipped += 1;
                            continue;
                        }
                        match exp.curve_point(c.t) {
                            Ok(u) => {
                                compared += 1;
                                worst = worst.max(rel(&u, &direct));
                            }
                            Err(_) => skipped += 1,
                        }
                    }
                }
            }
            (compared, skipped, worst)
        })
        .collect();
    let compared: usize = per_game.iter().map(|x| x.0).sum();
    let skipped: usize = per_game.iter().map(|x| x.1).sum();
    let worst = per_game.iter().map(|x| x.2).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && secs < 60.0,
        format!("{compared} points compared, {skipped} near blow-ups skipped, max rel err {worst:.2e}, {secs:.1} s"),
    )
}

/// Endpoint limits of E1 and E2.
fn c2_endpoint_limits() -> Outcome {
    let mut games = vec![two_d_example()];
    let mut r = rng(2);
    for _ in 0..20 {
        let (d1, d2) = random_dims(&mut r, 4);
        games.push(random_pd_game(&mut r, d1, d2));
    }
    let (mut worst_lo, mut worst_hi, mut checked_hi) = (0.0f64, 0.0f64, 0);
    // Largest mismatch between the distance at t = 1e8 and the analytic
    // first-order remainder ||core^T dir|| / t.
    let mut remainder_gap = 0.0f64;
    for game in &games {
        let eq = classical_points(game).unwrap();
        for p in param_grid(20) {
            for (f, lo, hi) in [(Family::E1, &eq.u_nash, &eq.u_altruistic), (Family::E2, &eq.u_player1, &eq.u_player2)] {
                let exp = build_expansion(game, f, p).unwrap();
                worst_lo = worst_lo.max((exp.curve_point(1e-8).unwrap() - lo).norm());
                if exp.spectrum_positive_real_part() {
                    checked_hi += 1;
                    let dist = (exp.curve_point(1e8).unwrap() - hi).norm();
                    let first = (exp.core.transpose() * &exp.direction).norm() / 1e8;
                    worst_hi = worst_hi.max(dist);
                    remainder_gap = remainder_gap.max((dist - first).abs() / first.max(1e-300));
                }
            }
        }
    }
    outcome(
        worst_lo <= 1e-6 && worst_hi <= 1e-6,
        format!(
            "t=1e-8 max dist {worst_lo:.2e}; t=1e8 max dist {worst_hi:.2e} over {checked_hi} bounded curves \
             (matches first-order remainder to {remainder_gap:.1e} rel)"
        ),
    )
}

/// Prosocial identity and the two social-optimum formulas.
fn c3_prosocial() -> Outcome {
    let mut r = rng(3);
    let (mut worst_theta, mut worst_paths, mut n, mut indefinite) = (0.0f64, 0.0f64, 0, 0);
    for i in 0..100 {
        let (d1, d2) = random_dims(&mut r, 4);
        let d = d1 + d2;
        let game = if i % 2 == 0 {
            random_pd_game(&mut r, d1, d2)
        } else {
            // Indefinite players with a positive definite sum; the
            // perturbation only touches the cross blocks.
            let c = random_mat(&mut r, d2, d1) * 3.0;
            let mut e = svo_games::linalg::Mat::zeros(d, d);
            e.view_mut((d1, 0), (d2, d1)).copy_from(&c);
            e.view_mut((0, d1), (d1, d2)).copy_from(&c.transpose());
            let m1 = random_pd(&mut r, d, 0.3) + &e;
            let m2 = random_pd(&mut r, d, 0.3) - &e;
            QuadraticGame::new(m1, m2, random_vec(&mut r, d), random_vec(&mut r, d), Dims::new(d1, d2).unwrap()).unwrap()
        };
        let Ok(eq) = classical_points(&game) else { continue };
        n += 1;
        indefinite += usize::from(!game.check_assumptions().assump_1c);
        let u = svo_nash_direct(&game, SvoAngles::new(FRAC_PI_4, FRAC_PI_4).unwrap()).unwrap();
        worst_theta = worst_theta.max(rel(&u, &eq.u_social));
        let alt = EquilibriumSet::social_via_aggregates(&game).unwrap();
        worst_paths = worst_paths.max(rel(&alt, &eq.u_social));
    }
    outcome(
        worst_theta <= 1e-9 && worst_paths <= 1e-10 && n >= 90,
        format!("{n} instances ({indefinite} with indefinite players), u_theta(pi/4,pi/4) vs u_S {worst_theta:.2e}, two u_S formulas {worst_paths:.2e}"),
    )
}

/// Ball containment on the 2D example.
fn c4_containment() -> Outcome {
    let game = two_d_example();
    let ts = log_grid(1e-3, 1e3, 50);
    let mut sampled = 0;
    let mut violations = Vec::new();
    for f in [Family::E1, Family::E2] {
        for p in param_grid(20) {
            let exp = build_expansion(&game, f, p).unwrap();
            let CurveBounds::Certified { base, target, .. } = curve_bounds(&exp).unwrap() else {
                violations.push(format!("{f} {p:.3} not certified"));
                continue;
            };
            for &t in &ts {
                let u = exp.curve_point(t).unwrap();
                sampled += 1;
                for ball in [&base, &target] {
                    if !ball.contains(&u, 1e-9 * ball.radius) {
                        violations.push(format!("{f} p={p:.3} t={t:.3e}"));
                    }
                }
            }
        }
    }
    let mut members = Vec::new();
    for (a, b) in [(FRAC_PI_8, 3.0 * FRAC_PI_8), (3.0 * FRAC_PI_8, FRAC_PI_8), (FRAC_PI_4, FRAC_PI_4)] {
        let ok = matches!(theta_point_bounds(&game, SvoAngles::new(a, b).unwrap()), Ok(ThetaBounds::Certified { member: true, .. }));
        members.push(ok);
    }
    outcome(
        violations.is_empty() && members.iter().all(|&m| m),
        format!("{sampled} curve points, {} violations, four-ball membership {members:?}", violations.len()),
    )
}

/// Spectrum of M1 M2^-1 for positive definite pairs.
fn c5_m1m2_spectrum() -> Outcome {
    let mut r = rng(5);
    let (mut imag, mut mismatch, mut all_real) = (0.0f64, 0.0f64, true);
    for _ in 0..100 {
        let d = r.gen_range(2..=8);
        let d1 = r.gen_range(1..d);
        let game = random_pd_game(&mut r, d1, d - d1);
        let s = check_m1m2_spectrum(&game).unwrap();
        imag = imag.max(s.max_imag_rel);
        mismatch = mismatch.max(s.max_mismatch_rel);
        all_real &= s.real_positive;
    }
    outcome(
        all_real && imag <= 1e-10 && mismatch <= 1e-8,
        format!("real positive {all_real}, max |Im|/rho {imag:.2e}, direct vs congruence {mismatch:.2e}"),
    )
}

/// Blow-up loci of the rotated example family.
fn c6_rotated_blowups() -> Outcome {
    let grid = param_grid(20);
    let mut pass = true;
    let mut parts = Vec::new();
    let mut worst_align = 0.0f64;
    for (label, k, expect_blowups) in [("pi/8", 2.0, false), ("0", 0.0, false), ("-pi/8", -2.0, false), ("7pi/16", 7.0, true), ("pi/2", 8.0, true), ("9pi/16", 9.0, true)] {
        let game = rotated(k * PI / 16.0);
        let locus = blowup_locus(&game, Family::E1, &grid);
        let count = locus.nonempty_count();
        let ok = if expect_blowups { count * 5 >= grid.len() * 4 } else { count == 0 };
        pass &= ok;
        parts.push(format!("{label}: {count}/20{}", if ok { "" } else { " (FAIL)" }));
        for entry in &locus.entries {
            let Some(rep) = &entry.report else { continue };
            let exp = build_expansion(&game, Family::E1, entry.param).unwrap();
            for ev in &rep.events {
                let ts = [ev.t_star * (1.0 - 1e-5), ev.t_star * (1.0 + 1e-5)];
                match verify_asymptote(&exp, ev, &ts) {
                    Ok(check) => {
                        for s in &check.samples {
                            worst_align = worst_align.max(s.alignment_error);
                        }
                    }
                    Err(_) => worst_align = f64::INFINITY,
                }
            }
        }
    }
    pass &= worst_align < 1e-3;
    outcome(pass, format!("non-empty loci {}; max alignment error {worst_align:.2e}", parts.join(", ")))
}

/// The single-integrator coordination scenario.
fn c7_lq_scenario() -> Outcome {
    let start = Instant::now();
    let ltv = single_integrator_scenario();
    let cut = cutoffs(&ltv.game);
    let a = cut.iter().all(|c| (c - 3.0 * FRAC_PI_8).abs() <= 0.05);

    let eq = classical_points(&ltv.game).unwrap();
    let dev = max_position_deviation(&ltv.rollout(&eq.u_nash).unwrap(), &ltv.costs.xbar1);
    let b = dev <= 0.1;

    let exp = build_expansion(&ltv.game, Family::E1, FRAC_PI_4).unwrap();
    let report = find_blowups(&exp, cut);
    let events: Vec<_> = report.events.iter().filter(|e| e.well_posed).collect();
    let lambdas: Vec<f64> = events.iter().map(|e| e.lambda).collect();
    let near = |target: f64| events.iter().min_by(|x, y| (x.lambda - target).abs().total_cmp(&(y.lambda - target).abs())).copied();
    let c = events.len() == 2
        && near(-1.1).is_some_and(|e| (e.lambda + 1.1).abs() <= 0.05)
        && near(-2.2).is_some_and(|e| (e.lambda + 2.2).abs() <= 0.05);

    // Frequency comparison between the events closest to each target.
    let (d, changes) = match (near(-1.1), near(-2.2)) {
        (Some(e1), Some(e2)) if !std::ptr::eq(e1, e2) => {
            let s1 = velocity_sign_changes(&trajectory_asymptotes(&ltv, e1).unwrap().x_inf);
            let s2 = velocity_sign_changes(&trajectory_asymptotes(&ltv, e2).unwrap().x_inf);
            (s2 > s1, format!("{s1} vs {s2}"))
        }
        _ => (false, "no distinct events".into()),
    };
    let secs = start.elapsed().as_secs_f64();
    let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
    outcome(
        a && b && c && d && secs < 120.0,
        format!(
            "(a) {} cutoffs {:.4},{:.4}; (b) {} Nash deviation {dev:.4}; (c) {} {} well-posed events lambda {:.4?}; (d) {} sign changes {changes}; {secs:.1} s",
            flag(a),
            cut[0],
            cut[1],
            flag(b),
            flag(c),
            events.len(),
            lambdas,
            flag(d)
        ),
    )
}

/// LTV assembly against stage sums and the step recursion.
fn c8_lq_assembly() -> Outcome {
    let mut r = rng(8);
    let (mut worst_cost, mut worst_roll) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let k = 1 + i % 10;
        let (sys, costs) = lq_oracle::random_system(&mut r, k);
        let ltv = build_ltv_game(sys.clone(), costs.clone()).unwrap();
        let u = random_vec(&mut r, ltv.game.dim());
        let d1 = ltv.game.dims().d1;
        let (u1, u2) = (u.rows(0, d1).into_owned(), u.rows(d1, u.len() - d1).into_owned());
        for (j, p) in [Player::One, Player::Two].into_iter().enumerate() {
            let assembled = cost(&ltv.game, p, &u) + ltv.constants[j];
            let direct = lq_oracle::stage_sum(&sys, &costs, j + 1, &u1, &u2);
            worst_cost = worst_cost.max((assembled - direct).abs() / direct.abs().max(1e-12));
        }
        let xs = ltv.rollout(&u).unwrap();
        for (x, y) in xs.iter().zip(lq_oracle::step(&sys, &u1, &u2)) {
            worst_roll = worst_roll.max((x - &y).norm() / y.norm().max(1.0));
        }
    }
    outcome(
        worst_cost <= 1e-9 && worst_roll <= 1e-12,
        format!("cost rel err {worst_cost:.2e}, rollout err {worst_roll:.2e}"),
    )
}

/// Finite-difference stationarity of the direct solve.
fn c9_stationarity() -> Outcome {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 200 {
        let (d1, d2) = random_dims(&mut r, 4);
        let game = random_pd_game(&mut r, d1, d2);
        let th = SvoAngles::new(r.gen_range(0.0..FRAC_PI_2), r.gen_range(0.0..FRAC_PI_2)).unwrap();
        let Ok(u) = svo_nash_direct(&game, th) else { continue };
        n += 1;
        for p in [Player::One, Player::Two] {
            let g = fd_own_gradient(&game, p, th.of(p), &u, 1e-5);
            let scale = game.quadratic(p).norm() * u.norm() + game.linear(p).norm();
            worst = worst.max(g.norm() / scale.max(1e-12));
        }
    }
    outcome(worst <= 1e-5, format!("{n} pairs, max relative FD gradient {worst:.2e}"))
}

/// Byte-identical CLI artifacts that validate against the schemas.
fn c10_cli_determinism() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_svo-games"));
    let runs = golden::runs();
    let problems: Vec<String> = runs
        .par_iter()
        .filter_map(|run| {
            let a = golden::invoke(bin, &run.args);
            let b = golden::invoke(bin, &run.args);
            if a.code != 0 && a.code != 1 {
                return Some(format!("{}: exit {}", run.label, a.code));
            }
            if a.stdout != b.stdout {
                return Some(format!("{}: output differs between runs", run.label));
            }
            golden::validate(run, &a.stdout).err().map(|e| format!("{}: {e}", run.label))
        })
        .collect();
    outcome(problems.is_empty(), format!("{} artifacts; {}", runs.len(), if problems.is_empty() { "all stable and valid".into() } else { problems.join("; ") }))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence of E1-E4", c1_oracle_equivalence),
        ("endpoint limits", c2_endpoint_limits),
        ("prosocial identity", c3_prosocial),
        ("ellipsoid containment", c4_containment),
        ("M1 M2^-1 spectrum", c5_m1m2_spectrum),
        ("rotated-example blow-ups", c6_rotated_blowups),
        ("single-integrator LQ scenario", c7_lq_scenario),
        ("LQ assembly oracle", c8_lq_assembly),
        ("finite-difference stationarity", c9_stationarity),
        ("CLI determinism", c10_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
