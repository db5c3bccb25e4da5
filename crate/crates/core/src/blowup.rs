//! Unbounded SVO-equilibria: blow-up points, asymptotes and loci.
//!
//! Near a real negative eigenvalue cluster `J` with blow-up point `t*`,
//!
//! ```text
//! Gamma(t) - base ~ u_fin + s(t) u_inf
//! u_fin = Re sum_{i not in J} out_i g(lambda_i, t*) in_i^T dir
//! u_inf = Re sum_{j in J}     out_j               in_j^T dir
//! ```
//!
//! with `s(t) = (1 + lambda / t)^-1` for E1/E2 and `(1/t + lambda)^-1` for
//! E3/E4.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::ser_complex;
use crate::coords::Family;
use crate::equilibria::ser_vec;
use crate::error::{Result, SvoError};
use crate::expansion::{blowup_t, build_expansion, g_map, EigenClass, EigenExpansion};
use crate::game::{Player, QuadraticGame};
use crate::linalg::{alignment_error, Vector};

fn ser_opt_vec<S: serde::Serializer>(v: &Option<Vector>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vec(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupEvent {
    /// Cluster mean of the real negative eigenvalue.
    pub lambda: f64,
    /// Indices of the clustered eigenvalues in the expansion's ordering.
    pub multiplicity_indices: Vec<usize>,
    pub t_star: f64,
    pub theta_star: [f64; 2],
    /// `theta_star` is strictly below both well-posedness cutoffs.
    pub well_posed: bool,
    /// `None` when the core is defective.
    #[serde(serialize_with = "ser_opt_vec")]
    pub u_fin: Option<Vector>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub u_inf: Option<Vector>,
    /// The curve direction has no component on the eigenspace, so the curve
    /// stays bounded through `t_star`.
    pub removable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub family: Family,
    pub param: f64,
    pub events: Vec<BlowupEvent>,
    /// Complex eigenvalues with negative real part. They never blow up.
    #[serde(serialize_with = "ser_complex")]
    pub oscillatory_modes: Vec<Complex64>,
    pub defective: bool,
}

/// Scalar coefficient multiplying `u_inf` near `t_star`.
pub fn divergence_coefficient(family: Family, lambda: f64, t: f64) -> f64 {
    match family {
        Family::E1 | Family::E2 => 1.0 / (1.0 + lambda / t),
        Family::E3 | Family::E4 => 1.0 / (1.0 / t + lambda),
    }
}

/// Well-posedness cutoffs of both players, `0` for a player whose own
/// block is not positive definite.
pub fn cutoffs(game: &QuadraticGame) -> [f64; 2] {
    [Player::One, Player::Two].map(|p| game.wellposed_cutoff(p).unwrap_or(0.0))
}

/// Groups real negative eigenvalues whose gaps are within
/// `tol.cluster * rho`.
fn clusters(exp: &EigenExpansion) -> Vec<Vec<usize>> {
    let classes = exp.classes();
    let mut idx: Vec<usize> = (0..exp.eigenvalues.len())
        .filter(|&i| classes[i] == EigenClass::RealNegative)
        .collect();
    idx.sort_by(|&a, &b| exp.eigenvalues[a].re.total_cmp(&exp.eigenvalues[b].re));
    let gap = exp.tol.cluster * exp.spectral_radius();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(last) if (exp.eigenvalues[i].re - exp.eigenvalues[*last.last().unwrap()].re).abs() <= gap => last.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Enumerates blow-up events and their asymptotes. Events are ordered by
/// `t_star`.
pub fn find_blowups(exp: &EigenExpansion, cutoffs: [f64; 2]) -> BlowupReport {
    let coef = if exp.defective { None } else { Some(exp.coefficients()) };
    let dir_norm = exp.direction.norm();
    let (out, _) = exp.modes();
    let n = exp.eigenvalues.len();
    let mut events: Vec<BlowupEvent> = clusters(exp)
        .into_iter()
        .map(|members| {
            let lambda = members.iter().map(|&i| exp.eigenvalues[i].re).sum::<f64>() / members.len() as f64;
            let t_star = blowup_t(exp.family, lambda);
            let th = exp.theta_at(t_star);
            let well_posed = th.theta1 < cutoffs[0] && th.theta2 < cutoffs[1];
            let (u_fin, u_inf, removable) = match &coef {
                Some(coef) => {
                    let d = exp.dim();
                    let mut fin = vec![Complex64::new(0.0, 0.0); d];
                    let mut inf = vec![Complex64::new(0.0, 0.0); d];
                    for i in 0..n {
                        let (target, w) = if members.contains(&i) {
                            (&mut inf, coef[i])
                        } else {
                            (&mut fin, coef[i] * g_map(exp.family, exp.eigenvalues[i], t_star))
                        };
                        for (k, slot) in target.iter_mut().enumerate() {
                            *slot += out[(k, i)] * w;
                        }
                    }
                    let removable = members.iter().all(|&j| coef[j].norm() <= exp.tol.proj * dir_norm);
                    (
                        Some(Vector::from_iterator(d, fin.iter().map(|z| z.re))),
                        Some(Vector::from_iterator(d, inf.iter().map(|z| z.re))),
                        removable,
                    )
                }
                None => (None, None, false),
            };
            BlowupEvent {
                lambda,
                multiplicity_indices: members,
                t_star,
                theta_star: th.as_array(),
                well_posed,
                u_fin,
                u_inf,
                removable,
            }
        })
        .collect();
    events.sort_by(|a, b| a.t_star.total_cmp(&b.t_star));
    let oscillatory_modes = exp
        .classes()
        .iter()
        .zip(&exp.eigenvalues)
        .filter(|(c, _)| **c == EigenClass::Oscillatory)
        .map(|(_, l)| *l)
        .collect();
    BlowupReport {
        family: exp.family,
        param: exp.param,
        events,
        oscillatory_modes,
        defective: exp.defective,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproachSample {
    pub t: f64,
    /// `1 - |cos angle(w(t), u_inf)|`.
    pub alignment_error: f64,
    /// `||w(t)|| / (|s(t)| ||u_inf||)`; tends to 1.
    pub scale_ratio: f64,
    /// Sign of `s(t)`; flips across `t_star`.
    pub side: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoteCheck {
    pub samples: Vec<ApproachSample>,
    /// Alignment error does not increase as `t` approaches `t_star` from
    /// either side.
    pub monotone: bool,
}

/// Compares `w(t) = Gamma(t) - base - u_fin` against `s(t) u_inf`.
pub fn verify_asymptote(exp: &EigenExpansion, event: &BlowupEvent, approach_ts: &[f64]) -> Result<AsymptoteCheck> {
    exp.require_diagonalizable()?;
    let (Some(u_fin), Some(u_inf)) = (&event.u_fin, &event.u_inf) else {
        return Err(SvoError::PreconditionFailed("event has no asymptotes".into()));
    };
    let window = exp.tol.approach_window;
    let mut samples = Vec::with_capacity(approach_ts.len());
    for &t in approach_ts {
        if (t - event.t_star).abs() >= window * event.t_star {
            return Err(SvoError::InvalidArgument(format!(
                "t = {t} is outside the approach window around {}",
                event.t_star
            )));
        }
        let gamma = exp.curve_point(t)?;
        let w = gamma - &exp.base - u_fin;
        let s = divergence_coefficient(exp.family, event.lambda, t);
        samples.push(ApproachSample {
            t,
            alignment_error: alignment_error(&w, u_inf),
            scale_ratio: w.norm() / (s.abs() * u_inf.norm()),
            side: s.signum(),
        });
    }
    let mut monotone = true;
    for side in [-1.0, 1.0] {
        let mut sided: Vec<&ApproachSample> = samples.iter().filter(|s| (s.t - event.t_star).signum() == side).collect();
        sided.sort_by(|a, b| (b.t - event.t_star).abs().total_cmp(&(a.t - event.t_star).abs()));
        monotone &= sided
            .windows(2)
            .all(|w| w[1].alignment_error <= w[0].alignment_error + 1e-12);
    }
    Ok(AsymptoteCheck { samples, monotone })
}

/// `t_star (1 +- 10^-k)` for `k = 2..=5`.
pub fn default_approach(t_star: f64) -> Vec<f64> {
    (2..=5)
        .flat_map(|k| {
            let off = 10f64.powi(-k);
            [t_star * (1.0 - off), t_star * (1.0 + off)]
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusEntry {
    pub param: f64,
    /// Events beyond the well-posedness cutoffs are removed.
    pub report: Option<BlowupReport>,
    pub clipped: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupLocus {
    pub family: Family,
    pub cutoffs: [f64; 2],
    pub entries: Vec<LocusEntry>,
}

impl BlowupLocus {
    /// Params with at least one retained event.
    pub fn nonempty_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.report.as_ref().is_some_and(|r| !r.events.is_empty()))
            .count()
    }

    /// Blow-up points in theta-space as `(param, branch, theta1, theta2)`,
    /// where `branch` is the event's rank by `t_star`.
    pub fn polyline(&self) -> Vec<(f64, usize, [f64; 2])> {
        self.entries
            .iter()
            .filter_map(|e| e.report.as_ref().map(|r| (e.param, r)))
            .flat_map(|(p, r)| r.events.iter().enumerate().map(move |(k, ev)| (p, k, ev.theta_star)))
            .collect()
    }

    /// CSV with columns `param,branch,lambda,t_star,theta1,theta2,removable`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,branch,lambda,t_star,theta1,theta2,removable\n");
        for e in &self.entries {
            let Some(r) = &e.report else { continue };
            for (k, ev) in r.events.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    e.param, k, ev.lambda, ev.t_star, ev.theta_star[0], ev.theta_star[1], ev.removable
                );
            }
        }
        out
    }
}

/// Blow-up reports over a parameter grid, clipped to the well-posed region.
pub fn blowup_locus(game: &QuadraticGame, family: Family, param_grid: &[f64]) -> BlowupLocus {
    let cut = cutoffs(game);
    let entries = param_grid
        .par_iter()
        .map(|&param| match build_expansion(game, family, param) {
            Ok(exp) => {
                let mut report = find_blowups(&exp, cut);
                let before = report.events.len();
                report.events.retain(|e| e.well_posed);
                LocusEntry {
                    param,
                    clipped: before - report.events.len(),
                    report: Some(report),
                    error: None,
                }
            }
            Err(e) => LocusEntry {
                param,
                report: None,
                clipped: 0,
                error: Some(format!("{}: {e}", e.kind())),
            },
        })
        .collect();
    BlowupLocus {
        family,
        cutoffs: cut,
        entries,
    }
}

/// Midpoints of `n` equal cells of `(0, pi/2)`.
pub fn param_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (k as f64 + 0.5) * std::f64::consts::FRAC_PI_2 / n as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::svo_nash_direct;
    use crate::game::Dims;
    use crate::linalg::Mat;
    use std::f64::consts::FRAC_PI_8;

    fn rotated(gamma: f64) -> QuadraticGame {
        let r = Mat::from_row_slice(2, 2, &[gamma.cos(), -gamma.sin(), gamma.sin(), gamma.cos()]);
        let m1 = Mat::from_row_slice(2, 2, &[1.2, -1.0, -1.0, 1.0]);
        let m2 = &r * Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.2]) * r.transpose();
        let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
        let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
        QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1).unwrap()).unwrap()
    }

    fn first_event(gamma: f64) -> (EigenExpansion, BlowupEvent) {
        let g = rotated(gamma);
        for phi in param_grid(20) {
            let exp = build_expansion(&g, Family::E1, phi).unwrap();
            let rep = find_blowups(&exp, cutoffs(&g));
            if let Some(ev) = rep.events.into_iter().next() {
                return (exp, ev);
            }
        }
        panic!("no event for gamma = {gamma}");
    }

    #[test]
    fn bounded_rotation_has_no_events() {
        let g = rotated(FRAC_PI_8);
        let locus = blowup_locus(&g, Family::E1, &param_grid(20));
        assert_eq!(locus.nonempty_count(), 0);
        assert!(locus.polyline().is_empty());
    }

    #[test]
    fn steep_rotation_blows_up() {
        let g = rotated(7.0 * std::f64::consts::PI / 16.0);
        let locus = blowup_locus(&g, Family::E1, &param_grid(20));
        assert!(locus.nonempty_count() >= 16);
        assert!(locus.to_csv().lines().count() > 1);
    }

    #[test]
    fn asymptote_alignment_improves() {
        let (exp, ev) = first_event(7.0 * std::f64::consts::PI / 16.0);
        assert!(!ev.removable);
        let check = verify_asymptote(&exp, &ev, &default_approach(ev.t_star)).unwrap();
        assert!(check.monotone);
        let closest = check.samples.iter().filter(|s| ((s.t / ev.t_star) - 1.0).abs() < 2e-5);
        for s in closest {
            assert!(s.alignment_error < 1e-3);
            assert!((s.scale_ratio - 1.0).abs() < 1e-2);
        }
        let sides: Vec<f64> = check.samples.iter().map(|s| s.side).collect();
        assert!(sides.contains(&1.0) && sides.contains(&-1.0));
    }

    #[test]
    fn divergence_grows_tenfold_per_decade() {
        let (exp, ev) = first_event(9.0 * std::f64::consts::PI / 16.0);
        for sign in [-1.0, 1.0] {
            let n3 = exp.curve_point(ev.t_star * (1.0 + sign * 1e-3)).unwrap().norm();
            let n4 = exp.curve_point(ev.t_star * (1.0 + sign * 1e-4)).unwrap().norm();
            let ratio = n4 / n3;
            assert!(ratio > 10.0 / 3.0 && ratio < 30.0, "{ratio}");
        }
    }

    #[test]
    fn direct_solve_diverges_at_theta_star() {
        let g = rotated(7.0 * std::f64::consts::PI / 16.0);
        let (_, ev) = first_event(7.0 * std::f64::consts::PI / 16.0);
        let th = crate::equilibria::SvoAngles::new(ev.theta_star[0], ev.theta_star[1] + 1e-6).unwrap();
        let u_n = crate::equilibria::classical_points(&g).unwrap().u_nash;
        match svo_nash_direct(&g, th) {
            Ok(u) => assert!(u.norm() > 100.0 * u_n.norm()),
            Err(e) => assert!(matches!(e, SvoError::SingularAtTheta(..))),
        }
    }

    #[test]
    fn near_blowup_rejected() {
        let (exp, ev) = first_event(7.0 * std::f64::consts::PI / 16.0);
        assert!(matches!(exp.curve_point(ev.t_star), Err(SvoError::NearBlowup { .. })));
        assert!(verify_asymptote(&exp, &ev, &[ev.t_star * (1.0 + 1e-9)]).is_err());
        assert!(verify_asymptote(&exp, &ev, &[ev.t_star * 2.0]).is_err());
    }

    #[test]
    fn events_bounded_by_dimension() {
        let g = rotated(9.0 * std::f64::consts::PI / 16.0);
        for phi in param_grid(10) {
            let exp = build_expansion(&g, Family::E1, phi).unwrap();
            assert!(find_blowups(&exp, cutoffs(&g)).events.len() <= 2);
        }
    }

    #[test]
    fn report_json_shape() {
        let (exp, _) = first_event(7.0 * std::f64::consts::PI / 16.0);
        let rep = find_blowups(&exp, [1.6, 1.6]);
        let v = serde_json::to_value(&rep).unwrap();
        let ev = &v["events"][0];
        for key in ["lambda", "t_star", "theta_star", "u_fin", "u_inf", "removable"] {
            assert!(ev.get(key).is_some(), "{key}");
        }
        assert_eq!(v["family"], "e1");
    }
}
