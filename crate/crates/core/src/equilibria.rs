//! Classical equilibrium points and the direct SVO-Nash solve.
//!
//! Everything is in column-vector form: the Nash point solves
//! `M^T u = -a`, the SVO-Nash point solves
//! `(C M^T + S N^T) u = -(C a + S b)` with
//! `C = blkdg(cos th1 I, cos th2 I)` and `S = blkdg(sin th1 I, sin th2 I)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Result, SvoError};
use crate::game::{Player, QuadraticGame};
use crate::linalg::{solve_checked, Mat, Vector};

/// A pair of social-value-orientation angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SvoAngles {
    pub theta1: f64,
    pub theta2: f64,
}

impl SvoAngles {
    /// Cooperative angles, each in `[0, pi/2]`.
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        for th in [theta1, theta2] {
            if !th.is_finite() || !(0.0..=FRAC_PI_2).contains(&th) {
                return Err(SvoError::AngleOutOfRange(th));
            }
        }
        Ok(Self { theta1, theta2 })
    }

    /// Any finite angles, including the competitive range `theta_i < 0`.
    /// Well-posedness is still checked by the solvers.
    pub fn unrestricted(theta1: f64, theta2: f64) -> Result<Self> {
        for th in [theta1, theta2] {
            if !th.is_finite() || th.abs() > FRAC_PI_2 {
                return Err(SvoError::AngleOutOfRange(th));
            }
        }
        Ok(Self { theta1, theta2 })
    }

    pub fn of(&self, player: Player) -> f64 {
        match player {
            Player::One => self.theta1,
            Player::Two => self.theta2,
        }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.theta1, self.theta2]
    }
}

/// `J_i(u) = 1/2 u^T M_i u + c_i^T u`.
pub fn cost(game: &QuadraticGame, player: Player, u: &Vector) -> f64 {
    0.5 * u.dot(&(game.quadratic(player) * u)) + game.linear(player).dot(u)
}

/// `cos(theta_i) J_i(u) + sin(theta_i) J_{-i}(u)`.
pub fn svo_cost(game: &QuadraticGame, player: Player, theta: f64, u: &Vector) -> f64 {
    theta.cos() * cost(game, player, u) + theta.sin() * cost(game, player.other(), u)
}

/// Gradient of player i's SVO cost with respect to their own action only.
pub fn svo_own_gradient(game: &QuadraticGame, player: Player, theta: f64, u: &Vector) -> Vector {
    let grad = |p: Player| game.quadratic(p) * u + game.linear(p);
    let full = grad(player) * theta.cos() + grad(player.other()) * theta.sin();
    let d1 = game.dims().d1;
    match player {
        Player::One => full.rows(0, d1).into_owned(),
        Player::Two => full.rows(d1, game.dims().d2).into_owned(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    pub nash: f64,
    pub altruistic: f64,
    pub player1: f64,
    pub player2: f64,
    pub social: f64,
    /// Relative difference between the `(M1 + M2)` and `(M + N)` routes to
    /// the social optimum.
    pub social_crosscheck: f64,
}

/// The five classical points of a quadratic game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSet {
    #[serde(serialize_with = "ser_vec")]
    pub u_nash: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub u_altruistic: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub u_player1: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub u_player2: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub u_social: Vector,
    pub residuals: Residuals,
}

pub(crate) fn ser_vec<S: serde::Serializer>(v: &Vector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

impl EquilibriumSet {
    /// Social optimum computed through `M + N` instead of `M1 + M2`.
    pub fn social_via_aggregates(game: &QuadraticGame) -> Result<Vector> {
        let agg = game.aggregates();
        let tol = game.tol();
        let sum = (&agg.m + &agg.n).transpose();
        Ok(solve_checked(&sum, &-(&agg.a + &agg.b), "M+N", tol.inv, tol.res)?.0)
    }
}

/// Nash, altruistic Nash, per-player optima and the social optimum.
pub fn classical_points(game: &QuadraticGame) -> Result<EquilibriumSet> {
    let agg = game.aggregates();
    let tol = game.tol();
    let solve = |m: &Mat, rhs: Vector, name: &'static str| solve_checked(m, &rhs, name, tol.inv, tol.res);

    let (u_nash, r_nash) = solve(&agg.m.transpose(), -&agg.a, "M")?;
    let (u_alt, r_alt) = solve(&agg.n.transpose(), -&agg.b, "N")?;
    let (u_p1, r_p1) = solve(game.m1(), -game.c1(), "M1")?;
    let (u_p2, r_p2) = solve(game.m2(), -game.c2(), "M2")?;
    let (u_soc, r_soc) = solve(&(game.m1() + game.m2()), -(game.c1() + game.c2()), "M1+M2")?;
    let u_soc_alt = EquilibriumSet::social_via_aggregates(game)?;
    let crosscheck = if u_soc.norm() == 0.0 {
        u_soc_alt.norm()
    } else {
        (&u_soc - &u_soc_alt).norm() / u_soc.norm()
    };

    Ok(EquilibriumSet {
        u_nash,
        u_altruistic: u_alt,
        u_player1: u_p1,
        u_player2: u_p2,
        u_social: u_soc,
        residuals: Residuals {
            nash: r_nash,
            altruistic: r_alt,
            player1: r_p1,
            player2: r_p2,
            social: r_soc,
            social_crosscheck: crosscheck,
        },
    })
}

/// The linear system `(C M^T + S N^T) u = -(C a + S b)` defining the
/// SVO-Nash equilibrium.
pub fn svo_system(game: &QuadraticGame, theta: SvoAngles) -> (Mat, Vector) {
    let agg = game.aggregates();
    let d1 = game.dims().d1;
    let d = game.dim();
    let (c1, s1) = (theta.theta1.cos(), theta.theta1.sin());
    let (c2, s2) = (theta.theta2.cos(), theta.theta2.sin());
    let mt = agg.m.transpose();
    let nt = agg.n.transpose();
    let mut k = Mat::zeros(d, d);
    let mut rhs = Vector::zeros(d);
    for i in 0..d {
        let (c, s) = if i < d1 { (c1, s1) } else { (c2, s2) };
        for j in 0..d {
            k[(i, j)] = c * mt[(i, j)] + s * nt[(i, j)];
        }
        rhs[i] = -(c * agg.a[i] + s * agg.b[i]);
    }
    (k, rhs)
}

/// Solves for the SVO-Nash equilibrium `u_theta` directly.
pub fn svo_nash_direct(game: &QuadraticGame, theta: SvoAngles) -> Result<Vector> {
    let tol = game.tol();
    for player in [Player::One, Player::Two] {
        let th = theta.of(player);
        if th < 0.0 {
            if !game.is_pd(&game.effective_own_block(player, th)) {
                return Err(SvoError::NearCutoff {
                    player: player.index(),
                    theta: th,
                    cutoff: 0.0,
                });
            }
            continue;
        }
        let cutoff = game.wellposed_cutoff(player)?;
        if cutoff < FRAC_PI_2 && th >= cutoff - tol.theta {
            return Err(SvoError::NearCutoff {
                player: player.index(),
                theta: th,
                cutoff,
            });
        }
    }
    let (k, rhs) = svo_system(game, theta);
    match solve_checked(&k, &rhs, "SVO system", tol.inv, tol.res) {
        Ok((u, _)) => Ok(u),
        Err(SvoError::SingularSystem(_)) => Err(SvoError::SingularAtTheta(theta.theta1, theta.theta2)),
        Err(e) => Err(e),
    }
}
