//! Open-loop LTV-quadratic games.
//!
//! States `x_1..x_K` follow `x_{k+1} = F_k x_k + G1_k u1_k + G2_k u2_k`
//! from a given `x_0`, controls are indexed `0..K-1`. Player i minimizes
//!
//! ```text
//! J_i = 1/2 sum_k [ x_k^T Q_ik x_k - 2 (Qtrk_ik xbar_ik)^T x_k + xbar_ik^T Qtrk_ik xbar_ik ]
//!     + 1/2 sum_k u_ik^T R_ik u_ik
//! ```
//!
//! which reduces to `1/2 (x - xbar)^T Q (x - xbar)` when the tracking weight
//! equals `Q`. Stacking gives `x = H x0 + Gbar1 u1 + Gbar2 u2` and a
//! [`QuadraticGame`] with `M_i = Gbar^T Q_i Gbar + R_i` on the own block and
//! `c_i = Gbar^T (Q_i H x0 - Qtrk_i xbar_i)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::blowup::BlowupEvent;
use crate::error::{Result, SvoError};
use crate::game::{matrix_from_rows, Dims, QuadraticGame};
use crate::linalg::{block_diag, sym_min_eig, Mat, Vector};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct LtvSystem {
    pub horizon: usize,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    /// `F_0..F_{K-1}`.
    pub f: Vec<Mat>,
    pub g1: Vec<Mat>,
    pub g2: Vec<Mat>,
    pub x0: Vector,
    /// Step length, only used to label trajectories.
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtvCosts {
    /// Net state weights `Q_i1..Q_iK`.
    pub q1: Vec<Mat>,
    pub q2: Vec<Mat>,
    /// Weights the desired trajectory enters through; `None` means `Q_i`.
    pub q1_trk: Option<Vec<Mat>>,
    pub q2_trk: Option<Vec<Mat>>,
    /// `R_i0..R_i{K-1}`.
    pub r1: Vec<Mat>,
    pub r2: Vec<Mat>,
    /// `xbar_i1..xbar_iK`.
    pub xbar1: Vec<Vector>,
    pub xbar2: Vec<Vector>,
}

/// Lifted dynamics `x = H x0 + Gbar1 u1 + Gbar2 u2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutOperators {
    /// `(nK) x n`.
    pub h: Mat,
    /// `(nK) x (nK)` block lower triangular transition products.
    pub f: Mat,
    pub gbar1: Mat,
    pub gbar2: Mat,
}

#[derive(Debug, Clone)]
pub struct LtvGame {
    pub system: LtvSystem,
    pub costs: LtvCosts,
    pub game: QuadraticGame,
    pub ops: RolloutOperators,
    /// Constants dropped from `J_1`, `J_2`.
    pub constants: [f64; 2],
}

fn shape_err(what: impl Into<String>) -> SvoError {
    SvoError::ShapeMismatch(what.into())
}

fn check_list(name: &str, list: &[Mat], len: usize, rows: usize, cols: usize) -> Result<()> {
    if list.len() != len {
        return Err(shape_err(format!("{name} has {} entries, expected {len}", list.len())));
    }
    for (k, m) in list.iter().enumerate() {
        if m.shape() != (rows, cols) {
            return Err(shape_err(format!("{name}[{k}] is {:?}, expected ({rows}, {cols})", m.shape())));
        }
    }
    Ok(())
}

impl LtvSystem {
    fn validate(&self) -> Result<()> {
        let (k, n) = (self.horizon, self.n);
        if k == 0 || n == 0 || self.m1 == 0 || self.m2 == 0 {
            return Err(shape_err("horizon and dimensions must be positive"));
        }
        check_list("F", &self.f, k, n, n)?;
        check_list("G1", &self.g1, k, n, self.m1)?;
        check_list("G2", &self.g2, k, n, self.m2)?;
        if self.x0.len() != n {
            return Err(shape_err(format!("x0 has length {}, expected {n}", self.x0.len())));
        }
        Ok(())
    }

    /// Step-by-step simulation, returning `x_0..x_K`.
    pub fn simulate(&self, u1: &Vector, u2: &Vector) -> Result<Vec<Vector>> {
        let (k, m1, m2) = (self.horizon, self.m1, self.m2);
        if u1.len() != k * m1 || u2.len() != k * m2 {
            return Err(shape_err("control vector lengths do not match the horizon"));
        }
        let mut xs = Vec::with_capacity(k + 1);
        xs.push(self.x0.clone());
        for step in 0..k {
            let next = &self.f[step] * &xs[step]
                + &self.g1[step] * u1.rows(step * m1, m1)
                + &self.g2[step] * u2.rows(step * m2, m2);
            xs.push(next);
        }
        Ok(xs)
    }
}

impl LtvCosts {
    fn validate(&self, sys: &LtvSystem, tol: &Tolerances) -> Result<()> {
        let (k, n) = (sys.horizon, sys.n);
        check_list("Q1", &self.q1, k, n, n)?;
        check_list("Q2", &self.q2, k, n, n)?;
        if let Some(q) = &self.q1_trk {
            check_list("Q1_trk", q, k, n, n)?;
        }
        if let Some(q) = &self.q2_trk {
            check_list("Q2_trk", q, k, n, n)?;
        }
        check_list("R1", &self.r1, k, sys.m1, sys.m1)?;
        check_list("R2", &self.r2, k, sys.m2, sys.m2)?;
        for (name, xs) in [("xbar1", &self.xbar1), ("xbar2", &self.xbar2)] {
            if xs.len() != k || xs.iter().any(|x| x.len() != n) {
                return Err(shape_err(format!("{name} must hold {k} vectors of length {n}")));
            }
        }
        for (player, rs) in [(1, &self.r1), (2, &self.r2)] {
            for (step, r) in rs.iter().enumerate() {
                let scale = r.norm().max(1.0);
                if sym_min_eig(r) <= tol.pd * scale {
                    return Err(SvoError::ControlCostNotPd { player, step });
                }
            }
        }
        Ok(())
    }

    fn tracking(&self, player: usize) -> &[Mat] {
        match player {
            1 => self.q1_trk.as_deref().unwrap_or(&self.q1),
            _ => self.q2_trk.as_deref().unwrap_or(&self.q2),
        }
    }

    /// Stage-summed cost of player 1 or 2 along a state trajectory
    /// `x_0..x_K` with stacked controls.
    pub fn stage_cost(&self, player: usize, xs: &[Vector], u_own: &Vector) -> f64 {
        let (q, r, xbar) = match player {
            1 => (&self.q1, &self.r1, &self.xbar1),
            _ => (&self.q2, &self.r2, &self.xbar2),
        };
        let trk = self.tracking(player);
        let m = r[0].nrows();
        let mut total = 0.0;
        for k in 0..q.len() {
            let x = &xs[k + 1];
            let tx = &trk[k] * &xbar[k];
            total += 0.5 * x.dot(&(&q[k] * x)) - tx.dot(x) + 0.5 * xbar[k].dot(&tx);
            let u = u_own.rows(k * m, m);
            total += 0.5 * u.dot(&(&r[k] * u));
        }
        total
    }
}

/// Lifted rollout matrices.
pub fn rollout_operators(sys: &LtvSystem) -> Result<RolloutOperators> {
    sys.validate()?;
    let (k, n) = (sys.horizon, sys.n);
    let mut h = Mat::zeros(n * k, n);
    let mut acc = Mat::identity(n, n);
    for step in 0..k {
        acc = &sys.f[step] * acc;
        h.view_mut((step * n, 0), (n, n)).copy_from(&acc);
    }
    // Block (row, col) maps the input applied at step `col` to x_{row+1}:
    // F_row ... F_{col+1}, identity on the diagonal.
    let mut f = Mat::zeros(n * k, n * k);
    for col in 0..k {
        let mut prod = Mat::identity(n, n);
        for row in col..k {
            if row > col {
                prod = &sys.f[row] * prod;
            }
            f.view_mut((row * n, col * n), (n, n)).copy_from(&prod);
        }
    }
    let gbar1 = &f * block_diag(&sys.g1);
    let gbar2 = &f * block_diag(&sys.g2);
    Ok(RolloutOperators { h, f, gbar1, gbar2 })
}

fn stack(vs: &[Vector]) -> Vector {
    Vector::from_iterator(vs.iter().map(|v| v.len()).sum(), vs.iter().flat_map(|v| v.iter().copied()))
}

/// Assembles the quadratic game of an LTV system.
pub fn build_ltv_game(system: LtvSystem, costs: LtvCosts) -> Result<LtvGame> {
    build_ltv_game_with(system, costs, Tolerances::default())
}

pub fn build_ltv_game_with(system: LtvSystem, costs: LtvCosts, tol: Tolerances) -> Result<LtvGame> {
    let ops = rollout_operators(&system)?;
    costs.validate(&system, &tol)?;
    let (k, m1, m2) = (system.horizon, system.m1, system.m2);
    let (d1, d2) = (k * m1, k * m2);
    let gbar = crate::linalg::block2x2(&ops.gbar1, &ops.gbar2, &Mat::zeros(0, d1), &Mat::zeros(0, d2));
    let hx0 = &ops.h * &system.x0;

    let mut ms = Vec::with_capacity(2);
    let mut cs = Vec::with_capacity(2);
    let mut constants = [0.0; 2];
    for player in [1usize, 2] {
        let (q, r, xbar) = match player {
            1 => (&costs.q1, &costs.r1, &costs.xbar1),
            _ => (&costs.q2, &costs.r2, &costs.xbar2),
        };
        let q_big = block_diag(q);
        let trk_big = block_diag(costs.tracking(player));
        let xbar_big = stack(xbar);
        let trk_x = &trk_big * &xbar_big;
        let ell = &q_big * &hx0 - &trk_x;
        let mut m = gbar.transpose() * &q_big * &gbar;
        let r_big = block_diag(r);
        let off = if player == 1 { 0 } else { d1 };
        let own = r_big.nrows();
        let mut view = m.view_mut((off, off), (own, own));
        view += &r_big;
        ms.push(m);
        cs.push(gbar.transpose() * &ell);
        constants[player - 1] = 0.5 * hx0.dot(&(&q_big * &hx0)) - trk_x.dot(&hx0) + 0.5 * xbar_big.dot(&trk_x);
    }
    let c2 = cs.pop().unwrap();
    let c1 = cs.pop().unwrap();
    let m2 = ms.pop().unwrap();
    let m1 = ms.pop().unwrap();
    let game = QuadraticGame::with_tolerances(m1, m2, c1, c2, Dims::new(d1, d2)?, tol)?;
    Ok(LtvGame {
        system,
        costs,
        game,
        ops,
        constants,
    })
}

impl LtvGame {
    /// `x_0..x_K` for a joint control vector `u = (u1, u2)`.
    pub fn rollout(&self, u: &Vector) -> Result<Vec<Vector>> {
        let d1 = self.game.dims().d1;
        if u.len() != self.game.dim() {
            return Err(shape_err(format!("u has length {}, expected {}", u.len(), self.game.dim())));
        }
        let x = &self.ops.h * &self.system.x0 + &self.ops.gbar1 * u.rows(0, d1) + &self.ops.gbar2 * u.rows(d1, u.len() - d1);
        Ok(self.split_states(&x, Some(self.system.x0.clone())))
    }

    /// Linear part of the rollout only: `Gbar u`, with `x_0 = 0`.
    pub fn rollout_direction(&self, u: &Vector) -> Vec<Vector> {
        let d1 = self.game.dims().d1;
        let x = &self.ops.gbar1 * u.rows(0, d1) + &self.ops.gbar2 * u.rows(d1, u.len() - d1);
        self.split_states(&x, None)
    }

    fn split_states(&self, x: &Vector, x0: Option<Vector>) -> Vec<Vector> {
        let n = self.system.n;
        let mut out = Vec::with_capacity(self.system.horizon + 1);
        out.push(x0.unwrap_or_else(|| Vector::zeros(n)));
        for k in 0..self.system.horizon {
            out.push(x.rows(k * n, n).into_owned());
        }
        out
    }

    /// Stage-summed cost of a player for joint controls `u`.
    pub fn stage_cost(&self, player: usize, u: &Vector) -> Result<f64> {
        let d1 = self.game.dims().d1;
        let u1 = u.rows(0, d1).into_owned();
        let u2 = u.rows(d1, u.len() - d1).into_owned();
        let xs = self.system.simulate(&u1, &u2)?;
        Ok(self.costs.stage_cost(player, &xs, if player == 1 { &u1 } else { &u2 }))
    }
}

/// State-space images of an event's asymptotes.
#[derive(Debug, Clone)]
pub struct TrajectoryAsymptotes {
    pub x_fin: Vec<Vector>,
    pub x_inf: Vec<Vector>,
}

pub fn trajectory_asymptotes(ltv: &LtvGame, event: &BlowupEvent) -> Result<TrajectoryAsymptotes> {
    let (Some(fin), Some(inf)) = (&event.u_fin, &event.u_inf) else {
        return Err(SvoError::PreconditionFailed("event has no asymptotes".into()));
    };
    Ok(TrajectoryAsymptotes {
        x_fin: ltv.rollout_direction(fin),
        x_inf: ltv.rollout_direction(inf),
    })
}

/// Total number of sign changes of the finite-difference velocity of each
/// state component. Values below `1e-9` of the largest velocity count as
/// zero and are skipped.
pub fn velocity_sign_changes(traj: &[Vector]) -> usize {
    if traj.len() < 3 {
        return 0;
    }
    let n = traj[0].len();
    let vel: Vec<Vector> = traj.windows(2).map(|w| &w[1] - &w[0]).collect();
    let vmax = vel.iter().map(|v| v.amax()).fold(0.0, f64::max);
    let floor = 1e-9 * vmax;
    let mut count = 0;
    for i in 0..n {
        let mut last = 0.0f64;
        for v in &vel {
            let x = v[i];
            if x.abs() <= floor {
                continue;
            }
            if last != 0.0 && x.signum() != last {
                count += 1;
            }
            last = x.signum();
        }
    }
    count
}

/// Largest per-player position error `max_k ||p_ik - pbar_ik||` for a
/// planar two-agent state `(p1x, p1y, p2x, p2y)`.
pub fn max_position_deviation(traj: &[Vector], xbar: &[Vector]) -> f64 {
    traj.iter()
        .skip(1)
        .zip(xbar)
        .map(|(x, r)| {
            let e = x - r;
            e.rows(0, 2).norm().max(e.rows(2, 2).norm())
        })
        .fold(0.0, f64::max)
}

/// Trajectory CSV with columns `k,t_phys,p1x,p1y,p2x,p2y` for planar
/// two-agent states, or `k,t_phys,x_0..x_{n-1}` otherwise.
pub fn trajectory_csv(traj: &[Vector], dt: f64) -> String {
    let n = traj.first().map_or(0, |x| x.len());
    let mut out = String::from("k,t_phys");
    if n == 4 {
        out.push_str(",p1x,p1y,p2x,p2y");
    } else {
        for i in 0..n {
            let _ = write!(out, ",x_{i}");
        }
    }
    out.push('\n');
    for (k, x) in traj.iter().enumerate() {
        let _ = write!(out, "{},{}", k, k as f64 * dt);
        for v in x.iter() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Parameters of the two-agent planar single-integrator scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingleIntegratorParams {
    pub horizon: usize,
    pub dt: f64,
    pub q_trk: f64,
    /// Tracking weight for states `k >= final_from`.
    pub q_trk_final: f64,
    pub final_from: usize,
    pub q_trk_cross: f64,
    pub q_prx: f64,
    pub r: f64,
    pub start: [f64; 4],
    pub goal: [f64; 4],
}

impl Default for SingleIntegratorParams {
    fn default() -> Self {
        Self {
            horizon: 50,
            dt: 0.04,
            q_trk: 20.0,
            q_trk_final: 30.0,
            final_from: 45,
            q_trk_cross: 0.1,
            q_prx: 6.0,
            r: 1.0,
            start: [-1.0, 0.0, 0.0, -1.0],
            goal: [1.0, 0.0, 0.0, 1.0],
        }
    }
}

/// Two agents in the plane, each commanding its own velocity, tracking a
/// shared straight-line plan while being rewarded for separation.
pub fn single_integrator_scenario() -> LtvGame {
    single_integrator_with(&SingleIntegratorParams::default()).expect("built-in scenario is valid")
}

pub fn single_integrator_with(p: &SingleIntegratorParams) -> Result<LtvGame> {
    let k = p.horizon;
    let i2 = Mat::identity(2, 2);
    let z2 = Mat::zeros(2, 2);
    let g1 = crate::linalg::block2x2(&i2, &Mat::zeros(2, 0), &z2, &Mat::zeros(2, 0)) * p.dt;
    let g2 = crate::linalg::block2x2(&z2, &Mat::zeros(2, 0), &i2, &Mat::zeros(2, 0)) * p.dt;
    let system = LtvSystem {
        horizon: k,
        n: 4,
        m1: 2,
        m2: 2,
        f: vec![Mat::identity(4, 4); k],
        g1: vec![g1; k],
        g2: vec![g2; k],
        x0: Vector::from_row_slice(&p.start),
        dt: p.dt,
    };
    let prx = crate::linalg::block2x2(&i2, &(-&i2), &(-&i2), &i2) * p.q_prx;
    let mut q1_trk = Vec::with_capacity(k);
    let mut q2_trk = Vec::with_capacity(k);
    for step in 1..=k {
        let q = if step >= p.final_from { p.q_trk_final } else { p.q_trk };
        q1_trk.push(block_diag(&[&i2 * q, &i2 * p.q_trk_cross]));
        q2_trk.push(block_diag(&[&i2 * p.q_trk_cross, &i2 * q]));
    }
    let start = Vector::from_row_slice(&p.start);
    let goal = Vector::from_row_slice(&p.goal);
    let xbar: Vec<Vector> = (1..=k)
        .map(|step| {
            let s = step as f64 / k as f64;
            &start * (1.0 - s) + &goal * s
        })
        .collect();
    let costs = LtvCosts {
        q1: q1_trk.iter().map(|q| q - &prx).collect(),
        q2: q2_trk.iter().map(|q| q - &prx).collect(),
        q1_trk: Some(q1_trk),
        q2_trk: Some(q2_trk),
        r1: vec![&i2 * p.r; k],
        r2: vec![&i2 * p.r; k],
        xbar1: xbar.clone(),
        xbar2: xbar,
    };
    build_ltv_game(system, costs)
}

/// A matrix given once for all steps or once per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatSeq {
    Constant(Vec<Vec<f64>>),
    PerStep(Vec<Vec<Vec<f64>>>),
}

/// A vector given once for all steps or once per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VecSeq {
    Constant(Vec<f64>),
    PerStep(Vec<Vec<f64>>),
}

impl MatSeq {
    fn expand(&self, name: &str, k: usize) -> Result<Vec<Mat>> {
        match self {
            MatSeq::Constant(rows) => Ok(vec![matrix_from_rows(name, rows)?; k]),
            MatSeq::PerStep(list) => list.iter().map(|rows| matrix_from_rows(name, rows)).collect(),
        }
    }
}

impl VecSeq {
    fn expand(&self, k: usize) -> Vec<Vector> {
        match self {
            VecSeq::Constant(v) => vec![Vector::from_row_slice(v); k],
            VecSeq::PerStep(list) => list.iter().map(|v| Vector::from_row_slice(v)).collect(),
        }
    }
}

/// LTV scenario file contents.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LtvSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Overrides for the preset's parameters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset_params: Option<SingleIntegratorParams>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<usize>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub f: Option<MatSeq>,
    #[serde(rename = "G1", skip_serializing_if = "Option::is_none")]
    pub g1: Option<MatSeq>,
    #[serde(rename = "G2", skip_serializing_if = "Option::is_none")]
    pub g2: Option<MatSeq>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(rename = "Q1", skip_serializing_if = "Option::is_none")]
    pub q1: Option<MatSeq>,
    #[serde(rename = "Q2", skip_serializing_if = "Option::is_none")]
    pub q2: Option<MatSeq>,
    #[serde(rename = "Q1_trk", skip_serializing_if = "Option::is_none")]
    pub q1_trk: Option<MatSeq>,
    #[serde(rename = "Q2_trk", skip_serializing_if = "Option::is_none")]
    pub q2_trk: Option<MatSeq>,
    #[serde(rename = "R1", skip_serializing_if = "Option::is_none")]
    pub r1: Option<MatSeq>,
    #[serde(rename = "R2", skip_serializing_if = "Option::is_none")]
    pub r2: Option<MatSeq>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xbar1: Option<VecSeq>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xbar2: Option<VecSeq>,
}

pub const SINGLE_INTEGRATOR_PRESET: &str = "single_integrator_2d";

impl LtvSpec {
    pub fn build(&self, tol: Tolerances) -> Result<LtvGame> {
        if let Some(preset) = &self.preset {
            if preset != SINGLE_INTEGRATOR_PRESET {
                return Err(SvoError::Scenario(format!("unknown preset `{preset}`")));
            }
            let explicit = self.horizon.is_some() || self.f.is_some() || self.q1.is_some() || self.x0.is_some();
            if explicit {
                return Err(SvoError::Scenario("a preset cannot be combined with explicit system fields".into()));
            }
            let params = self.preset_params.clone().unwrap_or_default();
            let g = single_integrator_with(&params)?;
            return Ok(LtvGame {
                game: g.game.retol(tol),
                ..g
            });
        }
        let need = |name: &str| SvoError::Scenario(format!("missing field `{name}`"));
        let k = self.horizon.ok_or_else(|| need("K"))?;
        let n = self.n.ok_or_else(|| need("n"))?;
        let m1 = self.m1.ok_or_else(|| need("m1"))?;
        let m2 = self.m2.ok_or_else(|| need("m2"))?;
        let mats = |seq: &Option<MatSeq>, name: &str| -> Result<Vec<Mat>> { seq.as_ref().ok_or_else(|| need(name))?.expand(name, k) };
        let system = LtvSystem {
            horizon: k,
            n,
            m1,
            m2,
            f: mats(&self.f, "F")?,
            g1: mats(&self.g1, "G1")?,
            g2: mats(&self.g2, "G2")?,
            x0: Vector::from_row_slice(self.x0.as_ref().ok_or_else(|| need("x0"))?),
            dt: self.dt.unwrap_or(1.0),
        };
        let costs = LtvCosts {
            q1: mats(&self.q1, "Q1")?,
            q2: mats(&self.q2, "Q2")?,
            q1_trk: self.q1_trk.as_ref().map(|s| s.expand("Q1_trk", k)).transpose()?,
            q2_trk: self.q2_trk.as_ref().map(|s| s.expand("Q2_trk", k)).transpose()?,
            r1: mats(&self.r1, "R1")?,
            r2: mats(&self.r2, "R2")?,
            xbar1: self.xbar1.as_ref().ok_or_else(|| need("xbar1"))?.expand(k),
            xbar2: self.xbar2.as_ref().ok_or_else(|| need("xbar2"))?.expand(k),
        };
        build_ltv_game_with(system, costs, tol)
    }
}
