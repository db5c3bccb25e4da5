//! Two-player quadratic games `J_i(u) = 1/2 u^T M_i u + c_i^T u` over the
//! joint action `u = (u_1, u_2)`.
//!
//! Block layout:
//!
//! ```text
//! M1 = [ A1  B1^T ]     M2 = [ D2    B2 ]     c1 = (a1, b1)
//!      [ B1  D1   ]          [ B2^T  A2 ]     c2 = (b2, a2)
//! ```
//!
//! `A_i` is player i's quadratic dependence on their own action, `D_i` on the
//! opponent's action, `B_i` the bilinear coupling (`d_{-i} x d_i`). Note that
//! `c2` stores the opponent-linear part `b2` first.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SvoError};
use crate::linalg::{block2x2, concat, rcond, spectral_norm, sym_min_eig, sym_part, Mat, Vector};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn index(self) -> usize {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.index())
    }
}

/// Action dimensions of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub d1: usize,
    pub d2: usize,
}

impl Dims {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(SvoError::DimensionMismatch(format!(
                "action dimensions must be positive, got d1={d1}, d2={d2}"
            )));
        }
        Ok(Self { d1, d2 })
    }

    pub fn total(&self) -> usize {
        self.d1 + self.d2
    }

    pub fn of(&self, player: Player) -> usize {
        match player {
            Player::One => self.d1,
            Player::Two => self.d2,
        }
    }
}

/// One player's view of the cost subblocks.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerBlocks {
    /// `A_i`, `d_i x d_i`.
    pub own: Mat,
    /// `B_i`, `d_{-i} x d_i`.
    pub cross: Mat,
    /// `D_i`, `d_{-i} x d_{-i}`.
    pub other: Mat,
    /// `a_i`, length `d_i`.
    pub own_lin: Vector,
    /// `b_i`, length `d_{-i}`.
    pub other_lin: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subblocks {
    pub p1: PlayerBlocks,
    pub p2: PlayerBlocks,
}

impl Subblocks {
    pub fn player(&self, player: Player) -> &PlayerBlocks {
        match player {
            Player::One => &self.p1,
            Player::Two => &self.p2,
        }
    }
}

/// The aggregate first-order systems. The Nash point solves `M^T u = -a`,
/// the altruistic Nash `N^T u = -b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMatrices {
    /// `[A1 B2; B1 A2]`.
    pub m: Mat,
    /// `[D2 B1^T; B2^T D1]`.
    pub n: Mat,
    /// `(a1, a2)`.
    pub a: Vector,
    /// `(b2, b1)`: the opponent-linear terms ordered by the action they
    /// multiply, so that `a + b = c1 + c2`.
    pub b: Vector,
}

/// Row-major JSON interchange form `{d1, d2, M1, M2, c1, c2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub d1: usize,
    pub d2: usize,
    #[serde(rename = "M1")]
    pub m1: Vec<Vec<f64>>,
    #[serde(rename = "M2")]
    pub m2: Vec<Vec<f64>>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct QuadraticGame {
    dims: Dims,
    m1: Mat,
    m2: Mat,
    c1: Vector,
    c2: Vector,
    asymmetry: [f64; 2],
    blocks: Subblocks,
    tol: Tolerances,
    cutoffs: OnceLock<[Result<f64>; 2]>,
}

impl PartialEq for QuadraticGame {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.m1 == other.m1
            && self.m2 == other.m2
            && self.c1 == other.c1
            && self.c2 == other.c2
    }
}

impl QuadraticGame {
    /// Validates shapes and symmetry, then symmetrizes `M1`, `M2`.
    pub fn new(m1: Mat, m2: Mat, c1: Vector, c2: Vector, dims: Dims) -> Result<Self> {
        Self::with_tolerances(m1, m2, c1, c2, dims, Tolerances::default())
    }

    pub fn with_tolerances(
        m1: Mat,
        m2: Mat,
        c1: Vector,
        c2: Vector,
        dims: Dims,
        tol: Tolerances,
    ) -> Result<Self> {
        let d = dims.total();
        for (name, m) in [("M1", &m1), ("M2", &m2)] {
            if m.shape() != (d, d) {
                return Err(SvoError::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(SvoError::DimensionMismatch(format!("{name} has non-finite entries")));
            }
        }
        for (name, c) in [("c1", &c1), ("c2", &c2)] {
            if c.len() != d {
                return Err(SvoError::DimensionMismatch(format!(
                    "{name} has length {}, expected {d}",
                    c.len()
                )));
            }
        }
        let mut asymmetry = [0.0; 2];
        for (k, (name, m)) in [("M1", &m1), ("M2", &m2)].into_iter().enumerate() {
            let asym = (m - m.transpose()).norm();
            let limit = tol.sym * m.norm();
            if asym > limit {
                return Err(SvoError::AsymmetryExceedsTolerance {
                    name,
                    asymmetry: asym,
                    tolerance: limit,
                });
            }
            asymmetry[k] = asym;
        }
        let m1 = sym_part(&m1);
        let m2 = sym_part(&m2);
        let blocks = extract_blocks(&m1, &m2, &c1, &c2, dims);
        Ok(Self {
            dims,
            m1,
            m2,
            c1,
            c2,
            asymmetry,
            blocks,
            tol,
            cutoffs: OnceLock::new(),
        })
    }

    /// Reassembles a game from its subblocks.
    pub fn from_blocks(blocks: &Subblocks, tol: Tolerances) -> Result<Self> {
        let p1 = &blocks.p1;
        let p2 = &blocks.p2;
        let dims = Dims::new(p1.own.nrows(), p2.own.nrows())?;
        let m1 = block2x2(&p1.own, &p1.cross.transpose(), &p1.cross, &p1.other);
        let m2 = block2x2(&p2.other, &p2.cross, &p2.cross.transpose(), &p2.own);
        let c1 = concat(&p1.own_lin, &p1.other_lin);
        let c2 = concat(&p2.other_lin, &p2.own_lin);
        Self::with_tolerances(m1, m2, c1, c2, dims, tol)
    }

    pub fn from_spec(spec: &GameSpec) -> Result<Self> {
        Self::from_spec_with(spec, Tolerances::default())
    }

    pub fn from_spec_with(spec: &GameSpec, tol: Tolerances) -> Result<Self> {
        let dims = Dims::new(spec.d1, spec.d2)?;
        let m1 = matrix_from_rows("M1", &spec.m1)?;
        let m2 = matrix_from_rows("M2", &spec.m2)?;
        Self::with_tolerances(
            m1,
            m2,
            Vector::from_vec(spec.c1.clone()),
            Vector::from_vec(spec.c2.clone()),
            dims,
            tol,
        )
    }

    pub fn to_spec(&self) -> GameSpec {
        GameSpec {
            d1: self.dims.d1,
            d2: self.dims.d2,
            m1: rows_of(&self.m1),
            m2: rows_of(&self.m2),
            c1: self.c1.iter().copied().collect(),
            c2: self.c2.iter().copied().collect(),
        }
    }

    /// Same game with different tolerances.
    pub fn retol(&self, tol: Tolerances) -> Self {
        Self {
            tol,
            cutoffs: OnceLock::new(),
            ..self.clone()
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn m1(&self) -> &Mat {
        &self.m1
    }

    pub fn m2(&self) -> &Mat {
        &self.m2
    }

    pub fn c1(&self) -> &Vector {
        &self.c1
    }

    pub fn c2(&self) -> &Vector {
        &self.c2
    }

    pub fn quadratic(&self, player: Player) -> &Mat {
        match player {
            Player::One => &self.m1,
            Player::Two => &self.m2,
        }
    }

    pub fn linear(&self, player: Player) -> &Vector {
        match player {
            Player::One => &self.c1,
            Player::Two => &self.c2,
        }
    }

    /// Frobenius norm of `M_i - M_i^T` before symmetrization.
    pub fn asymmetry(&self) -> [f64; 2] {
        self.asymmetry
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    pub fn subblocks(&self) -> &Subblocks {
        &self.blocks
    }

    pub fn aggregates(&self) -> AggregateMatrices {
        let p1 = &self.blocks.p1;
        let p2 = &self.blocks.p2;
        AggregateMatrices {
            m: block2x2(&p1.own, &p2.cross, &p1.cross, &p2.own),
            n: block2x2(&p2.other, &p1.cross.transpose(), &p2.cross.transpose(), &p1.other),
            a: concat(&p1.own_lin, &p2.own_lin),
            b: concat(&p2.other_lin, &p1.other_lin),
        }
    }

    /// `cos(theta) A_i + sin(theta) D_{-i}`: player i's effective quadratic
    /// term in their own action under SVO angle `theta`.
    pub fn effective_own_block(&self, player: Player, theta: f64) -> Mat {
        let own = &self.blocks.player(player).own;
        let other = &self.blocks.player(player.other()).other;
        own * theta.cos() + other * theta.sin()
    }

    pub(crate) fn is_pd(&self, m: &Mat) -> bool {
        sym_min_eig(m) > self.tol.pd * spectral_norm(m).max(1.0)
    }

    /// Largest angle below which player i's effective quadratic term stays
    /// positive definite. Exactly `pi/2` when `D_{-i}` is positive
    /// semidefinite.
    pub fn wellposed_cutoff(&self, player: Player) -> Result<f64> {
        let cached = self
            .cutoffs
            .get_or_init(|| [self.compute_cutoff(Player::One), self.compute_cutoff(Player::Two)]);
        cached[player.index() - 1].clone()
    }

    fn compute_cutoff(&self, player: Player) -> Result<f64> {
        let own = &self.blocks.player(player).own;
        if !self.is_pd(own) {
            return Err(SvoError::NotWellPosedAtZero {
                player: player.index(),
            });
        }
        let other = &self.blocks.player(player.other()).other;
        let psd_margin = self.tol.pd * spectral_norm(other).max(1.0);
        if sym_min_eig(other) >= -psd_margin {
            return Ok(FRAC_PI_2);
        }
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        for _ in 0..self.tol.cutoff_iters {
            if hi - lo <= self.tol.theta {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.is_pd(&self.effective_own_block(player, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    pub fn check_assumptions(&self) -> AssumptionReport {
        let b = &self.blocks;
        let mut min_eigs = Vec::new();
        let mut pd = |name: &'static str, m: &Mat| {
            min_eigs.push(NamedValue {
                name,
                value: sym_min_eig(m),
            });
            self.is_pd(m)
        };
        let a1 = pd("A1", &b.p1.own);
        let a2 = pd("A2", &b.p2.own);
        let d1 = pd("D1", &b.p1.other);
        let d2 = pd("D2", &b.p2.other);
        let m1 = pd("M1", &self.m1);
        let m2 = pd("M2", &self.m2);

        let agg = self.aggregates();
        let inv = |m: &Mat| {
            let rc = rcond(m);
            Invertibility {
                invertible: rc > self.tol.inv,
                rcond: rc,
            }
        };
        let assump_1a = a1 && a2;
        let assump_1b = assump_1a && d1 && d2;
        let assump_1c = m1 && m2;
        AssumptionReport {
            assump_1a,
            assump_1b,
            assump_1c,
            implication_violated: assump_1c && !assump_1b,
            m1: inv(&self.m1),
            m2: inv(&self.m2),
            m: inv(&agg.m),
            n: inv(&agg.n),
            min_eigs,
        }
    }
}

fn extract_blocks(m1: &Mat, m2: &Mat, c1: &Vector, c2: &Vector, dims: Dims) -> Subblocks {
    let (d1, d2) = (dims.d1, dims.d2);
    let p1 = PlayerBlocks {
        own: m1.view((0, 0), (d1, d1)).into_owned(),
        cross: m1.view((d1, 0), (d2, d1)).into_owned(),
        other: m1.view((d1, d1), (d2, d2)).into_owned(),
        own_lin: c1.rows(0, d1).into_owned(),
        other_lin: c1.rows(d1, d2).into_owned(),
    };
    let p2 = PlayerBlocks {
        own: m2.view((d1, d1), (d2, d2)).into_owned(),
        cross: m2.view((0, d1), (d1, d2)).into_owned(),
        other: m2.view((0, 0), (d1, d1)).into_owned(),
        own_lin: c2.rows(d1, d2).into_owned(),
        other_lin: c2.rows(0, d1).into_owned(),
    };
    Subblocks { p1, p2 }
}

pub(crate) fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> Result<Mat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(SvoError::DimensionMismatch(format!("{name} has ragged rows")));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub(crate) fn rows_of(m: &Mat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invertibility {
    pub invertible: bool,
    pub rcond: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: &'static str,
    pub value: f64,
}

/// Assumption tiers: 1a (`A1, A2 > 0`), 1b (adds `D1, D2 > 0`), 1c
/// (`M1, M2 > 0`), plus invertibility of `M1, M2, M, N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub assump_1a: bool,
    pub assump_1b: bool,
    pub assump_1c: bool,
    /// Set when 1c holds but 1b does not, which only tolerance edge cases
    /// can produce.
    pub implication_violated: bool,
    pub m1: Invertibility,
    pub m2: Invertibility,
    pub m: Invertibility,
    pub n: Invertibility,
    pub min_eigs: Vec<NamedValue>,
}

impl AssumptionReport {
    pub fn all_invertible(&self) -> bool {
        self.m1.invertible && self.m2.invertible && self.m.invertible && self.n.invertible
    }
}
