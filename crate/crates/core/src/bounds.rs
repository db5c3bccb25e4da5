//! Ellipsoidal containment certificates for bounded SVO-equilibria.
//!
//! For an expansion with `G = sum_i out_i g_i in_i^T`, the quadratic form
//! `P = Re(V) Re(V)^T + Im(V) Im(V)^T` built from the `in` vectors satisfies
//! `||G u||_P = ||diag(g) V^T u||`, so `G` contracts in `||.||_P` exactly
//! when every `|g_i| < 1`. For E1/E2 that holds for all `t > 0` iff every
//! core eigenvalue has positive real part.

use nalgebra::Cholesky;
use num_complex::Complex64;
use serde::Serialize;

use crate::coords::{from_theta, Family};
use crate::equilibria::{ser_vec, svo_nash_direct, SvoAngles};
use crate::error::{Result, SvoError};
use crate::expansion::{build_expansion, EigenExpansion};
use crate::game::{rows_of, QuadraticGame};
use crate::linalg::{eigen, sym_min_eig, Mat, Vector};

/// Quadratic norm `||u||_P = sqrt(u^T P u)`.
#[derive(Debug, Clone)]
pub struct PNorm {
    pub p: Mat,
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl PNorm {
    pub fn from_matrix(p: Mat) -> Option<Self> {
        let chol = Cholesky::new(p.clone())?;
        Some(Self { p, chol })
    }

    pub fn norm(&self, u: &Vector) -> f64 {
        // ||L^T u|| with P = L L^T.
        (self.chol.l().transpose() * u).norm()
    }
}

/// Builds the P-norm of an expansion from its `in` eigenvectors.
pub fn p_norm(exp: &EigenExpansion) -> Result<PNorm> {
    exp.require_diagonalizable()?;
    let (_, inn) = exp.modes();
    let re = inn.map(|z| z.re);
    let im = inn.map(|z| z.im);
    let p = &re * re.transpose() + &im * im.transpose();
    let p = (&p + p.transpose()) * 0.5;
    let defective = || SvoError::DefectiveCore {
        family: exp.family,
        param: exp.param,
        condition: exp.eigvec_condition,
    };
    let scale = p.norm().max(1.0);
    if sym_min_eig(&p) <= exp.tol.pd * scale {
        return Err(defective());
    }
    PNorm::from_matrix(p).ok_or_else(defective)
}

/// The ball `{u : ||u - center||_P < radius}`.
#[derive(Debug, Clone, Serialize)]
pub struct EllipsoidBound {
    pub family: Family,
    pub param: f64,
    #[serde(serialize_with = "ser_vec")]
    pub center: Vector,
    pub radius: f64,
    #[serde(rename = "P", serialize_with = "ser_mat")]
    pub p: Mat,
    #[serde(skip)]
    pnorm: PNorm,
}

fn ser_mat<S: serde::Serializer>(m: &Mat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows_of(m))
}

impl EllipsoidBound {
    pub fn new(family: Family, param: f64, center: Vector, radius: f64, pnorm: PNorm) -> Self {
        Self {
            family,
            param,
            center,
            radius,
            p: pnorm.p.clone(),
            pnorm,
        }
    }

    pub fn distance(&self, u: &Vector) -> f64 {
        self.pnorm.norm(&(u - &self.center))
    }

    /// `radius - ||u - center||_P`; positive inside.
    pub fn slack(&self, u: &Vector) -> f64 {
        self.radius - self.distance(u)
    }

    /// Closed-ball membership with absolute slack `eps`.
    pub fn contains(&self, u: &Vector, eps: f64) -> bool {
        self.distance(u) <= self.radius + eps
    }

    pub fn pnorm(&self) -> &PNorm {
        &self.pnorm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionCheck {
    pub contraction: bool,
    /// `1 - max_i |g_i(t)|`.
    pub margin: f64,
}

/// Whether `G(t)` contracts in the expansion's P-norm.
pub fn is_contraction(exp: &EigenExpansion, t: f64) -> ContractionCheck {
    let max = exp.g_spectrum(t).iter().map(|z| z.norm()).fold(0.0, f64::max);
    ContractionCheck {
        contraction: max < 1.0,
        margin: 1.0 - max,
    }
}

/// Ball pair around both ends of an E1/E2 curve family.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CurveBounds {
    Certified {
        /// Ball centered at the base point (`u_N` or `u_1`).
        base: EllipsoidBound,
        /// Ball centered at the target point (`u_A` or `u_2`).
        target: EllipsoidBound,
        /// Whether every eigenvalue is also real.
        spectrum_real: bool,
    },
    NotApplicable {
        family: Family,
        param: f64,
        #[serde(serialize_with = "ser_complex")]
        offending: Vec<Complex64>,
    },
}

pub(crate) fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

impl CurveBounds {
    pub fn is_certified(&self) -> bool {
        matches!(self, CurveBounds::Certified { .. })
    }
}

/// `Gamma(t)` lies in `B(base, r) ∩ B(target, r)` with
/// `r = ||target - base||_P` whenever the core spectrum has positive real
/// part.
pub fn curve_bounds(exp: &EigenExpansion) -> Result<CurveBounds> {
    if exp.family.is_fixed_angle() {
        return Err(SvoError::PreconditionFailed(format!(
            "ball certificates exist only for E1/E2, not {}",
            exp.family
        )));
    }
    let eps = exp.tol.spec * exp.spectral_radius();
    let offending: Vec<Complex64> = exp.eigenvalues.iter().copied().filter(|l| l.re <= eps).collect();
    if !offending.is_empty() {
        return Ok(CurveBounds::NotApplicable {
            family: exp.family,
            param: exp.param,
            offending,
        });
    }
    let pn = p_norm(exp)?;
    let r = pn.norm(&(&exp.target - &exp.base));
    Ok(CurveBounds::Certified {
        base: EllipsoidBound::new(exp.family, exp.param, exp.base.clone(), r, pn.clone()),
        target: EllipsoidBound::new(exp.family, exp.param, exp.target.clone(), r, pn),
        spectrum_real: exp.spectrum_positive(),
    })
}

/// Four-ball enclosure of a single SVO equilibrium.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThetaBounds {
    Certified {
        theta: [f64; 2],
        /// `B_phi(u_N)`, `B_phi(u_A)`, `B_psi(u_1)`, `B_psi(u_2)`.
        balls: Vec<EllipsoidBound>,
        #[serde(serialize_with = "ser_vec")]
        u_theta: Vector,
        /// `u_theta` lies in every ball (closed, slack `1e-9 r`).
        member: bool,
    },
    NotApplicable {
        theta: [f64; 2],
        failed: Vec<FailedFamily>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct FailedFamily {
    pub family: Family,
    pub param: f64,
    #[serde(serialize_with = "ser_complex")]
    pub offending: Vec<Complex64>,
}

impl ThetaBounds {
    pub fn is_certified(&self) -> bool {
        matches!(self, ThetaBounds::Certified { .. })
    }
}

/// Intersects the E1 and E2 certificates through `theta`.
pub fn theta_point_bounds(game: &QuadraticGame, theta: SvoAngles) -> Result<ThetaBounds> {
    let mut balls = Vec::with_capacity(4);
    let mut failed = Vec::new();
    for fam in [Family::E1, Family::E2] {
        let c = from_theta(fam, theta)?;
        let exp = build_expansion(game, fam, c.param)?;
        match curve_bounds(&exp)? {
            CurveBounds::Certified { base, target, .. } => {
                balls.push(base);
                balls.push(target);
            }
            CurveBounds::NotApplicable { family, param, offending } => failed.push(FailedFamily { family, param, offending }),
        }
    }
    let th = theta.as_array();
    if !failed.is_empty() {
        return Ok(ThetaBounds::NotApplicable { theta: th, failed });
    }
    let u_theta = svo_nash_direct(game, theta)?;
    let member = balls.iter().all(|b| b.contains(&u_theta, 1e-9 * b.radius));
    Ok(ThetaBounds::Certified {
        theta: th,
        balls,
        u_theta,
        member,
    })
}

/// Spectrum of `M1 M2^-1`, directly and through the congruence
/// `M2^{-1/2} M1 M2^{-1/2}`.
#[derive(Debug, Clone, Serialize)]
pub struct M1M2Spectrum {
    #[serde(serialize_with = "ser_complex")]
    pub direct: Vec<Complex64>,
    pub congruence: Vec<f64>,
    /// Largest `|Im| / rho` over the direct spectrum.
    pub max_imag_rel: f64,
    /// Largest relative mismatch between the sorted spectra.
    pub max_mismatch_rel: f64,
    pub real_positive: bool,
}

pub fn check_m1m2_spectrum(game: &QuadraticGame) -> Result<M1M2Spectrum> {
    let (m1, m2) = (game.m1(), game.m2());
    let tol = game.tol();
    for (name, m) in [("M1", m1), ("M2", m2)] {
        if sym_min_eig(m) <= tol.pd * m.norm().max(1.0) {
            return Err(SvoError::PreconditionFailed(format!("{name} is not positive definite")));
        }
    }
    let m2_inv = m2
        .clone()
        .try_inverse()
        .ok_or(SvoError::SingularSystem("M2"))?;
    let (mut direct, _) = eigen(&(m1 * &m2_inv))?;
    let se = m2.clone().symmetric_eigen();
    let inv_sqrt = &se.eigenvectors
        * Mat::from_diagonal(&se.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * se.eigenvectors.transpose();
    let cong = &inv_sqrt * m1 * &inv_sqrt;
    let mut congruence: Vec<f64> = ((&cong + cong.transpose()) * 0.5).symmetric_eigenvalues().iter().copied().collect();
    congruence.sort_by(f64::total_cmp);
    direct.sort_by(|a, b| a.re.total_cmp(&b.re));
    let rho = direct.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let max_imag_rel = direct.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / rho;
    let max_mismatch_rel = direct
        .iter()
        .zip(&congruence)
        .map(|(a, b)| (a - b).norm() / b.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let real_positive = max_imag_rel <= 1e-10 && direct.iter().all(|z| z.re > 0.0);
    Ok(M1M2Spectrum {
        direct,
        congruence,
        max_imag_rel,
        max_mismatch_rel,
        real_positive,
    })
}
