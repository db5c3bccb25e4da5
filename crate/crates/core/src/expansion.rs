//! The four eigen-expansions of the SVO-equilibrium surface.
//!
//! Each family fixes a `t`-independent core matrix `K` and traces a curve
//! `Gamma(t) = base + G(t) dir`:
//!
//! | family | core | `G(t)` | spectrum of `G` |
//! |---|---|---|---|
//! | E1 | `M H_phi^-1 N^-1` | `((1/t) K + I)^-T` | `t / (t + lambda)` |
//! | E2 | `M1 H_psi^-1 M2^-1` | `((1/t) K + I)^-T` | `t / (t + lambda)` |
//! | E3 | `Z N1^T` | `(I / t + K)^-1` | `1 / (1/t + lambda)` |
//! | E4 | `Z N2^T` | `(I / t + K)^-1` | `1 / (1/t + lambda)` |
//!
//! With `K = V diag(lambda) V^-1` and `W = V^-T`, E1/E2 expand as
//! `G = sum_i W_i g_i V_i^T` and E3/E4 as `G = sum_i V_i g_i W_i^T`. The
//! pair `(out, in)` is `(W, V)` for E1/E2 and `(V, W)` for E3/E4.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coords::{check_param, to_theta, CurveCoord, Family};
use crate::equilibria::{classical_points, svo_system, SvoAngles};
use crate::error::{Result, SvoError};
use crate::game::{Player, QuadraticGame};
use crate::linalg::{block2x2, cond2, eigen, solve_checked, spectral_norm, CMat, CVector, Factorized, Mat, Vector};
use crate::tol::Tolerances;

/// Sign class of a core eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenClass {
    RealPositive,
    RealNegative,
    /// Complex with negative real part. `G(t)` stays finite for all `t > 0`.
    Oscillatory,
    /// Complex with non-negative real part.
    Complex,
    /// Within tolerance of zero.
    Zero,
}

/// Classifies `lambda` relative to `eps = tol.spec * rho`.
pub fn classify(lambda: Complex64, rho: f64, tol: &Tolerances) -> EigenClass {
    let eps = tol.spec * rho;
    let real = lambda.im.abs() <= eps * lambda.re.abs().max(1.0);
    if lambda.norm() <= eps {
        EigenClass::Zero
    } else if real && lambda.re > eps {
        EigenClass::RealPositive
    } else if real && lambda.re < -eps {
        EigenClass::RealNegative
    } else if lambda.re < 0.0 {
        EigenClass::Oscillatory
    } else {
        EigenClass::Complex
    }
}

/// The spectral map of `G(t)` for a family.
pub fn g_map(family: Family, lambda: Complex64, t: f64) -> Complex64 {
    match family {
        Family::E1 | Family::E2 => Complex64::new(t, 0.0) / (lambda + t),
        Family::E3 | Family::E4 => (lambda + 1.0 / t).inv(),
    }
}

/// The `t` at which a real negative eigenvalue makes `G(t)` singular.
pub fn blowup_t(family: Family, lambda: f64) -> f64 {
    match family {
        Family::E1 | Family::E2 => lambda.abs(),
        Family::E3 | Family::E4 => 1.0 / lambda.abs(),
    }
}

#[derive(Debug, Clone)]
pub struct EigenExpansion {
    pub family: Family,
    pub param: f64,
    pub core: Mat,
    pub eigenvalues: Vec<Complex64>,
    /// Right eigenvectors of the core, unit 2-norm columns.
    pub right: CMat,
    /// `V^-T`, so that `W^T V = I`.
    pub left: CMat,
    /// `u_N`, `u_1`, `u_theta1` or `u_theta2`.
    pub base: Vector,
    /// `u_A` or `u_2` for E1/E2; the forcing vector for E3/E4.
    pub target: Vector,
    /// Vector that `G(t)` acts on: `target - base` for E1/E2, `-forcing`
    /// for E3/E4.
    pub direction: Vector,
    /// `N H_phi M^-1` (E1) or `M2 H_psi M1^-1` (E2).
    pub reverse_core: Option<Mat>,
    pub eigvec_condition: f64,
    pub defective: bool,
    /// Largest relative eigen-residual `||K v - lambda v|| / ||K||`.
    pub eig_residual: f64,
    pub core_norm: f64,
    pub tol: Tolerances,
}

/// `blkdg(a I_{d1}, b I_{d2})` applied as a diagonal.
fn split_diag(d1: usize, d2: usize, a: f64, b: f64) -> Mat {
    let mut h = Mat::zeros(d1 + d2, d1 + d2);
    for i in 0..d1 {
        h[(i, i)] = a;
    }
    for i in d1..d1 + d2 {
        h[(i, i)] = b;
    }
    h
}

fn factor(m: &Mat, name: &'static str, tol: &Tolerances) -> Result<Factorized> {
    Factorized::new(m, name, tol.inv).map_err(|_| SvoError::SingularCoreFactor(name))
}

/// Builds and eigen-decomposes the expansion core for `family` at `param`.
pub fn build_expansion(game: &QuadraticGame, family: Family, param: f64) -> Result<EigenExpansion> {
    check_param(param)?;
    let tol = *game.tol();
    let dims = game.dims();
    let (d1, d2) = (dims.d1, dims.d2);
    let (cp, sp) = (param.cos(), param.sin());
    let h_inv = split_diag(d1, d2, 1.0 / cp, 1.0 / sp);
    let h = split_diag(d1, d2, cp, sp);

    let (core, base, target, direction, reverse_core) = match family {
        Family::E1 | Family::E2 => {
            let (left_m, right_m, name_l, name_r) = match family {
                Family::E1 => {
                    let agg = game.aggregates();
                    (agg.m, agg.n, "M", "N")
                }
                _ => (game.m1().clone(), game.m2().clone(), "M1", "M2"),
            };
            let f_left = factor(&left_m, name_l, &tol)?;
            let f_right = factor(&right_m, name_r, &tol)?;
            let points = classical_points(game)?;
            let (base, target) = match family {
                Family::E1 => (points.u_nash, points.u_altruistic),
                _ => (points.u_player1, points.u_player2),
            };
            let core = &left_m * &h_inv * f_right.inverse();
            let reverse = &right_m * &h * f_left.inverse();
            let direction = &target - &base;
            (core, base, target, direction, Some(reverse))
        }
        Family::E3 | Family::E4 => {
            let fixed = if family == Family::E3 { Player::One } else { Player::Two };
            let cutoff = game.wellposed_cutoff(fixed)?;
            if cutoff < FRAC_PI_2 && param >= cutoff - tol.theta {
                return Err(SvoError::NearCutoff {
                    player: fixed.index(),
                    theta: param,
                    cutoff,
                });
            }
            // At t = 0 the free player is purely selfish, so the base point
            // is the SVO equilibrium with the free angle set to zero.
            let theta0 = if family == Family::E3 {
                SvoAngles { theta1: param, theta2: 0.0 }
            } else {
                SvoAngles { theta1: 0.0, theta2: param }
            };
            let (m_theta_t, rhs) = svo_system(game, theta0);
            let f_theta = factor(&m_theta_t, "M_theta", &tol)?;
            let base = f_theta.solve(&rhs);
            let blocks = game.subblocks();
            // Z selects the free player's columns of M_theta^-T.
            let (z, n_t, b_lin) = match family {
                Family::E3 => {
                    let z = f_theta.inverse().columns(d1, d2).into_owned();
                    let n1t = concat_cols(&blocks.p1.cross, &blocks.p1.other);
                    (z, n1t, blocks.p1.other_lin.clone())
                }
                _ => {
                    let z = f_theta.inverse().columns(0, d1).into_owned();
                    let n2t = concat_cols(&blocks.p2.other, &blocks.p2.cross);
                    (z, n2t, blocks.p2.other_lin.clone())
                }
            };
            let core = &z * &n_t;
            let forcing = &z * b_lin + &core * &base;
            let direction = -&forcing;
            (core, base, forcing, direction, None)
        }
    };

    let core_norm = spectral_norm(&core);
    let (eigenvalues, right) = eigen(&core)?;
    let eigvec_condition = cond2(&right);
    let (left, invertible) = match right.transpose().try_inverse() {
        Some(w) => (w, true),
        None => (CMat::from_element(right.nrows(), right.ncols(), Complex64::new(f64::NAN, f64::NAN)), false),
    };
    let defective = !invertible || !eigvec_condition.is_finite() || eigvec_condition > tol.kappa_max;
    let core_c = core.map(|x| Complex64::new(x, 0.0));
    let eig_residual = (0..eigenvalues.len())
        .map(|i| {
            let v = right.column(i);
            (&core_c * v - v * eigenvalues[i]).norm()
        })
        .fold(0.0, f64::max)
        / core_norm.max(f64::MIN_POSITIVE);

    Ok(EigenExpansion {
        family,
        param,
        core,
        eigenvalues,
        right,
        left,
        base,
        target,
        direction,
        reverse_core,
        eigvec_condition,
        defective,
        eig_residual,
        core_norm,
        tol,
    })
}

fn concat_cols(a: &Mat, b: &Mat) -> Mat {
    block2x2(a, b, &Mat::zeros(0, a.ncols()), &Mat::zeros(0, b.ncols()))
}

/// A real negative eigenvalue and the `t` at which it blows up the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub index: usize,
    pub lambda: Complex64,
    pub t_star: f64,
}

impl EigenExpansion {
    pub fn dim(&self) -> usize {
        self.core.nrows()
    }

    /// Spectral radius of the core.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn classes(&self) -> Vec<EigenClass> {
        let rho = self.spectral_radius();
        self.eigenvalues.iter().map(|&l| classify(l, rho, &self.tol)).collect()
    }

    /// All eigenvalues real positive to tolerance.
    pub fn spectrum_positive(&self) -> bool {
        self.classes().iter().all(|c| *c == EigenClass::RealPositive)
    }

    /// All eigenvalues have real part above `tol.spec * rho`. This is the
    /// condition under which `G(t)` contracts for every `t > 0`.
    pub fn spectrum_positive_real_part(&self) -> bool {
        let eps = self.tol.spec * self.spectral_radius();
        self.eigenvalues.iter().all(|l| l.re > eps)
    }

    /// `(out, in)` vectors of the eigen-sum `G = sum_i out_i g_i in_i^T`.
    pub fn modes(&self) -> (&CMat, &CMat) {
        match self.family {
            Family::E1 | Family::E2 => (&self.left, &self.right),
            Family::E3 | Family::E4 => (&self.right, &self.left),
        }
    }

    /// Errors with `DefectiveCore` when the eigenvector basis is unusable.
    pub fn require_diagonalizable(&self) -> Result<()> {
        if self.defective {
            return Err(SvoError::DefectiveCore {
                family: self.family,
                param: self.param,
                condition: self.eigvec_condition,
            });
        }
        Ok(())
    }

    /// Real negative eigenvalues with their blow-up locations, ascending in
    /// `t_star`.
    pub fn singular_points(&self) -> Vec<SingularPoint> {
        let mut out: Vec<SingularPoint> = self
            .classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == EigenClass::RealNegative)
            .map(|(i, _)| SingularPoint {
                index: i,
                lambda: self.eigenvalues[i],
                t_star: blowup_t(self.family, self.eigenvalues[i].re),
            })
            .collect();
        out.sort_by(|a, b| a.t_star.total_cmp(&b.t_star));
        out
    }

    /// Exclusion radius around a blow-up point.
    pub fn blow_radius(&self, t_star: f64) -> f64 {
        self.tol.blow * (1.0 + t_star)
    }

    /// Distance from `t` to the nearest blow-up point (`inf` if none).
    pub fn min_spec_gap(&self, t: f64) -> f64 {
        self.singular_points()
            .iter()
            .map(|p| (t - p.t_star).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn theta_at(&self, t: f64) -> SvoAngles {
        to_theta(CurveCoord {
            family: self.family,
            param: self.param,
            t,
        })
    }

    /// Spectrum of `G(t)`.
    pub fn g_spectrum(&self, t: f64) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|&l| g_map(self.family, l, t)).collect()
    }

    /// The matrix whose inverse is `G(t)`, scaled for conditioning, together
    /// with the matching right-hand-side scale.
    fn g_system(&self, t: f64) -> (Mat, f64) {
        let d = self.dim();
        let id = Mat::identity(d, d);
        let k = match self.family {
            Family::E1 | Family::E2 => self.core.transpose(),
            Family::E3 | Family::E4 => self.core.clone(),
        };
        // E1/E2 invert (K/t + I); E3/E4 invert (K + I/t).
        match self.family {
            Family::E1 | Family::E2 if t < 1.0 => (k + id * t, t),
            Family::E1 | Family::E2 => (k / t + id, 1.0),
            _ if t < 1.0 => (k * t + id, t),
            _ => (k + id / t, 1.0),
        }
    }

    /// `G(t)` formed explicitly.
    pub fn g_matrix(&self, t: f64) -> Result<Mat> {
        let (sys, scale) = self.g_system(t);
        let theta = self.theta_at(t);
        let f = Factorized::new(&sys, "G(t)", self.tol.inv).map_err(|_| SvoError::SingularAtTheta(theta.theta1, theta.theta2))?;
        Ok(f.inverse() * scale)
    }

    /// `G(t)` assembled from the eigen-sum, as a complex matrix.
    pub fn g_matrix_eigen_sum(&self, t: f64) -> Result<CMat> {
        self.require_diagonalizable()?;
        let (out, inn) = self.modes();
        let g = CVector::from_vec(self.g_spectrum(t));
        Ok(out * CMat::from_diagonal(&g) * inn.transpose())
    }

    fn check_blowup(&self, t: f64) -> Result<()> {
        for p in self.singular_points() {
            if (t - p.t_star).abs() <= self.blow_radius(p.t_star) {
                return Err(SvoError::NearBlowup { t, lambda: p.lambda });
            }
        }
        Ok(())
    }

    /// `Gamma(t)` by a direct real solve.
    pub fn curve_point(&self, t: f64) -> Result<Vector> {
        if !t.is_finite() || t <= 0.0 {
            return Err(SvoError::InvalidCoordinate(format!("t = {t} must be finite and positive")));
        }
        self.check_blowup(t)?;
        let (sys, scale) = self.g_system(t);
        let rhs = &self.direction * scale;
        match solve_checked(&sys, &rhs, "G(t)", self.tol.inv, self.tol.res) {
            Ok((y, _)) => Ok(&self.base + y),
            Err(SvoError::SingularSystem(_)) => {
                let th = self.theta_at(t);
                Err(SvoError::SingularAtTheta(th.theta1, th.theta2))
            }
            Err(e) => Err(e),
        }
    }

    /// `Gamma(t)` from the eigen-sum, with the largest imaginary residue
    /// dropped by the real projection.
    pub fn curve_point_eigen_sum(&self, t: f64) -> Result<(Vector, f64)> {
        self.check_blowup(t)?;
        let g = self.g_matrix_eigen_sum(t)?;
        let dir = self.direction.map(|x| Complex64::new(x, 0.0));
        let y = g * dir;
        let imag = y.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Ok((&self.base + y.map(|z| z.re), imag))
    }

    /// E1/E2 curve from the target end:
    /// `target + (t R + I)^-T (base - target)` with `R` the reverse core.
    pub fn alternate_point(&self, t: f64) -> Result<Vector> {
        let reverse = self
            .reverse_core
            .as_ref()
            .ok_or_else(|| SvoError::PreconditionFailed(format!("{} has no reverse form", self.family)))?;
        self.check_blowup(t)?;
        let d = self.dim();
        let sys = reverse.transpose() * t + Mat::identity(d, d);
        let rhs = &self.base - &self.target;
        match solve_checked(&sys, &rhs, "G'(t)", self.tol.inv, self.tol.res) {
            Ok((y, _)) => Ok(&self.target + y),
            Err(SvoError::SingularSystem(_)) => {
                let th = self.theta_at(t);
                Err(SvoError::SingularAtTheta(th.theta1, th.theta2))
            }
            Err(e) => Err(e),
        }
    }

    /// Complex coefficients `in_i^T dir`.
    pub fn coefficients(&self) -> CVector {
        let (_, inn) = self.modes();
        let dir = self.direction.map(|x| Complex64::new(x, 0.0));
        inn.transpose() * dir
    }
}

/// Outcome of one curve evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Ok,
    /// Skipped because `t` sits on a blow-up point.
    Gap,
    /// Added around a blow-up point by refinement.
    Refined,
    /// The solve failed; see the error kind.
    Error(&'static str),
}

impl SampleStatus {
    pub fn label(&self) -> String {
        match self {
            SampleStatus::Ok => "ok".into(),
            SampleStatus::Gap => "gap".into(),
            SampleStatus::Refined => "refined".into(),
            SampleStatus::Error(kind) => format!("error:{kind}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub theta: SvoAngles,
    /// `None` for gap and error records.
    pub u: Option<Vector>,
    pub g_spectrum: Vec<Complex64>,
    pub min_spec_gap: f64,
    pub status: SampleStatus,
}

/// Offsets `10^-k` used around each blow-up point when refining.
pub fn refinement_offsets() -> Vec<f64> {
    (2..12).map(|k| 10f64.powf(-(k as f64) / 2.0)).collect()
}

/// Evaluates the curve on `t_grid`.
///
/// Points on a blow-up are kept as gap records. With `refine`, each blow-up
/// inside the grid range adds samples at `t_star (1 +- 10^-k)` for
/// `k = 1, 1.5, ..., 5.5` plus a gap record at `t_star` itself.
pub fn sample_curve(exp: &EigenExpansion, t_grid: &[f64], refine: bool) -> Result<Vec<CurveSample>> {
    if t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(SvoError::InvalidArgument("t grid must contain finite positive values".into()));
    }
    if t_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(SvoError::InvalidArgument("t grid must be sorted ascending".into()));
    }
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    let mut points: Vec<(f64, bool)> = t_grid.iter().map(|&t| (t, false)).collect();
    if refine {
        let (lo, hi) = (t_grid[0], t_grid[t_grid.len() - 1]);
        for sp in exp.singular_points() {
            if sp.t_star < lo || sp.t_star > hi {
                continue;
            }
            points.push((sp.t_star, true));
            for off in refinement_offsets() {
                points.push((sp.t_star * (1.0 - off), true));
                points.push((sp.t_star * (1.0 + off), true));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        points.dedup_by(|b, a| a.0 == b.0);
    }
    Ok(points
        .par_iter()
        .map(|&(t, refined)| {
            let theta = exp.theta_at(t);
            let (u, status) = match exp.curve_point(t) {
                Ok(u) => (Some(u), if refined { SampleStatus::Refined } else { SampleStatus::Ok }),
                Err(SvoError::NearBlowup { .. }) => (None, SampleStatus::Gap),
                Err(e) => (None, SampleStatus::Error(e.kind())),
            };
            CurveSample {
                t,
                theta,
                u,
                g_spectrum: exp.g_spectrum(t),
                min_spec_gap: exp.min_spec_gap(t),
                status,
            }
        })
        .collect())
}

/// `n` log-spaced points over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// The default curve grid: 200 log-spaced points over `[1e-3, 1e3]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 200)
}

/// Curve samples as CSV with columns
/// `t,theta1,theta2,u_0..u_{d-1},min_spec_gap,status`.
pub fn curve_csv(samples: &[CurveSample], d: usize) -> String {
    let mut out = String::from("t,theta1,theta2");
    for i in 0..d {
        let _ = write!(out, ",u_{i}");
    }
    out.push_str(",min_spec_gap,status\n");
    for s in samples {
        let _ = write!(out, "{},{},{}", s.t, s.theta.theta1, s.theta.theta2);
        for i in 0..d {
            match &s.u {
                Some(u) => {
                    let _ = write!(out, ",{}", u[i]);
                }
                None => out.push_str(",NaN"),
            }
        }
        let _ = writeln!(out, ",{},{}", s.min_spec_gap, s.status.label());
    }
    out
}
