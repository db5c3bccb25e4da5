//! Numerical tolerances shared by every analysis.
//!
//! Relative tolerances are scaled at the point of use by the norm named in
//! each field's doc comment.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SvoError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Symmetrization acceptance, relative to the Frobenius norm.
    pub sym: f64,
    /// Positive-definiteness margin, relative to `max(1, ||block||_2)`.
    pub pd: f64,
    /// Minimum reciprocal condition number for an invertible matrix.
    pub inv: f64,
    /// Bisection resolution for well-posedness cutoffs (radians).
    pub theta: f64,
    /// Maximum bisection steps for the cutoff search.
    pub cutoff_iters: usize,
    /// Linear-solve residual, relative to `1 + ||rhs||`.
    pub res: f64,
    /// Eigen-residual tolerance, relative to `||core||`.
    pub eig: f64,
    /// Imaginary residue allowed when projecting complex sums to real vectors.
    pub real: f64,
    /// Exclusion radius around blow-up points, relative to `1 + |lambda|`.
    pub blow: f64,
    /// Eigenvector condition number above which a core counts as defective.
    pub kappa_max: f64,
    /// Sign classification of eigenvalues, relative to the spectral radius.
    pub spec: f64,
    /// Clustering gap for repeated eigenvalues, relative to the spectral radius.
    pub cluster: f64,
    /// Projection threshold below which a blow-up event is removable.
    pub proj: f64,
    /// Relative half-width of the approach window around a blow-up point.
    pub approach_window: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-9,
            pd: 1e-10,
            inv: 1e-12,
            theta: 1e-10,
            cutoff_iters: 60,
            res: 1e-9,
            eig: 1e-8,
            real: 1e-10,
            blow: 1e-6,
            kappa_max: 1e8,
            spec: 1e-9,
            cluster: 1e-6,
            proj: 1e-10,
            approach_window: 0.1,
        }
    }
}

impl Tolerances {
    /// Applies a `KEY=VALUE` override as accepted by the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| SvoError::InvalidArgument(format!("expected KEY=VAL, got `{assignment}`")))?;
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|_| SvoError::InvalidArgument(format!("tolerance `{key}` has non-numeric value `{value}`")))?;
        if !parsed.is_finite() || parsed < 0.0 {
            return Err(SvoError::InvalidArgument(format!(
                "tolerance `{key}` must be finite and non-negative"
            )));
        }
        let slot = match key.trim() {
            "sym" => &mut self.sym,
            "pd" => &mut self.pd,
            "inv" => &mut self.inv,
            "theta" => &mut self.theta,
            "res" => &mut self.res,
            "eig" => &mut self.eig,
            "real" => &mut self.real,
            "blow" => &mut self.blow,
            "kappa_max" => &mut self.kappa_max,
            "spec" => &mut self.spec,
            "cluster" => &mut self.cluster,
            "proj" => &mut self.proj,
            "approach_window" => &mut self.approach_window,
            "cutoff_iters" => {
                self.cutoff_iters = parsed as usize;
                return Ok(());
            }
            other => return Err(SvoError::InvalidArgument(format!("unknown tolerance `{other}`"))),
        };
        *slot = parsed;
        Ok(())
    }
}
