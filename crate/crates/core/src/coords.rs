//! Curve coordinates `(param, t)` for the four expansion families and their
//! bijections with the open angle box `(0, pi/2)^2`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::equilibria::SvoAngles;
use crate::error::{Result, SvoError};

/// Expansion family.
///
/// * `E1`: rays through the Nash point, `param = phi`.
/// * `E2`: curves from player 1's optimum to player 2's, `param = psi`.
/// * `E3`: `theta1` fixed, `t = tan(theta2)`.
/// * `E4`: `theta2` fixed, `t = tan(theta1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    E1,
    E2,
    E3,
    E4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::E1, Family::E2, Family::E3, Family::E4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::E1 => "e1",
            Family::E2 => "e2",
            Family::E3 => "e3",
            Family::E4 => "e4",
        }
    }

    /// E3 and E4 hold one angle fixed.
    pub fn is_fixed_angle(&self) -> bool {
        matches!(self, Family::E3 | Family::E4)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

impl FromStr for Family {
    type Err = SvoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(Family::E1),
            "e2" => Ok(Family::E2),
            "e3" => Ok(Family::E3),
            "e4" => Ok(Family::E4),
            other => Err(SvoError::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// A point on one of the expansion curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveCoord {
    pub family: Family,
    pub param: f64,
    pub t: f64,
}

impl CurveCoord {
    pub fn new(family: Family, param: f64, t: f64) -> Result<Self> {
        check_param(param)?;
        if !t.is_finite() || t <= 0.0 {
            return Err(SvoError::InvalidCoordinate(format!("t = {t} must be finite and positive")));
        }
        Ok(Self { family, param, t })
    }
}

pub(crate) fn check_param(param: f64) -> Result<()> {
    if !param.is_finite() || param <= 0.0 || param >= FRAC_PI_2 {
        return Err(SvoError::InvalidCoordinate(format!("param = {param} must lie in (0, pi/2)")));
    }
    Ok(())
}

/// `acot` on the branch `(0, pi/2)` for positive arguments.
pub fn acot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

/// Angles `(theta1, theta2)` of a curve point.
pub fn to_theta(c: CurveCoord) -> SvoAngles {
    let (p, t) = (c.param, c.t);
    let (theta1, theta2) = match c.family {
        Family::E1 => ((t * p.cos()).atan(), (t * p.sin()).atan()),
        Family::E2 => ((t * p.cos()).atan(), acot(t * p.sin())),
        Family::E3 => (p, t.atan()),
        Family::E4 => (t.atan(), p),
    };
    SvoAngles { theta1, theta2 }
}

/// Inverse of [`to_theta`] on the open box.
pub fn from_theta(family: Family, theta: SvoAngles) -> Result<CurveCoord> {
    let SvoAngles { theta1, theta2 } = theta;
    for th in [theta1, theta2] {
        if !th.is_finite() || th <= 0.0 || th >= FRAC_PI_2 {
            return Err(SvoError::BoundaryTheta(theta1, theta2));
        }
    }
    let (tan1, tan2) = (theta1.tan(), theta2.tan());
    let (param, t) = match family {
        Family::E1 => {
            let phi = tan2.atan2(tan1);
            (phi, tan1.hypot(tan2))
        }
        Family::E2 => {
            let cot2 = 1.0 / tan2;
            let psi = cot2.atan2(tan1);
            (psi, tan1.hypot(cot2))
        }
        Family::E3 => (theta1, tan2),
        Family::E4 => (theta2, tan1),
    };
    Ok(CurveCoord { family, param, t })
}
