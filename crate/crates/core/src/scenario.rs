//! Scenario files and the analyses behind each command-line subcommand.
//!
//! Every command returns its artifact as a string so that output is
//! byte-stable: JSON is pretty-printed with shortest round-trip floats, CSV
//! uses Rust's shortest round-trip `Display`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::blowup::{blowup_locus, cutoffs, param_grid};
use crate::bounds::theta_point_bounds;
use crate::coords::Family;
use crate::equilibria::{classical_points, ser_vec, svo_nash_direct, SvoAngles};
use crate::error::{Result, SvoError};
use crate::expansion::{build_expansion, curve_csv, log_grid, sample_curve, CurveSample};
use crate::game::{GameSpec, Player, QuadraticGame};
use crate::linalg::Vector;
use crate::lq::{max_position_deviation, trajectory_csv, LtvGame, LtvSpec};
use crate::tol::Tolerances;

/// A grid given explicitly or by a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Generated(GridGen),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridGen {
    Log { lo: f64, hi: f64, n: usize },
    Linear { lo: f64, hi: f64, n: usize },
    /// Midpoints of `n` equal cells of `(0, pi/2)`.
    Midpoints { n: usize },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Generated(GridGen::Log { lo, hi, n }) => log_grid(*lo, *hi, *n),
            GridSpec::Generated(GridGen::Linear { lo, hi, n }) => match n {
                0 => Vec::new(),
                1 => vec![*lo],
                _ => (0..*n).map(|i| lo + (hi - lo) * i as f64 / (*n - 1) as f64).collect(),
            },
            GridSpec::Generated(GridGen::Midpoints { n }) => param_grid(*n),
        }
    }
}

/// Validates that a grid is finite, non-empty and sorted ascending.
pub fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(SvoError::Scenario(format!("{name} is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(SvoError::Scenario(format!("{name} has non-finite values")));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(SvoError::Scenario(format!("{name} is not sorted ascending")));
    }
    Ok(())
}

fn default_t_grid() -> GridSpec {
    GridSpec::Generated(GridGen::Log { lo: 1e-3, hi: 1e3, n: 200 })
}

fn default_param_grid() -> GridSpec {
    GridSpec::Generated(GridGen::Midpoints { n: 20 })
}

fn default_theta_grid() -> usize {
    41
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(default = "default_t_grid")]
    pub t_grid: GridSpec,
    #[serde(default = "default_param_grid")]
    pub param_grid: GridSpec,
    /// Points per axis of the interior theta grid used by `surface`.
    #[serde(default = "default_theta_grid")]
    pub theta_grid: usize,
    #[serde(default = "default_true")]
    pub refine: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Default for AnalysisSpec {
    fn default() -> Self {
        Self {
            t_grid: default_t_grid(),
            param_grid: default_param_grid(),
            theta_grid: default_theta_grid(),
            refine: true,
            tolerances: Tolerances::default(),
        }
    }
}

/// Scenario file: exactly one of `game` or `ltv`, plus analysis defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ltv: Option<LtvSpec>,
    #[serde(default)]
    pub analysis: AnalysisSpec,
}

/// A loaded scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub game: QuadraticGame,
    pub ltv: Option<LtvGame>,
    pub tol: Tolerances,
}

impl Scenario {
    pub fn from_json(text: &str, overrides: &[String]) -> Result<Self> {
        let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| SvoError::Scenario(format!("parse error: {e}")))?;
        Self::from_config(config, overrides)
    }

    pub fn from_config(config: ScenarioConfig, overrides: &[String]) -> Result<Self> {
        let mut tol = config.analysis.tolerances;
        for o in overrides {
            tol.apply_override(o)?;
        }
        check_grid("t_grid", &config.analysis.t_grid.values())?;
        if config.analysis.t_grid.values()[0] <= 0.0 {
            return Err(SvoError::Scenario("t_grid must be positive".into()));
        }
        check_grid("param_grid", &config.analysis.param_grid.values())?;
        if config.analysis.theta_grid == 0 {
            return Err(SvoError::Scenario("theta_grid must be positive".into()));
        }
        let (game, ltv) = match (&config.game, &config.ltv) {
            (Some(spec), None) => (QuadraticGame::from_spec_with(spec, tol)?, None),
            (None, Some(spec)) => {
                let ltv = spec.build(tol)?;
                (ltv.game.clone(), Some(ltv))
            }
            _ => return Err(SvoError::Scenario("exactly one of `game` or `ltv` must be given".into())),
        };
        Ok(Self { config, game, ltv, tol })
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.config.analysis.t_grid.values()
    }

    pub fn param_grid(&self) -> Vec<f64> {
        self.config.analysis.param_grid.values()
    }
}

/// Command output plus exit status (`0` success, `1` not applicable).
#[derive(Debug, Clone, PartialEq)]
pub struct CmdOutput {
    pub text: String,
    pub status: i32,
}

impl CmdOutput {
    fn ok(text: String) -> Self {
        Self { text, status: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = SvoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(SvoError::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

fn cutoff_values(game: &QuadraticGame) -> Vec<Option<f64>> {
    [Player::One, Player::Two].iter().map(|&p| game.wellposed_cutoff(p).ok()).collect()
}

/// Classical points, assumption report and well-posedness cutoffs.
pub fn cmd_equilibria(sc: &Scenario) -> Result<CmdOutput> {
    let eq = classical_points(&sc.game)?;
    let mut out = json!({
        "d1": sc.game.dims().d1,
        "d2": sc.game.dims().d2,
        "equilibria": eq,
        "assumptions": sc.game.check_assumptions(),
        "cutoffs": cutoff_values(&sc.game),
    });
    if let Some(ltv) = &sc.ltv {
        let traj = ltv.rollout(&eq.u_nash)?;
        let dev = (ltv.system.n == 4).then(|| max_position_deviation(&traj, &ltv.costs.xbar1));
        out["ltv"] = json!({
            "K": ltv.system.horizon,
            "dt": ltv.system.dt,
            "nash_max_position_deviation": dev,
        });
    }
    Ok(CmdOutput::ok(to_json(&out)))
}

#[derive(Serialize)]
struct SampleJson<'a> {
    t: f64,
    theta: [f64; 2],
    #[serde(serialize_with = "ser_opt")]
    u: &'a Option<Vector>,
    min_spec_gap: Option<f64>,
    status: String,
}

fn ser_opt<S: serde::Serializer>(v: &&Option<Vector>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vec(v, s),
        None => s.serialize_none(),
    }
}

fn curve_json(family: Family, param: f64, samples: &[CurveSample]) -> String {
    let rows: Vec<SampleJson> = samples
        .iter()
        .map(|s| SampleJson {
            t: s.t,
            theta: s.theta.as_array(),
            u: &s.u,
            min_spec_gap: s.min_spec_gap.is_finite().then_some(s.min_spec_gap),
            status: s.status.label(),
        })
        .collect();
    to_json(&json!({ "family": family, "param": param, "samples": rows }))
}

/// Samples one expansion curve.
pub fn cmd_curve(sc: &Scenario, family: Family, param: f64, t_grid: Option<Vec<f64>>, format: Format) -> Result<CmdOutput> {
    let grid = t_grid.unwrap_or_else(|| sc.t_grid());
    let exp = build_expansion(&sc.game, family, param)?;
    let samples = sample_curve(&exp, &grid, sc.config.analysis.refine)?;
    Ok(CmdOutput::ok(match format {
        Format::Csv => curve_csv(&samples, sc.game.dim()),
        Format::Json => curve_json(family, param, &samples),
    }))
}

/// Blow-up locus over a parameter grid.
pub fn cmd_blowup(sc: &Scenario, family: Family, params: Option<Vec<f64>>, format: Format) -> Result<CmdOutput> {
    let grid = params.unwrap_or_else(|| sc.param_grid());
    check_grid("param grid", &grid)?;
    let locus = blowup_locus(&sc.game, family, &grid);
    Ok(CmdOutput::ok(match format {
        Format::Json => to_json(&locus),
        Format::Csv => locus.to_csv(),
    }))
}

/// Four-ball enclosure at `theta`; status 1 when not certified.
pub fn cmd_bounds(sc: &Scenario, theta: SvoAngles) -> Result<CmdOutput> {
    let b = theta_point_bounds(&sc.game, theta)?;
    let status = if b.is_certified() { 0 } else { 1 };
    Ok(CmdOutput { text: to_json(&b), status })
}

/// Direct SVO-Nash solutions on an interior theta grid clipped to the
/// cutoffs, as CSV `theta1,theta2,u_0..u_{d-1},status`.
pub fn cmd_surface(sc: &Scenario) -> Result<CmdOutput> {
    let n = sc.config.analysis.theta_grid;
    let cut = cutoffs(&sc.game);
    let axis = |c: f64| -> Vec<f64> {
        let hi = c.min(FRAC_PI_2);
        (1..=n).map(|i| hi * i as f64 / (n + 1) as f64).collect()
    };
    let (a1, a2) = (axis(cut[0]), axis(cut[1]));
    let pairs: Vec<(f64, f64)> = a1.iter().flat_map(|&x| a2.iter().map(move |&y| (x, y))).collect();
    let d = sc.game.dim();
    let rows: Vec<String> = pairs
        .par_iter()
        .map(|&(t1, t2)| {
            let mut row = format!("{t1},{t2}");
            match SvoAngles::new(t1, t2).and_then(|th| svo_nash_direct(&sc.game, th)) {
                Ok(u) => {
                    for v in u.iter() {
                        let _ = write!(row, ",{v}");
                    }
                    row.push_str(",ok");
                }
                Err(e) => {
                    for _ in 0..d {
                        row.push_str(",NaN");
                    }
                    let _ = write!(row, ",error:{}", e.kind());
                }
            }
            row
        })
        .collect();
    let mut out = String::from("theta1,theta2");
    for i in 0..d {
        let _ = write!(out, ",u_{i}");
    }
    out.push_str(",status\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(CmdOutput::ok(out))
}

/// State trajectory of an LTV scenario at `theta` (Nash when `None`).
pub fn cmd_trajectory(sc: &Scenario, theta: Option<SvoAngles>) -> Result<CmdOutput> {
    let ltv = sc
        .ltv
        .as_ref()
        .ok_or_else(|| SvoError::InvalidArgument("trajectory needs an `ltv` scenario".into()))?;
    let u = match theta {
        Some(th) => svo_nash_direct(&sc.game, th)?,
        None => classical_points(&sc.game)?.u_nash,
    };
    Ok(CmdOutput::ok(trajectory_csv(&ltv.rollout(&u)?, ltv.system.dt)))
}

/// Parses `"a,b"` into angles.
pub fn parse_theta(s: &str) -> Result<SvoAngles> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(SvoError::InvalidArgument(format!("expected THETA1,THETA2, got `{s}`")));
    }
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| SvoError::InvalidArgument(format!("bad angle `{p}`")))
    };
    SvoAngles::new(parse(parts[0])?, parse(parts[1])?)
}

/// Parses a comma-separated list of floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| SvoError::InvalidArgument(format!("bad number `{p}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_D: &str = r#"{
        "game": {"d1": 1, "d2": 1,
                 "M1": [[3, -1], [-1, 2]], "M2": [[1.7, 0.5], [0.5, 2.2]],
                 "c1": [0.4, -1.8], "c2": [-1.8, -0.94]},
        "analysis": {"t_grid": {"kind": "log", "lo": 0.01, "hi": 100, "n": 5}}
    }"#;

    #[test]
    fn loads_and_runs_every_command() {
        let sc = Scenario::from_json(TWO_D, &[]).unwrap();
        assert_eq!(sc.t_grid().len(), 5);
        let eq = cmd_equilibria(&sc).unwrap();
        let v: serde_json::Value = serde_json::from_str(&eq.text).unwrap();
        assert_eq!(v["cutoffs"][0], FRAC_PI_2);
        let curve = cmd_curve(&sc, Family::E1, 0.5, None, Format::Csv).unwrap();
        assert_eq!(curve.text.lines().count(), 6);
        let blow = cmd_blowup(&sc, Family::E1, Some(vec![0.3]), Format::Json).unwrap();
        assert!(blow.text.contains("\"entries\""));
        let b = cmd_bounds(&sc, SvoAngles::new(0.4, 1.1).unwrap()).unwrap();
        assert_eq!(b.status, 0);
    }

    #[test]
    fn rejects_bad_scenarios() {
        assert!(Scenario::from_json("{", &[]).is_err());
        assert!(Scenario::from_json(r#"{"analysis": {}}"#, &[]).is_err());
        let unsorted = TWO_D.replace(r#"{"kind": "log", "lo": 0.01, "hi": 100, "n": 5}"#, "[2, 1]");
        assert!(Scenario::from_json(&unsorted, &[]).is_err());
        let empty = TWO_D.replace(r#"{"kind": "log", "lo": 0.01, "hi": 100, "n": 5}"#, "[]");
        assert!(Scenario::from_json(&empty, &[]).is_err());
        assert!(Scenario::from_json(TWO_D, &["nope=1".into()]).is_err());
    }

    #[test]
    fn theta_parsing() {
        let th = parse_theta("0.1, 0.2").unwrap();
        assert_eq!(th.as_array(), [0.1, 0.2]);
        assert!(parse_theta("0.1").is_err());
        assert!(parse_theta("0.1,x").is_err());
        assert_eq!(parse_list("1,2.5").unwrap(), vec![1.0, 2.5]);
    }

    #[test]
    fn output_is_repeatable() {
        let sc = Scenario::from_json(TWO_D, &[]).unwrap();
        let a = cmd_surface(&sc).unwrap().text;
        let b = cmd_surface(&sc).unwrap().text;
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 41 * 41 + 1);
    }
}
