#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svo_games::game::{Dims, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    Vector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0))
}

/// Symmetric positive definite with smallest eigenvalue at least `floor`.
pub fn random_pd(rng: &mut ChaCha8Rng, d: usize, floor: f64) -> Mat {
    let a = random_mat(rng, d, d);
    &a * a.transpose() + Mat::identity(d, d) * floor
}

/// Game with `M1, M2 > 0`, so every theta in the closed box is well posed.
pub fn random_pd_game(rng: &mut ChaCha8Rng, d1: usize, d2: usize) -> QuadraticGame {
    let d = d1 + d2;
    let m1 = random_pd(rng, d, 0.3);
    let m2 = random_pd(rng, d, 0.3);
    let c1 = random_vec(rng, d);
    let c2 = random_vec(rng, d);
    QuadraticGame::new(m1, m2, c1, c2, Dims::new(d1, d2).unwrap()).unwrap()
}

/// Random dimensions in `1..=max` for each player.
pub fn random_dims(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize) {
    (rng.gen_range(1..=max), rng.gen_range(1..=max))
}

pub fn rel_err(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn two_d_example() -> QuadraticGame {
    let m1 = Mat::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 2.0]);
    let m2 = Mat::from_row_slice(2, 2, &[1.7, 0.5, 0.5, 2.2]);
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1).unwrap()).unwrap()
}

pub fn rotated(gamma: f64) -> QuadraticGame {
    let r = Mat::from_row_slice(2, 2, &[gamma.cos(), -gamma.sin(), gamma.sin(), gamma.cos()]);
    let m1 = Mat::from_row_slice(2, 2, &[1.2, -1.0, -1.0, 1.0]);
    let m2 = &r * Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.2]) * r.transpose();
    let c1 = -(&m1 * Vector::from_vec(vec![0.2, 1.0]));
    let c2 = -(&m2 * Vector::from_vec(vec![1.0, 0.2]));
    QuadraticGame::new(m1, m2, c1, c2, Dims::new(1, 1).unwrap()).unwrap()
}

/// Interior grid `(k / (n + 1)) * pi/2`, `k = 1..=n`.
pub fn interior(n: usize) -> Vec<f64> {
    (1..=n).map(|k| std::f64::consts::FRAC_PI_2 * k as f64 / (n + 1) as f64).collect()
}

/// Relative central-difference gradient of player `p`'s SVO cost in its own block.
pub fn fd_own_gradient(
    game: &QuadraticGame,
    p: svo_games::game::Player,
    theta: f64,
    u: &Vector,
    h: f64,
) -> Vector {
    let dims = game.dims();
    let (off, len) = match p {
        svo_games::game::Player::One => (0, dims.d1),
        svo_games::game::Player::Two => (dims.d1, dims.d2),
    };
    Vector::from_fn(len, |i, _| {
        let mut up = u.clone();
        let mut dn = u.clone();
        up[off + i] += h;
        dn[off + i] -= h;
        (svo_games::equilibria::svo_cost(game, p, theta, &up) - svo_games::equilibria::svo_cost(game, p, theta, &dn)) / (2.0 * h)
    })
}

pub mod golden {
    use std::path::{Path, PathBuf};
    use std::process::Command;

    pub fn root() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
    }

    /// An artifact produced by one CLI invocation.
    pub struct Run {
        pub label: String,
        pub args: Vec<String>,
        /// JSON schema file name, or `None` for CSV artifacts.
        pub schema: Option<&'static str>,
        /// Key into `csv_headers.json` for CSV artifacts.
        pub csv: Option<&'static str>,
    }

    fn run(label: &str, cmd: &str, scenario: &str, extra: &[&str], schema: Option<&'static str>, csv: Option<&'static str>) -> Run {
        let path = root().join("scenarios").join(format!("{scenario}.json"));
        let mut args = vec![cmd.to_string(), "--scenario".into(), path.display().to_string()];
        args.extend(extra.iter().map(|s| s.to_string()));
        Run { label: format!("{label} {scenario}"), args, schema, csv }
    }

    /// Every artifact the golden scenarios are expected to produce.
    pub fn runs() -> Vec<Run> {
        let mut out = Vec::new();
        for sc in ["2d_example", "3d_example", "rotated_pos_pi_8", "rotated_0", "rotated_neg_pi_8", "rotated_7pi_16", "rotated_pi_2", "rotated_9pi_16"] {
            out.push(run("equilibria", "equilibria", sc, &[], Some("equilibria"), None));
            out.push(run("blowup e1", "blowup", sc, &["--family", "e1"], Some("blowup"), None));
            out.push(run("blowup e1 csv", "blowup", sc, &["--family", "e1", "--format", "csv"], None, Some("blowup")));
            out.push(run("curve e1", "curve", sc, &["--family", "e1", "--param", "0.7"], None, Some("curve")));
            out.push(run("curve e3 json", "curve", sc, &["--family", "e3", "--param", "0.7", "--format", "json"], Some("curve"), None));
        }
        for sc in ["2d_example", "3d_example"] {
            out.push(run("curve e2", "curve", sc, &["--family", "e2", "--param", "0.3"], None, Some("curve")));
            out.push(run("curve e4", "curve", sc, &["--family", "e4", "--param", "1.2"], None, Some("curve")));
            out.push(run("surface", "surface", sc, &[], None, Some("surface")));
            for th in ["0.39269908169872414,1.1780972450961724", "1.1780972450961724,0.39269908169872414", "0.7853981633974483,0.7853981633974483"] {
                out.push(run("bounds", "bounds", sc, &["--theta", th], Some("bounds"), None));
            }
        }
        out.push(run("bounds", "bounds", "rotated_7pi_16", &["--theta", "0.5,0.5"], Some("bounds"), None));
        out.push(run("equilibria", "equilibria", "single_integrator", &[], Some("equilibria"), None));
        out.push(run("trajectory", "trajectory", "single_integrator", &[], None, Some("trajectory")));
        out.push(run("trajectory theta", "trajectory", "single_integrator", &["--theta", "0.6,0.6"], None, Some("trajectory")));
        out.push(run("blowup e1", "blowup", "single_integrator", &["--family", "e1", "--param", "0.7853981633974483"], Some("blowup"), None));
        out
    }

    pub struct Output {
        pub code: i32,
        pub stdout: Vec<u8>,
        pub stderr: Vec<u8>,
    }

    pub fn invoke(bin: &Path, args: &[String]) -> Output {
        let out = Command::new(bin).args(args).output().expect("spawn CLI");
        Output { code: out.status.code().unwrap_or(-1), stdout: out.stdout, stderr: out.stderr }
    }

    pub fn schema(name: &str) -> serde_json::Value {
        let text = std::fs::read_to_string(root().join("schemas").join(format!("{name}.schema.json"))).unwrap();
        serde_json::from_str(&text).unwrap()
    }

    /// Checks one artifact against its schema or CSV header pattern.
    pub fn validate(run: &Run, bytes: &[u8]) -> Result<(), String> {
        let text = std::str::from_utf8(bytes).map_err(|e| e.to_string())?;
        if let Some(name) = run.schema {
            let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
            let compiled = jsonschema::JSONSchema::compile(&schema(name)).map_err(|e| e.to_string())?;
            let problems: Vec<String> = match compiled.validate(&value) {
                Ok(()) => Vec::new(),
                Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
            };
            if !problems.is_empty() {
                return Err(problems.join("; "));
            }
        }
        if let Some(kind) = run.csv {
            let headers: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(root().join("schemas/csv_headers.json")).unwrap()).unwrap();
            let pattern = headers[kind]["header"].as_str().unwrap();
            let mut lines = text.lines();
            let header = lines.next().ok_or("empty CSV")?;
            if !regex_lite_match(pattern, header) {
                return Err(format!("header `{header}` does not match `{pattern}`"));
            }
            let width = header.split(',').count();
            for (i, line) in lines.enumerate() {
                if line.split(',').count() != width {
                    return Err(format!("row {i} has the wrong number of fields"));
                }
            }
        }
        Ok(())
    }

    /// Header check through the JSON-schema `pattern` keyword.
    fn regex_lite_match(pattern: &str, s: &str) -> bool {
        let schema = serde_json::json!({ "type": "string", "pattern": pattern });
        jsonschema::is_valid(&schema, &serde_json::Value::String(s.to_string()))
    }
}

pub mod lq_oracle {
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use svo_games::linalg::{Mat, Vector};
    use svo_games::lq::{LtvCosts, LtvSystem};

    use super::{random_mat, random_pd, random_vec};

    pub fn random_system(rng: &mut ChaCha8Rng, k: usize) -> (LtvSystem, LtvCosts) {
        let n = rng.gen_range(1..=4);
        let m1 = rng.gen_range(1..=3);
        let m2 = rng.gen_range(1..=3);
        let list = |rng: &mut ChaCha8Rng, r: usize, c: usize| (0..k).map(|_| random_mat(rng, r, c)).collect::<Vec<_>>();
        let pd = |rng: &mut ChaCha8Rng, d: usize| (0..k).map(|_| random_pd(rng, d, 0.2)).collect::<Vec<_>>();
        let sym = |rng: &mut ChaCha8Rng, d: usize| {
            (0..k)
                .map(|_| {
                    let a = random_mat(rng, d, d);
                    (&a + a.transpose()) * 0.5
                })
                .collect::<Vec<_>>()
        };
        let sys = LtvSystem {
            horizon: k,
            n,
            m1,
            m2,
            f: list(rng, n, n),
            g1: list(rng, n, m1),
            g2: list(rng, n, m2),
            x0: random_vec(rng, n),
            dt: 0.1,
        };
        let split = rng.gen_bool(0.5);
        let q1 = sym(rng, n);
        let q2 = sym(rng, n);
        let costs = LtvCosts {
            q1_trk: split.then(|| pd(rng, n)),
            q2_trk: split.then(|| pd(rng, n)),
            q1,
            q2,
            r1: pd(rng, m1),
            r2: pd(rng, m2),
            xbar1: (0..k).map(|_| random_vec(rng, n)).collect(),
            xbar2: (0..k).map(|_| random_vec(rng, n)).collect(),
        };
        (sys, costs)
    }

    /// States `x_0..x_K` by the step recursion.
    pub fn step(sys: &LtvSystem, u1: &Vector, u2: &Vector) -> Vec<Vector> {
        let mut xs = vec![sys.x0.clone()];
        for k in 0..sys.horizon {
            let x = &sys.f[k] * &xs[k] + &sys.g1[k] * u1.rows(k * sys.m1, sys.m1) + &sys.g2[k] * u2.rows(k * sys.m2, sys.m2);
            xs.push(x);
        }
        xs
    }

    /// `sum_k 1/2 (x_k - xbar_k)^T Qtrk (x_k - xbar_k) + 1/2 x_k^T (Q - Qtrk) x_k + 1/2 u^T R u`.
    pub fn stage_sum(sys: &LtvSystem, costs: &LtvCosts, player: usize, u1: &Vector, u2: &Vector) -> f64 {
        let xs = step(sys, u1, u2);
        let (q, trk, r, xbar, u, m) = match player {
            1 => (&costs.q1, costs.q1_trk.as_ref().unwrap_or(&costs.q1), &costs.r1, &costs.xbar1, u1, sys.m1),
            _ => (&costs.q2, costs.q2_trk.as_ref().unwrap_or(&costs.q2), &costs.r2, &costs.xbar2, u2, sys.m2),
        };
        let mut total = 0.0;
        for k in 0..sys.horizon {
            let x = &xs[k + 1];
            let e = x - &xbar[k];
            let rest: Mat = &q[k] - &trk[k];
            total += 0.5 * e.dot(&(&trk[k] * &e)) + 0.5 * x.dot(&(rest * x));
            let uk = u.rows(k * m, m);
            total += 0.5 * uk.dot(&(&r[k] * uk));
        }
        total
    }
}
