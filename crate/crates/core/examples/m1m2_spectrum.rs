//! Spectrum of M1 M2^{-1} for random positive definite pairs, computed
//! directly and through a symmetric congruence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svo_games::bounds::check_m1m2_spectrum;
use svo_games::game::{Dims, QuadraticGame};
use svo_games::linalg::{Mat, Vector};

fn random_pd(rng: &mut ChaCha8Rng, d: usize) -> Mat {
    let a = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    &a * a.transpose() + Mat::identity(d, d) * 0.5
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 4, 8] {
        let game = QuadraticGame::new(
            random_pd(&mut rng, d),
            random_pd(&mut rng, d),
            Vector::zeros(d),
            Vector::zeros(d),
            Dims::new(d / 2, d - d / 2)?,
        )?;
        let s = check_m1m2_spectrum(&game)?;
        println!(
            "d = {d}: real positive {}  max |Im|/rho {:.1e}  direct vs congruence {:.1e}",
            s.real_positive, s.max_imag_rel, s.max_mismatch_rel
        );
    }
    Ok(())
}
