//! Random states, unitaries and games for property tests and benchmarks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::game::{Matrix, Player, PreferenceProfile, Strategy, StrategySet, TensorSetup};
use crate::hilbert::StateVector;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A Haar-random pure state.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalize(amps) {
            return s;
        }
    }
}

/// A Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Matrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A random ordered partition of `0..dim` into tiers.
pub fn random_profile(rng: &mut impl Rng, player_id: usize, dim: usize) -> PreferenceProfile {
    let mut order: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut tiers = vec![vec![order[0]]];
    for &i in &order[1..] {
        if rng.random_bool(0.5) {
            tiers.push(vec![i]);
        } else {
            tiers.last_mut().expect("nonempty").push(i);
        }
    }
    PreferenceProfile::new(player_id, tiers, dim).expect("tiers partition the basis")
}

/// Players with `counts[k]` random unitaries on subsystems of size `subsystem_dims[k]`.
pub fn random_unitary_players(
    rng: &mut impl Rng,
    subsystem_dims: &[usize],
    counts: &[usize],
) -> Vec<Player> {
    let dim: usize = subsystem_dims.iter().product();
    subsystem_dims
        .iter()
        .zip(counts)
        .enumerate()
        .map(|(k, (&sub, &n))| {
            let strategies = (0..n)
                .map(|s| Strategy::unitary(format!("u{s}"), random_unitary(rng, sub)))
                .collect();
            Player::new(
                StrategySet::new(k + 1, strategies).expect("distinct labels"),
                random_profile(rng, k + 1, dim),
            )
            .expect("matching ids")
        })
        .collect()
}

/// A random tensor-unitary setup with optional random pre/post unitaries.
pub fn random_setup(rng: &mut impl Rng, subsystem_dims: &[usize], entangle: bool) -> TensorSetup {
    let dim: usize = subsystem_dims.iter().product();
    let initial = StateVector::basis(dim, 0).expect("dim >= 2");
    let (pre, post) = if entangle {
        (
            Some(random_unitary(rng, dim)),
            Some(random_unitary(rng, dim)),
        )
    } else {
        (None, None)
    };
    TensorSetup {
        initial,
        pre,
        post,
        subsystem_dims: subsystem_dims.to_vec(),
    }
}
