//! Small games shipped with the library and mirrored by the CLI fixtures.

use crate::game::{Player, PreferenceProfile, QuantumGame, StrategySet};
use crate::hilbert::{ObservableBasis, StateVector};

fn b4(i: usize) -> StateVector {
    StateVector::basis(4, i).expect("index in range")
}

fn two_by_two(
    tiers1: Vec<Vec<usize>>,
    tiers2: Vec<Vec<usize>>,
    table: Vec<StateVector>,
) -> QuantumGame {
    let players = [(1, tiers1), (2, tiers2)]
        .into_iter()
        .map(|(id, tiers)| {
            Player::new(
                StrategySet::keys(id, &["s1", "s2"]).expect("distinct labels"),
                PreferenceProfile::new(id, tiers, 4).expect("valid partition"),
            )
            .expect("matching ids")
        })
        .collect();
    QuantumGame::tabulated(
        ObservableBasis::computational(4).expect("d = 4"),
        players,
        table,
    )
    .expect("valid game")
}

/// Every play yields `b1`.
pub fn constant() -> QuantumGame {
    two_by_two(
        vec![vec![0], vec![1], vec![2], vec![3]],
        vec![vec![3], vec![2], vec![1], vec![0]],
        vec![b4(0); 4],
    )
}

/// Plays map onto `b1..b4`; player 1 wants matching choices (`b1`, `b4`),
/// player 2 mismatched ones (`b2`, `b3`).
pub fn matching_pennies() -> QuantumGame {
    two_by_two(
        vec![vec![0, 3], vec![1, 2]],
        vec![vec![1, 2], vec![0, 3]],
        (0..4).map(b4).collect(),
    )
}

/// Plays map onto `b1..b4`; both players want matching choices.
pub fn coordination() -> QuantumGame {
    two_by_two(
        vec![vec![0, 3], vec![1, 2]],
        vec![vec![0, 3], vec![1, 2]],
        (0..4).map(b4).collect(),
    )
}

/// Two-qubit strictly competitive game over `b1 = |00⟩ … b4 = |11⟩`.
///
/// Player 1 ranks `b1` first and is indifferent among the rest; player 2
/// ranks `b2` first and is indifferent among the rest.
///
/// The initial state `|00⟩` is entangled by
/// `J = CNOT₂→₁ · (I ⊗ H)` into `(|00⟩ + |11⟩)/√2`, each player applies a phase
/// gate to their qubit, and `J†` disentangles. The output is
/// `|0⟩ ⊗ ((1 + e^{iφ})|0⟩ + (1 − e^{iφ})|1⟩)/2` with `φ` the summed phase, so
/// every gain for one player in `b1` versus `b2` is a loss for the other.
/// Player 1 chooses from `{I, T, S, Z}`, player 2 from `{I, T}`.
pub fn h4_strictly_competitive() -> QuantumGame {
    use crate::game::{Matrix, Strategy, TensorSetup};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let phase =
        |t: f64| Matrix::from_row_slice(2, 2, &[one, zero, zero, Complex64::from_polar(1.0, t)]);
    let gates = [("I", 0.0), ("T", FRAC_PI_4), ("S", FRAC_PI_2), ("Z", PI)];

    // CNOT with qubit 2 as control: |01⟩ ↔ |11⟩.
    let cnot = Matrix::from_fn(4, 4, |r, c| if r == [0, 3, 2, 1][c] { one } else { zero });
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let hadamard = Matrix::from_row_slice(2, 2, &[h, h, h, -h]);
    let j = cnot * Matrix::identity(2, 2).kronecker(&hadamard);

    let player = |id: usize, count: usize, top: usize| {
        let strategies = gates[..count]
            .iter()
            .map(|&(label, t)| Strategy::unitary(label, phase(t)))
            .collect();
        let rest = (0..4).filter(|&i| i != top).collect();
        Player::new(
            StrategySet::new(id, strategies).expect("distinct labels"),
            PreferenceProfile::new(id, vec![vec![top], rest], 4).expect("valid partition"),
        )
        .expect("matching ids")
    };

    QuantumGame::tensor_unitary(
        ObservableBasis::computational(4).expect("d = 4"),
        vec![player(1, 4, 0), player(2, 2, 1)],
        TensorSetup {
            initial: b4(0),
            pre: Some(j.clone()),
            post: Some(j.adjoint()),
            subsystem_dims: vec![2, 2],
        },
    )
    .expect("valid game")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_game_image, ClassificationRule};
    use crate::equilibrium::{find_all_nash, EquilibriumCriterion};
    use crate::game::Play;
    use crate::hilbert::measurement_distribution;

    #[test]
    fn h4_outputs_follow_summed_phase() {
        let game = h4_strictly_competitive();
        let phases = [0.0, 1.0, 2.0, 4.0];
        for (play, state) in game.image() {
            let phi = (phases[play.0[0]] + phases[play.0[1]]) * std::f64::consts::FRAC_PI_4;
            let d = measurement_distribution(&state, game.basis()).unwrap();
            assert!((d[0] - (phi / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((d[1] - (phi / 2.0).sin().powi(2)).abs() < 1e-12);
            assert!(d[2] < 1e-24 && d[3] < 1e-24);
        }
    }

    #[test]
    fn h4_has_single_lexicographic_equilibrium_and_two_groups() {
        let game = h4_strictly_competitive();
        let crit = EquilibriumCriterion::lexicographic();
        let search = find_all_nash(&game, &crit).unwrap();
        let plays: Vec<_> = search.equilibria.iter().map(|c| c.play.clone()).collect();
        assert_eq!(plays, vec![Play(vec![0, 1])]);
        let report = classify_game_image(&game, &crit, &ClassificationRule::default()).unwrap();
        assert_eq!(report.group_counts, vec![3, 5, 0, 0]);
        assert_eq!(report.unclassified, 0);
    }
}
