//! Typing qudits by observable relative to a Nash equilibrium state.
//!
//! A qudit `q` is a candidate for type `bᵢ` when it is at least as close to
//! `bᵢ` as the equilibrium state is: `θ(q, bᵢ) ≤ θ(ne, bᵢ) + tol`. Among the
//! candidates the one with the largest margin `θ(ne, bᵢ) − θ(q, bᵢ)` wins, ties
//! going to the lowest index. With no candidate the qudit is unclassified.

use crate::equilibrium::{
    best_approximation, find_all_nash, EquilibriumCriterion, ProjectionResult,
};
use crate::error::{Error, Result};
use crate::game::QuantumGame;
use crate::hilbert::{measurement_distribution, AngleRadians, ObservableBasis, StateVector};
use crate::tolerance::TIE;

/// Measurement probability above which an assignment counts as likely.
pub const HIGH_PROBABILITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationRule {
    pub tol: f64,
}

impl Default for ClassificationRule {
    fn default() -> Self {
        Self { tol: TIE }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedQudit {
    pub state: StateVector,
    /// Basis index of the assigned type, `None` when unclassified.
    pub assigned: Option<usize>,
    /// `θ(ne, b) − θ(q, b)` for the assigned `b`. When unclassified, the
    /// largest margin over all basis elements (below `-tol`).
    pub margin: f64,
    /// `|⟨b, q⟩|²` for the assigned `b`; zero when unclassified.
    pub probability: f64,
    pub high_probability: bool,
}

pub fn classify(
    q: &StateVector,
    ne_state: &StateVector,
    basis: &ObservableBasis,
    rule: &ClassificationRule,
) -> Result<TypedQudit> {
    let q_angles = basis.angles(q)?;
    let ne_angles = basis.angles(ne_state)?;
    classify_with_angles(q, &q_angles, &ne_angles, basis, rule)
}

fn classify_with_angles(
    q: &StateVector,
    q_angles: &[AngleRadians],
    ne_angles: &[AngleRadians],
    basis: &ObservableBasis,
    rule: &ClassificationRule,
) -> Result<TypedQudit> {
    let margins: Vec<f64> = ne_angles
        .iter()
        .zip(q_angles)
        .map(|(ne, q)| ne.value() - q.value())
        .collect();

    let mut assigned: Option<usize> = None;
    for (i, (qa, na)) in q_angles.iter().zip(ne_angles).enumerate() {
        let candidate = qa.value() <= na.value() + rule.tol;
        if candidate && assigned.is_none_or(|a| margins[i] > margins[a]) {
            assigned = Some(i);
        }
    }

    Ok(match assigned {
        Some(i) => {
            let probability = measurement_distribution(q, basis)?[i];
            TypedQudit {
                state: q.clone(),
                assigned: Some(i),
                margin: margins[i],
                probability,
                high_probability: probability > HIGH_PROBABILITY,
            }
        }
        None => TypedQudit {
            state: q.clone(),
            assigned: None,
            margin: margins.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            probability: 0.0,
            high_probability: false,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub ne_state: StateVector,
    pub labels: Vec<String>,
    pub items: Vec<TypedQudit>,
    /// Count per basis label, in basis order.
    pub group_counts: Vec<usize>,
    pub unclassified: usize,
}

impl ClassificationReport {
    pub fn count_for(&self, label: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.group_counts[i])
    }

    /// Labels with a nonzero count.
    pub fn occupied_labels(&self) -> Vec<&str> {
        self.labels
            .iter()
            .zip(&self.group_counts)
            .filter(|(_, &n)| n > 0)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

pub fn classify_batch(
    states: &[StateVector],
    ne_state: &StateVector,
    basis: &ObservableBasis,
    rule: &ClassificationRule,
) -> Result<ClassificationReport> {
    let ne_angles = basis.angles(ne_state)?;
    let mut group_counts = vec![0; basis.dim()];
    let mut unclassified = 0;
    let mut items = Vec::with_capacity(states.len());
    for q in states {
        let q_angles = basis.angles(q)?;
        let typed = classify_with_angles(q, &q_angles, &ne_angles, basis, rule)?;
        match typed.assigned {
            Some(i) => group_counts[i] += 1,
            None => unclassified += 1,
        }
        items.push(typed);
    }
    Ok(ClassificationReport {
        ne_state: ne_state.clone(),
        labels: basis.labels().to_vec(),
        items,
        group_counts,
        unclassified,
    })
}

/// The equilibrium state certified by the lexicographically smallest equilibrium play.
fn canonical_ne_state(
    game: &QuantumGame,
    criterion: &EquilibriumCriterion,
) -> Result<Option<StateVector>> {
    let search = find_all_nash(game, criterion)?;
    Ok(search.equilibria.into_iter().next().map(|c| c.state))
}

/// Solves the game and classifies every image state against the canonical
/// equilibrium state.
pub fn classify_game_image(
    game: &QuantumGame,
    criterion: &EquilibriumCriterion,
    rule: &ClassificationRule,
) -> Result<ClassificationReport> {
    let ne = canonical_ne_state(game, criterion)?.ok_or_else(|| Error::NoEquilibrium {
        criterion: criterion.name().to_string(),
    })?;
    let states: Vec<StateVector> = game.image().into_iter().map(|(_, s)| s).collect();
    classify_batch(&states, &ne, game.basis(), rule)
}

/// How well a game serves a computation whose desired outcome is one basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationInsight {
    pub desired: usize,
    pub equilibrium_exists: bool,
    pub ne_state: Option<StateVector>,
    /// `θ(ne, b_desired)`.
    pub angle: Option<AngleRadians>,
    /// `cos²` of that angle; zero without an equilibrium.
    pub probability: f64,
    pub high_probability: bool,
    pub best: ProjectionResult,
}

pub fn computation_insight(
    game: &QuantumGame,
    criterion: &EquilibriumCriterion,
    desired: usize,
) -> Result<ComputationInsight> {
    let target = game.basis().vector(desired)?.clone();
    let best = best_approximation(game, desired)?;
    let ne_state = canonical_ne_state(game, criterion)?;
    let (angle, probability) = match &ne_state {
        Some(ne) => (
            Some(crate::hilbert::angle(ne, &target)?),
            measurement_distribution(ne, game.basis())?[desired],
        ),
        None => (None, 0.0),
    };
    Ok(ComputationInsight {
        desired,
        equilibrium_exists: ne_state.is_some(),
        ne_state,
        angle,
        probability,
        high_probability: probability > HIGH_PROBABILITY,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, PreferenceProfile, StrategySet};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn b(d: usize, i: usize) -> StateVector {
        StateVector::basis(d, i).unwrap()
    }

    fn basis4() -> ObservableBasis {
        ObservableBasis::computational(4).unwrap()
    }

    fn ne() -> StateVector {
        StateVector::from_real(&[0.7, 0.5, 0.4, 0.3]).unwrap()
    }

    fn constant_game(state: StateVector) -> QuantumGame {
        let players = (1..=2)
            .map(|k| {
                Player::new(
                    StrategySet::keys(k, &["x", "y"]).unwrap(),
                    PreferenceProfile::strict(k, &[0, 1, 2, 3]).unwrap(),
                )
                .unwrap()
            })
            .collect();
        QuantumGame::tabulated(basis4(), players, vec![state; 4]).unwrap()
    }

    #[test]
    fn basis_vector_types_as_itself() {
        let t = classify(&b(4, 0), &ne(), &basis4(), &ClassificationRule::default()).unwrap();
        assert_eq!(t.assigned, Some(0));
        let expected = basis4().angles(&ne()).unwrap()[0].value();
        assert_eq!(t.margin, expected);
        assert_eq!(t.probability, 1.0);
        assert!(t.high_probability);
    }

    #[test]
    fn equilibrium_state_ties_to_lowest_index() {
        let t = classify(&ne(), &ne(), &basis4(), &ClassificationRule::default()).unwrap();
        assert_eq!(t.assigned, Some(0));
        assert_eq!(t.margin, 0.0);
    }

    /// Squared cosines to a complete basis sum to one for both states, so some
    /// basis element is at least as close to `q` as to `ne`. The residual cone
    /// is empty and the unclassified branch is only reachable from raw angles.
    #[test]
    fn unclassified_requires_angles_beyond_any_state() {
        let rule = ClassificationRule::default();
        let ne = StateVector::uniform(4).unwrap();
        let far = [1.2f64, 1.3, 1.1, 1.25].map(AngleRadians::clamped);
        let ne_angles = basis4().angles(&ne).unwrap();
        let t = classify_with_angles(&ne, &far, &ne_angles, &basis4(), &rule).unwrap();
        assert_eq!(t.assigned, None);
        assert_eq!(t.probability, 0.0);
        assert!(!t.high_probability);
        let best = ne_angles[2].value() - 1.1;
        assert!((t.margin - best).abs() < 1e-15 && t.margin < -rule.tol);

        let cos2: f64 = far.iter().map(|a| a.cos_squared()).sum();
        assert!(cos2 < 1.0, "no normalized state has these angles");
    }

    #[test]
    fn batch_examples() {
        let rule = ClassificationRule::default();
        let empty = classify_batch(&[], &ne(), &basis4(), &rule).unwrap();
        assert!(empty.items.is_empty());
        assert_eq!(empty.group_counts, vec![0; 4]);
        assert_eq!(empty.unclassified, 0);

        let states: Vec<_> = (0..4).map(|i| b(4, i)).collect();
        let report = classify_batch(&states, &ne(), &basis4(), &rule).unwrap();
        let ne_angles = basis4().angles(&ne()).unwrap();
        for (i, item) in report.items.iter().enumerate() {
            assert_eq!(item.assigned, Some(i));
            assert_eq!(item.margin, ne_angles[i].value());
        }
        assert_eq!(report.group_counts, vec![1; 4]);
        assert!(classify_batch(&[b(2, 0)], &ne(), &basis4(), &rule).is_err());
    }

    #[test]
    fn constant_game_image_types_to_its_state() {
        let report = classify_game_image(
            &constant_game(b(4, 0)),
            &EquilibriumCriterion::Literal,
            &ClassificationRule::default(),
        )
        .unwrap();
        assert_eq!(report.ne_state, b(4, 0));
        assert_eq!(report.count_for("b1"), Some(4));
        assert!(report
            .items
            .iter()
            .all(|t| t.assigned == Some(0) && t.margin == 0.0));
    }

    #[test]
    fn game_without_equilibrium_is_reported() {
        let players = vec![
            Player::new(
                StrategySet::keys(1, &["h", "t"]).unwrap(),
                PreferenceProfile::new(1, vec![vec![0, 3], vec![1, 2]], 4).unwrap(),
            )
            .unwrap(),
            Player::new(
                StrategySet::keys(2, &["h", "t"]).unwrap(),
                PreferenceProfile::new(2, vec![vec![1, 2], vec![0, 3]], 4).unwrap(),
            )
            .unwrap(),
        ];
        let game =
            QuantumGame::tabulated(basis4(), players, (0..4).map(|i| b(4, i)).collect()).unwrap();
        let err = classify_game_image(
            &game,
            &EquilibriumCriterion::lexicographic(),
            &ClassificationRule::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoEquilibrium { .. }));
        let insight =
            computation_insight(&game, &EquilibriumCriterion::lexicographic(), 0).unwrap();
        assert!(!insight.equilibrium_exists);
        assert_eq!(insight.probability, 0.0);
        assert!(insight.angle.is_none());
    }

    #[test]
    fn insight_examples() {
        let i = computation_insight(&constant_game(b(4, 0)), &EquilibriumCriterion::Literal, 0)
            .unwrap();
        assert!(i.equilibrium_exists);
        assert_eq!(i.angle.unwrap().value(), 0.0);
        assert_eq!(i.probability, 1.0);
        assert!(i.high_probability);

        let i = computation_insight(&constant_game(b(4, 1)), &EquilibriumCriterion::Literal, 0)
            .unwrap();
        assert_eq!(i.probability, 0.0);
        assert!(!i.high_probability);
        assert_eq!(i.best.min_angle_play.value(), FRAC_PI_2);

        assert!(matches!(
            computation_insight(&constant_game(b(4, 1)), &EquilibriumCriterion::Literal, 7),
            Err(Error::InvalidBasisIndex { .. })
        ));
    }

    #[test]
    fn high_probability_threshold_is_strict() {
        let rule = ClassificationRule::default();
        // Amplitudes (1+i)/2 give |amp|² = 0.5 exactly.
        let half = Complex64::new(0.5, 0.5);
        let zero = Complex64::new(0.0, 0.0);
        let at = StateVector::new(vec![half, half, zero, zero]).unwrap();
        let t = classify(&b(4, 0), &at, &basis4(), &rule).unwrap();
        assert!(t.high_probability);
        let t = classify(&at, &at, &basis4(), &rule).unwrap();
        assert_eq!(t.probability, 0.5);
        assert!(!t.high_probability);
    }

    fn arb_state() -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
            .prop_filter("nonzero", |v| {
                v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3)
            })
            .prop_map(|v| {
                StateVector::normalize(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect())
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn classification_is_phase_stable(q in arb_state(), ne in arb_state(), phi in 0.0..std::f64::consts::TAU) {
            let rule = ClassificationRule::default();
            let a = classify(&q, &ne, &basis4(), &rule).unwrap();
            let b = classify(&q.with_global_phase(phi), &ne, &basis4(), &rule).unwrap();
            prop_assert_eq!(a.assigned, b.assigned);
            prop_assert!((a.margin - b.margin).abs() < 1e-12);
            prop_assert!((a.probability - b.probability).abs() < 1e-12);
            prop_assert_eq!(a.high_probability, b.high_probability);
        }

        #[test]
        fn candidate_set_is_never_empty(q in arb_state(), ne in arb_state()) {
            let t = classify(&q, &ne, &basis4(), &ClassificationRule { tol: 0.0 }).unwrap();
            prop_assert!(t.assigned.is_some());
        }

        #[test]
        fn basis_elements_self_type(ne in arb_state()) {
            let angles = basis4().angles(&ne).unwrap();
            for (i, a) in angles.iter().enumerate() {
                let t = classify(&b(4, i), &ne, &basis4(), &ClassificationRule::default()).unwrap();
                prop_assert_eq!(t.assigned, Some(i));
                prop_assert_eq!(t.margin, a.value());
            }
        }

        #[test]
        fn flag_matches_probability(q in arb_state(), ne in arb_state()) {
            let t = classify(&q, &ne, &basis4(), &ClassificationRule::default()).unwrap();
            prop_assert!((0.0..=1.0).contains(&t.probability));
            prop_assert_eq!(t.high_probability, t.probability > 0.5);
            if t.assigned.is_some() {
                prop_assert!(t.margin >= -ClassificationRule::default().tol);
            }
        }
    }
}
