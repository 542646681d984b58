//! Nash equilibrium quantum states.
//!
//! A quantum game maps each play (one finite strategy choice per player) to a
//! normalized state in a `d`-dimensional complex Hilbert space. Players rank
//! the elements of an observable basis. This crate finds the plays from which
//! no player profits by deviating alone, reports the states those plays
//! produce, and uses such a state as the boundary for typing qudits by
//! observable.
//!
//! ```
//! use qne_core::bundled;
//! use qne_core::equilibrium::{find_all_nash, EquilibriumCriterion};
//!
//! let game = bundled::coordination();
//! let search = find_all_nash(&game, &EquilibriumCriterion::lexicographic()).unwrap();
//! assert_eq!(search.equilibria.len(), 2);
//! ```

pub mod bundled;
pub mod classify;
pub mod document;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod hilbert;
pub mod random;
pub mod report;
pub mod tolerance;

pub use classify::{
    classify, classify_batch, classify_game_image, computation_insight, ClassificationReport,
    ClassificationRule, ComputationInsight, TypedQudit,
};
pub use equilibrium::{
    best_approximation, find_all_nash, is_nash, ne_states, rigidity_check, EquilibriumCertificate,
    EquilibriumCriterion, NashSearch, ProjectionResult,
};
pub use error::{Error, Result};
pub use game::{
    dominates_literal, prefers_lex, scalar_utility, Play, Player, PreferenceProfile, QuantumGame,
    Strategy, StrategySet, TensorSetup,
};
pub use hilbert::{
    angle, chord_distance, fidelity, inner_product, measurement_distribution, tensor, Amplitude,
    AngleRadians, ObservableBasis, StateVector,
};
pub use tolerance::ToleranceConfig;
