//! Quantum games: maps from plays (one strategy per player) to states.
//!
//! Two constructions are supported. A tabulated game stores one state per
//! play. A tensor-unitary game gives each player a subsystem and a finite set
//! of unitaries on it; a play evaluates to
//! `post · (U₁ ⊗ … ⊗ Uₙ) · pre · initial`.
//!
//! Player preferences rank the observable basis in tiers. Members of one tier
//! are interchangeable to the player; earlier tiers are strictly preferred.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{measurement_distribution, same_ray, ObservableBasis, StateVector};
use crate::tolerance::ORTHONORMAL;

/// Dense complex matrix used for strategy and pre/post unitaries.
pub type Matrix = DMatrix<Complex64>;

/// A player's ranking of the basis as an ordered partition of basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    player_id: usize,
    tiers: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    /// `tiers[0]` is the most preferred group. Indices are zero-based basis positions.
    pub fn new(player_id: usize, tiers: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        let fail = |reason: String| Error::Partition {
            player: player_id,
            reason,
        };
        let mut seen = vec![false; dim];
        for (t, tier) in tiers.iter().enumerate() {
            if tier.is_empty() {
                return Err(fail(format!("tier {t} is empty")));
            }
            for &i in tier {
                if i >= dim {
                    return Err(fail(format!("index {i} outside basis of dimension {dim}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(fail(format!("index {i} ranked more than once")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(fail(format!("index {missing} is not ranked")));
        }
        Ok(Self { player_id, tiers })
    }

    /// A strict ranking `order[0] ≻ order[1] ≻ …`.
    pub fn strict(player_id: usize, order: &[usize]) -> Result<Self> {
        Self::new(
            player_id,
            order.iter().map(|&i| vec![i]).collect(),
            order.len(),
        )
    }

    pub fn player_id(&self) -> usize {
        self.player_id
    }

    pub fn tiers(&self) -> &[Vec<usize>] {
        &self.tiers
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }

    pub fn dim(&self) -> usize {
        self.tiers.iter().map(Vec::len).sum()
    }

    /// Tier position of a basis index (0 is best).
    pub fn tier_of(&self, index: usize) -> Option<usize> {
        self.tiers.iter().position(|tier| tier.contains(&index))
    }

    /// Per-tier probability mass `Σ_{i ∈ tier} cos²θ(q, bᵢ)`.
    pub fn tier_scores(&self, q: &StateVector, basis: &ObservableBasis) -> Result<Vec<f64>> {
        self.check_basis(basis)?;
        let dist = measurement_distribution(q, basis)?;
        Ok(self.scores_from_distribution(&dist))
    }

    pub(crate) fn scores_from_distribution(&self, dist: &[f64]) -> Vec<f64> {
        self.tiers
            .iter()
            .map(|tier| tier.iter().map(|&i| dist[i]).sum())
            .collect()
    }

    fn check_basis(&self, basis: &ObservableBasis) -> Result<()> {
        if self.dim() != basis.dim() {
            return Err(Error::Dimension {
                expected: basis.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Literal dominance: `p` is strictly closer than `q` to every basis element
/// ranked by any of the profiles.
///
/// Over a complete orthonormal basis the squared cosines of both states sum to
/// one, so this never holds for two normalized states. It is kept as a
/// predicate so that fact can be checked rather than assumed.
pub fn dominates_literal(
    p: &StateVector,
    q: &StateVector,
    basis: &ObservableBasis,
    profiles: &[PreferenceProfile],
) -> Result<bool> {
    let p_angles = basis.angles(p)?;
    let q_angles = basis.angles(q)?;
    for profile in profiles {
        profile.check_basis(basis)?;
    }
    let closer = |i: usize| p_angles[i] < q_angles[i];
    if profiles.is_empty() {
        return Ok((0..basis.dim()).all(closer));
    }
    Ok(profiles
        .iter()
        .all(|profile| profile.tiers.iter().flatten().all(|&i| closer(i))))
}

/// Lexicographic preference: compare tier scores in rank order; the first
/// tier whose scores differ by more than `tol` decides.
pub fn prefers_lex(
    profile: &PreferenceProfile,
    p: &StateVector,
    q: &StateVector,
    basis: &ObservableBasis,
    tol: f64,
) -> Result<bool> {
    let sp = profile.tier_scores(p, basis)?;
    let sq = profile.tier_scores(q, basis)?;
    Ok(lex_compare(&sp, &sq, tol))
}

pub(crate) fn lex_compare(sp: &[f64], sq: &[f64], tol: f64) -> bool {
    for (a, b) in sp.iter().zip(sq) {
        let diff = a - b;
        if diff.abs() > tol {
            return diff > 0.0;
        }
    }
    false
}

/// Geometric weights `2^{-t}` for `t = 0..tiers`.
pub fn default_weights(tiers: usize) -> Vec<f64> {
    (0..tiers).map(|t| 0.5f64.powi(t as i32)).collect()
}

/// `Σ_t weights[t] · score_t(p)`.
pub fn scalar_utility(
    profile: &PreferenceProfile,
    p: &StateVector,
    basis: &ObservableBasis,
    weights: &[f64],
) -> Result<f64> {
    check_weights(weights, profile.tier_count())?;
    let scores = profile.tier_scores(p, basis)?;
    Ok(weighted(&scores, weights))
}

pub(crate) fn weighted(scores: &[f64], weights: &[f64]) -> f64 {
    scores.iter().zip(weights).map(|(s, w)| s * w).sum()
}

pub(crate) fn check_weights(weights: &[f64], tiers: usize) -> Result<()> {
    if weights.len() != tiers {
        return Err(Error::Weight(format!(
            "expected {tiers} weights, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(Error::Weight("weights must be finite and positive".into()));
    }
    if weights.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Weight("weights must be strictly decreasing".into()));
    }
    Ok(())
}

/// What a strategy does when chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Opaque choice for tabulated games; the table decides the outcome.
    Key,
    /// Unitary acting on the player's subsystem.
    Unitary(Matrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub label: String,
    pub action: Action,
}

impl Strategy {
    pub fn key(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            action: Action::Key,
        }
    }

    pub fn unitary(label: impl Into<String>, matrix: Matrix) -> Self {
        Self {
            label: label.into(),
            action: Action::Unitary(matrix),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategySet {
    player_id: usize,
    strategies: Vec<Strategy>,
}

impl StrategySet {
    pub fn new(player_id: usize, strategies: Vec<Strategy>) -> Result<Self> {
        if strategies.is_empty() {
            return Err(Error::Game(format!("player {player_id} has no strategies")));
        }
        for (i, s) in strategies.iter().enumerate() {
            if strategies[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::Game(format!(
                    "player {player_id} has duplicate strategy label {:?}",
                    s.label
                )));
            }
        }
        Ok(Self {
            player_id,
            strategies,
        })
    }

    /// Tabulated strategies from labels.
    pub fn keys<S: AsRef<str>>(player_id: usize, labels: &[S]) -> Result<Self> {
        Self::new(
            player_id,
            labels.iter().map(|l| Strategy::key(l.as_ref())).collect(),
        )
    }

    pub fn player_id(&self) -> usize {
        self.player_id
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.strategies.iter().position(|s| s.label == label)
    }
}

/// One participant: strategy set plus preference profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Player {
    pub strategies: StrategySet,
    pub preferences: PreferenceProfile,
}

impl Player {
    pub fn new(strategies: StrategySet, preferences: PreferenceProfile) -> Result<Self> {
        if strategies.player_id() != preferences.player_id() {
            return Err(Error::Game(format!(
                "strategy set belongs to player {} but preferences to player {}",
                strategies.player_id(),
                preferences.player_id()
            )));
        }
        Ok(Self {
            strategies,
            preferences,
        })
    }

    pub fn id(&self) -> usize {
        self.strategies.player_id()
    }
}

/// One strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Play(pub Vec<usize>);

impl Play {
    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    /// The play with `player`'s choice replaced by `strategy`.
    pub fn deviate(&self, player: usize, strategy: usize) -> Play {
        let mut choices = self.0.clone();
        choices[player] = strategy;
        Play(choices)
    }
}

impl From<Vec<usize>> for Play {
    fn from(choices: Vec<usize>) -> Self {
        Play(choices)
    }
}

impl fmt::Display for Play {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Fixed parts of a tensor-unitary game.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSetup {
    pub initial: StateVector,
    pub pre: Option<Matrix>,
    pub post: Option<Matrix>,
    pub subsystem_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GameKind {
    /// One state per play, stored in lexicographic play order.
    Tabulated {
        table: Vec<StateVector>,
    },
    TensorUnitary(TensorSetup),
}

/// A finite non-cooperative quantum game.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGame {
    basis: ObservableBasis,
    players: Vec<Player>,
    kind: GameKind,
}

impl QuantumGame {
    /// A tabulated game whose `table` lists states in lexicographic play order
    /// (last player's choice varies fastest).
    pub fn tabulated(
        basis: ObservableBasis,
        players: Vec<Player>,
        table: Vec<StateVector>,
    ) -> Result<Self> {
        check_players(&basis, &players)?;
        let expected: usize = players.iter().map(|p| p.strategies.len()).product();
        if table.len() != expected {
            return Err(Error::Game(format!(
                "table has {} entries but there are {expected} plays",
                table.len()
            )));
        }
        for (i, state) in table.iter().enumerate() {
            if state.dim() != basis.dim() {
                return Err(Error::Game(format!(
                    "table entry {i} has dimension {} instead of {}",
                    state.dim(),
                    basis.dim()
                )));
            }
        }
        for p in &players {
            if let Some(s) = p
                .strategies
                .strategies()
                .iter()
                .find(|s| !matches!(s.action, Action::Key))
            {
                return Err(Error::Game(format!(
                    "tabulated game: player {} strategy {:?} carries a matrix",
                    p.id(),
                    s.label
                )));
            }
        }
        Ok(Self {
            basis,
            players,
            kind: GameKind::Tabulated { table },
        })
    }

    /// A tabulated game from `(play, state)` entries in any order. Every play
    /// must appear exactly once.
    pub fn tabulated_from_entries(
        basis: ObservableBasis,
        players: Vec<Player>,
        entries: Vec<(Play, StateVector)>,
    ) -> Result<Self> {
        let counts: Vec<usize> = players.iter().map(|p| p.strategies.len()).collect();
        let total: usize = counts.iter().product();
        let mut table: Vec<Option<StateVector>> = vec![None; total];
        for (play, state) in entries {
            let index = index_of_play(&counts, &play)?;
            if table[index].replace(state).is_some() {
                return Err(Error::Game(format!("play {play} listed more than once")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::Game(format!("play {} missing from table", play_at(&counts, i)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::tabulated(basis, players, table)
    }

    pub fn tensor_unitary(
        basis: ObservableBasis,
        players: Vec<Player>,
        setup: TensorSetup,
    ) -> Result<Self> {
        check_players(&basis, &players)?;
        let d = basis.dim();
        if setup.subsystem_dims.len() != players.len() {
            return Err(Error::Game(format!(
                "{} subsystem dimensions for {} players",
                setup.subsystem_dims.len(),
                players.len()
            )));
        }
        let product: usize = setup.subsystem_dims.iter().product();
        if product != d {
            return Err(Error::Game(format!(
                "subsystem dimensions multiply to {product}, expected {d}"
            )));
        }
        if setup.initial.dim() != d {
            return Err(Error::Dimension {
                expected: d,
                found: setup.initial.dim(),
            });
        }
        for (name, m) in [("pre", &setup.pre), ("post", &setup.post)] {
            if let Some(m) = m {
                if m.nrows() != d || m.ncols() != d {
                    return Err(Error::Game(format!(
                        "{name} unitary is {}x{}, expected {d}x{d}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                let deviation = unitarity_deviation(m);
                if deviation > ORTHONORMAL {
                    return Err(Error::Game(format!(
                        "{name} matrix is not unitary (max |U†U - I| = {deviation:e})"
                    )));
                }
            }
        }
        for (player, &sub) in players.iter().zip(&setup.subsystem_dims) {
            for s in player.strategies.strategies() {
                let Action::Unitary(m) = &s.action else {
                    return Err(Error::Game(format!(
                        "tensor-unitary game: player {} strategy {:?} has no matrix",
                        player.id(),
                        s.label
                    )));
                };
                if m.nrows() != sub || m.ncols() != sub {
                    return Err(Error::Game(format!(
                        "player {} strategy {:?} is {}x{}, expected {sub}x{sub}",
                        player.id(),
                        s.label,
                        m.nrows(),
                        m.ncols()
                    )));
                }
                let deviation = unitarity_deviation(m);
                if deviation > ORTHONORMAL {
                    return Err(Error::NotUnitary {
                        player: player.id(),
                        strategy: s.label.clone(),
                        deviation,
                    });
                }
            }
        }
        Ok(Self {
            basis,
            players,
            kind: GameKind::TensorUnitary(setup),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &ObservableBasis {
        &self.basis
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn kind(&self) -> &GameKind {
        &self.kind
    }

    pub fn profiles(&self) -> Vec<PreferenceProfile> {
        self.players.iter().map(|p| p.preferences.clone()).collect()
    }

    pub fn strategy_counts(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.strategies.len()).collect()
    }

    /// `Π |Dᵢ|`.
    pub fn play_count(&self) -> usize {
        self.players.iter().map(|p| p.strategies.len()).product()
    }

    /// All plays in lexicographic order.
    pub fn plays(&self) -> impl Iterator<Item = Play> + '_ {
        let counts = self.strategy_counts();
        (0..self.play_count()).map(move |i| play_at(&counts, i))
    }

    /// Position of `play` in lexicographic order.
    pub fn play_index(&self, play: &Play) -> Result<usize> {
        index_of_play(&self.strategy_counts(), play)
    }

    pub fn play_at(&self, index: usize) -> Play {
        play_at(&self.strategy_counts(), index)
    }

    /// Strategy labels of a play, one per player.
    pub fn play_labels(&self, play: &Play) -> Vec<String> {
        play.0
            .iter()
            .zip(&self.players)
            .map(|(&s, p)| p.strategies.strategies()[s].label.clone())
            .collect()
    }

    /// `G(E)`.
    pub fn evaluate(&self, play: &Play) -> Result<StateVector> {
        let index = self.play_index(play)?;
        match &self.kind {
            GameKind::Tabulated { table } => Ok(table[index].clone()),
            GameKind::TensorUnitary(_) => {
                let amps = self.apply_unitaries(play);
                StateVector::normalize(amps)
            }
        }
    }

    fn apply_unitaries(&self, play: &Play) -> Vec<Complex64> {
        let GameKind::TensorUnitary(setup) = &self.kind else {
            unreachable!("only called for tensor-unitary games");
        };
        let mut joint: Option<Matrix> = None;
        for (player, &choice) in self.players.iter().zip(&play.0) {
            let Action::Unitary(u) = &player.strategies.strategies()[choice].action else {
                unreachable!("validated at construction");
            };
            joint = Some(match joint {
                None => u.clone(),
                Some(acc) => acc.kronecker(u),
            });
        }
        let joint = joint.expect("at least one player");
        let mut v = DVector::from_column_slice(setup.initial.amps());
        if let Some(pre) = &setup.pre {
            v = pre * v;
        }
        v = joint * v;
        if let Some(post) = &setup.post {
            v = post * v;
        }
        v.iter().copied().collect()
    }

    /// Every play with its state, in lexicographic play order.
    pub fn image(&self) -> Vec<(Play, StateVector)> {
        self.plays()
            .map(|play| {
                let state = self.evaluate(&play).expect("enumerated plays are valid");
                (play, state)
            })
            .collect()
    }

    /// The classical ordinal game obtained when every play lands on a basis
    /// element (up to global phase).
    pub fn induced_ordinal_game(&self) -> Result<OrdinalGame> {
        let mut outcomes = Vec::with_capacity(self.play_count());
        for (play, state) in self.image() {
            let outcome = (0..self.dim())
                .find(|&i| same_ray(&state, &self.basis.vectors()[i], ORTHONORMAL).unwrap_or(false))
                .ok_or_else(|| Error::NotBasisValued {
                    play: play.0.clone(),
                })?;
            outcomes.push(outcome);
        }
        let ranks = outcomes
            .iter()
            .map(|&o| {
                self.players
                    .iter()
                    .map(|p| {
                        p.preferences
                            .tier_of(o)
                            .expect("profiles partition the basis")
                    })
                    .collect()
            })
            .collect();
        Ok(OrdinalGame {
            strategy_counts: self.strategy_counts(),
            outcomes,
            ranks,
        })
    }
}

/// An ordinal normal-form game. Lower rank is better.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalGame {
    pub strategy_counts: Vec<usize>,
    /// Basis index reached by each play, in lexicographic play order.
    pub outcomes: Vec<usize>,
    /// `ranks[play][player]`: tier index of the outcome under that player's profile.
    pub ranks: Vec<Vec<usize>>,
}

fn check_players(basis: &ObservableBasis, players: &[Player]) -> Result<()> {
    if players.is_empty() {
        return Err(Error::Game("a game needs at least one player".into()));
    }
    for (i, p) in players.iter().enumerate() {
        if p.preferences.dim() != basis.dim() {
            return Err(Error::Partition {
                player: p.id(),
                reason: format!(
                    "ranks {} basis elements, basis has {}",
                    p.preferences.dim(),
                    basis.dim()
                ),
            });
        }
        if players[..i].iter().any(|o| o.id() == p.id()) {
            return Err(Error::Game(format!("duplicate player id {}", p.id())));
        }
    }
    Ok(())
}

pub(crate) fn unitarity_deviation(m: &Matrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let product = m.adjoint() * m;
    let identity = Matrix::identity(m.nrows(), m.ncols());
    (product - identity)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn play_at(counts: &[usize], mut index: usize) -> Play {
    let mut choices = vec![0; counts.len()];
    for (slot, &n) in choices.iter_mut().zip(counts).rev() {
        *slot = index % n;
        index /= n;
    }
    Play(choices)
}

fn index_of_play(counts: &[usize], play: &Play) -> Result<usize> {
    if play.0.len() != counts.len() {
        return Err(Error::InvalidPlay(format!(
            "play {play} has {} choices for {} players",
            play.0.len(),
            counts.len()
        )));
    }
    let mut index = 0;
    for (player, (&choice, &n)) in play.0.iter().zip(counts).enumerate() {
        if choice >= n {
            return Err(Error::InvalidPlay(format!(
                "player {player} choice {choice} out of range (has {n} strategies)"
            )));
        }
        index = index * n + choice;
    }
    Ok(index)
}
