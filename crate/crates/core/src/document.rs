//! JSON game documents.
//!
//! A document carries the dimension, a labeled basis (computational unless
//! vectors are given), the players with their preferences and strategies, and
//! either a tensor-unitary payload (strategy matrices plus optional
//! `initial`, `pre`, `post`, `subsystem_dims`) or a tabulated `table`.
//! Complex numbers are `[re, im]` pairs throughout.
//!
//! Loading happens in three stages, each with its own failure class: JSON
//! syntax, document shape, and semantic validation (unitarity,
//! orthonormality, preference partitions, table coverage). Shape and
//! semantic failures name the offending field path.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::ClassificationRule;
use crate::equilibrium::EquilibriumCriterion;
use crate::error::Error;
use crate::game::{
    unitarity_deviation, Action, GameKind, Matrix, Play, Player, PreferenceProfile, QuantumGame,
    Strategy, StrategySet, TensorSetup,
};
use crate::hilbert::{ObservableBasis, StateVector};
use crate::tolerance::{ORTHONORMAL, TIE};

pub const SCHEMA_VERSION: &str = "1.0";

/// The published JSON schema for game documents.
pub const JSON_SCHEMA: &str = include_str!("../schema/game.schema.json");

pub type Pair = [f64; 2];
pub type MatrixDoc = Vec<Vec<Pair>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    pub basis: BasisDoc,
    pub players: Vec<PlayerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
    #[serde(default)]
    pub criterion: CriterionDoc,
    #[serde(default)]
    pub classification: ClassificationDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerDoc {
    pub id: usize,
    /// Ordered tiers of basis labels, most preferred first.
    pub preferences: Vec<Vec<String>>,
    pub strategies: Vec<StrategyDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    /// One strategy label per player.
    pub play: Vec<String>,
    pub state: Vec<Pair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionVariant {
    Literal,
    #[serde(alias = "lex")]
    Lexicographic,
    #[serde(alias = "scalar")]
    Scalarized,
}

impl CriterionVariant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "literal" => Some(Self::Literal),
            "lex" | "lexicographic" => Some(Self::Lexicographic),
            "scalar" | "scalarized" => Some(Self::Scalarized),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionDoc {
    pub variant: CriterionVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for CriterionDoc {
    fn default() -> Self {
        Self {
            variant: CriterionVariant::Lexicographic,
            tol: None,
            weights: None,
        }
    }
}

impl CriterionDoc {
    pub fn to_criterion(&self) -> EquilibriumCriterion {
        let tol = self.tol.unwrap_or(TIE);
        match self.variant {
            CriterionVariant::Literal => EquilibriumCriterion::Literal,
            CriterionVariant::Lexicographic => EquilibriumCriterion::Lexicographic { tol },
            CriterionVariant::Scalarized => EquilibriumCriterion::Scalarized {
                weights: self.weights.clone(),
                tol,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Why a document could not be loaded.
#[derive(Debug, Clone, PartialEq)]
pub enum DocumentError {
    /// Not well-formed JSON.
    Syntax(String),
    /// Well-formed JSON that does not match the document shape.
    Schema { path: String, message: String },
    /// Well-shaped document that describes an invalid game.
    Invalid { path: String, message: String },
}

impl DocumentError {
    fn invalid(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Syntax errors are parse failures; the rest are validation failures.
    pub fn is_syntax(&self) -> bool {
        matches!(self, Self::Syntax(_))
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(m) => write!(f, "invalid JSON: {m}"),
            Self::Schema { path, message } | Self::Invalid { path, message } => {
                write!(f, "{path}: {message}")
            }
        }
    }
}

impl std::error::Error for DocumentError {}

impl GameDocument {
    /// Parses JSON text into a document without semantic validation.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))?;
        serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            DocumentError::Schema {
                path: if path == "." { "$".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn criterion(&self) -> EquilibriumCriterion {
        self.criterion.to_criterion()
    }

    pub fn classification_rule(&self) -> ClassificationRule {
        ClassificationRule {
            tol: self.classification.tol.unwrap_or(TIE),
        }
    }

    /// Validates the document and builds the game it describes.
    pub fn to_game(&self) -> Result<QuantumGame, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::invalid(
                "schema_version",
                format!(
                    "unsupported version {:?}, expected {SCHEMA_VERSION:?}",
                    self.schema_version
                ),
            ));
        }
        let d = self.dimension;
        if d < 2 {
            return Err(DocumentError::invalid("dimension", "must be at least 2"));
        }
        let basis = self.build_basis()?;
        if self.players.is_empty() {
            return Err(DocumentError::invalid(
                "players",
                "at least one player is required",
            ));
        }

        let tabulated = self.table.is_some();
        let mut players = Vec::with_capacity(self.players.len());
        for (k, p) in self.players.iter().enumerate() {
            let path = format!("players[{k}]");
            if self.players[..k].iter().any(|o| o.id == p.id) {
                return Err(DocumentError::invalid(
                    format!("{path}.id"),
                    format!("duplicate player id {}", p.id),
                ));
            }
            let profile = build_profile(p, &basis, &path)?;
            if p.strategies.is_empty() {
                return Err(DocumentError::invalid(
                    format!("{path}.strategies"),
                    "at least one strategy is required",
                ));
            }
            let mut strategies = Vec::with_capacity(p.strategies.len());
            for (s, sd) in p.strategies.iter().enumerate() {
                let spath = format!("{path}.strategies[{s}]");
                let action = match (&sd.matrix, tabulated) {
                    (Some(_), true) => {
                        return Err(DocumentError::invalid(
                            format!("{spath}.matrix"),
                            "tabulated games take strategy labels only",
                        ))
                    }
                    (None, true) => Action::Key,
                    (None, false) => {
                        return Err(DocumentError::invalid(
                            format!("{spath}.matrix"),
                            "required when no table is given",
                        ))
                    }
                    (Some(m), false) => {
                        let m = parse_matrix(m, &format!("{spath}.matrix"))?;
                        let dev = unitarity_deviation(&m);
                        if dev > ORTHONORMAL {
                            return Err(DocumentError::invalid(
                                format!("{spath}.matrix"),
                                format!(
                                    "player {} strategy {:?} is not unitary (max |U†U - I| = {dev:.3e})",
                                    p.id, sd.label
                                ),
                            ));
                        }
                        Action::Unitary(m)
                    }
                };
                strategies.push(Strategy {
                    label: sd.label.clone(),
                    action,
                });
            }
            let set = StrategySet::new(p.id, strategies)
                .map_err(|e| DocumentError::invalid(format!("{path}.strategies"), e))?;
            players.push(Player::new(set, profile).map_err(|e| DocumentError::invalid(&path, e))?);
        }

        self.check_criterion(&players)?;
        if let Some(tol) = self.classification.tol {
            if !tol.is_finite() || tol < 0.0 {
                return Err(DocumentError::invalid(
                    "classification.tol",
                    "must be finite and >= 0",
                ));
            }
        }

        match &self.table {
            Some(table) => {
                for field in ["initial", "pre", "post", "subsystem_dims"] {
                    let present = match field {
                        "initial" => self.initial.is_some(),
                        "pre" => self.pre.is_some(),
                        "post" => self.post.is_some(),
                        _ => self.subsystem_dims.is_some(),
                    };
                    if present {
                        return Err(DocumentError::invalid(
                            field,
                            "not allowed together with table",
                        ));
                    }
                }
                let mut entries = Vec::with_capacity(table.len());
                for (i, e) in table.iter().enumerate() {
                    let path = format!("table[{i}]");
                    if e.play.len() != players.len() {
                        return Err(DocumentError::invalid(
                            format!("{path}.play"),
                            format!("expected {} labels, found {}", players.len(), e.play.len()),
                        ));
                    }
                    let choices = e
                        .play
                        .iter()
                        .zip(&players)
                        .enumerate()
                        .map(|(k, (label, player))| {
                            player.strategies.index_of(label).ok_or_else(|| {
                                DocumentError::invalid(
                                    format!("{path}.play[{k}]"),
                                    format!(
                                        "unknown strategy {label:?} for player {}",
                                        player.id()
                                    ),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let state = parse_state(&e.state, d, &format!("{path}.state"))?;
                    entries.push((Play(choices), state));
                }
                QuantumGame::tabulated_from_entries(basis, players, entries)
                    .map_err(|e| DocumentError::invalid("table", e))
            }
            None => {
                let initial = match &self.initial {
                    Some(v) => parse_state(v, d, "initial")?,
                    None => StateVector::basis(d, 0).expect("d >= 2"),
                };
                let pre = self
                    .pre
                    .as_ref()
                    .map(|m| parse_matrix(m, "pre"))
                    .transpose()?;
                let post = self
                    .post
                    .as_ref()
                    .map(|m| parse_matrix(m, "post"))
                    .transpose()?;
                let subsystem_dims = match &self.subsystem_dims {
                    Some(dims) => dims.clone(),
                    None => players
                        .iter()
                        .map(|p| match &p.strategies.strategies()[0].action {
                            Action::Unitary(m) => m.nrows(),
                            Action::Key => 0,
                        })
                        .collect(),
                };
                let product: usize = subsystem_dims.iter().product();
                if subsystem_dims.len() != players.len() || product != d {
                    return Err(DocumentError::invalid(
                        "subsystem_dims",
                        format!(
                            "{subsystem_dims:?} must give one factor per player with product {d}"
                        ),
                    ));
                }
                for (k, (p, &sub)) in players.iter().zip(&subsystem_dims).enumerate() {
                    for (s, st) in p.strategies.strategies().iter().enumerate() {
                        if let Action::Unitary(m) = &st.action {
                            if m.nrows() != sub {
                                return Err(DocumentError::invalid(
                                    format!("players[{k}].strategies[{s}].matrix"),
                                    format!(
                                        "player {} strategy {:?} is {}x{}, expected {sub}x{sub}",
                                        p.id(),
                                        st.label,
                                        m.nrows(),
                                        m.nrows()
                                    ),
                                ));
                            }
                        }
                    }
                }
                QuantumGame::tensor_unitary(
                    basis,
                    players,
                    TensorSetup {
                        initial,
                        pre,
                        post,
                        subsystem_dims,
                    },
                )
                .map_err(|e| {
                    let path = match &e {
                        Error::NotUnitary { .. } => "players",
                        Error::Game(m) if m.starts_with("pre") => "pre",
                        Error::Game(m) if m.starts_with("post") => "post",
                        Error::Game(m) if m.contains("subsystem") => "subsystem_dims",
                        _ => "players",
                    };
                    DocumentError::invalid(path, e)
                })
            }
        }
    }

    fn build_basis(&self) -> Result<ObservableBasis, DocumentError> {
        let d = self.dimension;
        if self.basis.labels.len() != d {
            return Err(DocumentError::invalid(
                "basis.labels",
                format!("expected {d} labels, found {}", self.basis.labels.len()),
            ));
        }
        let labels = self.basis.labels.clone();
        let result = match &self.basis.vectors {
            None => ObservableBasis::computational_with_labels(labels),
            Some(vectors) => {
                if vectors.len() != d {
                    return Err(DocumentError::invalid(
                        "basis.vectors",
                        format!("expected {d} vectors, found {}", vectors.len()),
                    ));
                }
                let states = vectors
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_state(v, d, &format!("basis.vectors[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                ObservableBasis::new(states, labels)
            }
        };
        result.map_err(|e| {
            let path = match e {
                Error::Label(_) => "basis.labels",
                _ => "basis.vectors",
            };
            DocumentError::invalid(path, e)
        })
    }

    fn check_criterion(&self, players: &[Player]) -> Result<(), DocumentError> {
        if let Some(tol) = self.criterion.tol {
            if !tol.is_finite() || tol < 0.0 {
                return Err(DocumentError::invalid(
                    "criterion.tol",
                    "must be finite and >= 0",
                ));
            }
        }
        if let Some(w) = &self.criterion.weights {
            if self.criterion.variant != CriterionVariant::Scalarized {
                return Err(DocumentError::invalid(
                    "criterion.weights",
                    "only used by the scalarized criterion",
                ));
            }
            for p in players {
                crate::game::check_weights(w, p.preferences.tier_count()).map_err(|e| {
                    DocumentError::invalid("criterion.weights", format!("player {}: {e}", p.id()))
                })?;
            }
        }
        Ok(())
    }

    /// Describes an existing game as a document.
    pub fn from_game(
        game: &QuantumGame,
        criterion: &EquilibriumCriterion,
        rule: &ClassificationRule,
    ) -> Self {
        let basis = game.basis();
        let computational = basis
            .vectors()
            .iter()
            .enumerate()
            .all(|(i, v)| *v == StateVector::basis(basis.dim(), i).expect("in range"));
        let labels = basis.labels();
        let players = game
            .players()
            .iter()
            .map(|p| PlayerDoc {
                id: p.id(),
                preferences: p
                    .preferences
                    .tiers()
                    .iter()
                    .map(|t| t.iter().map(|&i| labels[i].clone()).collect())
                    .collect(),
                strategies: p
                    .strategies
                    .strategies()
                    .iter()
                    .map(|s| StrategyDoc {
                        label: s.label.clone(),
                        matrix: match &s.action {
                            Action::Key => None,
                            Action::Unitary(m) => Some(matrix_doc(m)),
                        },
                    })
                    .collect(),
            })
            .collect();
        let (criterion_doc, weights) = match criterion {
            EquilibriumCriterion::Literal => (CriterionVariant::Literal, None),
            EquilibriumCriterion::Lexicographic { .. } => (CriterionVariant::Lexicographic, None),
            EquilibriumCriterion::Scalarized { weights, .. } => {
                (CriterionVariant::Scalarized, weights.clone())
            }
        };
        let mut doc = GameDocument {
            schema_version: SCHEMA_VERSION.into(),
            description: None,
            dimension: game.dim(),
            basis: BasisDoc {
                labels: labels.to_vec(),
                vectors: (!computational)
                    .then(|| basis.vectors().iter().map(StateVector::to_pairs).collect()),
            },
            players,
            initial: None,
            pre: None,
            post: None,
            subsystem_dims: None,
            table: None,
            criterion: CriterionDoc {
                variant: criterion_doc,
                tol: criterion.tol(),
                weights,
            },
            classification: ClassificationDoc {
                tol: Some(rule.tol),
            },
        };
        match game.kind() {
            GameKind::Tabulated { table } => {
                doc.table = Some(
                    game.plays()
                        .zip(table)
                        .map(|(play, state)| TableEntry {
                            play: game.play_labels(&play),
                            state: state.to_pairs(),
                        })
                        .collect(),
                );
            }
            GameKind::TensorUnitary(setup) => {
                doc.initial = Some(setup.initial.to_pairs());
                doc.pre = setup.pre.as_ref().map(matrix_doc);
                doc.post = setup.post.as_ref().map(matrix_doc);
                doc.subsystem_dims = Some(setup.subsystem_dims.clone());
            }
        }
        doc
    }
}

fn build_profile(
    p: &PlayerDoc,
    basis: &ObservableBasis,
    path: &str,
) -> Result<PreferenceProfile, DocumentError> {
    let mut tiers = Vec::with_capacity(p.preferences.len());
    for (t, tier) in p.preferences.iter().enumerate() {
        let mut indices = Vec::with_capacity(tier.len());
        for (m, label) in tier.iter().enumerate() {
            let i = basis.index_of(label).ok_or_else(|| {
                DocumentError::invalid(
                    format!("{path}.preferences[{t}][{m}]"),
                    format!("unknown basis label {label:?}"),
                )
            })?;
            indices.push(i);
        }
        tiers.push(indices);
    }
    PreferenceProfile::new(p.id, tiers, basis.dim())
        .map_err(|e| DocumentError::invalid(format!("{path}.preferences"), e))
}

fn parse_state(v: &[Pair], dim: usize, path: &str) -> Result<StateVector, DocumentError> {
    if v.len() != dim {
        return Err(DocumentError::invalid(
            path,
            format!("expected {dim} amplitudes, found {}", v.len()),
        ));
    }
    StateVector::from_pairs(v).map_err(|e| DocumentError::invalid(path, e))
}

fn parse_matrix(rows: &MatrixDoc, path: &str) -> Result<Matrix, DocumentError> {
    let n = rows.len();
    if n == 0 {
        return Err(DocumentError::invalid(path, "matrix is empty"));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(DocumentError::invalid(
                format!("{path}[{r}]"),
                format!(
                    "matrix must be square: row has {} entries, expected {n}",
                    row.len()
                ),
            ));
        }
        for (c, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(DocumentError::invalid(
                    format!("{path}[{r}][{c}]"),
                    "entry is not finite",
                ));
            }
            entries.push(Complex64::new(z[0], z[1]));
        }
    }
    Ok(Matrix::from_row_slice(n, n, &entries))
}

fn matrix_doc(m: &Matrix) -> MatrixDoc {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

/// Parses a states file: a JSON array of vectors of `[re, im]` pairs.
pub fn parse_states(text: &str, dim: usize) -> Result<Vec<StateVector>, DocumentError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))?;
    let vectors: Vec<Vec<Pair>> =
        serde_path_to_error::deserialize(value).map_err(|e| DocumentError::Schema {
            path: e.path().to_string(),
            message: e.into_inner().to_string(),
        })?;
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| parse_state(v, dim, &format!("[{i}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn invalid_path(r: Result<QuantumGame, DocumentError>) -> String {
        match r {
            Err(DocumentError::Invalid { path, .. }) => path,
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    fn h4_doc() -> GameDocument {
        GameDocument::from_game(
            &bundled::h4_strictly_competitive(),
            &EquilibriumCriterion::lexicographic(),
            &ClassificationRule::default(),
        )
    }

    #[test]
    fn bundled_games_survive_document_round_trip() {
        for game in [
            bundled::constant(),
            bundled::matching_pennies(),
            bundled::coordination(),
            bundled::h4_strictly_competitive(),
        ] {
            let doc = GameDocument::from_game(
                &game,
                &EquilibriumCriterion::Literal,
                &ClassificationRule::default(),
            );
            let reparsed = GameDocument::parse(&doc.to_json()).unwrap();
            assert_eq!(reparsed, doc);
            assert_eq!(reparsed.to_game().unwrap(), game);
        }
    }

    #[test]
    fn syntax_and_schema_failures_are_distinguished() {
        assert!(GameDocument::parse("{not json").unwrap_err().is_syntax());
        let err =
            GameDocument::parse(r#"{"schema_version": "1.0", "dimension": "four"}"#).unwrap_err();
        assert!(matches!(err, DocumentError::Schema { ref path, .. } if path == "dimension"));
        let mut v: serde_json::Value = serde_json::from_str(&h4_doc().to_json()).unwrap();
        v["players"][0]["strategies"][1]["colour"] = serde_json::json!("red");
        let err = GameDocument::parse(&v.to_string()).unwrap_err();
        assert!(
            matches!(err, DocumentError::Schema { ref path, .. } if path.starts_with("players[0].strategies[1]"))
        );
    }

    #[test]
    fn non_unitary_strategy_names_player_and_strategy() {
        let mut doc = h4_doc();
        doc.players[1].strategies[1].matrix.as_mut().unwrap()[0][0][0] += 1e-3;
        let err = doc.to_game().unwrap_err();
        let DocumentError::Invalid { path, message } = err else {
            panic!()
        };
        assert_eq!(path, "players[1].strategies[1].matrix");
        assert!(
            message.contains("player 2") && message.contains("\"T\""),
            "{message}"
        );
    }

    #[test]
    fn semantic_failures_carry_field_paths() {
        let mut doc = h4_doc();
        doc.players[0].preferences = vec![vec!["b1".into()], vec!["b2".into(), "b3".into()]];
        assert_eq!(invalid_path(doc.to_game()), "players[0].preferences");

        let mut doc = h4_doc();
        doc.players[1].preferences[0][0] = "b9".into();
        assert_eq!(invalid_path(doc.to_game()), "players[1].preferences[0][0]");

        let mut doc = h4_doc();
        doc.basis.vectors = Some(vec![
            vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]];
            4
        ]);
        assert_eq!(invalid_path(doc.to_game()), "basis.vectors");

        let mut doc = h4_doc();
        doc.subsystem_dims = Some(vec![2, 3]);
        assert_eq!(invalid_path(doc.to_game()), "subsystem_dims");

        let mut doc = h4_doc();
        doc.players[0].strategies[0].matrix = None;
        assert_eq!(
            invalid_path(doc.to_game()),
            "players[0].strategies[0].matrix"
        );

        let mut doc = h4_doc();
        doc.schema_version = "2.0".into();
        assert_eq!(invalid_path(doc.to_game()), "schema_version");

        let mut doc = h4_doc();
        doc.criterion.weights = Some(vec![1.0, 0.5]);
        assert_eq!(invalid_path(doc.to_game()), "criterion.weights");
        doc.criterion.variant = CriterionVariant::Scalarized;
        assert!(doc.to_game().is_ok());
        doc.criterion.weights = Some(vec![1.0, 0.5, 0.25]);
        assert_eq!(invalid_path(doc.to_game()), "criterion.weights");
    }

    #[test]
    fn table_payload_is_validated() {
        let doc = GameDocument::from_game(
            &bundled::matching_pennies(),
            &EquilibriumCriterion::lexicographic(),
            &ClassificationRule::default(),
        );
        let mut missing = doc.clone();
        missing.table.as_mut().unwrap().pop();
        assert_eq!(invalid_path(missing.to_game()), "table");

        let mut unknown = doc.clone();
        unknown.table.as_mut().unwrap()[2].play[1] = "s9".into();
        assert_eq!(invalid_path(unknown.to_game()), "table[2].play[1]");

        let mut unnormalized = doc.clone();
        unnormalized.table.as_mut().unwrap()[0].state[1] = [1.0, 0.0];
        assert_eq!(invalid_path(unnormalized.to_game()), "table[0].state");

        let mut mixed = doc;
        mixed.initial = Some(vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(invalid_path(mixed.to_game()), "initial");
    }

    #[test]
    fn criterion_defaults_and_aliases() {
        let doc = GameDocument::parse(
            r#"{"schema_version":"1.0","dimension":2,"basis":{"labels":["up","down"]},
                "players":[{"id":1,"preferences":[["up"],["down"]],"strategies":[{"label":"a"}]}],
                "table":[{"play":["a"],"state":[[0,0],[1,0]]}],
                "criterion":{"variant":"scalar"}}"#,
        )
        .unwrap();
        assert_eq!(doc.criterion(), EquilibriumCriterion::scalarized());
        assert_eq!(doc.classification_rule(), ClassificationRule::default());
        let game = doc.to_game().unwrap();
        assert_eq!(game.basis().labels(), ["up", "down"]);
    }

    #[test]
    fn states_file_parsing() {
        let states = parse_states("[[[1,0],[0,0]],[[0,0],[0,1]]]", 2).unwrap();
        assert_eq!(states.len(), 2);
        assert!(matches!(
            parse_states("[[[1,0],[0,0],[0,0]]]", 2),
            Err(DocumentError::Invalid { ref path, .. }) if path == "[0]"
        ));
        assert!(parse_states("[", 2).unwrap_err().is_syntax());
    }
}
