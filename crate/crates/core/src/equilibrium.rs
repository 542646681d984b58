//! Nash equilibria of quantum games and the best-approximation machinery
//! behind their existence.
//!
//! Three criteria decide whether a unilateral deviation is profitable:
//!
//! * `Literal`: the deviation state must not be closer to any basis element
//!   than the equilibrium state (angles may only weakly grow, up to a slack).
//!   This ignores the order of the preference profiles entirely.
//! * `Lexicographic`: the deviating player compares tier scores in rank order.
//! * `Scalarized`: the deviating player compares a weighted sum of tier scores.
//!
//! Search is exhaustive over all plays. Certificates carry the evidence for
//! every unilateral deviation so a result can be audited without re-solving.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{check_weights, default_weights, lex_compare, weighted, Play, QuantumGame};
use crate::hilbert::{angle, measurement_distribution, same_ray, AngleRadians, StateVector};
use crate::tolerance::{ToleranceConfig, TIE};

#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumCriterion {
    Literal,
    Lexicographic {
        tol: f64,
    },
    /// `weights: None` uses `2^{-t}` per tier for each player.
    Scalarized {
        weights: Option<Vec<f64>>,
        tol: f64,
    },
}

impl EquilibriumCriterion {
    pub fn lexicographic() -> Self {
        Self::Lexicographic { tol: TIE }
    }

    pub fn scalarized() -> Self {
        Self::Scalarized {
            weights: None,
            tol: TIE,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Literal => "literal",
            Self::Lexicographic { .. } => "lexicographic",
            Self::Scalarized { .. } => "scalarized",
        }
    }

    pub fn tol(&self) -> Option<f64> {
        match self {
            Self::Literal => None,
            Self::Lexicographic { tol } | Self::Scalarized { tol, .. } => Some(*tol),
        }
    }

    fn validate(&self, game: &QuantumGame) -> Result<()> {
        if let Some(tol) = self.tol() {
            if !tol.is_finite() || tol < 0.0 {
                return Err(Error::Weight(format!(
                    "tolerance must be finite and >= 0, got {tol}"
                )));
            }
        }
        if let Self::Scalarized {
            weights: Some(w), ..
        } = self
        {
            for p in game.players() {
                check_weights(w, p.preferences.tier_count())?;
            }
        }
        Ok(())
    }

    fn weights_for(&self, tiers: usize) -> Vec<f64> {
        match self {
            Self::Scalarized {
                weights: Some(w), ..
            } => w.clone(),
            _ => default_weights(tiers),
        }
    }
}

impl fmt::Display for EquilibriumCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a deviation was compared on.
#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    /// Angles to each basis element, in radians.
    Angles {
        equilibrium: Vec<f64>,
        deviation: Vec<f64>,
    },
    /// Tier scores under the deviating player's profile.
    TierScores {
        equilibrium: Vec<f64>,
        deviation: Vec<f64>,
    },
    /// Tier scores and the weighted utility built from them.
    Utility {
        equilibrium_scores: Vec<f64>,
        deviation_scores: Vec<f64>,
        equilibrium: f64,
        deviation: f64,
    },
}

/// One unilateral deviation from a candidate play.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    /// Position of the deviating player in the game's player list.
    pub player: usize,
    pub strategy: usize,
    pub play: Play,
    pub state: StateVector,
    pub evidence: Evidence,
    /// True when this deviation breaks the equilibrium.
    pub profitable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCertificate {
    pub play: Play,
    /// The Nash equilibrium quantum state `G(E*)`.
    pub state: StateVector,
    pub criterion: EquilibriumCriterion,
    /// Every unilateral deviation, grouped by player then strategy.
    pub deviations: Vec<Deviation>,
}

impl EquilibriumCertificate {
    pub fn holds(&self) -> bool {
        self.deviations.iter().all(|d| !d.profitable)
    }
}

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct NashSearch {
    pub equilibria: Vec<EquilibriumCertificate>,
    pub plays_tested: usize,
}

/// Checks one play and returns the full certificate either way.
pub fn is_nash(
    game: &QuantumGame,
    play: &Play,
    criterion: &EquilibriumCriterion,
) -> Result<(bool, EquilibriumCertificate)> {
    is_nash_with(game, play, criterion, &ToleranceConfig::default())
}

pub fn is_nash_with(
    game: &QuantumGame,
    play: &Play,
    criterion: &EquilibriumCriterion,
    tol: &ToleranceConfig,
) -> Result<(bool, EquilibriumCertificate)> {
    criterion.validate(game)?;
    game.play_index(play)?;
    let cert = certify(game, play, criterion, tol, |p| game.evaluate(p))?;
    Ok((cert.holds(), cert))
}

/// Tests every play and returns the equilibria in lexicographic play order.
///
/// Plays are evaluated in parallel on the current rayon pool; the output does
/// not depend on scheduling.
pub fn find_all_nash(game: &QuantumGame, criterion: &EquilibriumCriterion) -> Result<NashSearch> {
    find_all_nash_with(game, criterion, &ToleranceConfig::default())
}

pub fn find_all_nash_with(
    game: &QuantumGame,
    criterion: &EquilibriumCriterion,
    tol: &ToleranceConfig,
) -> Result<NashSearch> {
    criterion.validate(game)?;
    let count = game.play_count();
    let states: Vec<StateVector> = (0..count)
        .into_par_iter()
        .map(|i| game.evaluate(&game.play_at(i)))
        .collect::<Result<_>>()?;
    let lookup = |p: &Play| Ok(states[game.play_index(p)?].clone());
    let certs: Vec<Option<EquilibriumCertificate>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let cert = certify(game, &game.play_at(i), criterion, tol, lookup)?;
            Ok(cert.holds().then_some(cert))
        })
        .collect::<Result<_>>()?;
    Ok(NashSearch {
        equilibria: certs.into_iter().flatten().collect(),
        plays_tested: count,
    })
}

fn certify(
    game: &QuantumGame,
    play: &Play,
    criterion: &EquilibriumCriterion,
    tol: &ToleranceConfig,
    state_of: impl Fn(&Play) -> Result<StateVector>,
) -> Result<EquilibriumCertificate> {
    let basis = game.basis();
    let state = state_of(play)?;
    let base_angles = angle_values(game, &state)?;
    let base_dist = measurement_distribution(&state, basis)?;

    let mut deviations = Vec::new();
    for (k, player) in game.players().iter().enumerate() {
        let profile = &player.preferences;
        for s in 0..player.strategies.len() {
            if s == play.0[k] {
                continue;
            }
            let dev_play = play.deviate(k, s);
            let dev_state = state_of(&dev_play)?;
            let (evidence, profitable) = match criterion {
                EquilibriumCriterion::Literal => {
                    let dev_angles = angle_values(game, &dev_state)?;
                    let profitable = dev_angles
                        .iter()
                        .zip(&base_angles)
                        .any(|(dev, base)| *dev < base - tol.tie);
                    let evidence = Evidence::Angles {
                        equilibrium: base_angles.clone(),
                        deviation: dev_angles,
                    };
                    (evidence, profitable)
                }
                EquilibriumCriterion::Lexicographic { tol: lex_tol } => {
                    let base_scores = profile.scores_from_distribution(&base_dist);
                    let dev_scores = profile
                        .scores_from_distribution(&measurement_distribution(&dev_state, basis)?);
                    let profitable = lex_compare(&dev_scores, &base_scores, *lex_tol);
                    let evidence = Evidence::TierScores {
                        equilibrium: base_scores,
                        deviation: dev_scores,
                    };
                    (evidence, profitable)
                }
                EquilibriumCriterion::Scalarized { tol: s_tol, .. } => {
                    let weights = criterion.weights_for(profile.tier_count());
                    let base_scores = profile.scores_from_distribution(&base_dist);
                    let dev_scores = profile
                        .scores_from_distribution(&measurement_distribution(&dev_state, basis)?);
                    let base_u = weighted(&base_scores, &weights);
                    let dev_u = weighted(&dev_scores, &weights);
                    let evidence = Evidence::Utility {
                        equilibrium_scores: base_scores,
                        deviation_scores: dev_scores,
                        equilibrium: base_u,
                        deviation: dev_u,
                    };
                    (evidence, dev_u > base_u + s_tol)
                }
            };
            deviations.push(Deviation {
                player: k,
                strategy: s,
                play: dev_play,
                state: dev_state,
                evidence,
                profitable,
            });
        }
    }
    Ok(EquilibriumCertificate {
        play: play.clone(),
        state,
        criterion: criterion.clone(),
        deviations,
    })
}

fn angle_values(game: &QuantumGame, state: &StateVector) -> Result<Vec<f64>> {
    Ok(game
        .basis()
        .angles(state)?
        .into_iter()
        .map(AngleRadians::value)
        .collect())
}

/// Distinct equilibrium states, identified up to global phase, in order of
/// first appearance.
pub fn ne_states(certs: &[EquilibriumCertificate]) -> Vec<StateVector> {
    ne_states_with(certs, TIE)
}

pub fn ne_states_with(certs: &[EquilibriumCertificate], tol: f64) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = Vec::new();
    for cert in certs {
        let seen = out
            .iter()
            .any(|s| same_ray(s, &cert.state, tol).unwrap_or(false));
        if !seen {
            out.push(cert.state.clone());
        }
    }
    out
}

/// How close the game can bring its output to one basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub target: usize,
    /// Normalized orthogonal projection of the target onto the span of the
    /// image; `None` when the target is orthogonal to it.
    pub projected: Option<StateVector>,
    pub min_angle_subspace: AngleRadians,
    /// Play whose state is closest to the target (first in play order on ties).
    pub best_play: Play,
    pub min_angle_play: AngleRadians,
    /// Dimension of the span of the image.
    pub span_rank: usize,
}

pub fn best_approximation(game: &QuantumGame, target: usize) -> Result<ProjectionResult> {
    best_approximation_with(game, target, &ToleranceConfig::default())
}

pub fn best_approximation_with(
    game: &QuantumGame,
    target: usize,
    tol: &ToleranceConfig,
) -> Result<ProjectionResult> {
    let b = game.basis().vector(target)?.clone();
    let image = game.image();

    let mut best: Option<(Play, AngleRadians)> = None;
    for (play, state) in &image {
        let a = angle(state, &b)?;
        if best.as_ref().is_none_or(|(_, min)| a < *min) {
            best = Some((play.clone(), a));
        }
    }
    let (best_play, min_angle_play) = best.expect("games have at least one play");

    let span = orthonormalize(image.iter().map(|(_, s)| s.amps()), tol.gram_schmidt_drop);
    let mut proj = vec![Complex64::new(0.0, 0.0); b.dim()];
    for e in &span {
        let coeff = dot(e, b.amps());
        for (p, x) in proj.iter_mut().zip(e) {
            *p += coeff * x;
        }
    }
    let proj_norm = proj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (projected, min_angle_subspace) = if proj_norm < tol.gram_schmidt_drop {
        (None, AngleRadians::RIGHT)
    } else {
        let p = StateVector::normalize(proj)?;
        let a = angle(&b, &p)?;
        (Some(p), a)
    };

    Ok(ProjectionResult {
        target,
        projected,
        min_angle_subspace,
        best_play,
        min_angle_play,
        span_rank: span.len(),
    })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

/// Classical Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual norm falls below `drop` are treated as dependent and skipped.
pub fn orthonormalize<'a>(
    vectors: impl IntoIterator<Item = &'a [Complex64]>,
    drop: f64,
) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut r = v.to_vec();
        for _pass in 0..2 {
            let coeffs: Vec<Complex64> = out.iter().map(|e| dot(e, &r)).collect();
            for (e, c) in out.iter().zip(coeffs) {
                for (ri, ei) in r.iter_mut().zip(e) {
                    *ri -= c * ei;
                }
            }
        }
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm >= drop {
            r.iter_mut().for_each(|z| *z /= norm);
            out.push(r);
        }
    }
    out
}

/// For a literal certificate: every deviation leaves the measurement
/// distribution unchanged, entry by entry, within the rigidity tolerance.
///
/// Literal equilibria force this. Angles may only weakly grow under
/// deviation, while the squared cosines sum to one on both sides.
pub fn rigidity_check(game: &QuantumGame, cert: &EquilibriumCertificate) -> Result<bool> {
    rigidity_check_with(game, cert, &ToleranceConfig::default())
}

pub fn rigidity_check_with(
    game: &QuantumGame,
    cert: &EquilibriumCertificate,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if cert.criterion != EquilibriumCriterion::Literal {
        return Err(Error::CriterionMismatch {
            expected: "literal",
        });
    }
    let base = measurement_distribution(&cert.state, game.basis())?;
    for dev in &cert.deviations {
        let d = measurement_distribution(&dev.state, game.basis())?;
        if d.iter()
            .zip(&base)
            .any(|(x, y)| (x - y).abs() > tol.rigidity)
        {
            return Ok(false);
        }
    }
    Ok(true)
}
