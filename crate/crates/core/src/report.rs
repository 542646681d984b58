//! Machine-readable run reports.
//!
//! Every float is rounded to 12 significant digits before serialization so
//! that reports are byte-identical across platforms and thread counts.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::classify::{ClassificationReport, ClassificationRule, ComputationInsight};
use crate::equilibrium::{
    rigidity_check, Deviation, EquilibriumCertificate, EquilibriumCriterion, Evidence, NashSearch,
};
use crate::error::Result;
use crate::game::QuantumGame;
use crate::hilbert::{measurement_distribution, StateVector};

const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(round_sig).collect()
}

fn pairs(state: &StateVector) -> Vec<[f64; 2]> {
    state
        .to_pairs()
        .into_iter()
        .map(|[re, im]| [round_sig(re), round_sig(im)])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub variant: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl From<&EquilibriumCriterion> for CriterionReport {
    fn from(c: &EquilibriumCriterion) -> Self {
        Self {
            variant: c.name(),
            tol: c.tol(),
            weights: match c {
                EquilibriumCriterion::Scalarized { weights, .. } => weights.clone(),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceReport {
    Angles {
        equilibrium: Vec<f64>,
        deviation: Vec<f64>,
    },
    TierScores {
        equilibrium: Vec<f64>,
        deviation: Vec<f64>,
    },
    Utility {
        equilibrium_scores: Vec<f64>,
        deviation_scores: Vec<f64>,
        equilibrium: f64,
        deviation: f64,
    },
}

impl From<&Evidence> for EvidenceReport {
    fn from(e: &Evidence) -> Self {
        match e {
            Evidence::Angles {
                equilibrium,
                deviation,
            } => Self::Angles {
                equilibrium: round_all(equilibrium),
                deviation: round_all(deviation),
            },
            Evidence::TierScores {
                equilibrium,
                deviation,
            } => Self::TierScores {
                equilibrium: round_all(equilibrium),
                deviation: round_all(deviation),
            },
            Evidence::Utility {
                equilibrium_scores,
                deviation_scores,
                equilibrium,
                deviation,
            } => Self::Utility {
                equilibrium_scores: round_all(equilibrium_scores),
                deviation_scores: round_all(deviation_scores),
                equilibrium: round_sig(*equilibrium),
                deviation: round_sig(*deviation),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub player: usize,
    pub strategy: String,
    pub play: Vec<String>,
    pub state: Vec<[f64; 2]>,
    pub evidence: EvidenceReport,
    pub profitable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub play: Vec<String>,
    pub state: Vec<[f64; 2]>,
    pub distribution: Vec<f64>,
    pub deviations: Vec<DeviationReport>,
    /// Present for literal equilibria only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigid: Option<bool>,
}

/// Label-to-count map that keeps basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCounts(pub Vec<(String, usize)>);

impl Serialize for GroupCounts {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (label, n) in &self.0 {
            map.serialize_entry(label, n)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypedItemReport {
    pub index: usize,
    pub assigned: Option<String>,
    pub margin: f64,
    pub probability: f64,
    pub high_probability: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationSection {
    pub source: &'static str,
    pub tol: f64,
    pub ne_state: Vec<[f64; 2]>,
    pub ne_angles: Vec<f64>,
    pub group_counts: GroupCounts,
    pub unclassified: usize,
    pub items: Vec<TypedItemReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InsightSection {
    pub desired: String,
    pub equilibrium_exists: bool,
    pub note: String,
    pub angle: Option<f64>,
    pub probability: f64,
    pub high_probability: bool,
    pub best_play: Vec<String>,
    pub min_angle_play: f64,
    pub min_angle_subspace: f64,
    pub projected: Option<Vec<[f64; 2]>>,
    pub span_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub input_digest: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub criterion: CriterionReport,
    pub plays_tested: usize,
    pub equilibria: Vec<EquilibriumReport>,
    pub ne_states: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub insight: Option<InsightSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    /// Builds the equilibrium part of a report from a completed search.
    pub fn from_search(
        game: &QuantumGame,
        criterion: &EquilibriumCriterion,
        search: &NashSearch,
        input_digest: impl Into<String>,
    ) -> Result<Self> {
        let equilibria = search
            .equilibria
            .iter()
            .map(|c| equilibrium_report(game, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            input_digest: input_digest.into(),
            dimension: game.dim(),
            basis: game.basis().labels().to_vec(),
            criterion: criterion.into(),
            plays_tested: search.plays_tested,
            equilibria,
            ne_states: crate::equilibrium::ne_states(&search.equilibria)
                .iter()
                .map(pairs)
                .collect(),
            classification: None,
            insight: None,
            timing_ms: None,
        })
    }

    /// Adds a classification section. `source` says what was classified,
    /// e.g. `"image"` or `"states"`.
    pub fn with_classification(
        mut self,
        game: &QuantumGame,
        report: &ClassificationReport,
        rule: &ClassificationRule,
        source: &'static str,
    ) -> Result<Self> {
        let labels = game.basis().labels();
        let ne_angles = game
            .basis()
            .angles(&report.ne_state)?
            .into_iter()
            .map(|a| round_sig(a.value()))
            .collect();
        self.classification = Some(ClassificationSection {
            source,
            tol: rule.tol,
            ne_state: pairs(&report.ne_state),
            ne_angles,
            group_counts: GroupCounts(
                report
                    .labels
                    .iter()
                    .cloned()
                    .zip(report.group_counts.iter().copied())
                    .collect(),
            ),
            unclassified: report.unclassified,
            items: report
                .items
                .iter()
                .enumerate()
                .map(|(index, t)| TypedItemReport {
                    index,
                    assigned: t.assigned.map(|i| labels[i].clone()),
                    margin: round_sig(t.margin),
                    probability: round_sig(t.probability),
                    high_probability: t.high_probability,
                })
                .collect(),
        });
        Ok(self)
    }

    pub fn with_insight(mut self, game: &QuantumGame, insight: &ComputationInsight) -> Self {
        let label = &game.basis().labels()[insight.desired];
        let note = if insight.equilibrium_exists {
            if insight.high_probability {
                format!("equilibrium measures {label} with probability above 1/2")
            } else {
                format!("equilibrium measures {label} with probability at most 1/2")
            }
        } else {
            "no equilibrium under this criterion; best approximation only".to_string()
        };
        self.insight = Some(InsightSection {
            desired: label.clone(),
            equilibrium_exists: insight.equilibrium_exists,
            note,
            angle: insight.angle.map(|a| round_sig(a.value())),
            probability: round_sig(insight.probability),
            high_probability: insight.high_probability,
            best_play: game.play_labels(&insight.best.best_play),
            min_angle_play: round_sig(insight.best.min_angle_play.value()),
            min_angle_subspace: round_sig(insight.best.min_angle_subspace.value()),
            projected: insight.best.projected.as_ref().map(pairs),
            span_rank: insight.best.span_rank,
        });
        self
    }

    pub fn with_timing(mut self, ms: f64) -> Self {
        self.timing_ms = Some(round_sig(ms));
        self
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Fixed-width plain-text summary.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input     {}", self.input_digest);
        let _ = writeln!(out, "criterion {}", self.criterion.variant);
        let _ = writeln!(out, "plays     {}", self.plays_tested);
        let _ = writeln!(out, "equilibria {}", self.equilibria.len());
        if !self.equilibria.is_empty() {
            let _ = write!(out, "\n{:<24}", "play");
            for label in &self.basis {
                let _ = write!(out, " {:>14}", format!("P({label})"));
            }
            let _ = writeln!(out);
            for eq in &self.equilibria {
                let _ = write!(out, "{:<24}", format!("({})", eq.play.join(",")));
                for p in &eq.distribution {
                    let _ = write!(out, " {:>14.9}", p);
                }
                if let Some(rigid) = eq.rigid {
                    let _ = write!(out, "  rigid={rigid}");
                }
                let _ = writeln!(out);
            }
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(
                out,
                "\nclassification ({}, {} items)",
                c.source,
                c.items.len()
            );
            let _ = writeln!(out, "{:<16} {:>8}", "type", "count");
            for (label, n) in &c.group_counts.0 {
                let _ = writeln!(out, "{:<16} {:>8}", label, n);
            }
            let _ = writeln!(out, "{:<16} {:>8}", "unclassified", c.unclassified);
        }
        if let Some(i) = &self.insight {
            let _ = writeln!(out, "\ninsight for {}", i.desired);
            let _ = writeln!(out, "  {}", i.note);
            if let Some(a) = i.angle {
                let _ = writeln!(out, "  angle       {a:.9}");
            }
            let _ = writeln!(out, "  probability {:.9}", i.probability);
            let _ = writeln!(
                out,
                "  best play   ({}) at angle {:.9}",
                i.best_play.join(","),
                i.min_angle_play
            );
            let _ = writeln!(
                out,
                "  span angle  {:.9} (rank {})",
                i.min_angle_subspace, i.span_rank
            );
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "\ntime {ms} ms");
        }
        out
    }
}

fn equilibrium_report(
    game: &QuantumGame,
    cert: &EquilibriumCertificate,
) -> Result<EquilibriumReport> {
    let rigid = match cert.criterion {
        EquilibriumCriterion::Literal => Some(rigidity_check(game, cert)?),
        _ => None,
    };
    Ok(EquilibriumReport {
        play: game.play_labels(&cert.play),
        state: pairs(&cert.state),
        distribution: round_all(&measurement_distribution(&cert.state, game.basis())?),
        deviations: cert
            .deviations
            .iter()
            .map(|d| deviation_report(game, d))
            .collect(),
        rigid,
    })
}

fn deviation_report(game: &QuantumGame, d: &Deviation) -> DeviationReport {
    let player = &game.players()[d.player];
    DeviationReport {
        player: player.id(),
        strategy: player.strategies.strategies()[d.strategy].label.clone(),
        play: game.play_labels(&d.play),
        state: pairs(&d.state),
        evidence: (&d.evidence).into(),
        profitable: d.profitable,
    }
}
