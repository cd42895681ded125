//! Motive-based citizen choice with opportunity/ability attenuation.
//!
//! For a decision with options Act and NotAct, each option's total
//! satisfaction is the weighted sum of per-motive satisfactions. The four
//! drawn motives come from configured distributions; conformity is
//! `2P - 1` for acting and `1 - 2P` for not acting, where `P` is the share of
//! neighbours who already act. The option with the strictly larger total is
//! chosen; ties keep the status quo (NotAct).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::TruncatedNormal;
use crate::error::{Error, Result};
use crate::population::{ActivistAlignment, MoaProfile, Motive, MotiveVector, PerMotive};
use crate::validate::{join, Validate, Validator};

const SATISFACTION_RANGE: (f64, f64) = (-1.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionKind {
    JoinEngo,
    ActionProtest,
    DisruptiveProtest,
}

impl DecisionKind {
    pub const ALL: [DecisionKind; 3] = [
        DecisionKind::JoinEngo,
        DecisionKind::ActionProtest,
        DecisionKind::DisruptiveProtest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecisionKind::JoinEngo => "join_engo",
            DecisionKind::ActionProtest => "action_protest",
            DecisionKind::DisruptiveProtest => "disruptive_protest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionKind {
    Act,
    NotAct,
}

/// Satisfaction distributions for one motive within one decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotiveSatisfaction {
    pub act: TruncatedNormal,
    pub not_act: TruncatedNormal,
    /// +1 if acting serves the motive, -1 if it works against it, 0 if neutral.
    pub alignment: i8,
}

impl MotiveSatisfaction {
    pub const fn new(act: f64, not_act: f64, sd: f64, alignment: i8) -> Self {
        MotiveSatisfaction {
            act: TruncatedNormal::new(act, sd),
            not_act: TruncatedNormal::new(not_act, sd),
            alignment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionSatisfaction {
    pub climate_concern: MotiveSatisfaction,
    pub nature_concern: MotiveSatisfaction,
    pub growth_first: MotiveSatisfaction,
    pub economic_security: MotiveSatisfaction,
}

impl DecisionSatisfaction {
    /// `None` for conformity, which is computed endogenously.
    pub fn get(&self, motive: Motive) -> Option<&MotiveSatisfaction> {
        match motive {
            Motive::ClimateConcern => Some(&self.climate_concern),
            Motive::NatureConcern => Some(&self.nature_concern),
            Motive::GrowthFirst => Some(&self.growth_first),
            Motive::EconomicSecurity => Some(&self.economic_security),
            Motive::Conformity => None,
        }
    }

    pub fn get_mut(&mut self, motive: Motive) -> Option<&mut MotiveSatisfaction> {
        match motive {
            Motive::ClimateConcern => Some(&mut self.climate_concern),
            Motive::NatureConcern => Some(&mut self.nature_concern),
            Motive::GrowthFirst => Some(&mut self.growth_first),
            Motive::EconomicSecurity => Some(&mut self.economic_security),
            Motive::Conformity => None,
        }
    }

    /// Every motive gets the same degenerate (sd = 0) distributions.
    pub fn degenerate(act: f64, not_act: f64) -> Self {
        let pos = MotiveSatisfaction::new(act, not_act, 0.0, 1);
        let neg = MotiveSatisfaction { alignment: -1, ..pos };
        DecisionSatisfaction {
            climate_concern: pos,
            nature_concern: pos,
            growth_first: neg,
            economic_security: neg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SatisfactionSpec {
    pub join_engo: DecisionSatisfaction,
    pub action_protest: DecisionSatisfaction,
    pub disruptive_protest: DecisionSatisfaction,
}

impl SatisfactionSpec {
    pub fn for_kind(&self, kind: DecisionKind) -> &DecisionSatisfaction {
        match kind {
            DecisionKind::JoinEngo => &self.join_engo,
            DecisionKind::ActionProtest => &self.action_protest,
            DecisionKind::DisruptiveProtest => &self.disruptive_protest,
        }
    }

    pub fn for_kind_mut(&mut self, kind: DecisionKind) -> &mut DecisionSatisfaction {
        match kind {
            DecisionKind::JoinEngo => &mut self.join_engo,
            DecisionKind::ActionProtest => &mut self.action_protest,
            DecisionKind::DisruptiveProtest => &mut self.disruptive_protest,
        }
    }

    pub fn uniform(decision: DecisionSatisfaction) -> Self {
        SatisfactionSpec {
            join_engo: decision,
            action_protest: decision,
            disruptive_protest: decision,
        }
    }
}

impl Default for SatisfactionSpec {
    fn default() -> Self {
        // Environmental motives favour acting, economic motives oppose it.
        // Disruptive participation carries the largest personal cost.
        SatisfactionSpec {
            join_engo: DecisionSatisfaction {
                climate_concern: MotiveSatisfaction::new(0.5, -0.1, 0.25, 1),
                nature_concern: MotiveSatisfaction::new(0.4, -0.1, 0.25, 1),
                growth_first: MotiveSatisfaction::new(-0.4, 0.3, 0.25, -1),
                economic_security: MotiveSatisfaction::new(-0.3, 0.3, 0.25, -1),
            },
            action_protest: DecisionSatisfaction {
                climate_concern: MotiveSatisfaction::new(0.6, -0.1, 0.25, 1),
                nature_concern: MotiveSatisfaction::new(0.5, -0.1, 0.25, 1),
                growth_first: MotiveSatisfaction::new(-0.4, 0.3, 0.25, -1),
                economic_security: MotiveSatisfaction::new(-0.3, 0.2, 0.25, -1),
            },
            disruptive_protest: DecisionSatisfaction {
                climate_concern: MotiveSatisfaction::new(0.4, 0.0, 0.25, 1),
                nature_concern: MotiveSatisfaction::new(0.3, 0.0, 0.25, 1),
                growth_first: MotiveSatisfaction::new(-0.6, 0.4, 0.25, -1),
                economic_security: MotiveSatisfaction::new(-0.5, 0.4, 0.25, -1),
            },
        }
    }
}

impl Validate for SatisfactionSpec {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        for kind in DecisionKind::ALL {
            let kp = join(path, kind.name());
            let d = self.for_kind(kind);
            for m in Motive::DRAWN {
                let ms = d.get(m).expect("drawn motive");
                let mp = join(&kp, m.name());
                ms.act.validate_into(&join(&mp, "act"), SATISFACTION_RANGE, v);
                ms.not_act
                    .validate_into(&join(&mp, "not_act"), SATISFACTION_RANGE, v);
                v.ensure((-1..=1).contains(&ms.alignment), &join(&mp, "alignment"), || {
                    format!("alignment must be -1, 0 or 1, got {}", ms.alignment)
                });
            }
        }
    }
}

/// Weighted sum of motive satisfactions.
pub fn total_satisfaction(weights: &MotiveVector, satisfactions: &MotiveVector) -> f64 {
    Motive::ALL
        .iter()
        .map(|&m| weights[m] * satisfactions[m])
        .sum()
}

/// Strict argmax over the two options; an exact tie keeps NotAct.
pub fn choose_option(score_act: f64, score_not: f64) -> Result<OptionKind> {
    if !score_act.is_finite() || !score_not.is_finite() {
        return Err(Error::NonFinite("option score"));
    }
    Ok(if score_act > score_not {
        OptionKind::Act
    } else {
        OptionKind::NotAct
    })
}

/// Conformity satisfaction `(2P - 1, 1 - 2P)` for peer share `P`.
pub fn conformity_satisfaction(peer_share: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&peer_share) {
        return Err(Error::contract(format!(
            "peer share must lie in [0, 1], got {peer_share}"
        )));
    }
    Ok((2.0 * peer_share - 1.0, 1.0 - 2.0 * peer_share))
}

/// Attenuate a positive, positively aligned satisfaction by the citizen's
/// opportunity/ability factor. Anything else passes through untouched.
pub fn apply_moa(satisfaction: f64, moa: &MoaProfile, alignment: i8) -> Result<f64> {
    if !(-1.0..=1.0).contains(&satisfaction) {
        return Err(Error::contract(format!(
            "satisfaction must lie in [-1, 1], got {satisfaction}"
        )));
    }
    if alignment <= 0 || satisfaction <= 0.0 {
        return Ok(satisfaction);
    }
    Ok(satisfaction * moa.factor())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionContext {
    /// Share of neighbours already acting on this decision.
    pub peer_share: f64,
    pub engo_exists: bool,
    /// Awareness of the event this decision refers to. Ignored for JoinEngo.
    pub aware: bool,
    pub moa: MoaProfile,
    pub activist_alignment: ActivistAlignment,
}

impl DecisionContext {
    pub fn act_available(&self, kind: DecisionKind) -> bool {
        match kind {
            DecisionKind::JoinEngo => self.engo_exists,
            DecisionKind::ActionProtest | DecisionKind::DisruptiveProtest => self.aware,
        }
    }

    pub fn moa_eligible(&self, kind: DecisionKind) -> bool {
        kind != DecisionKind::DisruptiveProtest
            || self.activist_alignment == ActivistAlignment::Aligned
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionReason {
    /// The Act option was gated off; no satisfactions were drawn.
    Unavailable,
    Evaluated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionOutcome {
    pub option: OptionKind,
    pub reason: DecisionReason,
    /// Whether any opportunity/ability attenuation was applied.
    pub moa_applied: bool,
    /// `(S(act), S(not act))` when evaluated.
    pub scores: Option<(f64, f64)>,
}

impl DecisionOutcome {
    pub fn acted(&self) -> bool {
        self.option == OptionKind::Act
    }
}

/// Evaluate one decision for one citizen.
///
/// Availability gates run first. Then, per drawn motive in [`Motive::DRAWN`]
/// order, one Act and one NotAct satisfaction are drawn from `rng`; Act
/// satisfactions pass through [`apply_moa`] unless the decision is disruptive
/// and the citizen is not in the aligned category.
pub fn decide<R: Rng + ?Sized>(
    weights: &MotiveVector,
    kind: DecisionKind,
    ctx: &DecisionContext,
    spec: &SatisfactionSpec,
    rng: &mut R,
) -> Result<DecisionOutcome> {
    if !ctx.act_available(kind) {
        return Ok(DecisionOutcome {
            option: OptionKind::NotAct,
            reason: DecisionReason::Unavailable,
            moa_applied: false,
            scores: None,
        });
    }
    let table = spec.for_kind(kind);
    let moa_on = ctx.moa_eligible(kind);
    let mut act = PerMotive::splat(0.0);
    let mut not_act = PerMotive::splat(0.0);
    let mut moa_applied = false;
    for m in Motive::DRAWN {
        let ms = table.get(m).expect("drawn motive");
        let s_act = ms.act.sample(rng, SATISFACTION_RANGE);
        let s_not = ms.not_act.sample(rng, SATISFACTION_RANGE);
        act[m] = if moa_on {
            moa_applied |= ms.alignment > 0 && s_act > 0.0;
            apply_moa(s_act, &ctx.moa, ms.alignment)?
        } else {
            s_act
        };
        not_act[m] = s_not;
    }
    let (c_act, c_not) = conformity_satisfaction(ctx.peer_share)?;
    act[Motive::Conformity] = c_act;
    not_act[Motive::Conformity] = c_not;

    let score_act = total_satisfaction(weights, &act);
    let score_not = total_satisfaction(weights, &not_act);
    Ok(DecisionOutcome {
        option: choose_option(score_act, score_not)?,
        reason: DecisionReason::Evaluated,
        moa_applied,
        scores: Some((score_act, score_not)),
    })
}
