//! The strategic eNGO: formation, action repertoire, intensity and the
//! cumulative pressure stock.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{Channels, Frame, NewsItem, Origin};
use crate::validate::{join, Validate, Validator};

/// Organisational attributes. Political system openness is always "open" and
/// has no field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngoAttributes {
    pub resources: f64,
    pub experience_years: f64,
    /// 1 = fully confrontational.
    pub strategic_orientation: f64,
    pub cultural_trust: f64,
}

impl Default for EngoAttributes {
    fn default() -> Self {
        EngoAttributes {
            resources: 0.5,
            experience_years: 5.0,
            strategic_orientation: 0.6,
            cultural_trust: 0.6,
        }
    }
}

impl Validate for EngoAttributes {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.unit(&join(path, "resources"), self.resources);
        v.non_negative(&join(path, "experience_years"), self.experience_years);
        v.unit(&join(path, "strategic_orientation"), self.strategic_orientation);
        v.unit(&join(path, "cultural_trust"), self.cultural_trust);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionType {
    Direct,
    Indirect,
    Protest,
    DisruptiveProtest,
}

impl ActionType {
    pub const ALL: [ActionType; 4] = [
        ActionType::Direct,
        ActionType::Indirect,
        ActionType::Protest,
        ActionType::DisruptiveProtest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionType::Direct => "direct",
            ActionType::Indirect => "indirect",
            ActionType::Protest => "protest",
            ActionType::DisruptiveProtest => "disruptive_protest",
        }
    }

    pub fn generates_pressure(self) -> bool {
        self != ActionType::Indirect
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EligibilityThresholds {
    pub direct_resources: f64,
    pub direct_trust: f64,
    pub protest_resources: f64,
    pub disruptive_orientation: f64,
    /// Minimum resources for conventional-media coverage of indirect actions.
    pub conventional_resources: f64,
}

impl Default for EligibilityThresholds {
    fn default() -> Self {
        EligibilityThresholds {
            direct_resources: 0.6,
            direct_trust: 0.5,
            protest_resources: 0.3,
            disruptive_orientation: 0.7,
            conventional_resources: 0.6,
        }
    }
}

impl Validate for EligibilityThresholds {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.unit(&join(path, "direct_resources"), self.direct_resources);
        v.unit(&join(path, "direct_trust"), self.direct_trust);
        v.unit(&join(path, "protest_resources"), self.protest_resources);
        v.unit(&join(path, "disruptive_orientation"), self.disruptive_orientation);
        v.unit(&join(path, "conventional_resources"), self.conventional_resources);
    }
}

/// Base firing rates. The realised probability is `rate * attribute`:
/// orientation for both protest kinds, trust for direct action, resources
/// for indirect action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionRates {
    pub direct: f64,
    pub indirect: f64,
    pub protest: f64,
    pub disruptive_protest: f64,
}

impl Default for SelectionRates {
    fn default() -> Self {
        SelectionRates {
            direct: 0.5,
            indirect: 0.8,
            protest: 0.6,
            disruptive_protest: 0.4,
        }
    }
}

impl Validate for SelectionRates {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.non_negative(&join(path, "direct"), self.direct);
        v.non_negative(&join(path, "indirect"), self.indirect);
        v.non_negative(&join(path, "protest"), self.protest);
        v.non_negative(&join(path, "disruptive_protest"), self.disruptive_protest);
    }
}

/// `gamma` scales intensity into pressure; `diminishing_rate` sets how fast
/// returns fall with accumulated pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PressureParams {
    pub gamma: f64,
    pub diminishing_rate: f64,
}

impl Default for PressureParams {
    fn default() -> Self {
        PressureParams {
            gamma: 0.1,
            diminishing_rate: 0.05,
        }
    }
}

impl Validate for PressureParams {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.positive(&join(path, "gamma"), self.gamma);
        v.positive(&join(path, "diminishing_rate"), self.diminishing_rate);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposalStance {
    Oppose,
    Support,
}

impl ProposalStance {
    pub fn sign(self) -> f64 {
        match self {
            ProposalStance::Oppose => -1.0,
            ProposalStance::Support => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngoConfig {
    /// Whether an eNGO exists at initialisation.
    pub preexisting: bool,
    /// Members of a pre-existing eNGO, chosen as a network-clustered group.
    pub initial_members: usize,
    /// Willing founders needed before citizens form an eNGO.
    pub founding_threshold: usize,
    pub attributes: EngoAttributes,
    pub eligibility: EligibilityThresholds,
    pub selection: SelectionRates,
    pub pressure: PressureParams,
    /// Years of experience at which normalised experience reaches 1.
    pub experience_cap: f64,
    /// Conventional coverage probability is `min(1, coverage_scale * R)`.
    pub coverage_scale: f64,
    pub stance_on_proposal: ProposalStance,
}

impl Default for EngoConfig {
    fn default() -> Self {
        EngoConfig {
            preexisting: false,
            initial_members: 0,
            founding_threshold: 20,
            attributes: EngoAttributes::default(),
            eligibility: EligibilityThresholds::default(),
            selection: SelectionRates::default(),
            pressure: PressureParams::default(),
            experience_cap: 20.0,
            coverage_scale: 1.0,
            stance_on_proposal: ProposalStance::Oppose,
        }
    }
}

impl Validate for EngoConfig {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.ensure(self.founding_threshold >= 1, &join(path, "founding_threshold"), || {
            "founding threshold must be at least 1".into()
        });
        v.ensure(
            self.preexisting || self.initial_members == 0,
            &join(path, "initial_members"),
            || "initial members need a pre-existing eNGO".into(),
        );
        self.attributes.validate_into(&join(path, "attributes"), v);
        self.eligibility.validate_into(&join(path, "eligibility"), v);
        self.selection.validate_into(&join(path, "selection"), v);
        self.pressure.validate_into(&join(path, "pressure"), v);
        v.positive(&join(path, "experience_cap"), self.experience_cap);
        v.non_negative(&join(path, "coverage_scale"), self.coverage_scale);
    }
}

/// A logged eNGO action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionEvent {
    pub action: ActionType,
    pub timestep: u32,
    /// Present exactly for pressure-generating actions.
    pub intensity: Option<f64>,
    /// Share of the whole population that took part; protest kinds only.
    pub protest_size: Option<f64>,
    /// Dissemination channels; indirect actions only.
    pub channels: Option<Channels>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Engo {
    pub attributes: EngoAttributes,
    pub members: BTreeSet<u32>,
    pub cumulative_pressure: f64,
    pub formed_at: Option<u32>,
    pub actions: Vec<ActionEvent>,
}

impl Engo {
    pub fn new(attributes: EngoAttributes, members: BTreeSet<u32>, formed_at: Option<u32>) -> Self {
        Engo {
            attributes,
            members,
            cumulative_pressure: 0.0,
            formed_at,
            actions: Vec::new(),
        }
    }
}

/// Create an eNGO once enough citizens are willing to found one.
pub fn maybe_form_engo(
    existing: Option<&Engo>,
    willing_founders: &BTreeSet<u32>,
    founding_threshold: usize,
    attributes: &EngoAttributes,
    timestep: u32,
) -> Result<Option<Engo>> {
    if existing.is_some() {
        return Err(Error::contract("an eNGO already exists"));
    }
    if willing_founders.len() < founding_threshold {
        return Ok(None);
    }
    Ok(Some(Engo::new(*attributes, willing_founders.clone(), Some(timestep))))
}

pub fn eligible_actions(attrs: &EngoAttributes, th: &EligibilityThresholds) -> BTreeSet<ActionType> {
    let mut set = BTreeSet::from([ActionType::Indirect]);
    if attrs.resources >= th.direct_resources && attrs.cultural_trust >= th.direct_trust {
        set.insert(ActionType::Direct);
    }
    if attrs.resources >= th.protest_resources {
        set.insert(ActionType::Protest);
    }
    if attrs.strategic_orientation >= th.disruptive_orientation {
        set.insert(ActionType::DisruptiveProtest);
    }
    set
}

pub fn selection_probability(action: ActionType, attrs: &EngoAttributes, rates: &SelectionRates) -> f64 {
    let p = match action {
        ActionType::Direct => rates.direct * attrs.cultural_trust,
        ActionType::Indirect => rates.indirect * attrs.resources,
        ActionType::Protest => rates.protest * attrs.strategic_orientation,
        ActionType::DisruptiveProtest => rates.disruptive_protest * attrs.strategic_orientation,
    };
    p.clamp(0.0, 1.0)
}

/// Each eligible action fires independently. Draws are made in
/// [`ActionType`] order, one per eligible action.
pub fn select_actions<R: Rng + ?Sized>(
    eligible: &BTreeSet<ActionType>,
    attrs: &EngoAttributes,
    rates: &SelectionRates,
    rng: &mut R,
) -> BTreeSet<ActionType> {
    eligible
        .iter()
        .copied()
        .filter(|&a| rng.random_bool(selection_probability(a, attrs, rates)))
        .collect()
}

pub fn normalised_experience(years: f64, cap: f64) -> f64 {
    (years / cap).min(1.0)
}

/// Direct: `10 R + 8 E + 5 T`. Protest kinds: `5 R + 5 E + 10 S_p`, with `E`
/// the normalised experience and `S_p` the protest size.
pub fn action_intensity(
    action: ActionType,
    attrs: &EngoAttributes,
    experience_cap: f64,
    protest_size: f64,
) -> Result<f64> {
    let e = normalised_experience(attrs.experience_years, experience_cap);
    match action {
        ActionType::Direct => Ok(10.0 * attrs.resources + 8.0 * e + 5.0 * attrs.cultural_trust),
        ActionType::Protest | ActionType::DisruptiveProtest => {
            if !(0.0..=1.0).contains(&protest_size) {
                return Err(Error::contract(format!(
                    "protest size must lie in [0, 1], got {protest_size}"
                )));
            }
            Ok(5.0 * attrs.resources + 5.0 * e + 10.0 * protest_size)
        }
        ActionType::Indirect => Err(Error::contract(
            "indirect actions emit information signals, not intensity",
        )),
    }
}

/// `C + gamma * I * exp(-delta_p * C)`.
pub fn accumulate_pressure(pressure: f64, intensity: f64, params: &PressureParams) -> Result<f64> {
    if !(pressure >= 0.0 && intensity >= 0.0) {
        return Err(Error::contract(format!(
            "pressure and intensity must be non-negative, got C = {pressure}, I = {intensity}"
        )));
    }
    Ok(pressure + params.gamma * intensity * (-params.diminishing_rate * pressure).exp())
}

/// Channels for an eNGO communication: social media always, conventional
/// media when resources clear the threshold and the coverage draw succeeds.
pub fn engo_channels<R: Rng + ?Sized>(
    attrs: &EngoAttributes,
    th: &EligibilityThresholds,
    coverage_scale: f64,
    rng: &mut R,
) -> Channels {
    let institutional = attrs.resources >= th.conventional_resources
        && rng.random_bool((coverage_scale * attrs.resources).clamp(0.0, 1.0));
    Channels {
        institutional,
        social: true,
    }
}

pub fn emit_indirect_signal<R: Rng + ?Sized>(
    attrs: &EngoAttributes,
    th: &EligibilityThresholds,
    coverage_scale: f64,
    timestep: u32,
    rng: &mut R,
) -> NewsItem {
    NewsItem {
        frame: Frame::ProEnvironment,
        channels: engo_channels(attrs, th, coverage_scale, rng),
        origin: Origin::Engo,
        timestep,
    }
}
