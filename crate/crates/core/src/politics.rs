//! Two-stage political aggregation and the final majority vote.
//!
//! Stage 1 turns six signed inputs into accept and reject components,
//! weights them per politician and compares the two utilities against a
//! decisiveness margin. Stage 2 lets each politician drift toward the
//! decisions of similar peers. The plurality of the adjusted decisions is the
//! collective outcome.

use std::collections::BTreeMap;
use std::ops::{Index, IndexMut};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{SeedTree, Stream};
use crate::validate::{join, Validate, Validator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Input {
    Institutional,
    Societal,
    Media,
    Pressure,
    Personal,
    Party,
}

impl Input {
    pub const ALL: [Input; 6] = [
        Input::Institutional,
        Input::Societal,
        Input::Media,
        Input::Pressure,
        Input::Personal,
        Input::Party,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Input::Institutional => "institutional",
            Input::Societal => "societal",
            Input::Media => "media",
            Input::Pressure => "pressure",
            Input::Personal => "personal",
            Input::Party => "party",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerInput<T> {
    pub institutional: T,
    pub societal: T,
    pub media: T,
    pub pressure: T,
    pub personal: T,
    pub party: T,
}

impl<T> PerInput<T> {
    pub fn from_fn(mut f: impl FnMut(Input) -> T) -> Self {
        PerInput {
            institutional: f(Input::Institutional),
            societal: f(Input::Societal),
            media: f(Input::Media),
            pressure: f(Input::Pressure),
            personal: f(Input::Personal),
            party: f(Input::Party),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Input, &T)> {
        Input::ALL.into_iter().map(move |i| (i, &self[i]))
    }
}

impl<T> Index<Input> for PerInput<T> {
    type Output = T;

    fn index(&self, i: Input) -> &T {
        match i {
            Input::Institutional => &self.institutional,
            Input::Societal => &self.societal,
            Input::Media => &self.media,
            Input::Pressure => &self.pressure,
            Input::Personal => &self.personal,
            Input::Party => &self.party,
        }
    }
}

impl<T> IndexMut<Input> for PerInput<T> {
    fn index_mut(&mut self, i: Input) -> &mut T {
        match i {
            Input::Institutional => &mut self.institutional,
            Input::Societal => &mut self.societal,
            Input::Media => &mut self.media,
            Input::Pressure => &mut self.pressure,
            Input::Personal => &mut self.personal,
            Input::Party => &mut self.party,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategicType {
    VoteSeeking,
    PolicySeeking,
    OfficeSeeking,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Politician {
    pub id: String,
    pub party: String,
    /// In [-1, 1]; +1 favours accepting the proposal.
    pub stance: f64,
    pub strategic_type: StrategicType,
    #[serde(default = "equal_weights")]
    pub base_weights: PerInput<f64>,
}

fn equal_weights() -> PerInput<f64> {
    PerInput::from_fn(|_| 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Party {
    pub id: String,
    /// Defaults to the mean stance of the party's politicians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stance: Option<f64>,
}

/// Explicit inter-party similarity, overriding the stance-distance default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartySimilarity {
    pub a: String,
    pub b: String,
    pub similarity: f64,
}

/// Resolved party stances and pairwise similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct PartyTable {
    stances: BTreeMap<String, f64>,
    overrides: BTreeMap<(String, String), f64>,
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl PartyTable {
    pub fn new(parties: &[Party], politicians: &[Politician], overrides: &[PartySimilarity]) -> Result<Self> {
        let mut stances = BTreeMap::new();
        for p in parties {
            let stance = match p.stance {
                Some(s) => s,
                None => {
                    let members: Vec<f64> = politicians
                        .iter()
                        .filter(|x| x.party == p.id)
                        .map(|x| x.stance)
                        .collect();
                    if members.is_empty() {
                        return Err(Error::config(
                            format!("politics.parties.{}", p.id),
                            "party without politicians needs an explicit stance",
                        ));
                    }
                    members.iter().sum::<f64>() / members.len() as f64
                }
            };
            stances.insert(p.id.clone(), stance);
        }
        let mut table = PartyTable {
            stances,
            overrides: BTreeMap::new(),
        };
        for o in overrides {
            table.stance(&o.a)?;
            table.stance(&o.b)?;
            table.overrides.insert(ordered_pair(&o.a, &o.b), o.similarity);
        }
        Ok(table)
    }

    pub fn stance(&self, party: &str) -> Result<f64> {
        self.stances
            .get(party)
            .copied()
            .ok_or_else(|| Error::config("politics.parties", format!("unknown party {party:?}")))
    }

    /// 1 within a party; otherwise the configured index, defaulting to
    /// `1 - |PP_a - PP_b| / 2`.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        let (sa, sb) = (self.stance(a)?, self.stance(b)?);
        if a == b {
            return Ok(1.0);
        }
        Ok(match self.overrides.get(&ordered_pair(a, b)) {
            Some(&s) => s,
            None => 1.0 - (sa - sb).abs() / 2.0,
        })
    }
}

pub fn similarity(a: &Politician, b: &Politician, table: &PartyTable) -> Result<f64> {
    table.similarity(&a.party, &b.party)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposalFrame {
    Development,
    Conservation,
}

/// The land-use proposal under decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProposalSpec {
    pub frame: ProposalFrame,
    /// Institutional assessment in [0, 1]; 0.5 is neutral.
    pub institutional_assessment: f64,
    /// Set when the assessment scores the opposite frame, flipping its sign.
    pub assessment_inverted: bool,
}

impl Default for ProposalSpec {
    fn default() -> Self {
        ProposalSpec {
            frame: ProposalFrame::Development,
            institutional_assessment: 0.6,
            assessment_inverted: false,
        }
    }
}

impl Validate for ProposalSpec {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.unit(
            &join(path, "institutional_assessment"),
            self.institutional_assessment,
        );
    }
}

/// End-of-horizon inputs shared by every politician.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalBundle {
    pub institutional_assessment: f64,
    /// Citizens for / against the proposal.
    pub n_support: f64,
    pub n_oppose: f64,
    /// Media items by frame.
    pub n_pro_environment: f64,
    pub n_pro_economic: f64,
    /// Cumulative eNGO pressure.
    pub pressure: f64,
    /// +1 if the eNGO backs the proposal, -1 if it opposes it.
    pub pressure_direction: f64,
    pub salience_society: f64,
    pub salience_media: f64,
}

impl SignalBundle {
    pub fn check(&self) -> Result<()> {
        let mut v = Validator::new();
        v.unit("institutional_assessment", self.institutional_assessment);
        for (name, x) in [
            ("n_support", self.n_support),
            ("n_oppose", self.n_oppose),
            ("n_pro_environment", self.n_pro_environment),
            ("n_pro_economic", self.n_pro_economic),
            ("pressure", self.pressure),
        ] {
            v.non_negative(name, x);
        }
        v.unit("salience_society", self.salience_society);
        v.unit("salience_media", self.salience_media);
        v.ensure(
            self.pressure_direction == 1.0 || self.pressure_direction == -1.0,
            "pressure_direction",
            || "must be +1 or -1".into(),
        );
        v.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformParams {
    /// Additive smoothing in the log-ratio transforms.
    pub epsilon: f64,
    /// Pressure is squashed as `tanh(C / pressure_scale)`.
    pub pressure_scale: f64,
}

impl Default for TransformParams {
    fn default() -> Self {
        TransformParams {
            epsilon: 1.0,
            pressure_scale: 10.0,
        }
    }
}

/// Accept and reject parts of one signed input. At most one is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Directional {
    pub accept: f64,
    pub reject: f64,
}

impl Directional {
    pub fn split(x: f64) -> Self {
        Directional {
            accept: x.max(0.0),
            reject: (-x).max(0.0),
        }
    }

    pub fn signed(&self) -> f64 {
        self.accept - self.reject
    }
}

pub type DirectionalComponents = PerInput<Directional>;

/// `tanh(ln((a + eps) / (b + eps)))`, odd under swapping `a` and `b`.
pub fn log_ratio_tanh(a: f64, b: f64, epsilon: f64) -> f64 {
    ((a + epsilon).ln() - (b + epsilon).ln()).tanh()
}

/// Signed scalar per input, oriented so that positive favours acceptance.
pub fn signed_inputs(
    bundle: &SignalBundle,
    personal_stance: f64,
    party_stance: f64,
    proposal: &ProposalSpec,
    params: &TransformParams,
) -> PerInput<f64> {
    let mut u = 2.0 * bundle.institutional_assessment - 1.0;
    if proposal.assessment_inverted {
        u = -u;
    }
    let (pro, anti) = match proposal.frame {
        ProposalFrame::Development => (bundle.n_pro_economic, bundle.n_pro_environment),
        ProposalFrame::Conservation => (bundle.n_pro_environment, bundle.n_pro_economic),
    };
    PerInput {
        institutional: u,
        societal: log_ratio_tanh(bundle.n_support, bundle.n_oppose, params.epsilon),
        media: log_ratio_tanh(pro, anti, params.epsilon),
        pressure: bundle.pressure_direction * (bundle.pressure / params.pressure_scale).tanh(),
        personal: personal_stance,
        party: party_stance,
    }
}

pub fn transform_signals(
    bundle: &SignalBundle,
    personal_stance: f64,
    party_stance: f64,
    proposal: &ProposalSpec,
    params: &TransformParams,
) -> DirectionalComponents {
    let x = signed_inputs(bundle, personal_stance, party_stance, proposal, params);
    PerInput::from_fn(|i| Directional::split(x[i]))
}

/// Per-type multipliers on the six input weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrategicMultipliers {
    pub vote_seeking: PerInput<f64>,
    pub policy_seeking: PerInput<f64>,
    pub office_seeking: PerInput<f64>,
}

impl StrategicMultipliers {
    pub fn for_type(&self, t: StrategicType) -> &PerInput<f64> {
        match t {
            StrategicType::VoteSeeking => &self.vote_seeking,
            StrategicType::PolicySeeking => &self.policy_seeking,
            StrategicType::OfficeSeeking => &self.office_seeking,
        }
    }

    pub fn neutral() -> Self {
        let one = PerInput::from_fn(|_| 1.0);
        StrategicMultipliers {
            vote_seeking: one,
            policy_seeking: one,
            office_seeking: one,
        }
    }
}

impl Default for StrategicMultipliers {
    fn default() -> Self {
        let boost = |a: Input, b: Input| PerInput::from_fn(|i| if i == a || i == b { 1.5 } else { 1.0 });
        StrategicMultipliers {
            vote_seeking: boost(Input::Societal, Input::Media),
            policy_seeking: boost(Input::Personal, Input::Party),
            office_seeking: boost(Input::Party, Input::Institutional),
        }
    }
}

/// Salience-scale the societal and media weights, apply the strategic
/// multipliers, and normalise to sum one.
pub fn modulate_weights(
    base: &PerInput<f64>,
    salience_society: f64,
    salience_media: f64,
    strategic_type: StrategicType,
    multipliers: &StrategicMultipliers,
) -> Result<PerInput<f64>> {
    let mult = multipliers.for_type(strategic_type);
    let raw = PerInput::from_fn(|i| {
        let salience = match i {
            Input::Societal => 1.0 + salience_society,
            Input::Media => 1.0 + salience_media,
            _ => 1.0,
        };
        base[i] * salience * mult[i]
    });
    let total: f64 = raw.iter().map(|(_, &w)| w).sum();
    if !(total > 0.0 && total.is_finite()) || raw.iter().any(|(_, &w)| w < 0.0) {
        return Err(Error::config(
            "politics.politicians.base_weights",
            format!("modulated weights must be non-negative with a positive sum, got total {total}"),
        ));
    }
    Ok(PerInput::from_fn(|i| raw[i] / total))
}

pub fn compute_utilities(weights: &PerInput<f64>, components: &DirectionalComponents) -> (f64, f64) {
    Input::ALL.iter().fold((0.0, 0.0), |(a, r), &i| {
        (
            a + weights[i] * components[i].accept,
            r + weights[i] * components[i].reject,
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    Reject,
    Revise,
}

impl Decision {
    pub const ALL: [Decision; 3] = [Decision::Accept, Decision::Reject, Decision::Revise];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Revise => "revise",
        }
    }
}

/// Commit only when one utility beats the other by more than `delta`.
pub fn preliminary_decision(u_accept: f64, u_reject: f64, delta: f64) -> Decision {
    if u_accept > u_reject + delta {
        Decision::Accept
    } else if u_reject > u_accept + delta {
        Decision::Reject
    } else {
        Decision::Revise
    }
}

/// Similarity-weighted count of peers `j != i` holding each decision,
/// indexed by [`Decision::index`].
pub fn peer_support(
    i: usize,
    politicians: &[Politician],
    preliminary: &[Decision],
    table: &PartyTable,
) -> Result<[f64; 3]> {
    let mut support = [0.0; 3];
    for (j, (pj, dj)) in politicians.iter().zip(preliminary).enumerate() {
        if j != i {
            support[dj.index()] += similarity(&politicians[i], pj, table)?;
        }
    }
    Ok(support)
}

/// Mixture of keeping one's own decision (weight `inertia`) and following
/// normalised peer support. `None` when no peer support exists.
pub fn switch_probabilities(own: Decision, support: &[f64; 3], inertia: f64) -> Option<[f64; 3]> {
    let total: f64 = support.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut q = [0.0; 3];
    for d in Decision::ALL {
        let keep = if d == own { inertia } else { 0.0 };
        q[d.index()] = keep + (1.0 - inertia) * support[d.index()] / total;
    }
    Some(q)
}

fn draw_decision<R: Rng + ?Sized>(q: &[f64; 3], rng: &mut R) -> Decision {
    let total: f64 = q.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = Decision::Revise;
    for d in Decision::ALL {
        if q[d.index()] > 0.0 {
            acc += q[d.index()];
            last = d;
            if u < acc {
                return d;
            }
        }
    }
    last
}

/// One synchronous peer-adjustment round over the frozen preliminary vector.
/// Politician `i` draws from the `(PeerAdjust, i)` sub-stream.
pub fn peer_adjust(
    politicians: &[Politician],
    preliminary: &[Decision],
    table: &PartyTable,
    inertia: f64,
    seeds: &SeedTree,
) -> Result<Vec<Decision>> {
    if politicians.len() != preliminary.len() {
        return Err(Error::contract("one preliminary decision per politician required"));
    }
    (0..politicians.len())
        .map(|i| {
            let support = peer_support(i, politicians, preliminary, table)?;
            Ok(match switch_probabilities(preliminary[i], &support, inertia) {
                None => preliminary[i],
                Some(q) => draw_decision(&q, &mut seeds.stream(Stream::PeerAdjust, i as u64, 0)),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub accept: usize,
    pub reject: usize,
    pub revise: usize,
}

impl Tally {
    pub fn of(decisions: &[Decision]) -> Self {
        let mut t = Tally::default();
        for d in decisions {
            match d {
                Decision::Accept => t.accept += 1,
                Decision::Reject => t.reject += 1,
                Decision::Revise => t.revise += 1,
            }
        }
        t
    }

    /// Plurality winner; any tie for first place is Revise.
    pub fn winner(&self) -> Decision {
        let counts = [
            (Decision::Accept, self.accept),
            (Decision::Reject, self.reject),
            (Decision::Revise, self.revise),
        ];
        let top = counts.iter().map(|c| c.1).max().unwrap_or(0);
        let leaders: Vec<_> = counts.iter().filter(|c| c.1 == top).collect();
        if leaders.len() == 1 {
            leaders[0].0
        } else {
            Decision::Revise
        }
    }
}

pub fn majority_vote(decisions: &[Decision]) -> Result<Decision> {
    if decisions.is_empty() {
        return Err(Error::contract("majority vote over an empty council"));
    }
    Ok(Tally::of(decisions).winner())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoliticsConfig {
    pub decisiveness: f64,
    /// Weight on one's own preliminary decision in the peer-adjustment blend.
    pub inertia: f64,
    pub transform: TransformParams,
    pub multipliers: StrategicMultipliers,
    pub parties: Vec<Party>,
    pub similarities: Vec<PartySimilarity>,
    pub politicians: Vec<Politician>,
}

impl Default for PoliticsConfig {
    fn default() -> Self {
        let pol = |id: &str, party: &str, stance: f64, t: StrategicType| Politician {
            id: id.into(),
            party: party.into(),
            stance,
            strategic_type: t,
            base_weights: equal_weights(),
        };
        use StrategicType::*;
        PoliticsConfig {
            decisiveness: 0.05,
            inertia: 0.5,
            transform: TransformParams::default(),
            multipliers: StrategicMultipliers::default(),
            parties: ["green", "centre", "growth"]
                .into_iter()
                .map(|id| Party {
                    id: id.into(),
                    stance: None,
                })
                .collect(),
            similarities: Vec::new(),
            politicians: vec![
                pol("g1", "green", -0.8, PolicySeeking),
                pol("g2", "green", -0.6, VoteSeeking),
                pol("c1", "centre", -0.1, OfficeSeeking),
                pol("c2", "centre", 0.1, VoteSeeking),
                pol("c3", "centre", 0.2, OfficeSeeking),
                pol("c4", "centre", 0.0, PolicySeeking),
                pol("r1", "growth", 0.7, PolicySeeking),
                pol("r2", "growth", 0.5, VoteSeeking),
                pol("r3", "growth", 0.6, OfficeSeeking),
            ],
        }
    }
}

impl Validate for PoliticsConfig {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.non_negative(&join(path, "decisiveness"), self.decisiveness);
        v.unit(&join(path, "inertia"), self.inertia);
        v.positive(&join(path, "transform.epsilon"), self.transform.epsilon);
        v.positive(&join(path, "transform.pressure_scale"), self.transform.pressure_scale);
        for (name, m) in [
            ("vote_seeking", &self.multipliers.vote_seeking),
            ("policy_seeking", &self.multipliers.policy_seeking),
            ("office_seeking", &self.multipliers.office_seeking),
        ] {
            for (i, &x) in m.iter() {
                v.non_negative(&format!("{path}.multipliers.{name}.{}", i.name()), x);
            }
        }
        let mut party_ids = std::collections::BTreeSet::new();
        for (k, p) in self.parties.iter().enumerate() {
            let pp = format!("{path}.parties[{k}]");
            v.ensure(party_ids.insert(p.id.as_str()), &pp, || format!("duplicate party {:?}", p.id));
            if let Some(s) = p.stance {
                v.range(&join(&pp, "stance"), s, -1.0, 1.0);
            } else {
                v.ensure(
                    self.politicians.iter().any(|x| x.party == p.id),
                    &join(&pp, "stance"),
                    || "party without politicians needs an explicit stance".into(),
                );
            }
        }
        for (k, s) in self.similarities.iter().enumerate() {
            let sp = format!("{path}.similarities[{k}]");
            v.unit(&join(&sp, "similarity"), s.similarity);
            for id in [&s.a, &s.b] {
                v.ensure(party_ids.contains(id.as_str()), &sp, || format!("unknown party {id:?}"));
            }
        }
        v.ensure(!self.politicians.is_empty(), &join(path, "politicians"), || {
            "at least one politician is required".into()
        });
        let mut ids = std::collections::BTreeSet::new();
        for (k, p) in self.politicians.iter().enumerate() {
            let pp = format!("{path}.politicians[{k}]");
            v.ensure(ids.insert(p.id.as_str()), &join(&pp, "id"), || format!("duplicate id {:?}", p.id));
            v.ensure(party_ids.contains(p.party.as_str()), &join(&pp, "party"), || {
                format!("unknown party {:?}", p.party)
            });
            v.range(&join(&pp, "stance"), p.stance, -1.0, 1.0);
            for (i, &w) in p.base_weights.iter() {
                v.non_negative(&format!("{pp}.base_weights.{}", i.name()), w);
            }
            let m = self.multipliers.for_type(p.strategic_type);
            let total: f64 = p.base_weights.iter().map(|(i, &w)| w * m[i]).sum();
            v.ensure(total > 0.0 || !total.is_finite(), &join(&pp, "base_weights"), || {
                "weights vanish after strategic modulation".into()
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoliticianOutcome {
    pub id: String,
    pub party: String,
    pub weights: PerInput<f64>,
    pub components: DirectionalComponents,
    pub utility_accept: f64,
    pub utility_reject: f64,
    pub preliminary: Decision,
    #[serde(rename = "final")]
    pub final_decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoliticalOutcome {
    pub decision: Decision,
    pub tally: Tally,
    pub politicians: Vec<PoliticianOutcome>,
}

/// Full pipeline: transform, modulate, utilities, threshold, peer
/// adjustment, majority vote.
pub fn evaluate(
    config: &PoliticsConfig,
    bundle: &SignalBundle,
    proposal: &ProposalSpec,
    seeds: &SeedTree,
) -> Result<PoliticalOutcome> {
    bundle.check()?;
    let table = PartyTable::new(&config.parties, &config.politicians, &config.similarities)?;
    let mut stage1 = Vec::with_capacity(config.politicians.len());
    for p in &config.politicians {
        let components = transform_signals(bundle, p.stance, table.stance(&p.party)?, proposal, &config.transform);
        let weights = modulate_weights(
            &p.base_weights,
            bundle.salience_society,
            bundle.salience_media,
            p.strategic_type,
            &config.multipliers,
        )?;
        let (ua, ur) = compute_utilities(&weights, &components);
        stage1.push((weights, components, ua, ur, preliminary_decision(ua, ur, config.decisiveness)));
    }
    let preliminary: Vec<Decision> = stage1.iter().map(|s| s.4).collect();
    let adjusted = peer_adjust(&config.politicians, &preliminary, &table, config.inertia, seeds)?;
    let decision = majority_vote(&adjusted)?;
    let politicians = config
        .politicians
        .iter()
        .zip(stage1)
        .zip(&adjusted)
        .map(|((p, (weights, components, ua, ur, pre)), &fin)| PoliticianOutcome {
            id: p.id.clone(),
            party: p.party.clone(),
            weights,
            components,
            utility_accept: ua,
            utility_reject: ur,
            preliminary: pre,
            final_decision: fin,
        })
        .collect();
    Ok(PoliticalOutcome {
        decision,
        tally: Tally::of(&adjusted),
        politicians,
    })
}
