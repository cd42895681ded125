//! Discrete-time scheduler.
//!
//! Each step runs four phases separated by barriers: media, membership,
//! eNGO actions, pressure. Peer shares always read the state left by the
//! previous barrier, and every citizen draws from its own sub-stream, so a
//! run is a pure function of `(config, seed)` whatever the thread count.

mod config;
mod summary;

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{EngineSection, SimulationConfig};
pub use summary::{write_trace_csv, NewsCounts, RunSummary, StepRecord, TRACE_COLUMNS};

use crate::behaviour::{decide, DecisionContext, DecisionKind};
use crate::engo::{
    accumulate_pressure, action_intensity, eligible_actions, emit_indirect_signal, engo_channels,
    maybe_form_engo, select_actions, ActionEvent, ActionType, Engo,
};
use crate::error::{Error, Result};
use crate::influence::{diffuse_awareness, ProtestEvent};
use crate::media::{apply_framing, expose, expose_channels, generate_news, Frame, NewsItem};
use crate::politics::{evaluate, PoliticalOutcome, ProposalFrame, ProposalSpec, SignalBundle};
use crate::population::{
    build_homophily_network, generate_population, Citizen, Motive, MotiveVector, Participation,
    PerMotive, SocialNetwork,
};
use crate::rng::{SeedTree, Stream};

/// Framing applied to a set of citizens within one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureEvent {
    pub item: NewsItem,
    pub exposed: Vec<u32>,
}

/// Everything that happened in one step, in application order. Replaying
/// these events over the initial state reproduces every counter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepEvents {
    pub timestep: u32,
    /// Media item first, then any eNGO signal.
    pub exposures: Vec<ExposureEvent>,
    /// Citizens willing to found an eNGO while none existed.
    pub founding_willing: Vec<u32>,
    pub formed: bool,
    /// New members this step, founders included.
    pub joined: Vec<u32>,
    pub actions: Vec<ActionEvent>,
    pub protest_participants: Vec<u32>,
    pub disruptive_participants: Vec<u32>,
}

pub struct Simulation {
    config: SimulationConfig,
    seeds: SeedTree,
    timestep: u32,
    citizens: Vec<Citizen>,
    network: SocialNetwork,
    engo: Option<Engo>,
    news: Vec<NewsItem>,
    signals: Vec<NewsItem>,
    records: Vec<StepRecord>,
    events: Vec<StepEvents>,
}

impl Simulation {
    pub fn new(config: SimulationConfig, seed: u64) -> Result<Self> {
        config.check()?;
        let seeds = SeedTree::new(seed);
        let mut citizens = generate_population(&config.population, &seeds)?;
        let network = build_homophily_network(&citizens, &config.network, &seeds)?;
        let engo = if config.engo.preexisting {
            let members = clustered_group(&network, config.engo.initial_members, &seeds)?;
            for &id in &members {
                citizens[id as usize].state.engo_member = true;
            }
            Some(Engo::new(config.engo.attributes, members, None))
        } else {
            None
        };
        Ok(Simulation {
            config,
            seeds,
            timestep: 0,
            citizens,
            network,
            engo,
            news: Vec::new(),
            signals: Vec::new(),
            records: Vec::new(),
            events: Vec::new(),
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.seeds.master()
    }

    pub fn timestep(&self) -> u32 {
        self.timestep
    }

    pub fn horizon(&self) -> u32 {
        self.config.engine.horizon
    }

    pub fn is_finished(&self) -> bool {
        self.timestep >= self.horizon()
    }

    pub fn citizens(&self) -> &[Citizen] {
        &self.citizens
    }

    pub fn network(&self) -> &SocialNetwork {
        &self.network
    }

    pub fn engo(&self) -> Option<&Engo> {
        self.engo.as_ref()
    }

    /// Media-agent items, in publication order.
    pub fn news(&self) -> &[NewsItem] {
        &self.news
    }

    /// eNGO indirect signals, in emission order.
    pub fn signals(&self) -> &[NewsItem] {
        &self.signals
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn events(&self) -> &[StepEvents] {
        &self.events
    }

    pub fn mean_weights(&self) -> MotiveVector {
        mean_weights(&self.citizens)
    }

    /// Citizens who are members or have ever joined a protest.
    pub fn mobilised(&self) -> usize {
        self.citizens.iter().filter(|c| is_mobilised(c)).count()
    }

    /// Advance one month.
    pub fn step(&mut self) -> Result<&StepRecord> {
        if self.is_finished() {
            return Err(Error::contract(format!(
                "cannot step past the horizon of {}",
                self.horizon()
            )));
        }
        let t = self.timestep + 1;
        let mut ev = StepEvents {
            timestep: t,
            ..StepEvents::default()
        };
        for c in &mut self.citizens {
            c.state.aware_of_action = false;
            c.state.aware_of_disruptive = false;
        }

        let news_item = self.media_phase(t, &mut ev)?;
        self.membership_phase(t, &mut ev)?;
        let intensity = self.action_phase(t, &mut ev)?;
        if let Some(engo) = &mut self.engo {
            engo.cumulative_pressure =
                accumulate_pressure(engo.cumulative_pressure, intensity, &self.config.engo.pressure)?;
        }

        let n = self.citizens.len();
        let record = StepRecord {
            timestep: t,
            join_count: ev.joined.len(),
            protest_count: ev.protest_participants.len(),
            disruptive_count: ev.disruptive_participants.len(),
            member_count: self.engo.as_ref().map_or(0, |e| e.members.len()),
            cumulative_pressure: self.engo.as_ref().map_or(0.0, |e| e.cumulative_pressure),
            news_frame: news_item.map(|i| i.frame),
            mean_weights: self.mean_weights(),
            founding_willing: ev.founding_willing.len(),
            engo_exists: self.engo.is_some(),
            news_channels: news_item.map(|i| i.channels),
            news_exposed: news_item.map_or(0, |_| ev.exposures[0].exposed.len()),
            signal_exposed: ev
                .exposures
                .iter()
                .filter(|e| e.item.origin == crate::media::Origin::Engo)
                .map(|e| e.exposed.len())
                .sum(),
            actions: ev.actions.iter().map(|a| a.action).collect(),
            step_intensity: intensity,
            participation_rate: self.mobilised() as f64 / n as f64,
        };
        if let Some(engo) = &mut self.engo {
            engo.actions.extend(ev.actions.iter().copied());
        }
        self.events.push(ev);
        self.records.push(record);
        self.timestep = t;
        Ok(self.records.last().expect("just pushed"))
    }

    fn media_phase(&mut self, t: u32, ev: &mut StepEvents) -> Result<Option<NewsItem>> {
        let mut rng = self.seeds.stream(Stream::MediaNews, 0, t as u64);
        let Some(item) = generate_news(&self.config.media, t, &mut rng) else {
            return Ok(None);
        };
        self.broadcast(item, Stream::MediaExposure, ev)?;
        self.news.push(item);
        Ok(Some(item))
    }

    fn broadcast(&mut self, item: NewsItem, stream: Stream, ev: &mut StepEvents) -> Result<()> {
        let mask = expose(&self.citizens, &item, &self.seeds, stream);
        let params = self.config.influence;
        self.citizens
            .par_iter_mut()
            .zip(&mask)
            .filter(|(_, &hit)| hit)
            .try_for_each(|(c, _)| -> Result<()> {
                c.motive_weights = apply_framing(&c.motive_weights, item.frame, &params)?;
                Ok(())
            })?;
        ev.exposures.push(ExposureEvent {
            item,
            exposed: ids_where(&mask),
        });
        Ok(())
    }

    /// Act decisions for every citizen passing `eligible`, evaluated in
    /// parallel against the `active` snapshot.
    fn decide_all(
        &self,
        kind: DecisionKind,
        stream: Stream,
        t: u32,
        active: &[bool],
        engo_exists: bool,
        eligible: impl Fn(&Citizen) -> bool + Sync,
    ) -> Result<Vec<u32>> {
        let decided: Vec<Option<u32>> = self
            .citizens
            .par_iter()
            .map(|c| -> Result<Option<u32>> {
                if !eligible(c) {
                    return Ok(None);
                }
                let ctx = DecisionContext {
                    peer_share: crate::influence::peer_share(&self.network, active, c.id)?,
                    engo_exists,
                    aware: match kind {
                        DecisionKind::JoinEngo => true,
                        DecisionKind::ActionProtest => c.state.aware_of_action,
                        DecisionKind::DisruptiveProtest => c.state.aware_of_disruptive,
                    },
                    moa: c.moa,
                    activist_alignment: c.activist_alignment,
                };
                let mut rng = self.seeds.stream(stream, c.id as u64, t as u64);
                let out = decide(&c.motive_weights, kind, &ctx, &self.config.behaviour, &mut rng)?;
                Ok(out.acted().then_some(c.id))
            })
            .collect::<Result<_>>()?;
        Ok(decided.into_iter().flatten().collect())
    }

    fn membership_phase(&mut self, t: u32, ev: &mut StepEvents) -> Result<()> {
        let members: Vec<bool> = self.citizens.iter().map(|c| c.state.engo_member).collect();
        if self.engo.is_some() {
            let joined = self.decide_all(DecisionKind::JoinEngo, Stream::Join, t, &members, true, |c| {
                !c.state.engo_member
            })?;
            let engo = self.engo.as_mut().expect("checked");
            for &id in &joined {
                engo.members.insert(id);
            }
            self.enrol(&joined, t);
            ev.joined = joined;
        } else {
            // Founding: the join decision with the existence gate waived and
            // no members to conform to.
            let willing = self.decide_all(DecisionKind::JoinEngo, Stream::Founding, t, &members, true, |_| true)?;
            let set: BTreeSet<u32> = willing.iter().copied().collect();
            let cfg = &self.config.engo;
            if let Some(engo) = maybe_form_engo(None, &set, cfg.founding_threshold, &cfg.attributes, t)? {
                self.engo = Some(engo);
                self.enrol(&willing, t);
                ev.formed = true;
                ev.joined = willing.clone();
            }
            ev.founding_willing = willing;
        }
        Ok(())
    }

    fn enrol(&mut self, ids: &[u32], t: u32) {
        for &id in ids {
            let c = &mut self.citizens[id as usize];
            c.state.engo_member = true;
            c.state.history.push(Participation {
                timestep: t,
                kind: DecisionKind::JoinEngo,
            });
        }
    }

    /// Runs the selected actions in repertoire order and returns the summed
    /// intensity of this step.
    fn action_phase(&mut self, t: u32, ev: &mut StepEvents) -> Result<f64> {
        let Some(engo) = &self.engo else {
            return Ok(0.0);
        };
        let cfg = self.config.engo.clone();
        let attrs = engo.attributes;
        let eligible = eligible_actions(&attrs, &cfg.eligibility);
        let mut rng = self.seeds.stream(Stream::EngoSelect, 0, t as u64);
        let selected = select_actions(&eligible, &attrs, &cfg.selection, &mut rng);

        // Peer snapshot after the membership barrier.
        let protest_active = self.protest_snapshot(DecisionKind::ActionProtest);
        let disruptive_active = self.protest_snapshot(DecisionKind::DisruptiveProtest);

        let mut total = 0.0;
        for action in selected {
            let mut event = ActionEvent {
                action,
                timestep: t,
                intensity: None,
                protest_size: None,
                channels: None,
            };
            match action {
                ActionType::Direct => {
                    let i = action_intensity(action, &attrs, cfg.experience_cap, 0.0)?;
                    event.intensity = Some(i);
                    total += i;
                }
                ActionType::Indirect => {
                    let mut rng = self.seeds.stream(Stream::EngoSignal, 0, t as u64);
                    let item = emit_indirect_signal(&attrs, &cfg.eligibility, cfg.coverage_scale, t, &mut rng);
                    self.broadcast(item, Stream::SignalExposure, ev)?;
                    self.signals.push(item);
                    event.channels = Some(item.channels);
                }
                ActionType::Protest | ActionType::DisruptiveProtest => {
                    let (kind, event_kind, call, call_exposure, decision_stream, active) =
                        if action == ActionType::Protest {
                            (
                                DecisionKind::ActionProtest,
                                ProtestEvent::Action,
                                Stream::ProtestCall,
                                Stream::ProtestCallExposure,
                                Stream::ActionProtest,
                                &protest_active,
                            )
                        } else {
                            (
                                DecisionKind::DisruptiveProtest,
                                ProtestEvent::Disruptive,
                                Stream::DisruptiveCall,
                                Stream::DisruptiveCallExposure,
                                Stream::DisruptiveProtest,
                                &disruptive_active,
                            )
                        };
                    let mut rng = self.seeds.stream(call, 0, t as u64);
                    let channels = engo_channels(&attrs, &cfg.eligibility, cfg.coverage_scale, &mut rng);
                    let exposed = expose_channels(&self.citizens, channels, true, &self.seeds, call_exposure, t);
                    diffuse_awareness(&mut self.citizens, event_kind, &exposed)?;
                    let participants = self.decide_all(kind, decision_stream, t, active, true, |_| true)?;
                    for &id in &participants {
                        self.citizens[id as usize].state.history.push(Participation { timestep: t, kind });
                    }
                    let size = participants.len() as f64 / self.citizens.len() as f64;
                    let i = action_intensity(action, &attrs, cfg.experience_cap, size)?;
                    event.intensity = Some(i);
                    event.protest_size = Some(size);
                    event.channels = Some(channels);
                    total += i;
                    if kind == DecisionKind::ActionProtest {
                        ev.protest_participants = participants;
                    } else {
                        ev.disruptive_participants = participants;
                    }
                }
            }
            ev.actions.push(event);
        }
        Ok(total)
    }

    /// Neighbours count as active for a protest when they are members or have
    /// joined that kind of protest before.
    fn protest_snapshot(&self, kind: DecisionKind) -> Vec<bool> {
        self.citizens
            .iter()
            .map(|c| c.state.engo_member || c.state.has_participated(kind))
            .collect()
    }

    /// End-of-horizon inputs for the political stage.
    pub fn signal_bundle(&self) -> SignalBundle {
        let proposal = &self.config.proposal;
        let stance = self.config.engo.stance_on_proposal.sign();
        let (mut support, mut oppose) = (0usize, 0usize);
        for c in &self.citizens {
            let side = if is_mobilised(c) {
                stance
            } else {
                let env = proposal_sign_for_environment(proposal);
                let lean = environmental_lean(&c.motive_weights);
                if lean > 0.0 {
                    env
                } else if lean < 0.0 {
                    -env
                } else {
                    0.0
                }
            };
            if side > 0.0 {
                support += 1;
            } else if side < 0.0 {
                oppose += 1;
            }
        }
        let pro_env = self.news.iter().filter(|i| i.frame == Frame::ProEnvironment).count();
        let steps = self.timestep.max(1) as f64;
        SignalBundle {
            institutional_assessment: proposal.institutional_assessment,
            n_support: support as f64,
            n_oppose: oppose as f64,
            n_pro_environment: pro_env as f64,
            n_pro_economic: (self.news.len() - pro_env) as f64,
            pressure: self.engo.as_ref().map_or(0.0, |e| e.cumulative_pressure),
            pressure_direction: stance,
            salience_society: self.mobilised() as f64 / self.citizens.len() as f64,
            salience_media: self.news.len() as f64 / steps,
        }
    }

    pub fn decide_proposal(&self) -> Result<PoliticalOutcome> {
        evaluate(
            &self.config.politics,
            &self.signal_bundle(),
            &self.config.proposal,
            &self.seeds,
        )
    }

    /// Run the remaining steps, then the political stage, once.
    pub fn run(mut self) -> Result<RunSummary> {
        while !self.is_finished() {
            self.step()?;
        }
        let outcome = self.decide_proposal()?;
        Ok(RunSummary::new(&self, self.signal_bundle(), outcome))
    }
}

/// +1 if environmental support means supporting the proposal.
fn proposal_sign_for_environment(p: &ProposalSpec) -> f64 {
    match p.frame {
        ProposalFrame::Conservation => 1.0,
        ProposalFrame::Development => -1.0,
    }
}

/// Environmental minus economic motive weight.
pub fn environmental_lean(w: &MotiveVector) -> f64 {
    w[Motive::ClimateConcern] + w[Motive::NatureConcern] - w[Motive::GrowthFirst] - w[Motive::EconomicSecurity]
}

fn is_mobilised(c: &Citizen) -> bool {
    c.state.engo_member || !c.state.history.is_empty()
}

pub fn mean_weights(citizens: &[Citizen]) -> MotiveVector {
    let n = citizens.len().max(1) as f64;
    PerMotive::from_fn(|m| citizens.iter().map(|c| c.motive_weights[m]).sum::<f64>() / n)
}

fn ids_where(mask: &[bool]) -> Vec<u32> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u32)
        .collect()
}

/// A connected-first group of `size` citizens: breadth-first from a random
/// start, restarting at another random unvisited citizen when a component
/// runs out.
pub fn clustered_group(network: &SocialNetwork, size: usize, seeds: &SeedTree) -> Result<BTreeSet<u32>> {
    let n = network.len();
    if size > n {
        return Err(Error::config(
            "engo.initial_members",
            format!("cannot exceed the population size {n}"),
        ));
    }
    let mut rng = seeds.stream(Stream::SeedMembers, 0, 0);
    let mut chosen = BTreeSet::new();
    let mut visited = vec![false; n];
    while chosen.len() < size {
        let unvisited: Vec<u32> = (0..n as u32).filter(|&i| !visited[i as usize]).collect();
        let start = unvisited[rng.random_range(0..unvisited.len())];
        let mut queue = VecDeque::from([start]);
        visited[start as usize] = true;
        while let Some(i) = queue.pop_front() {
            if chosen.len() == size {
                break;
            }
            chosen.insert(i);
            for &j in network.neighbors(i)? {
                if !visited[j as usize] {
                    visited[j as usize] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(chosen)
}

/// Run on a dedicated pool of `threads` workers. The result is identical for
/// every thread count.
pub fn run_with_threads(config: SimulationConfig, seed: u64, threads: usize) -> Result<RunSummary> {
    with_threads(threads, || Simulation::new(config, seed)?.run())?
}

/// Evaluate `f` on a dedicated rayon pool with `threads` workers (at least one).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run(config: SimulationConfig, seed: u64) -> Result<RunSummary> {
    Simulation::new(config, seed)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SimulationConfig {
        let mut c = SimulationConfig::default();
        c.population.size = 150;
        c.network.target_mean_degree = 6.0;
        c
    }

    #[test]
    fn initial_state() {
        let sim = Simulation::new(small(), 1).unwrap();
        assert_eq!(sim.timestep(), 0);
        assert_eq!(sim.citizens().len(), 150);
        assert!(sim.news().is_empty());
        assert!(sim.engo().is_none());
    }

    #[test]
    fn preexisting_engo_exists_at_start() {
        let mut c = small();
        c.engo.preexisting = true;
        c.engo.initial_members = 10;
        let sim = Simulation::new(c, 1).unwrap();
        let e = sim.engo().unwrap();
        assert_eq!(e.members.len(), 10);
        assert_eq!(e.cumulative_pressure, 0.0);
        assert_eq!(sim.citizens().iter().filter(|c| c.state.engo_member).count(), 10);
    }

    #[test]
    fn cannot_step_past_horizon() {
        let mut c = small();
        c.engine.horizon = 2;
        let mut sim = Simulation::new(c, 3).unwrap();
        sim.step().unwrap();
        sim.step().unwrap();
        assert!(matches!(sim.step(), Err(Error::Contract(_))));
    }

    #[test]
    fn certain_news_every_step() {
        let mut c = small();
        c.media.news_frequency = 1.0;
        let mut sim = Simulation::new(c, 5).unwrap();
        for k in 1..=5 {
            sim.step().unwrap();
            assert_eq!(sim.news().len(), k);
        }
    }

    #[test]
    fn clustered_group_is_connected_when_possible() {
        let net = SocialNetwork::from_edges(6, [(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap();
        for seed in 0..20 {
            let g = clustered_group(&net, 3, &SeedTree::new(seed)).unwrap();
            assert_eq!(g.len(), 3);
            let ids: Vec<u32> = g.iter().copied().collect();
            let linked = ids
                .iter()
                .filter(|&&i| net.neighbors(i).unwrap().iter().any(|j| g.contains(j)))
                .count();
            // Every member of a 3-group inside the 4-path touches another.
            if ids.iter().all(|&i| i < 4) {
                assert_eq!(linked, 3);
            }
        }
        assert!(clustered_group(&net, 7, &SeedTree::new(0)).is_err());
        assert_eq!(clustered_group(&net, 6, &SeedTree::new(0)).unwrap().len(), 6);
    }
}
