//! Per-step records, the run summary and the CSV trace.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::Simulation;
use crate::engo::ActionType;
use crate::error::Result;
use crate::media::{Channels, Frame, Origin};
use crate::politics::{Decision, PoliticalOutcome, PoliticianOutcome, SignalBundle, Tally};
use crate::population::{Motive, MotiveVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub timestep: u32,
    pub join_count: usize,
    pub protest_count: usize,
    pub disruptive_count: usize,
    pub member_count: usize,
    pub cumulative_pressure: f64,
    pub news_frame: Option<Frame>,
    pub mean_weights: MotiveVector,
    pub founding_willing: usize,
    pub engo_exists: bool,
    pub news_channels: Option<Channels>,
    pub news_exposed: usize,
    pub signal_exposed: usize,
    pub actions: Vec<ActionType>,
    pub step_intensity: f64,
    /// Share of citizens who are members or have ever protested.
    pub participation_rate: f64,
}

/// Column order of the trace CSV.
pub const TRACE_COLUMNS: [&str; 20] = [
    "timestep",
    "join_count",
    "protest_count",
    "disruptive_count",
    "member_count",
    "cumulative_pressure",
    "news_frame",
    "mean_w_climate_concern",
    "mean_w_nature_concern",
    "mean_w_growth_first",
    "mean_w_economic_security",
    "mean_w_conformity",
    "founding_willing",
    "engo_exists",
    "news_channels",
    "news_exposed",
    "signal_exposed",
    "actions",
    "step_intensity",
    "participation_rate",
];

fn action_label(a: ActionType) -> &'static str {
    match a {
        ActionType::Direct => "direct",
        ActionType::Indirect => "indirect",
        ActionType::Protest => "protest",
        ActionType::DisruptiveProtest => "disruptive_protest",
    }
}

/// One row per step, columns as in [`TRACE_COLUMNS`]. Floats use the
/// shortest round-trip representation.
pub fn write_trace_csv<W: Write>(records: &[StepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS)?;
    for r in records {
        let mut row = vec![
            r.timestep.to_string(),
            r.join_count.to_string(),
            r.protest_count.to_string(),
            r.disruptive_count.to_string(),
            r.member_count.to_string(),
            r.cumulative_pressure.to_string(),
            r.news_frame.map_or("", |f| f.name()).to_string(),
        ];
        row.extend(Motive::ALL.iter().map(|&m| r.mean_weights[m].to_string()));
        row.extend([
            r.founding_willing.to_string(),
            r.engo_exists.to_string(),
            r.news_channels.map_or("", |c| c.label()).to_string(),
            r.news_exposed.to_string(),
            r.signal_exposed.to_string(),
            r.actions.iter().map(|&a| action_label(a)).collect::<Vec<_>>().join("+"),
            r.step_intensity.to_string(),
            r.participation_rate.to_string(),
        ]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsCounts {
    pub pro_environment: usize,
    pub pro_economic: usize,
    pub engo_signals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub config_digest: String,
    pub population_size: usize,
    pub horizon: u32,
    pub decision: Decision,
    pub tally: Tally,
    pub politicians: Vec<PoliticianOutcome>,
    pub signals: SignalBundle,
    pub final_pressure: f64,
    pub engo_exists: bool,
    pub engo_formed_at: Option<u32>,
    pub member_count: usize,
    pub final_participation_rate: f64,
    pub final_mean_weights: MotiveVector,
    pub news: NewsCounts,
    pub join_series: Vec<usize>,
    pub protest_series: Vec<usize>,
    pub disruptive_series: Vec<usize>,
    pub member_series: Vec<usize>,
    pub pressure_series: Vec<f64>,
    pub mean_weight_series: Vec<MotiveVector>,
}

impl RunSummary {
    pub(crate) fn new(sim: &Simulation, signals: SignalBundle, outcome: PoliticalOutcome) -> Self {
        let r = sim.records();
        let pro_environment = sim.news().iter().filter(|i| i.frame == Frame::ProEnvironment).count();
        RunSummary {
            seed: sim.seed(),
            config_digest: sim.config().digest(),
            population_size: sim.citizens().len(),
            horizon: sim.horizon(),
            decision: outcome.decision,
            tally: outcome.tally,
            politicians: outcome.politicians,
            signals,
            final_pressure: sim.engo().map_or(0.0, |e| e.cumulative_pressure),
            engo_exists: sim.engo().is_some(),
            engo_formed_at: sim.engo().and_then(|e| e.formed_at),
            member_count: sim.engo().map_or(0, |e| e.members.len()),
            final_participation_rate: sim.mobilised() as f64 / sim.citizens().len() as f64,
            final_mean_weights: sim.mean_weights(),
            news: NewsCounts {
                pro_environment,
                pro_economic: sim.news().len() - pro_environment,
                engo_signals: sim.signals().iter().filter(|i| i.origin == Origin::Engo).count(),
            },
            join_series: r.iter().map(|x| x.join_count).collect(),
            protest_series: r.iter().map(|x| x.protest_count).collect(),
            disruptive_series: r.iter().map(|x| x.disruptive_count).collect(),
            member_series: r.iter().map(|x| x.member_count).collect(),
            pressure_series: r.iter().map(|x| x.cumulative_pressure).collect(),
            mean_weight_series: r.iter().map(|x| x.mean_weights).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
