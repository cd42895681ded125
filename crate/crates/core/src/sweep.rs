//! One-parameter sensitivity sweeps.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, with_threads, RunSummary, SimulationConfig};
use crate::error::{Error, Result};
use crate::population::Motive;
use crate::rng::derive_seed;
use crate::validate::Validator;

/// Vary one parameter over a grid, `replicates` runs per value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted path into the scenario, e.g. `media.pro_environment_share`.
    pub parameter: String,
    pub values: Vec<toml::Value>,
    #[serde(default = "one")]
    pub replicates: u32,
    pub base_seed: u64,
}

fn one() -> u32 {
    1
}

impl SweepSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Checks the grid, the replicate count, and that every grid value yields
    /// a valid scenario.
    pub fn resolve(&self, base: &SimulationConfig) -> Result<Vec<SimulationConfig>> {
        let mut v = Validator::new();
        v.ensure(!self.values.is_empty(), "values", || "grid must not be empty".into());
        v.ensure(self.replicates >= 1, "replicates", || "at least one replicate".into());
        v.finish()?;
        self.values
            .iter()
            .map(|x| {
                let cfg = base.with_override(&self.parameter, x.clone())?;
                cfg.check()?;
                Ok(cfg)
            })
            .collect()
    }

    pub fn seed_for(&self, value_index: usize, replicate: u32) -> u64 {
        derive_seed(self.base_seed, &[value_index as u64, replicate as u64])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value_index: usize,
    pub replicate: u32,
    pub value: String,
    pub seed: u64,
    pub summary: RunSummary,
}

pub const SWEEP_COLUMNS: [&str; 15] = [
    "value_index",
    "replicate",
    "parameter",
    "value",
    "seed",
    "decision",
    "final_pressure",
    "final_participation_rate",
    "member_count",
    "mean_w_climate_concern",
    "mean_w_nature_concern",
    "mean_w_growth_first",
    "mean_w_economic_security",
    "mean_w_conformity",
    "config_digest",
];

fn value_label(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Run the whole grid on up to `parallelism` threads. Rows come back sorted
/// by `(value_index, replicate)` and do not depend on the thread count.
pub fn run_sweep(base: &SimulationConfig, spec: &SweepSpec, parallelism: usize) -> Result<Vec<SweepRow>> {
    let configs = spec.resolve(base)?;
    let jobs: Vec<(usize, u32)> = (0..configs.len())
        .flat_map(|i| (0..spec.replicates).map(move |r| (i, r)))
        .collect();
    let mut rows: Vec<SweepRow> = with_threads(parallelism, || {
        jobs.par_iter()
            .map(|&(i, r)| {
                let seed = spec.seed_for(i, r);
                Ok(SweepRow {
                    value_index: i,
                    replicate: r,
                    value: value_label(&spec.values[i]),
                    seed,
                    summary: run(configs[i].clone(), seed)?,
                })
            })
            .collect::<Result<_>>()
    })??;
    rows.sort_by_key(|r| (r.value_index, r.replicate));
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(parameter: &str, rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for row in rows {
        let s = &row.summary;
        let mut rec = vec![
            row.value_index.to_string(),
            row.replicate.to_string(),
            parameter.to_string(),
            row.value.clone(),
            row.seed.to_string(),
            s.decision.name().to_string(),
            s.final_pressure.to_string(),
            s.final_participation_rate.to_string(),
            s.member_count.to_string(),
        ];
        rec.extend(Motive::ALL.iter().map(|&m| s.final_mean_weights[m].to_string()));
        rec.push(s.config_digest.clone());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing_and_checks() {
        let s = SweepSpec::from_toml_str(
            "parameter = \"media.news_frequency\"\nvalues = [0.0, 1]\nreplicates = 2\nbase_seed = 9\n",
        )
        .unwrap();
        let cfgs = s.resolve(&SimulationConfig::default()).unwrap();
        assert_eq!(cfgs[1].media.news_frequency, 1.0);

        let empty = SweepSpec { values: vec![], ..s.clone() };
        assert_eq!(empty.resolve(&SimulationConfig::default()).unwrap_err().violations()[0].path, "values");
        let bad = SweepSpec { parameter: "media.frequency".into(), ..s.clone() };
        assert!(bad.resolve(&SimulationConfig::default()).is_err());
        let illegal = SweepSpec { values: vec![toml::Value::Float(2.0)], ..s };
        let err = illegal.resolve(&SimulationConfig::default()).unwrap_err();
        assert_eq!(err.violations()[0].path, "media.news_frequency");
    }

    #[test]
    fn seeds_are_distinct_per_cell() {
        let s = SweepSpec {
            parameter: "x".into(),
            values: vec![],
            replicates: 1,
            base_seed: 1,
        };
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..10 {
            for r in 0..10 {
                assert!(seen.insert(s.seed_for(i, r)));
            }
        }
    }
}
