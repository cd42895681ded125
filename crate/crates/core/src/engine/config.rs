//! Scenario configuration: one TOML document with a section per subsystem.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::behaviour::SatisfactionSpec;
use crate::engo::EngoConfig;
use crate::error::{Error, Result};
use crate::influence::MotiveUpdateParams;
use crate::media::MediaConfig;
use crate::politics::{PoliticsConfig, ProposalSpec};
use crate::population::{HomophilyParams, PopulationSpec};
use crate::validate::{join, Validate, Validator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    /// Number of monthly steps before the political decision.
    pub horizon: u32,
}

impl Default for EngineSection {
    fn default() -> Self {
        EngineSection { horizon: 12 }
    }
}

/// Every parameter of a run except the master seed, which is always supplied
/// separately.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub engine: EngineSection,
    pub population: PopulationSpec,
    pub network: HomophilyParams,
    pub behaviour: SatisfactionSpec,
    pub influence: MotiveUpdateParams,
    pub engo: EngoConfig,
    pub media: MediaConfig,
    pub politics: PoliticsConfig,
    pub proposal: ProposalSpec,
}

impl SimulationConfig {
    /// Parse a scenario. Keys the document leaves out keep their default
    /// values, at any depth; arrays are replaced whole.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut doc = toml::Value::try_from(Self::default()).map_err(|e| Error::Parse(e.to_string()))?;
        merge(&mut doc, toml::Value::Table(user));
        doc.try_into()
            .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Every violation in the document, each with its dotted field path.
    pub fn violations(&self) -> Vec<crate::error::Violation> {
        let mut v = Validator::new();
        self.validate_into("", &mut v);
        v.into_violations()
    }

    pub fn check(&self) -> Result<()> {
        self.validate("")
    }

    /// SHA-256 over the canonical JSON form, hex encoded.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&json))
    }

    /// Replace the value at a dotted path such as `media.news_frequency` or
    /// `politics.politicians[2].stance`, then re-read the whole document so
    /// the result is type checked.
    pub fn with_override(&self, path: &str, value: toml::Value) -> Result<Self> {
        let mut doc = toml::Value::try_from(self).map_err(|e| Error::Parse(e.to_string()))?;
        set_path(&mut doc, path, value)?;
        doc.try_into()
            .map_err(|e: toml::de::Error| Error::config(path, e.to_string()))
    }
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Segment {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Result<Vec<Segment>> {
    let bad = || Error::config(path, "malformed parameter path");
    let mut out = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if key.is_empty() {
            return Err(bad());
        }
        out.push(match key.parse::<usize>() {
            Ok(i) => Segment::Index(i),
            Err(_) => Segment::Key(key.to_string()),
        });
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(bad)?;
            let idx = rest[1..close].parse::<usize>().map_err(|_| bad())?;
            out.push(Segment::Index(idx));
            rest = &rest[close + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                return Err(bad());
            }
        }
    }
    Ok(out)
}

fn set_path(doc: &mut toml::Value, path: &str, value: toml::Value) -> Result<()> {
    let segments = parse_path(path)?;
    let unresolved = |msg: &str| Error::config(path, msg.to_string());
    let (last, parents) = segments.split_last().ok_or_else(|| unresolved("empty path"))?;
    let mut node = doc;
    for seg in parents {
        node = match (seg, node) {
            (Segment::Key(k), toml::Value::Table(t)) => {
                t.get_mut(k).ok_or_else(|| unresolved("no such parameter"))?
            }
            (Segment::Index(i), toml::Value::Array(a)) => {
                a.get_mut(*i).ok_or_else(|| unresolved("index out of range"))?
            }
            _ => return Err(unresolved("no such parameter")),
        };
    }
    let slot = match (last, node) {
        (Segment::Key(k), toml::Value::Table(t)) => t.entry(k.clone()).or_insert(value.clone()),
        (Segment::Index(i), toml::Value::Array(a)) => {
            a.get_mut(*i).ok_or_else(|| unresolved("index out of range"))?
        }
        _ => return Err(unresolved("no such parameter")),
    };
    *slot = match (&*slot, value) {
        (toml::Value::Float(_), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
        (_, v) => v,
    };
    Ok(())
}

impl Validate for SimulationConfig {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        let p = |s: &str| join(path, s);
        v.ensure(self.engine.horizon >= 1, &p("engine.horizon"), || {
            "horizon must be at least 1".into()
        });
        self.population.validate_into(&p("population"), v);
        self.network.validate_into(&p("network"), v);
        self.behaviour.validate_into(&p("behaviour"), v);
        self.influence.validate_into(&p("influence"), v);
        self.engo.validate_into(&p("engo"), v);
        self.media.validate_into(&p("media"), v);
        self.politics.validate_into(&p("politics"), v);
        self.proposal.validate_into(&p("proposal"), v);

        let n = self.population.size;
        if n >= 1 {
            v.ensure(
                self.network.target_mean_degree < (n - 1) as f64,
                &p("network.target_mean_degree"),
                || format!("must be below N - 1 = {}", n - 1),
            );
        }
        v.ensure(self.engo.initial_members <= n, &p("engo.initial_members"), || {
            format!("cannot exceed the population size {n}")
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_round_trips() {
        let cfg = SimulationConfig::default();
        assert!(cfg.violations().is_empty(), "{:?}", cfg.violations());
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(SimulationConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(SimulationConfig::from_toml_str("").unwrap(), SimulationConfig::default());
    }

    #[test]
    fn partial_tables_keep_sibling_defaults() {
        let cfg = SimulationConfig::from_toml_str(
            "[population.motive_weights.conformity]\nsd = 0.0\n[behaviour.join_engo.climate_concern.act]\nmean = 0.9\n",
        )
        .unwrap();
        let d = SimulationConfig::default();
        assert_eq!(cfg.population.motive_weights.conformity.sd, 0.0);
        assert_eq!(cfg.population.motive_weights.conformity.mean, d.population.motive_weights.conformity.mean);
        assert_eq!(cfg.population.motive_weights.climate_concern, d.population.motive_weights.climate_concern);
        assert_eq!(cfg.behaviour.join_engo.climate_concern.act.mean, 0.9);
        assert_eq!(cfg.behaviour.join_engo.climate_concern.not_act, d.behaviour.join_engo.climate_concern.not_act);
    }

    #[test]
    fn arrays_are_replaced_whole() {
        let cfg = SimulationConfig::from_toml_str("[population]\neducation_shares = [0.5, 0.5]\n").unwrap();
        assert_eq!(cfg.population.education_shares, vec![0.5, 0.5]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            SimulationConfig::from_toml_str("[engine]\nhorizn = 3\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn zero_horizon_is_reported_with_its_path() {
        let cfg = SimulationConfig::from_toml_str("[engine]\nhorizon = 0\n").unwrap();
        let v = cfg.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "engine.horizon");
    }

    #[test]
    fn bad_alignment_shares_name_the_list() {
        let cfg = SimulationConfig::from_toml_str(
            "[population.alignment_shares]\naligned = 0.1\nneutral = 0.5\nopposed = 0.3\n",
        )
        .unwrap();
        let v = cfg.violations();
        assert!(v.iter().any(|x| x.path == "population.alignment_shares"), "{v:?}");
    }

    #[test]
    fn overrides() {
        let cfg = SimulationConfig::default();
        let c = cfg
            .with_override("media.pro_environment_share", toml::Value::Integer(1))
            .unwrap();
        assert_eq!(c.media.pro_environment_share, 1.0);
        let c = cfg
            .with_override("politics.politicians[2].stance", toml::Value::Float(0.9))
            .unwrap();
        assert_eq!(c.politics.politicians[2].stance, 0.9);
        let c = cfg
            .with_override("population.motive_weights.conformity.max", toml::Value::Float(0.8))
            .unwrap();
        assert_eq!(c.population.motive_weights.conformity.max, Some(0.8));
        assert!(cfg.with_override("media.nope", toml::Value::Float(1.0)).is_err());
        assert!(cfg.with_override("nowhere.at_all", toml::Value::Float(1.0)).is_err());
        assert!(cfg.with_override("engine.horizon", toml::Value::String("x".into())).is_err());
        assert!(cfg.with_override("politics.politicians[99].stance", toml::Value::Float(0.0)).is_err());
    }

    #[test]
    fn path_parsing() {
        assert_eq!(
            parse_path("a.b[3].c").unwrap(),
            vec![
                Segment::Key("a".into()),
                Segment::Key("b".into()),
                Segment::Index(3),
                Segment::Key("c".into())
            ]
        );
        assert_eq!(parse_path("a.0").unwrap()[1], Segment::Index(0));
        assert!(parse_path("a..b").is_err());
        assert!(parse_path("a[x]").is_err());
    }

    #[test]
    fn digest_tracks_content() {
        let a = SimulationConfig::default();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.engine.horizon = 13;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }
}
