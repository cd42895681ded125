//! Peer shares, bounded logistic motive updating and protest awareness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{Citizen, SocialNetwork};
use crate::validate::{join, Validate, Validator};

/// Steepness `k` and peak-responsiveness level `tau` of the logistic
/// sensitivity `sigma(w) = 1 / (1 + exp(-k (w - tau)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotiveUpdateParams {
    pub steepness: f64,
    pub threshold: f64,
}

impl Default for MotiveUpdateParams {
    fn default() -> Self {
        MotiveUpdateParams {
            steepness: 10.0,
            threshold: 0.5,
        }
    }
}

impl Validate for MotiveUpdateParams {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.positive(&join(path, "steepness"), self.steepness);
        v.unit(&join(path, "threshold"), self.threshold);
    }
}

pub fn sensitivity(w: f64, params: &MotiveUpdateParams) -> f64 {
    1.0 / (1.0 + (-params.steepness * (w - params.threshold)).exp())
}

/// One exposure's worth of salience growth: `w + (1 - w) * sigma(w)`.
/// The result lies in `[w, 1]`, so weights never fall.
pub fn update_motive_weight(w: f64, params: &MotiveUpdateParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::contract(format!(
            "motive weight must lie in [0, 1], got {w}"
        )));
    }
    Ok(w + (1.0 - w) * sensitivity(w, params))
}

/// Share of `id`'s neighbours flagged in `active`. Isolated citizens get 0.
pub fn peer_share(network: &SocialNetwork, active: &[bool], id: u32) -> Result<f64> {
    if active.len() != network.len() {
        return Err(Error::contract(format!(
            "activity mask has {} entries for a network of {}",
            active.len(),
            network.len()
        )));
    }
    let nbrs = network.neighbors(id)?;
    if nbrs.is_empty() {
        return Ok(0.0);
    }
    let acting = nbrs.iter().filter(|&&j| active[j as usize]).count();
    Ok(acting as f64 / nbrs.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtestEvent {
    Action,
    Disruptive,
}

/// Mark citizens aware of an announced protest. eNGO members always learn of
/// it; everyone else only through an exposure this step. Flags are only ever
/// set, never cleared. Returns the number of aware citizens afterwards.
pub fn diffuse_awareness(citizens: &mut [Citizen], event: ProtestEvent, exposed: &[bool]) -> Result<usize> {
    if exposed.len() != citizens.len() {
        return Err(Error::contract(format!(
            "exposure mask has {} entries for {} citizens",
            exposed.len(),
            citizens.len()
        )));
    }
    let mut aware = 0;
    for (c, &hit) in citizens.iter_mut().zip(exposed) {
        let flag = match event {
            ProtestEvent::Action => &mut c.state.aware_of_action,
            ProtestEvent::Disruptive => &mut c.state.aware_of_disruptive,
        };
        *flag |= c.state.engo_member || hit;
        aware += *flag as usize;
    }
    Ok(aware)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::{generate_population, PopulationSpec};
    use crate::rng::SeedTree;
    use proptest::prelude::*;

    fn p(k: f64, tau: f64) -> MotiveUpdateParams {
        MotiveUpdateParams {
            steepness: k,
            threshold: tau,
        }
    }

    #[test]
    fn saturated_weight_stays() {
        assert_eq!(update_motive_weight(1.0, &p(10.0, 0.5)).unwrap(), 1.0);
    }

    #[test]
    fn weight_at_threshold_moves_halfway() {
        assert_eq!(update_motive_weight(0.5, &p(10.0, 0.5)).unwrap(), 0.75);
        for k in [0.1, 1.0, 7.0, 50.0] {
            let w = update_motive_weight(0.3, &p(k, 0.3)).unwrap();
            assert!((w - (0.3 + 0.7 / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_weight_numeric() {
        // 1 / (1 + e^5)
        let expected = 0.006_692_850_924_284_856;
        let got = update_motive_weight(0.0, &p(10.0, 0.5)).unwrap();
        assert!((got - expected).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_weight_rejected() {
        assert!(update_motive_weight(1.2, &p(10.0, 0.5)).is_err());
        assert!(update_motive_weight(-0.1, &p(10.0, 0.5)).is_err());
    }

    #[test]
    fn increment_peaks_inside_interval() {
        let params = p(10.0, 0.5);
        let incs: Vec<f64> = (0..=1000)
            .map(|k| k as f64 / 1000.0)
            .map(|w| update_motive_weight(w, &params).unwrap() - w)
            .collect();
        let (arg, _) = incs
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        assert!(arg > 0 && arg < 1000, "peak at grid index {arg}");
        assert!(incs[1000] == 0.0 && incs[999] < incs[990]);
    }

    #[test]
    fn isolated_node_has_zero_share() {
        let g = SocialNetwork::empty(3);
        assert_eq!(peer_share(&g, &[true, true, true], 1).unwrap(), 0.0);
    }

    #[test]
    fn half_active_neighbourhood() {
        let g = SocialNetwork::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let active = [false, true, false, true, false];
        assert_eq!(peer_share(&g, &active, 0).unwrap(), 0.5);
        assert!(peer_share(&g, &active, 9).is_err());
        assert!(peer_share(&g, &active[..4], 0).is_err());
    }

    #[test]
    fn awareness_channels() {
        let spec = PopulationSpec {
            size: 3,
            ..Default::default()
        };
        let mut pop = generate_population(&spec, &SeedTree::new(1)).unwrap();
        pop[0].state.engo_member = true;
        let n = diffuse_awareness(&mut pop, ProtestEvent::Action, &[false, false, true]).unwrap();
        assert_eq!(n, 2);
        assert!(pop[0].state.aware_of_action);
        assert!(!pop[1].state.aware_of_action);
        assert!(pop[2].state.aware_of_action);
        assert!(!pop[2].state.aware_of_disruptive);
        // monotone: a later round without exposure revokes nothing
        diffuse_awareness(&mut pop, ProtestEvent::Action, &[false; 3]).unwrap();
        assert!(pop[2].state.aware_of_action);
    }

    proptest! {
        #[test]
        fn update_stays_in_w_to_one(w in 0.0f64..=1.0, k in 0.01f64..100.0, tau in 0.0f64..=1.0) {
            let u = update_motive_weight(w, &p(k, tau)).unwrap();
            prop_assert!(w <= u && u <= 1.0);
        }
    }
}
