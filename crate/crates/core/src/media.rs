//! The institutional media agent and the exposure machinery shared with eNGO
//! signals.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::influence::{update_motive_weight, MotiveUpdateParams};
use crate::population::{Citizen, MediaExposure, Motive, MotiveVector};
use crate::rng::{SeedTree, Stream};
use crate::validate::{join, Validate, Validator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediaConfig {
    /// Probability of a news item in a step.
    pub news_frequency: f64,
    /// Probability that an item is framed pro-environment.
    pub pro_environment_share: f64,
    /// Probability that an item is also carried on social media.
    pub social_amplification: f64,
}

impl Default for MediaConfig {
    fn default() -> Self {
        MediaConfig {
            news_frequency: 0.5,
            pro_environment_share: 0.5,
            social_amplification: 0.4,
        }
    }
}

impl Validate for MediaConfig {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.unit(&join(path, "news_frequency"), self.news_frequency);
        v.unit(&join(path, "pro_environment_share"), self.pro_environment_share);
        v.unit(&join(path, "social_amplification"), self.social_amplification);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    ProEnvironment,
    ProEconomic,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::ProEnvironment => "pro_environment",
            Frame::ProEconomic => "pro_economic",
        }
    }

    /// The two motives an item with this frame amplifies.
    pub fn targets(self) -> [Motive; 2] {
        match self {
            Frame::ProEnvironment => [Motive::ClimateConcern, Motive::NatureConcern],
            Frame::ProEconomic => [Motive::EconomicSecurity, Motive::GrowthFirst],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Channels {
    pub institutional: bool,
    pub social: bool,
}

impl Channels {
    pub fn label(&self) -> &'static str {
        match (self.institutional, self.social) {
            (true, true) => "institutional+social",
            (true, false) => "institutional",
            (false, true) => "social",
            (false, false) => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Media,
    Engo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsItem {
    pub frame: Frame,
    pub channels: Channels,
    pub origin: Origin,
    pub timestep: u32,
}

/// One Bernoulli trial for the frequency, then the frame, then social
/// amplification. Institutional dissemination is always on.
pub fn generate_news<R: Rng + ?Sized>(config: &MediaConfig, timestep: u32, rng: &mut R) -> Option<NewsItem> {
    if !rng.random_bool(config.news_frequency) {
        return None;
    }
    let frame = if rng.random_bool(config.pro_environment_share) {
        Frame::ProEnvironment
    } else {
        Frame::ProEconomic
    };
    let social = rng.random_bool(config.social_amplification);
    Some(NewsItem {
        frame,
        channels: Channels {
            institutional: true,
            social,
        },
        origin: Origin::Media,
        timestep,
    })
}

/// Independent Bernoulli trials over the carrying channels, institutional
/// first; exposed if at least one succeeds.
pub fn channel_exposure<R: Rng + ?Sized>(p: &MediaExposure, channels: Channels, rng: &mut R) -> bool {
    let inst = channels.institutional && rng.random_bool(p.institutional);
    let social = channels.social && rng.random_bool(p.social);
    inst || social
}

/// Exposure mask for a signal carried on `channels`. When `members_certain`
/// is set, eNGO members are exposed without a draw. Citizen `i` draws from
/// `stream` keyed by `(i, timestep)`.
pub fn expose_channels(
    citizens: &[Citizen],
    channels: Channels,
    members_certain: bool,
    seeds: &SeedTree,
    stream: Stream,
    timestep: u32,
) -> Vec<bool> {
    citizens
        .par_iter()
        .map(|c| {
            if members_certain && c.state.engo_member {
                return true;
            }
            let mut rng = seeds.stream(stream, c.id as u64, timestep as u64);
            channel_exposure(&c.media_exposure, channels, &mut rng)
        })
        .collect()
}

/// Exposure mask for a news item. eNGO-origin items reach every member.
pub fn expose(citizens: &[Citizen], item: &NewsItem, seeds: &SeedTree, stream: Stream) -> Vec<bool> {
    expose_channels(
        citizens,
        item.channels,
        item.origin == Origin::Engo,
        seeds,
        stream,
        item.timestep,
    )
}

/// Apply one logistic update to each of the frame's two target motives.
pub fn apply_framing(weights: &MotiveVector, frame: Frame, params: &MotiveUpdateParams) -> Result<MotiveVector> {
    let mut out = *weights;
    for m in frame.targets() {
        out[m] = update_motive_weight(out[m], params)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::{generate_population, PerMotive, PopulationSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(f: f64, e: f64, s: f64) -> MediaConfig {
        MediaConfig {
            news_frequency: f,
            pro_environment_share: e,
            social_amplification: s,
        }
    }

    #[test]
    fn zero_frequency_never_publishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|t| generate_news(&cfg(0.0, 0.5, 0.5), t, &mut rng).is_none()));
    }

    #[test]
    fn certain_item_on_both_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let item = generate_news(&cfg(1.0, 1.0, 1.0), 3, &mut rng).unwrap();
        assert_eq!(item.frame, Frame::ProEnvironment);
        assert_eq!(
            item.channels,
            Channels {
                institutional: true,
                social: true
            }
        );
        assert_eq!(item.timestep, 3);
    }

    #[test]
    fn news_rates_match_configuration() {
        // sd of a rate over 20 000 trials is at most 0.0036, and of the
        // frame share over ~10 000 items about 0.0046: 0.01 is >2 sigma.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let items: Vec<_> = (0..20_000)
            .filter_map(|t| generate_news(&cfg(0.5, 0.3, 0.0), t, &mut rng))
            .collect();
        let rate = items.len() as f64 / 20_000.0;
        let env = items.iter().filter(|i| i.frame == Frame::ProEnvironment).count() as f64
            / items.len() as f64;
        assert!((rate - 0.5).abs() <= 0.01, "rate {rate}");
        assert!((env - 0.3).abs() <= 0.01, "pro-env share {env}");
    }

    fn population(n: usize, inst: f64, social: f64) -> Vec<Citizen> {
        let spec = PopulationSpec {
            size: n,
            ..Default::default()
        };
        let mut pop = generate_population(&spec, &SeedTree::new(4)).unwrap();
        for c in &mut pop {
            c.media_exposure = MediaExposure {
                institutional: inst,
                social,
            };
        }
        pop
    }

    fn item(origin: Origin, institutional: bool, social: bool) -> NewsItem {
        NewsItem {
            frame: Frame::ProEnvironment,
            channels: Channels {
                institutional,
                social,
            },
            origin,
            timestep: 0,
        }
    }

    #[test]
    fn exposure_extremes() {
        let seeds = SeedTree::new(1);
        let none = population(50, 0.0, 0.0);
        let mask = expose(&none, &item(Origin::Media, true, true), &seeds, Stream::MediaExposure);
        assert!(mask.iter().all(|&x| !x));
        let all = population(50, 1.0, 0.0);
        let mask = expose(&all, &item(Origin::Media, true, false), &seeds, Stream::MediaExposure);
        assert!(mask.iter().all(|&x| x));
    }

    #[test]
    fn members_always_receive_engo_items() {
        let seeds = SeedTree::new(1);
        let mut pop = population(20, 0.0, 0.0);
        pop[3].state.engo_member = true;
        let mask = expose(&pop, &item(Origin::Engo, false, true), &seeds, Stream::SignalExposure);
        assert_eq!(mask.iter().filter(|&&x| x).count(), 1);
        assert!(mask[3]);
        // media items get no member privilege
        let mask = expose(&pop, &item(Origin::Media, true, true), &seeds, Stream::MediaExposure);
        assert!(!mask[3]);
    }

    #[test]
    fn exposed_fraction_concentrates() {
        // binomial(10 000, 0.4): sd 0.0049, band 0.02 is 4 sigma
        let pop = population(10_000, 0.4, 0.9);
        let mask = expose(
            &pop,
            &item(Origin::Media, true, false),
            &SeedTree::new(77),
            Stream::MediaExposure,
        );
        let frac = mask.iter().filter(|&&x| x).count() as f64 / 1e4;
        assert!((frac - 0.4).abs() <= 0.02, "{frac}");
    }

    #[test]
    fn framing_targets_only_matching_motives() {
        let params = MotiveUpdateParams::default();
        let mut w = PerMotive::splat(0.5);
        w.climate_concern = 1.0;
        let env = apply_framing(&w, Frame::ProEnvironment, &params).unwrap();
        assert_eq!(env.climate_concern, 1.0);
        assert_eq!(env.nature_concern, 0.75);
        assert_eq!(env.growth_first, 0.5);
        let econ = apply_framing(&w, Frame::ProEconomic, &params).unwrap();
        assert_eq!(econ.climate_concern.to_bits(), w.climate_concern.to_bits());
        assert_eq!(econ.nature_concern.to_bits(), w.nature_concern.to_bits());
        assert_eq!(econ.conformity, 0.5);
        assert_eq!(econ.growth_first, 0.75);
        assert_eq!(econ.economic_security, 0.75);
    }

    #[test]
    fn climate_at_threshold_goes_to_three_quarters() {
        let mut w = PerMotive::splat(0.2);
        w.climate_concern = 0.5;
        let out = apply_framing(&w, Frame::ProEnvironment, &MotiveUpdateParams::default()).unwrap();
        assert_eq!(out.climate_concern, 0.75);
    }
}
