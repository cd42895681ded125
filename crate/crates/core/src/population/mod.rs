//! Synthetic citizens and the static homophily network they live on.

mod network;

use std::io::Write;
use std::ops::{Index, IndexMut};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behaviour::DecisionKind;
use crate::dist::TruncatedNormal;
use crate::error::{Error, Result};
use crate::rng::{SeedTree, Stream};
use crate::validate::{join, Validate, Validator};

pub use network::{
    base_probability, build_homophily_network, link_probability, orientation_band,
    similarity_kernel, AttributePenalties, HomophilyParams, SocialNetwork,
};

const UNIT: (f64, f64) = (0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motive {
    ClimateConcern,
    NatureConcern,
    GrowthFirst,
    EconomicSecurity,
    Conformity,
}

impl Motive {
    pub const ALL: [Motive; 5] = [
        Motive::ClimateConcern,
        Motive::NatureConcern,
        Motive::GrowthFirst,
        Motive::EconomicSecurity,
        Motive::Conformity,
    ];

    /// Motives whose satisfaction is drawn from configured distributions.
    /// Conformity is computed from the network instead.
    pub const DRAWN: [Motive; 4] = [
        Motive::ClimateConcern,
        Motive::NatureConcern,
        Motive::GrowthFirst,
        Motive::EconomicSecurity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Motive::ClimateConcern => "climate_concern",
            Motive::NatureConcern => "nature_concern",
            Motive::GrowthFirst => "growth_first",
            Motive::EconomicSecurity => "economic_security",
            Motive::Conformity => "conformity",
        }
    }
}

/// One value per motive.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerMotive<T> {
    pub climate_concern: T,
    pub nature_concern: T,
    pub growth_first: T,
    pub economic_security: T,
    pub conformity: T,
}

pub type MotiveVector = PerMotive<f64>;

impl<T> PerMotive<T> {
    pub fn from_fn(mut f: impl FnMut(Motive) -> T) -> Self {
        PerMotive {
            climate_concern: f(Motive::ClimateConcern),
            nature_concern: f(Motive::NatureConcern),
            growth_first: f(Motive::GrowthFirst),
            economic_security: f(Motive::EconomicSecurity),
            conformity: f(Motive::Conformity),
        }
    }

    pub fn splat(value: T) -> Self
    where
        T: Clone,
    {
        Self::from_fn(|_| value.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Motive, &T)> {
        Motive::ALL.into_iter().map(move |m| (m, &self[m]))
    }
}

impl<T> Index<Motive> for PerMotive<T> {
    type Output = T;

    fn index(&self, m: Motive) -> &T {
        match m {
            Motive::ClimateConcern => &self.climate_concern,
            Motive::NatureConcern => &self.nature_concern,
            Motive::GrowthFirst => &self.growth_first,
            Motive::EconomicSecurity => &self.economic_security,
            Motive::Conformity => &self.conformity,
        }
    }
}

impl<T> IndexMut<Motive> for PerMotive<T> {
    fn index_mut(&mut self, m: Motive) -> &mut T {
        match m {
            Motive::ClimateConcern => &mut self.climate_concern,
            Motive::NatureConcern => &mut self.nature_concern,
            Motive::GrowthFirst => &mut self.growth_first,
            Motive::EconomicSecurity => &mut self.economic_security,
            Motive::Conformity => &mut self.conformity,
        }
    }
}

/// Opportunity (time, responsiveness) and ability (efficacy, engagement)
/// factors, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoaProfile {
    pub time_availability: f64,
    pub system_responsiveness: f64,
    pub political_self_efficacy: f64,
    pub civic_engagement: f64,
}

impl MoaProfile {
    pub const fn uniform(value: f64) -> Self {
        MoaProfile {
            time_availability: value,
            system_responsiveness: value,
            political_self_efficacy: value,
            civic_engagement: value,
        }
    }

    pub fn opportunity(&self) -> f64 {
        (self.time_availability + self.system_responsiveness) / 2.0
    }

    pub fn ability(&self) -> f64 {
        (self.political_self_efficacy + self.civic_engagement) / 2.0
    }

    /// Combined attenuation factor in [0, 1].
    pub fn factor(&self) -> f64 {
        (self.opportunity() + self.ability()) / 2.0
    }
}

/// Per-channel exposure probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediaExposure {
    pub institutional: f64,
    pub social: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivistAlignment {
    Aligned,
    Neutral,
    Opposed,
}

impl ActivistAlignment {
    pub const ALL: [ActivistAlignment; 3] = [
        ActivistAlignment::Aligned,
        ActivistAlignment::Neutral,
        ActivistAlignment::Opposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActivistAlignment::Aligned => "aligned",
            ActivistAlignment::Neutral => "neutral",
            ActivistAlignment::Opposed => "opposed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Demographics {
    pub age_band: u8,
    pub gender: u8,
    pub education: u8,
    /// 0 = growth-first pole, 1 = environment pole.
    pub political_orientation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participation {
    pub timestep: u32,
    pub kind: DecisionKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CitizenState {
    pub engo_member: bool,
    pub aware_of_action: bool,
    pub aware_of_disruptive: bool,
    /// Every Act outcome so far, in timestep order.
    pub history: Vec<Participation>,
}

impl CitizenState {
    pub fn has_participated(&self, kind: DecisionKind) -> bool {
        self.history.iter().any(|p| p.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Citizen {
    pub id: u32,
    pub demographics: Demographics,
    pub motive_weights: MotiveVector,
    pub moa: MoaProfile,
    pub media_exposure: MediaExposure,
    pub activist_alignment: ActivistAlignment,
    pub state: CitizenState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MoaSpec {
    pub time_availability: TruncatedNormal,
    pub system_responsiveness: TruncatedNormal,
    pub political_self_efficacy: TruncatedNormal,
    pub civic_engagement: TruncatedNormal,
}

impl Default for MoaSpec {
    fn default() -> Self {
        MoaSpec {
            time_availability: TruncatedNormal::new(0.55, 0.2),
            system_responsiveness: TruncatedNormal::new(0.5, 0.2),
            political_self_efficacy: TruncatedNormal::new(0.5, 0.2),
            civic_engagement: TruncatedNormal::new(0.45, 0.2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExposureSpec {
    pub institutional: TruncatedNormal,
    pub social: TruncatedNormal,
}

impl Default for ExposureSpec {
    fn default() -> Self {
        ExposureSpec {
            institutional: TruncatedNormal::new(0.5, 0.2),
            social: TruncatedNormal::new(0.4, 0.25),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentShares {
    pub aligned: f64,
    pub neutral: f64,
    pub opposed: f64,
}

impl AlignmentShares {
    pub fn as_array(&self) -> [f64; 3] {
        [self.aligned, self.neutral, self.opposed]
    }
}

impl Default for AlignmentShares {
    fn default() -> Self {
        AlignmentShares {
            aligned: 0.15,
            neutral: 0.55,
            opposed: 0.30,
        }
    }
}

/// Distributions that synthetic citizens are drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PopulationSpec {
    pub size: usize,
    /// One share per ordinal age band.
    pub age_band_shares: Vec<f64>,
    /// Gender categories; the default is two categories plus "other".
    pub gender_shares: Vec<f64>,
    /// One share per ordinal education level.
    pub education_shares: Vec<f64>,
    pub political_orientation: TruncatedNormal,
    pub motive_weights: PerMotive<TruncatedNormal>,
    pub moa: MoaSpec,
    pub media_exposure: ExposureSpec,
    pub alignment_shares: AlignmentShares,
}

impl Default for PopulationSpec {
    fn default() -> Self {
        PopulationSpec {
            size: 2000,
            age_band_shares: vec![0.18, 0.20, 0.20, 0.20, 0.22],
            gender_shares: vec![0.49, 0.49, 0.02],
            education_shares: vec![0.30, 0.40, 0.30],
            political_orientation: TruncatedNormal::new(0.5, 0.2),
            motive_weights: PerMotive {
                climate_concern: TruncatedNormal::new(0.5, 0.2),
                nature_concern: TruncatedNormal::new(0.5, 0.2),
                growth_first: TruncatedNormal::new(0.45, 0.2),
                economic_security: TruncatedNormal::new(0.5, 0.2),
                conformity: TruncatedNormal::new(0.4, 0.15),
            },
            moa: MoaSpec::default(),
            media_exposure: ExposureSpec::default(),
            alignment_shares: AlignmentShares::default(),
        }
    }
}

impl Validate for PopulationSpec {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.ensure(self.size >= 1, &join(path, "size"), || {
            "population size must be at least 1".into()
        });
        for (name, shares) in [
            ("age_band_shares", &self.age_band_shares),
            ("gender_shares", &self.gender_shares),
            ("education_shares", &self.education_shares),
        ] {
            let p = join(path, name);
            v.shares(&p, shares);
            v.ensure(shares.len() <= u8::MAX as usize, &p, || {
                "at most 255 categories".into()
            });
        }
        self.political_orientation
            .validate_into(&join(path, "political_orientation"), UNIT, v);
        let wp = join(path, "motive_weights");
        for (m, d) in self.motive_weights.iter() {
            d.validate_into(&join(&wp, m.name()), UNIT, v);
        }
        let mp = join(path, "moa");
        for (name, d) in [
            ("time_availability", &self.moa.time_availability),
            ("system_responsiveness", &self.moa.system_responsiveness),
            ("political_self_efficacy", &self.moa.political_self_efficacy),
            ("civic_engagement", &self.moa.civic_engagement),
        ] {
            d.validate_into(&join(&mp, name), UNIT, v);
        }
        let ep = join(path, "media_exposure");
        self.media_exposure
            .institutional
            .validate_into(&join(&ep, "institutional"), UNIT, v);
        self.media_exposure
            .social
            .validate_into(&join(&ep, "social"), UNIT, v);
        v.shares(
            &join(path, "alignment_shares"),
            &self.alignment_shares.as_array(),
        );
    }
}

struct Samplers {
    age: WeightedIndex<f64>,
    gender: WeightedIndex<f64>,
    education: WeightedIndex<f64>,
    alignment: WeightedIndex<f64>,
}

impl Samplers {
    fn new(spec: &PopulationSpec) -> Result<Self> {
        let wi = |path: &str, w: &[f64]| {
            WeightedIndex::new(w).map_err(|e| Error::config(path, e.to_string()))
        };
        Ok(Samplers {
            age: wi("population.age_band_shares", &spec.age_band_shares)?,
            gender: wi("population.gender_shares", &spec.gender_shares)?,
            education: wi("population.education_shares", &spec.education_shares)?,
            alignment: wi(
                "population.alignment_shares",
                &spec.alignment_shares.as_array(),
            )?,
        })
    }
}

fn sample_citizen<R: Rng>(id: u32, spec: &PopulationSpec, s: &Samplers, rng: &mut R) -> Citizen {
    let demographics = Demographics {
        age_band: s.age.sample(rng) as u8,
        gender: s.gender.sample(rng) as u8,
        education: s.education.sample(rng) as u8,
        political_orientation: spec.political_orientation.sample(rng, UNIT),
    };
    let motive_weights = PerMotive::from_fn(|m| spec.motive_weights[m].sample(rng, UNIT));
    let moa = MoaProfile {
        time_availability: spec.moa.time_availability.sample(rng, UNIT),
        system_responsiveness: spec.moa.system_responsiveness.sample(rng, UNIT),
        political_self_efficacy: spec.moa.political_self_efficacy.sample(rng, UNIT),
        civic_engagement: spec.moa.civic_engagement.sample(rng, UNIT),
    };
    let media_exposure = MediaExposure {
        institutional: spec.media_exposure.institutional.sample(rng, UNIT),
        social: spec.media_exposure.social.sample(rng, UNIT),
    };
    let activist_alignment = ActivistAlignment::ALL[s.alignment.sample(rng)];
    Citizen {
        id,
        demographics,
        motive_weights,
        moa,
        media_exposure,
        activist_alignment,
        state: CitizenState::default(),
    }
}

/// Draw `spec.size` citizens. Citizen `i` uses its own sub-stream, so the
/// result depends only on `(spec, seed)`.
pub fn generate_population(spec: &PopulationSpec, seeds: &SeedTree) -> Result<Vec<Citizen>> {
    spec.validate("population")?;
    let n = u32::try_from(spec.size)
        .map_err(|_| Error::config("population.size", "population too large"))?;
    let samplers = Samplers::new(spec)?;
    Ok((0..n)
        .into_par_iter()
        .map(|id| {
            let mut rng = seeds.stream(Stream::Population, id as u64, 0);
            sample_citizen(id, spec, &samplers, &mut rng)
        })
        .collect())
}

/// Column order of the population dump.
pub const POPULATION_CSV_COLUMNS: [&str; 18] = [
    "id",
    "age_band",
    "gender",
    "education",
    "political_orientation",
    "w_climate_concern",
    "w_nature_concern",
    "w_growth_first",
    "w_economic_security",
    "w_conformity",
    "time_availability",
    "system_responsiveness",
    "political_self_efficacy",
    "civic_engagement",
    "p_institutional",
    "p_social",
    "activist_alignment",
    "engo_member",
];

pub fn write_population_csv<W: Write>(citizens: &[Citizen], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(POPULATION_CSV_COLUMNS)?;
    for c in citizens {
        let d = &c.demographics;
        let mut row = vec![
            c.id.to_string(),
            d.age_band.to_string(),
            d.gender.to_string(),
            d.education.to_string(),
            d.political_orientation.to_string(),
        ];
        row.extend(Motive::ALL.iter().map(|&m| c.motive_weights[m].to_string()));
        row.extend(
            [
                c.moa.time_availability,
                c.moa.system_responsiveness,
                c.moa.political_self_efficacy,
                c.moa.civic_engagement,
                c.media_exposure.institutional,
                c.media_exposure.social,
            ]
            .iter()
            .map(f64::to_string),
        );
        row.push(c.activist_alignment.name().to_string());
        row.push(c.state.engo_member.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_size_is_rejected() {
        let spec = PopulationSpec {
            size: 0,
            ..Default::default()
        };
        let err = generate_population(&spec, &SeedTree::new(1)).unwrap_err();
        assert_eq!(err.violations()[0].path, "population.size");
    }

    #[test]
    fn default_population_respects_ranges() {
        let spec = PopulationSpec {
            size: 1000,
            ..Default::default()
        };
        let pop = generate_population(&spec, &SeedTree::new(3)).unwrap();
        assert_eq!(pop.len(), 1000);
        for (i, c) in pop.iter().enumerate() {
            assert_eq!(c.id as usize, i);
            for (_, &w) in c.motive_weights.iter() {
                assert!((0.0..=1.0).contains(&w));
            }
            assert!((0.0..=1.0).contains(&c.media_exposure.institutional));
            assert!((0.0..=1.0).contains(&c.media_exposure.social));
            assert!((0.0..=1.0).contains(&c.moa.factor()));
            assert!((c.demographics.age_band as usize) < spec.age_band_shares.len());
            assert!(c.state.history.is_empty());
        }
    }

    #[test]
    fn alignment_shares_follow_spec() {
        // Oracle: binomial share with n = 10 000 has sd <= 0.005, so +-0.02 is
        // a 4-sigma band.
        let spec = PopulationSpec {
            size: 10_000,
            alignment_shares: AlignmentShares {
                aligned: 0.2,
                neutral: 0.5,
                opposed: 0.3,
            },
            ..Default::default()
        };
        let pop = generate_population(&spec, &SeedTree::new(11)).unwrap();
        for (a, want) in ActivistAlignment::ALL.iter().zip([0.2, 0.5, 0.3]) {
            let got = pop.iter().filter(|c| c.activist_alignment == *a).count() as f64 / 1e4;
            assert!((got - want).abs() <= 0.02, "{a:?}: {got} vs {want}");
        }
    }

    #[test]
    fn same_seed_same_population() {
        let spec = PopulationSpec {
            size: 300,
            ..Default::default()
        };
        let a = generate_population(&spec, &SeedTree::new(5)).unwrap();
        let b = generate_population(&spec, &SeedTree::new(5)).unwrap();
        let c = generate_population(&spec, &SeedTree::new(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn every_spec_violation_is_reported() {
        let mut spec = PopulationSpec {
            size: 0,
            ..Default::default()
        };
        spec.alignment_shares.opposed = 0.2;
        spec.motive_weights.growth_first.sd = -1.0;
        let err = spec.validate("population").unwrap_err();
        let paths: Vec<_> = err.violations().iter().map(|v| v.path.as_str()).collect();
        assert!(paths.contains(&"population.size"));
        assert!(paths.contains(&"population.alignment_shares"));
        assert!(paths.contains(&"population.motive_weights.growth_first.sd"));
    }

    #[test]
    fn population_csv_has_fixed_header() {
        let spec = PopulationSpec {
            size: 3,
            ..Default::default()
        };
        let pop = generate_population(&spec, &SeedTree::new(1)).unwrap();
        let mut buf = Vec::new();
        write_population_csv(&pop, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), POPULATION_CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 3);
    }
}
