use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Citizen, Demographics};
use crate::error::{Error, Result};
use crate::rng::{SeedTree, Stream};
use crate::validate::{join, Validate, Validator};

/// Link-probability multiplier applied when two citizens differ on an
/// attribute. 1 means the attribute is ignored, 0 forbids cross-group ties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttributePenalties {
    pub age: f64,
    pub gender: f64,
    pub education: f64,
    pub political_orientation: f64,
}

impl Default for AttributePenalties {
    fn default() -> Self {
        AttributePenalties {
            age: 0.4,
            gender: 0.7,
            education: 0.5,
            political_orientation: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomophilyParams {
    pub target_mean_degree: f64,
    pub penalties: AttributePenalties,
    /// Political orientation is banded into this many ordinal bands before
    /// the within-one-band match test.
    pub orientation_bands: u8,
}

impl Default for HomophilyParams {
    fn default() -> Self {
        HomophilyParams {
            target_mean_degree: 12.0,
            penalties: AttributePenalties::default(),
            orientation_bands: 5,
        }
    }
}

impl Validate for HomophilyParams {
    fn validate_into(&self, path: &str, v: &mut Validator) {
        v.non_negative(&join(path, "target_mean_degree"), self.target_mean_degree);
        let pp = join(path, "penalties");
        v.unit(&join(&pp, "age"), self.penalties.age);
        v.unit(&join(&pp, "gender"), self.penalties.gender);
        v.unit(&join(&pp, "education"), self.penalties.education);
        v.unit(
            &join(&pp, "political_orientation"),
            self.penalties.political_orientation,
        );
        v.ensure(self.orientation_bands >= 1, &join(path, "orientation_bands"), || {
            "need at least one band".into()
        });
    }
}

pub fn orientation_band(orientation: f64, bands: u8) -> u8 {
    let b = (orientation * bands as f64).floor() as i64;
    b.clamp(0, bands as i64 - 1) as u8
}

fn within_one(a: u8, b: u8) -> bool {
    a.abs_diff(b) <= 1
}

/// Product of the four per-attribute kernels: 1 on a match, the attribute's
/// penalty otherwise. Ordinal attributes match when within one band.
pub fn similarity_kernel(a: &Demographics, b: &Demographics, params: &HomophilyParams) -> f64 {
    let p = &params.penalties;
    let bands = params.orientation_bands;
    let mut k = 1.0;
    if !within_one(a.age_band, b.age_band) {
        k *= p.age;
    }
    if a.gender != b.gender {
        k *= p.gender;
    }
    if !within_one(a.education, b.education) {
        k *= p.education;
    }
    let (oa, ob) = (
        orientation_band(a.political_orientation, bands),
        orientation_band(b.political_orientation, bands),
    );
    if !within_one(oa, ob) {
        k *= p.political_orientation;
    }
    k
}

pub fn link_probability(
    a: &Demographics,
    b: &Demographics,
    base_prob: f64,
    params: &HomophilyParams,
) -> f64 {
    base_prob * similarity_kernel(a, b, params)
}

type ClassKey = (u8, u8, u8, u8);

fn class_of(d: &Demographics, bands: u8) -> ClassKey {
    (
        d.age_band,
        d.gender,
        d.education,
        orientation_band(d.political_orientation, bands),
    )
}

fn class_demographics(key: ClassKey, bands: u8) -> Demographics {
    Demographics {
        age_band: key.0,
        gender: key.1,
        education: key.2,
        // centre of the band; the kernel only looks at the band
        political_orientation: (key.3 as f64 + 0.5) / bands as f64,
    }
}

/// Base link probability that makes the expected mean degree equal the
/// target: `base = target * N / (2 * sum_{i<j} K_ij)`.
///
/// The kernel only depends on attribute classes, so the pair sum is taken
/// over class pairs rather than citizen pairs.
pub fn base_probability(population: &[Citizen], params: &HomophilyParams) -> Result<f64> {
    let n = population.len();
    if n == 0 {
        return Err(Error::contract("cannot build a network over an empty population"));
    }
    let target = params.target_mean_degree;
    if target >= (n - 1) as f64 && target > 0.0 {
        return Err(Error::config(
            "network.target_mean_degree",
            format!("target mean degree {target} must be below N - 1 = {}", n - 1),
        ));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let bands = params.orientation_bands;
    let mut counts: BTreeMap<ClassKey, f64> = BTreeMap::new();
    for c in population {
        *counts.entry(class_of(&c.demographics, bands)).or_default() += 1.0;
    }
    let classes: Vec<(Demographics, f64)> = counts
        .into_iter()
        .map(|(k, c)| (class_demographics(k, bands), c))
        .collect();
    let mut ordered = 0.0;
    for (da, na) in &classes {
        for (db, nb) in &classes {
            ordered += na * nb * similarity_kernel(da, db, params);
        }
    }
    // drop the i == j diagonal (kernel 1 on itself) and halve for i < j
    let pair_sum = (ordered - n as f64) / 2.0;
    if pair_sum <= 0.0 {
        return Err(Error::config(
            "network.penalties",
            "penalties forbid every tie; the target mean degree is unattainable",
        ));
    }
    let base = target * n as f64 / (2.0 * pair_sum);
    if base > 1.0 {
        return Err(Error::config(
            "network.target_mean_degree",
            format!(
                "target mean degree {target} needs base link probability {base:.3} > 1 under the configured penalties"
            ),
        ));
    }
    Ok(base)
}

/// Undirected simple graph over citizen ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocialNetwork {
    adjacency: Vec<Vec<u32>>,
}

impl SocialNetwork {
    pub fn empty(n: usize) -> Self {
        SocialNetwork {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Build from an edge list. Self-loops, duplicates and out-of-range
    /// endpoints are contract errors.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::contract(format!("self-loop on {a}")));
            }
            for x in [a, b] {
                if x as usize >= n {
                    return Err(Error::UnknownId(x));
                }
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for (i, row) in adjacency.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::contract(format!("duplicate edge at node {i}")));
            }
        }
        Ok(SocialNetwork { adjacency })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Sorted neighbour ids of `id`.
    pub fn neighbors(&self, id: u32) -> Result<&[u32]> {
        self.adjacency
            .get(id as usize)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownId(id))
    }

    pub fn degree(&self, id: u32) -> Result<usize> {
        self.neighbors(id).map(<[u32]>::len)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    /// Each undirected edge once, as `(low, high)`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, row)| {
            let i = i as u32;
            row.iter().filter(move |&&j| j > i).map(move |&j| (i, j))
        })
    }
}

/// Link every unordered pair independently with probability
/// `base * kernel(i, j)`. Row `i` draws its pairs `(i, j > i)` from its own
/// sub-stream.
pub fn build_homophily_network(
    population: &[Citizen],
    params: &HomophilyParams,
    seeds: &SeedTree,
) -> Result<SocialNetwork> {
    params.validate("network")?;
    let base = base_probability(population, params)?;
    let n = population.len();
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.stream(Stream::Network, i as u64, 0);
            let di = &population[i].demographics;
            (i + 1..n)
                .filter(|&j| {
                    let p = link_probability(di, &population[j].demographics, base, params);
                    rng.random::<f64>() < p
                })
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    SocialNetwork::from_edges(
        n,
        upper
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&j| (i as u32, j))),
    )
}
