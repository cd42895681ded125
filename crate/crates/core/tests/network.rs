use std::collections::BTreeSet;

use climgov::population::{
    build_homophily_network, generate_population, similarity_kernel, AttributePenalties, HomophilyParams,
    PopulationSpec,
};
use climgov::SeedTree;

fn population(n: usize, seed: u64) -> Vec<climgov::population::Citizen> {
    let spec = PopulationSpec {
        size: n,
        ..PopulationSpec::default()
    };
    generate_population(&spec, &SeedTree::new(seed)).unwrap()
}

#[test]
fn mean_degree_tracks_target() {
    let params = HomophilyParams::default();
    for seed in 0..20 {
        let pop = population(2000, seed);
        let net = build_homophily_network(&pop, &params, &SeedTree::new(seed)).unwrap();
        let rel = (net.mean_degree() - params.target_mean_degree).abs() / params.target_mean_degree;
        assert!(rel <= 0.10, "seed {seed}: mean degree {}", net.mean_degree());
    }
}

#[test]
fn similar_pairs_link_more_often() {
    let params = HomophilyParams {
        penalties: AttributePenalties {
            age: 0.5,
            gender: 0.5,
            education: 0.5,
            political_orientation: 0.5,
        },
        ..HomophilyParams::default()
    };
    let (mut same_links, mut same_pairs, mut diff_links, mut diff_pairs) = (0u64, 0u64, 0u64, 0u64);
    for seed in 0..10 {
        let pop = population(600, seed);
        let net = build_homophily_network(&pop, &params, &SeedTree::new(seed)).unwrap();
        let edges: BTreeSet<(u32, u32)> = net.edges().collect();
        for i in 0..pop.len() {
            for j in i + 1..pop.len() {
                let k = similarity_kernel(&pop[i].demographics, &pop[j].demographics, &params);
                let linked = edges.contains(&(i as u32, j as u32)) as u64;
                if k == 1.0 {
                    same_pairs += 1;
                    same_links += linked;
                } else if k <= 0.5f64.powi(3) {
                    diff_pairs += 1;
                    diff_links += linked;
                }
            }
        }
    }
    let same = same_links as f64 / same_pairs as f64;
    let diff = diff_links as f64 / diff_pairs as f64;
    assert!(same > diff, "identical {same} vs dissimilar {diff}");
}

#[test]
fn neighbour_queries_rebuild_the_edge_set() {
    let pop = population(500, 3);
    let net = build_homophily_network(&pop, &HomophilyParams::default(), &SeedTree::new(3)).unwrap();
    let stored: BTreeSet<(u32, u32)> = net.edges().collect();
    let mut rebuilt = BTreeSet::new();
    for i in 0..pop.len() as u32 {
        for &j in net.neighbors(i).unwrap() {
            assert!(net.neighbors(j).unwrap().contains(&i));
            assert_ne!(i, j);
            rebuilt.insert((i.min(j), i.max(j)));
        }
    }
    assert_eq!(rebuilt, stored);
    assert_eq!(stored.len(), net.edge_count());
    assert!(net.neighbors(500).is_err());
}

#[test]
fn same_seed_same_network() {
    let pop = population(800, 11);
    let p = HomophilyParams::default();
    let a = build_homophily_network(&pop, &p, &SeedTree::new(11)).unwrap();
    let b = build_homophily_network(&pop, &p, &SeedTree::new(11)).unwrap();
    let c = build_homophily_network(&pop, &p, &SeedTree::new(12)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn alignment_shares_converge() {
    let mut spec = PopulationSpec {
        size: 10_000,
        ..PopulationSpec::default()
    };
    spec.alignment_shares.aligned = 0.2;
    spec.alignment_shares.neutral = 0.5;
    spec.alignment_shares.opposed = 0.3;
    let pop = generate_population(&spec, &SeedTree::new(5)).unwrap();
    for (cat, want) in climgov::population::ActivistAlignment::ALL.iter().zip([0.2, 0.5, 0.3]) {
        let got = pop.iter().filter(|c| c.activist_alignment == *cat).count() as f64 / 1e4;
        assert!((got - want).abs() <= 0.02, "{cat:?}: {got}");
    }
}
