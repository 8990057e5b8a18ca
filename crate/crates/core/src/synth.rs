//! Synthetic corpora: seeded random collaboration networks and planted
//! instances with a known outlier and a known best replacement, used for
//! property tests and desk-scale benchmarks.
//!
//! All randomness comes from a small, explicitly documented generator so
//! fixtures are portable: given the same seed, any implementation of the
//! same recipe reproduces the corpus bit for bit.

use crate::corpus::{
    build_network, CollaborationNetwork, IngestConfig, PublicationRecord, PublicationSet, Team,
    YearWindow,
};
use crate::error::{Error, Result};

/// SplitMix64: Steele, Lea & Flood's 64-bit mixing generator.
///
/// State advances by the golden-ratio increment 0x9E3779B97F4A7C15; each
/// output is the state scrambled by two xor-shift-multiply rounds with
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB. Tiny, full-period over the
/// state, and trivially portable.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `0..bound` (`bound` > 0).
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// The publication year stamped on every generated record, inside the
/// default analysis window.
const SYNTH_YEAR: i32 = 2008;

fn synth_window() -> YearWindow {
    YearWindow::new(2005, 2012).expect("static window is valid")
}

/// A generated corpus together with the network built from it.
#[derive(Debug, Clone)]
pub struct SyntheticNetwork {
    pub publications: PublicationSet,
    pub network: CollaborationNetwork,
}

/// Erdős–Rényi-style network: `n` scholars, each unordered pair connected
/// with probability `edge_prob`, one uniformly drawn skill per scholar
/// (none when `n_skills` is 0). Deterministic for a fixed seed.
pub fn generate_random_network(
    seed: u64,
    n: usize,
    edge_prob: f64,
    n_skills: usize,
) -> Result<SyntheticNetwork> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {edge_prob} is outside [0, 1]"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let names: Vec<String> = (0..n).map(|i| format!("s{i:04}")).collect();
    let mut records = Vec::new();
    let mut next_id = 0usize;
    let mut push = |records: &mut Vec<PublicationRecord>, authors: Vec<String>, skills: Vec<String>| {
        records.push(PublicationRecord {
            id: format!("pub{next_id:06}"),
            year: SYNTH_YEAR,
            authors,
            skills,
        });
        next_id += 1;
    };

    for name in &names {
        let skills = if n_skills > 0 {
            vec![format!("skill{:02}", rng.next_below(n_skills))]
        } else {
            Vec::new()
        };
        push(&mut records, vec![name.clone()], skills);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < edge_prob {
                push(&mut records, vec![names[i].clone(), names[j].clone()], Vec::new());
            }
        }
    }

    let publications = PublicationSet::new(records);
    let network = build_network(&publications, synth_window(), &IngestConfig::default());
    Ok(SyntheticNetwork {
        publications,
        network,
    })
}

/// A network with one team whose outlier and ideal replacement are known
/// by construction.
///
/// The team is a clique of core members plus the outlier, who collaborates
/// with a single core but shares all their motifs with decoys outside the
/// team. The planted replacement duplicates the outlier's in-team edges,
/// skills, and familiarity, while every decoy lacks the team edge and the
/// team's skills — so detection must rank the outlier first and
/// recommendation must rank the replacement first on a noiseless instance.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub publications: PublicationSet,
    pub network: CollaborationNetwork,
    pub team: Team,
    pub planted_outlier: String,
    pub planted_best_candidate: String,
    /// Scaffolding scholars that must be barred from candidate pools: they
    /// exist only to give small cores their in-team motifs.
    pub pool_exclude: Vec<String>,
    pub seed: u64,
}

impl PlantedInstance {
    /// Team roster in the loader's CSV format.
    pub fn team_csv(&self) -> String {
        let mut out = String::from("team_id,member_id\n");
        for member in &self.team.members {
            out.push_str(&format!("{},{}\n", self.team.id, member));
        }
        out
    }

    /// Departure ground truth in the evaluation CSV format.
    pub fn ground_truth_csv(&self) -> String {
        format!(
            "team_id,departed_id,joiner_id\n{},{},{}\n",
            self.team.id, self.planted_outlier, self.planted_best_candidate
        )
    }
}

/// Generate a planted instance.
///
/// `pool_size` asks for that many candidates within two hops of the
/// remaining members (the replacement plus decoys); at least three are
/// always generated. `noise` adds random edges between decoys and
/// non-anchor cores (and between non-consecutive decoys) with probability
/// `noise / 2` each, never touching the outlier, the replacement, or the
/// anchor core, so the planted identities survive any noise level.
pub fn generate_planted(
    seed: u64,
    team_size: usize,
    pool_size: usize,
    noise: f64,
) -> Result<PlantedInstance> {
    if !(3..=9).contains(&team_size) {
        return Err(Error::InvalidParameter(format!(
            "team size {team_size} is outside 3..=9"
        )));
    }
    if pool_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "candidate pool size {pool_size} must be at least 2"
        )));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidParameter(format!(
            "noise level {noise} is outside [0, 1]"
        )));
    }

    let t = team_size;
    let cores: Vec<String> = (0..t - 1).map(|i| format!("core{i:02}")).collect();
    let outlier = "out00".to_string();
    let clone = "rep00".to_string();
    let decoys: Vec<String> = (0..pool_size.max(3) - 1)
        .map(|i| format!("alt{i:03}"))
        .collect();
    let m = decoys.len();

    let mut rng = SplitMix64::new(seed);
    let mut records = Vec::new();
    let mut next_id = 0usize;
    let mut push = |records: &mut Vec<PublicationRecord>, authors: Vec<&str>, skills: Vec<String>| {
        records.push(PublicationRecord {
            id: format!("pub{next_id:06}"),
            year: SYNTH_YEAR,
            authors: authors.into_iter().map(str::to_string).collect(),
            skills,
        });
        next_id += 1;
    };

    // Core clique, with a heavy anchor edge between the first two cores so
    // the normalized team adjacency stays well inside the kernel's
    // spectral bound at the default decay.
    for i in 0..cores.len() {
        for j in (i + 1)..cores.len() {
            push(&mut records, vec![&cores[i], &cores[j]], Vec::new());
        }
    }
    for _ in 0..4 {
        push(&mut records, vec![&cores[0], &cores[1]], Vec::new());
    }

    // The outlier's single team edge, duplicated exactly by the clone.
    push(&mut records, vec![&outlier, &cores[0]], Vec::new());
    push(&mut records, vec![&clone, &cores[0]], Vec::new());

    // A two-core team has no internal triangle; a helper completes one so
    // the cores have in-team motif partners. It must never enter candidate
    // pools — it would trivially dominate.
    let mut pool_exclude = Vec::new();
    if t == 3 {
        push(&mut records, vec!["aux00", &cores[0]], Vec::new());
        push(&mut records, vec!["aux00", &cores[1]], Vec::new());
        pool_exclude.push("aux00".to_string());
    }

    // Decoy fan: every decoy collaborates with the outlier, consecutive
    // decoys collaborate with each other, so all the outlier's motifs live
    // outside the team.
    for decoy in &decoys {
        push(&mut records, vec![&outlier, decoy], Vec::new());
    }
    for pair in decoys.windows(2) {
        push(&mut records, vec![&pair[0], &pair[1]], Vec::new());
    }

    // Skills: one topic per core; the outlier and the clone share two
    // research areas; each decoy holds two niche skills of its own, so a
    // decoy swap always spreads the replacement team's skills further
    // apart than the clone swap does.
    for (i, core) in cores.iter().enumerate() {
        push(&mut records, vec![core], vec![format!("topic{i:02}")]);
    }
    push(
        &mut records,
        vec![&outlier],
        vec!["area00".to_string(), "area01".to_string()],
    );
    push(
        &mut records,
        vec![&clone],
        vec!["area00".to_string(), "area01".to_string()],
    );
    for (i, decoy) in decoys.iter().enumerate() {
        push(
            &mut records,
            vec![decoy],
            vec![format!("niche{i:03}a"), format!("niche{i:03}b")],
        );
    }

    // Noise: decoy-to-core and non-consecutive decoy-to-decoy edges, drawn
    // in a fixed order so the record stream is a pure function of the
    // seed. The anchor core, outlier, and clone stay untouched.
    for decoy in &decoys {
        for core in cores.iter().skip(1) {
            if rng.next_f64() < noise / 2.0 {
                push(&mut records, vec![decoy, core], Vec::new());
            }
        }
    }
    for i in 0..m {
        for j in (i + 2)..m {
            if rng.next_f64() < noise / 2.0 {
                push(&mut records, vec![&decoys[i], &decoys[j]], Vec::new());
            }
        }
    }

    // Keep the full vocabulary regardless of decoy count so skill
    // semantics do not shift with pool size.
    let config = IngestConfig {
        max_skills: 2 + cores.len() + 2 * m,
        ..IngestConfig::default()
    };
    let publications = PublicationSet::new(records);
    let network = build_network(&publications, synth_window(), &config);

    let mut members = cores.clone();
    members.push(outlier.clone());
    Ok(PlantedInstance {
        publications,
        network,
        team: Team {
            id: "team00".to_string(),
            members,
        },
        planted_outlier: outlier,
        planted_best_candidate: clone,
        pool_exclude,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::familiarity::detect_outliers;
    use crate::kernel::{
        candidate_pool, familiarity_matrix, recommend, team_adjacency, FamiliarityMode,
        RecommendOptions,
    };
    use crate::motifs::{enumerate_motifs, MotifIndex, MotifOptions};

    #[test]
    fn splitmix_matches_the_published_vector() {
        // First three outputs for seed 0 from the reference C code.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn unit_interval_samples_stay_in_range() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
        for _ in 0..1000 {
            assert!(rng.next_below(7) < 7);
        }
    }

    fn jsonl(publications: &PublicationSet) -> String {
        let mut buffer = Vec::new();
        publications.write_jsonl(&mut buffer).unwrap();
        String::from_utf8(buffer).unwrap()
    }

    #[test]
    fn random_network_is_reproducible_bit_for_bit() {
        let a = generate_random_network(99, 30, 0.2, 4).unwrap();
        let b = generate_random_network(99, 30, 0.2, 4).unwrap();
        assert_eq!(jsonl(&a.publications), jsonl(&b.publications));
        assert_eq!(a.network, b.network);
        let c = generate_random_network(100, 30, 0.2, 4).unwrap();
        assert_ne!(jsonl(&a.publications), jsonl(&c.publications));
    }

    #[test]
    fn edge_probability_extremes() {
        let empty = generate_random_network(7, 12, 0.0, 0).unwrap();
        assert_eq!(empty.network.edge_count(), 0);
        assert_eq!(empty.network.node_count(), 12);
        let complete = generate_random_network(7, 12, 1.0, 0).unwrap();
        assert_eq!(complete.network.edge_count(), 12 * 11 / 2);
    }

    #[test]
    fn invalid_probability_is_rejected() {
        assert!(matches!(
            generate_random_network(1, 5, 1.5, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    fn index_of(instance: &PlantedInstance) -> MotifIndex {
        enumerate_motifs(&instance.network, MotifOptions::default()).unwrap()
    }

    fn recommend_options(instance: &PlantedInstance) -> RecommendOptions<f64> {
        RecommendOptions {
            exclude: instance.pool_exclude.clone(),
            ..RecommendOptions::default()
        }
    }

    #[test]
    fn planted_instance_is_reproducible() {
        let a = generate_planted(5, 6, 4, 0.3).unwrap();
        let b = generate_planted(5, 6, 4, 0.3).unwrap();
        assert_eq!(jsonl(&a.publications), jsonl(&b.publications));
        assert_eq!(a.network, b.network);
    }

    #[test]
    fn outlier_motif_partners_all_lie_outside_the_team() {
        for noise in [0.0, 0.6] {
            let instance = generate_planted(11, 5, 4, noise).unwrap();
            let index = index_of(&instance);
            let node = instance
                .network
                .require_node(&instance.planted_outlier)
                .unwrap();
            assert!(index.partner_count(node) >= 2);
            for partner in index.partners(node) {
                let id = instance.network.scholar_id(partner);
                assert!(!instance.team.contains(id), "{id} is a team member");
            }
        }
    }

    #[test]
    fn clone_duplicates_in_team_adjacency_skills_and_familiarity() {
        let instance = generate_planted(3, 5, 4, 0.5).unwrap();
        let net = &instance.network;
        let index = index_of(&instance);
        let remaining: Vec<String> = instance
            .team
            .members
            .iter()
            .filter(|m| **m != instance.planted_outlier)
            .cloned()
            .collect();
        let mut old_team = vec![instance.planted_outlier.clone()];
        old_team.extend(remaining.iter().cloned());
        let mut new_team = vec![instance.planted_best_candidate.clone()];
        new_team.extend(remaining.iter().cloned());

        let adjacency_old: crate::linalg::SquareMatrix<f64> =
            team_adjacency(net, &old_team).unwrap();
        let adjacency_new = team_adjacency(net, &new_team).unwrap();
        assert_eq!(adjacency_old, adjacency_new);

        let out_node = net.require_node(&instance.planted_outlier).unwrap();
        let rep_node = net.require_node(&instance.planted_best_candidate).unwrap();
        let skills_out: Vec<&str> = net
            .skills_of(out_node)
            .iter()
            .map(|&s| net.skill_vocabulary()[s].as_str())
            .collect();
        let skills_rep: Vec<&str> = net
            .skills_of(rep_node)
            .iter()
            .map(|&s| net.skill_vocabulary()[s].as_str())
            .collect();
        assert_eq!(skills_out, skills_rep);
        assert_eq!(skills_out, ["area00", "area01"]);

        for mode in [FamiliarityMode::Pairwise, FamiliarityMode::HigherOrder] {
            let f_old: crate::linalg::Diagonal<f64> =
                familiarity_matrix(net, &index, &old_team, mode).unwrap();
            let f_new = familiarity_matrix(net, &index, &new_team, mode).unwrap();
            assert_eq!(f_old, f_new);
        }
    }

    #[test]
    fn detection_finds_the_planted_outlier_across_sizes() {
        for size in 3..=9 {
            for seed in 0..5 {
                let instance = generate_planted(seed, size, 5, 0.0).unwrap();
                let index = index_of(&instance);
                let scores =
                    detect_outliers::<f64>(&instance.network, &index, &instance.team).unwrap();
                assert_eq!(
                    scores[0].scholar, instance.planted_outlier,
                    "size {size} seed {seed}"
                );
                assert_eq!(scores[0].outlier_degree, 0.0);
                assert!(scores[1].outlier_degree > 0.0, "unique argmin expected");
            }
        }
    }

    #[test]
    fn detection_survives_heavy_noise() {
        for seed in 0..5 {
            let instance = generate_planted(seed, 6, 6, 0.9).unwrap();
            let index = index_of(&instance);
            let scores =
                detect_outliers::<f64>(&instance.network, &index, &instance.team).unwrap();
            assert_eq!(scores[0].scholar, instance.planted_outlier);
        }
    }

    #[test]
    fn recommendation_finds_the_planted_replacement_across_sizes() {
        for size in 3..=9 {
            for seed in 70u64..73 {
                let instance = generate_planted(seed, size, 5, 0.0).unwrap();
                let index = index_of(&instance);
                let rec = recommend::<f64>(
                    &instance.network,
                    &index,
                    &instance.team,
                    &instance.planted_outlier,
                    &recommend_options(&instance),
                )
                .unwrap();
                assert_eq!(rec.pool_size, 5, "size {size}");
                assert_eq!(
                    rec.candidates[0].candidate, instance.planted_best_candidate,
                    "size {size} seed {seed}"
                );
                assert!(
                    rec.candidates[0].score > rec.candidates[1].score,
                    "unique argmax expected at size {size} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn requested_pool_size_is_a_floor_of_three() {
        let instance = generate_planted(1, 4, 2, 0.0).unwrap();
        let remaining: Vec<String> = instance
            .team
            .members
            .iter()
            .filter(|m| **m != instance.planted_outlier)
            .cloned()
            .collect();
        let mut exclude = instance.pool_exclude.clone();
        exclude.push(instance.planted_outlier.clone());
        let pool = candidate_pool(&instance.network, &remaining, Some(2), &exclude).unwrap();
        assert_eq!(pool.len(), 3);
        let exact = generate_planted(1, 4, 7, 0.0).unwrap();
        let pool = candidate_pool(&exact.network, &remaining, Some(2), &exclude).unwrap();
        assert_eq!(pool.len(), 7);
    }

    #[test]
    fn out_of_domain_parameters_are_rejected() {
        assert!(matches!(
            generate_planted(0, 2, 5, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_planted(0, 10, 5, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_planted(0, 5, 1, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_planted(0, 5, 5, 1.1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn csv_helpers_match_loader_formats() {
        let instance = generate_planted(2, 4, 3, 0.0).unwrap();
        let team_csv = instance.team_csv();
        assert!(team_csv.starts_with("team_id,member_id\nteam00,core00\n"));
        assert_eq!(team_csv.lines().count(), 1 + instance.team.size());
        assert_eq!(
            instance.ground_truth_csv(),
            "team_id,departed_id,joiner_id\nteam00,out00,rep00\n"
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn planted_outlier_survives_any_noise(
                seed in any::<u64>(),
                size in 3..=9usize,
                pool in 2..8usize,
                noise in 0.0..=1.0f64,
            ) {
                let instance = generate_planted(seed, size, pool, noise).unwrap();
                let index = index_of(&instance);
                let scores =
                    detect_outliers::<f64>(&instance.network, &index, &instance.team).unwrap();
                prop_assert_eq!(&scores[0].scholar, &instance.planted_outlier);
                // The outlier never gains an in-team motif partner.
                prop_assert_eq!(scores[0].higher_order, 0);
            }

            #[test]
            fn random_network_edges_respect_probability_bounds(
                seed in any::<u64>(),
                n in 2..25usize,
                prob in 0.0..=1.0f64,
            ) {
                let synth = generate_random_network(seed, n, prob, 3).unwrap();
                prop_assert_eq!(synth.network.node_count(), n);
                prop_assert!(synth.network.edge_count() <= n * (n - 1) / 2);
                let again = generate_random_network(seed, n, prob, 3).unwrap();
                prop_assert_eq!(synth.network.edge_count(), again.network.edge_count());
            }
        }
    }
}
