//! Clique-motif enumeration over the collaboration network.
//!
//! A motif is a set of `k` scholars who are pairwise connected. The index
//! stores every instance once (members sorted ascending) and answers the two
//! queries the familiarity scores need: does a pair of scholars share an
//! instance, and how many distinct partners does a scholar have.

use std::collections::BTreeSet;
use std::io::Write;

use crate::corpus::CollaborationNetwork;
use crate::error::{Error, Result};

/// All `k`-clique instances of a network, plus per-scholar partner sets.
#[derive(Debug, Clone)]
pub struct MotifIndex {
    k: usize,
    /// Each instance is a strictly ascending list of node indices.
    instances: Vec<Vec<usize>>,
    /// `partners[i]` = distinct scholars sharing at least one instance with `i`.
    partners: Vec<BTreeSet<usize>>,
}

/// Options for [`enumerate_motifs`].
#[derive(Debug, Clone, Copy)]
pub struct MotifOptions {
    /// Clique size; must be at least 2.
    pub k: usize,
    /// Enumeration aborts once more than this many instances exist.
    pub instance_cap: usize,
}

impl Default for MotifOptions {
    fn default() -> Self {
        Self {
            k: 3,
            instance_cap: 10_000_000,
        }
    }
}

/// Enumerate every `k`-clique of the network.
///
/// Expansion follows a degeneracy-style order: a vertex only extends cliques
/// of vertices ranked before it (rank = degree, ties by index), so each clique
/// is produced exactly once. Candidate sets shrink by sorted-list
/// intersection, keeping the work proportional to the neighborhoods actually
/// explored. Exceeding `instance_cap` aborts with an error rather than
/// exhausting memory.
pub fn enumerate_motifs(
    network: &CollaborationNetwork,
    options: MotifOptions,
) -> Result<MotifIndex> {
    if options.k < 2 {
        return Err(Error::InvalidParameter(format!(
            "motif size must be at least 2, got {}",
            options.k
        )));
    }
    let n = network.node_count();

    // rank[v] < rank[u] means v comes first in the expansion order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&v| (network.degree(v), v));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    // Forward adjacency: neighbors with higher rank, sorted by node index.
    let mut forward: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        for &(u, _) in network.neighbors(v) {
            if rank[u] > rank[v] {
                forward[v].push(u);
            }
        }
    }

    let mut instances: Vec<Vec<usize>> = Vec::new();
    let mut clique = Vec::with_capacity(options.k);
    for v in 0..n {
        clique.push(v);
        extend(
            &forward,
            &mut clique,
            &forward[v],
            options.k,
            options.instance_cap,
            &mut instances,
        )?;
        clique.pop();
    }

    let mut partners: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for instance in &instances {
        for &a in instance {
            for &b in instance {
                if a != b {
                    partners[a].insert(b);
                }
            }
        }
    }

    for instance in &mut instances {
        instance.sort_unstable();
    }
    instances.sort_unstable();

    Ok(MotifIndex {
        k: options.k,
        instances,
        partners,
    })
}

fn extend(
    forward: &[Vec<usize>],
    clique: &mut Vec<usize>,
    candidates: &[usize],
    k: usize,
    cap: usize,
    instances: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if clique.len() == k {
        if instances.len() >= cap {
            return Err(Error::MotifCapExceeded { cap });
        }
        instances.push(clique.clone());
        return Ok(());
    }
    for &v in candidates {
        // Candidates adjacent to every clique member and ranked after v:
        // cliques are therefore built in strictly increasing rank order,
        // which makes each one appear exactly once.
        let narrowed = intersect_sorted(candidates, &forward[v]);
        if clique.len() + 1 + narrowed.len() < k {
            continue;
        }
        clique.push(v);
        extend(forward, clique, &narrowed, k, cap, instances)?;
        clique.pop();
    }
    Ok(())
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl MotifIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    /// Instances as sorted node-index lists, in lexicographic order.
    pub fn instances(&self) -> &[Vec<usize>] {
        &self.instances
    }

    /// Whether scholars `i` and `j` co-occur in at least one instance.
    ///
    /// Asking about a scholar and themselves is a caller bug, as is an index
    /// outside the network; both are reported as errors.
    pub fn multi_col(&self, i: usize, j: usize) -> Result<bool> {
        let n = self.partners.len();
        if i >= n || j >= n {
            return Err(Error::InvalidParameter(format!(
                "scholar index {} out of range for network of {} nodes",
                i.max(j),
                n
            )));
        }
        if i == j {
            return Err(Error::InvalidParameter(
                "motif co-membership is defined for distinct scholars".to_string(),
            ));
        }
        Ok(self.partners[i].contains(&j))
    }

    /// Number of distinct scholars sharing at least one instance with `i`.
    pub fn partner_count(&self, i: usize) -> usize {
        self.partners[i].len()
    }

    /// Partners of `i` as ascending node indices.
    pub fn partners(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.partners[i].iter().copied()
    }

    /// Write instances as CSV with header `member_1,...,member_k`, scholar
    /// ids within a row ascending, rows in lexicographic id order.
    pub fn write_csv<W: Write>(&self, network: &CollaborationNetwork, mut out: W) -> Result<()> {
        let header: Vec<String> = (1..=self.k).map(|i| format!("member_{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        let mut rows: Vec<Vec<&str>> = self
            .instances
            .iter()
            .map(|instance| {
                let mut ids: Vec<&str> =
                    instance.iter().map(|&v| network.scholar_id(v)).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        rows.sort_unstable();
        for row in rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_network, IngestConfig, PublicationRecord, PublicationSet, YearWindow};

    fn network_from_edges(edges: &[(&str, &str)]) -> CollaborationNetwork {
        let records: Vec<PublicationRecord> = edges
            .iter()
            .enumerate()
            .map(|(i, (a, b))| PublicationRecord {
                id: format!("p{i}"),
                year: 2007,
                authors: vec![a.to_string(), b.to_string()],
                skills: vec![],
            })
            .collect();
        build_network(
            &PublicationSet::new(records),
            YearWindow::new(2005, 2012).unwrap(),
            &IngestConfig::default(),
        )
    }

    fn ids(network: &CollaborationNetwork, instance: &[usize]) -> Vec<String> {
        instance
            .iter()
            .map(|&v| network.scholar_id(v).to_string())
            .collect()
    }

    #[test]
    fn triangle_produces_single_instance() {
        let net = network_from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        assert_eq!(index.instance_count(), 1);
        assert_eq!(ids(&net, &index.instances()[0]), vec!["a", "b", "c"]);
    }

    #[test]
    fn four_clique_contains_four_triangles() {
        let net = network_from_edges(&[
            ("a", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        assert_eq!(index.instance_count(), 4);
        for v in 0..net.node_count() {
            assert_eq!(index.partner_count(v), 3);
        }
    }

    #[test]
    fn path_has_no_triangles() {
        let net = network_from_edges(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        assert_eq!(index.instance_count(), 0);
        for v in 0..net.node_count() {
            assert_eq!(index.partner_count(v), 0);
        }
    }

    #[test]
    fn diamond_shares_partners_through_distinct_triangles() {
        // Two triangles glued on edge b-c; a and d are not adjacent.
        let net = network_from_edges(&[
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        assert_eq!(index.instance_count(), 2);
        let a = net.node_index("a").unwrap();
        let d = net.node_index("d").unwrap();
        let b = net.node_index("b").unwrap();
        assert!(!index.multi_col(a, d).unwrap());
        assert!(index.multi_col(a, b).unwrap());
        assert_eq!(index.partner_count(b), 3);
        assert_eq!(index.partner_count(a), 2);
    }

    #[test]
    fn k_four_on_five_clique() {
        let names = ["a", "b", "c", "d", "e"];
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((names[i], names[j]));
            }
        }
        let net = network_from_edges(&edges);
        let index = enumerate_motifs(
            &net,
            MotifOptions {
                k: 4,
                ..MotifOptions::default()
            },
        )
        .unwrap();
        // C(5,4) = 5 four-cliques.
        assert_eq!(index.instance_count(), 5);
        assert!(index.instances().iter().all(|inst| inst.len() == 4));
        for v in 0..5 {
            assert_eq!(index.partner_count(v), 4);
        }
    }

    #[test]
    fn cap_aborts_enumeration() {
        let net = network_from_edges(&[
            ("a", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ]);
        let result = enumerate_motifs(
            &net,
            MotifOptions {
                instance_cap: 3,
                ..MotifOptions::default()
            },
        );
        assert!(matches!(result, Err(Error::MotifCapExceeded { cap: 3 })));
    }

    #[test]
    fn self_query_is_rejected() {
        let net = network_from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        assert!(index.multi_col(0, 0).is_err());
        assert!(index.multi_col(0, 99).is_err());
    }

    #[test]
    fn undersized_k_is_rejected() {
        let net = network_from_edges(&[("a", "b")]);
        let result = enumerate_motifs(
            &net,
            MotifOptions {
                k: 1,
                ..MotifOptions::default()
            },
        );
        assert!(matches!(result, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn csv_export_lists_sorted_rows() {
        let net = network_from_edges(&[
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ]);
        let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
        let mut buffer = Vec::new();
        index.write_csv(&net, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert_eq!(text, "member_1,member_2,member_3\na,b,c\nb,c,d\n");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Build a network over `n` nodes from an edge-presence bitmask.
        fn mask_network(n: usize, mask: u64) -> CollaborationNetwork {
            let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
            let mut edges = Vec::new();
            let mut bit = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if mask >> bit & 1 == 1 {
                        edges.push((names[i].as_str(), names[j].as_str()));
                    }
                    bit += 1;
                }
            }
            // An isolated-vertex record keeps every node in the network.
            let mut records: Vec<PublicationRecord> = edges
                .iter()
                .enumerate()
                .map(|(i, (a, b))| PublicationRecord {
                    id: format!("p{i}"),
                    year: 2007,
                    authors: vec![a.to_string(), b.to_string()],
                    skills: vec![],
                })
                .collect();
            for (i, name) in names.iter().enumerate() {
                records.push(PublicationRecord {
                    id: format!("s{i}"),
                    year: 2007,
                    authors: vec![name.clone()],
                    skills: vec![],
                });
            }
            build_network(
                &PublicationSet::new(records),
                YearWindow::new(2005, 2012).unwrap(),
                &IngestConfig::default(),
            )
        }

        fn brute_force_triangles(net: &CollaborationNetwork) -> usize {
            let n = net.node_count();
            let mut count = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for l in (j + 1)..n {
                        if net.has_edge(i, j) && net.has_edge(j, l) && net.has_edge(i, l) {
                            count += 1;
                        }
                    }
                }
            }
            count
        }

        proptest! {
            #[test]
            fn triangle_count_matches_brute_force(n in 3usize..8, mask in any::<u64>()) {
                let net = mask_network(n, mask);
                let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
                prop_assert_eq!(index.instance_count(), brute_force_triangles(&net));
            }

            #[test]
            fn partner_relation_is_symmetric(n in 3usize..8, mask in any::<u64>()) {
                let net = mask_network(n, mask);
                let index = enumerate_motifs(&net, MotifOptions::default()).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            prop_assert_eq!(
                                index.multi_col(i, j).unwrap(),
                                index.multi_col(j, i).unwrap()
                            );
                        }
                    }
                }
            }

            #[test]
            fn adding_an_edge_never_removes_instances(
                n in 3usize..7,
                mask in any::<u64>(),
                extra in 0usize..21,
            ) {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .collect();
                let extra = extra % pairs.len();
                let augmented = mask | (1u64 << extra);
                let base = enumerate_motifs(&mask_network(n, mask), MotifOptions::default()).unwrap();
                let more = enumerate_motifs(&mask_network(n, augmented), MotifOptions::default()).unwrap();
                prop_assert!(more.instance_count() >= base.instance_count());
                for instance in base.instances() {
                    prop_assert!(more.instances().contains(instance));
                }
            }
        }
    }
}
