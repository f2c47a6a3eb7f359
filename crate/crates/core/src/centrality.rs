//! Degree, closeness and betweenness centrality on the unweighted
//! co-citation graph.
//!
//! Closeness is the sum of reciprocal geodesic distances (harmonic form), so
//! unreachable nodes contribute nothing and disconnected graphs stay finite.
//! Betweenness is unnormalized and counts each unordered pair once.

use std::collections::VecDeque;
use std::fmt;

use crate::graph::SimpleGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Degree => "degree",
            Measure::Closeness => "closeness",
            Measure::Betweenness => "betweenness",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult {
    pub measure: Measure,
    pub values: Vec<f64>,
    /// Edge threshold of the graph the values were computed on.
    pub theta: u64,
}

pub fn degree_centrality(g: &SimpleGraph) -> CentralityResult {
    CentralityResult {
        measure: Measure::Degree,
        values: (0..g.len()).map(|i| g.neighbors(i).len() as f64).collect(),
        theta: g.theta(),
    }
}

pub fn closeness_centrality(g: &SimpleGraph) -> CentralityResult {
    let n = g.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let values = (0..n)
        .map(|source| {
            bfs(g, source, &mut dist, &mut queue);
            (0..n)
                .filter(|&j| j != source && dist[j] != usize::MAX)
                .map(|j| 1.0 / dist[j] as f64)
                .sum()
        })
        .collect();
    CentralityResult {
        measure: Measure::Closeness,
        values,
        theta: g.theta(),
    }
}

fn bfs(g: &SimpleGraph, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Brandes' dependency accumulation, one BFS per source.
pub fn betweenness_centrality(g: &SimpleGraph) -> CentralityResult {
    let n = g.len();
    let mut values = vec![0.0; n];

    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        preds.iter_mut().for_each(Vec::clear);
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                values[w] += delta[w];
            }
        }
    }
    // every unordered pair was visited from both ends
    for v in &mut values {
        *v /= 2.0;
    }
    CentralityResult {
        measure: Measure::Betweenness,
        values,
        theta: g.theta(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> SimpleGraph {
        SimpleGraph::from_edges(3, &[(0, 1), (1, 2)])
    }

    fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        SimpleGraph::from_edges(n, &edges)
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_centrality(&path3()).values, [1.0, 2.0, 1.0]);
        assert_eq!(
            degree_centrality(&SimpleGraph::from_edges(4, &[])).values,
            [0.0; 4]
        );
        assert_eq!(degree_centrality(&complete(5)).values, [4.0; 5]);
    }

    #[test]
    fn closeness_examples() {
        assert_eq!(closeness_centrality(&path3()).values, [1.5, 2.0, 1.5]);
        let isolated = SimpleGraph::from_edges(3, &[(0, 1)]);
        assert_eq!(closeness_centrality(&isolated).values[2], 0.0);
        assert_eq!(closeness_centrality(&complete(4)).values, [3.0; 4]);
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(betweenness_centrality(&path3()).values, [0.0, 1.0, 0.0]);
        let cycle = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(betweenness_centrality(&cycle).values, [0.5; 4]);
        let star = SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(
            betweenness_centrality(&star).values,
            [6.0, 0.0, 0.0, 0.0, 0.0]
        );
        let split = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(betweenness_centrality(&split).values, [0.0; 4]);
    }

    fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect();
            let m = pairs.len();
            prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                let edges = pairs
                    .iter()
                    .zip(keep)
                    .filter_map(|(e, k)| k.then_some(*e))
                    .collect();
                (n, edges)
            })
        })
    }

    proptest! {
        #[test]
        fn measures_are_permutation_equivariant(
            (n, edges) in graph_strategy(),
            seed in any::<u64>(),
        ) {
            // simple deterministic shuffle from the seed
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                perm.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let g = SimpleGraph::from_edges(n, &edges);
            let mapped: Vec<_> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
            let h = SimpleGraph::from_edges(n, &mapped);
            for f in [degree_centrality, closeness_centrality, betweenness_centrality] {
                let a = f(&g).values;
                let b = f(&h).values;
                for i in 0..n {
                    prop_assert!((a[i] - b[perm[i]]).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn adding_an_edge_never_lowers_degree((n, edges) in graph_strategy(), a in 0usize..8, b in 0usize..8) {
            prop_assume!(a < n && b < n);
            let before = degree_centrality(&SimpleGraph::from_edges(n, &edges)).values;
            let mut more = edges.clone();
            more.push((a, b));
            let after = degree_centrality(&SimpleGraph::from_edges(n, &more)).values;
            for i in 0..n {
                prop_assert!(after[i] >= before[i]);
            }
        }

        #[test]
        fn betweenness_nonnegative_and_closeness_positive_when_connected((n, edges) in graph_strategy()) {
            let g = SimpleGraph::from_edges(n, &edges);
            prop_assert!(betweenness_centrality(&g).values.iter().all(|&v| v >= 0.0));
            let close = closeness_centrality(&g).values;
            let connected = n > 1 && {
                let mut dist = vec![usize::MAX; n];
                bfs(&g, 0, &mut dist, &mut VecDeque::new());
                dist.iter().all(|&d| d != usize::MAX)
            };
            if connected {
                prop_assert!(close.iter().all(|&v| v > 0.0));
            }
        }
    }
}
