//! The co-citation network and the two structures derived from it: the
//! column-stochastic transition matrix used by PageRank and the thresholded
//! simple graph used by the centrality measures.

use std::collections::HashSet;
use std::io::Write;

use crate::error::{Error, Result};

/// Tolerance on column sums accepted by [`MarkovMatrix::from_rows`].
pub const COLUMN_SUM_TOLERANCE: f64 = 1e-12;

/// Symmetric matrix of co-citation counts indexed by author.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoCitationNetwork {
    authors: Vec<String>,
    counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalPolicy {
    Keep,
    #[default]
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DanglingPolicy {
    /// Replace an all-zero column by the uniform distribution.
    #[default]
    Uniform,
    Error,
}

impl CoCitationNetwork {
    pub fn new(authors: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = authors.len();
        if counts.len() != n || counts.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "co-citation matrix must be {n}x{n}"
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = authors.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(Error::InvalidInput(format!("duplicate author {dup:?}")));
        }
        for j in 0..n {
            for k in j + 1..n {
                if counts[j][k] != counts[k][j] {
                    return Err(Error::InvalidInput(format!(
                        "co-citation matrix is not symmetric at ({}, {})",
                        authors[j], authors[k]
                    )));
                }
            }
        }
        Ok(CoCitationNetwork { authors, counts })
    }

    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    pub fn index_of(&self, author: &str) -> Option<usize> {
        self.authors.iter().position(|a| a == author)
    }

    pub fn count(&self, j: usize, k: usize) -> u64 {
        self.counts[j][k]
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// Restricts and reorders the network to `authors`.
    pub fn select(&self, authors: &[String]) -> Result<Self> {
        let idx = authors
            .iter()
            .map(|a| {
                self.index_of(a)
                    .ok_or_else(|| Error::InvalidInput(format!("author {a:?} not in network")))
            })
            .collect::<Result<Vec<_>>>()?;
        let counts = idx
            .iter()
            .map(|&j| idx.iter().map(|&k| self.counts[j][k]).collect())
            .collect();
        CoCitationNetwork::new(authors.to_vec(), counts)
    }

    pub fn with_diagonal(&self, policy: DiagonalPolicy) -> Self {
        let mut out = self.clone();
        if policy == DiagonalPolicy::Zero {
            for (j, row) in out.counts.iter_mut().enumerate() {
                row[j] = 0;
            }
        }
        out
    }

    /// Column-normalizes the counts into a transition matrix.
    pub fn to_markov(&self, dangling: DanglingPolicy) -> Result<MarkovMatrix> {
        normalize_columns(&self.counts, &self.authors, dangling)
    }

    /// Unweighted graph with an edge wherever the off-diagonal count reaches `theta`.
    pub fn to_simple_graph(&self, theta: u64) -> Result<SimpleGraph> {
        if theta == 0 {
            return Err(Error::InvalidParameter(
                "edge threshold must be >= 1".into(),
            ));
        }
        let n = self.len();
        let adjacency = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&k| k != j && self.counts[j][k] >= theta)
                    .collect()
            })
            .collect();
        Ok(SimpleGraph {
            n,
            adjacency,
            theta,
        })
    }

    /// Writes the matrix as CSV with author ids labelling rows and columns.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.authors.iter().cloned());
        w.write_record(&header).map_err(Error::from)?;
        for (author, row) in self.authors.iter().zip(&self.counts) {
            let mut rec = vec![author.clone()];
            rec.extend(row.iter().map(u64::to_string));
            w.write_record(&rec).map_err(Error::from)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Divides every column of a nonnegative count matrix by its sum. Zero
/// columns are handled per `dangling`; `labels` name nodes in errors.
pub fn normalize_columns(
    counts: &[Vec<u64>],
    labels: &[String],
    dangling: DanglingPolicy,
) -> Result<MarkovMatrix> {
    let n = counts.len();
    if counts.iter().any(|r| r.len() != n) || labels.len() != n {
        return Err(Error::InvalidInput("count matrix must be square".into()));
    }
    let mut data = vec![0.0; n * n];
    let mut dangling_nodes = Vec::new();
    for k in 0..n {
        let colsum: u64 = counts.iter().map(|row| row[k]).sum();
        if colsum == 0 {
            match dangling {
                DanglingPolicy::Error => {
                    return Err(Error::DanglingNode {
                        author: labels[k].clone(),
                    })
                }
                DanglingPolicy::Uniform => {
                    dangling_nodes.push(k);
                    for j in 0..n {
                        data[j * n + k] = 1.0 / n as f64;
                    }
                }
            }
        } else {
            let colsum = colsum as f64;
            for j in 0..n {
                data[j * n + k] = counts[j][k] as f64 / colsum;
            }
        }
    }
    Ok(MarkovMatrix {
        n,
        data,
        dangling: dangling_nodes,
    })
}

/// Column-stochastic matrix, stored dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMatrix {
    n: usize,
    data: Vec<f64>,
    dangling: Vec<usize>,
}

impl MarkovMatrix {
    /// Builds a transition matrix from explicit rows, checking that entries
    /// are nonnegative and every column sums to one.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(
                "transition matrix must be square".into(),
            ));
        }
        if rows.iter().flatten().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidInput(
                "transition matrix entries must be finite and nonnegative".into(),
            ));
        }
        for k in 0..n {
            let s: f64 = rows.iter().map(|r| r[k]).sum();
            if (s - 1.0).abs() > COLUMN_SUM_TOLERANCE {
                return Err(Error::InvalidInput(format!("column {k} sums to {s}")));
            }
        }
        Ok(MarkovMatrix {
            n,
            data: rows.concat(),
            dangling: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.data[j * self.n + k]
    }

    /// Nodes whose column was patched to uniform.
    pub fn dangling(&self) -> &[usize] {
        &self.dangling
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    /// `out = T x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.row(j).iter().zip(x).map(|(t, v)| t * v).sum();
        }
    }

    pub fn column_sum(&self, k: usize) -> f64 {
        (0..self.n).map(|j| self.get(j, k)).sum()
    }
}

/// Undirected graph without self-loops, as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    theta: u64,
}

impl SimpleGraph {
    /// Graph over `n` nodes from an undirected edge list. Self-loops and
    /// repeated edges are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph {
            n,
            adjacency,
            theta: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn net(counts: Vec<Vec<u64>>) -> CoCitationNetwork {
        let authors = (0..counts.len()).map(|i| format!("a{i}")).collect();
        CoCitationNetwork::new(authors, counts).unwrap()
    }

    #[test]
    fn diagonal_policies() {
        let a = net(vec![vec![5, 1], vec![1, 3]]);
        assert_eq!(
            a.with_diagonal(DiagonalPolicy::Zero).counts(),
            [vec![0, 1], vec![1, 0]]
        );
        assert_eq!(a.with_diagonal(DiagonalPolicy::Keep), a);
        let once = a.with_diagonal(DiagonalPolicy::Zero);
        assert_eq!(once.with_diagonal(DiagonalPolicy::Zero), once);
    }

    #[test]
    fn rejects_asymmetric_and_duplicate() {
        assert!(
            CoCitationNetwork::new(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![2, 0]])
                .is_err()
        );
        assert!(
            CoCitationNetwork::new(vec!["a".into(), "a".into()], vec![vec![0, 1], vec![1, 0]])
                .is_err()
        );
        assert!(CoCitationNetwork::new(vec!["a".into()], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn normalizes_single_entry_columns() {
        let t = net(vec![vec![0, 2], vec![2, 0]])
            .to_markov(DanglingPolicy::Uniform)
            .unwrap();
        assert_eq!(t.row(0), [0.0, 1.0]);
        assert_eq!(t.row(1), [1.0, 0.0]);
        assert!(t.dangling().is_empty());
    }

    #[test]
    fn dangling_column_is_patched_or_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let t =
            normalize_columns(&[vec![0, 0], vec![3, 0]], &labels, DanglingPolicy::Uniform).unwrap();
        assert_eq!(t.dangling(), [1]);
        assert_eq!((t.get(0, 1), t.get(1, 1)), (0.5, 0.5));
        assert_eq!((t.get(0, 0), t.get(1, 0)), (0.0, 1.0));
        match normalize_columns(&[vec![0, 0], vec![3, 0]], &labels, DanglingPolicy::Error) {
            Err(Error::DanglingNode { author }) => assert_eq!(author, "b"),
            other => panic!("unexpected {other:?}"),
        }

        let a = net(vec![vec![0, 0, 0], vec![0, 0, 3], vec![0, 3, 0]]);
        let t = a.to_markov(DanglingPolicy::Uniform).unwrap();
        assert_eq!(t.dangling(), [0]);
        assert!(a.to_markov(DanglingPolicy::Error).is_err());
    }

    #[test]
    fn simple_graph_threshold() {
        let a = net(vec![vec![0, 3], vec![3, 0]]);
        assert!(a.to_simple_graph(1).unwrap().has_edge(0, 1));
        assert!(!a.to_simple_graph(4).unwrap().has_edge(0, 1));
        assert!(a.to_simple_graph(0).is_err());
        let full = net(vec![vec![9; 5]; 5]).to_simple_graph(1).unwrap();
        assert_eq!(full.edge_count(), 10);
        assert!((0..5).all(|i| !full.has_edge(i, i)));
    }

    #[test]
    fn select_reorders() {
        let a = net(vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 5, 6]]);
        let s = a.select(&["a2".into(), "a0".into()]).unwrap();
        assert_eq!(s.counts(), [vec![6, 3], vec![3, 1]]);
        assert!(a.select(&["zz".into()]).is_err());
    }

    #[test]
    fn matrix_dump() {
        let mut buf = Vec::new();
        net(vec![vec![0, 2], vec![2, 1]])
            .write_csv(&mut buf)
            .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), ",a0,a1\na0,0,2\na1,2,1\n");
    }

    fn symmetric_counts(max_n: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(0u64..6, n * n).prop_map(move |flat| {
                let mut m = vec![vec![0; n]; n];
                for j in 0..n {
                    for k in j..n {
                        m[j][k] = flat[j * n + k];
                        m[k][j] = flat[j * n + k];
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn columns_sum_to_one(counts in symmetric_counts(6), keep in any::<bool>()) {
            let policy = if keep { DiagonalPolicy::Keep } else { DiagonalPolicy::Zero };
            let t = net(counts).with_diagonal(policy).to_markov(DanglingPolicy::Uniform).unwrap();
            for k in 0..t.len() {
                prop_assert!((t.column_sum(k) - 1.0).abs() <= 1e-12);
                prop_assert!(t.row(k).iter().all(|&v| v >= 0.0));
            }
        }

        #[test]
        fn markov_is_scale_invariant(counts in symmetric_counts(6), c in 1u64..50) {
            let a = net(counts.clone());
            let scaled = net(counts.iter().map(|r| r.iter().map(|v| v * c).collect()).collect());
            let t1 = a.to_markov(DanglingPolicy::Uniform).unwrap();
            let t2 = scaled.to_markov(DanglingPolicy::Uniform).unwrap();
            for j in 0..t1.len() {
                for k in 0..t1.len() {
                    prop_assert!((t1.get(j, k) - t2.get(j, k)).abs() <= 1e-15);
                }
            }
        }

        #[test]
        fn simple_graph_is_symmetric_and_loop_free(counts in symmetric_counts(7), theta in 1u64..4) {
            let a = net(counts);
            let g = a.to_simple_graph(theta).unwrap();
            for j in 0..g.len() {
                prop_assert!(!g.has_edge(j, j));
                for k in 0..g.len() {
                    prop_assert_eq!(g.has_edge(j, k), g.has_edge(k, j));
                    if j != k {
                        prop_assert_eq!(g.has_edge(j, k), a.count(j, k) >= theta);
                    }
                }
            }
        }
    }
}
