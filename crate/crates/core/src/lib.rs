//! Author co-citation analysis.
//!
//! Builds a co-citation network from citation records ([`ingest`]), turns it
//! into a column-stochastic transition matrix and an unweighted graph
//! ([`graph`]), and ranks authors by PageRank with any damping factor and
//! teleport weighting ([`pagerank`]), by centrality ([`centrality`]), and by
//! citation count and h-index. Rankings are compared with Spearman's
//! correlation ([`scores`]).

pub mod centrality;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod pagerank;
pub mod report;
pub mod scores;

pub use error::{Error, Result};
