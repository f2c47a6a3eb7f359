//! Ranking measures addressable by label, e.g. `PR(.55)`, `PR_c(.15)`, `Degree`.

use std::collections::HashMap;
use std::fmt;

use cocite_core::centrality;
use cocite_core::pagerank::{
    self, Method, PageRankResult, WeightKind, WeightSource, PRESET_DAMPINGS,
};
use cocite_core::scores::{ranks_from_scores, Direction, Ranking};

use crate::error::{CliError, CliResult};
use crate::pipeline::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureSpec {
    PageRank { weight: WeightKind, damping: f64 },
    Degree,
    Betweenness,
    Closeness,
    HIndex,
    Citation,
}

const PR_PREFIXES: [(&str, WeightKind); 4] = [
    ("PR_c(", WeightKind::Citations),
    ("PR_p(", WeightKind::Publications),
    ("PR_w(", WeightKind::Custom),
    ("PR(", WeightKind::Uniform),
];

pub const VALID_LABELS: &str =
    "PR(<d>), PR_c(<d>), PR_p(<d>), PR_w(<d>) for d in [0,1), Degree, Betweenness, Closeness, h-index, Citation";

/// `0.15` -> `.15`
pub fn short_damping(d: f64) -> String {
    let s = d.to_string();
    match s.strip_prefix('0') {
        Some(rest) if rest.starts_with('.') => rest.to_string(),
        _ => s,
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::PageRank { weight, damping } => {
                let prefix = PR_PREFIXES
                    .iter()
                    .find(|(_, k)| k == weight)
                    .map(|(p, _)| *p)
                    .expect("every weight kind has a prefix");
                write!(f, "{prefix}{})", short_damping(*damping))
            }
            MeasureSpec::Degree => f.write_str("Degree"),
            MeasureSpec::Betweenness => f.write_str("Betweenness"),
            MeasureSpec::Closeness => f.write_str("Closeness"),
            MeasureSpec::HIndex => f.write_str("h-index"),
            MeasureSpec::Citation => f.write_str("Citation"),
        }
    }
}

impl MeasureSpec {
    pub fn parse(label: &str) -> CliResult<Self> {
        let label = label.trim();
        let unknown = || {
            CliError::config(format!(
                "unknown measure {label:?}; valid labels: {VALID_LABELS}"
            ))
        };
        for (prefix, weight) in PR_PREFIXES {
            let matches =
                label.len() > prefix.len() && label[..prefix.len()].eq_ignore_ascii_case(prefix);
            if !matches {
                continue;
            }
            let inner = label[prefix.len()..]
                .strip_suffix(')')
                .ok_or_else(unknown)?;
            let normalized = if inner.starts_with('.') {
                format!("0{inner}")
            } else {
                inner.to_string()
            };
            let damping: f64 = normalized.parse().map_err(|_| unknown())?;
            pagerank::validate_damping(damping)?;
            return Ok(MeasureSpec::PageRank { weight, damping });
        }
        match label.to_ascii_lowercase().as_str() {
            "degree" => Ok(MeasureSpec::Degree),
            "betweenness" => Ok(MeasureSpec::Betweenness),
            "closeness" => Ok(MeasureSpec::Closeness),
            "h-index" | "hindex" | "h_index" => Ok(MeasureSpec::HIndex),
            "citation" | "citations" => Ok(MeasureSpec::Citation),
            _ => Err(unknown()),
        }
    }

    pub fn parse_list(list: &str) -> CliResult<Vec<Self>> {
        list.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(MeasureSpec::parse)
            .collect()
    }

    /// PR, PR_c and PR_p at 0.15/0.55/0.85, then the centralities, h-index
    /// and citation count.
    pub fn default_selection() -> Vec<Self> {
        let mut out = Vec::new();
        for weight in [
            WeightKind::Uniform,
            WeightKind::Citations,
            WeightKind::Publications,
        ] {
            for damping in PRESET_DAMPINGS {
                out.push(MeasureSpec::PageRank { weight, damping });
            }
        }
        out.extend([
            MeasureSpec::Degree,
            MeasureSpec::Betweenness,
            MeasureSpec::Closeness,
            MeasureSpec::HIndex,
            MeasureSpec::Citation,
        ]);
        out
    }
}

/// Computes measures over a model, caching PageRank solves.
pub struct Evaluator<'m> {
    model: &'m Model,
    pagerank: HashMap<(WeightKind, u64), PageRankResult>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator {
            model,
            pagerank: HashMap::new(),
        }
    }

    fn weight_source(&self, kind: WeightKind) -> CliResult<WeightSource> {
        Ok(match kind {
            WeightKind::Uniform => WeightSource::Uniform,
            WeightKind::Citations => WeightSource::Citations,
            WeightKind::Publications => WeightSource::Publications,
            WeightKind::Custom => match &self.model.weight {
                w @ WeightSource::Custom(_) => w.clone(),
                _ => {
                    return Err(CliError::config(
                        "PR_w measures need --weight custom:<path>",
                    ))
                }
            },
        })
    }

    pub fn pagerank(
        &mut self,
        kind: WeightKind,
        damping: f64,
        method: Method,
    ) -> CliResult<&PageRankResult> {
        let key = (kind, damping.to_bits());
        if !self.pagerank.contains_key(&key) || self.pagerank[&key].method != method {
            let model = self.model;
            let source = self.weight_source(kind)?;
            let teleport = pagerank::make_teleport(&source, &model.corpus.stats, model.authors())?;
            let result = match method {
                Method::Power => {
                    pagerank::power_iterate(&model.transition, damping, &teleport, model.options)
                }
                Method::Direct => {
                    pagerank::steady_state_direct(&model.transition, damping, &teleport)
                }
            }
            .map_err(|e| cocite_core::Error::AtDamping {
                damping,
                source: Box::new(e),
            })?;
            self.pagerank.insert(key, result);
        }
        Ok(&self.pagerank[&key])
    }

    pub fn scores(&mut self, spec: MeasureSpec) -> CliResult<Vec<f64>> {
        let model = self.model;
        let stat =
            |f: fn(&cocite_core::ingest::AuthorStats) -> f64| -> CliResult<Vec<f64>> {
                model
                    .authors()
                    .iter()
                    .map(|a| {
                        model.corpus.stats.get(a).map(f).ok_or_else(|| {
                            CliError::input(format!("no statistics for author {a:?}"))
                        })
                    })
                    .collect()
            };
        Ok(match spec {
            MeasureSpec::PageRank { weight, damping } => {
                let method = model.primary_method();
                self.pagerank(weight, damping, method)?.scores.clone()
            }
            MeasureSpec::Degree => centrality::degree_centrality(&model.graph).values,
            MeasureSpec::Betweenness => centrality::betweenness_centrality(&model.graph).values,
            MeasureSpec::Closeness => centrality::closeness_centrality(&model.graph).values,
            MeasureSpec::HIndex => stat(|s| s.h_index() as f64)?,
            MeasureSpec::Citation => stat(|s| s.citation_count as f64)?,
        })
    }

    pub fn ranking(&mut self, spec: MeasureSpec) -> CliResult<Ranking> {
        let scores = self.scores(spec)?;
        Ok(ranks_from_scores(
            &scores,
            Direction::HigherIsBetter,
            spec.to_string(),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for spec in MeasureSpec::default_selection() {
            assert_eq!(MeasureSpec::parse(&spec.to_string()).unwrap(), spec);
        }
        let labels: Vec<String> = MeasureSpec::default_selection()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(
            labels,
            [
                "PR(.15)",
                "PR(.55)",
                "PR(.85)",
                "PR_c(.15)",
                "PR_c(.55)",
                "PR_c(.85)",
                "PR_p(.15)",
                "PR_p(.55)",
                "PR_p(.85)",
                "Degree",
                "Betweenness",
                "Closeness",
                "h-index",
                "Citation"
            ]
        );
    }

    #[test]
    fn parses_variants() {
        assert_eq!(
            MeasureSpec::parse("pr(0.005)").unwrap(),
            MeasureSpec::PageRank {
                weight: WeightKind::Uniform,
                damping: 0.005
            }
        );
        assert_eq!(MeasureSpec::parse(" degree ").unwrap(), MeasureSpec::Degree);
        assert_eq!(MeasureSpec::parse("PR(1)").unwrap_err().exit_code(), 3);
        let err = MeasureSpec::parse("Katz").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("h-index"));
        assert_eq!(
            MeasureSpec::parse_list("Degree,,Citation").unwrap().len(),
            2
        );
    }

    #[test]
    fn short_damping_labels() {
        assert_eq!(short_damping(0.15), ".15");
        assert_eq!(short_damping(0.005), ".005");
        assert_eq!(short_damping(0.0), "0");
    }
}
