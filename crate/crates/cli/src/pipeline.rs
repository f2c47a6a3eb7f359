//! Input loading and model preparation shared by all commands.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use cocite_core::graph::{CoCitationNetwork, MarkovMatrix, SimpleGraph};
use cocite_core::ingest::{self, normalize_author, AuthorStats, InputFormat, PairCounting};
use cocite_core::pagerank::{self, Method, SolveOptions, WeightSource};

use crate::args::{InputArgs, MethodArg, ModelArgs};
use crate::error::{CliError, CliResult};

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub papers: Option<usize>,
    pub citation_pairs: Option<u64>,
    pub authors: usize,
    pub selected: usize,
}

/// The selected authors, ordered by citation count, with their network.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub network: CoCitationNetwork,
    pub stats: BTreeMap<String, AuthorStats>,
    pub summary: CorpusSummary,
}

impl Corpus {
    pub fn authors(&self) -> &[String] {
        self.network.authors()
    }
}

pub fn load_corpus(args: &InputArgs) -> CliResult<Corpus> {
    let extra_stats = match &args.stats {
        Some(path) => Some(ingest::load_stats(open(path)?)?),
        None => None,
    };
    match args.format {
        InputFormat::PapersCsv => {
            let papers = ingest::parse_papers(open(&args.input)?)?;
            let mut stats = ingest::accumulate_stats(&papers);
            if let Some(extra) = extra_stats {
                stats.extend(extra);
            }
            let authors = ingest::select_top_authors(stats.values(), args.threshold);
            if authors.is_empty() {
                return Err(CliError::input(format!(
                    "no author is cited more than {} times",
                    args.threshold
                )));
            }
            let counting = if args.pair_multiplicity {
                PairCounting::Multiplicity
            } else {
                PairCounting::PerPaper
            };
            let network = ingest::build_cocitation_with(&papers, &authors, counting)?;
            let summary = CorpusSummary {
                papers: Some(papers.len()),
                citation_pairs: Some(papers.iter().map(|p| p.cited.len() as u64).sum()),
                authors: stats.len(),
                selected: authors.len(),
            };
            Ok(Corpus {
                network,
                stats,
                summary,
            })
        }
        InputFormat::EdgesCsv => {
            if args.pair_multiplicity {
                return Err(CliError::config(
                    "--pair-multiplicity applies to papers-csv input only",
                ));
            }
            let raw = ingest::load_edges(open(&args.input)?)?;
            let stats = extra_stats.unwrap_or_else(|| ingest::stats_from_diagonal(&raw));
            let members = raw
                .authors()
                .iter()
                .map(|a| {
                    stats
                        .get(a)
                        .ok_or_else(|| CliError::input(format!("no statistics for author {a:?}")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let order = ingest::order_by_citations(members);
            let network = raw.select(&order)?;
            let summary = CorpusSummary {
                papers: None,
                citation_pairs: None,
                authors: network.len(),
                selected: network.len(),
            };
            Ok(Corpus {
                network,
                stats,
                summary,
            })
        }
        InputFormat::StatsCsv => Err(CliError::config(
            "stats-csv input has no co-citation network; pass it with --stats next to edges-csv or papers-csv",
        )),
    }
}

/// Corpus statistics for `ingest-check`, which also accepts stats-csv alone.
pub fn check_input(args: &InputArgs) -> CliResult<CorpusSummary> {
    if args.format == InputFormat::StatsCsv {
        let stats = ingest::load_stats(open(&args.input)?)?;
        let selected = ingest::select_top_authors(stats.values(), args.threshold).len();
        return Ok(CorpusSummary {
            papers: None,
            citation_pairs: None,
            authors: stats.len(),
            selected,
        });
    }
    Ok(load_corpus(args)?.summary)
}

/// Parses `--d` values: single factors or `start:end:step` grids. No values
/// means the default 0.05..0.95 grid.
pub fn parse_dampings(values: &[String]) -> CliResult<Vec<f64>> {
    if values.is_empty() {
        return Ok(pagerank::default_grid());
    }
    let mut out = Vec::new();
    for v in values {
        let parts: Vec<&str> = v.split(':').collect();
        let num = |s: &str| -> CliResult<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("invalid damping value {s:?}")))
        };
        match parts.as_slice() {
            [single] => {
                let d = num(single)?;
                pagerank::validate_damping(d)?;
                out.push(d);
            }
            [start, end, step] => {
                out.extend(pagerank::damping_grid(num(start)?, num(end)?, num(step)?)?);
            }
            _ => return Err(CliError::config(format!("invalid damping spec {v:?}"))),
        }
    }
    Ok(out)
}

/// Parses `--weight`. A custom file is CSV with header `author_id,weight`.
pub fn parse_weight(spec: &str) -> CliResult<WeightSource> {
    match spec {
        "uniform" => Ok(WeightSource::Uniform),
        "citations" => Ok(WeightSource::Citations),
        "publications" => Ok(WeightSource::Publications),
        other => match other.strip_prefix("custom:") {
            Some(path) => load_custom_weights(Path::new(path)).map(WeightSource::Custom),
            None => Err(CliError::config(format!(
                "unknown weight {other:?} (expected uniform, citations, publications or custom:<path>)"
            ))),
        },
    }
}

fn load_custom_weights(path: &Path) -> CliResult<HashMap<String, f64>> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let headers = rdr.headers()?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["author_id", "weight"] {
        return Err(CliError::input(format!(
            "{}: expected header `author_id,weight`",
            path.display()
        )));
    }
    let mut weights = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let weight: f64 = record[1].trim().parse().map_err(|_| {
            CliError::input(format!(
                "{}: line {line}: invalid weight {:?}",
                path.display(),
                &record[1]
            ))
        })?;
        weights.insert(normalize_author(&record[0]), weight);
    }
    Ok(weights)
}

/// Network-derived structures and solver settings for one run.
#[derive(Debug, Clone)]
pub struct Model {
    pub corpus: Corpus,
    /// Network after the diagonal policy.
    pub network: CoCitationNetwork,
    pub transition: MarkovMatrix,
    pub graph: SimpleGraph,
    pub options: SolveOptions,
    pub method: MethodArg,
    pub weight: WeightSource,
    pub dampings: Vec<f64>,
}

impl Model {
    pub fn build(corpus: Corpus, args: &ModelArgs) -> CliResult<Self> {
        if !args.tol.is_finite() || args.tol <= 0.0 {
            return Err(CliError::config(format!(
                "--tol {} must be positive",
                args.tol
            )));
        }
        if args.theta == 0 {
            return Err(CliError::config("--theta must be >= 1"));
        }
        if args.max_iter == Some(0) {
            return Err(CliError::config("--max-iter must be >= 1"));
        }
        if args.stability_slack.is_nan() || args.stability_slack < 0.0 {
            return Err(CliError::config("--stability-slack must be >= 0"));
        }
        let dampings = parse_dampings(&args.damping)?;
        let weight = parse_weight(&args.weight)?;
        let network = corpus.network.with_diagonal(args.diagonal.into());
        let transition = network.to_markov(args.dangling.into())?;
        let graph = network.to_simple_graph(args.theta)?;
        Ok(Model {
            corpus,
            network,
            transition,
            graph,
            options: SolveOptions {
                tol: args.tol,
                max_iter: args.max_iter,
            },
            method: args.method,
            weight,
            dampings,
        })
    }

    pub fn authors(&self) -> &[String] {
        self.corpus.authors()
    }

    /// Solver used where a single answer is needed.
    pub fn primary_method(&self) -> Method {
        match self.method {
            MethodArg::Direct => Method::Direct,
            MethodArg::Power | MethodArg::Both => Method::Power,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn damping_specs() {
        assert_eq!(parse_dampings(&[]).unwrap().len(), 10);
        assert_eq!(
            parse_dampings(&strings(&["0.85", "0"])).unwrap(),
            [0.85, 0.0]
        );
        assert_eq!(
            parse_dampings(&strings(&["0.15:0.35:0.1"])).unwrap(),
            [0.15, 0.25, 0.35]
        );
        assert_eq!(parse_dampings(&strings(&["1"])).unwrap_err().exit_code(), 3);
        assert_eq!(parse_dampings(&strings(&["x"])).unwrap_err().exit_code(), 3);
        assert_eq!(
            parse_dampings(&strings(&["0.1:0.2"]))
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn weight_specs() {
        assert_eq!(parse_weight("citations").unwrap(), WeightSource::Citations);
        assert_eq!(parse_weight("pagerank").unwrap_err().exit_code(), 3);
        assert_eq!(
            parse_weight("custom:/nonexistent/w.csv")
                .unwrap_err()
                .exit_code(),
            2
        );
    }
}
