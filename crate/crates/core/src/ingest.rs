//! Citation record ingestion.
//!
//! Three CSV inputs are understood:
//!
//! * `papers-csv`: `paper_id,year,first_author,cited_authors`, one publication
//!   per line. `cited_authors` is a `;`-separated list in a single (quoted)
//!   field. An entry may carry the id of the cited publication after an `@`
//!   (`SALTON G@P17`); such references feed the per-paper citation counts
//!   used for the h-index.
//! * `edges-csv`: `author_a,author_b,count`, the co-citation matrix given
//!   directly. A row with `author_a == author_b` sets the diagonal.
//! * `stats-csv`: `author_id,citation_count,first_author_pub_count,per_paper_citations`
//!   with `per_paper_citations` as `;`-separated integers.
//!
//! Author ids are compared after [`normalize_author`]; there is no name
//! disambiguation beyond that.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::CoCitationNetwork;

pub const PAPERS_HEADER: [&str; 4] = ["paper_id", "year", "first_author", "cited_authors"];
pub const EDGES_HEADER: [&str; 3] = ["author_a", "author_b", "count"];
pub const STATS_HEADER: [&str; 4] = [
    "author_id",
    "citation_count",
    "first_author_pub_count",
    "per_paper_citations",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputFormat {
    PapersCsv,
    EdgesCsv,
    StatsCsv,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "papers-csv" => Ok(InputFormat::PapersCsv),
            "edges-csv" => Ok(InputFormat::EdgesCsv),
            "stats-csv" => Ok(InputFormat::StatsCsv),
            other => Err(Error::InvalidParameter(format!(
                "unknown input format {other:?} (expected papers-csv, edges-csv or stats-csv)"
            ))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::PapersCsv => "papers-csv",
            InputFormat::EdgesCsv => "edges-csv",
            InputFormat::StatsCsv => "stats-csv",
        })
    }
}

/// One cited author within a paper, after per-paper deduplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitedAuthor {
    pub author: String,
    /// How many references in the paper named this author.
    pub multiplicity: u32,
    /// Distinct cited publication ids attached to those references.
    pub works: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    pub paper_id: String,
    pub year: i32,
    pub first_author: String,
    /// Deduplicated, in order of first appearance.
    pub cited: Vec<CitedAuthor>,
}

impl PaperRecord {
    pub fn cited_authors(&self) -> impl Iterator<Item = &str> {
        self.cited.iter().map(|c| c.author.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuthorStats {
    pub author_id: String,
    /// Number of papers citing the author (each paper counts once).
    pub citation_count: u64,
    pub first_author_pub_count: u64,
    /// Citations received by each first-authored paper, in corpus order.
    pub per_paper_citations: Vec<u64>,
}

impl AuthorStats {
    pub fn new(
        author_id: impl Into<String>,
        citation_count: u64,
        per_paper_citations: Vec<u64>,
    ) -> Self {
        AuthorStats {
            author_id: author_id.into(),
            citation_count,
            first_author_pub_count: per_paper_citations.len() as u64,
            per_paper_citations,
        }
    }

    pub fn h_index(&self) -> u64 {
        crate::scores::h_index(&self.per_paper_citations)
    }
}

/// How a paper citing several selected authors contributes to each pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairCounting {
    /// One per paper citing both authors.
    #[default]
    PerPaper,
    /// Product of the two authors' reference multiplicities in the paper.
    Multiplicity,
}

/// Collapses whitespace and upper-cases, so `"Salton  g"` and `"SALTON G"` match.
pub fn normalize_author(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

fn check_header(record: &csv::StringRecord, expected: &[&str], line: u64) -> Result<()> {
    let found: Vec<&str> = record.iter().map(str::trim).collect();
    if found != expected {
        return Err(Error::parse(
            line,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                found.join(",")
            ),
        ));
    }
    Ok(())
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(reader)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Reads a `papers-csv` stream. An empty stream (or a header alone) yields no papers.
pub fn parse_papers<R: Read>(reader: R) -> Result<Vec<PaperRecord>> {
    let mut rdr = csv_reader(reader);
    let mut records = rdr.records();
    match records.next() {
        None => return Ok(Vec::new()),
        Some(header) => {
            let header = header?;
            check_header(&header, &PAPERS_HEADER, line_of(&header))?;
        }
    }

    let mut seen = HashSet::new();
    let mut papers = Vec::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        let paper = parse_paper_record(&record, line)?;
        if !seen.insert(paper.paper_id.clone()) {
            return Err(Error::parse(
                line,
                format!("duplicate paper_id {:?}", paper.paper_id),
            ));
        }
        papers.push(paper);
    }
    Ok(papers)
}

fn parse_paper_record(record: &csv::StringRecord, line: u64) -> Result<PaperRecord> {
    let paper_id = record[0].trim();
    if paper_id.is_empty() {
        return Err(Error::parse(line, "empty paper_id"));
    }
    let year = record[1]
        .trim()
        .parse::<i32>()
        .map_err(|_| Error::parse(line, format!("invalid year {:?}", &record[1])))?;
    let first_author = normalize_author(&record[2]);
    if first_author.is_empty() {
        return Err(Error::parse(line, "empty first_author"));
    }

    let raw_cited = record[3].trim();
    if raw_cited.is_empty() {
        return Err(Error::parse(line, "empty cited_authors field"));
    }
    let mut cited: Vec<CitedAuthor> = Vec::new();
    for entry in raw_cited.split(';') {
        let (name, work) = match entry.split_once('@') {
            Some((name, work)) => {
                let work = work.trim();
                if work.is_empty() {
                    return Err(Error::parse(line, format!("empty cited work in {entry:?}")));
                }
                (name, Some(work))
            }
            None => (entry, None),
        };
        let author = normalize_author(name);
        if author.is_empty() {
            return Err(Error::parse(line, "empty cited author entry"));
        }
        let slot = match cited.iter().position(|c| c.author == author) {
            Some(i) => {
                cited[i].multiplicity += 1;
                &mut cited[i]
            }
            None => {
                cited.push(CitedAuthor {
                    author,
                    multiplicity: 1,
                    works: Vec::new(),
                });
                cited.last_mut().unwrap()
            }
        };
        if let Some(work) = work {
            if !slot.works.iter().any(|w| w == work) {
                slot.works.push(work.to_string());
            }
        }
    }

    Ok(PaperRecord {
        paper_id: paper_id.to_string(),
        year,
        first_author,
        cited,
    })
}

/// Per-author citation and publication statistics over a corpus.
///
/// Every author appearing either as a first author or as a cited author gets
/// an entry. A paper's received citations are the number of distinct corpus
/// papers referencing its id.
pub fn accumulate_stats(papers: &[PaperRecord]) -> BTreeMap<String, AuthorStats> {
    let mut stats: BTreeMap<String, AuthorStats> = BTreeMap::new();
    let mut received: HashMap<&str, u64> = HashMap::new();

    for paper in papers {
        let mut works_in_paper: HashSet<&str> = HashSet::new();
        for cited in &paper.cited {
            entry(&mut stats, &cited.author).citation_count += 1;
            works_in_paper.extend(cited.works.iter().map(String::as_str));
        }
        for work in works_in_paper {
            *received.entry(work).or_default() += 1;
        }
    }
    for paper in papers {
        let count = received.get(paper.paper_id.as_str()).copied().unwrap_or(0);
        let author = entry(&mut stats, &paper.first_author);
        author.first_author_pub_count += 1;
        author.per_paper_citations.push(count);
    }
    stats
}

fn entry<'a>(stats: &'a mut BTreeMap<String, AuthorStats>, author: &str) -> &'a mut AuthorStats {
    stats
        .entry(author.to_string())
        .or_insert_with(|| AuthorStats {
            author_id: author.to_string(),
            ..AuthorStats::default()
        })
}

/// Authors cited strictly more than `threshold` times, most cited first, ties
/// broken by author id. Every author tied at a given count is kept.
pub fn select_top_authors<'a, I>(stats: I, threshold: u64) -> Vec<String>
where
    I: IntoIterator<Item = &'a AuthorStats>,
{
    let selected: Vec<&AuthorStats> = stats
        .into_iter()
        .filter(|s| s.citation_count > threshold)
        .collect();
    order_by_citations(selected)
}

/// Orders authors by citation count descending, then id ascending.
pub fn order_by_citations<'a, I>(stats: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a AuthorStats>,
{
    let mut list: Vec<&AuthorStats> = stats.into_iter().collect();
    list.sort_by(|a, b| {
        b.citation_count
            .cmp(&a.citation_count)
            .then_with(|| a.author_id.cmp(&b.author_id))
    });
    list.into_iter().map(|s| s.author_id.clone()).collect()
}

/// Co-citation counts among `authors`, counted per paper.
pub fn build_cocitation(papers: &[PaperRecord], authors: &[String]) -> Result<CoCitationNetwork> {
    build_cocitation_with(papers, authors, PairCounting::PerPaper)
}

/// Co-citation counts among `authors`.
///
/// Off-diagonal entries follow `counting`; the diagonal holds the number of
/// papers citing each author.
pub fn build_cocitation_with(
    papers: &[PaperRecord],
    authors: &[String],
    counting: PairCounting,
) -> Result<CoCitationNetwork> {
    if authors.is_empty() {
        return Err(Error::InvalidInput("no authors selected".into()));
    }
    let index: HashMap<&str, usize> = authors
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    if index.len() != authors.len() {
        return Err(Error::InvalidInput("duplicate author in selection".into()));
    }

    let n = authors.len();
    let mut counts = vec![vec![0u64; n]; n];
    let mut present: Vec<(usize, u64)> = Vec::new();
    for paper in papers {
        present.clear();
        present.extend(paper.cited.iter().filter_map(|c| {
            index
                .get(c.author.as_str())
                .map(|&i| (i, u64::from(c.multiplicity)))
        }));
        for (a, &(j, mj)) in present.iter().enumerate() {
            counts[j][j] += 1;
            for &(k, mk) in &present[a + 1..] {
                let add = match counting {
                    PairCounting::PerPaper => 1,
                    PairCounting::Multiplicity => mj * mk,
                };
                counts[j][k] += add;
                counts[k][j] += add;
            }
        }
    }
    CoCitationNetwork::new(authors.to_vec(), counts)
}

/// Reads an `edges-csv` stream into a network. Authors are indexed in order of
/// first appearance. Pairs may be listed in either orientation or both, but
/// repeated pairs must agree.
pub fn load_edges<R: Read>(reader: R) -> Result<CoCitationNetwork> {
    let mut rdr = csv_reader(reader);
    let mut records = rdr.records();
    match records.next() {
        None => return Err(Error::InvalidInput("empty edges file".into())),
        Some(header) => {
            let header = header?;
            check_header(&header, &EDGES_HEADER, line_of(&header))?;
        }
    }

    let mut authors: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut entries: HashMap<(usize, usize), (u64, u64)> = HashMap::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        let mut id = |raw: &str| -> Result<usize> {
            let name = normalize_author(raw);
            if name.is_empty() {
                return Err(Error::parse(line, "empty author id"));
            }
            Ok(*index.entry(name.clone()).or_insert_with(|| {
                authors.push(name);
                authors.len() - 1
            }))
        };
        let a = id(&record[0])?;
        let b = id(&record[1])?;
        let count = record[2]
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(line, format!("invalid count {:?}", &record[2])))?;
        let key = (a.min(b), a.max(b));
        match entries.get(&key) {
            Some(&(existing, _)) if existing != count => {
                return Err(Error::parse(
                    line,
                    format!(
                        "conflicting counts for {} / {}: {existing} vs {count}",
                        authors[key.0], authors[key.1]
                    ),
                ));
            }
            Some(_) => {}
            None => {
                entries.insert(key, (count, line));
            }
        }
    }
    if authors.is_empty() {
        return Err(Error::InvalidInput("edges file lists no authors".into()));
    }
    let n = authors.len();
    let mut counts = vec![vec![0u64; n]; n];
    for (&(j, k), &(count, _)) in &entries {
        counts[j][k] = count;
        counts[k][j] = count;
    }
    CoCitationNetwork::new(authors, counts)
}

/// Reads a `stats-csv` stream.
pub fn load_stats<R: Read>(reader: R) -> Result<BTreeMap<String, AuthorStats>> {
    let mut rdr = csv_reader(reader);
    let mut records = rdr.records();
    match records.next() {
        None => return Ok(BTreeMap::new()),
        Some(header) => {
            let header = header?;
            check_header(&header, &STATS_HEADER, line_of(&header))?;
        }
    }

    let mut stats = BTreeMap::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        let author_id = normalize_author(&record[0]);
        if author_id.is_empty() {
            return Err(Error::parse(line, "empty author_id"));
        }
        let int = |field: &str, what: &str| -> Result<u64> {
            field
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(line, format!("invalid {what} {field:?}")))
        };
        let citation_count = int(&record[1], "citation_count")?;
        let pub_count = int(&record[2], "first_author_pub_count")?;
        let per_paper = if record[3].trim().is_empty() {
            Vec::new()
        } else {
            record[3]
                .split(';')
                .map(|v| int(v, "per-paper citation count"))
                .collect::<Result<Vec<_>>>()?
        };
        if per_paper.len() as u64 != pub_count {
            return Err(Error::parse(
                line,
                format!(
                    "first_author_pub_count is {pub_count} but {} per-paper counts given",
                    per_paper.len()
                ),
            ));
        }
        let stat = AuthorStats::new(author_id.clone(), citation_count, per_paper);
        if stats.insert(author_id.clone(), stat).is_some() {
            return Err(Error::parse(
                line,
                format!("duplicate author_id {author_id:?}"),
            ));
        }
    }
    Ok(stats)
}

/// Stats for a network loaded without a corpus: citation counts come from the
/// diagonal, publication data is empty.
pub fn stats_from_diagonal(net: &CoCitationNetwork) -> BTreeMap<String, AuthorStats> {
    net.authors()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (
                a.clone(),
                AuthorStats::new(a.clone(), net.count(i, i), Vec::new()),
            )
        })
        .collect()
}
