//! Rankings, the h-index and Spearman rank correlation.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::report::format_sig;

pub const DEFAULT_SHUFFLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

/// Largest `h` such that at least `h` papers have `h` or more citations.
pub fn h_index(per_paper_citations: &[u64]) -> u64 {
    let mut sorted = per_paper_citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    HigherIsBetter,
    LowerIsBetter,
}

/// Ordinal positions (1 = best), ties sharing their average position.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub ranks: Vec<f64>,
    pub source: String,
    pub direction: Direction,
}

impl Ranking {
    /// Wraps precomputed ranks, e.g. rank rows read from an existing report.
    pub fn from_ranks(ranks: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if let Some(bad) = ranks.iter().find(|r| !r.is_finite() || **r <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "rank {bad} is not a positive number"
            )));
        }
        Ok(Ranking {
            ranks,
            source: source.into(),
            direction: Direction::LowerIsBetter,
        })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Ranks scores; exactly equal scores get the mean of the positions they span.
pub fn ranks_from_scores(
    scores: &[f64],
    direction: Direction,
    source: impl Into<String>,
) -> Result<Ranking> {
    let source = source.into();
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "{source}: score {} at position {i} is not finite",
            scores[i]
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = scores[a].total_cmp(&scores[b]);
        match direction {
            Direction::HigherIsBetter => ord.reverse(),
            Direction::LowerIsBetter => ord,
        }
    });

    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    Ok(Ranking {
        ranks,
        source,
        direction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub r: f64,
    pub n: usize,
    /// One-tailed, in the direction of the observed sign.
    pub p_value: f64,
    pub significant_01: bool,
    pub significant_05: bool,
}

impl CorrelationReport {
    fn perfect(n: usize) -> Self {
        CorrelationReport {
            r: 1.0,
            n,
            p_value: 0.0,
            significant_01: true,
            significant_05: true,
        }
    }

    /// `""` at the 0.01 level, `"*"` at 0.05 only, `"'"` otherwise.
    pub fn mark(&self) -> &'static str {
        if self.significant_01 {
            ""
        } else if self.significant_05 {
            "*"
        } else {
            "'"
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Significance {
    /// Student-t approximation with `n - 2` degrees of freedom.
    #[default]
    TTest,
    /// Seeded shuffles of the second ranking.
    Permutation { shuffles: usize, seed: u64 },
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

fn check_pair(a: &Ranking, b: &Ranking) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "correlation needs at least 3 ranked items, got {}",
            a.len()
        )));
    }
    Ok(())
}

fn coefficient(a: &Ranking, b: &Ranking) -> Result<f64> {
    check_pair(a, b)?;
    pearson(&a.ranks, &b.ranks).ok_or_else(|| {
        let flat = if pearson(&a.ranks, &a.ranks).is_none() {
            a
        } else {
            b
        };
        Error::DegenerateRanking {
            label: flat.source.clone(),
        }
    })
}

/// Spearman's coefficient as the Pearson correlation of the two rank vectors,
/// with one-tailed t-test significance.
pub fn spearman(a: &Ranking, b: &Ranking) -> Result<CorrelationReport> {
    spearman_with(a, b, Significance::TTest)
}

pub fn spearman_with(
    a: &Ranking,
    b: &Ranking,
    significance: Significance,
) -> Result<CorrelationReport> {
    let r = coefficient(a, b)?;
    let n = a.len();
    match significance {
        Significance::TTest => Ok(t_test(r, n)),
        Significance::Permutation { shuffles, seed } => {
            Ok(permutation_test(a, b, r, shuffles, seed))
        }
    }
}

fn t_test(r: f64, n: usize) -> CorrelationReport {
    if r.abs() >= 1.0 {
        return CorrelationReport {
            r,
            ..CorrelationReport::perfect(n)
        };
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    let critical_05 = dist.inverse_cdf(0.95);
    let critical_01 = dist.inverse_cdf(0.99);
    CorrelationReport {
        r,
        n,
        p_value: 1.0 - dist.cdf(t.abs()),
        significant_01: t.abs() > critical_01,
        significant_05: t.abs() > critical_05,
    }
}

fn permutation_test(
    a: &Ranking,
    b: &Ranking,
    r: f64,
    shuffles: usize,
    seed: u64,
) -> CorrelationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = b.ranks.clone();
    let mut extreme = 0usize;
    for _ in 0..shuffles {
        shuffled.shuffle(&mut rng);
        let rp = pearson(&a.ranks, &shuffled).unwrap_or(0.0);
        if (r >= 0.0 && rp >= r) || (r < 0.0 && rp <= r) {
            extreme += 1;
        }
    }
    let p_value = (extreme + 1) as f64 / (shuffles + 1) as f64;
    CorrelationReport {
        r,
        n: a.len(),
        p_value,
        significant_01: p_value < 0.01,
        significant_05: p_value < 0.05,
    }
}

/// Symmetric matrix of pairwise correlations between labelled rankings.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<CorrelationReport>>,
}

impl CorrelationMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &CorrelationReport {
        &self.cells[i][j]
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidParameter(format!("no measure {label:?} in matrix")))
    }

    /// Arithmetic mean of `r` over the named cells.
    pub fn mean_r(&self, pairs: &[(String, String)]) -> Result<f64> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("no cells to average".into()));
        }
        let mut total = 0.0;
        for (a, b) in pairs {
            total += self.get(self.index(a)?, self.index(b)?).r;
        }
        Ok(total / pairs.len() as f64)
    }

    /// Square CSV with labels on both axes; each cell is `r` at six
    /// significant digits followed by its significance mark.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).map_err(Error::from)?;
        for (label, row) in self.labels.iter().zip(&self.cells) {
            let mut rec = vec![label.clone()];
            rec.extend(
                row.iter()
                    .map(|c| format!("{}{}", format_sig(c.r, 6), c.mark())),
            );
            w.write_record(&rec).map_err(Error::from)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn correlation_matrix(
    rankings: &[Ranking],
    significance: Significance,
) -> Result<CorrelationMatrix> {
    let m = rankings.len();
    let mut cells = vec![vec![CorrelationReport::perfect(0); m]; m];
    for i in 0..m {
        cells[i][i] = CorrelationReport::perfect(rankings[i].len());
        for j in i + 1..m {
            let sig = match significance {
                Significance::Permutation { shuffles, seed } => Significance::Permutation {
                    shuffles,
                    seed: seed.wrapping_add((i * m + j) as u64),
                },
                other => other,
            };
            let report =
                spearman_with(&rankings[i], &rankings[j], sig).map_err(|e| Error::AtPair {
                    left: rankings[i].source.clone(),
                    right: rankings[j].source.clone(),
                    source: Box::new(e),
                })?;
            cells[i][j] = report;
            cells[j][i] = report;
        }
    }
    Ok(CorrelationMatrix {
        labels: rankings.iter().map(|r| r.source.clone()).collect(),
        cells,
    })
}
