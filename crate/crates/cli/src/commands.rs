use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cocite_core::centrality;
use cocite_core::pagerank::{self, classify_trajectory, Method};
use cocite_core::report::format_sig;
use cocite_core::scores::{correlation_matrix, ranks_from_scores, Direction, Significance};

use crate::args::{CorrelateArgs, InputArgs, MethodArg, RankArgs, ScatterArgs, SignificanceArg};
use crate::error::{CliError, CliResult};
use crate::measures::{Evaluator, MeasureSpec};
use crate::pipeline::{self, Model};

fn prepare(input: &InputArgs, model: &crate::args::ModelArgs) -> CliResult<Model> {
    let corpus = pipeline::load_corpus(input)?;
    Model::build(corpus, model)
}

fn create(dir: &Path, name: &str) -> CliResult<csv::Writer<BufWriter<File>>> {
    let path = dir.join(name);
    let file =
        File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn out_dir(path: &Path) -> CliResult<PathBuf> {
    fs::create_dir_all(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

pub fn score_file_name(kind: &str, damping: f64, direct_suffix: bool) -> String {
    let suffix = if direct_suffix { "_direct" } else { "" };
    format!("pr_{kind}_d{damping}{suffix}.csv")
}

/// Runs the damping sweep and writes score files, the rank table and the
/// centrality table. Returns the names of the files written.
pub fn rank(args: &RankArgs) -> CliResult<Vec<String>> {
    let model = prepare(&args.input, &args.model)?;
    let dir = out_dir(&args.model.out)?;
    let authors = model.authors();
    let stats = &model.corpus.stats;
    let teleport = pagerank::make_teleport(&model.weight, stats, authors)?;
    let kind = teleport.kind().to_string();

    let methods: &[Method] = match model.method {
        MethodArg::Power => &[Method::Power],
        MethodArg::Direct => &[Method::Direct],
        MethodArg::Both => &[Method::Power, Method::Direct],
    };
    let mut written = Vec::new();
    let mut sweep_ranks: Vec<Vec<f64>> = Vec::new();
    for &method in methods {
        let results = pagerank::damping_sweep(
            &model.transition,
            &teleport,
            &model.dampings,
            model.options,
            method,
        )?;
        let secondary = methods.len() > 1 && method == Method::Direct;
        for result in &results {
            let ranking = ranks_from_scores(&result.scores, Direction::HigherIsBetter, "pr")?;
            let name = score_file_name(&kind, result.damping, secondary);
            let mut w = create(&dir, &name)?;
            w.write_record(["author_id", "score", "rank"])?;
            for ((author, score), rank) in authors.iter().zip(&result.scores).zip(&ranking.ranks) {
                w.write_record([author.clone(), score.to_string(), rank.to_string()])?;
            }
            w.flush()?;
            written.push(name);
            if !secondary {
                sweep_ranks.push(ranking.ranks);
            }
        }
    }

    let degree = centrality::degree_centrality(&model.graph).values;
    let closeness = centrality::closeness_centrality(&model.graph).values;
    let betweenness = centrality::betweenness_centrality(&model.graph).values;
    let citations: Vec<f64> = authors
        .iter()
        .map(|a| {
            stats
                .get(a)
                .map(|s| s.citation_count as f64)
                .ok_or_else(|| CliError::input(format!("no statistics for author {a:?}")))
        })
        .collect::<CliResult<_>>()?;
    let rank_of = |v: &[f64], label: &str| ranks_from_scores(v, Direction::HigherIsBetter, label);
    let fixed = [
        ("Citation", rank_of(&citations, "Citation")?),
        ("Degree", rank_of(&degree, "Degree")?),
        ("Betweenness", rank_of(&betweenness, "Betweenness")?),
        ("Closeness", rank_of(&closeness, "Closeness")?),
    ];

    let mut w = create(&dir, "rank_table.csv")?;
    let mut header = vec!["author_id".to_string()];
    header.extend(model.dampings.iter().map(|d| d.to_string()));
    header.extend(fixed.iter().map(|(l, _)| l.to_string()));
    header.push("Trajectory".into());
    w.write_record(&header)?;
    for (i, author) in authors.iter().enumerate() {
        let trajectory: Vec<f64> = sweep_ranks.iter().map(|r| r[i]).collect();
        let mut row = vec![author.clone()];
        row.extend(trajectory.iter().map(|r| format_sig(*r, 6)));
        row.extend(fixed.iter().map(|(_, r)| format_sig(r.ranks[i], 6)));
        row.push(classify_trajectory(&trajectory, args.model.stability_slack).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    written.push("rank_table.csv".into());

    let mut w = create(&dir, "centrality.csv")?;
    w.write_record(["author_id", "degree", "closeness", "betweenness"])?;
    for (i, author) in authors.iter().enumerate() {
        w.write_record([
            author.clone(),
            degree[i].to_string(),
            closeness[i].to_string(),
            betweenness[i].to_string(),
        ])?;
    }
    w.flush()?;
    written.push("centrality.csv".into());

    if args.model.dump_matrix {
        let path = dir.join("matrix.csv");
        let file =
            File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        model.network.write_csv(BufWriter::new(file))?;
        written.push("matrix.csv".into());
    }
    Ok(written)
}

/// Writes `correlation.csv` and returns one line per requested average.
pub fn correlate(args: &CorrelateArgs) -> CliResult<Vec<String>> {
    let selection = match &args.measures {
        Some(list) => MeasureSpec::parse_list(list)?,
        None => MeasureSpec::default_selection(),
    };
    if selection.is_empty() {
        return Err(CliError::config("no measures selected"));
    }
    let averages = args
        .average
        .iter()
        .map(|cell| {
            let (a, b) = cell
                .split_once(':')
                .ok_or_else(|| CliError::config(format!("--average expects A:B, got {cell:?}")))?;
            Ok((
                MeasureSpec::parse(a)?.to_string(),
                MeasureSpec::parse(b)?.to_string(),
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let model = prepare(&args.input, &args.model)?;
    let mut eval = Evaluator::new(&model);
    let rankings = selection
        .iter()
        .map(|&spec| eval.ranking(spec))
        .collect::<CliResult<Vec<_>>>()?;
    let significance = match args.significance {
        SignificanceArg::T => Significance::TTest,
        SignificanceArg::Permutation => Significance::Permutation {
            shuffles: args.shuffles,
            seed: args.model.seed,
        },
    };
    let matrix = correlation_matrix(&rankings, significance)?;

    let dir = out_dir(&args.model.out)?;
    let path = dir.join("correlation.csv");
    let file =
        File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    matrix.write_csv(&mut out)?;
    out.flush()?;

    let mut lines = averages
        .iter()
        .map(|(a, b)| {
            let r = matrix.mean_r(&[(a.clone(), b.clone())])?;
            Ok(format!("{a}:{b} r={}", format_sig(r, 6)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if averages.len() > 1 {
        lines.push(format!(
            "mean r over {} cells: {}",
            averages.len(),
            format_sig(matrix.mean_r(&averages)?, 6)
        ));
    }
    Ok(lines)
}

/// Writes `scatter.csv`: one row per author ordered by the x measure's rank.
pub fn scatter(args: &ScatterArgs) -> CliResult<()> {
    let x = MeasureSpec::parse(&args.x)?;
    let y = MeasureSpec::parse(&args.y)?;
    let model = prepare(&args.input, &args.model)?;
    let mut eval = Evaluator::new(&model);
    let rx = eval.ranking(x)?;
    let ry = eval.ranking(y)?;
    let mut order: Vec<usize> = (0..rx.len()).collect();
    order.sort_by(|&a, &b| rx.ranks[a].total_cmp(&rx.ranks[b]));

    let dir = out_dir(&args.model.out)?;
    let mut w = create(&dir, "scatter.csv")?;
    w.write_record(["author_id", "x_rank", "y_rank"])?;
    for i in order {
        w.write_record([
            model.authors()[i].clone(),
            format_sig(rx.ranks[i], 6),
            format_sig(ry.ranks[i], 6),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn ingest_check(args: &InputArgs) -> CliResult<Vec<String>> {
    let summary = pipeline::check_input(args)?;
    let mut lines = Vec::new();
    if let Some(papers) = summary.papers {
        lines.push(format!("papers: {papers}"));
    }
    if let Some(pairs) = summary.citation_pairs {
        lines.push(format!("citation pairs: {pairs}"));
    }
    lines.push(format!("authors: {}", summary.authors));
    lines.push(format!("selected authors: {}", summary.selected));
    Ok(lines)
}
