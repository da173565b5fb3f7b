//! Benchmark sweeps: one row per (predicate, parameter, |Q|, algorithm) cell.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::Algorithm;
use crate::error::Result;
use crate::geometry::{Point, QuerySet};
use crate::index::AggRTree;
use crate::predicate::Predicate;
use crate::query::InverseQuerySpec;

use super::config::{DatasetSource, ExperimentConfig, PredicateKind};
use super::datagen::{gen_clustered, gen_uniform};
use super::io::ingest_points;
use super::queryset::sample_query_set;

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub predicate: &'static str,
    pub param: f64,
    pub d: usize,
    pub n: usize,
    pub qcount: usize,
    pub extent: f64,
    pub algorithm: Algorithm,
    pub mean_node_reads: f64,
    pub mean_time_ms: f64,
    pub mean_results: f64,
    pub queries: usize,
}

pub fn load_dataset(cfg: &ExperimentConfig) -> Result<Vec<Point>> {
    match &cfg.dataset {
        DatasetSource::Uniform => gen_uniform(cfg.n, cfg.d, cfg.seed),
        DatasetSource::Clustered => gen_clustered(cfg.n, cfg.d, cfg.seed, cfg.clusters, cfg.spread),
        DatasetSource::File(p) => ingest_points(p),
    }
}

fn cells(cfg: &ExperimentConfig) -> Vec<(PredicateKind, Predicate, usize)> {
    let mut out = Vec::new();
    for &kind in &cfg.predicates {
        let (preds, qcounts): (Vec<Predicate>, &[usize]) = match kind {
            PredicateKind::Eps => (cfg.eps.iter().map(|&e| Predicate::EpsRange(e)).collect(), &cfg.qcounts),
            PredicateKind::Knn => (cfg.k.iter().map(|&k| Predicate::Knn(k)).collect(), &cfg.qcounts),
            PredicateKind::Skyline => (vec![Predicate::DynamicSkyline], &cfg.idsq_qcounts),
        };
        for p in preds {
            for &m in qcounts {
                out.push((kind, p, m));
            }
        }
    }
    out
}

/// Run every cell over `points`. All algorithms in a cell see the same query sets.
pub fn run_experiment(cfg: &ExperimentConfig, points: Vec<Point>) -> Result<Vec<ResultRow>> {
    cfg.check()?;
    let (n, d) = (points.len(), points.first().map_or(cfg.d, Point::dim));
    let unit = points.clone();
    let tree = AggRTree::bulk_load(points, cfg.page_size)?;
    let mut rows = Vec::new();
    for (cell, (kind, pred, m)) in cells(cfg).into_iter().enumerate() {
        let seed = cfg.seed.wrapping_add(cell as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets: Vec<QuerySet> = (0..cfg.queries)
            .map(|_| sample_query_set(&unit, m, cfg.extent, &mut rng).map(|s| s.query))
            .collect::<Result<_>>()?;
        for &algo in &cfg.algorithms {
            let (mut reads, mut ms, mut hits) = (0u64, 0.0, 0usize);
            for (i, q) in sets.iter().enumerate() {
                let spec = InverseQuerySpec::new(pred, q.clone());
                let rep = algo.run(&spec, &tree, None, seed.wrapping_add(i as u64))?;
                reads += rep.node_reads;
                ms += rep.wall_time.as_secs_f64() * 1e3;
                hits += rep.results.len();
            }
            let nq = sets.len().max(1) as f64;
            rows.push(ResultRow {
                predicate: kind.name(),
                param: pred.param(),
                d,
                n,
                qcount: m,
                extent: cfg.extent,
                algorithm: algo,
                mean_node_reads: reads as f64 / nq,
                mean_time_ms: if cfg.timing { ms / nq } else { 0.0 },
                mean_results: hits as f64 / nq,
                queries: sets.len(),
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: [&str; 11] = [
    "predicate", "param", "d", "n", "qcount", "extent", "algorithm", "mean_node_reads", "mean_time_ms", "mean_results", "queries",
];

pub fn write_csv_to<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.predicate.to_string(),
            r.param.to_string(),
            r.d.to_string(),
            r.n.to_string(),
            r.qcount.to_string(),
            r.extent.to_string(),
            r.algorithm.name().to_string(),
            format!("{:.3}", r.mean_node_reads),
            format!("{:.4}", r.mean_time_ms),
            format!("{:.3}", r.mean_results),
            r.queries.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<()> {
    write_csv_to(std::fs::File::create(path)?, rows)
}
