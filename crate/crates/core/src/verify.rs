//! Randomized cross-checks of every algorithm against the brute-force oracle,
//! with greedy shrinking of failing instances.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::Algorithm;
use crate::error::Result;
use crate::geometry::{Point, QuerySet};
use crate::index::AggRTree;
use crate::oracle::brute_inverse;
use crate::predicate::Predicate;
use crate::query::InverseQuerySpec;
use crate::workbench::{gen_clustered, gen_uniform, sample_query_set};

/// A minimal instance on which an algorithm disagrees with the oracle.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub predicate: Predicate,
    pub algorithm: Algorithm,
    pub data: Vec<Point>,
    pub query: Vec<Point>,
    pub expected: Vec<u64>,
    pub got: Vec<u64>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} disagrees with the oracle", self.algorithm, self.predicate)?;
        writeln!(f, "  expected {:?}", self.expected)?;
        writeln!(f, "  got      {:?}", self.got)?;
        writeln!(f, "  query ids {:?}", self.query.iter().map(|p| p.id).collect::<Vec<_>>())?;
        write!(f, "  data ({} points):", self.data.len())?;
        for p in &self.data {
            write!(f, "\n    {} {:?}", p.id, p.coords())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub instances: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Run one algorithm on one instance. Returns `(oracle, algorithm)` when they differ.
pub fn check_instance(
    data: &[Point],
    query: &[Point],
    pred: Predicate,
    algo: Algorithm,
    seed: u64,
) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
    let tree = AggRTree::bulk_load_with_fanout(data.to_vec(), 4)?;
    let spec = InverseQuerySpec::new(pred, QuerySet::new(query.to_vec())?);
    let got = algo.run(&spec, &tree, None, seed)?.results;
    let expected = brute_inverse(data, query, pred);
    Ok((got != expected).then_some((expected, got)))
}

fn fails(data: &[Point], query: &[Point], pred: Predicate, algo: Algorithm, seed: u64) -> bool {
    matches!(check_instance(data, query, pred, algo, seed), Ok(Some(_)) | Err(_))
}

/// Greedily drop non-query data points, then query points, while the failure persists.
pub fn shrink(data: Vec<Point>, query: Vec<Point>, pred: Predicate, algo: Algorithm, seed: u64) -> (Vec<Point>, Vec<Point>) {
    shrink_with(data, query, |d, q| fails(d, q, pred, algo, seed))
}

/// Shrinking against an arbitrary failure test. Query points are never removed
/// from the data, and at least one query point is kept.
pub fn shrink_with(
    mut data: Vec<Point>,
    mut query: Vec<Point>,
    fails: impl Fn(&[Point], &[Point]) -> bool,
) -> (Vec<Point>, Vec<Point>) {
    let mut chunk = (data.len() / 2).max(1);
    loop {
        let mut removed = false;
        let mut i = 0;
        while i < data.len() {
            let end = (i + chunk).min(data.len());
            let keep = |j: usize| !(i..end).contains(&j) || query.iter().any(|q| q.same_object(&data[j]));
            let trial: Vec<Point> = (0..data.len()).filter(|&j| keep(j)).map(|j| data[j].clone()).collect();
            if trial.len() < data.len() && fails(&trial, &query) {
                data = trial;
                removed = true;
            } else {
                i = end;
            }
        }
        if !removed {
            if chunk == 1 {
                break;
            }
            chunk /= 2;
        }
    }
    let mut j = 0;
    while query.len() > 1 && j < query.len() {
        let mut trial = query.clone();
        trial.remove(j);
        if fails(&data, &trial) {
            query = trial;
        } else {
            j += 1;
        }
    }
    (data, query)
}

fn predicates() -> Vec<(Predicate, &'static [usize])> {
    vec![
        (Predicate::EpsRange(0.05), &[2, 5]),
        (Predicate::EpsRange(0.1), &[2, 5]),
        (Predicate::Knn(5), &[2, 5]),
        (Predicate::Knn(20), &[2, 5]),
        (Predicate::DynamicSkyline, &[2, 4]),
    ]
}

/// `trials` datasets of `n` points (alternating uniform and clustered), each
/// checked for every predicate, query size and algorithm.
pub fn verify(n: usize, d: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let data = if t % 2 == 0 { gen_uniform(n, d, s)? } else { gen_clustered(n, d, s, 5, 0.02)? };
        let tree = AggRTree::bulk_load_with_fanout(data.clone(), 8)?;
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x9e37_79b9_7f4a_7c15);
        for (pred, sizes) in predicates() {
            for &m in sizes {
                if m > n {
                    continue;
                }
                let extent = (3.0 * m as f64 / n as f64).clamp(0.01, 1.0);
                let q = sample_query_set(&data, m, extent, &mut rng)?.query;
                let expected = brute_inverse(&data, q.members(), pred);
                report.instances += 1;
                for algo in Algorithm::ALL {
                    report.checks += 1;
                    let spec = InverseQuerySpec::new(pred, q.clone());
                    let ok = algo.run(&spec, &tree, None, s).map(|r| r.results == expected).unwrap_or(false);
                    if !ok {
                        let (sd, sq) = shrink(data.clone(), q.members().to_vec(), pred, algo, s);
                        let (expected, got) = check_instance(&sd, &sq, pred, algo, s)?.unwrap_or_default();
                        report.mismatches.push(Mismatch { predicate: pred, algorithm: algo, data: sd, query: sq, expected, got });
                    }
                }
            }
        }
    }
    Ok(report)
}
