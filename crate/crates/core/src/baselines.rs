//! Comparison algorithms: per-query reverse queries intersected (Naive), and
//! one reverse query as a filter followed by per-candidate verification (SQF).

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{dist2, farthest_query2, Point, QuerySet};
use crate::index::{AccessMeter, AggRTree, Boundary};
use crate::predicate::{eps_rule, knn_rule, Predicate};
use crate::query::idsq::idsq_refine;
use crate::query::{finish, resolve_candidates, run_inverse_query_with, InverseQuerySpec, Outcome, QueryOptions, QueryReport};

/// Objects `o` of `t` with `q ∈ P(o)`, computed by the inverse-query engine
/// with the single query point `q`.
///
/// For kNN, `q` itself is left out (an object is not its own reverse
/// neighbour); an ε-range answer equals the forward range around `q` and so
/// includes it.
pub fn reverse_query<'t>(t: &'t AggRTree, q: &Point, pred: Predicate, meter: &mut AccessMeter) -> Result<Vec<&'t Point>> {
    let spec = InverseQuerySpec::new(pred, QuerySet::new(vec![q.clone()])?);
    let r = run_inverse_query_with(&spec, t, None, &QueryOptions::default(), meter)?;
    Ok(r.results
        .iter()
        .filter_map(|&id| t.lookup(id))
        .filter(|o| !(matches!(pred, Predicate::Knn(_)) && o.same_object(q)))
        .collect())
}

fn reverse_ids(spec: &InverseQuerySpec, data: &AggRTree, aux: Option<&AggRTree>, q: &Point, meter: &mut AccessMeter) -> Result<Vec<u64>> {
    let single = InverseQuerySpec { predicate: spec.predicate, query: QuerySet::new(vec![q.clone()])?, mode: spec.mode };
    Ok(run_inverse_query_with(&single, data, aux, &QueryOptions::default(), meter)?.results)
}

/// More query points than `k` have no common reverse-kNN answer by
/// definition.
fn trivially_empty(spec: &InverseQuerySpec) -> bool {
    matches!(spec.predicate, Predicate::Knn(k) if spec.query.len() > k)
}

/// Reverse query for each query point in order, intersecting as it goes and
/// stopping once the intersection is empty.
pub fn naive_inverse(spec: &InverseQuerySpec, data: &AggRTree, aux: Option<&AggRTree>, meter: &mut AccessMeter) -> Result<QueryReport> {
    resolve_candidates(spec, data, aux)?;
    let start = Instant::now();
    let before = meter.reads();
    if trivially_empty(spec) {
        return Ok(finish(Outcome::empty(), 0, start.elapsed()));
    }
    let mut acc: Option<BTreeSet<u64>> = None;
    let mut checks = 0;
    for q in spec.query.members() {
        let ids: BTreeSet<u64> = reverse_ids(spec, data, aux, q, meter)?.into_iter().collect();
        checks += ids.len();
        let next = match acc {
            None => ids,
            Some(prev) => prev.intersection(&ids).copied().collect(),
        };
        let done = next.is_empty();
        acc = Some(next);
        if done {
            break;
        }
    }
    let results: Vec<u64> = acc.unwrap_or_default().into_iter().collect();
    let out = Outcome { candidates: results.len(), refinement_checks: checks, results, ..Outcome::default() };
    Ok(finish(out, meter.reads() - before, start.elapsed()))
}

/// Reverse query for one seeded-random query point, then verification of each
/// candidate against all of `Q`. Node reads during verification go through
/// a per-query buffer.
pub fn sqf_inverse(
    spec: &InverseQuerySpec,
    data: &AggRTree,
    aux: Option<&AggRTree>,
    meter: &mut AccessMeter,
    seed: u64,
) -> Result<QueryReport> {
    let cand_tree = resolve_candidates(spec, data, aux)?;
    let start = Instant::now();
    let before = meter.reads();
    if trivially_empty(spec) {
        return Ok(finish(Outcome::empty(), 0, start.elapsed()));
    }
    let q = &spec.query;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pivot = &q.members()[rng.random_range(0..q.len())];
    let filter = reverse_ids(spec, data, aux, pivot, meter)?;

    let was_buffered = meter.is_buffered();
    meter.set_buffered(true);
    let mut results = Vec::new();
    for &id in &filter {
        let c = cand_tree.lookup(id).expect("candidate comes from the candidate tree");
        let ok = match spec.predicate {
            Predicate::EpsRange(eps) => q.members().iter().all(|m| eps_rule(dist2(c.coords(), m.coords()), eps)),
            Predicate::Knn(k) => {
                let (_, r2) = farthest_query2(c, q);
                knn_rule(data.range_count2(c.coords(), r2, Boundary::Strict, Some(c), k as u64, meter), k)
            }
            Predicate::DynamicSkyline => !q.contains_object(c) && idsq_refine(data, c, q, meter),
        };
        if ok {
            results.push(id);
        }
    }
    meter.set_buffered(was_buffered);

    let out = Outcome { candidates: filter.len(), refinement_checks: filter.len(), results, ..Outcome::default() };
    Ok(finish(out, meter.reads() - before, start.elapsed()))
}

/// Which algorithm answers an inverse query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Mqf,
    Sqf,
    Naive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Mqf, Algorithm::Sqf, Algorithm::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mqf => "mqf",
            Algorithm::Sqf => "sqf",
            Algorithm::Naive => "naive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mqf" => Some(Algorithm::Mqf),
            "sqf" => Some(Algorithm::Sqf),
            "naive" => Some(Algorithm::Naive),
            _ => None,
        }
    }

    /// Run with a fresh meter. `seed` only matters for SQF.
    pub fn run(self, spec: &InverseQuerySpec, data: &AggRTree, aux: Option<&AggRTree>, seed: u64) -> Result<QueryReport> {
        let mut meter = AccessMeter::new();
        match self {
            Algorithm::Mqf => run_inverse_query_with(spec, data, aux, &QueryOptions::default(), &mut meter),
            Algorithm::Sqf => sqf_inverse(spec, data, aux, &mut meter, seed),
            Algorithm::Naive => naive_inverse(spec, data, aux, &mut meter),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> AggRTree {
        AggRTree::bulk_load(xs.iter().enumerate().map(|(i, &x)| Point::new(i as u64, vec![x]).unwrap()).collect(), 1024).unwrap()
    }

    fn ids(v: Vec<&Point>) -> Vec<u64> {
        let mut out: Vec<u64> = v.iter().map(|p| p.id).collect();
        out.sort();
        out
    }

    #[test]
    fn reverse_one_nn() {
        let t = line(&[0.0, 1.0, 3.0]);
        let mut m = AccessMeter::new();
        assert_eq!(ids(reverse_query(&t, t.point(0), Predicate::Knn(1), &mut m).unwrap()), vec![1]);
        assert_eq!(ids(reverse_query(&t, t.point(1), Predicate::Knn(1), &mut m).unwrap()), vec![0, 2]);
    }

    #[test]
    fn naive_stops_early() {
        let t = line(&[0.0, 0.1, 5.0, 5.1, 9.0]);
        let q = QuerySet::new(vec![t.point(0).clone(), t.point(2).clone(), t.point(4).clone()]).unwrap();
        let spec = InverseQuerySpec::new(Predicate::EpsRange(0.2), q);
        let mut m = AccessMeter::new();
        let r = naive_inverse(&spec, &t, None, &mut m).unwrap();
        assert!(r.results.is_empty());
        // Only two reverse queries ran.
        assert_eq!(r.refinement_checks, 4);
    }

    #[test]
    fn sqf_is_deterministic() {
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 100.0 + i as f64 * 1e-4).collect();
        let t = line(&xs);
        let q = QuerySet::new(vec![t.point(3).clone(), t.point(7).clone()]).unwrap();
        let spec = InverseQuerySpec::new(Predicate::Knn(20), q);
        let a = Algorithm::Sqf.run(&spec, &t, None, 9).unwrap();
        let b = Algorithm::Sqf.run(&spec, &t, None, 9).unwrap();
        assert_eq!(a.results, b.results);
        assert_eq!(a.node_reads, b.node_reads);
        let mqf = Algorithm::Mqf.run(&spec, &t, None, 0).unwrap();
        assert_eq!(a.results, mqf.results);
    }

    #[test]
    fn modes_are_checked() {
        let t = line(&[0.0, 1.0]);
        let spec = InverseQuerySpec { mode: crate::query::Chromacity::Bichromatic, ..InverseQuerySpec::new(Predicate::Knn(1), QuerySet::new(vec![t.point(0).clone()]).unwrap()) };
        assert!(Algorithm::Naive.run(&spec, &t, None, 0).is_err());
    }
}
