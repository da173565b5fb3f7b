//! The filter-refinement pipeline and its per-predicate engines.

pub mod idsq;
pub mod ieps;
pub mod iknn;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::QuerySet;
use crate::index::{AccessMeter, AggRTree};
use crate::predicate::Predicate;

/// Where candidate results come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Chromacity {
    /// Candidates are the indexed dataset itself.
    #[default]
    Monochromatic,
    /// Candidates come from a second tree; the first tree supplies the objects
    /// that verify or refute membership.
    Bichromatic,
}

#[derive(Clone, Debug)]
pub struct InverseQuerySpec {
    pub predicate: Predicate,
    pub query: QuerySet,
    pub mode: Chromacity,
}

impl InverseQuerySpec {
    pub fn new(predicate: Predicate, query: QuerySet) -> Self {
        Self { predicate, query, mode: Chromacity::Monochromatic }
    }

    pub fn bichromatic(predicate: Predicate, query: QuerySet) -> Self {
        Self { predicate, query, mode: Chromacity::Bichromatic }
    }

    /// Check parameters and that `Q` is drawn from `data`.
    pub fn validate(&self, data: &AggRTree) -> Result<()> {
        match self.predicate {
            Predicate::EpsRange(eps) if !(eps.is_finite() && eps >= 0.0) => {
                return Err(Error::InvalidSpec(format!("epsilon must be finite and non-negative, got {eps}")));
            }
            Predicate::Knn(0) => return Err(Error::InvalidSpec("k must be at least 1".into())),
            _ => {}
        }
        if self.query.dim() != data.dim() {
            return Err(Error::DimensionMismatch { expected: data.dim(), got: self.query.dim() });
        }
        let mut seen = HashSet::new();
        for q in self.query.members() {
            if !seen.insert(q.id) {
                return Err(Error::InvalidSpec(format!("query object {} listed twice", q.id)));
            }
            if !data.contains_object(q) {
                return Err(Error::InvalidSpec(format!("query object {q:?} is not in the dataset")));
            }
        }
        Ok(())
    }
}

/// Knobs that change instrumentation or accelerators, never results.
#[derive(Clone, Debug, Default)]
pub struct QueryOptions {
    /// Record the ids of candidate-side points under pruned entries.
    pub trace: bool,
    /// 2D bounding-box pruning for skylines. `None` enables it when d = 2.
    pub qbox: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct QueryReport {
    /// Sorted ids.
    pub results: Vec<u64>,
    pub node_reads: u64,
    pub wall_time: Duration,
    /// Fast validation proved the answer empty without touching the index.
    pub validated_empty: bool,
    /// Survivors of the filter step.
    pub candidates: usize,
    /// Candidates examined during refinement.
    pub refinement_checks: usize,
    /// Ids of candidate-side points discarded by filtering (only with
    /// [`QueryOptions::trace`]).
    pub pruned: Vec<u64>,
}

/// What an engine hands back before timing and meter bookkeeping.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub results: Vec<u64>,
    pub validated_empty: bool,
    pub candidates: usize,
    pub refinement_checks: usize,
    pub pruned: Vec<u64>,
}

impl Outcome {
    pub fn empty() -> Self {
        Self { validated_empty: true, ..Self::default() }
    }
}

/// Run an inverse query with the multi-query filter engine.
///
/// In bichromatic mode `aux` holds the candidates and is required.
pub fn run_inverse_query(spec: &InverseQuerySpec, data: &AggRTree, aux: Option<&AggRTree>) -> Result<QueryReport> {
    let mut meter = AccessMeter::new();
    run_inverse_query_with(spec, data, aux, &QueryOptions::default(), &mut meter)
}

pub fn run_inverse_query_with(
    spec: &InverseQuerySpec,
    data: &AggRTree,
    aux: Option<&AggRTree>,
    opts: &QueryOptions,
    meter: &mut AccessMeter,
) -> Result<QueryReport> {
    let cands = resolve_candidates(spec, data, aux)?;
    let start = Instant::now();
    let before = meter.reads();
    let q = &spec.query;
    let out = match spec.predicate {
        Predicate::EpsRange(eps) => ieps::run(cands, q, eps, opts, meter),
        Predicate::Knn(k) => iknn::run(data, cands_if_bichromatic(spec, cands), q, k, opts, meter),
        Predicate::DynamicSkyline => idsq::run(data, cands_if_bichromatic(spec, cands), q, opts, meter),
    };
    Ok(finish(out, meter.reads() - before, start.elapsed()))
}

/// Validate the spec and pick the tree candidates are drawn from.
pub(crate) fn resolve_candidates<'a>(
    spec: &InverseQuerySpec,
    data: &'a AggRTree,
    aux: Option<&'a AggRTree>,
) -> Result<&'a AggRTree> {
    spec.validate(data)?;
    match spec.mode {
        Chromacity::Monochromatic => Ok(data),
        Chromacity::Bichromatic => {
            let aux = aux.ok_or_else(|| Error::InvalidSpec("bichromatic query needs a candidate dataset".into()))?;
            if aux.dim() != data.dim() {
                return Err(Error::DimensionMismatch { expected: data.dim(), got: aux.dim() });
            }
            Ok(aux)
        }
    }
}

fn cands_if_bichromatic<'a>(spec: &InverseQuerySpec, cands: &'a AggRTree) -> Option<&'a AggRTree> {
    (spec.mode == Chromacity::Bichromatic).then_some(cands)
}

pub(crate) fn finish(mut out: Outcome, node_reads: u64, wall_time: Duration) -> QueryReport {
    out.results.sort_unstable();
    out.pruned.sort_unstable();
    QueryReport {
        results: out.results,
        node_reads,
        wall_time,
        validated_empty: out.validated_empty,
        candidates: out.candidates,
        refinement_checks: out.refinement_checks,
        pruned: out.pruned,
    }
}
