//! Flat `key = value` experiment configuration. Lists are comma-separated and
//! `#` starts a comment.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::Algorithm;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    Uniform,
    Clustered,
    File(PathBuf),
}

/// Predicate family swept by an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredicateKind {
    Eps,
    Knn,
    Skyline,
}

impl PredicateKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ieps" | "eps" => Some(PredicateKind::Eps),
            "iknn" | "knn" => Some(PredicateKind::Knn),
            "idsq" | "skyline" => Some(PredicateKind::Skyline),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PredicateKind::Eps => "ieps",
            PredicateKind::Knn => "iknn",
            PredicateKind::Skyline => "idsq",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub n: usize,
    pub d: usize,
    pub predicates: Vec<PredicateKind>,
    pub eps: Vec<f64>,
    pub k: Vec<usize>,
    /// Query-set sizes for ε-range and kNN.
    pub qcounts: Vec<usize>,
    /// Query-set sizes for dynamic skylines.
    pub idsq_qcounts: Vec<usize>,
    pub extent: f64,
    pub page_size: usize,
    pub queries: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub clusters: usize,
    pub spread: f64,
    /// Measure wall time; when false the time column is written as 0 so runs
    /// are byte-for-byte reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSource::Uniform,
            n: 100_000,
            d: 3,
            predicates: vec![PredicateKind::Eps, PredicateKind::Knn, PredicateKind::Skyline],
            eps: vec![0.06],
            k: vec![100],
            qcounts: vec![10],
            idsq_qcounts: vec![4],
            extent: 0.0004,
            page_size: 1024,
            queries: 1000,
            seed: 1,
            algorithms: Algorithm::ALL.to_vec(),
            clusters: 5,
            spread: 0.02,
            timing: true,
        }
    }
}

fn bad(key: &str, msg: impl Into<String>) -> Error {
    Error::Config { key: key.to_string(), msg: msg.into() }
}

fn scalar<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(key, format!("cannot parse `{v}`")))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let out: Vec<T> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| scalar(key, s)).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(bad(key, "empty list"));
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: n + 1, msg: format!("expected key = value, got `{line}`") })?;
            let (key, v) = (key.trim(), value.trim());
            match key {
                "dataset" => {
                    c.dataset = match v {
                        "uniform" => DatasetSource::Uniform,
                        "clustered" => DatasetSource::Clustered,
                        path => DatasetSource::File(PathBuf::from(path)),
                    }
                }
                "n" => c.n = scalar(key, v)?,
                "d" => c.d = scalar(key, v)?,
                "predicates" => {
                    c.predicates = v
                        .split(',')
                        .map(|s| PredicateKind::parse(s).ok_or_else(|| bad(key, format!("unknown predicate `{}`", s.trim()))))
                        .collect::<Result<_>>()?
                }
                "eps" => c.eps = list(key, v)?,
                "k" => c.k = list(key, v)?,
                "qcounts" => c.qcounts = list(key, v)?,
                "idsq_qcounts" => c.idsq_qcounts = list(key, v)?,
                "extent" => c.extent = scalar(key, v)?,
                "page_size" => c.page_size = scalar(key, v)?,
                "queries" => c.queries = scalar(key, v)?,
                "seed" => c.seed = scalar(key, v)?,
                "algorithms" => {
                    c.algorithms = v
                        .split(',')
                        .map(|s| Algorithm::parse(s).ok_or_else(|| bad(key, format!("unknown algorithm `{}`", s.trim()))))
                        .collect::<Result<_>>()?
                }
                "clusters" => c.clusters = scalar(key, v)?,
                "spread" => c.spread = scalar(key, v)?,
                "timing" => c.timing = scalar(key, v)?,
                _ => return Err(bad(key, "unknown key")),
            }
        }
        c.check()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(bad("n", "must be positive"));
        }
        if self.d == 0 {
            return Err(bad("d", "must be positive"));
        }
        if !(self.extent > 0.0 && self.extent <= 1.0) {
            return Err(bad("extent", "must be in (0, 1]"));
        }
        if self.eps.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return Err(bad("eps", "must be finite and non-negative"));
        }
        if self.k.contains(&0) {
            return Err(bad("k", "must be positive"));
        }
        if self.qcounts.contains(&0) || self.idsq_qcounts.contains(&0) {
            return Err(bad("qcounts", "must be positive"));
        }
        if self.algorithms.is_empty() || self.predicates.is_empty() {
            return Err(bad("algorithms", "nothing to run"));
        }
        Ok(())
    }
}
