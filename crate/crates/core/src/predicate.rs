//! Forward predicates and the membership rule `q ∈ P(r)` shared by the
//! engine, the baselines and the oracle.
//!
//! Conventions: ε-balls are closed; kNN ranks exclude `r` itself and are
//! tie-permissive (`q ∈ kNN(r)` iff fewer than `k` other objects are strictly
//! closer to `r` than `q`); dynamic skylines exclude `r` and use strict
//! dominance.

use std::fmt;

use crate::geometry::{dist2, dominates_coords, Point};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Predicate {
    EpsRange(f64),
    Knn(usize),
    DynamicSkyline,
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::EpsRange(_) => "ieps",
            Predicate::Knn(_) => "iknn",
            Predicate::DynamicSkyline => "idsq",
        }
    }

    /// The numeric parameter (ε or k); 0 for skylines.
    pub fn param(&self) -> f64 {
        match *self {
            Predicate::EpsRange(e) => e,
            Predicate::Knn(k) => k as f64,
            Predicate::DynamicSkyline => 0.0,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::EpsRange(e) => write!(f, "ieps(eps={e})"),
            Predicate::Knn(k) => write!(f, "iknn(k={k})"),
            Predicate::DynamicSkyline => write!(f, "idsq"),
        }
    }
}

/// `q` lies in the closed ε-ball around `r`, given their squared distance.
#[inline]
pub fn eps_rule(d2: f64, eps: f64) -> bool {
    d2 <= eps * eps
}

/// `q` is among the k nearest neighbours of `r`, given the number of other
/// objects strictly closer to `r` than `q`.
#[inline]
pub fn knn_rule(strictly_closer: u64, k: usize) -> bool {
    strictly_closer < k as u64
}

/// `q ∈ P(r)` by exhaustive scan over `points` (the dataset `r` is judged
/// against).
pub fn holds(points: &[Point], r: &Point, q: &Point, pred: Predicate) -> bool {
    match pred {
        Predicate::EpsRange(eps) => eps_rule(dist2(r.coords(), q.coords()), eps),
        Predicate::Knn(k) => {
            let dq = dist2(r.coords(), q.coords());
            let mut closer = 0u64;
            for p in points {
                if !p.same_object(r) && dist2(r.coords(), p.coords()) < dq {
                    closer += 1;
                    if !knn_rule(closer, k) {
                        return false;
                    }
                }
            }
            true
        }
        Predicate::DynamicSkyline => {
            !points.iter().any(|p| !p.same_object(r) && dominates_coords(p.coords(), q.coords(), r.coords()))
        }
    }
}

/// Points of `points` in the dynamic skyline of `c`; `c` itself is left out.
pub fn dynamic_skyline<'a>(points: &[&'a Point], c: &Point) -> Vec<&'a Point> {
    let others: Vec<&Point> = points.iter().copied().filter(|p| !p.same_object(c)).collect();
    others
        .iter()
        .copied()
        .filter(|p| !others.iter().any(|o| dominates_coords(o.coords(), p.coords(), c.coords())))
        .collect()
}
