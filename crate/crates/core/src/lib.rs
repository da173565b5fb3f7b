//! Inverse spatial queries over an aggregate R-tree.
//!
//! Given a set of query objects `Q` and a predicate (ε-range, kNN or dynamic
//! skyline), an inverse query returns every database object whose forward query
//! result contains all of `Q`. The engine follows a filter-refinement pipeline:
//! fast validation on `Q` alone, query-based pruning, object-based pruning during
//! a best-first traversal of the index, and exact refinement of the survivors.
//!
//! Two baselines (per-query reverse queries intersected, and single-query filter
//! plus verification) and a brute-force oracle are provided for comparison.
//!
//! ```
//! use invq::{run_inverse_query, AggRTree, InverseQuerySpec, Point, Predicate, QuerySet};
//!
//! let pts: Vec<Point> = (0..4).map(|i| Point::new(i, vec![i as f64, 0.0]).unwrap()).collect();
//! let tree = AggRTree::bulk_load(pts, 1024)?;
//! let q = QuerySet::new(vec![tree.point(1).clone(), tree.point(2).clone()])?;
//! let report = run_inverse_query(&InverseQuerySpec::new(Predicate::Knn(4), q), &tree, None)?;
//! assert_eq!(report.results, vec![0, 1, 2, 3]);
//! # Ok::<(), invq::Error>(())
//! ```

pub mod baselines;
pub mod error;
pub mod geometry;
pub mod index;
pub mod oracle;
pub mod predicate;
pub mod query;
pub mod verify;
pub mod workbench;

pub use error::{Error, Result};
pub use geometry::{Point, QuerySet, Rect};
pub use index::{AccessMeter, AggRTree};
pub use predicate::Predicate;
pub use query::{run_inverse_query, run_inverse_query_with, Chromacity, InverseQuerySpec, QueryOptions, QueryReport};
