//! Datasets, query-set sampling and benchmark runs.

pub mod config;
pub mod datagen;
pub mod experiment;
pub mod io;
pub mod queryset;

pub use config::{DatasetSource, ExperimentConfig, PredicateKind};
pub use datagen::{cluster_sizes, gen_clustered, gen_uniform, normalize};
pub use experiment::{load_dataset, run_experiment, write_csv, write_csv_to, ResultRow, CSV_HEADER};
pub use io::{ingest_points, parse_points, read_points, write_points};
pub use queryset::{extent_side, gen_query_set, sample_query_set, QuerySample};
