use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invq::baselines::Algorithm;
use invq::verify::verify;
use invq::workbench::{
    gen_clustered, gen_uniform, ingest_points, load_dataset, read_points, run_experiment, write_csv, write_csv_to,
    write_points, DatasetSource, ExperimentConfig,
};
use invq::{AggRTree, Error, InverseQuerySpec, Point, Predicate, QuerySet, Result};

#[derive(Parser)]
#[command(name = "invq", version, about = "Inverse ε-range, kNN and dynamic-skyline queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Clustered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pred {
    Ieps,
    Iknn,
    Idsq,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic dataset in [0,1]^d.
    GenData {
        #[arg(long = "dist", value_enum, default_value = "uniform")]
        kind: Kind,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        clusters: usize,
        #[arg(long, default_value_t = 0.02)]
        spread: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalize a point file to the unit cube and drop repeated ids.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one inverse query.
    Query {
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "type", value_enum)]
        pred: Pred,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        /// Query locations, e.g. "0.1,0.2;0.3,0.4". Each must match a data point.
        #[arg(long)]
        q: Option<String>,
        /// Point file of query locations; takes precedence over --q.
        #[arg(long)]
        q_file: Option<PathBuf>,
        #[arg(long, default_value = "mqf")]
        algo: String,
        /// Candidate file for bichromatic queries.
        #[arg(long)]
        bichromatic: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        page_size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a benchmark sweep and write a CSV.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dataset file overriding the configured source.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Output CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every algorithm against brute force on random instances.
    Verify {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_locations(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| Error::InvalidSpec(format!("bad coordinate `{c}` in --q"))))
                .collect()
        })
        .collect()
}

fn resolve(data: &[Point], locs: &[Vec<f64>]) -> Result<QuerySet> {
    let members = locs
        .iter()
        .map(|c| {
            data.iter()
                .find(|p| p.coords() == c.as_slice())
                .cloned()
                .ok_or_else(|| Error::InvalidSpec(format!("no data point at {c:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    QuerySet::new(members).map_err(|e| Error::InvalidSpec(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn query(
    data: PathBuf,
    pred: Pred,
    eps: Option<f64>,
    k: Option<usize>,
    q: Option<String>,
    q_file: Option<PathBuf>,
    algo: &str,
    bichromatic: Option<PathBuf>,
    page_size: usize,
    seed: u64,
) -> Result<()> {
    let algo = Algorithm::parse(algo).ok_or_else(|| Error::InvalidSpec(format!("unknown algorithm `{algo}`")))?;
    let predicate = match pred {
        Pred::Ieps => Predicate::EpsRange(eps.ok_or_else(|| Error::InvalidSpec("--eps is required".into()))?),
        Pred::Iknn => Predicate::Knn(k.ok_or_else(|| Error::InvalidSpec("--k is required".into()))?),
        Pred::Idsq => Predicate::DynamicSkyline,
    };
    let points = read_points(&data)?;
    let locs = match (q_file, q) {
        (Some(f), _) => read_points(f)?.iter().map(|p| p.coords().to_vec()).collect(),
        (None, Some(s)) => parse_locations(&s)?,
        (None, None) => return Err(Error::InvalidSpec("one of --q or --q-file is required".into())),
    };
    let qs = resolve(&points, &locs)?;
    let tree = AggRTree::bulk_load(points, page_size)?;
    let aux = bichromatic.map(|p| read_points(p).and_then(|c| AggRTree::bulk_load(c, page_size))).transpose()?;
    let spec = match aux {
        Some(_) => InverseQuerySpec::bichromatic(predicate, qs),
        None => InverseQuerySpec::new(predicate, qs),
    };
    let rep = algo.run(&spec, &tree, aux.as_ref(), seed)?;
    let ids: Vec<String> = rep.results.iter().map(u64::to_string).collect();
    println!("results: {}", if ids.is_empty() { "(none)".to_string() } else { ids.join(" ") });
    println!("count: {}", rep.results.len());
    println!("node reads: {}", rep.node_reads);
    println!("time: {:.3} ms", rep.wall_time.as_secs_f64() * 1e3);
    if rep.validated_empty {
        println!("fast-validation: empty");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::GenData { kind, n, d, seed, clusters, spread, out } => {
            let pts = match kind {
                Kind::Uniform => gen_uniform(n, d, seed)?,
                Kind::Clustered => gen_clustered(n, d, seed, clusters, spread)?,
            };
            write_points(&out, &pts)?;
            eprintln!("wrote {} points to {}", pts.len(), out.display());
        }
        Cmd::Ingest { input, out } => {
            let pts = ingest_points(&input)?;
            write_points(&out, &pts)?;
            eprintln!("wrote {} points to {}", pts.len(), out.display());
        }
        Cmd::Query { data, pred, eps, k, q, q_file, algo, bichromatic, page_size, seed } => {
            query(data, pred, eps, k, q, q_file, &algo, bichromatic, page_size, seed)?
        }
        Cmd::Bench { config, data, out } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default(),
            };
            if let Some(p) = data {
                cfg.dataset = DatasetSource::File(p);
            }
            let rows = run_experiment(&cfg, load_dataset(&cfg)?)?;
            match out {
                Some(p) => write_csv(p, &rows)?,
                None => write_csv_to(std::io::stdout().lock(), &rows)?,
            }
        }
        Cmd::Verify { n, d, trials, seed } => {
            let rep = verify(n, d, trials, seed)?;
            println!("{} instances, {} checks, {} mismatches", rep.instances, rep.checks, rep.mismatches.len());
            if let Some(m) = rep.mismatches.first() {
                println!("{m}");
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidSpec(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
