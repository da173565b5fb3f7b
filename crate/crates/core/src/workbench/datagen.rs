use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::Point;

fn check(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty("dataset"));
    }
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(())
}

/// `n` points uniform in `[0,1]^d` with ids `0..n`.
pub fn gen_uniform(n: usize, d: usize, seed: u64) -> Result<Vec<Point>> {
    check(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| Point::new(i as u64, (0..d).map(|_| rng.random::<f64>()).collect())).collect()
}

/// Blob sizes: `n / clusters` each, the remainder spread over the first blobs.
pub fn cluster_sizes(n: usize, clusters: usize) -> Vec<usize> {
    let c = clusters.max(1);
    (0..c).map(|i| n / c + usize::from(i < n % c)).collect()
}

/// Gaussian blobs (per-axis standard deviation `spread`) around uniform
/// centres, then normalized. Points are numbered blob by blob in the order of
/// [`cluster_sizes`].
pub fn gen_clustered(n: usize, d: usize, seed: u64, clusters: usize, spread: f64) -> Result<Vec<Point>> {
    check(n, d)?;
    if clusters == 0 {
        return Err(Error::InvalidSpec("need at least one cluster".into()));
    }
    let noise = Normal::new(0.0, spread).map_err(|e| Error::InvalidSpec(format!("spread {spread}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..clusters).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
    let mut points = Vec::with_capacity(n);
    for (center, size) in centers.iter().zip(cluster_sizes(n, clusters)) {
        for _ in 0..size {
            let coords = center.iter().map(|c| c + noise.sample(&mut rng)).collect();
            points.push(Point::new(points.len() as u64, coords)?);
        }
    }
    Ok(normalize(points))
}

/// Min-max scale every dimension onto `[0,1]`; a constant dimension maps to 0.
pub fn normalize(points: Vec<Point>) -> Vec<Point> {
    let Some(d) = points.first().map(Point::dim) else {
        return points;
    };
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in &points {
        for (i, &c) in p.coords().iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    points
        .into_iter()
        .map(|p| {
            let id = p.id;
            let coords = p
                .into_coords()
                .into_iter()
                .enumerate()
                .map(|(i, c)| if hi[i] > lo[i] { ((c - lo[i]) / (hi[i] - lo[i])).clamp(0.0, 1.0) } else { 0.0 })
                .collect();
            Point::new(id, coords).expect("scaled coordinates are finite")
        })
        .collect()
}
