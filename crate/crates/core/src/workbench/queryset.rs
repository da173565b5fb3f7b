use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, QuerySet, Rect};

/// Re-anchoring attempts before giving up.
pub const MAX_ANCHORS: usize = 1000;

/// Side of the cube whose volume is `extent` in `d` dimensions.
pub fn extent_side(extent: f64, d: usize) -> f64 {
    extent.powf(1.0 / d as f64)
}

/// A sampled query set and the cube it was drawn from.
#[derive(Clone, Debug)]
pub struct QuerySample {
    pub query: QuerySet,
    pub cube: Rect,
    /// Anchors tried, including the successful one.
    pub anchors: usize,
}

/// `m` distinct dataset points from a random cube of volume `extent` that
/// contains a random anchor point. The cube is placed inside `[0,1]^d` when
/// the anchor allows it, so `extent = 1` covers the whole space.
pub fn gen_query_set(points: &[Point], m: usize, extent: f64, seed: u64) -> Result<QuerySet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_query_set(points, m, extent, &mut rng)?.query)
}

pub fn sample_query_set<R: Rng>(points: &[Point], m: usize, extent: f64, rng: &mut R) -> Result<QuerySample> {
    if m == 0 {
        return Err(Error::InvalidSpec("query set size must be at least 1".into()));
    }
    if !(extent > 0.0 && extent <= 1.0) {
        return Err(Error::InvalidSpec(format!("extent must be in (0, 1], got {extent}")));
    }
    if m > points.len() {
        return Err(Error::InvalidSpec(format!("cannot draw {m} query points from {} objects", points.len())));
    }
    let d = points[0].dim();
    let side = extent_side(extent, d);
    for attempt in 1..=MAX_ANCHORS {
        let anchor = &points[rng.random_range(0..points.len())];
        let lo: Vec<f64> = anchor
            .coords()
            .iter()
            .map(|&a| {
                // Keep the cube inside the unit data space when possible.
                let (min, max) = ((a - side).max(0.0), a.min(1.0 - side));
                let u = rng.random::<f64>();
                if min <= max { min + u * (max - min) } else { a - u * side }
            })
            .collect();
        let hi: Vec<f64> = lo.iter().map(|l| l + side).collect();
        let cube = Rect::new(lo, hi)?;
        let inside: Vec<&Point> = points.iter().filter(|p| cube.contains_point(p.coords())).collect();
        if inside.len() < m {
            continue;
        }
        let picked = rand::seq::index::sample(rng, inside.len(), m);
        let members = picked.into_iter().map(|i| inside[i].clone()).collect();
        return Ok(QuerySample { query: QuerySet::new(members)?, cube, anchors: attempt });
    }
    Err(Error::QuerySampling { wanted: m, attempts: MAX_ANCHORS })
}
