//! Closed convex-hull membership.
//!
//! 2D uses a monotone-chain hull with an edge-side test; higher dimensions test
//! whether the point is a convex combination of the generators via a phase-1
//! simplex. Degenerate hulls (coincident or collinear generators) are handled as
//! lower-dimensional sets.

/// Residual tolerance for hull membership.
pub const HULL_TOL: f64 = 1e-9;

const PIVOT_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Hull {
    Interval(f64, f64),
    Planar(Hull2),
    General(Vec<Vec<f64>>),
}

#[derive(Clone, Debug)]
pub enum Hull2 {
    Point([f64; 2]),
    Segment([f64; 2], [f64; 2]),
    /// Counter-clockwise vertices, no collinear triples.
    Polygon(Vec<[f64; 2]>),
}

impl Hull {
    pub fn build<'a>(dim: usize, pts: impl IntoIterator<Item = &'a [f64]>) -> Hull {
        let pts: Vec<&[f64]> = pts.into_iter().collect();
        match dim {
            1 => {
                let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                Hull::Interval(lo, hi)
            }
            2 => {
                let v: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
                Hull::Planar(Hull2::from_vertices(&monotone_chain(&v)))
            }
            _ => Hull::General(pts.iter().map(|p| p.to_vec()).collect()),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Hull::Interval(lo, hi) => p[0] >= lo - HULL_TOL && p[0] <= hi + HULL_TOL,
            Hull::Planar(h) => h.contains([p[0], p[1]]),
            Hull::General(gens) => in_convex_combination(gens, p),
        }
    }

    /// 2D hull vertices, when planar.
    pub fn vertices_2d(&self) -> Option<Vec<[f64; 2]>> {
        match self {
            Hull::Planar(Hull2::Point(a)) => Some(vec![*a]),
            Hull::Planar(Hull2::Segment(a, b)) => Some(vec![*a, *b]),
            Hull::Planar(Hull2::Polygon(v)) => Some(v.clone()),
            _ => None,
        }
    }
}

impl Hull2 {
    fn from_vertices(v: &[[f64; 2]]) -> Hull2 {
        match v.len() {
            1 => Hull2::Point(v[0]),
            2 => Hull2::Segment(v[0], v[1]),
            _ => Hull2::Polygon(v.to_vec()),
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Hull2::Point(a) => dist2_2(*a, p) <= HULL_TOL * HULL_TOL,
            Hull2::Segment(a, b) => seg_dist2(*a, *b, p) <= HULL_TOL * HULL_TOL,
            Hull2::Polygon(v) => (0..v.len()).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                let len = dist2_2(a, b).sqrt();
                cross(a, b, p) >= -HULL_TOL * len
            }),
        }
    }
}

#[inline]
fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
fn dist2_2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn seg_dist2(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
    };
    dist2_2([a[0] + t * ab[0], a[1] + t * ab[1]], p)
}

/// Andrew's monotone chain. Returns counter-clockwise hull vertices without
/// collinear points; one vertex for coincident input, two for collinear input.
pub fn monotone_chain(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Is `p` a convex combination of `gens` (within [`HULL_TOL`])?
pub fn in_convex_combination(gens: &[Vec<f64>], p: &[f64]) -> bool {
    let d = p.len();
    for i in 0..d {
        let lo = gens.iter().map(|g| g[i]).fold(f64::INFINITY, f64::min);
        let hi = gens.iter().map(|g| g[i]).fold(f64::NEG_INFINITY, f64::max);
        if p[i] < lo - HULL_TOL || p[i] > hi + HULL_TOL {
            return false;
        }
    }
    phase_one_residual(gens, p) <= HULL_TOL
}

/// Minimal total residual `Σ|A λ − b|` over `λ ≥ 0` for the system
/// `Σ λ_j (g_j − p) = 0, Σ λ_j = 1`, found with Bland's-rule simplex.
fn phase_one_residual(gens: &[Vec<f64>], p: &[f64]) -> f64 {
    let d = p.len();
    let m = gens.len();
    let rows = d + 1;
    let cols = m + rows;
    let rhs = cols;
    let mut t = vec![vec![0.0; cols + 1]; rows];
    for (j, g) in gens.iter().enumerate() {
        for i in 0..d {
            t[i][j] = g[i] - p[i];
        }
        t[d][j] = 1.0;
    }
    t[d][rhs] = 1.0;
    // Equality rows with negative coefficients are fine; rhs is already >= 0.
    for (i, row) in t.iter_mut().enumerate() {
        row[m + i] = 1.0;
    }
    let mut basis: Vec<usize> = (m..m + rows).collect();
    let mut obj = vec![0.0; cols + 1];
    for row in &t {
        for j in 0..m {
            obj[j] -= row[j];
        }
        obj[rhs] -= row[rhs];
    }

    let max_iter = 50 * (cols + rows);
    for _ in 0..max_iter {
        let Some(enter) = (0..cols).find(|&j| obj[j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][rhs] / t[i][enter];
                let better = ratio < best - PIVOT_EPS
                    || (ratio <= best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded cannot happen for a phase-1 objective bounded below by 0.
            break;
        };
        let piv = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && row[enter] != 0.0 {
                let f = row[enter];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = obj[enter];
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        basis[r] = enter;
    }
    (-obj[rhs]).max(0.0)
}
