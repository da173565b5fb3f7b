use super::point::Point;
use super::rect::Rect;

/// `a` dynamically dominates `b` with respect to `c`: at least as close to `c`
/// in every dimension and strictly closer in one.
pub fn dynamic_dominates(a: &Point, b: &Point, c: &Point) -> bool {
    dominates_coords(a.coords(), b.coords(), c.coords())
}

pub(crate) fn dominates_coords(a: &[f64], b: &[f64], c: &[f64]) -> bool {
    let mut strict = false;
    for i in 0..c.len() {
        let da = (a[i] - c[i]).abs();
        let db = (b[i] - c[i]).abs();
        if da > db {
            return false;
        }
        if da < db {
            strict = true;
        }
    }
    strict
}

/// The box of viewpoints `c` from which `o` dominates `q`.
///
/// Per dimension: `[(q+o)/2, +∞)` when `q < o`, `(-∞, (q+o)/2]` when `q > o`,
/// and the whole line when the coordinates are equal.
pub fn pruning_region(q: &Point, o: &Point) -> Rect {
    pruning_region_coords(q.coords(), o.coords())
}

pub(crate) fn pruning_region_coords(q: &[f64], o: &[f64]) -> Rect {
    let d = q.len();
    let mut lo = vec![f64::NEG_INFINITY; d];
    let mut hi = vec![f64::INFINITY; d];
    for i in 0..d {
        let mid = 0.5 * (q[i] + o[i]);
        if q[i] < o[i] {
            lo[i] = mid;
        } else if q[i] > o[i] {
            hi[i] = mid;
        }
    }
    Rect::new(lo, hi).expect("finite midpoints")
}

/// Slack around the midpoint of `a` and `b`. Comparing `|c - a|` with `|c - b|`
/// in floating point can disagree with `c` against the rounded midpoint, so
/// midpoint tests only fire with this much clearance.
pub(crate) fn mid_margin(a: f64, b: f64) -> f64 {
    1e-12 * (1.0 + a.abs() + b.abs())
}

/// The pruning region shrunk by [`mid_margin`] on every finite side.
pub(crate) fn pruning_region_safe(q: &[f64], o: &[f64]) -> Rect {
    let mut r = pruning_region_coords(q, o);
    let (lo, hi) = r.bounds_mut();
    for i in 0..q.len() {
        let m = mid_margin(q[i], o[i]);
        if lo[i].is_finite() {
            lo[i] += m;
        }
        if hi[i].is_finite() {
            hi[i] -= m;
        }
    }
    r
}

/// Every point of `x` is a viewpoint from which the region's generator strictly
/// dominates: `x` lies in the closed region and strictly beyond at least one
/// finite bound. Boundary-only contact does not prune since dominance there can
/// be non-strict.
pub fn region_prunes(region: &Rect, x: &Rect) -> bool {
    if !region.contains_rect(x) || x.is_empty() {
        return false;
    }
    (0..x.dim()).any(|i| {
        (region.lo()[i].is_finite() && x.lo()[i] > region.lo()[i])
            || (region.hi()[i].is_finite() && x.hi()[i] < region.hi()[i])
    })
}
