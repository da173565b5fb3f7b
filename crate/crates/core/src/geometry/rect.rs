use crate::error::{Error, Result};

use super::point::Point;

/// Axis-aligned box with closed bounds. Bounds may be infinite.
///
/// A rectangle is empty when `lo[i] > hi[i]` in some dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Rect {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Rect {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(&c) = lo.iter().chain(&hi).find(|c| c.is_nan()) {
            return Err(Error::NonFinite(c));
        }
        Ok(Self { lo, hi })
    }

    pub fn from_point(p: &[f64]) -> Self {
        Self { lo: p.to_vec(), hi: p.to_vec() }
    }

    pub fn empty(dim: usize) -> Self {
        Self { lo: vec![f64::INFINITY; dim], hi: vec![f64::NEG_INFINITY; dim] }
    }

    pub fn unbounded(dim: usize) -> Self {
        Self { lo: vec![f64::NEG_INFINITY; dim], hi: vec![f64::INFINITY; dim] }
    }

    /// Smallest box containing every coordinate vector; empty if there are none.
    pub fn bounding<'a>(dim: usize, pts: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let mut r = Self::empty(dim);
        for p in pts {
            r.expand_point(p);
        }
        r
    }

    pub fn expand_point(&mut self, p: &[f64]) {
        for (i, &c) in p.iter().enumerate() {
            self.lo[i] = self.lo[i].min(c);
            self.hi[i] = self.hi[i].max(c);
        }
    }

    pub fn expand_rect(&mut self, other: &Rect) {
        for i in 0..self.dim() {
            self.lo[i] = self.lo[i].min(other.lo[i]);
            self.hi[i] = self.hi[i].max(other.hi[i]);
        }
    }

    /// Grown by `m` on every side.
    pub fn inflated(&self, m: f64) -> Rect {
        Rect { lo: self.lo.iter().map(|l| l - m).collect(), hi: self.hi.iter().map(|h| h + m).collect() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    #[inline]
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub(crate) fn bounds_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.lo, &mut self.hi)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        p.iter().enumerate().all(|(i, &c)| self.lo[i] <= c && c <= self.hi[i])
    }

    /// `other ⊆ self`. The empty rectangle is contained in everything.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.is_empty()
            || (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        (0..self.dim()).all(|i| {
            self.lo[i].max(other.lo[i]) <= self.hi[i].min(other.hi[i])
        })
    }

    pub fn intersection(&self, other: &Rect) -> Rect {
        let lo = (0..self.dim()).map(|i| self.lo[i].max(other.lo[i])).collect();
        let hi = (0..self.dim()).map(|i| self.hi[i].min(other.hi[i])).collect();
        Rect { lo, hi }
    }

    /// Squared distance from `p` to the nearest point of the box.
    pub fn min_dist2(&self, p: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, &c) in p.iter().enumerate() {
            let d = if c < self.lo[i] {
                self.lo[i] - c
            } else if c > self.hi[i] {
                c - self.hi[i]
            } else {
                0.0
            };
            s += d * d;
        }
        s
    }

    /// Squared distance from `p` to the farthest corner of the box.
    pub fn max_dist2(&self, p: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, &c) in p.iter().enumerate() {
            let d = (c - self.lo[i]).abs().max((self.hi[i] - c).abs());
            s += d * d;
        }
        s
    }

    /// Squared minimum distance between any two points of the boxes.
    pub fn min_dist2_rect(&self, other: &Rect) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let d = if other.hi[i] < self.lo[i] {
                self.lo[i] - other.hi[i]
            } else if other.lo[i] > self.hi[i] {
                other.lo[i] - self.hi[i]
            } else {
                0.0
            };
            s += d * d;
        }
        s
    }

    /// Squared maximum distance between any two points of the boxes.
    pub fn max_dist2_rect(&self, other: &Rect) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let d = (self.hi[i] - other.lo[i]).abs().max((other.hi[i] - self.lo[i]).abs());
            s += d * d;
        }
        s
    }

    /// All `2^d` corners (duplicates included for degenerate sides).
    pub fn corners(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let d = self.dim();
        (0..1usize << d).map(move |mask| {
            (0..d)
                .map(|i| if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] })
                .collect()
        })
    }
}

/// `(minDist, maxDist)` between a rectangle and a point.
pub fn rect_point_bounds(r: &Rect, p: &Point) -> Result<(f64, f64)> {
    if r.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), got: p.dim() });
    }
    if r.is_empty() {
        return Err(Error::EmptyRect);
    }
    Ok((r.min_dist2(p.coords()).sqrt(), r.max_dist2(p.coords()).sqrt()))
}

/// Something with distance bounds to a point: a point or a box.
pub trait Extent {
    fn min_dist2_to(&self, p: &[f64]) -> f64;
    fn max_dist2_to(&self, p: &[f64]) -> f64;
}

impl Extent for Rect {
    fn min_dist2_to(&self, p: &[f64]) -> f64 {
        self.min_dist2(p)
    }
    fn max_dist2_to(&self, p: &[f64]) -> f64 {
        self.max_dist2(p)
    }
}

impl Extent for Point {
    fn min_dist2_to(&self, p: &[f64]) -> f64 {
        super::point::dist2(self.coords(), p)
    }
    fn max_dist2_to(&self, p: &[f64]) -> f64 {
        super::point::dist2(self.coords(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Rect {
        Rect::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    fn p(c: &[f64]) -> Point {
        Point::new(0, c.to_vec()).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = rect_point_bounds(&unit(), &p(&[2.0, 0.0])).unwrap();
        assert_eq!(lo, 1.0);
        assert!((hi - 5f64.sqrt()).abs() < 1e-15);

        let (lo, hi) = rect_point_bounds(&unit(), &p(&[0.5, 0.5])).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.5f64.sqrt()).abs() < 1e-15);

        let (lo, hi) = rect_point_bounds(&unit(), &p(&[0.0, 0.0])).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bounds_reject_empty_rect() {
        assert!(matches!(rect_point_bounds(&Rect::empty(2), &p(&[0.0, 0.0])), Err(Error::EmptyRect)));
    }

    #[test]
    fn empty_is_distinguishable() {
        let a = Rect::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let b = Rect::new(vec![0.0, 2.0], vec![1.0, 3.0]).unwrap();
        assert!(a.intersection(&b).is_empty());
        assert!(!a.intersects(&b));
        assert!(!a.is_empty());
        assert!(Rect::empty(3).is_empty());
        assert!(a.contains_rect(&Rect::empty(2)));
    }

    #[test]
    fn rect_rect_distances() {
        let a = Rect::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let b = Rect::new(vec![1.5, 0.0], vec![2.0, 0.0]).unwrap();
        assert_eq!(a.min_dist2_rect(&b), 0.25);
        assert_eq!(a.max_dist2_rect(&b), 4.0);
        assert_eq!(unit().max_dist2_rect(&unit()), 2.0);
    }

    #[test]
    fn corners_cover_all_masks() {
        let c: Vec<_> = unit().corners().collect();
        assert_eq!(c.len(), 4);
        assert!(c.contains(&vec![1.0, 0.0]));
        assert!(c.contains(&vec![0.0, 1.0]));
    }
}
