use std::fmt;

use crate::error::{Error, Result};

/// A point in d-dimensional data space with a stable identifier.
#[derive(Clone, PartialEq)]
pub struct Point {
    pub id: u64,
    coords: Vec<f64>,
}

impl Point {
    pub fn new(id: u64, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(&c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(c));
        }
        Ok(Self { id, coords })
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean distance. Both points must share a dimensionality.
    #[inline]
    pub fn distance(&self, other: &Point) -> f64 {
        dist2(&self.coords, &other.coords).sqrt()
    }

    /// Same identity: equal id and equal coordinates.
    ///
    /// Two datasets may reuse ids, so the id alone does not identify an object
    /// once a second (bichromatic) dataset is involved.
    #[inline]
    pub fn same_object(&self, other: &Point) -> bool {
        self.id == other.id && self.coords == other.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{:?}", self.id, self.coords)
    }
}

/// Checked Euclidean distance.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(a.distance(b))
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(id: u64, c: &[f64]) -> Point {
        Point::new(id, c.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&p(0, &[0.0, 0.0]), &p(1, &[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(distance(&p(0, &[1.0, 1.0]), &p(1, &[1.0, 1.0])).unwrap(), 0.0);
        let d = distance(&p(0, &[0.0, 0.0]), &p(1, &[1.0, 1.0])).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = distance(&p(0, &[0.0]), &p(1, &[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1, got: 2 }));
    }

    #[test]
    fn rejects_bad_coordinates() {
        assert!(matches!(Point::new(0, vec![]), Err(Error::ZeroDimension)));
        assert!(matches!(Point::new(0, vec![f64::NAN]), Err(Error::NonFinite(_))));
        assert!(matches!(Point::new(0, vec![1.0, f64::INFINITY]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn identity_needs_id_and_coords() {
        assert!(p(3, &[1.0, 2.0]).same_object(&p(3, &[1.0, 2.0])));
        assert!(!p(3, &[1.0, 2.0]).same_object(&p(4, &[1.0, 2.0])));
        assert!(!p(3, &[1.0, 2.0]).same_object(&p(3, &[1.0, 2.5])));
    }
}
