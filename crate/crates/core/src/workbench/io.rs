//! Plain-text point files.
//!
//! One point per line, whitespace-separated numbers, `#` starts a comment.
//! If the first non-blank line is a comment beginning with `# id`, the first
//! column of every line is the point id; otherwise every column is a
//! coordinate and ids are assigned in line order starting at 0.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::datagen::normalize;

pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let with_ids = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.strip_prefix('#').is_some_and(|rest| rest.trim_start().starts_with("id")));
    let mut points = Vec::new();
    let mut dim = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|f| f.parse::<f64>().map_err(|_| err(format!("not a number: `{f}`"))))
            .collect::<Result<_>>()?;
        let (id, coords) = if with_ids {
            let (first, rest) = fields.split_first().ok_or_else(|| err("empty line".into()))?;
            if first.fract() != 0.0 || *first < 0.0 || *first > u64::MAX as f64 {
                return Err(err(format!("bad id `{first}`")));
            }
            (*first as u64, rest.to_vec())
        } else {
            (points.len() as u64, fields)
        };
        if coords.is_empty() {
            return Err(err("no coordinates".into()));
        }
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(err(format!("expected {d} coordinates, found {}", coords.len())));
            }
            _ => {}
        }
        points.push(Point::new(id, coords).map_err(|e| err(e.to_string()))?);
    }
    Ok(points)
}

pub fn read_points(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    parse_points(&fs::read_to_string(path)?)
}

/// Read, drop repeated ids (the first occurrence wins) and normalize.
pub fn ingest_points(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    let mut seen = HashSet::new();
    let points: Vec<Point> = read_points(path)?.into_iter().filter(|p| seen.insert(p.id)).collect();
    if points.is_empty() {
        return Err(Error::Empty("point file"));
    }
    Ok(normalize(points))
}

/// Write with an `# id` header so ids survive a round trip.
pub fn write_points(path: impl AsRef<Path>, points: &[Point]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let d = points.first().map_or(0, Point::dim);
    write!(out, "# id")?;
    for i in 0..d {
        write!(out, " x{i}")?;
    }
    writeln!(out)?;
    for p in points {
        write!(out, "{}", p.id)?;
        for c in p.coords() {
            write!(out, " {c}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_coordinates() {
        let pts = parse_points("0.1 0.2\n0.3 0.4\n\n# note\n0.5 0.6\n").unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2].id, 2);
        assert_eq!(pts[2].coords(), &[0.5, 0.6]);
    }

    #[test]
    fn id_column() {
        let pts = parse_points("# id x y\n7 0.1 0.2\n9 0.3 0.4 # trailing\n").unwrap();
        assert_eq!(pts.iter().map(|p| p.id).collect::<Vec<_>>(), vec![7, 9]);
        assert_eq!(pts[1].coords(), &[0.3, 0.4]);
    }

    #[test]
    fn malformed_line_is_named() {
        match parse_points("0.1 0.2\n0.3 oops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_points("1 2\n1 2 3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn round_trip_and_ingest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.txt");
        let pts = vec![
            Point::new(4, vec![2.0, 1.0 / 3.0]).unwrap(),
            Point::new(8, vec![4.0, 1.0]).unwrap(),
            Point::new(4, vec![9.0, 9.0]).unwrap(),
        ];
        write_points(&path, &pts).unwrap();
        let back = read_points(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[0].coords(), pts[0].coords());
        let ing = ingest_points(&path).unwrap();
        assert_eq!(ing.len(), 2);
        assert_eq!(ing[0].coords(), &[0.0, 0.0]);
        assert_eq!(ing[1].coords(), &[1.0, 1.0]);
    }
}
