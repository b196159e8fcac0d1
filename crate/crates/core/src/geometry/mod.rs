//! Planar geometry on yard coordinates: points, polylines, bounding boxes,
//! closed-form point/segment distance, arc-length resampling and the exact
//! quarter-turn transforms used to canonicalize routes.

mod index;

pub use index::SegmentIndex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polyline needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("non-finite coordinate at point {index}: ({x}, {y})")]
    NonFinite { index: usize, x: f64, y: f64 },
    #[error("cannot resample {current} points down to {requested}")]
    Shrink { current: usize, requested: usize },
    #[error("scale factor must be positive and finite, got {0}")]
    BadFactor(f64),
}

/// A position in yards. Serialized as a two-element `[x, y]` array.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn offset(&self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// Axis-aligned extents of a point set (closed box).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    /// `None` for an empty slice.
    pub fn of_points(points: &[Point]) -> Option<BoundingBox> {
        let first = points.first()?;
        let mut bb = BoundingBox {
            min_x: first.x,
            min_y: first.y,
            max_x: first.x,
            max_y: first.y,
        };
        for p in &points[1..] {
            bb.min_x = bb.min_x.min(p.x);
            bb.min_y = bb.min_y.min(p.y);
            bb.max_x = bb.max_x.max(p.x);
            bb.max_y = bb.max_y.max(p.y);
        }
        Some(bb)
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.x >= self.min_x - tol
            && p.x <= self.max_x + tol
            && p.y >= self.min_y - tol
            && p.y <= self.max_y + tol
    }

    pub fn contains_box(&self, other: &BoundingBox, tol: f64) -> bool {
        other.min_x >= self.min_x - tol
            && other.min_y >= self.min_y - tol
            && other.max_x <= self.max_x + tol
            && other.max_y <= self.max_y + tol
    }
}

/// An ordered sequence of at least two finite points.
///
/// Consecutive duplicates are allowed; they form zero-length segments which
/// the distance functions skip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline(Vec<Point>);

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            return Err(GeometryError::NonFinite {
                index,
                x: p.x,
                y: p.y,
            });
        }
        Ok(Polyline(points))
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self, GeometryError> {
        Polyline::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Point {
        self.0[0]
    }

    pub fn last(&self) -> Point {
        self.0[self.0.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.0.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    /// True when any consecutive pair of points coincides.
    pub fn is_degenerate(&self) -> bool {
        self.segments().any(|s| s.is_degenerate())
    }

    pub fn arc_length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    pub fn bounding_box(&self) -> BoundingBox {
        bounding_box(self)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.0
    }

    pub fn truncated(&self, len: usize) -> Result<Polyline, GeometryError> {
        Polyline::new(self.0[..len.min(self.0.len())].to_vec())
    }

    // Only used by the transforms below, which cannot break the invariants.
    fn map(&self, f: impl Fn(Point) -> Point) -> Polyline {
        Polyline(self.0.iter().map(|&p| f(p)).collect())
    }
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = GeometryError;

    fn try_from(points: Vec<Point>) -> Result<Self, Self::Error> {
        Polyline::new(points)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.0
    }
}

pub fn bounding_box(p: &Polyline) -> BoundingBox {
    BoundingBox::of_points(p.points()).expect("polyline is non-empty")
}

/// Shifts `p` so that its bounding box has its lower-left corner at the origin.
pub fn translate_to_origin(p: &Polyline) -> Polyline {
    let bb = bounding_box(p);
    let (dx, dy) = (bb.min_x, bb.min_y);
    if dx == 0.0 && dy == 0.0 {
        return p.clone();
    }
    p.map(|q| Point::new(q.x - dx, q.y - dy))
}

pub fn translate(p: &Polyline, dx: f64, dy: f64) -> Polyline {
    p.map(|q| q.offset(dx, dy))
}

/// Euclidean distance from `pt` to the closed segment `s`.
pub fn point_segment_distance(pt: Point, s: &Segment) -> f64 {
    let (dx, dy) = (s.b.x - s.a.x, s.b.y - s.a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return pt.distance(s.a);
    }
    let t = ((pt.x - s.a.x) * dx + (pt.y - s.a.y) * dy) / len2;
    if t <= 0.0 {
        pt.distance(s.a)
    } else if t >= 1.0 {
        pt.distance(s.b)
    } else {
        let foot = Point::new(s.a.x + t * dx, s.a.y + t * dy);
        pt.distance(foot)
    }
}

/// Minimum distance from `pt` to any non-degenerate segment of `p`.
///
/// When every segment has zero length the polyline is a single repeated
/// point and the distance to that point is returned.
pub fn min_distance_to_polyline(pt: Point, p: &Polyline) -> f64 {
    p.segments()
        .filter(|s| !s.is_degenerate())
        .map(|s| point_segment_distance(pt, &s))
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
        .unwrap_or_else(|| pt.distance(p.first()))
}

/// Inserts points along the existing segments until `p` has exactly `n`
/// points.
///
/// Original vertices are kept in place. The new points go to whichever
/// segment currently has the largest gap between neighbours, so the final
/// arc-length spacing is as even as the fixed vertices allow. Inserted
/// points are clamped to their segment's extent, so the bounding box is
/// unchanged bit for bit.
pub fn resample_to_count(p: &Polyline, n: usize) -> Result<Polyline, GeometryError> {
    let k = p.len();
    if n < k {
        return Err(GeometryError::Shrink {
            current: k,
            requested: n,
        });
    }
    if n == k {
        return Ok(p.clone());
    }

    let lengths: Vec<f64> = p.segments().map(|s| s.length()).collect();
    let mut extra = vec![0usize; lengths.len()];
    if lengths.iter().all(|&l| l == 0.0) {
        extra[0] = n - k;
    } else {
        for _ in 0..(n - k) {
            let mut best = 0;
            let mut best_gap = f64::NEG_INFINITY;
            for (i, (&len, &m)) in lengths.iter().zip(&extra).enumerate() {
                let gap = len / (m + 1) as f64;
                if gap > best_gap {
                    best_gap = gap;
                    best = i;
                }
            }
            extra[best] += 1;
        }
    }

    let mut out = Vec::with_capacity(n);
    for (seg, &m) in p.segments().zip(&extra) {
        out.push(seg.a);
        let (lo_x, hi_x) = (seg.a.x.min(seg.b.x), seg.a.x.max(seg.b.x));
        let (lo_y, hi_y) = (seg.a.y.min(seg.b.y), seg.a.y.max(seg.b.y));
        for j in 1..=m {
            let t = j as f64 / (m + 1) as f64;
            let x = seg.a.x + t * (seg.b.x - seg.a.x);
            let y = seg.a.y + t * (seg.b.y - seg.a.y);
            out.push(Point::new(x.clamp(lo_x, hi_x), y.clamp(lo_y, hi_y)));
        }
    }
    out.push(p.last());
    debug_assert_eq!(out.len(), n);
    Ok(Polyline(out))
}

pub fn scale_uniform(p: &Polyline, factor: f64) -> Result<Polyline, GeometryError> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(GeometryError::BadFactor(factor));
    }
    if factor == 1.0 {
        return Ok(p.clone());
    }
    Ok(p.map(|q| Point::new(q.x * factor, q.y * factor)))
}

/// Reflection about the y-axis.
pub fn mirror_x(p: &Polyline) -> Polyline {
    p.map(|q| Point::new(-q.x, q.y))
}

/// Counter-clockwise rotation about the origin by `quarter_turns` × 90°.
/// Negative values rotate clockwise.
pub fn rotate(p: &Polyline, quarter_turns: i32) -> Polyline {
    p.map(|q| rotate_point(q, quarter_turns))
}

pub fn rotate_point(q: Point, quarter_turns: i32) -> Point {
    match quarter_turns.rem_euclid(4) {
        0 => q,
        1 => Point::new(-q.y, q.x),
        2 => Point::new(-q.x, -q.y),
        _ => Point::new(q.y, -q.x),
    }
}
