use super::{point_segment_distance, BoundingBox, Point, Polyline, Segment};

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone)]
struct Node {
    bbox: BoundingBox,
    // leaf: segments[lo..hi]; inner: children at `lo` and `hi`
    lo: u32,
    hi: u32,
    leaf: bool,
}

/// Bounding-box tree over the segments of one polyline.
///
/// `nearest_distance` returns exactly what [`super::min_distance_to_polyline`]
/// returns (same candidate segments, same distance function). Consecutive
/// segments of a route are close together, so the tree is built over runs
/// of the polyline in order, and a query prunes everything whose box is
/// farther than the best segment found so far.
#[derive(Debug, Clone)]
pub struct SegmentIndex {
    segments: Vec<Segment>,
    // Set when every segment is zero-length.
    lone_point: Option<Point>,
    nodes: Vec<Node>,
}

fn segment_box(s: &[Segment]) -> BoundingBox {
    let mut b = BoundingBox {
        min_x: f64::INFINITY,
        min_y: f64::INFINITY,
        max_x: f64::NEG_INFINITY,
        max_y: f64::NEG_INFINITY,
    };
    for seg in s {
        for p in [seg.a, seg.b] {
            b.min_x = b.min_x.min(p.x);
            b.min_y = b.min_y.min(p.y);
            b.max_x = b.max_x.max(p.x);
            b.max_y = b.max_y.max(p.y);
        }
    }
    b
}

fn box_distance_sq(b: &BoundingBox, p: Point) -> f64 {
    let dx = (b.min_x - p.x).max(0.0).max(p.x - b.max_x);
    let dy = (b.min_y - p.y).max(0.0).max(p.y - b.max_y);
    dx * dx + dy * dy
}

impl SegmentIndex {
    pub fn new(p: &Polyline) -> Self {
        let segments: Vec<Segment> = p.segments().filter(|s| !s.is_degenerate()).collect();
        if segments.is_empty() {
            return SegmentIndex {
                segments,
                lone_point: Some(p.first()),
                nodes: Vec::new(),
            };
        }
        let mut index = SegmentIndex {
            nodes: Vec::with_capacity(2 * segments.len() / LEAF_SIZE + 2),
            segments,
            lone_point: None,
        };
        index.build(0, index.segments.len());
        index
    }

    fn build(&mut self, lo: usize, hi: usize) -> u32 {
        let id = self.nodes.len();
        self.nodes.push(Node {
            bbox: segment_box(&self.segments[lo..hi]),
            lo: lo as u32,
            hi: hi as u32,
            leaf: true,
        });
        if hi - lo > LEAF_SIZE {
            let mid = lo + (hi - lo) / 2;
            let left = self.build(lo, mid);
            let right = self.build(mid, hi);
            let node = &mut self.nodes[id];
            node.lo = left;
            node.hi = right;
            node.leaf = false;
        }
        id as u32
    }

    /// Distance from `p` to the nearest non-degenerate segment.
    pub fn nearest_distance(&self, p: Point) -> f64 {
        if let Some(q) = self.lone_point {
            return p.distance(q);
        }
        let mut best = f64::INFINITY;
        // boxes are compared with a little slack so rounding in the box
        // bound can never hide the true nearest segment
        let prune = |d2: f64, best: f64| d2 > best * best * (1.0 + 1e-9);
        let mut stack: Vec<u32> = Vec::with_capacity(32);
        stack.push(0);
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if prune(box_distance_sq(&node.bbox, p), best) {
                continue;
            }
            if node.leaf {
                for s in &self.segments[node.lo as usize..node.hi as usize] {
                    let d = point_segment_distance(p, s);
                    if d < best {
                        best = d;
                    }
                }
            } else {
                // nearer child on top of the stack
                let (a, b) = (node.lo, node.hi);
                let da = box_distance_sq(&self.nodes[a as usize].bbox, p);
                let db = box_distance_sq(&self.nodes[b as usize].bbox, p);
                if da <= db {
                    stack.push(b);
                    stack.push(a);
                } else {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        best
    }

    /// Sum of nearest distances for every point of `points`, each displaced
    /// by `(dx, dy)` before the query.
    pub fn sum_distances(&self, points: &[Point], dx: f64, dy: f64) -> f64 {
        points
            .iter()
            .map(|p| self.nearest_distance(p.offset(dx, dy)))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::min_distance_to_polyline;
    use proptest::prelude::*;

    #[test]
    fn lone_point_polyline() {
        let p = Polyline::from_xy(&[(3.0, 4.0), (3.0, 4.0)]).unwrap();
        let idx = SegmentIndex::new(&p);
        assert_eq!(idx.nearest_distance(Point::ORIGIN), 5.0);
    }

    #[test]
    fn straight_line() {
        let p = Polyline::from_xy(&[(0.0, 0.0), (0.0, 10.0)]).unwrap();
        let idx = SegmentIndex::new(&p);
        assert_eq!(idx.nearest_distance(Point::new(2.0, 5.0)), 2.0);
        assert_eq!(idx.nearest_distance(Point::new(0.0, 13.0)), 3.0);
        assert_eq!(idx.nearest_distance(Point::new(-100.0, -100.0)), 100.0 * 2f64.sqrt());
    }

    fn coord() -> impl Strategy<Value = f64> {
        -30.0..30.0f64
    }

    proptest! {
        #[test]
        fn agrees_exactly_with_brute_force(
            pts in prop::collection::vec((coord(), coord()), 2..60),
            queries in prop::collection::vec((-60.0..60.0f64, -60.0..60.0f64), 1..30),
        ) {
            let p = Polyline::from_xy(&pts).unwrap();
            let idx = SegmentIndex::new(&p);
            for (x, y) in queries {
                let q = Point::new(x, y);
                prop_assert_eq!(idx.nearest_distance(q), min_distance_to_polyline(q, &p));
            }
        }

        #[test]
        fn agrees_on_dense_walks(
            steps in prop::collection::vec((-1.0..1.0f64, -0.2..1.0f64), 2..80),
            queries in prop::collection::vec((-5.0..5.0f64, -5.0..40.0f64), 1..30),
        ) {
            let mut cur = Point::ORIGIN;
            let mut pts = vec![cur];
            for (dx, dy) in steps {
                cur = cur.offset(dx, dy);
                pts.push(cur);
            }
            let p = Polyline::new(pts).unwrap();
            let idx = SegmentIndex::new(&p);
            for (x, y) in queries {
                let q = Point::new(x, y);
                prop_assert_eq!(idx.nearest_distance(q), min_distance_to_polyline(q, &p));
            }
        }
    }
}
