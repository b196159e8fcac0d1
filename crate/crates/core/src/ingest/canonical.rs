use super::{AttackDirection, CanonicalRoute, RawRoute};
use crate::geometry::{rotate_point, Point, Polyline};

/// Rigid map from one play's field coordinates into the canonical frame of
/// one receiver: snap position at the origin, attack direction +y, ball on
/// the +x side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    origin: Point,
    quarter_turns: i32,
    mirror: bool,
}

impl CanonicalFrame {
    pub fn new(snap: Point, ball: Point, direction: AttackDirection) -> Self {
        let quarter_turns = match direction {
            AttackDirection::Up => 0,
            AttackDirection::Right => 1,
            AttackDirection::Down => 2,
            AttackDirection::Left => 3,
        };
        let ball = rotate_point(Point::new(ball.x - snap.x, ball.y - snap.y), quarter_turns);
        CanonicalFrame {
            origin: snap,
            quarter_turns,
            // receiver lined up right of the ball; exactly level stays put
            mirror: ball.x < 0.0,
        }
    }

    pub fn mirrored(&self) -> bool {
        self.mirror
    }

    pub fn apply(&self, p: Point) -> Point {
        let q = rotate_point(
            Point::new(p.x - self.origin.x, p.y - self.origin.y),
            self.quarter_turns,
        );
        if self.mirror {
            Point::new(-q.x, q.y)
        } else {
            q
        }
    }

    /// Maps a canonical point back to field coordinates.
    pub fn invert(&self, q: Point) -> Point {
        let q = if self.mirror { Point::new(-q.x, q.y) } else { q };
        let p = rotate_point(q, -self.quarter_turns);
        Point::new(p.x + self.origin.x, p.y + self.origin.y)
    }
}

pub fn canonicalize(route: &RawRoute, direction: AttackDirection) -> CanonicalRoute {
    let frame = CanonicalFrame::new(route.snap_point, route.ball_snap_point, direction);
    let points = route.points.points().iter().map(|&p| frame.apply(p)).collect();
    CanonicalRoute {
        id: route.id,
        position: route.position.clone(),
        points: Polyline::new(points).expect("rigid map keeps points finite"),
        cutoff_s: route.cutoff_time_s,
    }
}

/// Largest distance of any sample from the route's first sample.
pub fn movement_extent(route: &CanonicalRoute) -> f64 {
    let start = route.points.first();
    route
        .points
        .points()
        .iter()
        .map(|p| p.distance(start))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::RouteId;
    use proptest::prelude::*;

    fn raw(points: &[(f64, f64)], snap: Point, ball: Point, d: AttackDirection) -> RawRoute {
        RawRoute {
            id: RouteId::new(1, 2, 3),
            position: "WR".into(),
            points: Polyline::from_xy(points).unwrap(),
            snap_point: snap,
            ball_snap_point: ball,
            direction: d,
            cutoff_time_s: 1.0,
        }
    }

    fn canonical(points: &[(f64, f64)]) -> CanonicalRoute {
        CanonicalRoute {
            id: RouteId::default(),
            position: "WR".into(),
            points: Polyline::from_xy(points).unwrap(),
            cutoff_s: 1.0,
        }
    }

    #[test]
    fn already_canonical_is_translation_only() {
        let r = raw(
            &[(5.0, 5.0), (5.0, 10.0), (8.0, 12.0)],
            Point::new(5.0, 5.0),
            Point::new(12.0, 5.0),
            AttackDirection::Up,
        );
        let c = canonicalize(&r, AttackDirection::Up);
        assert_eq!(c.points, Polyline::from_xy(&[(0.0, 0.0), (0.0, 5.0), (3.0, 7.0)]).unwrap());
    }

    #[test]
    fn left_and_right_of_ball_agree() {
        // attacking +x; ball at y = 26.65; receivers 10 yards either side
        // break toward the middle after a 5-yard stem
        let ball = Point::new(30.0, 26.65);
        let left = raw(
            &[(30.0, 36.65), (35.0, 36.65), (37.0, 34.65)],
            Point::new(30.0, 36.65),
            ball,
            AttackDirection::Right,
        );
        let right = raw(
            &[(30.0, 16.65), (35.0, 16.65), (37.0, 18.65)],
            Point::new(30.0, 16.65),
            ball,
            AttackDirection::Right,
        );
        let a = canonicalize(&left, AttackDirection::Right);
        let b = canonicalize(&right, AttackDirection::Right);
        for (p, q) in a.points.points().iter().zip(b.points.points()) {
            assert!(p.distance(*q) < 1e-12, "{p:?} vs {q:?}");
        }
        // upfield is +y, the break toward the ball goes +x
        let last = a.points.last();
        assert!((last.y - 7.0).abs() < 1e-12 && (last.x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn attacking_left_rotates_the_other_way() {
        let ball = Point::new(80.0, 26.65);
        let r = raw(
            &[(80.0, 16.65), (75.0, 16.65)],
            Point::new(80.0, 16.65),
            ball,
            AttackDirection::Left,
        );
        let c = canonicalize(&r, AttackDirection::Left);
        // facing -x, +y field is to the receiver's right... ball is to the left
        // of this receiver, so no mirror; 5 yards upfield
        assert_eq!(c.points.last(), Point::new(0.0, 5.0));
        let f = CanonicalFrame::new(r.snap_point, ball, AttackDirection::Left);
        assert!(!f.mirrored());
        assert!(f.apply(ball).x > 0.0);
    }

    #[test]
    fn level_with_ball_is_not_mirrored() {
        let f = CanonicalFrame::new(Point::new(30.0, 20.0), Point::new(35.0, 20.0), AttackDirection::Right);
        assert!(!f.mirrored());
    }

    #[test]
    fn idempotent_on_output_frame() {
        let ball = Point::new(30.0, 26.65);
        let r = raw(
            &[(30.0, 16.65), (36.0, 16.65), (36.0, 22.0)],
            Point::new(30.0, 16.65),
            ball,
            AttackDirection::Right,
        );
        let frame = CanonicalFrame::new(r.snap_point, ball, AttackDirection::Right);
        let once = canonicalize(&r, AttackDirection::Right);
        let again = raw(
            &once.points.points().iter().map(|p| (p.x, p.y)).collect::<Vec<_>>(),
            Point::ORIGIN,
            frame.apply(ball),
            AttackDirection::Up,
        );
        assert_eq!(canonicalize(&again, AttackDirection::Up).points, once.points);
    }

    #[test]
    fn movement_extent_examples() {
        assert_eq!(movement_extent(&canonical(&[(0.0, 0.0), (0.0, 0.0)])), 0.0);
        assert_eq!(movement_extent(&canonical(&[(0.0, 0.0), (0.0, 10.0)])), 10.0);
        assert_eq!(movement_extent(&canonical(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)])), 5.0);
    }

    fn dir() -> impl Strategy<Value = AttackDirection> {
        prop_oneof![
            Just(AttackDirection::Left),
            Just(AttackDirection::Right),
            Just(AttackDirection::Up),
            Just(AttackDirection::Down)
        ]
    }

    proptest! {
        #[test]
        fn rigid_and_invertible(
            pts in prop::collection::vec((0.0..120.0f64, 0.0..53.3f64), 2..20),
            bx in 0.0..120.0f64, by in 0.0..53.3f64, d in dir(),
        ) {
            let snap = Point::new(pts[0].0, pts[0].1);
            let r = raw(&pts, snap, Point::new(bx, by), d);
            let c = canonicalize(&r, d);
            prop_assert_eq!(c.points.first(), Point::ORIGIN);
            let (a, b) = (r.points.arc_length(), c.points.arc_length());
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
            let f = CanonicalFrame::new(snap, Point::new(bx, by), d);
            for (p, q) in r.points.points().iter().zip(c.points.points()) {
                prop_assert!(f.invert(*q).distance(*p) < 1e-9);
            }
        }

        // Mirroring the whole field left/right leaves canonical routes alone.
        #[test]
        fn field_mirror_symmetry(
            pts in prop::collection::vec((0.0..120.0f64, 0.0..53.3f64), 2..20),
            bx in 0.0..120.0f64, by in 0.0..53.3f64,
        ) {
            let flip = |(x, y): (f64, f64)| (x, 53.3 - y);
            let snap = Point::new(pts[0].0, pts[0].1);
            prop_assume!((snap.y - by).abs() > 1e-6);
            let a = canonicalize(&raw(&pts, snap, Point::new(bx, by), AttackDirection::Right), AttackDirection::Right);
            let flipped: Vec<_> = pts.iter().copied().map(flip).collect();
            let (fsx, fsy) = flip((snap.x, snap.y));
            let (fbx, fby) = flip((bx, by));
            let b = canonicalize(
                &raw(&flipped, Point::new(fsx, fsy), Point::new(fbx, fby), AttackDirection::Right),
                AttackDirection::Right,
            );
            for (p, q) in a.points.points().iter().zip(b.points.points()) {
                prop_assert!(p.distance(*q) < 1e-9);
            }
        }
    }
}
