use super::{AttackDirection, RawRoute, RouteId, TrackingFrame, FRAME_MS, MAX_ROUTE_POINTS};
use crate::geometry::{Point, Polyline};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const SNAP_EVENT: &str = "ball_snap";
pub const OUTCOME_EVENTS: [&str; 4] = [
    "pass_outcome_caught",
    "pass_outcome_incomplete",
    "pass_outcome_interception",
    "pass_outcome_touchdown",
];

// timestamps are float ms; allow for rounding in unit conversion
const TIME_EPS_MS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractConfig {
    /// Positions that always run routes.
    pub eligible_positions: Vec<String>,
    /// Backfield positions that count only when split out wide.
    pub split_out_positions: Vec<String>,
    /// Lateral distance from the ball at the snap for a back to count as
    /// split out, in yards.
    pub split_out_min_yards: f64,
    pub cutoff_seconds: f64,
    /// Whether the snap frame counts toward the point cap (51 points at 5 s
    /// when true, 50 when false).
    pub count_snap_frame: bool,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            eligible_positions: vec!["WR".into(), "TE".into()],
            split_out_positions: vec!["RB".into(), "HB".into(), "FB".into()],
            split_out_min_yards: 8.0,
            cutoff_seconds: 5.0,
            count_snap_frame: true,
        }
    }
}

impl ExtractConfig {
    pub fn max_points(&self) -> usize {
        let frames = (self.cutoff_seconds * 1000.0 / FRAME_MS + 1e-9).floor() as usize;
        let n = if self.count_snap_frame { frames + 1 } else { frames };
        n.clamp(2, MAX_ROUTE_POINTS)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    NoSnapEvent,
    NoPassOutcome,
    NoBallAtSnap,
    UnknownDirection,
    NoFrameAtSnap,
    TooFewPoints,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SkipReason::NoSnapEvent => "no ball_snap event",
            SkipReason::NoPassOutcome => "no pass outcome event",
            SkipReason::NoBallAtSnap => "no ball position at the snap",
            SkipReason::UnknownDirection => "play direction unknown and not inferable",
            SkipReason::NoFrameAtSnap => "player has no frame at the snap",
            SkipReason::TooFewPoints => "fewer than 2 points after clipping",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipRecord {
    pub game_id: u64,
    pub play_id: u64,
    /// Set when a single player was dropped rather than the whole play.
    pub player_id: Option<u64>,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub routes: Vec<RawRoute>,
    pub skipped: Vec<SkipRecord>,
}

impl ExtractConfig {
    fn is_eligible(&self, position: &str, snap: Point, ball: Point) -> bool {
        let pos = position.trim();
        if self.eligible_positions.iter().any(|p| p.eq_ignore_ascii_case(pos)) {
            return true;
        }
        // field y is the lateral axis
        self.split_out_positions.iter().any(|p| p.eq_ignore_ascii_case(pos))
            && (snap.y - ball.y).abs() >= self.split_out_min_yards
    }
}

/// Cuts one route per eligible player per play out of the tracking rows.
///
/// A route starts at the player's `ball_snap` frame and ends at the first
/// pass-outcome frame or `cutoff_seconds` after the snap, whichever is
/// earlier. Plays are emitted in (game, play) order and players in id order.
pub fn extract_routes(frames: &[TrackingFrame], config: &ExtractConfig) -> Extraction {
    let mut plays: BTreeMap<(u64, u64), Vec<&TrackingFrame>> = BTreeMap::new();
    for f in frames {
        plays.entry((f.game_id, f.play_id)).or_default().push(f);
    }
    let mut out = Extraction::default();
    for ((game_id, play_id), rows) in plays {
        let skip = |reason| SkipRecord {
            game_id,
            play_id,
            player_id: None,
            reason,
        };
        match extract_play(game_id, play_id, &rows, config) {
            Ok((routes, dropped)) => {
                out.routes.extend(routes);
                out.skipped.extend(dropped);
            }
            Err(reason) => out.skipped.push(skip(reason)),
        }
    }
    out
}

/// Seconds from the snap to the first pass outcome, per play that has both,
/// in (game, play) order. The distribution behind the choice of cutoff.
pub fn snap_to_outcome_seconds(frames: &[TrackingFrame]) -> Vec<(u64, u64, f64)> {
    let mut plays: BTreeMap<(u64, u64), (Option<f64>, Vec<f64>)> = BTreeMap::new();
    for f in frames {
        let e = plays.entry((f.game_id, f.play_id)).or_default();
        if has_event(f, &[SNAP_EVENT]) {
            e.0 = Some(e.0.map_or(f.timestamp_ms, |t: f64| t.min(f.timestamp_ms)));
        } else if has_event(f, &OUTCOME_EVENTS) {
            e.1.push(f.timestamp_ms);
        }
    }
    plays
        .into_iter()
        .filter_map(|((g, p), (snap, outcomes))| {
            let snap = snap?;
            let end = outcomes
                .into_iter()
                .filter(|&t| t >= snap - TIME_EPS_MS)
                .min_by(f64::total_cmp)?;
            Some((g, p, (end - snap) / 1000.0))
        })
        .collect()
}

fn has_event(f: &TrackingFrame, names: &[&str]) -> bool {
    f.event.as_deref().is_some_and(|e| names.contains(&e))
}

fn extract_play(
    game_id: u64,
    play_id: u64,
    rows: &[&TrackingFrame],
    config: &ExtractConfig,
) -> Result<(Vec<RawRoute>, Vec<SkipRecord>), SkipReason> {
    let snap_ms = rows
        .iter()
        .filter(|f| has_event(f, &[SNAP_EVENT]))
        .map(|f| f.timestamp_ms)
        .min_by(f64::total_cmp)
        .ok_or(SkipReason::NoSnapEvent)?;
    let outcome_ms = rows
        .iter()
        .filter(|f| f.timestamp_ms >= snap_ms - TIME_EPS_MS && has_event(f, &OUTCOME_EVENTS))
        .map(|f| f.timestamp_ms)
        .min_by(f64::total_cmp)
        .ok_or(SkipReason::NoPassOutcome)?;
    let end_ms = outcome_ms.min(snap_ms + config.cutoff_seconds * 1000.0);
    let at_snap = |f: &&&TrackingFrame| (f.timestamp_ms - snap_ms).abs() <= TIME_EPS_MS;

    let ball = rows
        .iter()
        .filter(|f| f.is_ball())
        .find(at_snap)
        .map(|f| f.point())
        .ok_or(SkipReason::NoBallAtSnap)?;

    let mut by_player: BTreeMap<u64, Vec<&TrackingFrame>> = BTreeMap::new();
    for f in rows {
        if let Some(id) = f.player_id {
            by_player.entry(id).or_default().push(f);
        }
    }

    // position of each player at the snap, for eligibility and direction
    let mut lined_up = Vec::new();
    for (&id, frames) in &by_player {
        let Some(position) = frames.iter().find_map(|f| f.position.clone()) else {
            continue;
        };
        let snap_point = frames.iter().find(at_snap).map(|f| f.point());
        if config.is_eligible(&position, snap_point.unwrap_or(ball), ball) {
            lined_up.push((id, position, snap_point));
        }
    }

    let direction = match rows.iter().find_map(|f| f.play_direction) {
        Some(d) => d,
        None => infer_direction(&lined_up, ball).ok_or(SkipReason::UnknownDirection)?,
    };

    let max_points = config.max_points();
    let mut routes = Vec::new();
    let mut dropped = Vec::new();
    for (id, position, snap_point) in lined_up {
        let drop = |reason| SkipRecord {
            game_id,
            play_id,
            player_id: Some(id),
            reason,
        };
        let Some(snap_point) = snap_point else {
            dropped.push(drop(SkipReason::NoFrameAtSnap));
            continue;
        };
        let mut window: Vec<&TrackingFrame> = by_player[&id]
            .iter()
            .copied()
            .filter(|f| {
                f.timestamp_ms >= snap_ms - TIME_EPS_MS && f.timestamp_ms <= end_ms + TIME_EPS_MS
            })
            .collect();
        window.sort_by(|a, b| a.timestamp_ms.total_cmp(&b.timestamp_ms));
        window.truncate(max_points);
        if window.len() < 2 {
            dropped.push(drop(SkipReason::TooFewPoints));
            continue;
        }
        let last_ms = window[window.len() - 1].timestamp_ms;
        let points = Polyline::new(window.iter().map(|f| f.point()).collect())
            .expect("parsed frames are finite");
        routes.push(RawRoute {
            id: RouteId::new(game_id, play_id, id),
            position,
            points,
            snap_point,
            ball_snap_point: ball,
            direction,
            cutoff_time_s: (last_ms - snap_ms) / 1000.0,
        });
    }
    Ok((routes, dropped))
}

// The offense lines up behind the ball, so the receivers' mean field x sits
// on the side the offense is attacking away from.
fn infer_direction(
    lined_up: &[(u64, String, Option<Point>)],
    ball: Point,
) -> Option<AttackDirection> {
    let xs: Vec<f64> = lined_up.iter().filter_map(|(_, _, p)| p.map(|p| p.x)).collect();
    if xs.is_empty() {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if mean < ball.x {
        Some(AttackDirection::Right)
    } else if mean > ball.x {
        Some(AttackDirection::Left)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(player: Option<u64>, pos: &str, x: f64, y: f64, t_ms: f64, ev: Option<&str>) -> TrackingFrame {
        TrackingFrame {
            game_id: 1,
            play_id: 7,
            player_id: player,
            position: (!pos.is_empty()).then(|| pos.to_string()),
            x,
            y,
            timestamp_ms: t_ms,
            event: ev.map(str::to_string),
            play_direction: Some(AttackDirection::Right),
        }
    }

    /// A play with a pre-snap frame, a snap at t=1000 ms and an outcome at
    /// `outcome_s` after the snap; WR 100 runs straight upfield, RB 200 sits
    /// in the backfield and RB 300 is split wide.
    fn play(outcome_s: f64, total_s: f64) -> Vec<TrackingFrame> {
        let mut out = Vec::new();
        let snap = 1000.0;
        let n = (total_s * 10.0).round() as i64;
        for k in -2..=n {
            let t = snap + k as f64 * 100.0;
            let ev = if k == 0 {
                Some("ball_snap")
            } else if (k as f64 - outcome_s * 10.0).abs() < 1e-9 {
                Some("pass_outcome_caught")
            } else {
                None
            };
            let dx = (k.max(0) as f64) * 0.5;
            out.push(frame(None, "", 30.0, 26.65, t, ev));
            out.push(frame(Some(100), "WR", 29.0 + dx, 40.0, t, ev));
            out.push(frame(Some(200), "RB", 25.0 + dx, 26.65, t, ev));
            out.push(frame(Some(300), "RB", 29.0 + dx, 10.0, t, ev));
        }
        out
    }

    #[test]
    fn outcome_before_cutoff() {
        let ex = extract_routes(&play(3.2, 7.0), &ExtractConfig::default());
        let ids: Vec<u64> = ex.routes.iter().map(|r| r.id.player_id).collect();
        assert_eq!(ids, vec![100, 300]);
        for r in &ex.routes {
            assert_eq!(r.points.len(), 33);
            assert!((r.cutoff_time_s - 3.2).abs() < 1e-9);
        }
        let wr = &ex.routes[0];
        assert_eq!(wr.snap_point, Point::new(29.0, 40.0));
        assert_eq!(wr.points.first(), wr.snap_point);
        assert_eq!(wr.ball_snap_point, Point::new(30.0, 26.65));
    }

    #[test]
    fn cutoff_caps_at_five_seconds() {
        let ex = extract_routes(&play(7.0, 8.0), &ExtractConfig::default());
        assert_eq!(ex.routes[0].points.len(), 51);
        assert!((ex.routes[0].cutoff_time_s - 5.0).abs() < 1e-9);

        let fifty = ExtractConfig {
            count_snap_frame: false,
            ..ExtractConfig::default()
        };
        assert_eq!(extract_routes(&play(7.0, 8.0), &fifty).routes[0].points.len(), 50);

        let three = ExtractConfig {
            cutoff_seconds: 3.0,
            ..ExtractConfig::default()
        };
        assert_eq!(extract_routes(&play(7.0, 8.0), &three).routes[0].points.len(), 31);
    }

    #[test]
    fn no_snap_means_no_routes() {
        let frames: Vec<_> = play(3.0, 4.0)
            .into_iter()
            .map(|mut f| {
                if f.event.as_deref() == Some("ball_snap") {
                    f.event = None;
                }
                f
            })
            .collect();
        let ex = extract_routes(&frames, &ExtractConfig::default());
        assert!(ex.routes.is_empty());
        assert_eq!(ex.skipped.len(), 1);
        assert_eq!(ex.skipped[0].reason, SkipReason::NoSnapEvent);
    }

    #[test]
    fn no_points_before_snap() {
        let ex = extract_routes(&play(3.0, 4.0), &ExtractConfig::default());
        for r in &ex.routes {
            assert_eq!(r.points.first(), r.snap_point);
            // pre-snap frames sit at the snap x; post-snap x only grows
            let xs: Vec<f64> = r.points.points().iter().map(|p| p.x).collect();
            assert!(xs.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn infers_direction_when_missing() {
        let frames: Vec<_> = play(3.0, 4.0)
            .into_iter()
            .map(|mut f| {
                f.play_direction = None;
                f
            })
            .collect();
        let ex = extract_routes(&frames, &ExtractConfig::default());
        assert!(ex.routes.iter().all(|r| r.direction == AttackDirection::Right));
    }

    #[test]
    fn outcome_times() {
        let mut frames = play(3.2, 7.0);
        frames.extend(play(6.0, 7.0).into_iter().map(|mut f| {
            f.play_id = 8;
            f
        }));
        let t = snap_to_outcome_seconds(&frames);
        assert_eq!(t.len(), 2);
        assert!((t[0].2 - 3.2).abs() < 1e-9 && (t[1].2 - 6.0).abs() < 1e-9);
        assert_eq!((t[1].0, t[1].1), (1, 8));
    }

    #[test]
    fn max_points() {
        let c = ExtractConfig::default();
        assert_eq!(c.max_points(), 51);
        let c = ExtractConfig {
            cutoff_seconds: 4.0,
            count_snap_frame: false,
            ..c
        };
        assert_eq!(c.max_points(), 40);
    }
}
