//! From raw tracking rows to canonical receiver routes.
//!
//! Pipeline: [`parse_tracking`] reads delimited rows, [`extract_routes`]
//! clips each eligible receiver's trajectory to the window from the snap to
//! the pass outcome (capped by the cutoff), and [`canonicalize`] rotates and
//! mirrors it so every route is run from the left of the ball, upfield +y.

mod canonical;
mod extract;
mod parse;

pub use canonical::{canonicalize, movement_extent, CanonicalFrame};
pub use extract::{extract_routes, snap_to_outcome_seconds, Extraction, ExtractConfig, SkipReason, SkipRecord};
pub use parse::{
    load_positions, parse_tracking, ParsedTracking, PositionTable, RowError, Schema, TimeUnit,
};

use crate::geometry::{GeometryError, Point, Polyline};
use crate::jsonl::{self, JsonlError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use thiserror::Error;

/// Tracking samples are 100 ms apart; 5 s inclusive of the snap frame is 51.
pub const MAX_ROUTE_POINTS: usize = 51;
pub const FRAME_MS: f64 = 100.0;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("tracking input is empty")]
    Empty,
    #[error("required column `{column}` ({field}) not found in header")]
    MissingColumn { field: &'static str, column: String },
    #[error("no position source: configure an inline position column or supply a players file")]
    NoPositionSource,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
pub struct RouteId {
    pub game_id: u64,
    pub play_id: u64,
    pub player_id: u64,
}

impl RouteId {
    pub fn new(game_id: u64, play_id: u64, player_id: u64) -> Self {
        RouteId {
            game_id,
            play_id,
            player_id,
        }
    }
}

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.game_id, self.play_id, self.player_id)
    }
}

impl FromStr for RouteId {
    type Err = String;

    /// Parses `game:play:player`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [g, p, r] = parts.as_slice() else {
            return Err(format!("expected game:play:player, got {s:?}"));
        };
        let n = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("{v:?}: {e}"));
        Ok(RouteId::new(n(g)?, n(p)?, n(r)?))
    }
}

/// Direction the offense is attacking, in the frame the coordinates are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackDirection {
    /// Toward +x (field coordinates).
    Right,
    /// Toward -x (field coordinates).
    Left,
    /// Toward +y; already canonical.
    Up,
    Down,
}

impl FromStr for AttackDirection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "right" => Ok(AttackDirection::Right),
            "left" => Ok(AttackDirection::Left),
            "up" => Ok(AttackDirection::Up),
            "down" => Ok(AttackDirection::Down),
            other => Err(format!("unknown play direction {other:?}")),
        }
    }
}

/// One tracking row. `player_id` is `None` for the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingFrame {
    pub game_id: u64,
    pub play_id: u64,
    pub player_id: Option<u64>,
    pub position: Option<String>,
    pub x: f64,
    pub y: f64,
    pub timestamp_ms: f64,
    pub event: Option<String>,
    pub play_direction: Option<AttackDirection>,
}

impl TrackingFrame {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn is_ball(&self) -> bool {
        self.player_id.is_none()
    }
}

/// A clipped trajectory in field coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRoute {
    pub id: RouteId,
    pub position: String,
    pub points: Polyline,
    pub snap_point: Point,
    pub ball_snap_point: Point,
    pub direction: AttackDirection,
    pub cutoff_time_s: f64,
}

/// A route in the canonical frame: starts at the origin, run from the left
/// of the ball with upfield +y and the field center toward +x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalRoute {
    #[serde(flatten)]
    pub id: RouteId,
    pub position: String,
    pub points: Polyline,
    #[serde(rename = "cutoff_s")]
    pub cutoff_s: f64,
}

impl CanonicalRoute {
    /// Number of samples.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Keeps only the samples at or before `seconds` after the snap,
    /// assuming 100 ms spacing.
    pub fn truncate_to_seconds(&self, seconds: f64) -> Result<CanonicalRoute, GeometryError> {
        let keep = (seconds * 1000.0 / FRAME_MS + 1e-9).floor() as usize + 1;
        let points = self.points.truncated(keep)?;
        let cutoff_s = ((points.len() - 1) as f64 * FRAME_MS / 1000.0).min(self.cutoff_s);
        Ok(CanonicalRoute {
            points,
            cutoff_s,
            ..self.clone()
        })
    }
}

pub fn read_routes<R: BufRead>(source: R) -> Result<Vec<CanonicalRoute>, IngestError> {
    Ok(jsonl::read(source)?)
}

pub fn write_routes<W: Write>(sink: W, routes: &[CanonicalRoute]) -> Result<(), IngestError> {
    Ok(jsonl::write(sink, routes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_json_shape() {
        let r = CanonicalRoute {
            id: RouteId::new(2017091004, 75, 2543498),
            position: "WR".into(),
            points: Polyline::from_xy(&[(0.0, 0.0), (1.5, 2.0)]).unwrap(),
            cutoff_s: 3.2,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"game_id":2017091004,"play_id":75,"player_id":2543498,"position":"WR","points":[[0.0,0.0],[1.5,2.0]],"cutoff_s":3.2}"#
        );
        let back: CanonicalRoute = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn route_id_parse() {
        assert_eq!("1:2:3".parse::<RouteId>().unwrap(), RouteId::new(1, 2, 3));
        assert!("1:2".parse::<RouteId>().is_err());
        assert_eq!(RouteId::new(4, 5, 6).to_string(), "4:5:6");
    }

    #[test]
    fn truncate_to_seconds() {
        let pts: Vec<(f64, f64)> = (0..51).map(|i| (0.0, i as f64)).collect();
        let r = CanonicalRoute {
            id: RouteId::default(),
            position: "WR".into(),
            points: Polyline::from_xy(&pts).unwrap(),
            cutoff_s: 5.0,
        };
        let t = r.truncate_to_seconds(3.0).unwrap();
        assert_eq!(t.len(), 31);
        assert!((t.cutoff_s - 3.0).abs() < 1e-12);
        assert_eq!(r.truncate_to_seconds(9.0).unwrap().len(), 51);
    }
}
