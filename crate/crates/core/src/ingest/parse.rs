use super::{AttackDirection, IngestError, TrackingFrame, FRAME_MS};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Read;

/// Maps logical tracking fields to column names. Defaults follow the 2017
/// Big Data Bowl tracking files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schema {
    pub delimiter: char,
    pub game_id: String,
    pub play_id: String,
    pub player_id: String,
    pub x: String,
    pub y: String,
    pub event: String,
    pub time: String,
    pub time_unit: TimeUnit,
    /// `None` makes extraction infer the direction from the formation.
    pub play_direction: Option<String>,
    /// Inline position column. When absent from the file, positions come
    /// from a players table instead.
    pub position: Option<String>,
}

impl Default for Schema {
    fn default() -> Self {
        Schema {
            delimiter: ',',
            game_id: "gameId".into(),
            play_id: "playId".into(),
            player_id: "nflId".into(),
            x: "x".into(),
            y: "y".into(),
            event: "event".into(),
            time: "frame.id".into(),
            time_unit: TimeUnit::Frame,
            play_direction: Some("playDirection".into()),
            position: Some("position".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    /// Frame counter at 100 ms per frame.
    Frame,
    Milliseconds,
    Seconds,
}

impl TimeUnit {
    fn to_ms(self, v: f64) -> f64 {
        match self {
            TimeUnit::Frame => v * FRAME_MS,
            TimeUnit::Milliseconds => v,
            TimeUnit::Seconds => v * 1000.0,
        }
    }
}

/// Player id → roster position, from a players file.
pub type PositionTable = HashMap<u64, String>;

/// Reads a players file (header row) into a position lookup.
pub fn load_positions<R: Read>(
    source: R,
    id_column: &str,
    position_column: &str,
) -> Result<PositionTable, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = rdr.headers()?.clone();
    let find = |field: &'static str, name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn {
                field,
                column: name.to_string(),
            })
    };
    let id_idx = find("player_id", id_column)?;
    let pos_idx = find("position", position_column)?;
    let mut out = PositionTable::new();
    for rec in rdr.records() {
        let rec = rec?;
        let (Some(id), Some(pos)) = (rec.get(id_idx), rec.get(pos_idx)) else {
            continue;
        };
        if let Ok(id) = id.trim().parse::<u64>() {
            out.insert(id, pos.trim().to_string());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    /// 1-based line number in the source, header included.
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedTracking {
    pub frames: Vec<TrackingFrame>,
    pub rejected: Vec<RowError>,
}

struct Columns {
    game_id: usize,
    play_id: usize,
    player_id: usize,
    x: usize,
    y: usize,
    event: usize,
    time: usize,
    play_direction: Option<usize>,
    position: Option<usize>,
}

fn missing_na(s: &str) -> Option<&str> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("na") || s.eq_ignore_ascii_case("null") {
        None
    } else {
        Some(s)
    }
}

const FIELD_X_MAX: f64 = 120.0;
const FIELD_Y_MAX: f64 = 53.3;

/// Parses delimited tracking rows in file order.
///
/// Rows whose numeric fields fail to parse, or that fall outside the field,
/// are skipped and reported in `rejected`. A blank or missing player id marks
/// the ball.
pub fn parse_tracking<R: Read>(
    source: R,
    schema: &Schema,
    positions: Option<&PositionTable>,
) -> Result<ParsedTracking, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .flexible(true)
        .from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::Empty);
    }
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let require = |field: &'static str, name: &str| {
        find(name).ok_or_else(|| IngestError::MissingColumn {
            field,
            column: name.to_string(),
        })
    };
    let cols = Columns {
        game_id: require("game_id", &schema.game_id)?,
        play_id: require("play_id", &schema.play_id)?,
        player_id: require("player_id", &schema.player_id)?,
        x: require("x", &schema.x)?,
        y: require("y", &schema.y)?,
        event: require("event", &schema.event)?,
        time: require("time", &schema.time)?,
        play_direction: match &schema.play_direction {
            Some(c) => Some(require("play_direction", c)?),
            None => None,
        },
        position: schema.position.as_deref().and_then(find),
    };
    if cols.position.is_none() && positions.is_none() {
        return Err(IngestError::NoPositionSource);
    }

    let mut out = ParsedTracking::default();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                out.rejected.push(RowError {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        }
        let line = record.position().map_or(0, |p| p.line());
        match parse_row(&record, &cols, schema, positions) {
            Ok(frame) => out.frames.push(frame),
            Err(reason) => out.rejected.push(RowError { line, reason }),
        }
    }
    if out.frames.is_empty() && out.rejected.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(out)
}

fn parse_row(
    rec: &csv::StringRecord,
    cols: &Columns,
    schema: &Schema,
    positions: Option<&PositionTable>,
) -> Result<TrackingFrame, String> {
    let field = |idx: usize, name: &str| {
        rec.get(idx)
            .ok_or_else(|| format!("missing field `{name}`"))
            .map(str::trim)
    };
    let int = |idx: usize, name: &str| -> Result<u64, String> {
        let v = field(idx, name)?;
        v.parse::<u64>()
            .or_else(|_| {
                // ids are sometimes written as floats ("2543498.0")
                v.parse::<f64>()
                    .ok()
                    .filter(|f| f.fract() == 0.0 && *f >= 0.0)
                    .map(|f| f as u64)
                    .ok_or(())
            })
            .map_err(|_| format!("`{name}` is not an integer id: {v:?}"))
    };
    let num = |idx: usize, name: &str| -> Result<f64, String> {
        let v = field(idx, name)?;
        v.parse::<f64>()
            .ok()
            .filter(|f| f.is_finite())
            .ok_or_else(|| format!("`{name}` is not a number: {v:?}"))
    };

    let game_id = int(cols.game_id, &schema.game_id)?;
    let play_id = int(cols.play_id, &schema.play_id)?;
    let player_id = match missing_na(rec.get(cols.player_id).unwrap_or("")) {
        None => None,
        Some(_) => Some(int(cols.player_id, &schema.player_id)?),
    };
    let x = num(cols.x, &schema.x)?;
    let y = num(cols.y, &schema.y)?;
    if !(0.0..=FIELD_X_MAX).contains(&x) || !(0.0..=FIELD_Y_MAX).contains(&y) {
        return Err(format!("position ({x}, {y}) outside the field"));
    }
    let timestamp_ms = schema.time_unit.to_ms(num(cols.time, &schema.time)?);
    let event = rec
        .get(cols.event)
        .and_then(missing_na)
        .map(|s| s.to_string());
    let play_direction = match cols.play_direction {
        Some(i) => match rec.get(i).and_then(missing_na) {
            Some(s) => Some(s.parse::<AttackDirection>()?),
            None => None,
        },
        None => None,
    };
    let position = cols
        .position
        .and_then(|i| rec.get(i))
        .and_then(missing_na)
        .map(|s| s.to_string())
        .or_else(|| player_id.and_then(|id| positions.and_then(|t| t.get(&id).cloned())));

    Ok(TrackingFrame {
        game_id,
        play_id,
        player_id,
        position,
        x,
        y,
        timestamp_ms,
        event,
        play_direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
gameId,playId,nflId,position,x,y,event,frame.id,playDirection
1,10,,,30.0,26.65,ball_snap,1,right
1,10,100,WR,29.0,40.0,ball_snap,1,right
1,10,100,WR,29.5,40.0,,2,right
";

    #[test]
    fn parses_fixture() {
        let parsed = parse_tracking(FIXTURE.as_bytes(), &Schema::default(), None).unwrap();
        assert_eq!(parsed.frames.len(), 3);
        assert!(parsed.rejected.is_empty());
        let ball = &parsed.frames[0];
        assert!(ball.is_ball());
        assert_eq!(ball.timestamp_ms, 100.0);
        assert_eq!(ball.event.as_deref(), Some("ball_snap"));
        let wr = &parsed.frames[2];
        assert_eq!(wr.player_id, Some(100));
        assert_eq!(wr.position.as_deref(), Some("WR"));
        assert_eq!(wr.event, None);
        assert_eq!(wr.play_direction, Some(AttackDirection::Right));
    }

    #[test]
    fn bad_number_row_is_skipped() {
        let text = FIXTURE.replace("29.5,40.0", "abc,40.0");
        let parsed = parse_tracking(text.as_bytes(), &Schema::default(), None).unwrap();
        assert_eq!(parsed.frames.len(), 2);
        assert_eq!(parsed.rejected.len(), 1);
        assert_eq!(parsed.rejected[0].line, 4);
    }

    #[test]
    fn remapped_columns_give_identical_frames() {
        let text = FIXTURE
            .replace("gameId", "game")
            .replace("frame.id", "t")
            .replace(",x,y,", ",xpos,ypos,");
        let schema = Schema {
            game_id: "game".into(),
            time: "t".into(),
            x: "xpos".into(),
            y: "ypos".into(),
            ..Schema::default()
        };
        let a = parse_tracking(FIXTURE.as_bytes(), &Schema::default(), None).unwrap();
        let b = parse_tracking(text.as_bytes(), &schema, None).unwrap();
        assert_eq!(a.frames, b.frames);
    }

    #[test]
    fn missing_column_is_fatal() {
        let schema = Schema {
            x: "X".into(),
            ..Schema::default()
        };
        let err = parse_tracking(FIXTURE.as_bytes(), &schema, None).unwrap_err();
        assert!(matches!(err, IngestError::MissingColumn { field: "x", .. }), "{err}");
    }

    #[test]
    fn empty_input_is_fatal() {
        assert!(matches!(
            parse_tracking("".as_bytes(), &Schema::default(), None),
            Err(IngestError::Empty)
        ));
        let header_only = FIXTURE.lines().next().unwrap();
        assert!(matches!(
            parse_tracking(header_only.as_bytes(), &Schema::default(), None),
            Err(IngestError::Empty)
        ));
    }

    #[test]
    fn positions_from_join_table() {
        let text = FIXTURE.replace(",position,", ",pos_unused,");
        let players = "nflId,PositionAbbr\n100,TE\n";
        let table = load_positions(players.as_bytes(), "nflId", "PositionAbbr").unwrap();
        let parsed = parse_tracking(text.as_bytes(), &Schema::default(), Some(&table)).unwrap();
        assert_eq!(parsed.frames[1].position.as_deref(), Some("TE"));
        assert!(matches!(
            parse_tracking(text.as_bytes(), &Schema::default(), None),
            Err(IngestError::NoPositionSource)
        ));
    }

    #[test]
    fn out_of_field_rows_rejected() {
        let text = FIXTURE.replace("29.5,40.0", "29.5,60.0");
        let parsed = parse_tracking(text.as_bytes(), &Schema::default(), None).unwrap();
        assert_eq!(parsed.rejected.len(), 1);
    }

    #[test]
    fn schema_json_defaults() {
        let s: Schema = serde_json::from_str(r#"{"x": "X", "play_direction": null}"#).unwrap();
        assert_eq!(s.x, "X");
        assert_eq!(s.y, "y");
        assert_eq!(s.play_direction, None);
        assert!(serde_json::from_str::<Schema>(r#"{"bogus": 1}"#).is_err());
    }
}
