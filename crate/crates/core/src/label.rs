use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Route names from the receiver route tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteLabel {
    Flat,
    Slant,
    Out,
    Dig,
    Curl,
    Comeback,
    Corner,
    Post,
    Streak,
    Sluggo,
    Wheel,
}

impl RouteLabel {
    pub const ALL: [RouteLabel; 11] = [
        RouteLabel::Flat,
        RouteLabel::Slant,
        RouteLabel::Out,
        RouteLabel::Dig,
        RouteLabel::Curl,
        RouteLabel::Comeback,
        RouteLabel::Corner,
        RouteLabel::Post,
        RouteLabel::Streak,
        RouteLabel::Sluggo,
        RouteLabel::Wheel,
    ];

    /// The nine routes that appear in the evaluated game's table.
    pub const TABLE: [RouteLabel; 9] = [
        RouteLabel::Corner,
        RouteLabel::Dig,
        RouteLabel::Flat,
        RouteLabel::Out,
        RouteLabel::Post,
        RouteLabel::Slant,
        RouteLabel::Sluggo,
        RouteLabel::Streak,
        RouteLabel::Wheel,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RouteLabel::Flat => "flat",
            RouteLabel::Slant => "slant",
            RouteLabel::Out => "out",
            RouteLabel::Dig => "dig",
            RouteLabel::Curl => "curl",
            RouteLabel::Comeback => "comeback",
            RouteLabel::Corner => "corner",
            RouteLabel::Post => "post",
            RouteLabel::Streak => "streak",
            RouteLabel::Sluggo => "sluggo",
            RouteLabel::Wheel => "wheel",
        }
    }
}

// Ordered by name so that ties and report rows sort alphabetically.
impl Ord for RouteLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for RouteLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RouteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLabel(pub String);

impl fmt::Display for UnknownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown route label {:?}", self.0)
    }
}

impl std::error::Error for UnknownLabel {}

impl FromStr for RouteLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        RouteLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == lower)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// A classifier output or reference label: a route, or a receiver that
/// stayed near the line (blocking / waiting on a bubble screen).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Route(RouteLabel),
    BlockingBubble,
}

impl Label {
    pub const BLOCKING_BUBBLE: &'static str = "blocking/bubble";

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Route(r) => r.as_str(),
            Label::BlockingBubble => Self::BLOCKING_BUBBLE,
        }
    }

    pub fn route(&self) -> Option<RouteLabel> {
        match self {
            Label::Route(r) => Some(*r),
            Label::BlockingBubble => None,
        }
    }
}

impl From<RouteLabel> for Label {
    fn from(r: RouteLabel) -> Self {
        Label::Route(r)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "blocking/bubble" | "blocking" | "bubble" => Ok(Label::BlockingBubble),
            _ => s.parse().map(Label::Route),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for l in RouteLabel::ALL {
            assert_eq!(l.as_str().parse::<RouteLabel>().unwrap(), l);
        }
        assert_eq!("Post".parse::<RouteLabel>().unwrap(), RouteLabel::Post);
        assert!("hitch".parse::<RouteLabel>().is_err());
        assert_eq!("blocking/bubble".parse::<Label>().unwrap(), Label::BlockingBubble);
    }

    #[test]
    fn alphabetical_order() {
        let mut all = RouteLabel::ALL.to_vec();
        all.sort();
        let names: Vec<_> = all.iter().map(|l| l.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(Label::BlockingBubble < Label::Route(RouteLabel::Comeback));
    }

    #[test]
    fn serde_names() {
        assert_eq!(serde_json::to_string(&Label::BlockingBubble).unwrap(), "\"blocking/bubble\"");
        assert_eq!(serde_json::to_string(&RouteLabel::Sluggo).unwrap(), "\"sluggo\"");
        let l: Label = serde_json::from_str("\"dig\"").unwrap();
        assert_eq!(l, Label::Route(RouteLabel::Dig));
    }
}
