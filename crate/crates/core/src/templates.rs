//! The route-tree template set: built-in shapes, JSON file format and
//! validation.
//!
//! Templates live in the canonical frame (receiver starts at the origin,
//! upfield is +y, field center is +x) and are drawn far larger than any real
//! route so that matching only ever scales them down. The built-in
//! coordinates are hand-drawn from the usual route-tree diagram; only their
//! shapes matter, since the classifier rescales every template per route.

use crate::geometry::{BoundingBox, GeometryError, Point, Polyline};
use crate::label::RouteLabel;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use thiserror::Error;

pub const CANONICAL_FRAME: &str = "left-of-ball, upfield=+y, field-center=+x";
pub const FORMAT_VERSION: u32 = 1;
/// Templates must be at least this large (yards) on every non-flat axis.
pub const MIN_TEMPLATE_EXTENT: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub name: RouteLabel,
    pub waypoints: Vec<Point>,
}

impl Template {
    pub fn new(name: RouteLabel, coords: &[(f64, f64)]) -> Self {
        Template {
            name,
            waypoints: coords.iter().map(|&c| Point::from(c)).collect(),
        }
    }

    pub fn polyline(&self) -> Result<Polyline, GeometryError> {
        Polyline::new(self.waypoints.clone())
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::of_points(&self.waypoints)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemplateSet {
    pub frame: String,
    pub templates: Vec<Template>,
}

impl TemplateSet {
    pub fn new(templates: Vec<Template>) -> Self {
        TemplateSet {
            frame: CANONICAL_FRAME.to_string(),
            templates,
        }
    }

    pub fn get(&self, name: RouteLabel) -> Option<&Template> {
        self.templates.iter().find(|t| t.name == name)
    }

    pub fn labels(&self) -> impl Iterator<Item = RouteLabel> + '_ {
        self.templates.iter().map(|t| t.name)
    }

    /// Returns the set if it has no violations.
    pub fn validated(self) -> Result<Self, TemplateError> {
        let v = validate(&self);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(TemplateError::Invalid(v))
        }
    }

    /// Keeps only the named templates, in the given order.
    pub fn subset(&self, names: &[RouteLabel]) -> TemplateSet {
        TemplateSet {
            frame: self.frame.clone(),
            templates: names.iter().filter_map(|&n| self.get(n).cloned()).collect(),
        }
    }
}

pub fn builtin_route_tree() -> TemplateSet {
    use RouteLabel::*;
    TemplateSet::new(vec![
        Template::new(Flat, &[(0.0, 0.0), (-80.0, 40.0), (-240.0, 60.0)]),
        Template::new(Slant, &[(0.0, 0.0), (0.0, 18.0), (60.0, 78.0)]),
        Template::new(Out, &[(0.0, 0.0), (0.0, 70.0), (-60.0, 70.0)]),
        Template::new(Dig, &[(0.0, 0.0), (0.0, 70.0), (60.0, 70.0)]),
        Template::new(Curl, &[(0.0, 0.0), (0.0, 240.0), (60.0, 180.0)]),
        Template::new(Comeback, &[(0.0, 0.0), (0.0, 300.0), (-60.0, 240.0)]),
        Template::new(Corner, &[(0.0, 0.0), (0.0, 90.0), (-60.0, 150.0)]),
        Template::new(Post, &[(0.0, 0.0), (0.0, 90.0), (60.0, 150.0)]),
        Template::new(Streak, &[(0.0, 0.0), (0.0, 100.0)]),
        Template::new(Sluggo, &[(0.0, 0.0), (0.0, 24.0), (60.0, 84.0), (60.0, 240.0)]),
        Template::new(
            Wheel,
            &[(0.0, 0.0), (-45.0, 15.0), (-60.0, 37.5), (-60.0, 150.0)],
        ),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    EmptySet,
    Frame,
    DuplicateName,
    TooFewWaypoints,
    NonFinite,
    OriginStart,
    Oversize,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::EmptySet => "set must contain at least one template",
            Rule::Frame => "frame must be the canonical frame",
            Rule::DuplicateName => "template names must be unique",
            Rule::TooFewWaypoints => "at least 2 waypoints",
            Rule::NonFinite => "waypoints must be finite",
            Rule::OriginStart => "first waypoint must be (0,0)",
            Rule::Oversize => "each extent must be zero or at least 40 yards",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub template: Option<RouteLabel>,
    pub rule: Rule,
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.template {
            Some(t) => write!(f, "{t}: {} (got {})", self.rule, self.value),
            None => write!(f, "{} (got {})", self.rule, self.value),
        }
    }
}

pub fn validate(set: &TemplateSet) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut set_violation = |rule, value: String| {
        out.push(Violation {
            template: None,
            rule,
            value,
        })
    };
    if set.templates.is_empty() {
        set_violation(Rule::EmptySet, "0 templates".into());
    }
    if set.frame != CANONICAL_FRAME {
        set_violation(Rule::Frame, format!("{:?}", set.frame));
    }

    let mut seen = HashSet::new();
    for t in &set.templates {
        let mut push = |rule, value: String| {
            out.push(Violation {
                template: Some(t.name),
                rule,
                value,
            })
        };
        if !seen.insert(t.name) {
            push(Rule::DuplicateName, t.name.to_string());
        }
        if t.waypoints.len() < 2 {
            push(Rule::TooFewWaypoints, t.waypoints.len().to_string());
        }
        if let Some((i, p)) = t.waypoints.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            push(Rule::NonFinite, format!("waypoint {i} = ({}, {})", p.x, p.y));
            continue;
        }
        if let Some(first) = t.waypoints.first() {
            if *first != Point::ORIGIN {
                push(Rule::OriginStart, format!("({}, {})", first.x, first.y));
            }
        }
        if let Some(bb) = t.bounding_box() {
            let ok = |e: f64| e == 0.0 || e >= MIN_TEMPLATE_EXTENT;
            let (w, h) = (bb.width(), bb.height());
            if !ok(w) || !ok(h) || (w == 0.0 && h == 0.0) {
                push(Rule::Oversize, format!("{w} x {h}"));
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template file: {message} at `{path}` (line {line}, column {column})")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported template format_version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u32),
    #[error("invalid template set: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Serialize, Deserialize)]
struct TemplateFile {
    format_version: u32,
    frame: String,
    templates: Vec<Template>,
}

pub fn load_templates<R: Read>(source: R) -> Result<TemplateSet, TemplateError> {
    let mut de = serde_json::Deserializer::from_reader(source);
    let file: TemplateFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_io() {
            return TemplateError::Io(inner.into());
        }
        TemplateError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(TemplateError::UnsupportedVersion(file.format_version));
    }
    TemplateSet {
        frame: file.frame,
        templates: file.templates,
    }
    .validated()
}

pub fn write_templates<W: Write>(set: &TemplateSet, sink: W) -> Result<(), TemplateError> {
    let file = TemplateFile {
        format_version: FORMAT_VERSION,
        frame: set.frame.clone(),
        templates: set.templates.clone(),
    };
    serde_json::to_writer_pretty(sink, &file).map_err(|e| TemplateError::Io(e.into()))
}

pub fn save_templates(set: &TemplateSet) -> Vec<u8> {
    let mut buf = Vec::new();
    write_templates(set, &mut buf).expect("writing to a Vec cannot fail");
    buf.push(b'\n');
    buf
}
