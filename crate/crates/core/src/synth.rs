//! Synthetic labeled routes made by perturbing templates.
//!
//! All randomness comes from ChaCha8 seeded per route, so a corpus is
//! bit-identical across runs and platforms.

use crate::evaluate::{write_references, EvalError, ReferenceLabel};
use crate::geometry::{resample_to_count, scale_uniform, GeometryError, Point, Polyline};
use crate::ingest::{
    write_routes, AttackDirection, CanonicalFrame, CanonicalRoute, IngestError, RouteId,
    MAX_ROUTE_POINTS,
};
use crate::label::{Label, RouteLabel};
use crate::templates::TemplateSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("template {0} is not in the template set")]
    UnknownTemplate(RouteLabel),
    #[error("invalid synth spec: {0}")]
    Invalid(String),
    #[error("route {0} does not fit on the field")]
    OffField(RouteId),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn default_point_count() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub template: RouteLabel,
    /// Long side of the route's bounding box before noise, in yards.
    pub target_scale: f64,
    /// Per-point isotropic Gaussian noise, in yards.
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default = "default_point_count")]
    pub point_count: usize,
    /// Break depth is scaled by `1 + u` with `u` uniform in ±this.
    #[serde(default)]
    pub jitter_break: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(template: RouteLabel, target_scale: f64) -> Self {
        SynthSpec {
            template,
            target_scale,
            noise_sigma: 0.0,
            point_count: default_point_count(),
            jitter_break: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Invalid(m));
        if !(self.target_scale > 0.0 && self.target_scale.is_finite()) {
            return bad(format!("target_scale must be positive, got {}", self.target_scale));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        if !(2..=MAX_ROUTE_POINTS).contains(&self.point_count) {
            return bad(format!(
                "point_count must be in 2..={MAX_ROUTE_POINTS}, got {}",
                self.point_count
            ));
        }
        if !(0.0..0.5).contains(&self.jitter_break) {
            return bad(format!("jitter_break must be in [0, 0.5), got {}", self.jitter_break));
        }
        Ok(())
    }
}

/// One synthetic route. The id is `(0, 0, seed)`; corpora renumber it.
pub fn generate(spec: &SynthSpec, set: &TemplateSet) -> Result<(CanonicalRoute, RouteLabel), SynthError> {
    spec.validate()?;
    let template = set
        .get(spec.template)
        .ok_or(SynthError::UnknownTemplate(spec.template))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut waypoints = template.waypoints.clone();
    let u = spec.jitter_break * rng.random_range(-1.0..=1.0);
    if let Some(depth) = waypoints.get(1).map(|p| p.y) {
        for p in waypoints.iter_mut().skip(1) {
            p.y += u * depth;
        }
    }
    let shape = Polyline::new(waypoints)?;
    let bb = shape.bounding_box();
    let long = bb.width().max(bb.height());
    let scaled = scale_uniform(&shape, spec.target_scale / long)?;
    if spec.point_count < scaled.len() {
        return Err(SynthError::Invalid(format!(
            "point_count {} is below the {} waypoints of {}",
            spec.point_count,
            scaled.len(),
            spec.template
        )));
    }
    let resampled = resample_to_count(&scaled, spec.point_count)?;

    let noise = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
    let mut points = resampled.into_points();
    // the snap position stays at the origin
    for p in points.iter_mut().skip(1) {
        p.x += noise.sample(&mut rng);
        p.y += noise.sample(&mut rng);
    }
    let route = CanonicalRoute {
        id: RouteId::new(0, 0, spec.seed),
        position: "WR".into(),
        points: Polyline::new(points)?,
        cutoff_s: (spec.point_count - 1) as f64 / 10.0,
    };
    Ok((route, spec.template))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub routes: Vec<CanonicalRoute>,
    pub references: Vec<ReferenceLabel>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn write<W: Write, V: Write>(&self, routes: W, references: V) -> Result<(), SynthError> {
        write_routes(routes, &self.routes)?;
        write_references(references, &self.references)?;
        Ok(())
    }
}

pub const SYNTH_GAME_ID: u64 = 1;
pub const SYNTH_PLAYER_ID: u64 = 1;

/// `n_per_spec` routes per spec, the `i`-th drawn with seed `spec.seed + i`.
/// Route ids are `(1, k, 1)` with `k` counting from 1 across the corpus.
pub fn generate_corpus(specs: &[SynthSpec], n_per_spec: usize, set: &TemplateSet) -> Result<Corpus, SynthError> {
    let jobs: Vec<SynthSpec> = specs
        .iter()
        .flat_map(|s| {
            (0..n_per_spec as u64).map(move |i| SynthSpec {
                seed: s.seed.wrapping_add(i),
                ..s.clone()
            })
        })
        .collect();
    let generated = jobs
        .par_iter()
        .map(|s| generate(s, set))
        .collect::<Result<Vec<_>, _>>()?;
    let mut corpus = Corpus::default();
    for (k, (mut route, label)) in generated.into_iter().enumerate() {
        route.id = RouteId::new(SYNTH_GAME_ID, k as u64 + 1, SYNTH_PLAYER_ID);
        corpus.references.push(ReferenceLabel {
            id: route.id,
            label: Label::Route(label),
        });
        corpus.routes.push(route);
    }
    Ok(corpus)
}

/// A labeled corpus with scales drawn uniformly from a range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusPlan {
    pub labels: Vec<RouteLabel>,
    pub per_label: usize,
    pub scale_min: f64,
    pub scale_max: f64,
    pub noise_sigma: f64,
    pub jitter_break: f64,
    pub point_count: usize,
    pub seed: u64,
}

impl Default for CorpusPlan {
    fn default() -> Self {
        CorpusPlan {
            labels: RouteLabel::TABLE.to_vec(),
            per_label: 25,
            scale_min: 8.0,
            scale_max: 30.0,
            noise_sigma: 0.5,
            jitter_break: 0.1,
            point_count: 50,
            seed: 0,
        }
    }
}

impl CorpusPlan {
    /// One spec per route, label-major. Scales come from a stream seeded by
    /// `seed`; route `k` gets seed `seed + k`.
    pub fn specs(&self) -> Result<Vec<SynthSpec>, SynthError> {
        if !(self.scale_min > 0.0 && self.scale_min <= self.scale_max && self.scale_max.is_finite()) {
            return Err(SynthError::Invalid(format!(
                "scale range [{}, {}] is empty or not positive",
                self.scale_min, self.scale_max
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.labels.len() * self.per_label);
        for &template in &self.labels {
            for _ in 0..self.per_label {
                let spec = SynthSpec {
                    template,
                    target_scale: rng.random_range(self.scale_min..=self.scale_max),
                    noise_sigma: self.noise_sigma,
                    point_count: self.point_count,
                    jitter_break: self.jitter_break,
                    seed: self.seed.wrapping_add(out.len() as u64),
                };
                spec.validate()?;
                out.push(spec);
            }
        }
        Ok(out)
    }

    pub fn generate(&self, set: &TemplateSet) -> Result<Corpus, SynthError> {
        generate_corpus(&self.specs()?, 1, set)
    }
}

const FIELD_LENGTH: f64 = 120.0;
const FIELD_WIDTH: f64 = 53.3;
const PRE_SNAP_FRAMES: u64 = 2;
const FIRST_FRAME: u64 = 1;
/// Yards between the receiver and the ball at the snap, across the field.
const SPLIT: f64 = 8.0;

/// Writes each route as its own play of a tracking file in the default
/// column layout: two stationary pre-snap frames, a `ball_snap` frame, one
/// frame per route point and a `pass_outcome_caught` event on the last one.
/// Plays alternate the receiver's side of the ball and the attack direction.
pub fn write_tracking_csv<W: Write>(sink: W, routes: &[CanonicalRoute]) -> Result<(), SynthError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "gameId",
        "playId",
        "nflId",
        "position",
        "x",
        "y",
        "event",
        "frame.id",
        "playDirection",
    ])?;
    for (i, route) in routes.iter().enumerate() {
        let side = if i % 2 == 0 { 1.0 } else { -1.0 };
        let direction = if (i / 2) % 2 == 0 {
            AttackDirection::Right
        } else {
            AttackDirection::Left
        };
        let (snap, ball) = place(route, side, direction).ok_or(SynthError::OffField(route.id))?;
        let frame = CanonicalFrame::new(snap, ball, direction);
        let dir = match direction {
            AttackDirection::Right => "right",
            _ => "left",
        };
        let snap_frame = FIRST_FRAME + PRE_SNAP_FRAMES;
        let last = route.points.len() - 1;
        let mut row = |player: Option<u64>, p: Point, event: &str, frame_id: u64| {
            let id = player.map_or("NA".to_string(), |v| v.to_string());
            let pos = if player.is_some() { route.position.as_str() } else { "" };
            w.write_record([
                route.id.game_id.to_string(),
                route.id.play_id.to_string(),
                id,
                pos.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                event.to_string(),
                frame_id.to_string(),
                dir.to_string(),
            ])
        };
        for f in FIRST_FRAME..snap_frame {
            row(None, ball, "", f)?;
            row(Some(route.id.player_id), snap, "", f)?;
        }
        for (k, &q) in route.points.points().iter().enumerate() {
            let event = match k {
                0 => "ball_snap",
                k if k == last => "pass_outcome_caught",
                _ => "",
            };
            let f = snap_frame + k as u64;
            row(None, ball, event, f)?;
            row(Some(route.id.player_id), frame.invert(q), event, f)?;
        }
    }
    w.flush()?;
    Ok(())
}

// Puts the receiver `SPLIT` yards to one side of the ball at a spot where
// the whole route stays on the field. Canonical +x points at the ball and
// +y along the attack.
fn place(route: &CanonicalRoute, side: f64, direction: AttackDirection) -> Option<(Point, Point)> {
    let bb = route.points.bounding_box();
    // receiver's field y must keep `y - side * x` inside the field
    let (lo, hi) = if side > 0.0 {
        (bb.max_x.max(SPLIT + 0.5), FIELD_WIDTH + bb.min_x)
    } else {
        (-bb.min_x, (FIELD_WIDTH - bb.max_x).min(FIELD_WIDTH - SPLIT - 0.5))
    };
    if lo > hi {
        return None;
    }
    let y = (FIELD_WIDTH / 2.0 + side * 10.0).clamp(lo, hi);
    let (los, ahead) = match direction {
        AttackDirection::Right => (35.0, 1.0),
        _ => (FIELD_LENGTH - 35.0, -1.0),
    };
    // a yard off the line of scrimmage
    let snap = Point::new(los - ahead, y);
    let ball = Point::new(los, y - side * SPLIT);
    let (x_min, x_max) = (snap.x + ahead * bb.min_y, snap.x + ahead * bb.max_y);
    if x_min.min(x_max) < 0.0 || x_min.max(x_max) > FIELD_LENGTH {
        return None;
    }
    Some((snap, ball))
}
