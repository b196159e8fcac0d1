//! Template matching.
//!
//! For each template: align both boxes at the origin, scale the template by
//! the inverse of the larger width/height ratio so it fits inside the route's
//! box, pad it with points to the route's sample count, then slide it in
//! half-yard steps along the axis with slack. At every offset the score is
//!
//! ```text
//! d_route = Σ_{g ∈ route} δ(g, template) + γ · Σ_{s ∈ template} δ(s, route)
//! ```
//!
//! where δ is the distance from a point to the other polyline. The label is
//! the template with the smallest score over all offsets. Receivers that
//! never get more than the blocking threshold away from where they lined up
//! are labelled blocking/bubble without matching.

mod grid;
mod scale;

pub use grid::{grid_offsets, shift_grid, Axis, Shift, ShiftGrid, DEFAULT_STEP_YARDS};
pub use scale::{extent_ratio, scale_template, BoundAxis, ScaledTemplate};

use crate::geometry::{
    resample_to_count, translate, translate_to_origin, BoundingBox, GeometryError, Polyline,
    SegmentIndex,
};
use crate::ingest::{movement_extent, CanonicalRoute, RouteId};
use crate::label::{Label, RouteLabel};
use crate::templates::TemplateSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const DEFAULT_BLOCKING_THRESHOLD_YARDS: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("route has zero extent on both axes")]
    DegenerateRoute,
    #[error("template {template} cannot be scaled onto this route")]
    Unscalable { template: RouteLabel },
    #[error("template set is empty")]
    EmptyTemplateSet,
    #[error("template has {scaled} points but the route has {game}")]
    CardinalityMismatch { game: usize, scaled: usize },
    #[error("gamma must be in (0, 1], got {0}")]
    BadGamma(f64),
    #[error("shift step must be positive, got {0}")]
    BadStep(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Weight on the template-to-route term. Always in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Gamma(f64);

impl Gamma {
    pub fn new(value: f64) -> Result<Self, ClassifyError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Gamma(value))
        } else {
            Err(ClassifyError::BadGamma(value))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for Gamma {
    fn default() -> Self {
        Gamma(0.5)
    }
}

impl TryFrom<f64> for Gamma {
    type Error = ClassifyError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Gamma::new(v)
    }
}

impl From<Gamma> for f64 {
    fn from(g: Gamma) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyConfig {
    pub gamma: Gamma,
    pub step_yards: f64,
    pub blocking_threshold_yards: f64,
    pub include_exact_endpoint: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            gamma: Gamma::default(),
            step_yards: DEFAULT_STEP_YARDS,
            blocking_threshold_yards: DEFAULT_BLOCKING_THRESHOLD_YARDS,
            include_exact_endpoint: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub d_route: f64,
    pub d_game: f64,
    pub d_scaled: f64,
}

/// Both directed sums between a route and a template already placed in the
/// same frame.
///
/// `scaled_shifted` must have at least as many points as `game`: the
/// template is padded up to the route's count, and used as-is when it
/// already has more vertices than a very short route.
pub fn route_distance(
    game: &Polyline,
    scaled_shifted: &Polyline,
    gamma: Gamma,
) -> Result<Distances, ClassifyError> {
    if scaled_shifted.len() < game.len() {
        return Err(ClassifyError::CardinalityMismatch {
            game: game.len(),
            scaled: scaled_shifted.len(),
        });
    }
    let game_index = SegmentIndex::new(game);
    let tpl_index = SegmentIndex::new(scaled_shifted);
    Ok(distances_at(
        game,
        &game_index,
        scaled_shifted,
        &tpl_index,
        (0.0, 0.0),
        gamma,
    ))
}

// Scores the template translated by `shift` without materializing it.
fn distances_at(
    game: &Polyline,
    game_index: &SegmentIndex,
    template: &Polyline,
    tpl_index: &SegmentIndex,
    (dx, dy): (f64, f64),
    gamma: Gamma,
) -> Distances {
    let d_game = tpl_index.sum_distances(game.points(), -dx, -dy);
    let d_scaled = game_index.sum_distances(template.points(), dx, dy);
    Distances {
        d_route: d_game + gamma.value() * d_scaled,
        d_game,
        d_scaled,
    }
}

/// Outcome of sliding one template over one route.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateFit {
    pub scaled: ScaledTemplate,
    /// The scaled template padded to the route's sample count.
    pub augmented: Polyline,
    pub grid: ShiftGrid,
    /// `d_route` at each grid offset.
    pub per_shift: Vec<f64>,
    pub best_shift: Shift,
    pub best: Distances,
}

impl TemplateFit {
    /// The padded template at its best offset, in the route's
    /// origin-aligned frame.
    pub fn placed(&self) -> Polyline {
        let (dx, dy) = self.best_shift.vector();
        translate(&self.augmented, dx, dy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    #[serde(flatten)]
    pub id: RouteId,
    pub label: Label,
    pub best_distance: Option<f64>,
    pub best_template: Option<RouteLabel>,
    pub best_shift: Option<Shift>,
    pub d_game: Option<f64>,
    pub d_scaled: Option<f64>,
    /// Minimum `d_route` over shifts for every template that could be scaled.
    pub per_template: BTreeMap<RouteLabel, f64>,
}

impl MatchResult {
    fn blocking(id: RouteId) -> Self {
        MatchResult {
            id,
            label: Label::BlockingBubble,
            best_distance: None,
            best_template: None,
            best_shift: None,
            d_game: None,
            d_scaled: None,
            per_template: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone)]
struct PreparedTemplate {
    name: RouteLabel,
    aligned: Polyline,
    bbox: BoundingBox,
}

/// A template set prepared for repeated matching under one configuration.
#[derive(Debug, Clone)]
pub struct Classifier {
    // sorted by label name, so a strict `<` scan breaks ties alphabetically
    templates: Vec<PreparedTemplate>,
    config: ClassifyConfig,
}

impl Classifier {
    pub fn new(set: &TemplateSet, config: ClassifyConfig) -> Result<Self, ClassifyError> {
        if set.templates.is_empty() {
            return Err(ClassifyError::EmptyTemplateSet);
        }
        if !(config.step_yards > 0.0 && config.step_yards.is_finite()) {
            return Err(ClassifyError::BadStep(config.step_yards));
        }
        let mut templates = set
            .templates
            .iter()
            .map(|t| {
                let aligned = translate_to_origin(&t.polyline()?);
                Ok(PreparedTemplate {
                    name: t.name,
                    bbox: aligned.bounding_box(),
                    aligned,
                })
            })
            .collect::<Result<Vec<_>, ClassifyError>>()?;
        templates.sort_by_key(|t| t.name);
        Ok(Classifier { templates, config })
    }

    pub fn config(&self) -> &ClassifyConfig {
        &self.config
    }

    pub fn labels(&self) -> impl Iterator<Item = RouteLabel> + '_ {
        self.templates.iter().map(|t| t.name)
    }

    fn fit_prepared(
        &self,
        t: &PreparedTemplate,
        game: &Polyline,
        game_box: &BoundingBox,
        game_index: &SegmentIndex,
    ) -> Result<TemplateFit, ClassifyError> {
        let scaled = scale::scale_aligned(t.name, &t.aligned, &t.bbox, game_box)?;
        let augmented = if scaled.points.len() < game.len() {
            resample_to_count(&scaled.points, game.len())?
        } else {
            scaled.points.clone()
        };
        let grid = shift_grid(
            &scaled,
            game_box,
            self.config.step_yards,
            self.config.include_exact_endpoint,
        );
        // padding only adds vertices on existing segments, so distances to
        // the template can use the unpadded (shorter) polyline
        let tpl_index = SegmentIndex::new(&scaled.points);
        let mut per_shift = Vec::with_capacity(grid.len());
        let mut best: Option<(Shift, Distances)> = None;
        for shift in grid.shifts() {
            let d = distances_at(
                game,
                game_index,
                &augmented,
                &tpl_index,
                shift.vector(),
                self.config.gamma,
            );
            per_shift.push(d.d_route);
            if best.is_none_or(|(_, b)| d.d_route < b.d_route) {
                best = Some((shift, d));
            }
        }
        let (best_shift, best) = best.expect("grid always has offset 0");
        Ok(TemplateFit {
            scaled,
            augmented,
            grid,
            per_shift,
            best_shift,
            best,
        })
    }

    /// Fits a single template to `route` (ignoring the blocking rule).
    pub fn fit(&self, route: &CanonicalRoute, name: RouteLabel) -> Option<Result<TemplateFit, ClassifyError>> {
        let t = self.templates.iter().find(|t| t.name == name)?;
        let game = translate_to_origin(&route.points);
        let game_box = game.bounding_box();
        let index = SegmentIndex::new(&game);
        Some(self.fit_prepared(t, &game, &game_box, &index))
    }

    pub fn classify(&self, route: &CanonicalRoute) -> Result<MatchResult, ClassifyError> {
        if movement_extent(route) <= self.config.blocking_threshold_yards {
            return Ok(MatchResult::blocking(route.id));
        }
        let game = translate_to_origin(&route.points);
        let game_box = game.bounding_box();
        if game_box.width() == 0.0 && game_box.height() == 0.0 {
            return Err(ClassifyError::DegenerateRoute);
        }
        let game_index = SegmentIndex::new(&game);

        let mut per_template = BTreeMap::new();
        let mut best: Option<(RouteLabel, Shift, Distances)> = None;
        let mut last_err = None;
        for t in &self.templates {
            let fit = match self.fit_prepared(t, &game, &game_box, &game_index) {
                Ok(f) => f,
                Err(e @ ClassifyError::Unscalable { .. }) => {
                    last_err = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            per_template.insert(t.name, fit.best.d_route);
            if best.is_none_or(|(_, _, b)| fit.best.d_route < b.d_route) {
                best = Some((t.name, fit.best_shift, fit.best));
            }
        }
        let Some((name, shift, d)) = best else {
            return Err(last_err.unwrap_or(ClassifyError::EmptyTemplateSet));
        };
        Ok(MatchResult {
            id: route.id,
            label: Label::Route(name),
            best_distance: Some(d.d_route),
            best_template: Some(name),
            best_shift: Some(shift),
            d_game: Some(d.d_game),
            d_scaled: Some(d.d_scaled),
            per_template,
        })
    }

    /// Classifies every route on the current thread, in input order.
    pub fn classify_batch(&self, routes: &[CanonicalRoute]) -> Vec<Result<MatchResult, ClassifyError>> {
        routes.iter().map(|r| self.classify(r)).collect()
    }

    /// Same output as [`Classifier::classify_batch`], fanned out over the
    /// rayon pool.
    pub fn classify_batch_parallel(
        &self,
        routes: &[CanonicalRoute],
    ) -> Vec<Result<MatchResult, ClassifyError>> {
        routes.par_iter().map(|r| self.classify(r)).collect()
    }
}

/// One-shot classification of a single route.
pub fn classify_route(
    game: &CanonicalRoute,
    set: &TemplateSet,
    gamma: Gamma,
    blocking_threshold: f64,
) -> Result<MatchResult, ClassifyError> {
    let config = ClassifyConfig {
        gamma,
        blocking_threshold_yards: blocking_threshold,
        ..ClassifyConfig::default()
    };
    Classifier::new(set, config)?.classify(game)
}

pub fn classify_batch(
    routes: &[CanonicalRoute],
    set: &TemplateSet,
    gamma: Gamma,
    blocking_threshold: f64,
) -> Result<Vec<Result<MatchResult, ClassifyError>>, ClassifyError> {
    let config = ClassifyConfig {
        gamma,
        blocking_threshold_yards: blocking_threshold,
        ..ClassifyConfig::default()
    };
    Ok(Classifier::new(set, config)?.classify_batch(routes))
}
