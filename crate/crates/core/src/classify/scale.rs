use super::ClassifyError;
use crate::geometry::{scale_uniform, translate_to_origin, BoundingBox, Polyline};
use crate::label::RouteLabel;
use serde::{Deserialize, Serialize};

/// Which side of the template's box ends up flush with the route's box
/// after scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundAxis {
    /// Right sides aligned (the horizontal ratio was the larger one).
    Horizontal,
    /// Tops aligned.
    Vertical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledTemplate {
    pub name: RouteLabel,
    /// Origin-aligned and scaled.
    pub points: Polyline,
    pub scale_factor: f64,
    pub bound_axis: BoundAxis,
    pub ratio_h: f64,
    pub ratio_v: f64,
}

impl ScaledTemplate {
    pub fn bounding_box(&self) -> BoundingBox {
        self.points.bounding_box()
    }
}

/// Template extent over route extent along one axis.
///
/// A flat route axis against a non-flat template can never bind (+inf); a
/// flat template axis always fits (0); both flat gives 1.
pub fn extent_ratio(template: f64, game: f64) -> f64 {
    match (template == 0.0, game == 0.0) {
        (true, true) => 1.0,
        (false, true) => f64::INFINITY,
        _ => template / game,
    }
}

/// Picks the larger finite ratio; that axis binds and the template is
/// scaled by its inverse, which keeps the template's aspect ratio and puts
/// its box inside the route's box.
pub(crate) fn binding_ratio(
    name: RouteLabel,
    tpl: (f64, f64),
    game: (f64, f64),
) -> Result<(f64, BoundAxis, f64, f64), ClassifyError> {
    if game.0 == 0.0 && game.1 == 0.0 {
        return Err(ClassifyError::DegenerateRoute);
    }
    let r_h = extent_ratio(tpl.0, game.0);
    let r_v = extent_ratio(tpl.1, game.1);
    let (r, axis) = match (r_h.is_finite(), r_v.is_finite()) {
        (true, true) if r_h >= r_v => (r_h, BoundAxis::Horizontal),
        (true, true) => (r_v, BoundAxis::Vertical),
        (true, false) => (r_h, BoundAxis::Horizontal),
        (false, true) => (r_v, BoundAxis::Vertical),
        (false, false) => unreachable!("route has a non-zero extent"),
    };
    if r <= 0.0 {
        return Err(ClassifyError::Unscalable { template: name });
    }
    Ok((r, axis, r_h, r_v))
}

pub(crate) fn scale_aligned(
    name: RouteLabel,
    aligned: &Polyline,
    tpl_box: &BoundingBox,
    game_box: &BoundingBox,
) -> Result<ScaledTemplate, ClassifyError> {
    let (r, bound_axis, ratio_h, ratio_v) = binding_ratio(
        name,
        (tpl_box.width(), tpl_box.height()),
        (game_box.width(), game_box.height()),
    )?;
    let scale_factor = 1.0 / r;
    Ok(ScaledTemplate {
        name,
        points: scale_uniform(aligned, scale_factor)?,
        scale_factor,
        bound_axis,
        ratio_h,
        ratio_v,
    })
}

/// Scales `template` onto the route's origin-aligned bounding box.
pub fn scale_template(
    template: &crate::templates::Template,
    game: &crate::ingest::CanonicalRoute,
) -> Result<ScaledTemplate, ClassifyError> {
    let aligned = translate_to_origin(&template.polyline()?);
    let game_box = translate_to_origin(&game.points).bounding_box();
    scale_aligned(template.name, &aligned, &aligned.bounding_box(), &game_box)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CanonicalRoute, RouteId};
    use crate::templates::{builtin_route_tree, Template};

    fn route(coords: &[(f64, f64)]) -> CanonicalRoute {
        CanonicalRoute {
            id: RouteId::default(),
            position: "WR".into(),
            points: Polyline::from_xy(coords).unwrap(),
            cutoff_s: 5.0,
        }
    }

    #[test]
    fn box_100_by_100_into_10_by_20() {
        let t = Template::new(RouteLabel::Dig, &[(0.0, 0.0), (0.0, 100.0), (100.0, 100.0)]);
        let g = route(&[(0.0, 0.0), (0.0, 20.0), (10.0, 20.0)]);
        let s = scale_template(&t, &g).unwrap();
        assert_eq!((s.ratio_h, s.ratio_v), (10.0, 5.0));
        assert_eq!(s.scale_factor, 0.1);
        assert_eq!(s.bound_axis, BoundAxis::Horizontal);
        let bb = s.bounding_box();
        assert!((bb.width() - 10.0).abs() < 1e-12 && (bb.height() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn same_shape_fills_the_box() {
        let t = Template::new(RouteLabel::Out, &[(0.0, 0.0), (0.0, 70.0), (-60.0, 70.0)]);
        let g = route(&[(0.0, 0.0), (0.0, 7.0), (-6.0, 7.0)]);
        let s = scale_template(&t, &g).unwrap();
        let bb = s.bounding_box();
        assert!((bb.width() - 6.0).abs() < 1e-12);
        assert!((bb.height() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn streak_has_zero_horizontal_ratio() {
        let set = builtin_route_tree();
        let streak = set.get(RouteLabel::Streak).unwrap();
        let g = route(&[(0.0, 0.0), (1.0, 8.0), (3.0, 15.0)]);
        let s = scale_template(streak, &g).unwrap();
        assert_eq!(s.ratio_h, 0.0);
        assert_eq!(s.bound_axis, BoundAxis::Vertical);
        assert!((s.scale_factor - 15.0 / 100.0).abs() < 1e-15);
    }

    #[test]
    fn flat_route_axis_cannot_bind() {
        let set = builtin_route_tree();
        let dig = set.get(RouteLabel::Dig).unwrap();
        let g = route(&[(0.0, 0.0), (0.0, 12.0)]);
        let s = scale_template(dig, &g).unwrap();
        assert!(s.ratio_h.is_infinite());
        assert_eq!(s.bound_axis, BoundAxis::Vertical);
        // streak against a perfectly straight route: both widths zero
        let st = scale_template(set.get(RouteLabel::Streak).unwrap(), &g).unwrap();
        assert_eq!(st.ratio_h, 1.0);
        assert_eq!(st.bound_axis, BoundAxis::Vertical);
    }

    #[test]
    fn degenerate_route_rejected() {
        let set = builtin_route_tree();
        let g = route(&[(1.0, 1.0), (1.0, 1.0)]);
        assert!(matches!(
            scale_template(&set.templates[0], &g),
            Err(ClassifyError::DegenerateRoute)
        ));
    }

    #[test]
    fn flat_template_against_perpendicular_flat_route() {
        let t = Template::new(RouteLabel::Flat, &[(0.0, 0.0), (-50.0, 0.0)]);
        let g = route(&[(0.0, 0.0), (0.0, 10.0)]);
        assert!(matches!(
            scale_template(&t, &g),
            Err(ClassifyError::Unscalable { .. })
        ));
    }
}
