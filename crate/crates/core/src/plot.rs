//! SVG pictures of routes: one route with its matched template, or a group
//! of routes with the group's medoid drawn on top.

use crate::classify::TemplateFit;
use crate::geometry::{translate_to_origin, BoundingBox, Point, Polyline, SegmentIndex};
use crate::ingest::CanonicalRoute;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("cannot plot an empty route group")]
    EmptyGroup,
}

const PX_PER_YARD: f64 = 14.0;
const PAD_YARDS: f64 = 1.5;
const TITLE_PX: f64 = 24.0;

/// Maps yards to pixels with upfield pointing up the page.
struct Canvas {
    bounds: BoundingBox,
    body: String,
}

impl Canvas {
    fn new(boxes: impl IntoIterator<Item = BoundingBox>) -> Self {
        let mut it = boxes.into_iter();
        let first = it.next().expect("at least one box");
        let b = it.fold(first, |a, b| BoundingBox {
            min_x: a.min_x.min(b.min_x),
            min_y: a.min_y.min(b.min_y),
            max_x: a.max_x.max(b.max_x),
            max_y: a.max_y.max(b.max_y),
        });
        Canvas {
            bounds: BoundingBox {
                min_x: b.min_x - PAD_YARDS,
                min_y: b.min_y - PAD_YARDS,
                max_x: b.max_x + PAD_YARDS,
                max_y: b.max_y + PAD_YARDS,
            },
            body: String::new(),
        }
    }

    fn px(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.bounds.min_x) * PX_PER_YARD,
            TITLE_PX + (self.bounds.max_y - p.y) * PX_PER_YARD,
        )
    }

    fn polyline(&mut self, p: &Polyline, stroke: &str, width: f64, class: &str) {
        let pts: Vec<String> = p
            .points()
            .iter()
            .map(|&q| {
                let (x, y) = self.px(q);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="{width}" stroke-linejoin="round"/>"#,
            pts.join(" ")
        );
    }

    fn rect(&mut self, b: &BoundingBox, stroke: &str, class: &str) {
        let (x, y) = self.px(Point::new(b.min_x, b.max_y));
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="{stroke}" stroke-dasharray="4 3"/>"#,
            b.width() * PX_PER_YARD,
            b.height() * PX_PER_YARD
        );
    }

    fn dot(&mut self, p: Point, fill: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}"/>"#);
    }

    fn finish(self, title: &str) -> String {
        let w = self.bounds.width() * PX_PER_YARD;
        let h = self.bounds.height() * PX_PER_YARD + TITLE_PX;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="6" y="16">{}</text>"#, escape(title));
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The route, and optionally a template placed at its best offset, each with
/// its bounding box. Drawn in the route's origin-aligned frame.
pub fn route_svg(route: &CanonicalRoute, fit: Option<&TemplateFit>) -> String {
    let aligned = translate_to_origin(&route.points);
    let placed = fit.map(TemplateFit::placed);
    let mut boxes = vec![aligned.bounding_box()];
    boxes.extend(placed.as_ref().map(Polyline::bounding_box));
    let mut c = Canvas::new(boxes);
    c.rect(&aligned.bounding_box(), "#555", "route-box");
    let mut title = format!("{} {}", route.id, route.position);
    if let (Some(placed), Some(fit)) = (&placed, fit) {
        c.rect(&placed.bounding_box(), "#d62728", "template-box");
        c.polyline(placed, "#d62728", 2.0, "template");
        let _ = write!(title, " vs {} (d = {:.3})", fit.scaled.name, fit.best.d_route);
    }
    c.polyline(&aligned, "#1f77b4", 2.5, "route");
    c.dot(aligned.first(), "#1f77b4");
    c.finish(&title)
}

/// Symmetric distance between two routes as drawn: both directed sums, equal
/// weight, no rescaling or sliding.
pub fn route_pair_distance(a: &Polyline, b: &Polyline) -> f64 {
    SegmentIndex::new(b).sum_distances(a.points(), 0.0, 0.0)
        + SegmentIndex::new(a).sum_distances(b.points(), 0.0, 0.0)
}

/// Index of the route with the smallest summed distance to the rest of the
/// group; ties go to the earlier route.
pub fn medoid(routes: &[CanonicalRoute]) -> Result<usize, PlotError> {
    if routes.is_empty() {
        return Err(PlotError::EmptyGroup);
    }
    let indexes: Vec<SegmentIndex> = routes.iter().map(|r| SegmentIndex::new(&r.points)).collect();
    let n = routes.len();
    let mut totals = vec![0.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = indexes[j].sum_distances(routes[i].points.points(), 0.0, 0.0)
                + indexes[i].sum_distances(routes[j].points.points(), 0.0, 0.0);
            totals[i] += d;
            totals[j] += d;
        }
    }
    let mut best = 0;
    for (i, &t) in totals.iter().enumerate() {
        if t < totals[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Every route of a group in light grey with the medoid on top.
pub fn group_svg(routes: &[CanonicalRoute], title: &str) -> Result<String, PlotError> {
    let m = medoid(routes)?;
    let mut c = Canvas::new(routes.iter().map(|r| r.points.bounding_box()));
    for r in routes {
        c.polyline(&r.points, "#9e9e9e", 1.0, "member");
    }
    c.polyline(&routes[m].points, "#e377c2", 3.0, "medoid");
    c.dot(Point::ORIGIN, "black");
    Ok(c.finish(&format!("{title} ({} routes, medoid {})", routes.len(), routes[m].id)))
}
