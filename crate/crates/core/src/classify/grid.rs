use super::scale::{BoundAxis, ScaledTemplate};
use crate::geometry::BoundingBox;
use serde::{Deserialize, Serialize};

pub const DEFAULT_STEP_YARDS: f64 = 0.5;

// absorbs rounding in w so that e.g. 9.999999999999998 counts as 10
const GRID_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    pub axis: Axis,
    pub offset: f64,
}

impl Shift {
    pub fn vector(&self) -> (f64, f64) {
        match self.axis {
            Axis::X => (self.offset, 0.0),
            Axis::Y => (0.0, self.offset),
        }
    }
}

/// Offsets at which a scaled template is compared with the route.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftGrid {
    pub axis: Axis,
    pub offsets: Vec<f64>,
    /// Slack between the two boxes along `axis`.
    pub w: f64,
}

impl ShiftGrid {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn shifts(&self) -> impl Iterator<Item = Shift> + '_ {
        self.offsets.iter().map(|&offset| Shift {
            axis: self.axis,
            offset,
        })
    }
}

/// Offsets `0, step, 2·step, …` up to `w` rounded down to a whole step.
/// With `include_exact_endpoint`, `w` itself is appended when it is not
/// already on the grid.
pub fn grid_offsets(w: f64, step: f64, include_exact_endpoint: bool) -> Vec<f64> {
    let w = w.max(0.0);
    let n = (w / step + GRID_EPS).floor() as usize;
    let mut offsets: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    if include_exact_endpoint && w - n as f64 * step > GRID_EPS * step.max(1.0) {
        offsets.push(w);
    }
    offsets
}

/// Grid along the axis the template is free to slide on: right sides
/// aligned slides it up the y-axis, tops aligned slides it along x.
pub fn shift_grid(
    scaled: &ScaledTemplate,
    game_box: &BoundingBox,
    step: f64,
    include_exact_endpoint: bool,
) -> ShiftGrid {
    let tb = scaled.bounding_box();
    let (axis, w) = match scaled.bound_axis {
        BoundAxis::Horizontal => (Axis::Y, game_box.max_y - tb.max_y),
        BoundAxis::Vertical => (Axis::X, game_box.max_x - tb.max_x),
    };
    let w = w.max(0.0);
    ShiftGrid {
        axis,
        offsets: grid_offsets(w, step, include_exact_endpoint),
        w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polyline;
    use crate::label::RouteLabel;

    #[test]
    fn offsets_examples() {
        assert_eq!(grid_offsets(0.0, 0.5, false), vec![0.0]);
        assert_eq!(grid_offsets(1.2, 0.5, false), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid_offsets(1.2, 0.5, true), vec![0.0, 0.5, 1.0, 1.2]);
        assert_eq!(grid_offsets(1.0, 0.5, true), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid_offsets(10.0 - 2e-15, 0.5, false).len(), 21);
    }

    #[test]
    fn ten_by_ten_in_ten_by_twenty() {
        let scaled = ScaledTemplate {
            name: RouteLabel::Dig,
            points: Polyline::from_xy(&[(0.0, 0.0), (0.0, 10.0), (10.0, 10.0)]).unwrap(),
            scale_factor: 0.1,
            bound_axis: BoundAxis::Horizontal,
            ratio_h: 10.0,
            ratio_v: 5.0,
        };
        let game = BoundingBox {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 10.0,
            max_y: 20.0,
        };
        let g = shift_grid(&scaled, &game, 0.5, false);
        assert_eq!(g.axis, Axis::Y);
        assert_eq!(g.w, 10.0);
        assert_eq!(g.len(), 21);
        assert_eq!(*g.offsets.last().unwrap(), 10.0);
    }
}
