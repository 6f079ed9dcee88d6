//! Lattice coordinates and real-valued points.
//!
//! x grows rightward and y grows downward. Cell `(x, y)` covers the half-open
//! square `[x, x + 1) × [y, y + 1)`.

use std::fmt;

/// Integer lattice coordinate. Signed so that out-of-bounds probes are representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Center of the cell's square.
    pub fn center(self) -> Point {
        Point::new(self.x as f64 + 0.5, self.y as f64 + 0.5)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// The cell containing this point.
    #[inline]
    pub fn cell(self) -> Cell {
        Cell::new(floor_i64(self.x), floor_i64(self.y))
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// `self + len · (cos θ, sin θ)` for a heading in degrees.
    pub fn offset(self, heading_deg: f64, len: f64) -> Point {
        let (s, c) = heading_deg.to_radians().sin_cos();
        Point::new(self.x + len * c, self.y + len * s)
    }
}

/// `v.floor() as i64` without a libm call; exact for finite `|v| < 2^53`.
#[inline]
pub fn floor_i64(v: f64) -> i64 {
    let t = v as i64;
    if (t as f64) > v {
        t - 1
    } else {
        t
    }
}

/// Wrap an angle in degrees into `[0, 360)`.
pub fn wrap_degrees(a: f64) -> f64 {
    let r = a.rem_euclid(360.0);
    // rem_euclid rounds tiny negatives up to exactly 360.0
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Euclidean distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Minimum distance from `p` to the polyline through `vertices`.
///
/// A single vertex degenerates to point distance; an empty slice yields infinity.
pub fn polyline_distance(vertices: &[Point], p: Point) -> f64 {
    match vertices {
        [] => f64::INFINITY,
        [only] => p.distance(*only),
        _ => vertices
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}
