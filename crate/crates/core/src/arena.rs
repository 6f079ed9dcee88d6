//! Arena geometry, waypoint paths and the `#physarum-arena v1` text format.
//!
//! ```text
//! #physarum-arena v1
//! width 16
//! height 16
//! waypoint 2 2
//! waypoint 12 12
//! grid
//! ................
//! ....            (exactly `height` rows of exactly `width` chars)
//! ```
//!
//! `.` is a free cell and `#` an obstacle. Row 0 is `y = 0` (top). The
//! `width`, `height` and `waypoint` lines may appear in any order before
//! `grid`; waypoints keep their relative order (first = start, last = goal).

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::geom::{polyline_distance, Cell, Point};

pub const MAGIC: &str = "#physarum-arena v1";
pub const MIN_SIDE: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("arena must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}")]
    TooSmall { width: usize, height: usize },
    #[error("obstacle mask has {found} entries, expected {expected}")]
    MaskSize { expected: usize, found: usize },
    #[error("path needs at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("waypoint {index} {cell}: {kind}")]
    Waypoint {
        index: usize,
        cell: Cell,
        kind: WaypointErrorKind,
    },
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseErrorKind {
    #[error("expected header `{MAGIC}`")]
    MissingMagic,
    #[error("malformed header line `{0}`")]
    MalformedHeader(String),
    #[error("duplicate `{0}` line")]
    Duplicate(&'static str),
    #[error("missing `{0}` line before grid")]
    Missing(&'static str),
    #[error("missing `grid` line")]
    MissingGrid,
    #[error("grid row has width {found}, expected {expected}")]
    RowWidth { expected: usize, found: usize },
    #[error("grid has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("invalid grid character {0:?}")]
    BadCell(char),
    #[error("arena must be at least {MIN_SIDE}x{MIN_SIDE}")]
    TooSmall,
    #[error("path needs at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("waypoint out of bounds")]
    WaypointOutOfBounds,
    #[error("waypoint on obstacle")]
    WaypointOnObstacle,
    #[error("waypoint repeats the previous one")]
    WaypointRepeated,
}

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum WaypointErrorKind {
    #[error("waypoint out of bounds")]
    OutOfBounds,
    #[error("waypoint on obstacle")]
    OnObstacle,
    #[error("waypoint repeats the previous one")]
    Repeated,
}

impl From<WaypointErrorKind> for ParseErrorKind {
    fn from(k: WaypointErrorKind) -> Self {
        match k {
            WaypointErrorKind::OutOfBounds => ParseErrorKind::WaypointOutOfBounds,
            WaypointErrorKind::OnObstacle => ParseErrorKind::WaypointOnObstacle,
            WaypointErrorKind::Repeated => ParseErrorKind::WaypointRepeated,
        }
    }
}

/// A rectangular lattice with an obstacle mask. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    width: usize,
    height: usize,
    obstacles: Vec<bool>,
}

impl Arena {
    pub fn new(width: usize, height: usize, obstacles: Vec<bool>) -> Result<Self, ArenaError> {
        if width < MIN_SIDE || height < MIN_SIDE {
            return Err(ArenaError::TooSmall { width, height });
        }
        if obstacles.len() != width * height {
            return Err(ArenaError::MaskSize {
                expected: width * height,
                found: obstacles.len(),
            });
        }
        Ok(Self {
            width,
            height,
            obstacles,
        })
    }

    /// An obstacle-free arena.
    pub fn open(width: usize, height: usize) -> Result<Self, ArenaError> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Builds an arena from a predicate over cells (`true` = obstacle).
    pub fn from_fn(
        width: usize,
        height: usize,
        mut obstacle: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, ArenaError> {
        let mut mask = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                mask.push(obstacle(x, y));
            }
        }
        Self::new(width, height, mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    /// Row-major index of an in-bounds cell.
    #[inline]
    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        if cell.x < 0 || cell.y < 0 || cell.x >= self.width as i64 || cell.y >= self.height as i64 {
            None
        } else {
            Some(cell.y as usize * self.width + cell.x as usize)
        }
    }

    #[inline]
    pub fn is_obstacle_at(&self, index: usize) -> bool {
        self.obstacles[index]
    }

    pub fn obstacles(&self) -> &[bool] {
        &self.obstacles
    }

    /// False outside the lattice and on obstacles.
    #[inline]
    pub fn is_traversable(&self, x: i64, y: i64) -> bool {
        self.index_of(Cell::new(x, y))
            .is_some_and(|i| !self.obstacles[i])
    }

    #[inline]
    pub fn is_traversable_cell(&self, cell: Cell) -> bool {
        self.is_traversable(cell.x, cell.y)
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacles.iter().filter(|&&o| o).count()
    }

    fn check_waypoint(&self, prev: Option<Cell>, cell: Cell) -> Result<(), WaypointErrorKind> {
        if self.index_of(cell).is_none() {
            Err(WaypointErrorKind::OutOfBounds)
        } else if !self.is_traversable_cell(cell) {
            Err(WaypointErrorKind::OnObstacle)
        } else if prev == Some(cell) {
            Err(WaypointErrorKind::Repeated)
        } else {
            Ok(())
        }
    }
}

/// Ordered guidance waypoints: first = inoculation site, last = goal.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Cell>,
    points: Vec<Point>,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Cell>, arena: &Arena) -> Result<Self, ArenaError> {
        if waypoints.len() < 2 {
            return Err(ArenaError::TooFewWaypoints(waypoints.len()));
        }
        let mut prev = None;
        for (index, &cell) in waypoints.iter().enumerate() {
            arena
                .check_waypoint(prev, cell)
                .map_err(|kind| ArenaError::Waypoint { index, cell, kind })?;
            prev = Some(cell);
        }
        let points = waypoints.iter().map(|c| c.center()).collect();
        Ok(Self { waypoints, points })
    }

    pub fn waypoints(&self) -> &[Cell] {
        &self.waypoints
    }

    /// Waypoints as cell-center points; this is where distances are measured from.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn start(&self) -> Cell {
        self.waypoints[0]
    }

    pub fn goal(&self) -> Cell {
        self.waypoints[self.waypoints.len() - 1]
    }

    pub fn last_index(&self) -> usize {
        self.waypoints.len() - 1
    }

    /// Minimum distance from `p` to the polyline through the waypoint centers.
    pub fn distance_to_path(&self, p: Point) -> f64 {
        polyline_distance(&self.points, p)
    }
}

/// Parses the arena text format. Errors carry the 1-based line number.
pub fn parse_arena(text: &str) -> Result<(Arena, PathSpec), ArenaError> {
    let err = |line: usize, kind: ParseErrorKind| ArenaError::Parse { line, kind };
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(err(1, ParseErrorKind::MissingMagic)),
    }

    let mut width: Option<usize> = None;
    let mut height: Option<usize> = None;
    let mut waypoints: Vec<(usize, Cell)> = Vec::new();
    let mut grid_line = None;

    for (n, line) in lines.by_ref() {
        let mut words = line.split_whitespace();
        let keyword = words.next();
        let args: Vec<&str> = words.collect();
        let malformed = || err(n, ParseErrorKind::MalformedHeader(line.to_string()));
        match (keyword, args.as_slice()) {
            (Some("grid"), []) => {
                grid_line = Some(n);
                break;
            }
            (Some("width"), [v]) => {
                let v = v.parse().map_err(|_| malformed())?;
                if width.replace(v).is_some() {
                    return Err(err(n, ParseErrorKind::Duplicate("width")));
                }
            }
            (Some("height"), [v]) => {
                let v = v.parse().map_err(|_| malformed())?;
                if height.replace(v).is_some() {
                    return Err(err(n, ParseErrorKind::Duplicate("height")));
                }
            }
            (Some("waypoint"), [x, y]) => {
                let x: i64 = x.parse().map_err(|_| malformed())?;
                let y: i64 = y.parse().map_err(|_| malformed())?;
                waypoints.push((n, Cell::new(x, y)));
            }
            _ => return Err(malformed()),
        }
    }

    let grid_line =
        grid_line.ok_or_else(|| err(text.split('\n').count(), ParseErrorKind::MissingGrid))?;
    let width = width.ok_or(err(grid_line, ParseErrorKind::Missing("width")))?;
    let height = height.ok_or(err(grid_line, ParseErrorKind::Missing("height")))?;
    if width < MIN_SIDE || height < MIN_SIDE {
        return Err(err(grid_line, ParseErrorKind::TooSmall));
    }

    let mut rest: Vec<(usize, &str)> = lines.collect();
    // a trailing newline leaves one empty final piece
    if rest.last().is_some_and(|(_, l)| l.is_empty()) {
        rest.pop();
    }
    let mut mask = Vec::with_capacity(width * height);
    let mut rows = 0;
    let mut last_line = grid_line;
    for (n, line) in rest {
        last_line = n;
        if rows == height {
            return Err(err(
                n,
                ParseErrorKind::RowCount {
                    expected: height,
                    found: rows + 1,
                },
            ));
        }
        let found = line.chars().count();
        if found != width {
            return Err(err(
                n,
                ParseErrorKind::RowWidth {
                    expected: width,
                    found,
                },
            ));
        }
        for ch in line.chars() {
            match ch {
                '.' => mask.push(false),
                '#' => mask.push(true),
                other => return Err(err(n, ParseErrorKind::BadCell(other))),
            }
        }
        rows += 1;
    }
    if rows != height {
        return Err(err(
            last_line,
            ParseErrorKind::RowCount {
                expected: height,
                found: rows,
            },
        ));
    }

    let arena = Arena::new(width, height, mask).expect("dimensions checked above");

    if waypoints.len() < 2 {
        let line = waypoints.last().map_or(grid_line, |w| w.0);
        return Err(err(line, ParseErrorKind::TooFewWaypoints(waypoints.len())));
    }
    let mut prev = None;
    for &(n, cell) in &waypoints {
        arena
            .check_waypoint(prev, cell)
            .map_err(|k| err(n, k.into()))?;
        prev = Some(cell);
    }
    let path = PathSpec::new(waypoints.into_iter().map(|w| w.1).collect(), &arena)
        .expect("waypoints checked above");
    Ok((arena, path))
}

/// Writes an arena and path in the canonical text layout (LF endings, trailing newline).
pub fn serialize_arena(arena: &Arena, path: &PathSpec) -> String {
    let mut out = String::with_capacity(arena.cell_count() + arena.height * 2 + 128);
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "width {}", arena.width);
    let _ = writeln!(out, "height {}", arena.height);
    for w in path.waypoints() {
        let _ = writeln!(out, "waypoint {} {}", w.x, w.y);
    }
    out.push_str("grid\n");
    for row in arena.obstacles.chunks(arena.width) {
        out.extend(row.iter().map(|&o| if o { '#' } else { '.' }));
        out.push('\n');
    }
    out
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Arena {
        path: String,
        #[source]
        source: ArenaError,
    },
}

pub fn load_arena(path: impl AsRef<Path>) -> Result<(Arena, PathSpec), LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_arena(&text).map_err(|source| LoadError::Arena {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text_with(grid: &[String], waypoints: &[(i64, i64)]) -> String {
        let mut s = format!("{MAGIC}\nwidth {}\nheight {}\n", grid[0].len(), grid.len());
        for (x, y) in waypoints {
            s += &format!("waypoint {x} {y}\n");
        }
        s += "grid\n";
        for row in grid {
            s += row;
            s.push('\n');
        }
        s
    }

    fn blank16() -> Vec<String> {
        vec![".".repeat(16); 16]
    }

    #[test]
    fn empty_arena_parses() {
        let (arena, path) = parse_arena(&text_with(&blank16(), &[(2, 2), (12, 12)])).unwrap();
        assert_eq!((arena.width(), arena.height()), (16, 16));
        assert_eq!(arena.obstacle_count(), 0);
        assert_eq!(path.waypoints(), &[Cell::new(2, 2), Cell::new(12, 12)]);
    }

    #[test]
    fn single_obstacle() {
        let mut g = blank16();
        g[5].replace_range(5..6, "#");
        let (arena, _) = parse_arena(&text_with(&g, &[(2, 2), (12, 12)])).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                assert_eq!(arena.is_traversable(x, y), (x, y) != (5, 5));
            }
        }
    }

    #[test]
    fn waypoint_out_of_bounds_reports_line() {
        let e = parse_arena(&text_with(&blank16(), &[(20, 2), (12, 12)])).unwrap_err();
        assert_eq!(
            e,
            ArenaError::Parse {
                line: 4,
                kind: ParseErrorKind::WaypointOutOfBounds
            }
        );
        assert!(e.to_string().contains("waypoint out of bounds"));
    }

    #[test]
    fn waypoint_on_obstacle() {
        let mut g = blank16();
        g[12].replace_range(12..13, "#");
        let e = parse_arena(&text_with(&g, &[(2, 2), (12, 12)])).unwrap_err();
        assert_eq!(
            e,
            ArenaError::Parse {
                line: 5,
                kind: ParseErrorKind::WaypointOnObstacle
            }
        );
    }

    #[test]
    fn too_few_waypoints() {
        let e = parse_arena(&text_with(&blank16(), &[(2, 2)])).unwrap_err();
        assert!(matches!(
            e,
            ArenaError::Parse {
                kind: ParseErrorKind::TooFewWaypoints(1),
                ..
            }
        ));
    }

    #[test]
    fn repeated_waypoint_rejected() {
        let e = parse_arena(&text_with(&blank16(), &[(2, 2), (2, 2), (5, 5)])).unwrap_err();
        assert!(matches!(
            e,
            ArenaError::Parse {
                line: 5,
                kind: ParseErrorKind::WaypointRepeated
            }
        ));
    }

    #[test]
    fn grid_shape_errors() {
        let mut g = blank16();
        g[3].push('.');
        let e = parse_arena(&text_with(&g, &[(2, 2), (5, 5)])).unwrap_err();
        assert_eq!(
            e,
            ArenaError::Parse {
                line: 10,
                kind: ParseErrorKind::RowWidth {
                    expected: 16,
                    found: 17
                }
            }
        );

        let mut g = blank16();
        g.pop();
        let text = text_with(&g, &[(2, 2), (5, 5)]).replace("height 15", "height 16");
        let e = parse_arena(&text).unwrap_err();
        assert!(matches!(
            e,
            ArenaError::Parse {
                kind: ParseErrorKind::RowCount {
                    expected: 16,
                    found: 15
                },
                ..
            }
        ));

        let mut g = blank16();
        g[0].replace_range(0..1, "x");
        let e = parse_arena(&text_with(&g, &[(2, 2), (5, 5)])).unwrap_err();
        assert!(matches!(
            e,
            ArenaError::Parse {
                line: 7,
                kind: ParseErrorKind::BadCell('x')
            }
        ));
    }

    #[test]
    fn header_errors() {
        let e = parse_arena("physarum\n").unwrap_err();
        assert_eq!(
            e,
            ArenaError::Parse {
                line: 1,
                kind: ParseErrorKind::MissingMagic
            }
        );
        let text = text_with(&blank16(), &[(2, 2), (5, 5)]).replace("width 16", "width sixteen");
        assert!(matches!(
            parse_arena(&text).unwrap_err(),
            ArenaError::Parse {
                line: 2,
                kind: ParseErrorKind::MalformedHeader(_)
            }
        ));
        let text = text_with(&blank16(), &[(2, 2), (5, 5)]).replace("grid\n", "");
        assert!(matches!(
            parse_arena(&text).unwrap_err(),
            ArenaError::Parse {
                kind: ParseErrorKind::MalformedHeader(_),
                ..
            }
        ));
    }

    #[test]
    fn traversable_outside_bounds() {
        let arena = Arena::open(16, 16).unwrap();
        assert!(!arena.is_traversable(-1, 0));
        assert!(!arena.is_traversable(0, 16));
        assert!(arena.is_traversable(0, 0));
        assert!(arena.is_traversable(15, 15));
    }

    #[test]
    fn path_distance_uses_cell_centers() {
        let arena = Arena::open(32, 32).unwrap();
        let path = PathSpec::new(vec![Cell::new(0, 0), Cell::new(10, 0)], &arena).unwrap();
        assert_eq!(path.distance_to_path(Point::new(5.5, 0.5)), 0.0);
        assert_eq!(path.distance_to_path(Point::new(5.5, 3.5)), 3.0);
        assert_eq!(path.distance_to_path(Point::new(13.5, 4.5)), 5.0);
    }

    #[test]
    fn small_arena_rejected() {
        assert!(matches!(
            Arena::open(15, 40),
            Err(ArenaError::TooSmall { .. })
        ));
    }

    #[test]
    fn serialize_round_trip_exact() {
        let mut g = blank16();
        g[7].replace_range(3..9, "######");
        let text = text_with(&g, &[(1, 1), (14, 1), (14, 14)]);
        let (arena, path) = parse_arena(&text).unwrap();
        assert_eq!(serialize_arena(&arena, &path), text);
    }
}
