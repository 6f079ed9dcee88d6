//! Regenerates the fixture arenas under `crates/core/fixtures/`.
//!
//! ```text
//! cargo run --example gen_fixtures
//! ```

use std::path::Path;

use blobguide::{serialize_arena, Arena, Cell, PathSpec};

/// Waypoints every `spacing` cells (or closer) along a polyline through `corners`.
fn densify(corners: &[(i64, i64)], spacing: f64) -> Vec<Cell> {
    let mut out = vec![Cell::new(corners[0].0, corners[0].1)];
    for seg in corners.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let len = (((b.0 - a.0).pow(2) + (b.1 - a.1).pow(2)) as f64).sqrt();
        let n = (len / spacing).ceil() as i64;
        for k in 1..=n {
            let t = k as f64 / n as f64;
            out.push(Cell::new(
                a.0 + ((b.0 - a.0) as f64 * t).round() as i64,
                a.1 + ((b.1 - a.1) as f64 * t).round() as i64,
            ));
        }
    }
    out
}

fn rect(x: i64, y: i64, x0: i64, y0: i64, x1: i64, y1: i64) -> bool {
    (x0..x1).contains(&x) && (y0..y1).contains(&y)
}

fn disc(x: i64, y: i64, cx: i64, cy: i64, r: i64) -> bool {
    let (dx, dy) = (2 * (x - cx) + 1, 2 * (y - cy) + 1);
    dx * dx + dy * dy <= 4 * r * r
}

fn write(dir: &Path, name: &str, arena: &Arena, corners: &[(i64, i64)], spacing: f64) {
    let path = PathSpec::new(densify(corners, spacing), arena).expect("fixture path is valid");
    let file = dir.join(name);
    std::fs::write(&file, serialize_arena(arena, &path)).expect("write fixture");
    println!("{} ({} waypoints)", file.display(), path.len());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures dir");

    let corridor = Arena::open(300, 100).unwrap();
    write(
        &dir,
        "corridor.arena",
        &corridor,
        &[(40, 50), (250, 50)],
        30.0,
    );

    // Two interleaved walls make an S-shaped course; the disc guards the
    // lower-right corner just past the goal.
    let course = Arena::from_fn(300, 300, |x, y| {
        let (x, y) = (x as i64, y as i64);
        rect(x, y, 0, 95, 200, 115) || rect(x, y, 100, 190, 300, 210) || disc(x, y, 262, 262, 20)
    })
    .unwrap();
    write(
        &dir,
        "obstacle_course.arena",
        &course,
        &[
            (45, 45),
            (245, 45),
            (245, 150),
            (55, 150),
            (55, 250),
            (200, 250),
        ],
        30.0,
    );

    let grating = Arena::from_fn(200, 400, |x, y| grating_cell(x as i64, y as i64)).unwrap();
    write(
        &dir,
        "grating.arena",
        &grating,
        &[
            (100, 35),
            (100, 140),
            (40, 150),
            (40, 200),
            (160, 205),
            (160, 255),
            (100, 270),
            (100, 360),
        ],
        30.0,
    );
}

/// Vertical arena: a narrow channel, two staggered horizontal blocks, then a
/// row of thin posts with narrow gaps above the goal.
fn grating_cell(x: i64, y: i64) -> bool {
    let channel = (70..130).contains(&y) && !(75..125).contains(&x);
    let blocks = rect(x, y, 80, 165, 200, 180) || rect(x, y, 0, 225, 120, 240);
    let posts = (290..305).contains(&y) && (x % 16) >= 10;
    channel || blocks || posts
}
