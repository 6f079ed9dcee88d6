//! Binary PPM (P6) frames, one pixel per lattice cell.
//!
//! Layers, bottom to top: trail as grey `min(8 · trail, 255)`, obstacles in
//! solid grey 128, lit cells with +64 on the red channel, the path polyline in
//! pure green, particles in pure blue, the current target in white.

use crate::arena::{Arena, PathSpec};
use crate::fields::{IlluminationField, TrailField};
use crate::geom::Cell;
use crate::swarm::Population;

pub const TRAIL_GAIN: f64 = 8.0;
const OBSTACLE_GREY: u8 = 128;
const LIGHT_RED: u8 = 64;

pub fn render_frame(
    arena: &Arena,
    trail: &TrailField,
    illum: &IlluminationField,
    population: &Population,
    path: Option<&PathSpec>,
    target: Option<Cell>,
) -> Vec<u8> {
    let (w, h) = (arena.width(), arena.height());
    let header = format!("P6\n{w} {h}\n255\n");
    let mut px = vec![[0u8; 3]; w * h];

    for (i, p) in px.iter_mut().enumerate() {
        let g = if arena.is_obstacle_at(i) {
            OBSTACLE_GREY
        } else {
            (trail.values()[i] * TRAIL_GAIN).min(255.0) as u8
        };
        *p = [g, g, g];
        if illum.lit_cells()[i] {
            p[0] = p[0].saturating_add(LIGHT_RED);
        }
    }

    let mut put = |c: Cell, rgb: [u8; 3]| {
        if let Some(i) = arena.index_of(c) {
            px[i] = rgb;
        }
    };
    if let Some(path) = path {
        for seg in path.waypoints().windows(2) {
            for c in line_cells(seg[0], seg[1]) {
                put(c, [0, 255, 0]);
            }
        }
    }
    for p in population.particles() {
        put(p.cell(), [0, 0, 255]);
    }
    if let Some(t) = target {
        put(t, [255, 255, 255]);
    }

    let mut out = Vec::with_capacity(header.len() + 3 * w * h);
    out.extend_from_slice(header.as_bytes());
    for p in px {
        out.extend_from_slice(&p);
    }
    out
}

/// Bresenham cells from `a` to `b`, both ends included.
fn line_cells(a: Cell, b: Cell) -> Vec<Cell> {
    let (dx, dy) = ((b.x - a.x).abs(), -(b.y - a.y).abs());
    let (sx, sy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
    let (mut x, mut y, mut err) = (a.x, a.y, dx + dy);
    let mut out = Vec::with_capacity((dx - dy + 1) as usize);
    loop {
        out.push(Cell::new(x, y));
        if x == b.x && y == b.y {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::swarm::Particle;

    fn pixels(ppm: &[u8], w: usize, h: usize) -> &[u8] {
        let header = format!("P6\n{w} {h}\n255\n");
        assert!(ppm.starts_with(header.as_bytes()));
        &ppm[header.len()..]
    }

    #[test]
    fn empty_arena_is_black() {
        let arena = Arena::open(20, 16).unwrap();
        let trail = TrailField::new(&arena);
        let illum = IlluminationField::for_arena(&arena);
        let pop = Population::empty(&arena);
        let ppm = render_frame(&arena, &trail, &illum, &pop, None, None);
        let body = pixels(&ppm, 20, 16);
        assert_eq!(body.len(), 20 * 16 * 3);
        assert!(body.iter().all(|&b| b == 0));
    }

    #[test]
    fn one_particle_one_blue_pixel() {
        let arena = Arena::open(16, 16).unwrap();
        let trail = TrailField::new(&arena);
        let illum = IlluminationField::for_arena(&arena);
        let pop =
            Population::from_particles(&arena, vec![Particle::new(Point::new(3.5, 4.5), 0.0)]);
        let ppm = render_frame(&arena, &trail, &illum, &pop, None, None);
        let blue: Vec<usize> = pixels(&ppm, 16, 16)
            .chunks(3)
            .enumerate()
            .filter(|(_, p)| p == &[0, 0, 255])
            .map(|(i, _)| i)
            .collect();
        assert_eq!(blue, vec![4 * 16 + 3]);
    }

    #[test]
    fn trail_gain_clamps() {
        let arena = Arena::from_fn(16, 16, |x, y| (x, y) == (0, 0)).unwrap();
        let mut trail = TrailField::new(&arena);
        trail.set(Cell::new(1, 0), 40.0);
        trail.set(Cell::new(2, 0), 10.0);
        let mut illum = IlluminationField::for_arena(&arena);
        illum.set_mask(Cell::new(8, 8), 3);
        let pop = Population::empty(&arena);
        let ppm = render_frame(&arena, &trail, &illum, &pop, None, None);
        let body = pixels(&ppm, 16, 16);
        assert_eq!(&body[0..3], &[128 + 64, 128, 128]);
        assert_eq!(&body[3..6], &[255, 255, 255]);
        assert_eq!(&body[6..9], &[80 + 64, 80, 80]);
        let unlit = (8 * 16 + 8) * 3;
        assert_eq!(&body[unlit..unlit + 3], &[0, 0, 0]);
    }

    #[test]
    fn path_and_target_drawn() {
        let arena = Arena::open(16, 16).unwrap();
        let path = PathSpec::new(
            vec![Cell::new(1, 1), Cell::new(10, 1), Cell::new(10, 8)],
            &arena,
        )
        .unwrap();
        let trail = TrailField::new(&arena);
        let illum = IlluminationField::for_arena(&arena);
        let pop = Population::empty(&arena);
        let ppm = render_frame(
            &arena,
            &trail,
            &illum,
            &pop,
            Some(&path),
            Some(Cell::new(10, 8)),
        );
        let body = pixels(&ppm, 16, 16);
        let green = body.chunks(3).filter(|p| p == &[0, 255, 0]).count();
        assert_eq!(green, 10 + 7 - 1);
        let t = (8 * 16 + 10) * 3;
        assert_eq!(&body[t..t + 3], &[255, 255, 255]);
    }

    #[test]
    fn bresenham_diagonal() {
        assert_eq!(
            line_cells(Cell::new(0, 0), Cell::new(3, 3)),
            (0..4).map(|i| Cell::new(i, i)).collect::<Vec<_>>()
        );
    }
}
