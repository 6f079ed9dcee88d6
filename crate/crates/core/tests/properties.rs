//! Property-based invariants checked against independent oracles.

use proptest::prelude::*;

use blobguide::arena::ArenaError;
use blobguide::fields::FLUSH_BELOW;
use blobguide::metrics::Sample;
use blobguide::swarm::{choose_turn, Readings, Turn};
use blobguide::{
    parse_arena, serialize_arena, summarize, Arena, Cell, ErrorTrace, IlluminationField, PathSpec,
    Point, Population, SimRng, SwarmParams, TrailField,
};

fn arena_strategy() -> impl Strategy<Value = Arena> {
    (16usize..28, 16usize..28, any::<u64>(), 0.0f64..0.3).prop_map(|(w, h, seed, density)| {
        let mut rng = SimRng::seed(seed);
        Arena::from_fn(w, h, |_, _| rng.unit() < density).unwrap()
    })
}

fn traversable_cells(arena: &Arena) -> Vec<Cell> {
    let mut cells = Vec::new();
    for y in 0..arena.height() as i64 {
        for x in 0..arena.width() as i64 {
            if arena.is_traversable(x, y) {
                cells.push(Cell::new(x, y));
            }
        }
    }
    cells
}

/// Random traversable waypoints without consecutive repeats.
fn random_path(arena: &Arena, seed: u64, len: usize) -> Option<PathSpec> {
    let cells = traversable_cells(arena);
    let mut rng = SimRng::seed(seed);
    let mut wps: Vec<Cell> = Vec::new();
    for _ in 0..len {
        let c = cells[rng.below(cells.len() as u64) as usize];
        if wps.last() != Some(&c) {
            wps.push(c);
        }
    }
    (wps.len() >= 2).then(|| PathSpec::new(wps, arena).unwrap())
}

fn filled_trail(arena: &Arena, seed: u64) -> TrailField {
    let mut trail = TrailField::new(arena);
    let mut rng = SimRng::seed(seed);
    for c in traversable_cells(arena) {
        if rng.coin() {
            trail.set(c, rng.unit() * 100.0);
        }
    }
    trail
}

/// Straightforward 3x3 damped mean over an explicit copy of the field.
fn naive_diffuse(arena: &Arena, before: &TrailField, damping: f64) -> Vec<f64> {
    let (w, h) = (arena.width() as i64, arena.height() as i64);
    let mut out = vec![0.0; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            if !arena.is_traversable(x, y) {
                continue;
            }
            let mut sum = 0.0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if arena.is_traversable(x + dx, y + dy) {
                        sum += before.value(Cell::new(x + dx, y + dy));
                    }
                }
            }
            let v = sum / 9.0 * damping;
            out[(y * w + x) as usize] = if v < FLUSH_BELOW { 0.0 } else { v };
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diffusion_matches_naive_mean_filter(arena in arena_strategy(), seed in any::<u64>(), damping in 0.01f64..=1.0) {
        let mut trail = filled_trail(&arena, seed);
        let expect = naive_diffuse(&arena, &trail, damping);
        trail.diffuse(damping);
        for (i, (&got, &want)) in trail.values().iter().zip(&expect).enumerate() {
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0), "cell {i}: {got} vs {want}");
        }
    }

    #[test]
    fn diffusion_decays_mass_and_stays_non_negative(arena in arena_strategy(), seed in any::<u64>(), damping in 0.01f64..=1.0, passes in 1usize..6) {
        let mut trail = filled_trail(&arena, seed);
        for _ in 0..passes {
            let before = trail.total();
            trail.diffuse(damping);
            prop_assert!(trail.total() <= damping * before * (1.0 + 1e-12));
            for (i, &v) in trail.values().iter().enumerate() {
                prop_assert!(v >= 0.0 && v.is_finite());
                if arena.is_obstacle_at(i) {
                    prop_assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn serialize_then_parse_is_identity(arena in arena_strategy(), seed in any::<u64>(), len in 2usize..8) {
        if let Some(path) = random_path(&arena, seed, len) {
            let text = serialize_arena(&arena, &path);
            let (a2, p2) = parse_arena(&text).unwrap();
            prop_assert_eq!(&a2, &arena);
            prop_assert_eq!(&p2, &path);
            prop_assert_eq!(serialize_arena(&a2, &p2), text);
        }
    }

    #[test]
    fn waypoint_on_obstacle_is_rejected(arena in arena_strategy(), seed in any::<u64>()) {
        let blocked: Vec<usize> = (0..arena.cell_count()).filter(|&i| arena.is_obstacle_at(i)).collect();
        if let (Some(path), false) = (random_path(&arena, seed, 3), blocked.is_empty()) {
            let i = blocked[(seed % blocked.len() as u64) as usize];
            let cell = Cell::new((i % arena.width()) as i64, (i / arena.width()) as i64);
            let mut wps = path.waypoints().to_vec();
            wps.push(cell);
            let rejected = matches!(PathSpec::new(wps, &arena), Err(ArenaError::Waypoint { .. }));
            prop_assert!(rejected);
        }
    }

    #[test]
    fn path_distance_against_dense_sampling(seed in any::<u64>(), len in 2usize..6, px in -5.0f64..35.0, py in -5.0f64..35.0) {
        let arena = Arena::open(30, 30).unwrap();
        let path = random_path(&arena, seed, len).unwrap();
        let p = Point::new(px, py);
        let d = path.distance_to_path(p);
        let mut sampled = f64::INFINITY;
        for seg in path.points().windows(2) {
            let n = 400;
            for k in 0..=n {
                let t = k as f64 / n as f64;
                let q = Point::new(seg[0].x + t * (seg[1].x - seg[0].x), seg[0].y + t * (seg[1].y - seg[0].y));
                sampled = sampled.min(p.distance(q));
            }
        }
        // the exact distance is a lower bound of any sample, and samples are
        // at most half a sample spacing (< 0.06 cells here) from the true foot
        prop_assert!(d <= sampled + 1e-9);
        prop_assert!(sampled - d <= 0.06);
        for w in path.points() {
            prop_assert!(d <= p.distance(*w) + 1e-9);
            prop_assert!(path.distance_to_path(*w) < 1e-9);
        }
    }

    #[test]
    fn rule_table_on_arbitrary_readings(l in 0.0f64..3.0, f in 0.0f64..3.0, r in 0.0f64..3.0, coin in any::<bool>()) {
        let mut used = false;
        let got = choose_turn(Readings::new(l, f, r), || { used = true; coin });
        let both_sides_win = f < l && f < r;
        prop_assert_eq!(used, both_sides_win);
        let expect = if f > l && f > r {
            Turn::Keep
        } else if both_sides_win {
            if coin { Turn::Right } else { Turn::Left }
        } else if l < r {
            Turn::Right
        } else if r < l {
            Turn::Left
        } else {
            Turn::Keep
        };
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn stepping_preserves_occupancy_and_traversability(
        arena in arena_strategy(),
        seed in any::<u64>(),
        count in 1usize..60,
        oscillatory in any::<bool>(),
        p_reset in 0.0f64..0.2,
        lit in any::<bool>(),
    ) {
        let center = traversable_cells(&arena)[0];
        let mut rng = SimRng::seed(seed);
        let Ok(mut pop) = Population::inoculate(&arena, center, count, &mut rng) else {
            return Ok(());
        };
        let params = SwarmParams { oscillatory, p_reset, ..SwarmParams::default() };
        let mut trail = TrailField::new(&arena);
        let mut illum = IlluminationField::for_arena(&arena);
        if lit {
            illum.set_mask(center, 5);
        }
        for _ in 0..30 {
            let before: Vec<Point> = pop.particles().iter().map(|p| p.pos).collect();
            pop.step(&arena, &mut trail, &illum, &params, &mut rng);
            prop_assert!(pop.check_invariants(&arena).is_ok());
            prop_assert_eq!(pop.len(), count);
            for (p, b) in pop.particles().iter().zip(&before) {
                prop_assert!(arena.is_traversable_cell(p.cell()));
                prop_assert!((0.0..360.0).contains(&p.heading));
                if !oscillatory {
                    prop_assert!(p.pos.distance(*b) <= 1.0 + 1e-9);
                    prop_assert_eq!(p.pos, p.internal_pos);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_state(arena in arena_strategy(), seed in any::<u64>(), count in 1usize..40) {
        let center = traversable_cells(&arena)[0];
        let simulate = || {
            let mut rng = SimRng::seed(seed);
            let mut pop = Population::inoculate(&arena, center, count, &mut rng).ok()?;
            let mut trail = TrailField::new(&arena);
            let illum = IlluminationField::for_arena(&arena);
            for _ in 0..20 {
                pop.step(&arena, &mut trail, &illum, &SwarmParams::default(), &mut rng);
            }
            Some((pop.particles().to_vec(), trail.values().to_vec()))
        };
        prop_assert_eq!(simulate(), simulate());
    }

    #[test]
    fn shuffle_is_a_permutation(seed in any::<u64>(), n in 0usize..200) {
        let mut v: Vec<usize> = (0..n).collect();
        SimRng::seed(seed).shuffle(&mut v);
        v.sort_unstable();
        prop_assert_eq!(v, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn bounded_draws(seed in any::<u64>(), n in 1u64..1_000_000) {
        let mut rng = SimRng::seed(seed);
        for _ in 0..100 {
            prop_assert!(rng.below(n) < n);
            let u = rng.unit();
            prop_assert!((0.0..1.0).contains(&u));
            let h = rng.heading();
            prop_assert!((0.0..360.0).contains(&h));
        }
    }

    #[test]
    fn summary_metrics_are_bounded(dists in prop::collection::vec((0.0f64..50.0, 0.0f64..20.0, 0usize..4), 1..60)) {
        let samples: Vec<Sample> = dists
            .iter()
            .enumerate()
            .map(|(k, &(dt, dp, t))| Sample {
                step: 50 * (k as u64 + 1),
                centroid: Point::new(dt, dp),
                target_index: t,
                dist_to_target: dt,
                dist_to_path: dp,
            })
            .collect();
        let trace = ErrorTrace::from_samples(samples);
        let s = summarize(&trace, 0, None, Point::new(0.0, 0.0));
        prop_assert!((0.0..=1.0).contains(&s.sawtooth_score));
        prop_assert!(s.mean_path_error <= s.max_path_error + 1e-12);
        prop_assert!(!s.completed);
        prop_assert!(s.traversal_steps.is_none());
    }
}
