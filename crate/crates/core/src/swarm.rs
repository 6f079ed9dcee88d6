//! The particle population: three-sensor chemotaxis, unit forward moves on a
//! single-occupancy lattice, and the oscillatory (momentum) motor variant.
//!
//! In oscillatory mode a blocked particle keeps its heading and pushes an
//! internal reference point ahead of it, one unit per step, through the cells
//! of other particles. Moves are taken from that reference, so the particle
//! lands on the first vacancy along its persistent path as soon as one opens.
//! Walls and the lattice edge stop the reference. Resetting the reference
//! (probability pID per step) is what limits the momentum.

use thiserror::Error;

use crate::arena::Arena;
use crate::fields::{IlluminationField, TrailField, DEFAULT_DAMPING};
use crate::geom::{wrap_degrees, Cell, Point};
use crate::rng::SimRng;

const EMPTY: u32 = u32::MAX;

/// Fraction of the inoculation disc that the initial population fills.
pub const INOCULATION_FILL: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum SwarmError {
    #[error("invalid swarm parameter: {0}")]
    InvalidParam(String),
    #[error("inoculation at {center} needs {needed} free cells within radius {radius}, found {available}")]
    InsufficientSpace {
        center: Cell,
        radius: u32,
        needed: usize,
        available: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmParams {
    /// Angle between the front sensor and each side sensor, degrees.
    pub sensor_angle: f64,
    /// Sensor distance from the particle, cells.
    pub sensor_offset: f64,
    /// Turn applied per sensory stage, degrees.
    pub rotation_angle: f64,
    /// Trail deposited on every move into a new cell.
    pub deposit_amount: f64,
    /// Blocked particles keep their heading instead of picking a random one.
    pub oscillatory: bool,
    /// Per-step probability of resetting the internal position reference (oscillatory only).
    pub p_reset: f64,
    /// Multiplier applied to sensor readings taken on lit cells.
    pub light_attenuation: f64,
    /// Damping factor of the trail diffusion pass run after every step.
    pub damping: f64,
}

/// Sensor multiplier on lit cells. Calibrated so that the mask both tows the
/// blob quickly and keeps it tight around the unlit square.
pub const DEFAULT_LIGHT_ATTENUATION: f64 = 0.01;

impl Default for SwarmParams {
    fn default() -> Self {
        Self {
            sensor_angle: 90.0,
            sensor_offset: 15.0,
            rotation_angle: 45.0,
            deposit_amount: 5.0,
            oscillatory: true,
            p_reset: 0.05,
            light_attenuation: DEFAULT_LIGHT_ATTENUATION,
            damping: DEFAULT_DAMPING,
        }
    }
}

impl SwarmParams {
    /// Forward move length per step, cells.
    pub const STEP_LENGTH: f64 = 1.0;

    pub fn validate(&self) -> Result<(), SwarmError> {
        let bad = |what: &str| Err(SwarmError::InvalidParam(what.to_string()));
        let angle_ok = |a: f64| a > 0.0 && a <= 180.0;
        if !angle_ok(self.sensor_angle) {
            return bad("sensor angle must be in (0, 180]");
        }
        if !angle_ok(self.rotation_angle) {
            return bad("rotation angle must be in (0, 180]");
        }
        if !(self.sensor_offset >= 1.0) {
            return bad("sensor offset must be >= 1");
        }
        if !(self.deposit_amount >= 0.0 && self.deposit_amount.is_finite()) {
            return bad("deposit amount must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.p_reset) {
            return bad("pID must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.light_attenuation) {
            return bad("light attenuation must be in [0, 1]");
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return bad("damping must be in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub pos: Point,
    /// Degrees in `[0, 360)`; 0 points along +x, 90 along +y (down).
    pub heading: f64,
    /// Positional reference advanced while blocked in oscillatory mode.
    pub internal_pos: Point,
}

impl Particle {
    pub fn new(pos: Point, heading: f64) -> Self {
        Self {
            pos,
            heading: wrap_degrees(heading),
            internal_pos: pos,
        }
    }

    pub fn cell(&self) -> Cell {
        self.pos.cell()
    }
}

/// Front, left and right sensor readings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readings {
    pub left: f64,
    pub front: f64,
    pub right: f64,
}

impl Readings {
    pub fn new(left: f64, front: f64, right: f64) -> Self {
        Self { left, front, right }
    }
}

/// Heading change chosen by the sensory stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Keep,
    Left,
    Right,
}

/// The sensory-stage rule table. `coin` is only called when both side sensors
/// beat the front one; it returns true for a right turn.
pub fn choose_turn(r: Readings, coin: impl FnOnce() -> bool) -> Turn {
    let Readings { left, front, right } = r;
    if front > left && front > right {
        Turn::Keep
    } else if front < left && front < right {
        if coin() {
            Turn::Right
        } else {
            Turn::Left
        }
    } else if left < right {
        Turn::Right
    } else if right < left {
        Turn::Left
    } else {
        Turn::Keep
    }
}

#[inline]
fn attenuated(trail: &TrailField, illum: &IlluminationField, p: Point, lambda: f64) -> f64 {
    let c = p.cell();
    let (w, h) = (trail.width() as i64, trail.height() as i64);
    if c.x < 0 || c.y < 0 || c.x >= w || c.y >= h {
        return 0.0;
    }
    let i = (c.y * w + c.x) as usize;
    let v = trail.values()[i];
    if illum.is_active() && illum.lit_cells()[i] {
        v * lambda
    } else {
        v
    }
}

/// Samples the three sensors of `particle`.
pub fn sense(
    particle: &Particle,
    trail: &TrailField,
    illum: &IlluminationField,
    params: &SwarmParams,
) -> Readings {
    let spread = params.sensor_angle.to_radians().sin_cos();
    sense_along(
        particle,
        unit(particle.heading),
        spread,
        trail,
        illum,
        params,
    )
}

#[inline]
fn unit(heading_deg: f64) -> (f64, f64) {
    let (s, c) = heading_deg.to_radians().sin_cos();
    (c, s)
}

/// [`sense`] with the heading's unit vector and `sin_cos` of the sensor angle
/// already computed; the side sensors are rotations of the front direction.
#[inline]
fn sense_along(
    particle: &Particle,
    (c, s): (f64, f64),
    (sa_s, sa_c): (f64, f64),
    trail: &TrailField,
    illum: &IlluminationField,
    params: &SwarmParams,
) -> Readings {
    let p = particle.pos;
    let so = params.sensor_offset;
    let lambda = params.light_attenuation;
    let probe = |dx: f64, dy: f64| {
        attenuated(
            trail,
            illum,
            Point::new(p.x + so * dx, p.y + so * dy),
            lambda,
        )
    };
    Readings {
        left: probe(c * sa_c + s * sa_s, s * sa_c - c * sa_s),
        front: probe(c, s),
        right: probe(c * sa_c - s * sa_s, s * sa_c + c * sa_s),
    }
}

/// Applies the rule table to `particle.heading`. Returns the turn taken.
pub fn turn(
    particle: &mut Particle,
    readings: Readings,
    params: &SwarmParams,
    rng: &mut SimRng,
) -> Turn {
    let t = choose_turn(readings, || rng.coin());
    match t {
        Turn::Keep => {}
        Turn::Left => particle.heading = wrap_degrees(particle.heading - params.rotation_angle),
        Turn::Right => particle.heading = wrap_degrees(particle.heading + params.rotation_angle),
    }
    t
}

/// Smallest integer radius whose disc, filled at [`INOCULATION_FILL`], holds `count` particles.
pub fn inoculation_radius(count: usize) -> u32 {
    let mut r = 0u32;
    while std::f64::consts::PI * f64::from(r) * f64::from(r) * INOCULATION_FILL < count as f64 {
        r += 1;
    }
    r
}

/// Particles plus a per-cell occupancy index.
#[derive(Debug, Clone)]
pub struct Population {
    particles: Vec<Particle>,
    occupancy: Vec<u32>,
    width: usize,
    height: usize,
    order: Vec<u32>,
}

impl Population {
    pub fn empty(arena: &Arena) -> Self {
        Self {
            particles: Vec::new(),
            occupancy: vec![EMPTY; arena.cell_count()],
            width: arena.width(),
            height: arena.height(),
            order: Vec::new(),
        }
    }

    /// Places particles exactly as given. Panics if any two share a cell or one
    /// sits on a non-traversable cell.
    pub fn from_particles(arena: &Arena, particles: Vec<Particle>) -> Self {
        let mut pop = Self::empty(arena);
        for p in particles {
            let idx = arena
                .index_of(p.cell())
                .filter(|&i| !arena.is_obstacle_at(i))
                .unwrap_or_else(|| panic!("particle at {:?} is not on a traversable cell", p.pos));
            assert_eq!(
                pop.occupancy[idx],
                EMPTY,
                "two particles in cell {}",
                p.cell()
            );
            pop.occupancy[idx] = pop.particles.len() as u32;
            pop.particles.push(p);
        }
        pop
    }

    /// Scatters `count` particles over random free cells of the disc around `center`.
    ///
    /// Cells whose centers lie within [`inoculation_radius`] of the center cell's
    /// center are candidates. Draw order: a partial Fisher-Yates over the
    /// row-major candidate list picks the cells, then one heading per particle.
    pub fn inoculate(
        arena: &Arena,
        center: Cell,
        count: usize,
        rng: &mut SimRng,
    ) -> Result<Self, SwarmError> {
        let radius = inoculation_radius(count);
        let r = i64::from(radius);
        let c = center.center();
        let mut candidates = Vec::new();
        for y in center.y - r..=center.y + r {
            for x in center.x - r..=center.x + r {
                let cell = Cell::new(x, y);
                if arena.is_traversable_cell(cell) && cell.center().distance(c) <= f64::from(radius)
                {
                    candidates.push(cell);
                }
            }
        }
        if candidates.len() < count {
            return Err(SwarmError::InsufficientSpace {
                center,
                radius,
                needed: count,
                available: candidates.len(),
            });
        }
        for i in 0..count {
            let j = i + rng.below((candidates.len() - i) as u64) as usize;
            candidates.swap(i, j);
        }
        let particles = candidates[..count]
            .iter()
            .map(|cell| Particle::new(cell.center(), rng.heading()))
            .collect();
        Ok(Self::from_particles(arena, particles))
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Index of the particle occupying `cell`, if any.
    pub fn occupant(&self, cell: Cell) -> Option<usize> {
        self.cell_index(cell)
            .and_then(|i| (self.occupancy[i] != EMPTY).then_some(self.occupancy[i] as usize))
    }

    pub fn occupied_cells(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o != EMPTY).count()
    }

    #[inline]
    fn cell_index(&self, cell: Cell) -> Option<usize> {
        if cell.x < 0 || cell.y < 0 || cell.x >= self.width as i64 || cell.y >= self.height as i64 {
            None
        } else {
            Some(cell.y as usize * self.width + cell.x as usize)
        }
    }

    /// Arithmetic mean of particle positions, `None` when empty.
    pub fn centroid(&self) -> Option<Point> {
        if self.particles.is_empty() {
            return None;
        }
        let (sx, sy) = self
            .particles
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.pos.x, sy + p.pos.y));
        let n = self.particles.len() as f64;
        Some(Point::new(sx / n, sy / n))
    }

    /// Checks the occupancy bijection and that every particle stands on a
    /// traversable cell.
    pub fn check_invariants(&self, arena: &Arena) -> Result<(), String> {
        let mut indexed = 0usize;
        for (i, p) in self.particles.iter().enumerate() {
            let cell = p.cell();
            if !arena.is_traversable_cell(cell) {
                return Err(format!("particle {i} at {:?} is on a blocked cell", p.pos));
            }
            let idx = arena.index_of(cell).expect("traversable implies in bounds");
            if self.occupancy[idx] != i as u32 {
                return Err(format!(
                    "cell {cell} indexes {} instead of particle {i}",
                    self.occupancy[idx]
                ));
            }
            if !(0.0..360.0).contains(&p.heading) {
                return Err(format!("particle {i} heading {} out of range", p.heading));
            }
        }
        for &o in &self.occupancy {
            if o != EMPTY {
                indexed += 1;
                if o as usize >= self.particles.len() {
                    return Err(format!("occupancy references missing particle {o}"));
                }
            }
        }
        if indexed != self.particles.len() {
            return Err(format!(
                "{indexed} occupied cells for {} particles",
                self.particles.len()
            ));
        }
        Ok(())
    }

    /// Motor stage for particle `i`. Returns whether it moved.
    ///
    /// The candidate is one unit along the heading from the internal reference
    /// (which equals `pos` unless the particle is oscillatory and has been
    /// blocked). Entering a new vacant traversable cell deposits trail; a move
    /// within the current cell does not. A blocked non-oscillatory particle
    /// draws a new random heading. A blocked oscillatory particle keeps its
    /// heading and, if the blocker was another particle, advances the reference
    /// to the candidate.
    pub fn attempt_move(
        &mut self,
        i: usize,
        arena: &Arena,
        trail: &mut TrailField,
        params: &SwarmParams,
        rng: &mut SimRng,
    ) -> bool {
        let dir = unit(self.particles[i].heading);
        self.move_along(i, dir, arena, trail, params, rng)
    }

    #[inline]
    fn move_along(
        &mut self,
        i: usize,
        (c, s): (f64, f64),
        arena: &Arena,
        trail: &mut TrailField,
        params: &SwarmParams,
        rng: &mut SimRng,
    ) -> bool {
        let p = self.particles[i];
        let step = SwarmParams::STEP_LENGTH;
        let candidate = Point::new(p.internal_pos.x + step * c, p.internal_pos.y + step * s);
        let from = p.cell();
        let to = candidate.cell();
        if to == from {
            let p = &mut self.particles[i];
            p.pos = candidate;
            p.internal_pos = candidate;
            return true;
        }
        match arena.index_of(to).filter(|&k| !arena.is_obstacle_at(k)) {
            Some(k) if self.occupancy[k] == EMPTY => {
                let old = arena.index_of(from).expect("particle cell in bounds");
                self.occupancy[old] = EMPTY;
                self.occupancy[k] = i as u32;
                let p = &mut self.particles[i];
                p.pos = candidate;
                p.internal_pos = candidate;
                trail.deposit_at_index(k, params.deposit_amount);
                true
            }
            open => {
                let p = &mut self.particles[i];
                if !params.oscillatory {
                    p.heading = rng.heading();
                } else if open.is_some() {
                    // blocked by another particle: the reference pushes on
                    p.internal_pos = candidate;
                }
                false
            }
        }
    }

    /// With probability pID, snaps the internal reference back to the actual
    /// position and picks a fresh random heading.
    pub fn maybe_reset_reference(
        &mut self,
        i: usize,
        params: &SwarmParams,
        rng: &mut SimRng,
    ) -> bool {
        if rng.chance(params.p_reset) {
            let p = &mut self.particles[i];
            p.internal_pos = p.pos;
            p.heading = rng.heading();
            true
        } else {
            false
        }
    }

    /// One scheduler step: every particle senses, turns, and tries to move in a
    /// fresh random order, then the trail diffuses once.
    pub fn step(
        &mut self,
        arena: &Arena,
        trail: &mut TrailField,
        illum: &IlluminationField,
        params: &SwarmParams,
        rng: &mut SimRng,
    ) {
        let mut order = std::mem::take(&mut self.order);
        order.clear();
        order.extend(0..self.particles.len() as u32);
        rng.shuffle(&mut order);
        let spread = params.sensor_angle.to_radians().sin_cos();
        for &i in &order {
            let i = i as usize;
            let front = unit(self.particles[i].heading);
            let readings = sense_along(&self.particles[i], front, spread, trail, illum, params);
            let dir = match turn(&mut self.particles[i], readings, params, rng) {
                Turn::Keep => front,
                _ => unit(self.particles[i].heading),
            };
            self.move_along(i, dir, arena, trail, params, rng);
            if params.oscillatory {
                self.maybe_reset_reference(i, params, rng);
            }
        }
        self.order = order;
        trail.diffuse(params.damping);
    }

    #[cfg(test)]
    pub(crate) fn particles_mut(&mut self) -> &mut [Particle] {
        &mut self.particles
    }
}
