//! Chemoattractant trail lattice and the illumination (repellent) mask.

use crate::arena::Arena;
use crate::geom::{Cell, Point};

/// Default damping applied to the 3×3 mean on every diffusion pass.
pub const DEFAULT_DAMPING: f64 = 0.1;

/// Diffused values below this are stored as exactly zero.
///
/// With a damping of 0.1 the far field shrinks by roughly a factor of 30 per
/// cell of distance, so without a floor most of the lattice would sit in
/// subnormal range, where arithmetic is two orders of magnitude slower.
pub const FLUSH_BELOW: f64 = 1e-200;

/// Per-cell chemoattractant concentration with an absorbing 3×3 mean-filter diffusion.
#[derive(Debug, Clone)]
pub struct TrailField {
    width: usize,
    height: usize,
    values: Vec<f64>,
    open: Vec<bool>,
    obstacle_cells: Vec<usize>,
    /// Rolling horizontal 3-sums of three consecutive pre-diffusion rows.
    ring: Vec<f64>,
}

impl TrailField {
    pub fn new(arena: &Arena) -> Self {
        let n = arena.cell_count();
        Self {
            width: arena.width(),
            height: arena.height(),
            values: vec![0.0; n],
            open: arena.obstacles().iter().map(|&o| !o).collect(),
            obstacle_cells: (0..n).filter(|&i| arena.is_obstacle_at(i)).collect(),
            ring: vec![0.0; 3 * arena.width()],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn index(&self, cell: Cell) -> Option<usize> {
        if cell.x < 0 || cell.y < 0 || cell.x >= self.width as i64 || cell.y >= self.height as i64 {
            None
        } else {
            Some(cell.y as usize * self.width + cell.x as usize)
        }
    }

    /// Value at a cell; zero outside the lattice.
    pub fn value(&self, cell: Cell) -> f64 {
        self.index(cell).map_or(0.0, |i| self.values[i])
    }

    /// Overwrites one traversable cell. Intended for tests and scenario setup.
    pub fn set(&mut self, cell: Cell, value: f64) {
        let i = self.traversable_index(cell);
        assert!(
            value >= 0.0 && value.is_finite(),
            "trail values are finite and non-negative"
        );
        self.values[i] = value;
    }

    fn traversable_index(&self, cell: Cell) -> usize {
        let i = self
            .index(cell)
            .unwrap_or_else(|| panic!("cell {cell} outside the trail lattice"));
        assert!(self.open[i], "cell {cell} is an obstacle");
        i
    }

    /// Adds `amount` at a traversable cell. Panics on obstacle or out-of-bounds cells.
    #[inline]
    pub fn deposit(&mut self, cell: Cell, amount: f64) {
        let i = self.traversable_index(cell);
        self.values[i] += amount;
    }

    #[inline]
    pub(crate) fn deposit_at_index(&mut self, index: usize, amount: f64) {
        debug_assert!(self.open[index]);
        self.values[index] += amount;
    }

    /// Value of the cell containing `p`; zero outside the lattice.
    #[inline]
    pub fn sample(&self, p: Point) -> f64 {
        self.index(p.cell()).map_or(0.0, |i| self.values[i])
    }

    /// One damped mean-filter pass.
    ///
    /// Every traversable cell becomes `damping · (sum of its 3×3 neighbourhood) / 9`
    /// over the previous values. Neighbours outside the lattice count as zero and
    /// obstacle cells are held at zero, so they never contribute either. The sum is
    /// grouped as three horizontal triples added top to bottom.
    pub fn diffuse(&mut self, damping: f64) {
        let w = self.width;
        let h = self.height;
        let k = damping / 9.0;
        // Row y's output needs the sums of rows y-1..=y+1, so the sum of row
        // y+1 is taken before row y is overwritten.
        let mut ring = std::mem::take(&mut self.ring);
        let slot = |y: usize| (y % 3) * w;
        hsum(&self.values[..w], &mut ring[..w]);
        for y in 0..h {
            if y + 1 < h {
                let s = slot(y + 1);
                hsum(&self.values[(y + 1) * w..(y + 2) * w], &mut ring[s..s + w]);
            }
            let mid = &ring[slot(y)..slot(y) + w];
            let out = &mut self.values[y * w..(y + 1) * w];
            let above = (y > 0).then(|| &ring[slot(y - 1)..slot(y - 1) + w]);
            let below = (y + 1 < h).then(|| &ring[slot(y + 1)..slot(y + 1) + w]);
            match (above, below) {
                (Some(a), Some(b)) => {
                    for x in 0..w {
                        out[x] = flush((a[x] + mid[x] + b[x]) * k);
                    }
                }
                (Some(e), None) | (None, Some(e)) => {
                    for x in 0..w {
                        out[x] = flush((e[x] + mid[x]) * k);
                    }
                }
                (None, None) => {
                    for x in 0..w {
                        out[x] = flush(mid[x] * k);
                    }
                }
            }
        }
        self.ring = ring;
        for &i in &self.obstacle_cells {
            self.values[i] = 0.0;
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

#[inline]
fn flush(v: f64) -> f64 {
    if v < FLUSH_BELOW {
        0.0
    } else {
        v
    }
}

/// Horizontal 3-sums of one row, with zero beyond both ends.
#[inline]
fn hsum(src: &[f64], dst: &mut [f64]) {
    let w = src.len();
    dst[0] = src[0] + src[1];
    for x in 1..w - 1 {
        dst[x] = src[x - 1] + src[x] + src[x + 1];
    }
    dst[w - 1] = src[w - 2] + src[w - 1];
}

/// Axis-aligned inclusive cell rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl CellRect {
    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn center(&self) -> Point {
        Point::new(
            (self.x0 + self.x1 + 1) as f64 / 2.0,
            (self.y0 + self.y1 + 1) as f64 / 2.0,
        )
    }
}

/// Illuminated cells attenuate sensing. When active, every cell outside the mask
/// rectangle is lit; when inactive nothing is.
#[derive(Debug, Clone)]
pub struct IlluminationField {
    width: usize,
    height: usize,
    lit: Vec<bool>,
    mask: Option<CellRect>,
}

impl IlluminationField {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            lit: vec![false; width * height],
            mask: None,
        }
    }

    pub fn for_arena(arena: &Arena) -> Self {
        Self::new(arena.width(), arena.height())
    }

    pub fn is_active(&self) -> bool {
        self.mask.is_some()
    }

    /// The clamped unlit rectangle, if the mask is active.
    pub fn mask(&self) -> Option<CellRect> {
        self.mask
    }

    /// Whether `(x, y)` is lit. Cells outside the lattice are never lit.
    #[inline]
    pub fn is_lit(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.lit[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn is_lit_point(&self, p: Point) -> bool {
        let c = p.cell();
        self.mask.is_some() && self.is_lit(c.x, c.y)
    }

    pub fn lit_cells(&self) -> &[bool] {
        &self.lit
    }

    /// Leaves an odd `side` square centered on `center` (clamped to the lattice)
    /// unlit and lights everything else.
    pub fn set_mask(&mut self, center: Cell, side: usize) {
        assert!(
            side >= 3 && side % 2 == 1,
            "mask side must be odd and >= 3, got {side}"
        );
        let half = (side / 2) as i64;
        let rect = CellRect {
            x0: (center.x - half).max(0),
            y0: (center.y - half).max(0),
            x1: (center.x + half).min(self.width as i64 - 1),
            y1: (center.y + half).min(self.height as i64 - 1),
        };
        for y in 0..self.height {
            let row = &mut self.lit[y * self.width..(y + 1) * self.width];
            for (x, lit) in row.iter_mut().enumerate() {
                *lit = !rect.contains(x as i64, y as i64);
            }
        }
        self.mask = Some(rect);
    }

    pub fn clear_mask(&mut self) {
        if self.mask.take().is_some() {
            self.lit.fill(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;

    fn open(n: usize) -> Arena {
        Arena::open(n, n).unwrap()
    }

    #[test]
    fn deposit_is_additive() {
        let mut f = TrailField::new(&open(16));
        let c = Cell::new(4, 4);
        f.deposit(c, 5.0);
        assert_eq!(f.value(c), 5.0);
        f.set(c, 3.5);
        f.deposit(c, 5.0);
        assert_eq!(f.value(c), 8.5);
        f.deposit(c, 0.0);
        assert_eq!(f.value(c), 8.5);
        assert_eq!(f.total(), 8.5);
    }

    #[test]
    #[should_panic(expected = "obstacle")]
    fn deposit_on_obstacle_panics() {
        let arena = Arena::from_fn(16, 16, |x, y| (x, y) == (3, 3)).unwrap();
        TrailField::new(&arena).deposit(Cell::new(3, 3), 1.0);
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn deposit_out_of_bounds_panics() {
        TrailField::new(&open(16)).deposit(Cell::new(16, 0), 1.0);
    }

    #[test]
    fn sample_floor_mapping() {
        let mut f = TrailField::new(&open(16));
        f.set(Cell::new(2, 3), 4.0);
        assert_eq!(f.sample(Point::new(2.7, 3.1)), 4.0);
        assert_eq!(f.sample(Point::new(2.0, 3.0)), 4.0);
        assert_eq!(f.sample(Point::new(-0.5, 10.0)), 0.0);
        assert_eq!(f.sample(Point::new(16.0, 0.0)), 0.0);
    }

    #[test]
    fn diffuse_zero_is_fixed_point() {
        let mut f = TrailField::new(&open(16));
        f.diffuse(DEFAULT_DAMPING);
        assert!(f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn diffuse_obstacle_neighbours_absorb() {
        // obstacle to the left of (5,5): that neighbour contributes nothing
        let arena = Arena::from_fn(16, 16, |x, y| (x, y) == (4, 5)).unwrap();
        let mut f = TrailField::new(&arena);
        for y in 0..16 {
            for x in 0..16 {
                if (x, y) != (4, 5) {
                    f.set(Cell::new(x, y), 1.0);
                }
            }
        }
        f.diffuse(0.1);
        assert!((f.value(Cell::new(5, 5)) - 0.1 * 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(f.value(Cell::new(4, 5)), 0.0);
        // corner: 4 of 9 in bounds
        assert!((f.value(Cell::new(0, 0)) - 0.1 * 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn mask_square() {
        let mut m = IlluminationField::new(300, 300);
        m.set_mask(Cell::new(50, 50), 61);
        for y in 0..300 {
            for x in 0..300 {
                let inside = (20..=80).contains(&x) && (20..=80).contains(&y);
                assert_eq!(m.is_lit(x, y), !inside, "({x},{y})");
            }
        }
        assert!(m.is_active());
    }

    #[test]
    fn mask_clamps_at_edge() {
        let mut m = IlluminationField::new(300, 300);
        m.set_mask(Cell::new(5, 5), 61);
        assert_eq!(
            m.mask(),
            Some(CellRect {
                x0: 0,
                y0: 0,
                x1: 35,
                y1: 35
            })
        );
        assert!(!m.is_lit(0, 0));
        assert!(m.is_lit(36, 0));
    }

    #[test]
    fn clear_mask_resets() {
        let fresh = IlluminationField::new(20, 20);
        let mut m = fresh.clone();
        m.clear_mask();
        assert_eq!(m.lit_cells(), fresh.lit_cells());
        m.set_mask(Cell::new(10, 10), 5);
        m.clear_mask();
        assert!(!m.is_active());
        assert!(m.lit_cells().iter().all(|&l| !l));
        m.clear_mask();
        assert!(!m.is_active());
        assert_eq!(m.lit_cells(), fresh.lit_cells());
    }

    #[test]
    #[should_panic(expected = "odd")]
    fn even_mask_side_rejected() {
        IlluminationField::new(20, 20).set_mask(Cell::new(10, 10), 4);
    }
}
