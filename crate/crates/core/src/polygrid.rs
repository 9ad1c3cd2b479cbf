//! Fixed-size spatial grid for pace heatmaps.
//!
//! Each sample's segment is traversed cell by cell and its distance and
//! time are shared among the cells it crosses. Speeds per cell are derived
//! from the accumulated totals, optionally smoothed with a 3×3 Gaussian
//! kernel, and differenced against another grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rink::{NormalizedPoint, RinkSpec};
use crate::sequence::PaceSample;

/// Parametric crossings closer than this are treated as one.
const T_MERGE: f64 = 1e-12;

pub const DEFAULT_SIGMA: f64 = 0.5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum Allocation {
    /// Every crossed cell receives `d/k` and `dt/k`.
    #[default]
    Equal,
    /// Shares proportional to the chord length inside each cell.
    Chord,
}

/// Cell layout for a rink: dimensions, origin and validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLayout {
    pub spec: RinkSpec,
    pub n_cols: usize,
    pub n_rows: usize,
    pub cell: f64,
    /// Lower-left corner of cell (0, 0) in the normalized frame.
    pub origin_x: f64,
    pub origin_y: f64,
    valid: Vec<bool>,
}

impl GridLayout {
    /// Strict layout; length and width must be multiples of the cell size.
    pub fn new(spec: RinkSpec) -> Result<Self> {
        spec.validate()?;
        let cols = spec.length_ft / spec.cell_size_ft;
        let rows = spec.width_ft / spec.cell_size_ft;
        let whole = |v: f64| (v - v.round()).abs() < 1e-9 && v.round() >= 1.0;
        if !whole(cols) || !whole(rows) {
            return Err(Error::Config(format!(
                "rink {}x{} ft is not divisible into {} ft cells",
                spec.length_ft, spec.width_ft, spec.cell_size_ft
            )));
        }
        Ok(Self::with_dims(spec, cols.round() as usize, rows.round() as usize))
    }

    /// Layout that pads each dimension up to the next whole cell, centered
    /// on the rink. Cells that do not overlap the rink are invalid.
    pub fn padded(spec: RinkSpec) -> Result<Self> {
        spec.validate()?;
        let up = |v: f64| {
            let n = v / spec.cell_size_ft;
            if (n - n.round()).abs() < 1e-9 {
                n.round() as usize
            } else {
                n.ceil() as usize
            }
        };
        Ok(Self::with_dims(spec, up(spec.length_ft), up(spec.width_ft)))
    }

    fn with_dims(spec: RinkSpec, n_cols: usize, n_rows: usize) -> Self {
        let cell = spec.cell_size_ft;
        let origin_x = -(n_cols as f64) * cell / 2.0;
        let origin_y = -(n_rows as f64) * cell / 2.0;
        let mut layout = GridLayout {
            spec,
            n_cols,
            n_rows,
            cell,
            origin_x,
            origin_y,
            valid: Vec::new(),
        };
        layout.valid = (0..n_cols * n_rows).map(|i| layout.cell_overlaps_rink(i)).collect();
        layout
    }

    /// The rink is the inner rectangle dilated by the corner radius, so a
    /// cell overlaps it iff its distance to the inner rectangle is below
    /// the radius.
    fn cell_overlaps_rink(&self, idx: usize) -> bool {
        let (x0, y0, x1, y1) = self.cell_rect(idx);
        let r = self.spec.corner_radius_ft;
        let (ix, iy) = (self.spec.half_length() - r, self.spec.half_width() - r);
        let gap = |lo: f64, hi: f64, h: f64| (lo - h).max(-h - hi).max(0.0);
        let dx = gap(x0, x1, ix);
        let dy = gap(y0, y1, iy);
        // Cells of a padded layout can sit entirely beyond a straight edge.
        let beyond = x0 >= self.spec.half_length() || x1 <= -self.spec.half_length()
            || y0 >= self.spec.half_width()
            || y1 <= -self.spec.half_width();
        if beyond {
            return false;
        }
        let d = dx.hypot(dy);
        d == 0.0 || d < r
    }

    pub fn n_cells(&self) -> usize {
        self.n_cols * self.n_rows
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    pub fn is_valid(&self, idx: usize) -> bool {
        self.valid[idx]
    }

    pub fn mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.n_cols + col
    }

    pub fn col_row(&self, idx: usize) -> (usize, usize) {
        (idx % self.n_cols, idx / self.n_cols)
    }

    /// `(x0, y0, x1, y1)` of a cell in the normalized frame.
    pub fn cell_rect(&self, idx: usize) -> (f64, f64, f64, f64) {
        let (c, r) = self.col_row(idx);
        let x0 = self.origin_x + c as f64 * self.cell;
        let y0 = self.origin_y + r as f64 * self.cell;
        (x0, y0, x0 + self.cell, y0 + self.cell)
    }

    /// Cell holding a point, using half-open cells `[x0, x1)` and clamping
    /// the far boundary into the last cell.
    pub fn cell_of(&self, x: f64, y: f64) -> usize {
        let col = floor_index((x - self.origin_x) / self.cell, self.n_cols);
        let row = floor_index((y - self.origin_y) / self.cell, self.n_rows);
        self.index(col, row)
    }

    /// Cells crossed by a segment in order of travel. A cell counts only
    /// when the segment spends positive length inside it; segments running
    /// along a grid line belong to the cells on the increasing-index side.
    pub fn traverse(&self, a: NormalizedPoint, b: NormalizedPoint) -> Result<Vec<usize>> {
        Ok(self.traverse_weighted(a, b)?.into_iter().map(|(c, _)| c).collect())
    }

    /// Like [`traverse`](Self::traverse), paired with the fraction of the
    /// segment spent in each cell. A zero-length segment yields its single
    /// cell with fraction 1.
    pub fn traverse_weighted(&self, a: NormalizedPoint, b: NormalizedPoint) -> Result<Vec<(usize, f64)>> {
        for p in [a, b] {
            if !self.spec.contains(p.x_north, p.y_east) {
                return Err(Error::OutsideRink { x: p.x_north, y: p.y_east });
            }
        }
        let (dx, dy) = (b.x_north - a.x_north, b.y_east - a.y_east);
        if dx == 0.0 && dy == 0.0 {
            return Ok(vec![(self.cell_of(a.x_north, a.y_east), 1.0)]);
        }
        let mut ts = vec![0.0, 1.0];
        push_crossings(&mut ts, a.x_north, dx, self.origin_x, self.cell);
        push_crossings(&mut ts, a.y_east, dy, self.origin_y, self.cell);
        ts.sort_by(f64::total_cmp);

        let mut out: Vec<(usize, f64)> = Vec::with_capacity(ts.len());
        let mut prev = ts[0];
        for &t in &ts[1..] {
            if t - prev <= T_MERGE {
                continue;
            }
            let mid = 0.5 * (prev + t);
            let cell = self.cell_of(a.x_north + mid * dx, a.y_east + mid * dy);
            let w = t - prev;
            match out.last_mut() {
                Some((c, acc)) if *c == cell => *acc += w,
                _ => out.push((cell, w)),
            }
            prev = t;
        }
        if out.is_empty() {
            // Segment shorter than the merge tolerance.
            out.push((self.cell_of(a.x_north, a.y_east), 1.0));
        }
        Ok(out)
    }
}

fn floor_index(u: f64, n: usize) -> usize {
    let f = u.floor();
    if f < 0.0 {
        0
    } else {
        (f as usize).min(n - 1)
    }
}

fn push_crossings(ts: &mut Vec<f64>, start: f64, delta: f64, origin: f64, cell: f64) {
    if delta == 0.0 {
        return;
    }
    let end = start + delta;
    let (lo, hi) = if start < end { (start, end) } else { (end, start) };
    let mut k = ((lo - origin) / cell).ceil();
    loop {
        let line = origin + k * cell;
        if line >= hi {
            break;
        }
        let t = (line - start) / delta;
        if t > 0.0 && t < 1.0 {
            ts.push(t);
        }
        k += 1.0;
    }
}

/// Distance and time accumulators over a [`GridLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct Polygrid {
    pub layout: GridLayout,
    pub dist: Vec<f64>,
    pub time: Vec<f64>,
    /// Shares that fell on invalid cells; kept out of the cell totals.
    pub leaked_dist: f64,
    pub leaked_time: f64,
    pub n_samples: u64,
    pub allocation: Allocation,
}

impl Polygrid {
    pub fn new(layout: GridLayout) -> Self {
        let n = layout.n_cells();
        Self {
            layout,
            dist: vec![0.0; n],
            time: vec![0.0; n],
            leaked_dist: 0.0,
            leaked_time: 0.0,
            n_samples: 0,
            allocation: Allocation::Equal,
        }
    }

    /// Strict grid for `spec`.
    pub fn build(spec: RinkSpec) -> Result<Self> {
        Ok(Self::new(GridLayout::new(spec)?))
    }

    /// Grid padded to whole cells, for rinks whose dimensions are not
    /// multiples of the cell size.
    pub fn build_padded(spec: RinkSpec) -> Result<Self> {
        Ok(Self::new(GridLayout::padded(spec)?))
    }

    pub fn with_allocation(mut self, allocation: Allocation) -> Self {
        self.allocation = allocation;
        self
    }

    pub fn empty_like(&self) -> Self {
        Self::new(self.layout.clone()).with_allocation(self.allocation)
    }

    pub fn accumulate(&mut self, s: &PaceSample) -> Result<()> {
        self.accumulate_segment(s.from, s.to, s.d_total, s.dt)
    }

    pub fn accumulate_segment(&mut self, a: NormalizedPoint, b: NormalizedPoint, d: f64, dt: f64) -> Result<()> {
        let cells = self.layout.traverse_weighted(a, b)?;
        let k = cells.len() as f64;
        for (cell, frac) in cells {
            let share = match self.allocation {
                Allocation::Equal => 1.0 / k,
                Allocation::Chord => frac,
            };
            if self.layout.is_valid(cell) {
                self.dist[cell] += d * share;
                self.time[cell] += dt * share;
            } else {
                self.leaked_dist += d * share;
                self.leaked_time += dt * share;
            }
        }
        self.n_samples += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Polygrid) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::GridMismatch("cannot merge grids with different layouts".into()));
        }
        for i in 0..self.dist.len() {
            self.dist[i] += other.dist[i];
            self.time[i] += other.time[i];
        }
        self.leaked_dist += other.leaked_dist;
        self.leaked_time += other.leaked_time;
        self.n_samples += other.n_samples;
        Ok(())
    }

    pub fn total_dist(&self) -> f64 {
        self.dist.iter().sum::<f64>() + self.leaked_dist
    }

    pub fn total_time(&self) -> f64 {
        self.time.iter().sum::<f64>() + self.leaked_time
    }

    /// Per-cell speeds; cells with less than `tau` seconds are masked.
    pub fn speeds(&self, tau: f64) -> SpeedGrid {
        let values = (0..self.layout.n_cells())
            .map(|i| {
                let t = self.time[i];
                (self.layout.is_valid(i) && t > 0.0 && t >= tau).then(|| self.dist[i] / t)
            })
            .collect();
        SpeedGrid {
            layout: self.layout.clone(),
            values,
        }
    }
}

/// Per-cell values with a mask; `None` marks invalid or masked cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedGrid {
    pub layout: GridLayout,
    pub values: Vec<Option<f64>>,
}

impl SpeedGrid {
    pub fn filled(layout: GridLayout, v: f64) -> Self {
        let values = layout.mask().iter().map(|ok| ok.then_some(v)).collect();
        Self { layout, values }
    }

    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        self.values[self.layout.index(col, row)]
    }

    pub fn unmasked(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    pub fn smooth(&self, sigma: f64) -> SpeedGrid {
        let w = kernel_3x3(sigma);
        let (nc, nr) = (self.layout.n_cols as isize, self.layout.n_rows as isize);
        let mut values = vec![None; self.values.len()];
        for (i, out) in values.iter_mut().enumerate() {
            if self.values[i].is_none() {
                continue;
            }
            let (c, r) = self.layout.col_row(i);
            // Weighted mean written as an offset from the centre value, so a
            // constant neighbourhood returns the centre exactly.
            let centre = self.values[i].unwrap();
            let (mut num, mut den) = (0.0, 0.0);
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    let (cc, rr) = (c as isize + dc, r as isize + dr);
                    if cc < 0 || rr < 0 || cc >= nc || rr >= nr {
                        continue;
                    }
                    if let Some(v) = self.values[self.layout.index(cc as usize, rr as usize)] {
                        let k = w[(dr + 1) as usize][(dc + 1) as usize];
                        num += k * (v - centre);
                        den += k;
                    }
                }
            }
            *out = Some(centre + num / den);
        }
        SpeedGrid {
            layout: self.layout.clone(),
            values,
        }
    }

    /// Cellwise `self - other` where both are unmasked.
    pub fn diff(&self, other: &SpeedGrid, pre_smooth: bool) -> Result<SpeedGrid> {
        self.diff_with(other, pre_smooth.then_some(DEFAULT_SIGMA))
    }

    /// As [`SpeedGrid::diff`], smoothing both sides with `sigma` first if given.
    pub fn diff_with(&self, other: &SpeedGrid, sigma: Option<f64>) -> Result<SpeedGrid> {
        if self.layout != other.layout {
            return Err(Error::GridMismatch("cannot difference grids with different layouts".into()));
        }
        let (a, b) = match sigma {
            Some(s) => (self.smooth(s), other.smooth(s)),
            None => (self.clone(), other.clone()),
        };
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => Some(x - y),
                _ => None,
            })
            .collect();
        Ok(SpeedGrid {
            layout: self.layout.clone(),
            values,
        })
    }

    /// Largest absolute unmasked value, or 0.
    pub fn max_abs(&self) -> f64 {
        self.unmasked().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

/// Unnormalized 3×3 Gaussian weights indexed `[row][col]`.
pub fn kernel_3x3(sigma: f64) -> [[f64; 3]; 3] {
    let mut k = [[0.0; 3]; 3];
    for (r, row) in k.iter_mut().enumerate() {
        for (c, w) in row.iter_mut().enumerate() {
            let (dr, dc) = (r as f64 - 1.0, c as f64 - 1.0);
            *w = (-(dr * dr + dc * dc) / (2.0 * sigma * sigma)).exp();
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn nhl() -> GridLayout {
        GridLayout::new(RinkSpec::NHL).unwrap()
    }

    /// Corner-origin coordinates (0..200, 0..85) to the normalized frame.
    fn co(x: f64, y: f64) -> NormalizedPoint {
        NormalizedPoint::new(x - 100.0, y - 42.5)
    }

    /// Dense walk along the segment, keeping cells that hold a sample point
    /// at least `eps` away from every grid line.
    fn oracle(l: &GridLayout, a: NormalizedPoint, b: NormalizedPoint, n: usize, eps: f64) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for i in 0..=n {
            let t = (i as f64 + 0.5) / (n as f64 + 1.0);
            let x = a.x_north + t * (b.x_north - a.x_north);
            let y = a.y_east + t * (b.y_east - a.y_east);
            let u = (x - l.origin_x) / l.cell;
            let v = (y - l.origin_y) / l.cell;
            let near = |w: f64| (w - w.round()).abs() * l.cell < eps;
            if near(u) || near(v) {
                continue;
            }
            out.insert(l.cell_of(x, y));
        }
        out
    }

    #[test]
    fn nhl_valid_cells() {
        let l = nhl();
        assert_eq!((l.n_cols, l.n_rows), (40, 17));
        assert_eq!(l.n_cells(), 680);
        assert_eq!(l.valid_count(), 668);
        let invalid: Vec<_> = (0..680).filter(|&i| !l.is_valid(i)).map(|i| l.col_row(i)).collect();
        assert!(invalid.contains(&(39, 16)) && invalid.contains(&(38, 16)) && invalid.contains(&(39, 15)));
        assert!(invalid.contains(&(0, 0)) && invalid.contains(&(1, 0)) && invalid.contains(&(0, 1)));
    }

    #[test]
    fn validity_matches_supersampling() {
        // A cell is valid iff some interior sample lies inside the rink.
        for spec in [RinkSpec::NHL, RinkSpec::SHL] {
            let l = GridLayout::padded(spec).unwrap();
            let n = 60;
            for i in 0..l.n_cells() {
                let (x0, y0, ..) = l.cell_rect(i);
                let mut hit = false;
                'outer: for a in 0..n {
                    for b in 0..n {
                        let x = x0 + (a as f64 + 0.5) / n as f64 * l.cell;
                        let y = y0 + (b as f64 + 0.5) / n as f64 * l.cell;
                        if spec.contains(x, y) {
                            hit = true;
                            break 'outer;
                        }
                    }
                }
                assert_eq!(hit, l.is_valid(i), "{:?} cell {:?}", spec, l.col_row(i));
            }
        }
    }

    #[test]
    fn square_corners_and_tiny_rink() {
        let spec = RinkSpec {
            corner_radius_ft: 0.0,
            ..RinkSpec::NHL
        };
        assert_eq!(GridLayout::new(spec).unwrap().valid_count(), 680);
        let tiny = RinkSpec {
            length_ft: 10.0,
            width_ft: 10.0,
            corner_radius_ft: 0.0,
            blue_line_offset_ft: 2.0,
            goal_line_offset_ft: 1.0,
            cell_size_ft: 5.0,
        };
        assert_eq!(GridLayout::new(tiny).unwrap().valid_count(), 4);
    }

    #[test]
    fn indivisible_rink_needs_padding() {
        assert!(matches!(GridLayout::new(RinkSpec::SHL), Err(Error::Config(_))));
        let l = GridLayout::padded(RinkSpec::SHL).unwrap();
        assert_eq!((l.n_cols, l.n_rows), (40, 20));
        assert_eq!(l.origin_y, -50.0);
    }

    #[test]
    fn traversal_examples() {
        let l = nhl();
        assert_eq!(l.traverse(co(92.0, 2.0), co(93.0, 3.0)).unwrap().len(), 1);

        let row = l.traverse(co(91.0, 40.0), co(104.0, 40.0)).unwrap();
        assert_eq!(row, vec![l.index(18, 8), l.index(19, 8), l.index(20, 8)]);

        let diag = l.traverse(co(93.0, 38.0), co(107.0, 52.0)).unwrap();
        let want: Vec<_> = [(18, 7), (19, 8), (20, 9), (21, 10)].iter().map(|&(c, r)| l.index(c, r)).collect();
        assert_eq!(diag, want);
        let set: BTreeSet<_> = diag.iter().copied().collect();
        assert_eq!(set, oracle(&l, co(93.0, 38.0), co(107.0, 52.0), 10_000, 1e-9));

        // Along a grid line: the increasing-index side.
        let on_line = l.traverse(co(91.0, 40.0), co(99.0, 40.0)).unwrap();
        assert_eq!(on_line, vec![l.index(18, 8), l.index(19, 8)]);
        let stay = l.traverse(co(95.0, 45.0), co(95.0, 45.0)).unwrap();
        assert_eq!(stay, vec![l.index(19, 9)]);
        assert!(l.traverse(co(0.0, 0.0), co(10.0, 10.0)).is_err());
    }

    #[test]
    fn equal_and_chord_allocation() {
        let mut g = Polygrid::build(RinkSpec::NHL).unwrap();
        // Five cells along a row, 50 ft in 2 s.
        g.accumulate_segment(co(76.0, 41.0), co(99.0, 41.0), 50.0, 2.0).unwrap();
        let touched: Vec<_> = (0..g.dist.len()).filter(|&i| g.dist[i] > 0.0).collect();
        assert_eq!(touched.len(), 5);
        for &i in &touched {
            assert!((g.dist[i] - 10.0).abs() < 1e-12);
            assert!((g.time[i] - 0.4).abs() < 1e-12);
        }
        let once = g.clone();
        g.accumulate_segment(co(76.0, 41.0), co(99.0, 41.0), 50.0, 2.0).unwrap();
        for i in 0..g.dist.len() {
            assert_eq!(g.dist[i], 2.0 * once.dist[i]);
        }

        let mut c = Polygrid::build(RinkSpec::NHL).unwrap().with_allocation(Allocation::Chord);
        c.accumulate_segment(co(92.5, 41.0), co(100.0, 41.0), 7.5, 3.0).unwrap();
        let l = &c.layout;
        assert!((c.dist[l.index(18, 8)] - 2.5).abs() < 1e-12);
        assert!((c.dist[l.index(19, 8)] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn corner_chord_stays_on_valid_cells() {
        let mut g = Polygrid::build(RinkSpec::NHL).unwrap();
        // The rink is convex, so a chord between in-rink points only meets
        // cells that overlap the rink.
        let a = NormalizedPoint::new(85.0, 38.0);
        let b = NormalizedPoint::new(95.0, 30.0);
        g.accumulate_segment(a, b, 12.0, 1.0).unwrap();
        assert_eq!(g.leaked_dist, 0.0);
        assert!((g.total_dist() - 12.0).abs() < 1e-12);
        assert!((g.total_time() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn center_weight_constant() {
        // 1 / (1 + 4e^-2 + 4e^-4), evaluated with mpmath at 30 digits.
        let expected = 0.619_347_030_557_177_290_f64;
        let k = kernel_3x3(0.5);
        let total: f64 = k.iter().flatten().sum();
        assert!((k[1][1] / total - expected).abs() < 1e-12);

        let l = nhl();
        let mut spike = SpeedGrid::filled(l.clone(), 0.0);
        let at = l.index(20, 8);
        spike.values[at] = Some(7.0);
        let s = spike.smooth(0.5);
        assert!((s.values[at].unwrap() - 7.0 * expected).abs() < 1e-12);
    }

    #[test]
    fn constant_field_and_masks() {
        let l = nhl();
        let mut g = SpeedGrid::filled(l.clone(), 3.25);
        g.values[l.index(5, 5)] = None;
        let s = g.smooth(0.5);
        assert_eq!(s.values[l.index(5, 5)], None);
        for (_, v) in s.unmasked() {
            assert!((v - 3.25).abs() < 1e-15);
        }
        let d = g.diff(&g, false).unwrap();
        assert!(d.unmasked().all(|(_, v)| v == 0.0));
        let plus = SpeedGrid {
            layout: l.clone(),
            values: g.values.iter().map(|v| v.map(|v| v + 1.0)).collect(),
        };
        let d = plus.diff(&SpeedGrid::filled(l.clone(), 3.25), true).unwrap();
        assert_eq!(d.values[l.index(5, 5)], None);
        assert!(d.unmasked().all(|(_, v)| (v - 1.0).abs() < 1e-12));
        let shl = SpeedGrid::filled(GridLayout::padded(RinkSpec::SHL).unwrap(), 1.0);
        assert!(matches!(g.diff(&shl, false), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn exposure_threshold_masks() {
        let mut g = Polygrid::build(RinkSpec::NHL).unwrap();
        g.accumulate_segment(co(92.0, 2.0), co(93.0, 3.0), 1.0, 0.5).unwrap();
        assert_eq!(g.speeds(1.0).unmasked().count(), 0);
        assert_eq!(g.speeds(0.5).unmasked().count(), 1);
    }

    fn arb_point() -> impl Strategy<Value = NormalizedPoint> {
        (-99.9f64..99.9, -42.4f64..42.4)
            .prop_map(|(x, y)| NormalizedPoint::new(x, y))
            .prop_filter("inside rink", |p| RinkSpec::NHL.contains(p.x_north, p.y_east))
    }

    proptest! {
        #[test]
        fn traversal_matches_oracle(a in arb_point(), b in arb_point()) {
            let l = nhl();
            let got: BTreeSet<_> = l.traverse(a, b).unwrap().into_iter().collect();
            let want = oracle(&l, a, b, 20_000, 1e-9);
            // Sub-interval cells shorter than the oracle's step can be missed by it.
            prop_assert!(want.is_subset(&got));
            let len = a.distance_to(b);
            let fine = oracle(&l, a, b, 200_000, 1e-9);
            prop_assert!(fine.is_subset(&got));
            if len > 0.0 {
                for c in got.difference(&fine) {
                    let w = l.traverse_weighted(a, b).unwrap().into_iter().find(|(x, _)| x == c).unwrap().1;
                    prop_assert!(w * len < 1e-3, "cell {:?} missed with chord {}", l.col_row(*c), w * len);
                }
            }
        }

        #[test]
        fn conservation_and_order(pts in proptest::collection::vec((arb_point(), arb_point(), 0.01f64..5.0), 1..40)) {
            let mut g = Polygrid::build(RinkSpec::NHL).unwrap();
            let mut rev = g.empty_like();
            let (mut sd, mut st) = (0.0, 0.0);
            for (a, b, dt) in &pts {
                let d = a.distance_to(*b);
                g.accumulate_segment(*a, *b, d, *dt).unwrap();
                sd += d;
                st += dt;
            }
            for (a, b, dt) in pts.iter().rev() {
                rev.accumulate_segment(*a, *b, a.distance_to(*b), *dt).unwrap();
            }
            prop_assert!((g.total_dist() - sd).abs() <= 1e-6 * sd.max(1.0));
            prop_assert!((g.total_time() - st).abs() <= 1e-6 * st);
            for i in 0..g.dist.len() {
                prop_assert!((g.dist[i] - rev.dist[i]).abs() <= 1e-9 * g.dist[i].abs().max(1e-12));
            }
        }

        #[test]
        fn smoothing_keeps_sign(vals in proptest::collection::vec(0.0f64..50.0, 680)) {
            let l = nhl();
            let g = SpeedGrid {
                values: vals.iter().enumerate().map(|(i, v)| l.is_valid(i).then_some(-*v)).collect(),
                layout: l,
            };
            prop_assert!(g.smooth(0.5).unmasked().all(|(_, v)| v <= 0.0));
        }
    }
}
