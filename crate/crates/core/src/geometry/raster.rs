//! Polar and Cartesian occupancy grids built by the midpoint rule.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::region::{Point, Rect, Region};
use super::GeometryError;

/// Radial layout of a [`PolarRaster`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingSpacing {
    /// `rings` equal annuli covering `[0, r_max)`.
    Uniform,
    /// Geometric ring edges from `r_min` to `r_max`; the disk `|z - center| < r_min`
    /// is not represented.
    Geometric { r_min: f64 },
}

/// Occupancy over (ring, angular sector) cells around a center. Sector `j`
/// covers angles `[j, j + 1) * 2π / theta_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarRaster {
    center: Point,
    r_edges: Vec<f64>,
    theta_count: usize,
    cells: Vec<bool>,
}

impl PolarRaster {
    pub fn new(center: Point, r_edges: Vec<f64>, theta_count: usize) -> Result<Self, GeometryError> {
        if r_edges.len() < 2 || theta_count == 0 {
            return Err(GeometryError::InvalidGrid("polar raster needs at least one ring and one sector".into()));
        }
        if r_edges[0] < 0.0 || r_edges.windows(2).any(|w| !(w[1] > w[0])) || !r_edges.iter().all(|r| r.is_finite()) {
            return Err(GeometryError::InvalidGrid("ring edges must be finite, nonnegative and strictly increasing".into()));
        }
        let cells = vec![false; (r_edges.len() - 1) * theta_count];
        Ok(PolarRaster { center, r_edges, theta_count, cells })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn r_edges(&self) -> &[f64] {
        &self.r_edges
    }

    pub fn rings(&self) -> usize {
        self.r_edges.len() - 1
    }

    pub fn theta_count(&self) -> usize {
        self.theta_count
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.theta_count as f64
    }

    pub fn get(&self, ring: usize, sector: usize) -> bool {
        self.cells[ring * self.theta_count + sector]
    }

    pub fn set(&mut self, ring: usize, sector: usize, value: bool) {
        self.cells[ring * self.theta_count + sector] = value;
    }

    pub fn ring(&self, ring: usize) -> &[bool] {
        &self.cells[ring * self.theta_count..(ring + 1) * self.theta_count]
    }

    pub fn ring_mut(&mut self, ring: usize) -> &mut [bool] {
        &mut self.cells[ring * self.theta_count..(ring + 1) * self.theta_count]
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    /// Central angle of a sector.
    pub fn sector_angle(&self, sector: usize) -> f64 {
        (sector as f64 + 0.5) * self.dtheta()
    }

    /// Midpoint of a cell (arithmetic midpoint in radius and angle).
    pub fn midpoint(&self, ring: usize, sector: usize) -> Point {
        let r = 0.5 * (self.r_edges[ring] + self.r_edges[ring + 1]);
        self.center + Complex64::from_polar(r, self.sector_angle(sector))
    }

    pub fn same_grid(&self, other: &PolarRaster) -> bool {
        self.center == other.center && self.r_edges == other.r_edges && self.theta_count == other.theta_count
    }

    /// Cellwise `self <= other`.
    pub fn is_subset_of(&self, other: &PolarRaster) -> bool {
        self.same_grid(other) && self.cells.iter().zip(&other.cells).all(|(a, b)| !a || *b)
    }
}

/// Occupancy over a uniform `nx × ny` grid of cells covering `bbox`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianMask {
    bbox: Rect,
    nx: usize,
    ny: usize,
    cells: Vec<bool>,
}

impl CartesianMask {
    pub fn new(bbox: Rect, nx: usize, ny: usize) -> Result<Self, GeometryError> {
        if nx < 2 || ny < 2 {
            return Err(GeometryError::InvalidGrid(format!("mask needs nx, ny >= 2, got {nx} x {ny}")));
        }
        if !(bbox.width() > 0.0 && bbox.height() > 0.0) {
            return Err(GeometryError::InvalidGrid("mask bbox must have positive area".into()));
        }
        Ok(CartesianMask { bbox, nx, ny, cells: vec![false; nx * ny] })
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.bbox.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.bbox.height() / self.ny as f64
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.cells[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, value: bool) {
        self.cells[iy * self.nx + ix] = value;
    }

    pub fn midpoint(&self, ix: usize, iy: usize) -> Point {
        Complex64::new(
            self.bbox.x0 + (ix as f64 + 0.5) * self.dx(),
            self.bbox.y0 + (iy as f64 + 0.5) * self.dy(),
        )
    }

    pub fn column(&self, ix: usize) -> Vec<bool> {
        (0..self.ny).map(|iy| self.get(ix, iy)).collect()
    }

    pub fn column_count(&self, ix: usize) -> usize {
        (0..self.ny).filter(|&iy| self.get(ix, iy)).count()
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    pub fn same_grid(&self, other: &CartesianMask) -> bool {
        self.bbox == other.bbox && self.nx == other.nx && self.ny == other.ny
    }

    pub fn is_subset_of(&self, other: &CartesianMask) -> bool {
        self.same_grid(other) && self.cells.iter().zip(&other.cells).all(|(a, b)| !a || *b)
    }

    /// Cellwise map over two masks on the same grid.
    pub fn zip_with(&self, other: &CartesianMask, f: impl Fn(bool, bool) -> bool) -> CartesianMask {
        assert!(self.same_grid(other), "masks must share a grid");
        let cells = self.cells.iter().zip(&other.cells).map(|(a, b)| f(*a, *b)).collect();
        CartesianMask { cells, ..self.clone() }
    }

    /// Same grid with every cell cleared.
    pub fn cleared(&self) -> CartesianMask {
        CartesianMask { cells: vec![false; self.cells.len()], ..self.clone() }
    }
}

/// Options shared by the rasterizers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RasterOptions {
    /// Segment thickening; defaults to `1e-3` times the grid extent. Each cell
    /// additionally uses at least half its smaller side, so a segment marks
    /// every cell it passes close to the middle of.
    pub segment_eps: Option<f64>,
}

fn has_segments(region: &Region) -> bool {
    region.primitives().iter().any(|p| matches!(p, super::Primitive::Segment { .. }))
}

pub fn rasterize_polar(
    region: &Region,
    center: Point,
    r_max: f64,
    rings: usize,
    sectors: usize,
    spacing: RingSpacing,
    options: RasterOptions,
) -> Result<PolarRaster, GeometryError> {
    if rings < 8 || sectors < 8 {
        return Err(GeometryError::InvalidGrid(format!("rings and sectors must be >= 8, got {rings} x {sectors}")));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(GeometryError::InvalidGrid(format!("r_max must be positive, got {r_max}")));
    }
    let r_edges: Vec<f64> = match spacing {
        RingSpacing::Uniform => (0..=rings).map(|k| r_max * k as f64 / rings as f64).collect(),
        RingSpacing::Geometric { r_min } => {
            if !(r_min > 0.0 && r_min < r_max) {
                return Err(GeometryError::InvalidGrid(format!("geometric spacing needs 0 < r_min < r_max, got {r_min}")));
            }
            let ratio = (r_max / r_min).powf(1.0 / rings as f64);
            let mut e: Vec<f64> = (0..=rings).map(|k| r_min * ratio.powi(k as i32)).collect();
            e[rings] = r_max;
            e
        }
    };
    let mut raster = PolarRaster::new(center, r_edges, sectors)?;
    let eps = options.segment_eps.unwrap_or(1e-3 * r_max);
    let thick = has_segments(region);
    let dtheta = raster.dtheta();
    for ring in 0..rings {
        let (r0, r1) = (raster.r_edges[ring], raster.r_edges[ring + 1]);
        let half_side = 0.5 * (r1 - r0).min(0.5 * (r0 + r1) * dtheta);
        let t = eps.max(half_side);
        for sector in 0..sectors {
            let m = raster.midpoint(ring, sector);
            let inside = if thick { region.contains_thick(m, t) } else { region.contains(m) };
            raster.set(ring, sector, inside);
        }
    }
    Ok(raster)
}

pub fn rasterize_cartesian(
    region: &Region,
    bbox: Rect,
    nx: usize,
    ny: usize,
    options: RasterOptions,
) -> Result<CartesianMask, GeometryError> {
    let mut mask = CartesianMask::new(bbox, nx, ny)?;
    let eps = options.segment_eps.unwrap_or(1e-3 * bbox.diagonal());
    let t = eps.max(0.5 * mask.dx().min(mask.dy()));
    let thick = has_segments(region);
    for iy in 0..ny {
        for ix in 0..nx {
            let m = mask.midpoint(ix, iy);
            let inside = if thick { region.contains_thick(m, t) } else { region.contains(m) };
            mask.set(ix, iy, inside);
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Primitive;

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn empty_region_gives_empty_rasters() {
        let p = rasterize_polar(&Region::empty(), c(0.0, 0.0), 1.0, 8, 16, RingSpacing::Uniform, Default::default()).unwrap();
        assert_eq!(p.occupied_count(), 0);
        let m = rasterize_cartesian(&Region::empty(), Rect::new(-1.0, -1.0, 1.0, 1.0), 8, 8, Default::default()).unwrap();
        assert_eq!(m.occupied_count(), 0);
    }

    #[test]
    fn covering_disk_fills_everything() {
        let big = Region::disk(c(0.0, 0.0), 10.0).unwrap();
        let p = rasterize_polar(&big, c(0.5, 0.0), 2.0, 12, 24, RingSpacing::Uniform, Default::default()).unwrap();
        assert_eq!(p.occupied_count(), 12 * 24);
        let m = rasterize_cartesian(&big, Rect::new(-1.0, -1.0, 1.0, 1.0), 9, 7, Default::default()).unwrap();
        assert_eq!(m.occupied_count(), 63);
    }

    #[test]
    fn half_plane_polygon_matches_midpoint_requery() {
        let half = Region::polygon(vec![c(-5.0, 0.0), c(5.0, 0.0), c(5.0, 5.0), c(-5.0, 5.0)]).unwrap();
        let p = rasterize_polar(&half, c(0.1, -0.2), 1.5, 10, 32, RingSpacing::Uniform, Default::default()).unwrap();
        for ring in 0..p.rings() {
            for s in 0..p.theta_count() {
                assert_eq!(p.get(ring, s), half.contains(p.midpoint(ring, s)));
            }
        }
    }

    #[test]
    fn geometric_rings_are_increasing_and_end_at_r_max() {
        let p = rasterize_polar(&Region::empty(), c(1.0, 0.0), 2.0, 16, 16, RingSpacing::Geometric { r_min: 0.01 }, Default::default())
            .unwrap();
        assert_eq!(p.r_edges()[0], 0.01);
        assert_eq!(*p.r_edges().last().unwrap(), 2.0);
        assert!(p.r_edges().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let e = Region::empty();
        assert!(rasterize_polar(&e, c(0.0, 0.0), 1.0, 4, 16, RingSpacing::Uniform, Default::default()).is_err());
        assert!(rasterize_polar(&e, c(0.0, 0.0), -1.0, 8, 16, RingSpacing::Uniform, Default::default()).is_err());
        assert!(rasterize_cartesian(&e, Rect::new(0.0, 0.0, 0.0, 1.0), 8, 8, Default::default()).is_err());
        assert!(rasterize_cartesian(&e, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 8, Default::default()).is_err());
    }

    #[test]
    fn slits_survive_rasterization() {
        let slit = Region::new(vec![Primitive::Segment { a: c(0.0, 0.1), b: c(0.0, 0.9) }]).unwrap();
        // Column midpoints sit at ±dx/2 from the slit.
        let m = rasterize_cartesian(&slit, Rect::new(-1.0, -1.0, 1.0, 1.0), 16, 16, Default::default()).unwrap();
        assert!(m.occupied_count() >= 6);
        let p = rasterize_polar(&slit, c(0.0, 0.0), 1.0, 16, 32, RingSpacing::Uniform, Default::default()).unwrap();
        assert!(p.occupied_count() >= 6);
    }
}
