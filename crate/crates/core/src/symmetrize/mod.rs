//! Rearrangements of discretized sets: circular and Steiner symmetrization,
//! the radial Marcus transformation with its weighted averages, polarization
//! about the imaginary axis and the composition split.
//!
//! Rasters carry no notion of open or closed sets, so the open and closed
//! variants of each transformation coincide here.

mod convert;

pub use convert::{
    band_region, centered_arc_region, mask_region, polar_region, star_region, steiner_complement_region,
    DEFAULT_ARC_STEP,
};

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{
    rasterize_polar, CartesianMask, GeometryError, Point, PolarRaster, Primitive, RasterOptions, Region, RingSpacing,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetrizeError {
    #[error("grid must be symmetric about the {axis} axis")]
    AsymmetricBbox { axis: &'static str },
    #[error("center is not interior to B: no inscribed radius")]
    CenterNotInterior,
    #[error("rasters do not share a center and grid")]
    GridMismatch,
    #[error("invalid averaging weights: {0}")]
    InvalidWeights(String),
    #[error("invalid center {0} for this transformation")]
    InvalidCenter(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Arcs centered on the ray toward `-∞`.
    Minus,
    /// Arcs centered on the ray toward `+∞`.
    Plus,
}

/// Weights `α_k > 0` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragingSpec {
    weights: Vec<f64>,
}

impl AveragingSpec {
    pub fn new(weights: Vec<f64>) -> Result<Self, SymmetrizeError> {
        if weights.is_empty() {
            return Err(SymmetrizeError::InvalidWeights("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(SymmetrizeError::InvalidWeights(format!("weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(SymmetrizeError::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(AveragingSpec { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// The star-like set `{center + r e^{iθ} : 0 ≤ r < M(θ)}` sampled at sector centers.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub center: Point,
    /// Central angles of the sectors that carry values.
    pub theta_grid: Vec<f64>,
    pub m_values: Vec<f64>,
    /// Angular width of one sector.
    pub dtheta: f64,
}

/// The band `{1 + r e^{iθ} : inner(θ) ≤ r < outer(θ)}` produced by [`r_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandProfile {
    pub inner: RadialProfile,
    /// `−2 cos θ`, where the ray from 1 leaves the unit disk.
    pub outer: Vec<f64>,
}

/// Length of the chord of the unit circle from 1 in direction `θ`.
pub fn chord_from_one(theta: f64) -> f64 {
    (-2.0 * theta.cos()).max(0.0)
}

/// First index of a block of `m` cells centered at `twice_center / 2`
/// (in cell units) with the extra cell of an odd split placed above.
fn block_start(twice_center: i64, m: i64) -> i64 {
    let num = twice_center - m;
    num.div_euclid(2) + num.rem_euclid(2)
}

pub fn circular_symmetrize(raster: &PolarRaster, direction: Direction) -> PolarRaster {
    let t = raster.theta_count();
    let twice_center = match direction {
        Direction::Minus => t as i64,
        Direction::Plus => 0,
    };
    let mut out = raster.clone();
    for ring in 0..raster.rings() {
        let m = raster.ring(ring).iter().filter(|c| **c).count();
        let cells = out.ring_mut(ring);
        cells.iter_mut().for_each(|c| *c = false);
        let start = block_start(twice_center, m as i64);
        for k in 0..m as i64 {
            cells[(start + k).rem_euclid(t as i64) as usize] = true;
        }
    }
    out
}

fn check_symmetric(a: f64, b: f64, axis: &'static str) -> Result<(), SymmetrizeError> {
    if (a + b).abs() > 1e-12 * (b - a).abs() {
        return Err(SymmetrizeError::AsymmetricBbox { axis });
    }
    Ok(())
}

pub fn steiner_symmetrize(mask: &CartesianMask) -> Result<CartesianMask, SymmetrizeError> {
    let b = mask.bbox();
    check_symmetric(b.y0, b.y1, "real")?;
    let ny = mask.ny();
    let mut out = mask.cleared();
    for ix in 0..mask.nx() {
        let m = mask.column_count(ix);
        let start = block_start(ny as i64, m as i64) as usize;
        for iy in start..start + m {
            out.set(ix, iy, true);
        }
    }
    Ok(out)
}

/// Sectors whose central angle lies in `(π/2, 3π/2)`.
fn left_sectors(raster: &PolarRaster) -> Vec<usize> {
    (0..raster.theta_count())
        .filter(|&s| {
            let a = raster.sector_angle(s);
            a > FRAC_PI_2 && a < 3.0 * FRAC_PI_2
        })
        .collect()
}

/// Radial Marcus transformation of the open set `B` given by `raster`.
///
/// Unrestricted: `ρ` is the outer edge of the leading fully occupied rings
/// (the disk inside a geometric grid's first edge counts as part of `B`) and
/// `M(θ) = ρ exp(Σ log(r_out/r_in))` over occupied cells beyond `ρ`.
///
/// With `restrict_left`, `B` is read as a subset of the unit disk seen from
/// the center 1: only `θ ∈ (π/2, 3π/2)` is kept, rays stop at the circle and
/// `M(θ) = (−2cos θ)·exp(−L(θ))`, where `L` is the logarithmic length of the
/// unoccupied cells whose midpoints lie in the disk, clipped at the circle.
pub fn marcus_radial(raster: &PolarRaster, restrict_left: bool) -> Result<RadialProfile, SymmetrizeError> {
    marcus_radial_with_rho(raster, restrict_left, None)
}

/// [`marcus_radial`] with an explicit `ρ` no larger than the inscribed radius.
pub fn marcus_radial_with_rho(
    raster: &PolarRaster,
    restrict_left: bool,
    rho: Option<f64>,
) -> Result<RadialProfile, SymmetrizeError> {
    let edges = raster.r_edges();
    let rings = raster.rings();
    let dtheta = raster.dtheta();
    if restrict_left {
        let sectors = left_sectors(raster);
        let mut m_values = Vec::with_capacity(sectors.len());
        for &s in &sectors {
            let chord = chord_from_one(raster.sector_angle(s));
            let mut l = 0.0;
            for ring in 0..rings {
                if raster.get(ring, s) || raster.midpoint(ring, s).norm() >= 1.0 {
                    continue;
                }
                let (r0, r1) = (edges[ring].min(chord), edges[ring + 1].min(chord));
                if r0 <= 0.0 {
                    return Err(SymmetrizeError::CenterNotInterior);
                }
                l += (r1 / r0).ln();
            }
            m_values.push(chord * (-l).exp());
        }
        let theta_grid = sectors.iter().map(|&s| raster.sector_angle(s)).collect();
        return Ok(RadialProfile { center: raster.center(), theta_grid, m_values, dtheta });
    }

    let full = (0..rings).take_while(|&r| raster.ring(r).iter().all(|c| *c)).count();
    let inscribed = edges[full];
    if inscribed <= 0.0 {
        return Err(SymmetrizeError::CenterNotInterior);
    }
    let rho = match rho {
        Some(r) if r > 0.0 && r <= inscribed => r,
        Some(_) => return Err(SymmetrizeError::CenterNotInterior),
        None => inscribed,
    };
    let mut m_values = Vec::with_capacity(raster.theta_count());
    for s in 0..raster.theta_count() {
        let mut log_m = rho.ln();
        for ring in 0..rings {
            if !raster.get(ring, s) {
                continue;
            }
            let (r0, r1) = (edges[ring].max(rho), edges[ring + 1]);
            if r1 > r0 {
                log_m += (r1 / r0).ln();
            }
        }
        // Inside a geometric grid's first edge the disk belongs to B.
        if edges[0] > rho {
            log_m += (edges[0] / rho).ln();
        }
        m_values.push(log_m.exp());
    }
    let theta_grid = (0..raster.theta_count()).map(|s| raster.sector_angle(s)).collect();
    Ok(RadialProfile { center: raster.center(), theta_grid, m_values, dtheta })
}

/// `M(θ) = Π_k M(θ, B_k)^{α_k}`.
pub fn averaging_transform(
    rasters: &[PolarRaster],
    spec: &AveragingSpec,
    restrict_left: bool,
) -> Result<RadialProfile, SymmetrizeError> {
    if rasters.len() != spec.weights().len() {
        return Err(SymmetrizeError::InvalidWeights(format!(
            "{} weights for {} rasters",
            spec.weights().len(),
            rasters.len()
        )));
    }
    if rasters.iter().any(|r| !r.same_grid(&rasters[0])) {
        return Err(SymmetrizeError::GridMismatch);
    }
    let mut out: Option<RadialProfile> = None;
    for (raster, &alpha) in rasters.iter().zip(spec.weights()) {
        let p = marcus_radial(raster, restrict_left)?;
        match out.as_mut() {
            None => {
                let mut first = p;
                first.m_values.iter_mut().for_each(|m| *m = m.powf(alpha));
                out = Some(first);
            }
            Some(acc) => {
                for (a, m) in acc.m_values.iter_mut().zip(&p.m_values) {
                    *a *= m.powf(alpha);
                }
            }
        }
    }
    Ok(out.expect("at least one raster"))
}

/// Inner radius `(M(θ) M(2π − θ))^{1/2}` and outer radius `−2cos θ` of the
/// band that replaces `E` when `raster` describes `U ∖ E` about 1.
pub fn r_transform(raster: &PolarRaster) -> Result<BandProfile, SymmetrizeError> {
    let profile = marcus_radial(raster, true)?;
    let sectors = left_sectors(raster);
    let t = raster.theta_count();
    let index_of = |s: usize| sectors.iter().position(|&x| x == s);
    let mut inner = profile.clone();
    for (k, &s) in sectors.iter().enumerate() {
        let mirror = index_of(t - 1 - s).ok_or(SymmetrizeError::GridMismatch)?;
        inner.m_values[k] = (profile.m_values[k] * profile.m_values[mirror]).sqrt();
    }
    let outer = inner.theta_grid.iter().map(|&a| chord_from_one(a)).collect();
    Ok(BandProfile { inner, outer })
}

fn mirror_x(mask: &CartesianMask, ix: usize) -> usize {
    mask.nx() - 1 - ix
}

fn is_right(mask: &CartesianMask, ix: usize) -> bool {
    2 * ix + 1 >= mask.nx()
}

fn is_left(mask: &CartesianMask, ix: usize) -> bool {
    2 * ix + 1 <= mask.nx()
}

/// `(E ∪ E*)⁺ ∪ (E ∩ E*)⁻` about the imaginary axis.
pub fn polarize(mask: &CartesianMask) -> Result<CartesianMask, SymmetrizeError> {
    let b = mask.bbox();
    check_symmetric(b.x0, b.x1, "imaginary")?;
    let mut out = mask.cleared();
    for iy in 0..mask.ny() {
        for ix in 0..mask.nx() {
            let (a, m) = (mask.get(ix, iy), mask.get(mirror_x(mask, ix), iy));
            out.set(ix, iy, if is_right(mask, ix) { a || m } else { a && m });
        }
    }
    Ok(out)
}

/// `(E⁺ ∪ (E⁺)*, E⁻ ∪ (E⁻)*)`; a column on the axis belongs to both halves.
pub fn compose_halves(mask: &CartesianMask) -> Result<(CartesianMask, CartesianMask), SymmetrizeError> {
    let b = mask.bbox();
    check_symmetric(b.x0, b.x1, "imaginary")?;
    let mut plus = mask.cleared();
    let mut minus = mask.cleared();
    for iy in 0..mask.ny() {
        for ix in 0..mask.nx() {
            if !mask.get(ix, iy) {
                continue;
            }
            let m = mirror_x(mask, ix);
            if is_right(mask, ix) {
                plus.set(ix, iy, true);
                plus.set(m, iy, true);
            }
            if is_left(mask, ix) {
                minus.set(ix, iy, true);
                minus.set(m, iy, true);
            }
        }
    }
    Ok((plus, minus))
}

/// Circular symmetrization of `E ∪ Σ` about the real point `a`, intersected
/// with the unit disk: arcs toward `−∞` for `a ≤ 0`, toward `+∞` for `a ≥ 1`.
/// The grid reaches radius `2 + |a| + 0.5` so every circle meeting `U` is whole.
pub fn cr_augmented(e: &Region, a: f64, rings: usize, sectors: usize) -> Result<PolarRaster, SymmetrizeError> {
    let direction = if a <= 0.0 {
        Direction::Minus
    } else if a >= 1.0 {
        Direction::Plus
    } else {
        return Err(SymmetrizeError::InvalidCenter(a));
    };
    let center = Complex64::new(a, 0.0);
    let mut prims = e.primitives().to_vec();
    prims.push(Primitive::Sigma);
    let with_sigma = Region::new(prims)?;
    let r_max = 2.5 + a.abs();
    let raster = rasterize_polar(&with_sigma, center, r_max, rings, sectors, RingSpacing::Uniform, RasterOptions::default())?;
    let mut out = circular_symmetrize(&raster, direction);
    for ring in 0..out.rings() {
        for s in 0..out.theta_count() {
            if out.midpoint(ring, s).norm() >= 1.0 {
                out.set(ring, s, false);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize_cartesian, Rect};

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    fn uniform_raster(center: Point, r_max: f64, rings: usize, sectors: usize) -> PolarRaster {
        let edges = (0..=rings).map(|k| r_max * k as f64 / rings as f64).collect();
        PolarRaster::new(center, edges, sectors).unwrap()
    }

    fn ring_block(raster: &PolarRaster, ring: usize) -> Vec<usize> {
        (0..raster.theta_count()).filter(|&s| raster.get(ring, s)).collect()
    }

    #[test]
    fn circular_blocks_are_centered_and_preserve_counts() {
        let mut r = uniform_raster(c(0.0, 0.0), 1.0, 4, 16);
        // ring 0 full, ring 1 empty, ring 2 four cells near 0.3, ring 3 three scattered.
        r.ring_mut(0).iter_mut().for_each(|x| *x = true);
        for s in [1, 2, 3, 4] {
            r.set(2, s, true);
        }
        for s in [0, 5, 11] {
            r.set(3, s, true);
        }
        let m = circular_symmetrize(&r, Direction::Minus);
        assert_eq!(m.ring(0), r.ring(0));
        assert!(m.ring(1).iter().all(|x| !x));
        assert_eq!(ring_block(&m, 2), vec![6, 7, 8, 9]);
        // Odd count: the extra cell goes toward increasing angle.
        assert_eq!(ring_block(&m, 3), vec![7, 8, 9]);
        let p = circular_symmetrize(&r, Direction::Plus);
        assert_eq!(ring_block(&p, 2), vec![0, 1, 14, 15]);
        assert_eq!(ring_block(&p, 3), vec![0, 1, 15]);
        for ring in 0..4 {
            assert_eq!(ring_block(&m, ring).len(), ring_block(&r, ring).len());
        }
    }

    #[test]
    fn circular_is_idempotent_and_monotone() {
        let e = Region::new(vec![
            Primitive::Disk { center: c(0.3, 0.2), radius: 0.3 },
            Primitive::Disk { center: c(-0.2, -0.5), radius: 0.25 },
        ])
        .unwrap();
        let small = Region::disk(c(0.3, 0.2), 0.3).unwrap();
        let grid = |reg: &Region| {
            rasterize_polar(reg, c(0.0, 0.0), 1.0, 16, 48, RingSpacing::Uniform, Default::default()).unwrap()
        };
        let (big, sm) = (grid(&e), grid(&small));
        assert!(sm.is_subset_of(&big));
        for d in [Direction::Minus, Direction::Plus] {
            let once = circular_symmetrize(&big, d);
            assert_eq!(circular_symmetrize(&once, d), once);
            assert!(circular_symmetrize(&sm, d).is_subset_of(&once));
        }
    }

    fn square_mask(n: usize) -> CartesianMask {
        CartesianMask::new(Rect::new(-1.0, -1.0, 1.0, 1.0), n, n).unwrap()
    }

    #[test]
    fn steiner_centers_columns() {
        let mut m = square_mask(8);
        // Column 2: two runs of total length 3.
        for iy in [0, 1, 6] {
            m.set(2, iy, true);
        }
        for iy in [0, 7] {
            m.set(5, iy, true);
        }
        let s = steiner_symmetrize(&m).unwrap();
        assert_eq!(s.column(2), vec![false, false, false, true, true, true, false, false]);
        assert_eq!(s.column(5), vec![false, false, false, true, true, false, false, false]);
        assert!(s.column(0).iter().all(|x| !x));
        assert_eq!(steiner_symmetrize(&s).unwrap(), s);
        let shifted = CartesianMask::new(Rect::new(-1.0, -0.5, 1.0, 1.0), 8, 8).unwrap();
        assert!(matches!(steiner_symmetrize(&shifted), Err(SymmetrizeError::AsymmetricBbox { .. })));
    }

    #[test]
    fn steiner_fixes_symmetric_convex_sets_and_is_monotone() {
        let disk = Region::disk(c(0.1, 0.0), 0.6).unwrap();
        let m = rasterize_cartesian(&disk, Rect::new(-1.0, -1.0, 1.0, 1.0), 20, 21, Default::default()).unwrap();
        assert_eq!(steiner_symmetrize(&m).unwrap(), m);
        let a = rasterize_cartesian(&Region::disk(c(0.2, 0.4), 0.3).unwrap(), m.bbox(), 20, 21, Default::default()).unwrap();
        let b = a.zip_with(&m, |x, y| x || y);
        assert!(steiner_symmetrize(&a).unwrap().is_subset_of(&steiner_symmetrize(&b).unwrap()));
    }

    #[test]
    fn marcus_of_a_disk_is_its_radius() {
        let r = rasterize_polar(&Region::disk(c(0.0, 0.0), 0.6).unwrap(), c(0.0, 0.0), 1.0, 20, 32, RingSpacing::Uniform, Default::default())
            .unwrap();
        let p = marcus_radial(&r, false).unwrap();
        assert!(p.m_values.iter().all(|m| (m - 0.6).abs() < 1e-12), "{:?}", p.m_values);
    }

    #[test]
    fn marcus_log_integral_example() {
        // Rings of width 0.5 on [0, 3): occupied on [0, 1) ∪ [2, 3).
        let mut r = uniform_raster(c(0.0, 0.0), 3.0, 6, 8);
        for ring in [0, 1, 4, 5] {
            r.ring_mut(ring).iter_mut().for_each(|x| *x = true);
        }
        let p = marcus_radial(&r, false).unwrap();
        assert!(p.m_values.iter().all(|m| (m - 1.5).abs() < 1e-12));
        let q = marcus_radial_with_rho(&r, false, Some(0.5)).unwrap();
        assert!(q.m_values.iter().all(|m| (m - 1.5).abs() < 1e-12));
        let q = marcus_radial_with_rho(&r, false, Some(0.25)).unwrap();
        assert!(q.m_values.iter().all(|m| (m - 1.5).abs() < 0.5));
        let hollow = uniform_raster(c(0.0, 0.0), 1.0, 8, 8);
        assert_eq!(marcus_radial(&hollow, false), Err(SymmetrizeError::CenterNotInterior));
    }

    #[test]
    fn averaging_of_two_disks_is_the_geometric_mean() {
        let grid = |rad: f64| {
            rasterize_polar(&Region::disk(c(0.0, 0.0), rad).unwrap(), c(0.0, 0.0), 1.0, 20, 16, RingSpacing::Uniform, Default::default())
                .unwrap()
        };
        let spec = AveragingSpec::new(vec![0.5, 0.5]).unwrap();
        let p = averaging_transform(&[grid(0.3), grid(0.8)], &spec, false).unwrap();
        assert!(p.m_values.iter().all(|m| (m - (0.3f64 * 0.8).sqrt()).abs() < 1e-12));
        let one = AveragingSpec::new(vec![1.0]).unwrap();
        assert_eq!(averaging_transform(&[grid(0.3)], &one, false).unwrap(), marcus_radial(&grid(0.3), false).unwrap());
        assert!(AveragingSpec::new(vec![0.5, 0.4]).is_err());
        let other = rasterize_polar(&Region::empty(), c(0.0, 0.0), 1.0, 10, 16, RingSpacing::Uniform, Default::default()).unwrap();
        assert_eq!(averaging_transform(&[grid(0.3), other], &spec, false), Err(SymmetrizeError::GridMismatch));
    }

    fn about_one(b: &Region) -> PolarRaster {
        rasterize_polar(b, c(1.0, 0.0), 2.0, 40, 64, RingSpacing::Geometric { r_min: 0.02 }, Default::default()).unwrap()
    }

    /// Raster of `U ∖ E`.
    fn complement_raster(e: &Region) -> PolarRaster {
        let mut r = about_one(&Region::disk(c(0.0, 0.0), 1.0).unwrap());
        for ring in 0..r.rings() {
            for s in 0..r.theta_count() {
                if e.contains(r.midpoint(ring, s)) {
                    r.set(ring, s, false);
                }
            }
        }
        r
    }

    #[test]
    fn r_transform_of_empty_set_is_the_full_chord() {
        let band = r_transform(&complement_raster(&Region::empty())).unwrap();
        for (m, ch) in band.inner.m_values.iter().zip(&band.outer) {
            assert!((m - ch).abs() < 1e-12);
        }
    }

    #[test]
    fn r_transform_of_symmetric_set_is_its_marcus_profile() {
        let e = Region::disk(c(-0.4, 0.0), 0.3).unwrap();
        let raster = complement_raster(&e);
        let band = r_transform(&raster).unwrap();
        let plain = marcus_radial(&raster, true).unwrap();
        for ((a, b), ch) in band.inner.m_values.iter().zip(&plain.m_values).zip(&band.outer) {
            assert!((a - b).abs() < 1e-12);
            assert!(*a <= ch + 1e-12);
        }
        // The disk shortens rays through it.
        assert!(band.inner.m_values.iter().any(|m| *m < 0.9 * 2.0));
    }

    #[test]
    fn polarization_cases() {
        let bbox = Rect::new(-1.0, -1.0, 1.0, 1.0);
        let sym = rasterize_cartesian(&Region::disk(c(0.0, 0.3), 0.4).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        assert_eq!(polarize(&sym).unwrap(), sym);
        let right = rasterize_cartesian(&Region::disk(c(0.5, 0.0), 0.3).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        assert_eq!(polarize(&right).unwrap(), right);
        let left = rasterize_cartesian(&Region::disk(c(-0.5, 0.0), 0.3).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        assert_eq!(polarize(&left).unwrap(), right);
        let both = left.zip_with(&rasterize_cartesian(&Region::disk(c(0.2, 0.6), 0.3).unwrap(), bbox, 16, 16, Default::default()).unwrap(), |a, b| a || b);
        let p = polarize(&both).unwrap();
        assert_eq!(polarize(&p).unwrap(), p);
        assert_eq!(p.occupied_count(), both.occupied_count());
    }

    #[test]
    fn composition_counts_and_cases() {
        let bbox = Rect::new(-1.0, -1.0, 1.0, 1.0);
        for n in [16, 17] {
            let e = rasterize_cartesian(
                &Region::new(vec![
                    Primitive::Disk { center: c(0.3, 0.1), radius: 0.35 },
                    Primitive::Disk { center: c(-0.4, -0.4), radius: 0.3 },
                ])
                .unwrap(),
                bbox,
                n,
                n,
                Default::default(),
            )
            .unwrap();
            let (plus, minus) = compose_halves(&e).unwrap();
            let count = |left: bool| {
                (0..n).flat_map(|ix| (0..n).map(move |iy| (ix, iy))).filter(|&(ix, iy)| {
                    e.get(ix, iy) && if left { is_left(&e, ix) } else { is_right(&e, ix) }
                }).count()
            };
            let axis = if n % 2 == 1 { e.column_count(n / 2) } else { 0 };
            assert_eq!(plus.occupied_count(), 2 * count(false) - axis);
            assert_eq!(minus.occupied_count(), 2 * count(true) - axis);
        }
        let right = rasterize_cartesian(&Region::disk(c(0.5, 0.0), 0.3).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        let (plus, minus) = compose_halves(&right).unwrap();
        assert_eq!(minus.occupied_count(), 0);
        let mirrored = rasterize_cartesian(&Region::disk(c(-0.5, 0.0), 0.3).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        assert_eq!(plus, right.zip_with(&mirrored, |a, b| a || b));
        let sym = rasterize_cartesian(&Region::disk(c(0.0, 0.3), 0.4).unwrap(), bbox, 16, 16, Default::default()).unwrap();
        let (p, m) = compose_halves(&sym).unwrap();
        assert_eq!((p.clone(), m), (sym.clone(), sym));
        let shifted = CartesianMask::new(Rect::new(-0.5, -1.0, 1.0, 1.0), 8, 8).unwrap();
        assert!(compose_halves(&shifted).is_err());
    }

    #[test]
    fn augmented_circular_symmetrization() {
        let e = Region::disk(c(0.3, 0.3), 0.2).unwrap();
        let r = cr_augmented(&e, 0.0, 60, 64).unwrap();
        assert!(r.occupied_count() > 0);
        // Nothing outside the disk survives.
        for ring in 0..r.rings() {
            for s in 0..r.theta_count() {
                if r.get(ring, s) {
                    assert!(r.midpoint(ring, s).norm() < 1.0);
                }
            }
        }
        assert!(cr_augmented(&e, 0.5, 60, 64).is_err());
        assert!(cr_augmented(&e, 1.5, 60, 64).is_ok());
    }
}
