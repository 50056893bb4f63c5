//! Rasters and profiles turned back into [`Region`]s.
//!
//! Curved edges become chords of angular step at most `step`; long arcs are
//! split into pieces of at most `PIECE_STEPS` chords so that every polygon has
//! a tight bounding disk.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{chord_from_one, Direction, RadialProfile, SymmetrizeError};
use crate::geometry::{CartesianMask, Point, PolarRaster, Primitive, Region};

/// Default largest angle subtended by one chord.
pub const DEFAULT_ARC_STEP: f64 = 0.025;

const PIECE_STEPS: usize = 8;

/// How far polygons standing in for "everything beyond the circle" reach past it.
const OUTER_MARGIN: f64 = 0.05;

fn arc(center: Point, r: f64, a0: f64, a1: f64, n: usize) -> impl DoubleEndedIterator<Item = Point> {
    (0..=n).map(move |k| center + Complex64::from_polar(r, a0 + (a1 - a0) * k as f64 / n as f64))
}

fn steps_for(width: f64, step: f64) -> usize {
    ((width / step).ceil() as usize).max(1)
}

/// `{center + r e^{iθ} : r0 ≤ r ≤ r1, a0 ≤ θ ≤ a1}` as polygons.
fn annular_pieces(center: Point, r0: f64, r1: f64, a0: f64, a1: f64, step: f64, out: &mut Vec<Primitive>) {
    let total = steps_for(a1 - a0, step);
    let pieces = total.div_ceil(PIECE_STEPS);
    for p in 0..pieces {
        let k0 = p * total / pieces;
        let k1 = (p + 1) * total / pieces;
        let b0 = a0 + (a1 - a0) * k0 as f64 / total as f64;
        let b1 = a0 + (a1 - a0) * k1 as f64 / total as f64;
        let n = k1 - k0;
        let mut vertices: Vec<Point> = arc(center, r1, b0, b1, n).collect();
        if r0 > 0.0 {
            vertices.extend(arc(center, r0, b0, b1, n).rev());
        } else {
            vertices.push(center);
        }
        out.push(Primitive::Polygon { vertices });
    }
}

fn finish(prims: Vec<Primitive>) -> Result<Region, SymmetrizeError> {
    Ok(Region::new(prims)?)
}

/// Occupied cells as rectangles, merged along rows.
pub fn mask_region(mask: &CartesianMask) -> Result<Region, SymmetrizeError> {
    let b = mask.bbox();
    let (dx, dy) = (mask.dx(), mask.dy());
    let mut prims = Vec::new();
    for iy in 0..mask.ny() {
        let (y0, y1) = (b.y0 + iy as f64 * dy, b.y0 + (iy + 1) as f64 * dy);
        let mut ix = 0;
        while ix < mask.nx() {
            if !mask.get(ix, iy) {
                ix += 1;
                continue;
            }
            let start = ix;
            while ix < mask.nx() && mask.get(ix, iy) {
                ix += 1;
            }
            let (x0, x1) = (b.x0 + start as f64 * dx, b.x0 + ix as f64 * dx);
            prims.push(Primitive::Polygon {
                vertices: vec![Complex64::new(x0, y0), Complex64::new(x1, y0), Complex64::new(x1, y1), Complex64::new(x0, y1)],
            });
        }
    }
    finish(prims)
}

/// Occupied cells as annular sectors, merged along rays.
pub fn polar_region(raster: &PolarRaster, step: f64) -> Result<Region, SymmetrizeError> {
    let edges = raster.r_edges();
    let dt = raster.dtheta();
    let mut prims = Vec::new();
    for s in 0..raster.theta_count() {
        let (a0, a1) = (s as f64 * dt, (s + 1) as f64 * dt);
        let mut ring = 0;
        while ring < raster.rings() {
            if !raster.get(ring, s) {
                ring += 1;
                continue;
            }
            let start = ring;
            while ring < raster.rings() && raster.get(ring, s) {
                ring += 1;
            }
            annular_pieces(raster.center(), edges[start], edges[ring], a0, a1, step, &mut prims);
        }
    }
    finish(prims)
}

/// Each ring's occupied count laid out as one arc exactly centered on the
/// symmetry ray, with the ring's angular measure kept.
pub fn centered_arc_region(raster: &PolarRaster, direction: Direction, step: f64) -> Result<Region, SymmetrizeError> {
    let edges = raster.r_edges();
    let mid = match direction {
        Direction::Minus => PI,
        Direction::Plus => 0.0,
    };
    let mut prims = Vec::new();
    for ring in 0..raster.rings() {
        let m = raster.ring(ring).iter().filter(|c| **c).count();
        if m == 0 {
            continue;
        }
        let width = if m == raster.theta_count() { TAU } else { m as f64 * raster.dtheta() };
        annular_pieces(raster.center(), edges[ring], edges[ring + 1], mid - width / 2.0, mid + width / 2.0, step, &mut prims);
    }
    finish(prims)
}

/// The star-like set `{center + r e^{iθ} : r < M(θ)}` with `M` constant on each sector.
pub fn star_region(profile: &RadialProfile, step: f64) -> Result<Region, SymmetrizeError> {
    let mut prims = Vec::new();
    let h = profile.dtheta / 2.0;
    for (&theta, &m) in profile.theta_grid.iter().zip(&profile.m_values) {
        if m > 0.0 {
            annular_pieces(profile.center, 0.0, m, theta - h, theta + h, step, &mut prims);
        }
    }
    finish(prims)
}

/// `{1 + r e^{iθ} : M(θ) ≤ r}` seen inside the unit disk, for a profile about 1
/// restricted to `(π/2, 3π/2)`.
///
/// On each sector the inner boundary is `κ·(−2cos θ)` with `κ = M/(−2cos θ)`
/// taken at the sector center, which is the exact boundary when the removed
/// cells lie inside the disk. That curve is a circle through 1; its vertices
/// are pushed outward so the chords never cut into it, so the band is never
/// larger than the exact one.
pub fn band_region(profile: &RadialProfile, step: f64) -> Result<Region, SymmetrizeError> {
    let one = Complex64::new(1.0, 0.0);
    if (profile.center - one).norm() > 1e-12 {
        return Err(SymmetrizeError::InvalidCenter(profile.center.re));
    }
    let h = profile.dtheta / 2.0;
    let mut prims = Vec::new();
    for (&theta, &m) in profile.theta_grid.iter().zip(&profile.m_values) {
        let chord = chord_from_one(theta);
        if chord <= 0.0 {
            continue;
        }
        let (a0, a1) = (theta - h, theta + h);
        let n = steps_for(a1 - a0, step);
        let ds = (a1 - a0) / n as f64;
        let kappa = m / chord / ds.cos().powi(2);
        if kappa >= 1.0 {
            continue;
        }
        let at = |k: usize| a0 + ds * k as f64;
        let mut vertices: Vec<Point> =
            (0..=n).map(|k| one + Complex64::from_polar(kappa * chord_from_one(at(k)), at(k))).collect();
        vertices.extend((0..=n).rev().map(|k| one + Complex64::from_polar(chord_from_one(at(k)) + OUTER_MARGIN, at(k))));
        // Vertices on the inner curve can coincide at 1 when a sector touches π/2.
        vertices.dedup();
        if vertices.len() >= 3 {
            prims.push(Primitive::Polygon { vertices });
        }
    }
    finish(prims)
}

fn circle_height(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// `U ∖ St(U ∖ E)` for `E` given by cells of `e_mask` that lie inside the unit
/// disk: in a column with `k` such cells the Steiner set is
/// `|y| < c(x) − k·dy/2` with `c(x) = √(1 − x²)`, so what remains are two caps
/// bounded by the circle shifted by `k·dy/2`.
///
/// The lower edge of each cap is lifted by the largest chord sag so the caps
/// are never larger than the exact ones.
pub fn steiner_complement_region(e_mask: &CartesianMask, step: f64) -> Result<Region, SymmetrizeError> {
    let b = e_mask.bbox();
    if (b.y0 + b.y1).abs() > 1e-12 * b.height() {
        return Err(SymmetrizeError::AsymmetricBbox { axis: "real" });
    }
    let (dx, dy) = (e_mask.dx(), e_mask.dy());
    let mut prims = Vec::new();
    for ix in 0..e_mask.nx() {
        let k = e_mask.column_count(ix);
        if k == 0 {
            continue;
        }
        let (x0, x1) = (b.x0 + ix as f64 * dx, b.x0 + (ix + 1) as f64 * dx);
        let n = steps_for(x1 - x0, step).max(4);
        let xs: Vec<f64> = (0..=n).map(|j| x0 + (x1 - x0) * j as f64 / n as f64).collect();
        let sub = (x1 - x0) / n as f64;
        let curvature = xs.iter().map(|&x| circle_height(x).powi(-3)).fold(0.0, f64::max);
        let lift = sub * sub / 8.0 * curvature;
        let shift = k as f64 * dy / 2.0;
        let lower: Vec<Point> = xs.iter().map(|&x| Complex64::new(x, circle_height(x) - shift + lift)).collect();
        let upper: Vec<Point> = xs.iter().rev().map(|&x| Complex64::new(x, circle_height(x) + OUTER_MARGIN)).collect();
        let top: Vec<Point> = lower.iter().chain(&upper).copied().collect();
        let bottom: Vec<Point> = top.iter().rev().map(|p| p.conj()).collect();
        prims.push(Primitive::Polygon { vertices: top });
        prims.push(Primitive::Polygon { vertices: bottom });
    }
    finish(prims)
}

#[cfg(test)]
mod tests {
    use super::super::{circular_symmetrize, marcus_radial, steiner_symmetrize};
    use super::*;
    use crate::geometry::{rasterize_cartesian, rasterize_polar, Rect, RingSpacing};

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn mask_region_matches_cells() {
        let e = Region::disk(c(0.1, -0.2), 0.5).unwrap();
        let m = rasterize_cartesian(&e, Rect::new(-1.0, -1.0, 1.0, 1.0), 24, 24, Default::default()).unwrap();
        let r = mask_region(&m).unwrap();
        for ix in 0..24 {
            for iy in 0..24 {
                assert_eq!(r.contains(m.midpoint(ix, iy)), m.get(ix, iy));
            }
        }
    }

    #[test]
    fn polar_region_matches_cells() {
        let e = Region::disk(c(0.3, 0.4), 0.4).unwrap();
        let raster = rasterize_polar(&e, c(0.0, 0.0), 1.0, 12, 32, RingSpacing::Uniform, Default::default()).unwrap();
        let r = polar_region(&raster, DEFAULT_ARC_STEP).unwrap();
        for ring in 0..12 {
            for s in 0..32 {
                assert_eq!(r.contains(raster.midpoint(ring, s)), raster.get(ring, s), "{ring} {s}");
            }
        }
    }

    #[test]
    fn centered_arcs_hold_the_symmetrized_cells() {
        let e = Region::disk(c(0.3, 0.4), 0.4).unwrap();
        let raster = rasterize_polar(&e, c(0.0, 0.0), 1.0, 12, 32, RingSpacing::Uniform, Default::default()).unwrap();
        let r = centered_arc_region(&raster, Direction::Minus, DEFAULT_ARC_STEP).unwrap();
        let sym = circular_symmetrize(&raster, Direction::Minus);
        for ring in 0..12 {
            let m = raster.ring(ring).iter().filter(|x| **x).count();
            // Even counts are exactly centered on π on an even sector grid.
            if m % 2 == 0 {
                for s in 0..32 {
                    assert_eq!(r.contains(sym.midpoint(ring, s)), sym.get(ring, s));
                }
            }
        }
        assert!(r.contains(c(-0.5, 0.0)));
    }

    #[test]
    fn band_of_empty_set_is_outside_the_disk() {
        let u = Region::disk(c(0.0, 0.0), 1.0).unwrap();
        let raster = rasterize_polar(&u, c(1.0, 0.0), 2.0, 20, 64, RingSpacing::Geometric { r_min: 0.05 }, Default::default()).unwrap();
        let p = marcus_radial(&raster, true).unwrap();
        assert!(band_region(&p, DEFAULT_ARC_STEP).unwrap().is_empty());
    }

    #[test]
    fn band_lies_beyond_the_profile() {
        let e = Region::disk(c(-0.3, 0.1), 0.3).unwrap();
        let mut raster =
            rasterize_polar(&Region::disk(c(0.0, 0.0), 1.0).unwrap(), c(1.0, 0.0), 2.0, 30, 64, RingSpacing::Geometric { r_min: 0.05 }, Default::default())
                .unwrap();
        for ring in 0..raster.rings() {
            for s in 0..64 {
                if e.contains(raster.midpoint(ring, s)) {
                    raster.set(ring, s, false);
                }
            }
        }
        let p = marcus_radial(&raster, true).unwrap();
        let band = band_region(&p, DEFAULT_ARC_STEP).unwrap();
        assert!(!band.is_empty());
        for (&theta, &m) in p.theta_grid.iter().zip(&p.m_values) {
            let dir = Complex64::from_polar(1.0, theta);
            assert!(!band.contains(1.0 + dir * (0.999 * m)));
            if m < 0.99 * chord_from_one(theta) {
                assert!(band.contains(1.0 + dir * (0.5 * (m + chord_from_one(theta)))));
            }
        }
    }

    #[test]
    fn steiner_caps_measure_matches_the_symmetrized_column() {
        let bbox = Rect::new(-1.0, -1.0, 1.0, 1.0);
        let e = Region::disk(c(0.2, 0.3), 0.35).unwrap();
        let mut m = rasterize_cartesian(&e, bbox, 32, 32, Default::default()).unwrap();
        // Keep cells inside the disk only.
        for ix in 0..32 {
            for iy in 0..32 {
                let q = m.midpoint(ix, iy);
                let inside = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
                    .iter()
                    .all(|(sx, sy)| (q + c(sx * m.dx() / 2.0, sy * m.dy() / 2.0)).norm() < 1.0);
                if !inside {
                    m.set(ix, iy, false);
                }
            }
        }
        let caps = steiner_complement_region(&m, DEFAULT_ARC_STEP).unwrap();
        let st = steiner_symmetrize(&m).unwrap();
        for ix in 0..32 {
            let k = m.column_count(ix);
            let x = m.midpoint(ix, 0).re;
            let half = circle_height(x) - k as f64 * m.dy() / 2.0;
            if k > 0 {
                assert!(!caps.contains(c(x, 0.99 * half)));
                assert!(caps.contains(c(x, half + 0.01)));
                assert!(caps.contains(c(x, -half - 0.01)));
            }
            assert_eq!(st.column_count(ix), k);
        }
    }
}
