//! Random test sets and their discretizations.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::geometry::{
    rasterize_cartesian, rasterize_polar, CartesianMask, GeometryError, Point, PolarRaster, Primitive, Rect, Region,
    RingSpacing,
};

/// Closest any random disk may come to the boundary point 1.
pub const MIN_DISTANCE_FROM_ONE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn primitive(&self) -> Primitive {
        Primitive::Disk { center: self.center, radius: self.radius }
    }
}

fn far_from_one(d: &Disk) -> bool {
    (d.center - 1.0).norm() - d.radius >= MIN_DISTANCE_FROM_ONE
}

/// Disk with center uniform in `|c| ≤ 0.75`, radius uniform in `[0.05, 0.35]`,
/// kept at distance at least [`MIN_DISTANCE_FROM_ONE`] from 1.
pub fn random_disk<R: Rng>(rng: &mut R) -> Disk {
    loop {
        let r = 0.75 * rng.gen::<f64>().sqrt();
        let center = Complex64::from_polar(r, TAU * rng.gen::<f64>());
        let d = Disk { center, radius: rng.gen_range(0.05..0.35) };
        if far_from_one(&d) {
            return d;
        }
    }
}

/// Disk meeting `other`, with center at distance `[0.2, 0.9]·(r₁ + r₂)`.
pub fn overlapping_disk<R: Rng>(rng: &mut R, other: &Disk) -> Disk {
    loop {
        let radius = rng.gen_range(0.05..0.35);
        let dist = rng.gen_range(0.2..0.9) * (radius + other.radius);
        let center = other.center + Complex64::from_polar(dist, TAU * rng.gen::<f64>());
        let d = Disk { center, radius };
        if far_from_one(&d) && center.norm() < 0.9 {
            return d;
        }
    }
}

pub fn random_union<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<Disk> {
    let count = rng.gen_range(min..=max);
    (0..count).map(|_| random_disk(rng)).collect()
}

pub fn union_region(disks: &[Disk]) -> Result<Region, GeometryError> {
    Region::new(disks.iter().map(Disk::primitive).collect())
}

/// Intersection of two disks; a lens is replaced by its inscribed polygon
/// with `vertices` corners, which lies inside the exact lens.
pub fn disk_intersection(a: &Disk, b: &Disk, vertices: usize) -> Result<Region, GeometryError> {
    let d = (b.center - a.center).norm();
    if d >= a.radius + b.radius {
        return Ok(Region::empty());
    }
    if d <= (a.radius - b.radius).abs() {
        let small = if a.radius <= b.radius { a } else { b };
        return Region::new(vec![small.primitive()]);
    }
    let x = (a.radius * a.radius - b.radius * b.radius + d * d) / (2.0 * d);
    let h = (a.radius * a.radius - x * x).max(0.0).sqrt();
    let u = (b.center - a.center) / d;
    let phi_a = h.atan2(x);
    let phi_b = h.atan2(d - x);
    let half = (vertices / 2).max(2);
    let mut v = Vec::with_capacity(2 * half);
    let ta = u.arg();
    for k in 0..half {
        v.push(a.center + Complex64::from_polar(a.radius, ta - phi_a + 2.0 * phi_a * k as f64 / half as f64));
    }
    let tb = ta + PI;
    for k in 0..half {
        v.push(b.center + Complex64::from_polar(b.radius, tb - phi_b + 2.0 * phi_b * k as f64 / half as f64));
    }
    Region::polygon(v)
}

/// `[-1, 1]²` with an `n × n` grid.
pub fn unit_square_mask(region: &Region, n: usize) -> Result<CartesianMask, GeometryError> {
    rasterize_cartesian(region, Rect::new(-1.0, -1.0, 1.0, 1.0), n, n, Default::default())
}

/// Cells of `mask` lying inside the unit disk whose midpoint is in `region`.
pub fn inner_cells(region: &Region, mask_grid: &CartesianMask) -> CartesianMask {
    let mut out = mask_grid.cleared();
    let (hx, hy) = (mask_grid.dx() / 2.0, mask_grid.dy() / 2.0);
    for ix in 0..out.nx() {
        for iy in 0..out.ny() {
            let m = out.midpoint(ix, iy);
            let corners = [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)];
            let inside = corners.iter().all(|(x, y)| (m + Complex64::new(*x, *y)).norm() < 1.0);
            out.set(ix, iy, inside && region.contains(m));
        }
    }
    out
}

/// Geometric polar grid about 1 covering the unit disk.
pub fn polar_about_one(region: &Region, rings: usize, sectors: usize) -> Result<PolarRaster, GeometryError> {
    rasterize_polar(region, Complex64::new(1.0, 0.0), 2.0, rings, sectors, RingSpacing::Geometric { r_min: 0.05 }, Default::default())
}

/// Cells of a polar grid about 1 lying inside the unit disk with midpoint in `region`.
pub fn inner_polar_cells(region: &Region, rings: usize, sectors: usize) -> Result<PolarRaster, GeometryError> {
    let mut r = polar_about_one(&Region::empty(), rings, sectors)?;
    let edges = r.r_edges().to_vec();
    let dt = r.dtheta();
    for ring in 0..rings {
        for s in 0..sectors {
            let corners = [edges[ring], edges[ring + 1]].into_iter().flat_map(|rad| {
                [s as f64 * dt, (s + 1) as f64 * dt].into_iter().map(move |a| 1.0 + Complex64::from_polar(rad, a))
            });
            let inside = corners.into_iter().all(|p| p.norm() < 1.0);
            r.set(ring, s, inside && region.contains(r.midpoint(ring, s)));
        }
    }
    Ok(r)
}

/// Raster of `U ∖ E_d` about 1 for the removed cells `e_cells`.
pub fn complement_about_one(e_cells: &PolarRaster) -> PolarRaster {
    let mut b = e_cells.clone();
    for ring in 0..b.rings() {
        for s in 0..b.theta_count() {
            let inside = b.midpoint(ring, s).norm() < 1.0;
            b.set(ring, s, inside && !e_cells.get(ring, s));
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_disks_keep_away_from_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let d = random_disk(&mut rng);
            let r = union_region(&[d]).unwrap();
            assert!(r.distance(Complex64::new(1.0, 0.0)).unwrap() >= MIN_DISTANCE_FROM_ONE - 1e-12);
        }
    }

    #[test]
    fn lens_is_inside_both_disks() {
        let a = Disk { center: Complex64::new(0.0, 0.0), radius: 0.4 };
        let b = Disk { center: Complex64::new(0.5, 0.1), radius: 0.3 };
        let lens = disk_intersection(&a, &b, 256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = 0;
        for _ in 0..20000 {
            let p = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let exact = (p - a.center).norm() <= a.radius && (p - b.center).norm() <= b.radius;
            if lens.contains(p) {
                assert!(exact);
                hits += 1;
            }
        }
        assert!(hits > 100);
        let inner = Disk { center: Complex64::new(0.05, 0.0), radius: 0.1 };
        assert_eq!(disk_intersection(&a, &inner, 256).unwrap(), union_region(&[inner]).unwrap());
        let far = Disk { center: Complex64::new(-0.9, 0.0), radius: 0.1 };
        assert!(disk_intersection(&a, &far, 256).unwrap().is_empty());
    }
}
