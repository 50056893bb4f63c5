//! Planar regions, base domains and their discretizations.

mod raster;
mod region;

pub use raster::{rasterize_cartesian, rasterize_polar, CartesianMask, PolarRaster, RasterOptions, RingSpacing};
pub use region::{parse_region, Point, Primitive, Rect, Region};
pub(crate) use region::segment_foot;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("region syntax error: {0}")]
    Syntax(String),
    #[error("invalid region: {0}")]
    Validation(String),
    #[error("distance to an empty region is undefined")]
    EmptyRegion,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// The base domain `D` in which sets are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `U = {|z| < 1}`
    UnitDisk,
    /// `H = {Im z > 0}`
    UpperHalfPlane,
}

impl Domain {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::UnitDisk => p.norm() < 1.0,
            Domain::UpperHalfPlane => p.im > 0.0,
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match self {
            Domain::UnitDisk => 1.0 - p.norm(),
            Domain::UpperHalfPlane => p.im,
        }
    }

    /// Nearest boundary point to `p`.
    pub fn project_to_boundary(&self, p: Point) -> Point {
        match self {
            Domain::UnitDisk => {
                let r = p.norm();
                if r == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    p / r
                }
            }
            Domain::UpperHalfPlane => Complex64::new(p.re, 0.0),
        }
    }
}

/// A boundary point `z0` of the base domain with the tangent of the boundary arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite { location: Point, tangent: Point },
    Infinity,
}

impl BoundaryPoint {
    /// `z0 = 1` on the unit circle; the tangent there is vertical.
    pub fn disk_one() -> Self {
        BoundaryPoint::Finite { location: Complex64::new(1.0, 0.0), tangent: Complex64::new(0.0, 1.0) }
    }
}

/// Sufficient check that `E` keeps a positive distance from `z0`: `E` misses the
/// neighborhood `{|z - z0| < probe}` (finite `z0`) or `{|z| > 1/probe}` (`z0 = ∞`).
pub fn inner_distance_positive(e: &Region, domain: Domain, z0: &BoundaryPoint, probe_radius: f64) -> bool {
    if e.is_empty() {
        return true;
    }
    match z0 {
        BoundaryPoint::Finite { location, .. } => {
            let _ = domain;
            match e.distance(*location) {
                Ok(d) => d >= probe_radius,
                Err(_) => true,
            }
        }
        BoundaryPoint::Infinity => match e.sup_norm() {
            Some(m) => m <= 1.0 / probe_radius,
            None => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn inner_distance_examples() {
        let z0 = BoundaryPoint::disk_one();
        let e = Region::disk(c(0.0, 0.0), 0.3).unwrap();
        assert!(inner_distance_positive(&e, Domain::UnitDisk, &z0, 0.5));
        let touching = Region::disk(c(0.5, 0.0), 0.5).unwrap();
        assert!(!inner_distance_positive(&touching, Domain::UnitDisk, &z0, 1e-9));
        assert!(inner_distance_positive(&Region::empty(), Domain::UnitDisk, &z0, 0.5));

        let slit = Region::segment(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(inner_distance_positive(&slit, Domain::UpperHalfPlane, &BoundaryPoint::Infinity, 0.5));
        assert!(!inner_distance_positive(&slit, Domain::UpperHalfPlane, &BoundaryPoint::Infinity, 2.0));
        assert!(!inner_distance_positive(&Region::sigma(), Domain::UnitDisk, &BoundaryPoint::Infinity, 0.1));
    }

    fn disk_strategy() -> impl Strategy<Value = Primitive> {
        (-1.0..1.0f64, -1.0..1.0f64, 0.05..0.8f64).prop_map(|(x, y, r)| Primitive::Disk { center: c(x, y), radius: r })
    }

    fn triangle_strategy() -> impl Strategy<Value = Primitive> {
        (-1.0..1.0f64, -1.0..1.0f64, 0.1..0.7f64, 0.0..6.0f64).prop_map(|(x, y, s, rot)| {
            let v = (0..3).map(|k| c(x, y) + Complex64::from_polar(s, rot + k as f64 * 2.1)).collect();
            Primitive::Polygon { vertices: v }
        })
    }

    fn primitive_strategy() -> impl Strategy<Value = Primitive> {
        prop_oneof![disk_strategy(), triangle_strategy()]
    }

    proptest! {
        #[test]
        fn union_is_monotone(a in prop::collection::vec(primitive_strategy(), 1..4),
                             b in prop::collection::vec(primitive_strategy(), 1..3),
                             px in -1.5..1.5f64, py in -1.5..1.5f64) {
            let r1 = Region::new(a).unwrap();
            let r12 = r1.union(&Region::new(b).unwrap());
            let p = c(px, py);
            prop_assert!(!r1.contains(p) || r12.contains(p));
        }

        #[test]
        fn zero_distance_iff_member(a in prop::collection::vec(primitive_strategy(), 1..4),
                                    px in -1.5..1.5f64, py in -1.5..1.5f64) {
            let r = Region::new(a).unwrap();
            let p = c(px, py);
            prop_assert_eq!(r.distance(p).unwrap() == 0.0, r.contains(p));
            // Points snapped onto the region are members (up to rounding of the foot).
            let (q, _) = r.nearest(p).unwrap();
            prop_assert!(r.distance(q).unwrap() < 1e-12);
        }

        #[test]
        fn rasterization_is_monotone(a in prop::collection::vec(primitive_strategy(), 1..3),
                                     b in prop::collection::vec(primitive_strategy(), 1..3)) {
            let r1 = Region::new(a).unwrap();
            let r12 = r1.union(&Region::new(b).unwrap());
            let bbox = Rect::new(-1.5, -1.5, 1.5, 1.5);
            let m1 = rasterize_cartesian(&r1, bbox, 24, 24, Default::default()).unwrap();
            let m12 = rasterize_cartesian(&r12, bbox, 24, 24, Default::default()).unwrap();
            prop_assert!(m1.is_subset_of(&m12));
            let p1 = rasterize_polar(&r1, c(0.2, 0.0), 1.5, 12, 24, RingSpacing::Uniform, Default::default()).unwrap();
            let p12 = rasterize_polar(&r12, c(0.2, 0.0), 1.5, 12, 24, RingSpacing::Uniform, Default::default()).unwrap();
            prop_assert!(p1.is_subset_of(&p12));
        }

        #[test]
        fn random_polygon_raster_matches_requery(t in triangle_strategy()) {
            let r = Region::new(vec![t]).unwrap();
            let m = rasterize_cartesian(&r, Rect::new(-2.0, -2.0, 2.0, 2.0), 20, 17, Default::default()).unwrap();
            for iy in 0..m.ny() {
                for ix in 0..m.nx() {
                    prop_assert_eq!(m.get(ix, iy), r.contains(m.midpoint(ix, iy)));
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip_on_probe_grid() {
        let r = Region::new(vec![
            Primitive::Disk { center: c(0.1, 0.3), radius: 0.37 },
            Primitive::Polygon { vertices: vec![c(-0.9, -0.8), c(0.2, -0.7), c(-0.1, 0.1), c(-0.6, -0.2)] },
            Primitive::Segment { a: c(0.5, -0.5), b: c(0.9, 0.5) },
            Primitive::Sigma,
        ])
        .unwrap();
        let back = parse_region(&r.to_json()).unwrap();
        let n = 1000;
        for i in 0..n {
            for j in 0..n {
                let p = c(-1.2 + 2.4 * i as f64 / (n - 1) as f64, -1.2 + 2.4 * j as f64 / (n - 1) as f64);
                assert_eq!(r.contains(p), back.contains(p));
            }
        }
    }
}
