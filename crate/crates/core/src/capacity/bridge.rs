use num_complex::Complex64;

use super::CapacityError;
use crate::geometry::{segment_foot, Point, Primitive, Region};

pub const DEFAULT_CHORDS: usize = 64;

/// `T(z) = i(1 + z)/(1 - z)`, mapping the unit disk onto the upper half-plane and 1 to ∞.
pub fn mobius_t(z: Point) -> Point {
    Complex64::i() * (1.0 + z) / (1.0 - z)
}

#[derive(Debug, Clone)]
pub struct HalfPlaneImage {
    pub region: Region,
    /// Upper bound estimate of the distance between the polygonal image and `T(E)`.
    pub hausdorff_error: f64,
}

fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let center = Complex64::new(ux, uy);
    (center, (a - center).norm())
}

/// Maps `a -> b` into `chords` pieces; returns image points and the largest
/// deviation of the image arc from the chords.
fn map_edge(a: Point, b: Point, chords: usize, out: &mut Vec<Point>) -> f64 {
    let mut err: f64 = 0.0;
    for j in 0..chords {
        let s0 = a + (b - a) * (j as f64 / chords as f64);
        let s1 = a + (b - a) * ((j + 1) as f64 / chords as f64);
        let (t0, t1) = (mobius_t(s0), mobius_t(s1));
        out.push(t0);
        for f in [0.25, 0.5, 0.75] {
            let tm = mobius_t(s0 + (s1 - s0) * f);
            err = err.max((tm - segment_foot(t0, t1, tm)).norm());
        }
    }
    err
}

/// Image of `E ⊂ U` under [`mobius_t`]. Disks map exactly; polygon edges and
/// segments are subdivided into `chords` pieces each.
pub fn disk_to_halfplane_image(e: &Region, chords: usize) -> Result<HalfPlaneImage, CapacityError> {
    let one = Complex64::new(1.0, 0.0);
    if !e.is_empty() && !(e.distance(one)? > 0.0) {
        return Err(CapacityError::TouchesPole);
    }
    let chords = chords.max(1);
    let mut prims = Vec::with_capacity(e.primitives().len());
    let mut err: f64 = 0.0;
    for p in e.primitives() {
        match p {
            Primitive::Disk { center, radius } => {
                let pts: Vec<Point> = (0..3)
                    .map(|k| mobius_t(center + Complex64::from_polar(*radius, k as f64 * std::f64::consts::TAU / 3.0)))
                    .collect();
                let (c, r) = circumcircle(pts[0], pts[1], pts[2]);
                prims.push(Primitive::Disk { center: c, radius: r });
            }
            Primitive::Polygon { vertices } => {
                let mut out = Vec::with_capacity(vertices.len() * chords);
                for (i, &a) in vertices.iter().enumerate() {
                    let b = vertices[(i + 1) % vertices.len()];
                    err = err.max(map_edge(a, b, chords, &mut out));
                }
                prims.push(Primitive::Polygon { vertices: out });
            }
            Primitive::Segment { a, b } => {
                let mut out = Vec::with_capacity(chords + 1);
                err = err.max(map_edge(*a, *b, chords, &mut out));
                out.push(mobius_t(*b));
                for w in out.windows(2) {
                    prims.push(Primitive::Segment { a: w[0], b: w[1] });
                }
            }
            Primitive::Sigma => return Err(CapacityError::TouchesPole),
        }
    }
    Ok(HalfPlaneImage { region: Region::new(prims)?, hausdorff_error: err })
}
