//! Five-point finite differences with Shortley–Weller boundary stencils for
//! the regular part of the Green function, `h(z) = log r(G, z)`.

use super::walk::WalkDomain;
use super::PotentialError;
use crate::geometry::{CartesianMask, Point, Rect};

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    /// Stop once the max stencil residual falls below this.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Bisection steps used to locate boundary crossings.
    pub bisection_steps: u32,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { tolerance: 1e-10, max_sweeps: 200_000, bisection_steps: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSolution {
    /// `h(z)`, the logarithm of the inner radius.
    pub log_radius: f64,
    pub sweeps: usize,
    pub residual: f64,
}

impl GridSolution {
    pub fn radius(&self) -> f64 {
        self.log_radius.exp()
    }
}

/// Rasterizes the walk domain on an `nx × ny` grid of the same extent as
/// `bbox`, shifted so that `z` is a cell midpoint.
pub fn aligned_domain_mask(
    domain: &WalkDomain,
    bbox: Rect,
    nx: usize,
    ny: usize,
    z: Point,
) -> Result<CartesianMask, PotentialError> {
    let dx = bbox.width() / nx as f64;
    let dy = bbox.height() / ny as f64;
    let kx = ((z.re - bbox.x0) / dx - 0.5).round();
    let ky = ((z.im - bbox.y0) / dy - 0.5).round();
    let x0 = z.re - (kx + 0.5) * dx;
    let y0 = z.im - (ky + 0.5) * dy;
    let aligned = Rect::new(x0, y0, x0 + bbox.width(), y0 + bbox.height());
    let mut mask = CartesianMask::new(aligned, nx, ny)?;
    for iy in 0..ny {
        for ix in 0..nx {
            let p = mask.midpoint(ix, iy);
            mask.set(ix, iy, domain.contains(p));
        }
    }
    Ok(mask)
}

const NO_NEIGHBOR: usize = usize::MAX;

struct Node {
    diag: f64,
    rhs: f64,
    coef: [f64; 4],
    nbr: [usize; 4],
}

/// Solves `Δh = 0` on the occupied cell midpoints of `mask` with
/// `h(ζ) = log|ζ - z|` on the boundary of `domain`, and returns `h(z)`.
///
/// Neighbors outside the grid but inside the domain are treated as boundary
/// nodes at full spacing, which truncates unbounded domains to the grid.
pub fn grid_green_regular_part(
    domain: &WalkDomain,
    mask: &CartesianMask,
    z: Point,
    options: GridOptions,
) -> Result<GridSolution, PotentialError> {
    let (nx, ny) = (mask.nx(), mask.ny());
    let (dx, dy) = (mask.dx(), mask.dy());
    let bb = mask.bbox();
    let fx = (z.re - bb.x0) / dx - 0.5;
    let fy = (z.im - bb.y0) / dy - 0.5;
    let (zx, zy) = (fx.round(), fy.round());
    if (fx - zx).abs() > 1e-6 || (fy - zy).abs() > 1e-6 || zx < 0.0 || zy < 0.0 || zx >= nx as f64 || zy >= ny as f64 {
        return Err(PotentialError::Grid(format!("{z} is not a cell midpoint of the grid")));
    }
    let (zx, zy) = (zx as usize, zy as usize);
    if !mask.get(zx, zy) {
        return Err(PotentialError::Grid(format!("{z} is not an interior node")));
    }

    let mut index = vec![NO_NEIGHBOR; nx * ny];
    let mut count = 0;
    for iy in 0..ny {
        for ix in 0..nx {
            if mask.get(ix, iy) {
                index[iy * nx + ix] = count;
                count += 1;
            }
        }
    }

    let g = |p: Point| (p - z).norm().max(super::LOG_CLAMP).ln();
    // First exit from the domain along p -> q, as a fraction of the step.
    let crossing = |p: Point, q: Point| -> f64 {
        if domain.contains(q) {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..options.bisection_steps {
            let mid = 0.5 * (lo + hi);
            if domain.contains(p + (q - p) * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).max(1e-8)
    };

    let mut nodes = Vec::with_capacity(count);
    let dirs: [(isize, isize, f64); 4] = [(-1, 0, dx), (1, 0, dx), (0, -1, dy), (0, 1, dy)];
    for iy in 0..ny {
        for ix in 0..nx {
            if !mask.get(ix, iy) {
                continue;
            }
            let p = mask.midpoint(ix, iy);
            let mut arm = [0.0; 4];
            let mut nbr = [NO_NEIGHBOR; 4];
            let mut bval = [0.0; 4];
            for (k, &(sx, sy, h)) in dirs.iter().enumerate() {
                let jx = ix as isize + sx;
                let jy = iy as isize + sy;
                let inside_grid = jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny;
                if inside_grid && mask.get(jx as usize, jy as usize) {
                    arm[k] = h;
                    nbr[k] = index[jy as usize * nx + jx as usize];
                } else {
                    let q = p + Point::new(sx as f64 * dx, sy as f64 * dy);
                    let t = crossing(p, q);
                    arm[k] = t * h;
                    bval[k] = g(p + (q - p) * t);
                }
            }
            let mut coef = [0.0; 4];
            for axis in 0..2 {
                let (a, b) = (arm[2 * axis], arm[2 * axis + 1]);
                coef[2 * axis] = 2.0 / (a * (a + b));
                coef[2 * axis + 1] = 2.0 / (b * (a + b));
            }
            let diag: f64 = coef.iter().sum();
            let mut rhs = 0.0;
            for k in 0..4 {
                if nbr[k] == NO_NEIGHBOR {
                    rhs += coef[k] * bval[k];
                    coef[k] = 0.0;
                }
            }
            nodes.push(Node { diag, rhs, coef, nbr });
        }
    }

    let n = nx.max(ny) as f64;
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / n).sin());
    let mut u = vec![0.0; count];
    let relax = |u: &[f64], node: &Node| -> f64 {
        let mut s = node.rhs;
        for k in 0..4 {
            if node.nbr[k] != NO_NEIGHBOR {
                s += node.coef[k] * u[node.nbr[k]];
            }
        }
        s / node.diag
    };
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    while sweeps < options.max_sweeps {
        for i in 0..count {
            let target = relax(&u, &nodes[i]);
            u[i] += omega * (target - u[i]);
        }
        sweeps += 1;
        if sweeps % 10 == 0 {
            residual = nodes.iter().enumerate().map(|(i, nd)| (relax(&u, nd) - u[i]).abs()).fold(0.0, f64::max);
            if residual < options.tolerance {
                break;
            }
        }
    }
    if residual >= options.tolerance {
        return Err(PotentialError::Grid(format!("no convergence after {sweeps} sweeps, residual {residual:e}")));
    }
    Ok(GridSolution { log_radius: u[index[zy * nx + zx]], sweeps, residual })
}
