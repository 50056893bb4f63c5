//! Brownian exit statistics by walk-on-spheres, with a finite-difference
//! oracle for the inner radius.

mod grid;
mod stats;
mod walk;

pub use grid::{aligned_domain_mask, grid_green_regular_part, GridOptions, GridSolution};
pub use stats::{Estimate, Moments};
pub use walk::{run_sharded, walk_rng, wos_exit_sample, ExitSample, HitPart, WalkDomain, WalkParams, SHARD_SIZE};

use thiserror::Error;

use crate::geometry::{Domain, GeometryError, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("walk exceeded {0} steps")]
    StepLimit(u64),
    #[error("start point {0} is not in the walk domain")]
    StartOutside(Point),
    #[error("invalid walk domain: {0}")]
    InvalidDomain(String),
    #[error("grid solver: {0}")]
    Grid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Independent child seed number `k` of `seed` (one SplitMix64 output).
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Floor applied to `|exit - z|` before taking the logarithm.
pub const LOG_CLAMP: f64 = 1e-12;

/// `E^{start}[Im B_τ]` in a half-plane walk domain; base-boundary exits contribute 0.
pub fn expected_im_exit(
    domain: &WalkDomain,
    start: Point,
    n: u64,
    seed: u64,
    params: &WalkParams,
) -> Result<Estimate, PotentialError> {
    if domain.base != Domain::UpperHalfPlane {
        return Err(PotentialError::InvalidDomain("expected_im_exit needs the upper half-plane".into()));
    }
    let m = run_sharded(n, 1, |i, out| {
        let mut rng = walk_rng(seed, i);
        let s = wos_exit_sample(domain, start, params, &mut rng)?;
        out[0] = match s.terminated_on {
            HitPart::Obstacle => s.position.im.max(0.0),
            HitPart::BaseBoundary => 0.0,
        };
        Ok(())
    })?;
    Ok(Estimate::from_moments(&m, 0, seed))
}

/// Monte Carlo estimate of `log r(G, z) = E^z[log |B_τ - z|]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerRadius {
    pub log_radius: Estimate,
    /// Walks whose exit distance hit [`LOG_CLAMP`].
    pub clamped: u64,
}

impl InnerRadius {
    pub fn radius(&self) -> f64 {
        self.log_radius.mean.exp()
    }

    /// Delta-method standard error of [`InnerRadius::radius`].
    pub fn radius_stderr(&self) -> f64 {
        self.radius() * self.log_radius.stderr
    }
}

pub fn inner_radius(
    domain: &WalkDomain,
    z: Point,
    n: u64,
    seed: u64,
    params: &WalkParams,
) -> Result<InnerRadius, PotentialError> {
    let m = run_sharded(n, 2, |i, out| {
        let mut rng = walk_rng(seed, i);
        let s = wos_exit_sample(domain, z, params, &mut rng)?;
        let d = (s.position - z).norm();
        if d < LOG_CLAMP {
            out[0] = LOG_CLAMP.ln();
            out[1] = 1.0;
        } else {
            out[0] = d.ln();
        }
        Ok(())
    })?;
    let clamped = (m.mean()[1] * m.count() as f64).round() as u64;
    Ok(InnerRadius { log_radius: Estimate::from_moments(&m, 0, seed), clamped })
}
