//! Walk-on-spheres sampling of Brownian exit positions.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::stats::Moments;
use super::PotentialError;
use crate::geometry::{Domain, Point, Region};

/// Walks are grouped into shards of this many consecutive walk indices.
pub const SHARD_SIZE: u64 = 1024;

/// `base ∖ obstacle`.
#[derive(Debug, Clone)]
pub struct WalkDomain {
    pub base: Domain,
    pub obstacle: Region,
}

impl WalkDomain {
    pub fn new(base: Domain, obstacle: Region) -> Result<Self, PotentialError> {
        if base == Domain::UpperHalfPlane && !obstacle.is_bounded() {
            return Err(PotentialError::InvalidDomain("half-plane obstacles must be bounded".into()));
        }
        Ok(WalkDomain { base, obstacle })
    }

    pub fn unobstructed(base: Domain) -> Self {
        WalkDomain { base, obstacle: Region::empty() }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.base.contains(p) && !self.obstacle.contains(p)
    }

    /// Distance from `p` to the boundary of the walk domain.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        let db = self.base.boundary_distance(p);
        match self.obstacle.nearest_within(p, db) {
            Some((_, d)) => d,
            None => db,
        }
    }

    /// Length scale used for default tolerances.
    pub fn scale(&self) -> f64 {
        match self.base {
            Domain::UnitDisk => 1.0,
            Domain::UpperHalfPlane => {
                let s = self.obstacle.scale();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            }
        }
    }

    /// Default termination shell `1e-4 × scale`.
    pub fn default_eps(&self) -> f64 {
        1e-4 * self.scale()
    }

    /// Largest sphere radius allowed at `p`.
    fn radius_cap(&self, p: Point) -> f64 {
        match self.base {
            Domain::UnitDisk => f64::INFINITY,
            Domain::UpperHalfPlane => 64.0 * (self.obstacle.scale() + p.norm()),
        }
    }
}

/// Knobs of a single walk.
#[derive(Debug, Clone, Copy)]
pub struct WalkParams {
    pub eps: f64,
    pub max_steps: u64,
    /// Jump exactly to the line above the obstacle in half-plane walks.
    pub fast_exit: bool,
}

impl WalkParams {
    pub fn new(eps: f64) -> Self {
        WalkParams { eps, max_steps: 1_000_000, fast_exit: false }
    }

    pub fn with_fast_exit(mut self, on: bool) -> Self {
        self.fast_exit = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitPart {
    BaseBoundary,
    Obstacle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitSample {
    pub position: Point,
    pub steps: u64,
    pub terminated_on: HitPart,
}

/// Random stream of walk number `index`; identical across domains so that
/// estimates sharing a seed are coupled.
pub fn walk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs one walk from `start` until it is within `params.eps` of the boundary.
pub fn wos_exit_sample<R: Rng + ?Sized>(
    domain: &WalkDomain,
    start: Point,
    params: &WalkParams,
    rng: &mut R,
) -> Result<ExitSample, PotentialError> {
    if !domain.contains(start) {
        return Err(PotentialError::StartOutside(start));
    }
    let shortcut_line = if params.fast_exit && domain.base == Domain::UpperHalfPlane {
        Some(domain.obstacle.sup_im().unwrap_or(0.0).max(0.0))
    } else {
        None
    };
    let mut p = start;
    let mut steps = 0u64;
    loop {
        let db = domain.base.boundary_distance(p);
        let (d, hit) = match domain.obstacle.nearest_within(p, db) {
            Some((q, d)) => (d, Some(q)),
            None => (db, None),
        };
        if d <= params.eps {
            return Ok(match hit {
                Some(q) => ExitSample { position: q, steps, terminated_on: HitPart::Obstacle },
                None => ExitSample {
                    position: domain.base.project_to_boundary(p),
                    steps,
                    terminated_on: HitPart::BaseBoundary,
                },
            });
        }
        if steps >= params.max_steps {
            return Err(PotentialError::StepLimit(params.max_steps));
        }
        if let Some(line) = shortcut_line {
            if p.im > 2.0 * line && (line > 0.0 || domain.obstacle.is_empty()) {
                // Exact first hitting point of the line Im z = line: Cauchy law.
                let u: f64 = rng.gen();
                let x = p.re + (p.im - line) * (PI * (u - 0.5)).tan();
                p = Complex64::new(x, line);
                steps += 1;
                continue;
            }
        }
        let r = d.min(domain.radius_cap(p));
        let angle = rng.gen::<f64>() * TAU;
        p += Complex64::from_polar(r, angle);
        steps += 1;
    }
}

/// Runs walks `0..n` in shards of [`SHARD_SIZE`], each walk writing `dim`
/// observables; shard moments are merged in shard order.
pub fn run_sharded<F>(n: u64, dim: usize, f: F) -> Result<Moments, PotentialError>
where
    F: Fn(u64, &mut [f64]) -> Result<(), PotentialError> + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    let parts: Vec<Result<Moments, PotentialError>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut m = Moments::new(dim);
            let mut buf = vec![0.0; dim];
            let end = ((s + 1) * SHARD_SIZE).min(n);
            for i in s * SHARD_SIZE..end {
                buf.iter_mut().for_each(|v| *v = 0.0);
                f(i, &mut buf)?;
                m.push(&buf);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::new(dim);
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn disk_exit_from_center_is_uniform() {
        let w = WalkDomain::unobstructed(Domain::UnitDisk);
        let params = WalkParams::new(1e-4);
        let bins = 32;
        let mut counts = vec![0u64; bins];
        let n = 100_000;
        for i in 0..n {
            let mut rng = walk_rng(11, i);
            let s = wos_exit_sample(&w, c(0.0, 0.0), &params, &mut rng).unwrap();
            assert!((s.position.norm() - 1.0).abs() < 1e-12);
            assert_eq!(s.terminated_on, HitPart::BaseBoundary);
            let a = s.position.arg().rem_euclid(TAU);
            counts[((a / TAU * bins as f64) as usize).min(bins - 1)] += 1;
        }
        let expected = n as f64 / bins as f64;
        let chi2: f64 = counts.iter().map(|&k| (k as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(chi2);
        assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
    }

    fn cauchy_ks(fast_exit: bool) -> f64 {
        let w = WalkDomain::unobstructed(Domain::UpperHalfPlane);
        let params = WalkParams::new(1e-4).with_fast_exit(fast_exit);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = walk_rng(5, i);
                let s = wos_exit_sample(&w, c(0.0, 1.0), &params, &mut rng).unwrap();
                assert_eq!(s.position.im, 0.0);
                s.position.re
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let cdf = |x: f64| 0.5 + x.atan() / PI;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn half_plane_exit_from_i_is_cauchy() {
        let ks = cauchy_ks(false);
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn fast_exit_is_exact_without_obstacle() {
        let ks = cauchy_ks(true);
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn start_inside_shell_terminates_immediately() {
        let obstacle = Region::disk(c(0.0, 0.0), 0.5).unwrap();
        let w = WalkDomain::new(Domain::UnitDisk, obstacle).unwrap();
        let mut rng = walk_rng(1, 0);
        let s = wos_exit_sample(&w, c(0.50005, 0.0), &WalkParams::new(1e-4), &mut rng).unwrap();
        assert_eq!(s.steps, 0);
        assert_eq!(s.terminated_on, HitPart::Obstacle);
        assert!((s.position - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn start_outside_is_rejected() {
        let w = WalkDomain::unobstructed(Domain::UnitDisk);
        let mut rng = walk_rng(1, 0);
        assert!(matches!(
            wos_exit_sample(&w, c(2.0, 0.0), &WalkParams::new(1e-4), &mut rng),
            Err(PotentialError::StartOutside(_))
        ));
    }

    #[test]
    fn step_limit_is_reported() {
        let w = WalkDomain::unobstructed(Domain::UnitDisk);
        let params = WalkParams { eps: 1e-300, max_steps: 5, fast_exit: false };
        let mut rng = walk_rng(1, 0);
        assert!(matches!(wos_exit_sample(&w, c(0.5, 0.0), &params, &mut rng), Err(PotentialError::StepLimit(5))));
    }

    #[test]
    fn exit_positions_lie_within_the_shell() {
        let obstacle = Region::segment(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        let w = WalkDomain::new(Domain::UpperHalfPlane, obstacle.clone()).unwrap();
        let eps = 1e-4;
        for i in 0..2000 {
            let mut rng = walk_rng(3, i);
            let s = wos_exit_sample(&w, c(0.3, 2.0), &WalkParams::new(eps), &mut rng).unwrap();
            match s.terminated_on {
                HitPart::BaseBoundary => assert_eq!(s.position.im, 0.0),
                HitPart::Obstacle => assert!(obstacle.distance(s.position).unwrap() < 1e-12),
            }
        }
    }

    #[test]
    fn sharded_moments_do_not_depend_on_thread_count() {
        let w = WalkDomain::unobstructed(Domain::UnitDisk);
        let params = WalkParams::new(1e-4);
        let job = || {
            run_sharded(5000, 1, |i, out| {
                let mut rng = walk_rng(9, i);
                out[0] = wos_exit_sample(&w, c(0.3, 0.1), &params, &mut rng)?.position.re;
                Ok(())
            })
            .unwrap()
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(job);
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(job);
        assert_eq!(one, three);
    }
}
