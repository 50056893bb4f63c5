use num_complex::Complex64;

use super::{ApproachPath, CapacityError, CapacityEstimate, EstimateMethod};
use crate::geometry::{Domain, Region};
use crate::potential::{run_sharded, walk_rng, wos_exit_sample, HitPart, Moments, WalkDomain, WalkParams};

/// Intercept weights of the least-squares line through `(δ_k, c_k)`.
pub fn extrapolation_weights(offsets: &[f64]) -> Vec<f64> {
    let k = offsets.len();
    if k == 1 {
        return vec![1.0];
    }
    let mean = offsets.iter().sum::<f64>() / k as f64;
    let sxx: f64 = offsets.iter().map(|d| (d - mean).powi(2)).sum();
    offsets.iter().map(|d| 1.0 / k as f64 - mean * (d - mean) / sxx).collect()
}

/// Jointly sampled ladders for several sets. Walk `i` uses the same random
/// stream at every rung and for every set, so differences of capacities
/// carry small coupled standard errors.
#[derive(Debug, Clone)]
pub struct RelcapLadder {
    offsets: Vec<f64>,
    weights: Vec<f64>,
    sets: usize,
    /// Per-walk `log r(U∖E, x_k) - log r(U, x_k)` contributions, indexed `set * K + k`.
    moments: Moments,
}

impl RelcapLadder {
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn samples(&self) -> u64 {
        self.moments.count()
    }

    fn rung(&self, set: usize, k: usize) -> (f64, f64) {
        let d = self.moments.mean()[set * self.offsets.len() + k];
        let delta = self.offsets[k];
        let c = -d.exp_m1() / (2.0 * delta * delta);
        let dc = -d.exp() / (2.0 * delta * delta);
        (c, dc)
    }

    /// Value and gradient (with respect to the mean vector) of `Σ coeffs_s c_s`.
    fn linear_gradient(&self, coeffs: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(coeffs.len(), self.sets);
        let kk = self.offsets.len();
        let mut grad = vec![0.0; self.sets * kk];
        let mut value = 0.0;
        for (s, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for k in 0..kk {
                let (c, dc) = self.rung(s, k);
                value += a * self.weights[k] * c;
                grad[s * kk + k] = a * self.weights[k] * dc;
            }
        }
        (value, grad)
    }

    /// `Σ coeffs_s relcap E_s` with its coupled delta-method standard error.
    pub fn combination(&self, coeffs: &[f64]) -> (f64, f64) {
        let (value, grad) = self.linear_gradient(coeffs);
        let (_, se) = self.moments.linear(&grad);
        (value, se)
    }

    pub fn estimate(&self, set: usize) -> CapacityEstimate {
        let mut coeffs = vec![0.0; self.sets];
        coeffs[set] = 1.0;
        let (value, stderr) = self.combination(&coeffs);
        let kk = self.offsets.len();
        let rung_values: Vec<f64> = (0..kk).map(|k| self.rung(set, k).0).collect();
        let rung_se: Vec<f64> = (0..kk)
            .map(|k| {
                let mut g = vec![0.0; self.sets * kk];
                g[set * kk + k] = self.rung(set, k).1;
                self.moments.linear(&g).1
            })
            .collect();
        let fit_residual = line_fit_residual(&self.offsets, &rung_values);
        let noise = rung_se.iter().copied().fold(0.0, f64::max);
        let drift = fit_residual > 5.0 * noise + 0.05 * value.abs() + 1e-12;
        CapacityEstimate {
            value,
            stderr,
            fit_residual,
            offsets_used: self.offsets.clone(),
            method: EstimateMethod::Wos,
            rung_values,
            flagged: drift || value < -3.0 * stderr,
        }
    }
}

fn line_fit_residual(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    if n < 3 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (ss / (n - 2) as f64).sqrt()
}

/// Samples the ladder of `path` for every set with `n` coupled walks per rung.
///
/// `eps` defaults to `1e-4` times the smallest offset.
pub fn relcap_ladder(
    sets: &[&Region],
    path: &ApproachPath,
    n: u64,
    eps: Option<f64>,
    seed: u64,
) -> Result<RelcapLadder, CapacityError> {
    path.check_disk_path(sets)?;
    if n < 2 {
        return Err(CapacityError::DegenerateFit("need at least two walks".into()));
    }
    let eps = eps.unwrap_or(1e-4 * path.smallest_offset());
    let params = WalkParams::new(eps);
    let domains: Vec<Option<WalkDomain>> = sets
        .iter()
        .map(|e| if e.is_empty() { Ok(None) } else { WalkDomain::new(Domain::UnitDisk, (*e).clone()).map(Some) })
        .collect::<Result<_, _>>()?;
    let kk = path.offsets.len();
    let moments = run_sharded(n, sets.len() * kk, |i, out| {
        for (s, dom) in domains.iter().enumerate() {
            let Some(dom) = dom else { continue };
            for (k, &delta) in path.offsets.iter().enumerate() {
                let x = 1.0 - delta;
                let mut rng = walk_rng(seed, i);
                let exit = wos_exit_sample(dom, Complex64::new(x, 0.0), &params, &mut rng)?;
                let zeta = exit.position;
                // ln|ζ - x| - ln|1 - xζ| vanishes on the unit circle.
                if exit.terminated_on == HitPart::Obstacle && zeta.norm() < 1.0 {
                    let v = (zeta - x).norm().ln() - (1.0 - zeta * x).norm().ln();
                    out[s * kk + k] = v.min(0.0);
                }
            }
        }
        Ok(())
    })?;
    Ok(RelcapLadder {
        weights: extrapolation_weights(&path.offsets),
        offsets: path.offsets.clone(),
        sets: sets.len(),
        moments,
    })
}

pub fn relcap_estimate(
    e: &Region,
    path: &ApproachPath,
    n: u64,
    eps: Option<f64>,
    seed: u64,
) -> Result<CapacityEstimate, CapacityError> {
    Ok(relcap_ladder(&[e], path, n, eps, seed)?.estimate(0))
}
