//! Streaming first and second moments of vector-valued per-walk samples.

/// Running mean and co-moment matrix of `dim`-dimensional samples.
///
/// Merging follows the pairwise update of Chan et al., so a fixed merge order
/// gives bitwise-reproducible results.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    n: u64,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl Moments {
    pub fn new(dim: usize) -> Self {
        Moments { n: 0, mean: vec![0.0; dim], comoment: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn push(&mut self, x: &[f64]) {
        let d = self.dim();
        debug_assert_eq!(x.len(), d);
        self.n += 1;
        let inv = 1.0 / self.n as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * inv;
        }
        for i in 0..d {
            if delta[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                self.comoment[i * d + j] += delta[i] * (x[j] - self.mean[j]);
            }
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        assert_eq!(self.dim(), other.dim());
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let d = self.dim();
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let n = n1 + n2;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for i in 0..d {
            for j in 0..d {
                self.comoment[i * d + j] += other.comoment[i * d + j] + delta[i] * delta[j] * n1 * n2 / n;
            }
        }
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * n2 / n;
        }
        self.n += other.n;
    }

    /// Sample covariance entry.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.comoment[i * self.dim() + j] / (self.n - 1) as f64
    }

    /// Mean and standard error of the linear functional `x -> w · x`.
    pub fn linear(&self, w: &[f64]) -> (f64, f64) {
        let d = self.dim();
        assert_eq!(w.len(), d);
        let mean = w.iter().zip(&self.mean).map(|(a, b)| a * b).sum();
        if self.n < 2 {
            return (mean, 0.0);
        }
        let mut q = 0.0;
        for i in 0..d {
            if w[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                q += w[i] * w[j] * self.comoment[i * d + j];
            }
        }
        let var = (q / (self.n - 1) as f64).max(0.0);
        (mean, (var / self.n as f64).sqrt())
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_moments(m: &Moments, component: usize, seed: u64) -> Self {
        let mut w = vec![0.0; m.dim()];
        w[component] = 1.0;
        let (mean, stderr) = m.linear(&w);
        Estimate { mean, stderr, n_samples: m.count(), seed }
    }
}
