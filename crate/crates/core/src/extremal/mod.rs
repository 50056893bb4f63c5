//! Extremal self-maps of the unit disk fixing `z = 1`: evaluation, third-order
//! boundary jets, the Schwarzian at 1 and the lower bound it obeys.

pub mod series;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::capacity::CapacityEstimate;
use crate::geometry::{Point, Region};
use series::Series;

/// Series length used for jets (coefficients through `s^6`).
const SERIES_LEN: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("{0} is not in the open unit disk")]
    OutsideDisk(Point),
    #[error("invalid map parameter: {0}")]
    InvalidParameter(String),
    #[error("no root in the unit disk at z = {0}")]
    BranchFailure(Point),
    #[error("a1 = 0")]
    ZeroA1,
    #[error("ill-conditioned jet fit: {0}")]
    IllConditioned(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    /// `f_α` onto `U ∖ E` with `E = {z ∈ Ū : |arg z| ≥ α/2}`, `α ∈ (0, 2π]`.
    Sector { alpha: f64 },
    /// Pick map onto `U ∖ [-1, -ρ]`, `ρ ∈ (0, 1)`.
    Pick { rho: f64 },
    /// Map onto `U` minus the slits `[it, i]` and `[-i, -it]`, `t ∈ (0, 1)`.
    TwoSlit { t: f64 },
}

impl MapSpec {
    pub fn validate(&self) -> Result<(), ExtremalError> {
        let ok = match *self {
            MapSpec::Sector { alpha } => alpha > 0.0 && alpha <= 2.0 * PI,
            MapSpec::Pick { rho } => rho > 0.0 && rho < 1.0,
            MapSpec::TwoSlit { t } => t > 0.0 && t < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(ExtremalError::InvalidParameter(format!("{self:?}")))
        }
    }

    /// The set omitted by the map, clipped to a neighborhood of `Ū`.
    pub fn omitted_set(&self) -> Region {
        match *self {
            MapSpec::Sector { alpha } => {
                let m = 32;
                let span = 2.0 * PI - alpha;
                let mut v = vec![Complex64::new(0.0, 0.0)];
                v.extend((0..=m).map(|j| Complex64::from_polar(2.0, alpha / 2.0 + span * j as f64 / m as f64)));
                if span == 0.0 {
                    Region::segment(Complex64::new(-2.0, 0.0), Complex64::new(0.0, 0.0))
                } else {
                    Region::polygon(v)
                }
            }
            MapSpec::Pick { rho } => Region::segment(Complex64::new(-1.0, 0.0), Complex64::new(-rho, 0.0)),
            MapSpec::TwoSlit { t } => Region::segment(Complex64::new(0.0, t), Complex64::new(0.0, 1.0))
                .map(|a| a.union(&Region::segment(Complex64::new(0.0, -1.0), Complex64::new(0.0, -t)).unwrap())),
        }
        .expect("catalog sets are valid")
    }

    /// Stated upper bound for `Re S_f(1) / f'(1)²` over maps whose image
    /// obeys the family's geometric constraint. For the sector family the
    /// extremal map attains it only at `α = π` and `α = 2π`; see
    /// [`MapSpec::exact_schwarzian_ratio`].
    pub fn schwarzian_bound(&self) -> f64 {
        match *self {
            MapSpec::Sector { alpha } => -1.5 * PI * PI / (alpha * alpha) * ((alpha / PI - 1.0).powi(2) + 1.0),
            MapSpec::Pick { rho } => -0.75 * ((1.0 - rho) / (1.0 + rho)).powi(2),
            MapSpec::TwoSlit { t } => -1.5 * ((1.0 - t * t) / (1.0 + t * t)).powi(2),
        }
    }

    /// `Re S_f(1) / a1²` of the catalog map itself. With `p = α/π` the sector
    /// map gives `-(p² + 2)/(2p²)`.
    pub fn exact_schwarzian_ratio(&self) -> f64 {
        match *self {
            MapSpec::Sector { alpha } => {
                let p = alpha / PI;
                -(p * p + 2.0) / (2.0 * p * p)
            }
            _ => self.schwarzian_bound(),
        }
    }

    /// Relative capacity of [`MapSpec::omitted_set`], `-Re S_f(1) / (6 a1²)`
    /// by the equality case for maps onto `U ∖ E`.
    pub fn equality_relcap(&self) -> f64 {
        -self.exact_schwarzian_ratio() / 6.0
    }

    /// Distance from 1 to the nearest singularity of the map.
    fn convergence_radius(&self) -> f64 {
        match *self {
            MapSpec::Sector { .. } => 2f64.sqrt(),
            MapSpec::Pick { rho } => 4.0 * rho.sqrt() / (1.0 + rho),
            MapSpec::TwoSlit { t } => 2.0 * ((2.0 * t / (1.0 + t * t)).asin() / 2.0).sin(),
        }
    }
}

fn kappa(t: f64) -> f64 {
    2.0 * t / (1.0 + t * t)
}

fn pick_c(rho: f64) -> f64 {
    4.0 * rho / ((1.0 + rho) * (1.0 + rho))
}

/// The root of smaller modulus among `num / (b ± r)`.
fn small_root(num: Complex64, b: Complex64, r: Complex64, z: Point) -> Result<Complex64, ExtremalError> {
    let w1 = num / (b + r);
    let w2 = num / (b - r);
    let w = if w1.norm() <= w2.norm() { w1 } else { w2 };
    if w.is_finite() && w.norm() < 1.0 {
        Ok(w)
    } else {
        Err(ExtremalError::BranchFailure(z))
    }
}

pub fn evaluate_map(spec: &MapSpec, z: Point) -> Result<Point, ExtremalError> {
    spec.validate()?;
    if !(z.norm() < 1.0) {
        return Err(ExtremalError::OutsideDisk(z));
    }
    let one = Complex64::new(1.0, 0.0);
    match *spec {
        MapSpec::Sector { alpha } => {
            let inner = (z - 1.0 + (2.0 * z * z + 2.0).sqrt()) / (z + 1.0);
            Ok(inner.powf(alpha / PI))
        }
        MapSpec::Pick { rho } => {
            let k = pick_c(rho) * z / ((one - z) * (one - z));
            if k.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            // K w² - (2K + 1) w + K = 0.
            small_root(2.0 * k, 2.0 * k + 1.0, (4.0 * k + 1.0).sqrt(), z)
        }
        MapSpec::TwoSlit { t } => {
            let u0 = kappa(t) * z / (one - z * z);
            if u0.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            // U0 w² + w - U0 = 0.
            small_root(2.0 * u0, one, (one + 4.0 * u0 * u0).sqrt(), z)
        }
    }
}

/// Relative mismatch of the implicit equation at `(z, w)`; zero for the sector map.
pub fn defining_equation_residual(spec: &MapSpec, z: Point, w: Point) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let (lhs, rhs) = match *spec {
        MapSpec::Sector { .. } => return 0.0,
        MapSpec::Pick { rho } => (pick_c(rho) * z / ((one - z) * (one - z)), w / ((one - w) * (one - w))),
        MapSpec::TwoSlit { t } => (kappa(t) * z / (one - z * z), w / (one - w * w)),
    };
    (lhs - rhs).norm() / lhs.norm().max(1.0)
}

/// `f(z) = 1 + a1 (z-1) + a2 (z-1)² + a3 (z-1)³ + ...`, with the next
/// coefficient kept as a guard term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorJet {
    pub a1: f64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
}

impl TaylorJet {
    pub fn identity() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        TaylorJet { a1: 1.0, a2: zero, a3: zero, a4: zero }
    }

    pub fn coefficients(&self) -> [Complex64; 3] {
        [Complex64::new(self.a1, 0.0), self.a2, self.a3]
    }
}

/// Series of `f(1 + s)`.
fn map_series(spec: &MapSpec) -> Series {
    let n = SERIES_LEN;
    let s = Series::var(n);
    let one = Series::real(1.0, n);
    match *spec {
        MapSpec::Sector { alpha } => {
            let z = &one + &s;
            let root = (&(&z * &z).scale(Complex64::new(2.0, 0.0)) + &Series::real(2.0, n)).sqrt();
            let inner = (&s + &root).div(&(&z + &one));
            inner.powf(alpha / PI)
        }
        MapSpec::Pick { rho } => {
            // u / √(1 - u) = -s / √(c (1 + s)) with u = 1 - w.
            let g = &s * &(&one - &s).powf(-0.5);
            let h = (&s * &(&one + &s).powf(-0.5)).scale(Complex64::new(-1.0 / pick_c(rho).sqrt(), 0.0));
            let u = g.revert().compose(&h);
            &one - &u
        }
        MapSpec::TwoSlit { t } => {
            // v (2 - v) / (1 - v) = -s (2 + s) / (κ (1 + s)) with v = 1 - w.
            let two = Series::real(2.0, n);
            let g = (&s * &(&two - &s)).div(&(&one - &s));
            let h = (&s * &(&two + &s)).div(&(&one + &s)).scale(Complex64::new(-1.0 / kappa(t), 0.0));
            let v = g.revert().compose(&h);
            &one - &v
        }
    }
}

pub fn analytic_jet(spec: &MapSpec) -> Result<TaylorJet, ExtremalError> {
    spec.validate()?;
    let f = map_series(spec);
    Ok(TaylorJet { a1: f.coeff(1).re, a2: f.coeff(2), a3: f.coeff(3), a4: f.coeff(4) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericJet {
    pub jet: TaylorJet,
    /// Error estimates for `a1, a2, a3` from comparing fit degrees.
    pub errors: [f64; 3],
}

/// Radial sample points `s` (decreasing) suited to `spec`.
pub fn default_steps(spec: &MapSpec) -> Vec<f64> {
    let s_max = (0.25 * spec.convergence_radius()).min(0.5);
    let m = 48;
    (0..m).map(|j| s_max * 0.5 * (1.0 + (PI * (j as f64 + 0.5) / m as f64).cos())).collect()
}

fn fit_radial(steps: &[f64], values: &[f64], degree: usize, scale: f64) -> Result<Vec<f64>, ExtremalError> {
    let a = DMatrix::from_fn(steps.len(), degree + 1, |i, j| (steps[i] / scale).powi(j as i32));
    let b = DVector::from_column_slice(values);
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !cond.is_finite() || cond > 1e13 {
        return Err(ExtremalError::IllConditioned(format!("condition number {cond:e}")));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| ExtremalError::IllConditioned(e.to_string()))?;
    Ok((0..=degree).map(|k| x[k] / scale.powi(k as i32)).collect())
}

/// Fits the jet from `f(1 - s)` at the given radial steps by least squares,
/// staying on the perpendicular radius.
pub fn numeric_jet(spec: &MapSpec, steps: &[f64]) -> Result<NumericJet, ExtremalError> {
    spec.validate()?;
    const DEGREE: usize = 12;
    if steps.len() < DEGREE + 4 {
        return Err(ExtremalError::IllConditioned(format!("need at least {} steps, got {}", DEGREE + 4, steps.len())));
    }
    if steps.windows(2).any(|w| !(w[1] < w[0])) || steps.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(ExtremalError::IllConditioned("steps must be strictly decreasing in (0, 1)".into()));
    }
    let values: Vec<f64> =
        steps.iter().map(|&s| evaluate_map(spec, Complex64::new(1.0 - s, 0.0)).map(|w| w.re)).collect::<Result<_, _>>()?;
    let scale = steps[0];
    let hi = fit_radial(steps, &values, DEGREE, scale)?;
    let lo = fit_radial(steps, &values, DEGREE - 2, scale)?;
    // f(1 - s) = Σ b_k s^k, so a_k = (-1)^k b_k.
    let a = |k: usize, b: &[f64]| if k % 2 == 0 { b[k] } else { -b[k] };
    let errors = [1, 2, 3].map(|k| (a(k, &hi) - a(k, &lo)).abs());
    Ok(NumericJet {
        jet: TaylorJet {
            a1: a(1, &hi),
            a2: Complex64::new(a(2, &hi), 0.0),
            a3: Complex64::new(a(3, &hi), 0.0),
            a4: Complex64::new(a(4, &hi), 0.0),
        },
        errors,
    })
}

/// `S_f(1) = 6 (a3/a1 - a2²/a1²)`.
pub fn schwarzian_at_one(jet: &TaylorJet) -> Result<Complex64, ExtremalError> {
    if jet.a1 == 0.0 {
        return Err(ExtremalError::ZeroA1);
    }
    Ok(6.0 * (jet.a3 / jet.a1 - jet.a2 * jet.a2 / (jet.a1 * jet.a1)))
}

/// `Re(2 a2 + a1 (1 - a1))`, zero for the normalized class.
pub fn class_b_residual(jet: &TaylorJet) -> f64 {
    (2.0 * jet.a2).re + jet.a1 * (1.0 - jet.a1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// `a1²` times the capacity standard error.
    pub stderr: f64,
    pub pass: bool,
    pub equality: bool,
}

/// Checks `-Re(a3/a1 - a2²/a1²) >= a1² relcap E`. Equality is reported when
/// `|slack| <= max(rel_tol · lhs, 3 stderr)`.
pub fn schwarzian_bound_check(
    jet: &TaylorJet,
    relcap_e: &CapacityEstimate,
    rel_tol: f64,
) -> Result<BoundReport, ExtremalError> {
    let lhs = -schwarzian_at_one(jet)?.re / 6.0;
    let a1sq = jet.a1 * jet.a1;
    let rhs = a1sq * relcap_e.value;
    let slack = lhs - rhs;
    let stderr = a1sq * relcap_e.stderr;
    let equality = slack.abs() <= (rel_tol * lhs.abs()).max(3.0 * stderr);
    Ok(BoundReport {
        lhs,
        rhs,
        slack,
        stderr,
        pass: slack >= -3.0 * stderr || equality,
        equality,
    })
}
