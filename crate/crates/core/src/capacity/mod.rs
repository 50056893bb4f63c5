//! Relative capacity at `z0 = 1` in the unit disk, half-plane capacity at
//! infinity, and the maps that move capacities between the two settings.

mod bridge;
mod hcap;
mod relcap;

pub use bridge::{disk_to_halfplane_image, mobius_t, HalfPlaneImage, DEFAULT_CHORDS};
pub use hcap::{hcap_estimate, hcap_heights_floor};
pub use relcap::{extrapolation_weights, relcap_estimate, relcap_ladder, RelcapLadder};

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{BoundaryPoint, Domain, GeometryError, Region};
use crate::potential::PotentialError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CapacityError {
    #[error("heights must all exceed {floor}, got {got}")]
    HeightsTooLow { floor: f64, got: f64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("approach path meets E: distance from z0 to E is {distance}, first offset is {offset}")]
    PathIntersectsSet { distance: f64, offset: f64 },
    #[error("invalid approach path: {0}")]
    InvalidPath(String),
    #[error("E must be bounded and meet the closed upper half-plane")]
    NotInHalfPlane,
    #[error("zero scale factor in Möbius transport")]
    ZeroScale,
    #[error("E touches the pole z = 1 of the disk-to-half-plane map")]
    TouchesPole,
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Wos,
    Grid,
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub fit_residual: f64,
    /// Approach parameters of the rungs or heights that entered the fit, decreasing.
    pub offsets_used: Vec<f64>,
    pub method: EstimateMethod,
    /// Per-rung values (`c_k` for relcap, `Y·m(Y)` for hcap).
    pub rung_values: Vec<f64>,
    /// Set when the value is negative beyond noise or the rungs drift beyond noise.
    pub flagged: bool,
}

impl CapacityEstimate {
    pub fn analytic(value: f64) -> Self {
        CapacityEstimate {
            value,
            stderr: 0.0,
            fit_residual: 0.0,
            offsets_used: Vec::new(),
            method: EstimateMethod::Analytic,
            rung_values: Vec::new(),
            flagged: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// `x = 1 - δ` along the real axis toward `z0 = 1`.
    DiskRealAxis,
    /// `z = i/δ` along the imaginary axis toward infinity.
    HalfPlaneImaginaryAxis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproachPath {
    pub kind: PathKind,
    pub offsets: Vec<f64>,
}

impl ApproachPath {
    /// `δ_k = δ₀ q^k` for `k < rungs`.
    pub fn geometric(kind: PathKind, delta0: f64, q: f64, rungs: usize) -> Result<Self, CapacityError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(CapacityError::InvalidPath(format!("ratio q = {q} must lie in (0, 1)")));
        }
        if !(delta0 > 0.0 && delta0.is_finite()) || rungs == 0 {
            return Err(CapacityError::InvalidPath("need δ₀ > 0 and at least one rung".into()));
        }
        if kind == PathKind::DiskRealAxis && delta0 >= 1.0 {
            return Err(CapacityError::InvalidPath(format!("δ₀ = {delta0} leaves the disk")));
        }
        let offsets = (0..rungs).map(|k| delta0 * q.powi(k as i32)).collect();
        Ok(ApproachPath { kind, offsets })
    }

    /// `δ₀ = min(0.1, dist(1, E)/2)`, `q = 1/2`, five rungs, using the
    /// smallest distance over all `sets`.
    pub fn disk_default(sets: &[&Region]) -> Result<Self, CapacityError> {
        let one = Complex64::new(1.0, 0.0);
        let mut dist = f64::INFINITY;
        for e in sets {
            if !e.is_empty() {
                dist = dist.min(e.distance(one)?);
            }
        }
        if dist <= 0.0 {
            return Err(CapacityError::PathIntersectsSet { distance: dist, offset: 0.0 });
        }
        ApproachPath::geometric(PathKind::DiskRealAxis, (0.5 * dist).min(0.1), 0.5, 5)
    }

    pub fn smallest_offset(&self) -> f64 {
        self.offsets.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn check_disk_path(&self, sets: &[&Region]) -> Result<(), CapacityError> {
        if self.kind != PathKind::DiskRealAxis {
            return Err(CapacityError::InvalidPath("relcap needs the real-axis approach to z0 = 1".into()));
        }
        if self.offsets.is_empty() || self.offsets.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(CapacityError::InvalidPath("offsets must be nonempty and strictly decreasing".into()));
        }
        let delta0 = self.offsets[0];
        for e in sets {
            let z0 = BoundaryPoint::disk_one();
            // A touching point at exactly δ₀ would be a start on E.
            if !crate::geometry::inner_distance_positive(e, Domain::UnitDisk, &z0, delta0 * (1.0 + 1e-12)) {
                let distance = e.distance(Complex64::new(1.0, 0.0)).unwrap_or(0.0);
                return Err(CapacityError::PathIntersectsSet { distance, offset: delta0 });
            }
        }
        Ok(())
    }
}

/// How a conformal map rescales capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransportRule {
    /// `f(z) = a z + b + O(1/z)` at infinity: capacity times `|a|²`.
    InfinityScaling(Complex64),
    /// Finite boundary point: capacity divided by `|f'(z0)|²`.
    FiniteDerivative(Complex64),
}

pub fn mobius_transport(c: &CapacityEstimate, rule: TransportRule) -> Result<CapacityEstimate, CapacityError> {
    let factor = match rule {
        TransportRule::InfinityScaling(a) => {
            if a.norm() == 0.0 {
                return Err(CapacityError::ZeroScale);
            }
            a.norm_sqr()
        }
        TransportRule::FiniteDerivative(d) => {
            if d.norm() == 0.0 {
                return Err(CapacityError::ZeroScale);
            }
            1.0 / d.norm_sqr()
        }
    };
    let mut out = c.clone();
    out.value *= factor;
    out.stderr *= factor;
    out.fit_residual *= factor;
    out.rung_values.iter_mut().for_each(|v| *v *= factor);
    Ok(out)
}
