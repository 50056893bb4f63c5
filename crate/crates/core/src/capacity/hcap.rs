use num_complex::Complex64;

use super::{CapacityError, CapacityEstimate, EstimateMethod};
use crate::geometry::{Domain, Region};
use crate::potential::{derive_seed, expected_im_exit, WalkDomain, WalkParams};

/// Heights must exceed twice the top of `E`.
pub fn hcap_heights_floor(e: &Region) -> f64 {
    2.0 * e.sup_im().unwrap_or(0.0).max(0.0)
}

/// `E` stands for `E ∩ H`.
///
/// Fits `m(Y) = h/Y (+ b/Y²)` to walk estimates of `m(Y) = E^{iY}[Im B_τ]`.
///
/// Height `j` uses the child seed `derive_seed(seed, j)`. The `1/Y²` term is
/// included when at least three heights are given.
pub fn hcap_estimate(
    e: &Region,
    heights: &[f64],
    n: u64,
    seed: u64,
    params: &WalkParams,
) -> Result<CapacityEstimate, CapacityError> {
    // Only E ∩ H is visible to walks in H, so parts below the axis are allowed.
    if !e.is_empty() && e.bbox().is_none_or(|b| b.y1 < 0.0) {
        return Err(CapacityError::NotInHalfPlane);
    }
    if heights.len() < 2 {
        return Err(CapacityError::DegenerateFit(format!("need at least two heights, got {}", heights.len())));
    }
    let floor = hcap_heights_floor(e);
    for &y in heights {
        if !(y > floor) || !y.is_finite() {
            return Err(CapacityError::HeightsTooLow { floor, got: y });
        }
    }
    let mut order: Vec<usize> = (0..heights.len()).collect();
    order.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]));
    if order.windows(2).any(|w| heights[w[0]] == heights[w[1]]) {
        return Err(CapacityError::DegenerateFit("heights must be distinct".into()));
    }

    let domain = WalkDomain::new(Domain::UpperHalfPlane, e.clone())?;
    let mut means = Vec::with_capacity(heights.len());
    let mut ses = Vec::with_capacity(heights.len());
    for (j, &y) in heights.iter().enumerate() {
        if e.is_empty() {
            means.push(0.0);
            ses.push(0.0);
            continue;
        }
        let est = expected_im_exit(&domain, Complex64::new(0.0, y), n, derive_seed(seed, j as u64), params)?;
        means.push(est.mean);
        ses.push(est.stderr);
    }

    let with_nuisance = heights.len() >= 3;
    let p = if with_nuisance { 2 } else { 1 };
    let uniform = ses.iter().any(|&s| s <= 0.0);
    let w: Vec<f64> = ses.iter().map(|&s| if uniform { 1.0 } else { 1.0 / (s * s) }).collect();
    let rows: Vec<[f64; 2]> = heights.iter().map(|&y| [1.0 / y, 1.0 / (y * y)]).collect();

    let mut a = [[0.0; 2]; 2];
    for (r, &wj) in rows.iter().zip(&w) {
        for i in 0..p {
            for k in 0..p {
                a[i][k] += wj * r[i] * r[k];
            }
        }
    }
    // First row of (XᵀWX)⁻¹.
    let inv0: [f64; 2] = if p == 1 {
        [1.0 / a[0][0], 0.0]
    } else {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() <= 1e-300 {
            return Err(CapacityError::DegenerateFit("singular normal equations".into()));
        }
        [a[1][1] / det, -a[0][1] / det]
    };
    // value = Σ_j λ_j m_j with λ_j = w_j (inv0 · x_j).
    let lambda: Vec<f64> =
        rows.iter().zip(&w).map(|(r, &wj)| wj * (inv0[0] * r[0] + inv0[1] * r[1] * (p as f64 - 1.0))).collect();
    let value: f64 = lambda.iter().zip(&means).map(|(l, m)| l * m).sum();
    let stderr = lambda.iter().zip(&ses).map(|(l, s)| (l * s).powi(2)).sum::<f64>().sqrt();

    let beta1 = if p == 2 {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv1 = [-a[1][0] / det, a[0][0] / det];
        rows.iter().zip(&w).zip(&means).map(|((r, &wj), m)| wj * (inv1[0] * r[0] + inv1[1] * r[1]) * m).sum()
    } else {
        0.0
    };
    let dof = heights.len() - p;
    let fit_residual = if dof == 0 {
        0.0
    } else {
        let ss: f64 = rows
            .iter()
            .zip(&means)
            .zip(&w)
            .map(|((r, m), wj)| wj * (m - value * r[0] - beta1 * r[1]).powi(2))
            .sum();
        (ss / dof as f64).sqrt()
    };

    let mut offsets_used: Vec<f64> = heights.iter().map(|y| 1.0 / y).collect();
    offsets_used.sort_by(|a, b| b.total_cmp(a));
    let mut rung_values: Vec<(f64, f64)> = heights.iter().zip(&means).map(|(y, m)| (*y, y * m)).collect();
    rung_values.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(CapacityEstimate {
        value,
        stderr,
        fit_residual,
        offsets_used,
        method: EstimateMethod::Wos,
        rung_values: rung_values.into_iter().map(|(_, v)| v).collect(),
        flagged: value < -3.0 * stderr,
    })
}
