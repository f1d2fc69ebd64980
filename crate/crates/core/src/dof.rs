//! Spatial degrees of freedom, effective rank and baseband deployment arithmetic.

use std::f64::consts::PI;

use crate::error::{contract, domain, Result};
use crate::numerics::hermitian_eig;
use crate::{CMat, SPEED_OF_LIGHT};

/// DoF of a line segment of length `l`: `2L/λ`.
pub fn dof_1d(l: f64, wavelength: f64) -> f64 {
    2.0 * l / wavelength
}

/// DoF of an `L_x × L_y` rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarDof {
    /// `πL_xL_y/λ²`.
    pub eta: f64,
    /// Separable over-count `4L_xL_y/λ²`.
    pub separable: f64,
    /// `eta / separable = π/4`.
    pub ratio: f64,
}

pub fn dof_2d(lx: f64, ly: f64, wavelength: f64) -> PlanarDof {
    let area = lx * ly / (wavelength * wavelength);
    PlanarDof {
        eta: PI * area,
        separable: 4.0 * area,
        ratio: PI / 4.0,
    }
}

/// Smallest `k` whose top-`k` values hold at least `capture` of the total.
///
/// The spectrum is sorted descending internally.
pub fn effective_rank(spectrum: &[f64], capture: f64) -> Result<usize> {
    if spectrum.is_empty() {
        return contract("effective_rank: empty spectrum");
    }
    if !(capture > 0.0 && capture <= 1.0) {
        return contract(format!("effective_rank: capture fraction {capture} outside (0, 1]"));
    }
    let mut s: Vec<f64> = spectrum.iter().map(|v| v.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = s.iter().sum();
    if total == 0.0 {
        return Ok(0);
    }
    let target = capture * total;
    let mut acc = 0.0;
    for (i, v) in s.iter().enumerate() {
        acc += v;
        // guard against round-off when capture = 1
        if acc >= target * (1.0 - 1e-12) {
            return Ok(i + 1);
        }
    }
    Ok(s.len())
}

/// Eigen-spectrum summary of a correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DofReport {
    pub eta: f64,
    /// Eigenvalues descending, normalized so the largest is 1.
    pub eigen_spectrum: Vec<f64>,
    pub effective_rank: usize,
    pub capture_fraction: f64,
}

pub fn dof_report(r: &CMat, eta: f64, capture: f64) -> Result<DofReport> {
    let (vals, _) = hermitian_eig(r)?;
    let rank = effective_rank(&vals, capture)?;
    let top = vals.first().copied().unwrap_or(0.0);
    let eigen_spectrum = if top > 0.0 {
        vals.iter().map(|v| v / top).collect()
    } else {
        vals
    };
    Ok(DofReport {
        eta,
        eigen_spectrum,
        effective_rank: rank,
        capture_fraction: capture,
    })
}

/// Baseband data rate `A·B·b·f_c²·π/c²` in bit/s for aperture `A` (m²),
/// bandwidth `B` (Hz), `b` bits per sample and carrier `f_c` (Hz).
pub fn bbu_rate(area: f64, bandwidth: f64, bits: f64, carrier: f64) -> f64 {
    area * bandwidth * bits * carrier * carrier * PI / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// Active RF chains `A·τ·μ` for deployed area `A`, active fraction `τ` and
/// chain density `μ` per m².
pub fn active_rf_chains(area: f64, fraction: f64, density: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fraction) {
        return domain(format!("active fraction {fraction} outside [0, 1]"));
    }
    if area < 0.0 || density < 0.0 {
        return domain("area and density must be nonnegative");
    }
    Ok(area * fraction * density)
}
