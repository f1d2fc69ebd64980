//! Impedance-based MIMO model: dipole mutual impedances, the unilateral
//! end-to-end channel, transmit power and receiver noise.
//!
//! Mutual impedances follow the `e^{-jωt}` time dependence of the source
//! operator, so the free-space Green's function is `e^{jκr}/(4πr)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{contract, singular, Result};
use crate::fields::angular_frequency;
use crate::geometry::{dist, ArrayGeometry};
use crate::numerics::{hermitian_eig, QuadratureGrid};
use crate::{CMat, BOLTZMANN, EPS0};

/// Green's function value with its first and second radial derivatives.
fn green_radial(r: f64, kappa: f64) -> (Complex64, Complex64, Complex64) {
    let j = Complex64::i();
    let g = Complex64::from_polar(1.0, kappa * r) / (4.0 * PI * r);
    let a = j * kappa - 1.0 / r;
    let g1 = g * a;
    let g2 = g * (a * a + 1.0 / (r * r));
    (g, g1, g2)
}

/// Mutual impedance of two ẑ-directed incremental electric dipoles of length
/// `l0` separated by `p`: `(L0²/(jωε₀)) [∂²/∂z² + κ²] e^{jκr}/(4πr)`.
pub fn mutual_impedance_z_dipoles(p: &[f64; 3], wavelength: f64, l0: f64) -> Result<Complex64> {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if r == 0.0 {
        return singular("coincident dipoles: use self_resistance");
    }
    let kappa = 2.0 * PI / wavelength;
    let omega = angular_frequency(wavelength);
    let c2 = (p[2] / r).powi(2);
    let (g, g1, g2) = green_radial(r, kappa);
    let op = g2 * c2 + g1 * ((1.0 - c2) / r) + g * (kappa * kappa);
    Ok(op * (l0 * l0) / (Complex64::i() * omega * EPS0))
}

/// Mutual impedance of two ẑ-oriented incremental current loops of area `a0`:
/// `(A0²/(jωε₀)) [∂²/∂x² + ∂²/∂y²] e^{jκr}/(4πr)`.
pub fn mutual_impedance_z_loops(p: &[f64; 3], wavelength: f64, a0: f64) -> Result<Complex64> {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if r == 0.0 {
        return singular("coincident loops");
    }
    let kappa = 2.0 * PI / wavelength;
    let omega = angular_frequency(wavelength);
    let c2 = (p[2] / r).powi(2);
    let (_, g1, g2) = green_radial(r, kappa);
    let op = g2 * (1.0 - c2) + g1 * ((1.0 + c2) / r);
    Ok(op * (a0 * a0) / (Complex64::i() * omega * EPS0))
}

/// Radiation resistance `L0²κ³/(6πωε₀)` of an incremental ẑ-dipole.
pub fn self_resistance(l0: f64, wavelength: f64) -> Result<f64> {
    if !(l0 > 0.0 && l0 < wavelength) {
        return contract(format!("dipole length {l0} must lie in (0, λ)"));
    }
    let kappa = 2.0 * PI / wavelength;
    let omega = angular_frequency(wavelength);
    Ok(l0 * l0 * kappa.powi(3) / (6.0 * PI * omega * EPS0))
}

/// Transmit, receive and cross impedance blocks with the reference resistance.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceSet {
    pub zt: CMat,
    pub zr: CMat,
    pub zrt: CMat,
    pub r0: f64,
}

fn block(a: &ArrayGeometry, b: &ArrayGeometry, l0: f64, diag: Option<Complex64>) -> Result<CMat> {
    let mut z = CMat::zeros(a.len(), b.len());
    for (i, pa) in a.positions.iter().enumerate() {
        for (k, pb) in b.positions.iter().enumerate() {
            if let (Some(d), true) = (diag, i == k) {
                z[(i, k)] = d;
                continue;
            }
            if dist(pa, pb) == 0.0 {
                return contract(format!("coincident elements {i} and {k}"));
            }
            let sep = [pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]];
            z[(i, k)] = mutual_impedance_z_dipoles(&sep, a.wavelength, l0)?;
        }
    }
    Ok(z)
}

/// Impedance blocks for ẑ-dipole arrays under the unilateral approximation.
///
/// Self terms are `self_resistance + j·self_reactance`.
pub fn impedance_set(
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    l0: f64,
    r0: f64,
    self_reactance: f64,
) -> Result<ImpedanceSet> {
    let zself = Complex64::new(self_resistance(l0, tx.wavelength)?, self_reactance);
    Ok(ImpedanceSet {
        zt: block(tx, tx, l0, Some(zself))?,
        zr: block(rx, rx, l0, Some(zself))?,
        zrt: block(rx, tx, l0, None)?,
        r0,
    })
}

/// Voltage transfer `H = Z_RT (Z_T + R0 I)⁻¹`.
pub fn end_to_end_channel(set: &ImpedanceSet) -> Result<CMat> {
    let n = set.zt.nrows();
    let a = &set.zt + CMat::identity(n, n).scale(set.r0);
    let inv = a
        .try_inverse()
        .ok_or_else(|| crate::Error::Contract("Z_T + R0 I is singular".into()))?;
    Ok(&set.zrt * inv)
}

/// Time-average transmit power `½ I^H Re(Z_T) I`.
pub fn tx_power(currents: &[Complex64], zt: &CMat) -> Result<f64> {
    if currents.len() != zt.nrows() || !zt.is_square() {
        return contract("current vector length does not match Z_T");
    }
    let mut acc = 0.0;
    for (i, ci) in currents.iter().enumerate() {
        for (k, ck) in currents.iter().enumerate() {
            let re = 0.5 * (zt[(i, k)] + zt[(k, i)]).re;
            acc += (ci.conj() * re * ck).re;
        }
    }
    Ok(0.5 * acc)
}

/// Low-noise amplifier noise parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnaParams {
    /// Voltage-noise resistance, Ω.
    pub rv: f64,
    /// Current-noise conductance, S.
    pub gi: f64,
    /// Voltage/current noise correlation (real).
    pub beta: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl Default for LnaParams {
    fn default() -> Self {
        Self {
            rv: 5.0,
            gi: 2e-3,
            beta: 0.0,
            temperature: 290.0,
        }
    }
}

/// `R_n = 4k_BT [Re((1+β)Z_R) + R_v I + G_i Z_R Z_R^H]`, symmetrized.
pub fn noise_covariance(zr: &CMat, lna: &LnaParams) -> Result<CMat> {
    if !zr.is_square() {
        return contract("Z_R must be square");
    }
    if lna.rv < 0.0 || lna.gi < 0.0 || !(lna.temperature > 0.0) {
        return contract("LNA parameters must satisfy R_v, G_i ≥ 0 and T > 0");
    }
    let m = zr.nrows();
    let re = zr.map(|z| Complex64::from((z * (1.0 + lna.beta)).re));
    let mut rn = re + CMat::identity(m, m).scale(lna.rv) + (zr * zr.adjoint()).scale(lna.gi);
    rn.scale_mut(4.0 * BOLTZMANN * lna.temperature);
    let rn = (&rn + rn.adjoint()).scale(0.5);
    let (vals, _) = hermitian_eig(&rn)?;
    let min = vals.last().copied().unwrap_or(0.0);
    let norm = rn.norm();
    if min < -1e-10 * norm {
        return contract(format!(
            "noise covariance not PSD: min eigenvalue {min:.3e}, norm {norm:.3e}"
        ));
    }
    Ok(rn)
}

/// `B = ∮ s s^H dΩ` from per-port pattern samples (`ports × nodes`) on a
/// full-sphere grid.
pub fn radiation_matrix(samples: &CMat, grid: &QuadratureGrid) -> Result<CMat> {
    if samples.ncols() != grid.len() {
        return contract(format!(
            "{} pattern samples per port for a grid of {} nodes",
            samples.ncols(),
            grid.len()
        ));
    }
    let mut weighted = samples.clone();
    for (j, w) in grid.weights.iter().enumerate() {
        weighted.column_mut(j).scale_mut(w.sqrt());
    }
    let b = &weighted * weighted.adjoint();
    Ok((&b + b.adjoint()).scale(0.5))
}
