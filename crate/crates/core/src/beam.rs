//! Beamfocusing gains, angular beamwidth and finite beamdepth.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, singular, Result};
use crate::geometry::{dist, ArrayGeometry};
use crate::numerics::{fresnel_cs, sinc};
use crate::Point3;

/// Focus point and per-element transmit phases.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec {
    pub focus: Point3,
    pub phases: Vec<f64>,
}

/// Phases `ψ_m = κ·‖point − p_m‖` that cancel the propagation phase at `point`.
pub fn focus_phases(geom: &ArrayGeometry, point: &Point3) -> Result<BeamSpec> {
    let k = geom.wavenumber();
    let mut phases = Vec::with_capacity(geom.len());
    for (m, p) in geom.positions.iter().enumerate() {
        let d = dist(point, p);
        if d == 0.0 {
            return singular(format!("focus point coincides with element {m}"));
        }
        phases.push(k * d);
    }
    Ok(BeamSpec {
        focus: *point,
        phases,
    })
}

/// `AG = (1/M) |Σ_m e^{-jκ‖rx − p_m‖} e^{jψ_m}|²`.
pub fn array_gain(geom: &ArrayGeometry, spec: &BeamSpec, rx: &Point3) -> Result<f64> {
    let k = geom.wavenumber();
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, psi) in geom.positions.iter().zip(&spec.phases) {
        let d = dist(rx, p);
        if d == 0.0 {
            return singular("array_gain: receiver coincides with an element");
        }
        acc += Complex64::from_polar(1.0, psi - k * d);
    }
    Ok(acc.norm_sqr() / geom.len() as f64)
}

/// Approximate gain `M sinc²(NΔ sin φ / λ)` of an `N × N` array focused
/// broadside, observed at angle `phi` at the focal distance.
pub fn angular_taper(n: usize, spacing: f64, wavelength: f64, phi: f64) -> f64 {
    let m = (n * n) as f64;
    m * sinc(n as f64 * spacing * phi.sin() / wavelength).powi(2)
}

/// Half-power beamwidth `0.886λ/(NΔ)` in radians.
pub fn beamwidth_3db(n: usize, spacing: f64, wavelength: f64) -> Result<f64> {
    let aperture = n as f64 * spacing;
    if !(aperture > 0.443 * wavelength) {
        return domain(format!(
            "beamwidth_3db: aperture {aperture} too small for wavelength {wavelength}"
        ));
    }
    Ok(0.886 * wavelength / aperture)
}

/// `A(x) = (C²(√x) + S²(√x))² / x²`, with `A(0) = 1`.
pub fn depth_profile(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("depth_profile: invalid argument {x}"));
    }
    if x < 1e-3 {
        // C(t)/t and S(t)/t as power series in x = t²
        let x2 = x * x;
        let c = 1.0 - PI.powi(2) * x2 / 40.0 + PI.powi(4) * x2 * x2 / 3456.0
            - PI.powi(6) * x2 * x2 * x2 / 599_040.0;
        let s = PI * x / 6.0 - PI.powi(3) * x * x2 / 336.0 + PI.powi(5) * x * x2 * x2 / 42_240.0
            - PI.powi(7) * x * x2 * x2 * x2 / 9_676_800.0;
        return Ok((c * c + s * s).powi(2));
    }
    let (c, s) = fresnel_cs(x.sqrt())?;
    Ok(((c * c + s * s) / x).powi(2))
}

/// Normalized gain along the focal axis at distance `z` for a beam focused at
/// `f` by an array with Fraunhofer distance `d_f`.
pub fn depth_gain(f: f64, z: f64, d_f: f64) -> Result<f64> {
    if !(f > 0.0 && z > 0.0) {
        return domain("depth_gain: F and z must be positive");
    }
    if f == z {
        return Ok(1.0);
    }
    let z_eff = f * z / (f - z).abs();
    depth_profile(d_f / (8.0 * z_eff))
}

/// Half-power depth interval of a focused beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beamdepth {
    /// `upper − lower`, infinite when the beam never drops below half power.
    pub depth: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Beamdepth {
    pub fn is_finite(&self) -> bool {
        self.depth.is_finite()
    }
}

/// Half-power beamdepth `20 d_F F² / (d_F² − 100F²)` for `F < d_F/10`.
pub fn beamdepth_3db(f: f64, d_f: f64) -> Result<Beamdepth> {
    if !(f > 0.0 && d_f > 0.0) {
        return domain("beamdepth_3db: F and d_F must be positive");
    }
    let lower = d_f * f / (d_f + 10.0 * f);
    if f < d_f / 10.0 {
        Ok(Beamdepth {
            depth: 20.0 * d_f * f * f / (d_f * d_f - 100.0 * f * f),
            lower,
            upper: d_f * f / (d_f - 10.0 * f),
        })
    } else {
        Ok(Beamdepth {
            depth: f64::INFINITY,
            lower,
            upper: f64::INFINITY,
        })
    }
}
