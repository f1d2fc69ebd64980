//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use umm_core::fields::angular_frequency;
use umm_core::numerics::{complex_gaussian, gauss_legendre_on, RngStream};
use umm_core::{CMat, EPS0};

pub const J: Complex64 = Complex64::new(0.0, 1.0);

/// `g(p + s·e_axis) − g(p)` for `g = e^{jκr}/(4πr)`, free of cancellation.
pub fn green_step(p: [f64; 3], axis: usize, s: f64, kappa: f64) -> Complex64 {
    let r0 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let mut q = p;
    q[axis] += s;
    let r1 = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    let delta = (2.0 * p[axis] * s + s * s) / (r0 + r1);
    let half = kappa * delta / 2.0;
    let expm1 = Complex64::new(-2.0 * half.sin().powi(2), (kappa * delta).sin());
    let inv_diff = -delta / (r0 * r1);
    Complex64::from_polar(1.0, kappa * r0) * (expm1 / r1 + inv_diff) / (4.0 * PI)
}

pub fn second_difference(p: [f64; 3], axis: usize, h: f64, kappa: f64) -> Complex64 {
    let up = green_step(p, axis, h, kappa);
    let down = green_step(p, axis, -h, kappa);
    (up + down) / (h * h)
}

pub fn green(p: [f64; 3], kappa: f64) -> Complex64 {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    Complex64::from_polar(1.0 / (4.0 * PI * r), kappa * r)
}

/// Dipole mutual impedance by central differences at step `1e-6·λ`.
pub fn fd_dipole(p: [f64; 3], l: f64, l0: f64) -> Complex64 {
    let kappa = 2.0 * PI / l;
    let pre = l0 * l0 / (J * angular_frequency(l) * EPS0);
    pre * (second_difference(p, 2, 1e-6 * l, kappa) + kappa * kappa * green(p, kappa))
}

/// Loop mutual impedance by central differences at step `1e-6·λ`.
pub fn fd_loop(p: [f64; 3], l: f64, a0: f64) -> Complex64 {
    let kappa = 2.0 * PI / l;
    let pre = a0 * a0 / (J * angular_frequency(l) * EPS0);
    pre * (second_difference(p, 0, 1e-6 * l, kappa) + second_difference(p, 1, 1e-6 * l, kappa))
}

// Re Z(0) = (L0²/(ωε₀)) (1/4π²) ∬_{k<κ} k²/(2√(κ²−k²)) d²k, integrated in polar
// coordinates with k = κ sin t to remove the edge singularity.
pub fn disk_integral(l0: f64, l: f64) -> f64 {
    let kappa = 2.0 * PI / l;
    let (ts, wt) = gauss_legendre_on(40, 0.0, PI / 2.0);
    let (angles, wa) = gauss_legendre_on(16, 0.0, 2.0 * PI);
    let mut acc = 0.0;
    for (_, wa) in angles.iter().zip(&wa) {
        for (t, w) in ts.iter().zip(&wt) {
            let k = kappa * t.sin();
            // k dk / kz = κ sin t · κ cos t dt / (κ cos t)
            acc += wa * w * k * k / 2.0 * k;
        }
    }
    l0 * l0 / (angular_frequency(l) * EPS0) * acc / (4.0 * PI * PI)
}

pub fn random_passive(m: usize, seed: u64) -> CMat {
    let a = CMat::from_fn(m, m, |i, j| complex_gaussian(1, &RngStream::new(seed, (i * m + j) as u64))[0].re.into());
    let b = CMat::from_fn(m, m, |i, j| complex_gaussian(1, &RngStream::new(seed + 10_000, (i * m + j) as u64))[0].re.into());
    let r = &a * a.transpose();
    let x = (&b + b.transpose()).scale(0.5);
    r + x * J
}

