//! Scalar near-field factors, aperture gain and the Hertzian-dipole field model.
//!
//! Dipole fields are reported in the local spherical basis at the observation
//! point `p = r[cos φ cos θ, sin φ cos θ, sin θ]` (azimuth φ, elevation θ), in the
//! component order (radial, elevation, azimuth):
//!
//! ```text
//! u_r  = [ cos φ cos θ,  sin φ cos θ, sin θ]
//! u_el = [-cos φ sin θ, -sin φ sin θ, cos θ]
//! u_az = [-sin φ,        cos φ,       0    ]
//! ```
//!
//! Radial and transverse amplitudes use the `e^{-jκr}` propagation phase:
//!
//! ```text
//! α_rad = e^{-jκr} / (jωε₀ 2π) · (1/r³ + jκ/r²)
//! α_ang = -e^{-jκr} / (jωε₀ 4π) · (1/r³ + jκ/r² − κ²/r)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{contract, domain, singular, Result};
use crate::numerics::gauss_legendre_on;
use crate::{Point3, EPS0, SPEED_OF_LIGHT};

/// Complex 3-vector.
pub type CVec3 = [Complex64; 3];

/// `|E|²` correction relative to the far-field `1/z²` law for a point source:
/// `1 − (2πz/λ)⁻² + (2πz/λ)⁻⁴`.
pub fn near_field_factor(z: f64, wavelength: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("near_field_factor: z must be positive, got {z}"));
    }
    let u = (2.0 * PI * z / wavelength).powi(-2);
    Ok(1.0 - u + u * u)
}

/// Phase offset between aperture center and edge, and the received-power ratio
/// between them, for a broadside source at distance `z` from an aperture of
/// diagonal `d`.
pub fn edge_phase_and_power(z: f64, d: f64, wavelength: f64) -> Result<(f64, f64)> {
    if !(z > d / 2.0) {
        return domain(format!("edge_phase_and_power: need z > D/2, got z={z}, D={d}"));
    }
    let extra = (z * z + d * d / 4.0).sqrt() - z;
    let phase = 2.0 * PI / wavelength * extra;
    let ratio = (z / (z + extra)).powi(2);
    Ok((phase, ratio))
}

fn aperture_field_integral(x0: f64, x1: f64, y0: f64, y1: f64, z: f64, wavelength: f64) -> Complex64 {
    let kappa = 2.0 * PI / wavelength;
    let nodes = |a: f64, b: f64| {
        // 8 Gauss points per half wavelength panel
        let panels = (((b - a) / (0.5 * wavelength)).ceil() as usize).max(1);
        let h = (b - a) / panels as f64;
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for i in 0..panels {
            let lo = a + i as f64 * h;
            let (x, w) = gauss_legendre_on(8, lo, lo + h);
            xs.extend(x);
            ws.extend(w);
        }
        (xs, ws)
    };
    let (xs, wx) = nodes(x0, x1);
    let (ys, wy) = nodes(y0, y1);
    let z2 = z * z;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, wx) in xs.iter().zip(&wx) {
        let mut row = Complex64::new(0.0, 0.0);
        for (y, wy) in ys.iter().zip(&wy) {
            let r = (x * x + y * y + z2).sqrt();
            row += Complex64::from_polar(*wy, -kappa * r);
        }
        acc += row * *wx;
    }
    acc
}

/// Gain of an `a × b` aperture centered at the origin of the xy-plane for a
/// broadside point source at `(0, 0, z)`, relative to an isotropic antenna.
///
/// The far-field (constant-phase) value is `ab/A_iso` with `A_iso = λ²/4π`.
pub fn aperture_gain(a: f64, b: f64, z: f64, wavelength: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && z > 0.0) {
        return domain("aperture_gain: a, b, z must be positive");
    }
    let a_iso = wavelength * wavelength / (4.0 * PI);
    let i = aperture_field_integral(-a / 2.0, a / 2.0, -b / 2.0, b / 2.0, z, wavelength);
    Ok(i.norm_sqr() / (a_iso * a * b))
}

/// Sum of the gains of an `a × b` aperture split into `nx × ny` equal
/// sub-apertures whose outputs are phase-aligned before combining.
pub fn subdivided_aperture_gain(a: f64, b: f64, nx: usize, ny: usize, z: f64, wavelength: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && z > 0.0) || nx == 0 || ny == 0 {
        return domain("subdivided_aperture_gain: invalid dimensions");
    }
    let a_iso = wavelength * wavelength / (4.0 * PI);
    let (sx, sy) = (a / nx as f64, b / ny as f64);
    let mut total = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let x0 = -a / 2.0 + i as f64 * sx;
            let y0 = -b / 2.0 + j as f64 * sy;
            let f = aperture_field_integral(x0, x0 + sx, y0, y0 + sy, z, wavelength);
            total += f.norm_sqr() / (a_iso * sx * sy);
        }
    }
    Ok(total)
}

/// Hertzian-dipole segment: position and complex moment (A·m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSegment {
    pub position: Point3,
    pub moment: CVec3,
}

/// Electric field in the spherical basis (radial, elevation, azimuth) at the
/// observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: CVec3,
}

impl FieldSample {
    pub fn norm(&self) -> f64 {
        self.e.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Angular frequency for a free-space wavelength.
pub fn angular_frequency(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

/// Radial amplitude `α_rad(r)`.
pub fn alpha_rad(r: f64, wavelength: f64) -> Complex64 {
    let kappa = 2.0 * PI / wavelength;
    let omega = angular_frequency(wavelength);
    let j = Complex64::i();
    let phase = Complex64::from_polar(1.0, -kappa * r);
    phase / (j * omega * EPS0 * 2.0 * PI) * (1.0 / r.powi(3) + j * kappa / (r * r))
}

/// Transverse amplitude `α_ang(r)`.
pub fn alpha_ang(r: f64, wavelength: f64) -> Complex64 {
    let kappa = 2.0 * PI / wavelength;
    let omega = angular_frequency(wavelength);
    let j = Complex64::i();
    let phase = Complex64::from_polar(1.0, -kappa * r);
    -phase / (j * omega * EPS0 * 4.0 * PI) * (1.0 / r.powi(3) + j * kappa / (r * r) - kappa * kappa / r)
}

/// Spherical basis at `p` as rows `[u_r, u_el, u_az]`.
///
/// On the z-axis the azimuth is taken as 0.
pub fn spherical_basis(p: &Point3) -> [[f64; 3]; 3] {
    let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let phi = if rho == 0.0 { 0.0 } else { p[1].atan2(p[0]) };
    let theta = p[2].atan2(rho);
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    [
        [cp * ct, sp * ct, st],
        [-cp * st, -sp * st, ct],
        [-sp, cp, 0.0],
    ]
}

fn norm3(p: &Point3) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn dot_rc(u: &[f64; 3], m: &CVec3) -> Complex64 {
    m[0] * u[0] + m[1] * u[1] + m[2] * u[2]
}

/// Field at `p` of a dipole with moment `moment` at the origin.
pub fn dipole_field(moment: &CVec3, p: &Point3, wavelength: f64) -> Result<FieldSample> {
    let r = norm3(p);
    if r == 0.0 {
        return singular("dipole_field: observation at the dipole");
    }
    let q = spherical_basis(p);
    let ar = alpha_rad(r, wavelength);
    let aa = alpha_ang(r, wavelength);
    Ok(FieldSample {
        e: [ar * dot_rc(&q[0], moment), aa * dot_rc(&q[1], moment), aa * dot_rc(&q[2], moment)],
    })
}

/// Field at `p` of a segment located anywhere, in the spherical basis at `p`.
///
/// The dipole field is evaluated at the offset `p − position` and rotated from
/// the basis at the offset into the basis at `p`.
pub fn segment_field(segment: &DipoleSegment, p: &Point3, wavelength: f64) -> Result<FieldSample> {
    let d = [
        p[0] - segment.position[0],
        p[1] - segment.position[1],
        p[2] - segment.position[2],
    ];
    let local = dipole_field(&segment.moment, &d, wavelength)?;
    let qd = spherical_basis(&d);
    let qp = spherical_basis(p);
    let zero = Complex64::new(0.0, 0.0);
    let mut cart = [zero; 3];
    for (row, comp) in qd.iter().zip(local.e.iter()) {
        for i in 0..3 {
            cart[i] += *comp * row[i];
        }
    }
    Ok(FieldSample {
        e: [dot_rc(&qp[0], &cart), dot_rc(&qp[1], &cart), dot_rc(&qp[2], &cart)],
    })
}

/// Field of an array of segments with excitation-dependent moments.
///
/// Segment `k` carries the moment `moment_matrices[k] · x`, where each 3 × N
/// matrix is stored as its N columns and `x` is the N-port excitation.
pub fn array_field(
    positions: &[Point3],
    moment_matrices: &[Vec<[Complex64; 3]>],
    x: &[Complex64],
    p: &Point3,
    wavelength: f64,
) -> Result<FieldSample> {
    if positions.len() != moment_matrices.len() {
        return contract("array_field: one moment matrix per segment required");
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut total = [zero; 3];
    for (pos, mm) in positions.iter().zip(moment_matrices) {
        if mm.len() != x.len() {
            return contract("array_field: moment matrix columns must match the excitation length");
        }
        let mut moment = [zero; 3];
        for (col, xn) in mm.iter().zip(x) {
            for i in 0..3 {
                moment[i] += col[i] * xn;
            }
        }
        if pos == p {
            return singular("array_field: observation coincides with a segment");
        }
        let f = segment_field(&DipoleSegment { position: *pos, moment }, p, wavelength)?;
        for i in 0..3 {
            total[i] += f.e[i];
        }
    }
    Ok(FieldSample { e: total })
}
