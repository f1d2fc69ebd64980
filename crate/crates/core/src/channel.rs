//! Line-of-sight and correlated Rayleigh channels.
//!
//! Directions use azimuth φ and elevation θ with the array in the xy-plane and
//! broadside along +z:
//!
//! ```text
//! u(φ, θ) = [sin φ cos θ, sin θ, cos φ cos θ]
//! ```
//!
//! so the direction cosines seen by the array are `Ψ = sin φ cos θ` and `Ω = sin θ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{contract, singular, Result};
use crate::geometry::{dist, ArrayGeometry};
use crate::numerics::{complex_gaussian_from, hermitian_eig, QuadratureGrid, RngStream};
use crate::{CMat, CVec, Point3};

/// Unit propagation direction for azimuth `phi` and elevation `theta`.
pub fn direction(phi: f64, theta: f64) -> Point3 {
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    [sp * ct, st, cp * ct]
}

/// Far-field response `e^{-jκ u·p_m}` of every element.
pub fn array_response(geom: &ArrayGeometry, phi: f64, theta: f64) -> CVec {
    let u = direction(phi, theta);
    array_response_dir(geom, &u)
}

/// Far-field response for direction cosines `(Ψ, Ω)` in the array plane.
pub fn array_response_cosines(geom: &ArrayGeometry, psi: f64, omega: f64) -> CVec {
    let w = (1.0 - psi * psi - omega * omega).max(0.0).sqrt();
    array_response_dir(geom, &[psi, omega, w])
}

fn array_response_dir(geom: &ArrayGeometry, u: &Point3) -> CVec {
    let k = geom.wavenumber();
    CVec::from_iterator(
        geom.len(),
        geom.positions
            .iter()
            .map(|p| Complex64::from_polar(1.0, -k * (u[0] * p[0] + u[1] * p[1] + u[2] * p[2]))),
    )
}

/// Phase model of a line-of-sight channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosMode {
    /// Exact spherical wavefront.
    Exact,
    /// Quadratic (first-order Taylor) expansion of the element distance.
    Fresnel,
    /// Quadratic expansion about the array normal: `|Δz| + (Δx² + Δy²)/(2|Δz|)`.
    Paraxial,
    /// Planar wavefront: distance `d − u·p` with `u` the unit vector to the source.
    FarField,
}

/// Amplitude model of a line-of-sight channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosAmplitude {
    /// `λ√G/(4πd)` with `d` the distance from the array origin to the source,
    /// or its axial component in paraxial mode.
    Common,
    /// `λ√G/(4πd_m)` per element.
    PerElement,
}

/// Line-of-sight channel from a point source at `tx` to every element, with a
/// common amplitude.
pub fn los_channel(geom: &ArrayGeometry, tx: &Point3, mode: LosMode) -> Result<CVec> {
    los_channel_with(geom, tx, mode, LosAmplitude::Common)
}

pub fn los_channel_with(
    geom: &ArrayGeometry,
    tx: &Point3,
    mode: LosMode,
    amplitude: LosAmplitude,
) -> Result<CVec> {
    let k = geom.wavenumber();
    let lambda = geom.wavelength;
    let d0 = (tx[0] * tx[0] + tx[1] * tx[1] + tx[2] * tx[2]).sqrt();
    let scale = lambda * geom.gain.sqrt() / (4.0 * PI);
    // the paraxial model measures the common distance along the array normal
    let reference = if mode == LosMode::Paraxial { tx[2].abs() } else { d0 };
    let mut h = CVec::zeros(geom.len());
    for (m, p) in geom.positions.iter().enumerate() {
        let dm = dist(tx, p);
        if dm == 0.0 {
            return singular(format!("los_channel: source coincides with element {m}"));
        }
        let path = match mode {
            LosMode::Exact => dm,
            LosMode::Fresnel => {
                if d0 == 0.0 {
                    return singular("los_channel: Fresnel expansion about a source at the origin");
                }
                let pp = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                let tp = tx[0] * p[0] + tx[1] * p[1] + tx[2] * p[2];
                d0 + (pp - 2.0 * tp) / (2.0 * d0)
            }
            LosMode::Paraxial => {
                let dz = (tx[2] - p[2]).abs();
                if dz == 0.0 {
                    return singular("los_channel: paraxial model needs an axial offset");
                }
                dz + ((tx[0] - p[0]).powi(2) + (tx[1] - p[1]).powi(2)) / (2.0 * dz)
            }
            LosMode::FarField => {
                if d0 == 0.0 {
                    return singular("los_channel: plane wave from a source at the origin");
                }
                let tp = tx[0] * p[0] + tx[1] * p[1] + tx[2] * p[2];
                d0 - tp / d0
            }
        };
        let amp = match amplitude {
            LosAmplitude::Common => scale / reference.max(f64::MIN_POSITIVE),
            LosAmplitude::PerElement => scale / dm,
        };
        h[m] = Complex64::from_polar(amp, -k * path);
    }
    Ok(h)
}

/// `M_r × M_t` line-of-sight MIMO matrix; column `t` is the channel from a
/// point source at `tx_positions[t]` to the receive array.
pub fn los_mimo_channel(rx: &ArrayGeometry, tx_positions: &[Point3], mode: LosMode) -> Result<CMat> {
    let mut h = CMat::zeros(rx.len(), tx_positions.len());
    for (t, tx) in tx_positions.iter().enumerate() {
        h.set_column(t, &los_channel(rx, tx, mode)?);
    }
    Ok(h)
}

/// One Gaussian scattering cluster in (azimuth, elevation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub azimuth: f64,
    pub elevation: f64,
    pub std: f64,
    pub weight: f64,
}

/// Angular scattering density `f(φ, θ)` over the front hemisphere, with the
/// average channel gain `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringProfile {
    pub kind: ProfileKind,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// Uniform over the hemisphere solid angle, `f = 1/(2π)`.
    Isotropic,
    /// Truncated Gaussian mixture; `norms[c]` is the hemisphere integral of the
    /// unnormalized Gaussian of cluster `c`.
    Clusters { clusters: Vec<Cluster>, norms: Vec<f64> },
}

impl ScatteringProfile {
    pub fn isotropic(gain: f64) -> Self {
        Self {
            kind: ProfileKind::Isotropic,
            gain,
        }
    }

    /// Density value at `(phi, theta)`, zero outside the front hemisphere.
    pub fn density(&self, phi: f64, theta: f64) -> f64 {
        if phi.abs() > PI / 2.0 || theta.abs() > PI / 2.0 {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::Isotropic => 1.0 / (2.0 * PI),
            ProfileKind::Clusters { clusters, norms } => clusters
                .iter()
                .zip(norms)
                .map(|(c, n)| c.weight * gaussian_kernel(c, phi, theta) / n)
                .sum(),
        }
    }

    /// Integral of the density over `grid`.
    pub fn total_mass(&self, grid: &QuadratureGrid) -> f64 {
        grid.integrate(|a, e| self.density(a, e))
    }
}

fn gaussian_kernel(c: &Cluster, phi: f64, theta: f64) -> f64 {
    let da = phi - c.azimuth;
    let de = theta - c.elevation;
    (-(da * da + de * de) / (2.0 * c.std * c.std)).exp()
}

/// Equal-weight mixture of Gaussian clusters with a common angular spread,
/// each truncated to the front hemisphere and renormalized on `grid`.
pub fn gaussian_cluster_profile(
    centers: &[(f64, f64)],
    std: f64,
    gain: f64,
    grid: &QuadratureGrid,
) -> Result<ScatteringProfile> {
    let w = 1.0 / centers.len().max(1) as f64;
    let clusters: Vec<Cluster> = centers
        .iter()
        .map(|&(azimuth, elevation)| Cluster {
            azimuth,
            elevation,
            std,
            weight: w,
        })
        .collect();
    weighted_cluster_profile(clusters, gain, grid)
}

/// Mixture of Gaussian clusters with explicit weights summing to 1.
pub fn weighted_cluster_profile(
    clusters: Vec<Cluster>,
    gain: f64,
    grid: &QuadratureGrid,
) -> Result<ScatteringProfile> {
    if clusters.is_empty() {
        return contract("cluster profile needs at least one cluster");
    }
    let mut total = 0.0;
    for c in &clusters {
        if !(c.std > 0.0) {
            return contract(format!("cluster std must be positive, got {}", c.std));
        }
        if c.azimuth.abs() > PI / 2.0 || c.elevation.abs() > PI / 2.0 {
            return contract("cluster center outside the front hemisphere");
        }
        if c.weight < 0.0 {
            return contract("cluster weights must be nonnegative");
        }
        total += c.weight;
    }
    if (total - 1.0).abs() > 1e-9 {
        return contract(format!("cluster weights sum to {total}, expected 1"));
    }
    let norms: Vec<f64> = clusters
        .iter()
        .map(|c| grid.integrate(|a, e| gaussian_kernel(c, a, e)))
        .collect();
    if norms.iter().any(|n| !(*n > 0.0)) {
        return contract("cluster too narrow for the quadrature grid");
    }
    Ok(ScatteringProfile {
        kind: ProfileKind::Clusters { clusters, norms },
        gain,
    })
}

/// Spatial correlation `R = β ∬ f(φ,θ) s(φ,θ) s(φ,θ)^H dΩ` on `grid`.
pub fn correlation_matrix(
    geom: &ArrayGeometry,
    profile: &ScatteringProfile,
    grid: &QuadratureGrid,
) -> Result<CMat> {
    let mass = profile.total_mass(grid);
    if (mass - 1.0).abs() > 1e-4 {
        return contract(format!("scattering profile integrates to {mass}, expected 1"));
    }
    let m = geom.len();
    let cols: Vec<(usize, f64)> = grid
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let (a, e) = grid.nodes[i];
            (i, w * profile.density(a, e))
        })
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let mut s = CMat::zeros(m, cols.len());
    for (j, &(i, w)) in cols.iter().enumerate() {
        let (a, e) = grid.nodes[i];
        let resp = array_response(geom, a, e);
        let sw = w.sqrt();
        for r in 0..m {
            s[(r, j)] = resp[r] * sw;
        }
    }
    let mut r = &s * s.adjoint();
    r.scale_mut(profile.gain);
    Ok((&r + r.adjoint()).scale(0.5))
}

/// Draws `h = R^{1/2} w` with `w ~ CN(0, I)`.
#[derive(Debug, Clone)]
pub struct RayleighSampler {
    sqrt: CMat,
    trace: f64,
}

impl RayleighSampler {
    pub fn new(r: &CMat) -> Result<Self> {
        let (vals, vecs) = hermitian_eig(r)?;
        let trace: f64 = r.diagonal().iter().map(|z| z.re).sum();
        if let Some(min) = vals.last() {
            if *min < -1e-8 * trace.abs() {
                return contract(format!("correlation matrix not PSD: eigenvalue {min:.3e}"));
            }
        }
        let mut scaled = vecs.clone();
        for (j, v) in vals.iter().enumerate() {
            let s = v.max(0.0).sqrt();
            scaled.column_mut(j).scale_mut(s);
        }
        Ok(Self {
            sqrt: scaled,
            trace,
        })
    }

    pub fn dim(&self) -> usize {
        self.sqrt.nrows()
    }

    /// `tr(R)`, the mean channel energy.
    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> CVec {
        let w = complex_gaussian_from(self.sqrt.ncols(), rng);
        &self.sqrt * w
    }
}

/// One correlated Rayleigh draw from a fresh generator on `stream`.
pub fn sample_rayleigh(r: &CMat, stream: &RngStream) -> Result<CVec> {
    Ok(RayleighSampler::new(r)?.sample(&mut stream.generator()))
}

/// Closed-form isotropic correlation `β sinc(2‖p_m − p_n‖/λ)`.
pub fn isotropic_correlation(geom: &ArrayGeometry, gain: f64) -> CMat {
    let m = geom.len();
    CMat::from_fn(m, m, |i, j| {
        let d = dist(&geom.positions[i], &geom.positions[j]);
        Complex64::from(gain * crate::numerics::sinc(2.0 * d / geom.wavelength))
    })
}
