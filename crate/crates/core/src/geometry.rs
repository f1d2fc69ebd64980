//! Antenna array construction and near/far-field boundary distances.

use crate::error::{contract, Result};
use crate::Point3;

/// Ordered antenna positions with the carrier wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub positions: Vec<Point3>,
    pub wavelength: f64,
    /// Element gain, 1 for isotropic elements.
    pub gain: f64,
    /// Footprint of one element along x and y; the aperture extends half a
    /// footprint beyond the outermost element centers.
    pub cell: [f64; 2],
}

/// Boundary distances of an aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    /// Reactive near-field boundary `0.62 √(D³/λ)`.
    pub reactive: f64,
    /// Distance beyond which amplitude variations are negligible, `2D`.
    pub power: f64,
    /// Fraunhofer distance `2D²/λ`.
    pub fraunhofer: f64,
    /// Largest aperture dimension.
    pub aperture: f64,
}

impl ArrayGeometry {
    pub fn new(positions: Vec<Point3>, wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return contract(format!("wavelength must be positive, got {wavelength}"));
        }
        if positions.is_empty() {
            return contract("array needs at least one element");
        }
        Ok(Self {
            positions,
            wavelength,
            gain: 1.0,
            cell: [0.0, 0.0],
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Wavenumber `2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Copy with every element shifted by `offset`.
    pub fn translated(&self, offset: Point3) -> Self {
        let positions = self
            .positions
            .iter()
            .map(|p| [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]])
            .collect();
        Self {
            positions,
            ..self.clone()
        }
    }
}

/// Uniform planar array in the xy-plane, centered at the origin.
///
/// Element `(n, m)` sits at `((n − (N_x+1)/2)Δ_x, (m − (N_y+1)/2)Δ_y, 0)` for
/// 1-based `n, m`, x index running fastest. `N_y = 1` gives a ULA on the x-axis.
pub fn build_upa(nx: usize, ny: usize, dx: f64, dy: f64, wavelength: f64) -> Result<ArrayGeometry> {
    if nx == 0 || ny == 0 {
        return contract(format!("array counts must be positive, got {nx}x{ny}"));
    }
    if !(dx > 0.0) || !(dy > 0.0) {
        return contract(format!("spacings must be positive, got {dx}, {dy}"));
    }
    let cx = (nx as f64 + 1.0) / 2.0;
    let cy = (ny as f64 + 1.0) / 2.0;
    let mut positions = Vec::with_capacity(nx * ny);
    for m in 1..=ny {
        for n in 1..=nx {
            positions.push([(n as f64 - cx) * dx, (m as f64 - cy) * dy, 0.0]);
        }
    }
    let mut geom = ArrayGeometry::new(positions, wavelength)?;
    geom.cell = [
        if nx > 1 { dx } else { 0.0 },
        if ny > 1 { dy } else { 0.0 },
    ];
    Ok(geom)
}

/// Uniform linear array along x.
pub fn build_ula(n: usize, spacing: f64, wavelength: f64) -> Result<ArrayGeometry> {
    build_upa(n, 1, spacing, spacing, wavelength)
}

/// Boundary distances from the diagonal of the aperture bounding box.
///
/// A single element has no aperture and all bounds are 0.
pub fn region_bounds(geom: &ArrayGeometry) -> RegionBounds {
    if geom.len() < 2 {
        return RegionBounds {
            reactive: 0.0,
            power: 0.0,
            fraunhofer: 0.0,
            aperture: 0.0,
        };
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &geom.positions {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let pad = [geom.cell[0], geom.cell[1], 0.0];
    let d = (0..3)
        .map(|i| (hi[i] - lo[i] + pad[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    let lambda = geom.wavelength;
    RegionBounds {
        reactive: 0.62 * (d.powi(3) / lambda).sqrt(),
        power: 2.0 * d,
        fraunhofer: 2.0 * d * d / lambda,
        aperture: d,
    }
}

/// Fraunhofer distance `4N²Δ²/λ` of an `N×N` square array of side `NΔ`.
pub fn fraunhofer_square(n: usize, spacing: f64, wavelength: f64) -> f64 {
    let side = n as f64 * spacing;
    4.0 * side * side / wavelength
}

pub(crate) fn dist(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}
