//! Spectral efficiency of uplink multi-user SIMO and single-user MIMO links.

use num_complex::Complex64;

use crate::error::{contract, Result};
use crate::numerics::svd;
use crate::{CMat, CVec};

/// Uplink channels (column `k` belongs to UE `k`), transmit powers and noise power.
#[derive(Debug, Clone, PartialEq)]
pub struct UplinkScenario {
    pub h: CMat,
    pub powers: Vec<f64>,
    pub noise: f64,
}

impl UplinkScenario {
    pub fn new(h: CMat, powers: Vec<f64>, noise: f64) -> Result<Self> {
        if h.ncols() == 0 {
            return contract("scenario needs at least one UE");
        }
        if powers.len() != h.ncols() {
            return contract(format!(
                "{} powers for {} UEs",
                powers.len(),
                h.ncols()
            ));
        }
        if powers.iter().any(|p| *p < 0.0) {
            return contract("transmit powers must be nonnegative");
        }
        Ok(Self { h, powers, noise })
    }

    pub fn users(&self) -> usize {
        self.h.ncols()
    }

    /// `Σ_{i ∈ set} p_i h_i h_i^H + σ² I`.
    fn covariance(&self, skip: Option<usize>) -> CMat {
        let m = self.h.nrows();
        let mut c = CMat::identity(m, m).scale(self.noise);
        for (i, p) in self.powers.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let hi = self.h.column(i);
            c += (hi * hi.adjoint()).scale(*p);
        }
        c
    }

    /// Subset of the UEs, in the given order.
    pub fn subset(&self, users: &[usize]) -> Self {
        Self {
            h: self.h.select_columns(users.iter()),
            powers: users.iter().map(|&i| self.powers[i]).collect(),
            noise: self.noise,
        }
    }
}

fn solve_hermitian(a: CMat, b: CMat) -> Result<CMat> {
    match a.clone().cholesky() {
        Some(ch) => Ok(ch.solve(&b)),
        None => a
            .lu()
            .solve(&b)
            .ok_or_else(|| crate::Error::Contract("singular covariance in combiner".into())),
    }
}

/// `v_k = p_k (Σ_i p_i h_i h_i^H + σ² I)⁻¹ h_k`.
pub fn lmmse_combiner(sc: &UplinkScenario, k: usize) -> Result<CVec> {
    if k >= sc.users() {
        return contract(format!("UE index {k} out of range for {} UEs", sc.users()));
    }
    if !(sc.noise > 0.0) {
        return contract("LMMSE combining requires positive noise power");
    }
    let hk = sc.h.column(k).into_owned();
    let v = solve_hermitian(sc.covariance(None), CMat::from_column_slice(hk.len(), 1, hk.as_slice()))?;
    Ok(v.column(0).scale(sc.powers[k]))
}

/// All LMMSE combiners as the columns of an `M × K` matrix.
pub fn lmmse_combiners(sc: &UplinkScenario) -> Result<CMat> {
    if !(sc.noise > 0.0) {
        return contract("LMMSE combining requires positive noise power");
    }
    let mut v = solve_hermitian(sc.covariance(None), sc.h.clone())?;
    for (k, p) in sc.powers.iter().enumerate() {
        v.column_mut(k).scale_mut(*p);
    }
    Ok(v)
}

/// Per-UE SE `log₂(1 + SINR_k)` for the given combiners (columns).
pub fn uplink_se(sc: &UplinkScenario, combiners: &CMat) -> Result<Vec<f64>> {
    if combiners.nrows() != sc.h.nrows() || combiners.ncols() != sc.users() {
        return contract("combiner matrix dimensions do not match the scenario");
    }
    let gains = combiners.adjoint() * &sc.h; // (k, i) = v_k^H h_i
    let mut out = Vec::with_capacity(sc.users());
    for k in 0..sc.users() {
        let vk = combiners.column(k);
        let vnorm = vk.norm_squared();
        if vnorm == 0.0 {
            return contract(format!("combiner of UE {k} is zero"));
        }
        let signal = sc.powers[k] * gains[(k, k)].norm_sqr();
        let mut interference = sc.noise * vnorm;
        for i in 0..sc.users() {
            if i != k {
                interference += sc.powers[i] * gains[(k, i)].norm_sqr();
            }
        }
        out.push((1.0 + signal / interference).log2());
    }
    Ok(out)
}

/// `log₂(1 + p_k h_k^H (Σ_{i≠k} p_i h_i h_i^H + σ² I)⁻¹ h_k)` per UE.
pub fn se_upper_bound(sc: &UplinkScenario) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sc.users());
    for k in 0..sc.users() {
        let hk = sc.h.column(k).into_owned();
        let x = solve_hermitian(sc.covariance(Some(k)), CMat::from_column_slice(hk.len(), 1, hk.as_slice()))?;
        let q: Complex64 = hk.dotc(&x.column(0));
        out.push((1.0 + sc.powers[k] * q.re).log2());
    }
    Ok(out)
}

/// Power allocation over singular values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    WaterFilling,
    Equal,
}

/// Capacity `Σ log₂(1 + p_i μ_i²/σ²)` with `Σ p_i = p_total`.
pub fn su_capacity(h: &CMat, p_total: f64, noise: f64, allocation: Allocation) -> Result<f64> {
    if !(p_total > 0.0) {
        return contract(format!("total power must be positive, got {p_total}"));
    }
    let s = svd(h)?;
    let gains: Vec<f64> = s.values.iter().map(|v| v * v / noise).collect();
    let powers = match allocation {
        Allocation::Equal => vec![p_total / gains.len().max(1) as f64; gains.len()],
        Allocation::WaterFilling => water_fill(&gains, p_total),
    };
    Ok(gains
        .iter()
        .zip(&powers)
        .map(|(g, p)| (1.0 + p * g).log2())
        .sum())
}

/// `p_i = max(0, ν − 1/g_i)` with `Σ p_i = total`, exact by active-set search.
pub fn water_fill(gains: &[f64], total: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]));
    let mut out = vec![0.0; gains.len()];
    let mut active = order.len();
    while active > 0 {
        let inv_sum: f64 = order[..active].iter().map(|&i| 1.0 / gains[i]).sum();
        let level = (total + inv_sum) / active as f64;
        if level - 1.0 / gains[order[active - 1]] > 0.0 {
            for &i in &order[..active] {
                out[i] = level - 1.0 / gains[i];
            }
            return out;
        }
        active -= 1;
    }
    out
}

/// Transmit spacing `λd/(MΔ_r)` that makes the LoS MIMO channel orthogonal.
pub fn optimal_spacing(wavelength: f64, distance: f64, m: usize, rx_spacing: f64) -> f64 {
    wavelength * distance / (m as f64 * rx_spacing)
}
