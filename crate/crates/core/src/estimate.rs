//! Pilot-based channel estimation.
//!
//! The received pilot is `y = √p Φ h + n` with `Φ ∈ C^{τ_p×M}`,
//! `tr(Φ^H Φ) = τ_p` and `n ~ CN(0, σ² I)`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::channel::array_response_cosines;
use crate::error::{contract, Error, Result};
use crate::geometry::ArrayGeometry;
use crate::numerics::{complex_gaussian_from, hermitian_eig, pinv, RngStream};
use crate::{CMat, CVec};

/// Relative singular-value cutoff of every pseudo-inverse in this module.
pub const PINV_RTOL: f64 = 1e-10;

/// Pilot matrix with its transmit power and the receiver noise power.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    pub phi: CMat,
    pub power: f64,
    pub noise: f64,
}

impl PilotMatrix {
    pub fn new(phi: CMat, power: f64, noise: f64) -> Result<Self> {
        let tau = phi.nrows() as f64;
        let energy: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        if (energy - tau).abs() > 1e-8 * tau.max(1.0) {
            return contract(format!("pilot energy tr(Φ^HΦ) = {energy}, expected τ_p = {tau}"));
        }
        if !(power > 0.0) || noise < 0.0 {
            return contract("pilot power must be positive and noise nonnegative");
        }
        Ok(Self { phi, power, noise })
    }

    pub fn tau(&self) -> usize {
        self.phi.nrows()
    }

    pub fn antennas(&self) -> usize {
        self.phi.ncols()
    }

    /// Copy with every pilot symbol rotated by a common phase.
    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            phi: self.phi.map(|z| z * Complex64::from_polar(1.0, angle)),
            ..self.clone()
        }
    }
}

/// Pilots with orthogonal structure: the first `τ_p` rows of a random unitary
/// matrix when `τ_p ≤ M`, otherwise `√(τ_p/M)` times the first `M` columns of a
/// random `τ_p × τ_p` unitary matrix.
pub fn orthogonal_pilot(tau: usize, m: usize, power: f64, noise: f64, stream: &RngStream) -> Result<PilotMatrix> {
    if tau == 0 || m == 0 {
        return contract("pilot dimensions must be positive");
    }
    let n = tau.max(m);
    let mut rng = stream.generator();
    let g = CMat::from_fn(n, n, |_, _| complex_gaussian_from(1, &mut rng)[0]);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phase ambiguity so the draw is Haar distributed
    let mut u = q.clone();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] = q[(i, j)] * ph;
        }
    }
    let phi = if tau <= m {
        u.rows(0, tau).into_owned()
    } else {
        u.columns(0, m).into_owned().scale((tau as f64 / m as f64).sqrt())
    };
    PilotMatrix::new(phi, power, noise)
}

/// `y = √p Φ h + n`.
pub fn received_pilot<R: Rng>(pilot: &PilotMatrix, h: &CVec, rng: &mut R) -> Result<CVec> {
    if h.len() != pilot.antennas() {
        return contract(format!(
            "channel length {} does not match pilot width {}",
            h.len(),
            pilot.antennas()
        ));
    }
    let clean = (&pilot.phi * h).scale(pilot.power.sqrt());
    if pilot.noise == 0.0 {
        return Ok(clean);
    }
    let n = complex_gaussian_from(pilot.tau(), rng).scale(pilot.noise.sqrt());
    Ok(clean + n)
}

/// Least-squares estimator `ĥ = Φ⁺ y / √p`.
#[derive(Debug, Clone)]
pub struct LsEstimator {
    gain: CMat,
    /// True when `Φ` has fewer than `M` significant singular values.
    pub rank_deficient: bool,
}

impl LsEstimator {
    pub fn new(pilot: &PilotMatrix) -> Result<Self> {
        let (pi, rank) = pinv(&pilot.phi, PINV_RTOL)?;
        Ok(Self {
            gain: pi.unscale(pilot.power.sqrt()),
            rank_deficient: rank < pilot.antennas(),
        })
    }

    pub fn estimate(&self, y: &CVec) -> CVec {
        &self.gain * y
    }
}

pub fn ls_estimate(y: &CVec, pilot: &PilotMatrix) -> Result<CVec> {
    Ok(LsEstimator::new(pilot)?.estimate(y))
}

/// Expected LS error `tr((I−P)R(I−P)^H) + (σ²/p)‖Φ⁺‖²_F`, with `P = Φ⁺Φ`.
///
/// For full column rank `Φ` this is `(σ²/p) tr((Φ^HΦ)⁻¹)`.
pub fn ls_mse(pilot: &PilotMatrix, r: &CMat) -> Result<f64> {
    let (pi, _) = pinv(&pilot.phi, PINV_RTOL)?;
    let m = pilot.antennas();
    let bias = CMat::identity(m, m) - &pi * &pilot.phi;
    let b = (&bias * r * bias.adjoint()).trace().re;
    let noise = pilot.noise / pilot.power * pi.iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok(b + noise)
}

/// Linear MMSE estimator `ĥ = √p RΦ^H (pΦRΦ^H + σ²I)⁻¹ y`.
#[derive(Debug, Clone)]
pub struct MmseEstimator {
    gain: CMat,
    /// Analytic MSE `tr(R) − tr(p RΦ^H (pΦRΦ^H + σ²I)⁻¹ ΦR)`.
    pub mse: f64,
    /// True when the inner matrix was singular and a pseudo-inverse was used.
    pub regularized: bool,
}

impl MmseEstimator {
    pub fn new(pilot: &PilotMatrix, r: &CMat) -> Result<Self> {
        let (p, s2) = (pilot.power, pilot.noise);
        let phi = &pilot.phi;
        let tau = pilot.tau();
        let rphih = r * phi.adjoint();
        let inner = (phi * &rphih).scale(p) + CMat::identity(tau, tau).scale(s2);
        let (inv, regularized) = match inner.clone().cholesky() {
            Some(ch) if s2 > 0.0 => (ch.inverse(), false),
            _ => {
                let (pi, rank) = pinv(&inner, PINV_RTOL)?;
                (pi, rank < tau)
            }
        };
        let gain = (&rphih * &inv).scale(p.sqrt());
        let reduction = (&rphih * &inv * rphih.adjoint()).trace().re * p;
        let mse = r.trace().re - reduction;
        Ok(Self {
            gain,
            mse,
            regularized,
        })
    }

    pub fn estimate(&self, y: &CVec) -> CVec {
        &self.gain * y
    }
}

pub fn mmse_estimate(y: &CVec, pilot: &PilotMatrix, r: &CMat) -> Result<(CVec, f64)> {
    let est = MmseEstimator::new(pilot, r)?;
    Ok((est.estimate(y), est.mse))
}

/// Water-filling pilot `Φ = D U_τ^H` along the `τ_p` strongest eigenvectors of `R`.
///
/// `d_m² = max(0, μ − σ²/(pλ_m))` with `Σ d_m² = τ_p`.
pub fn mmse_pilot_design(r: &CMat, power: f64, noise: f64, tau: usize) -> Result<PilotMatrix> {
    let m = r.nrows();
    if tau == 0 || tau > m {
        return contract(format!("mmse_pilot_design: need 1 ≤ τ_p ≤ M, got τ_p = {tau}, M = {m}"));
    }
    let (vals, vecs) = hermitian_eig(r)?;
    if vals[0] <= 0.0 {
        return contract("mmse_pilot_design: correlation matrix has no positive eigenvalue");
    }
    let powers = water_levels(&vals[..tau], power, noise, tau as f64);
    let mut phi = CMat::zeros(tau, m);
    for (i, d2) in powers.iter().enumerate() {
        let d = d2.sqrt();
        for c in 0..m {
            phi[(i, c)] = vecs[(c, i)].conj() * d;
        }
    }
    PilotMatrix::new(phi, power, noise)
}

/// Allocations `max(0, μ − σ²/(pλ_m))` summing to `budget`, with the level μ
/// found by bisection.
pub fn water_levels(eigs: &[f64], power: f64, noise: f64, budget: f64) -> Vec<f64> {
    let floor: Vec<f64> = eigs
        .iter()
        .map(|&l| if l > 0.0 { noise / (power * l) } else { f64::INFINITY })
        .collect();
    let alloc = |mu: f64| -> f64 { floor.iter().map(|f| (mu - f).max(0.0)).sum() };
    let finite_max = floor.iter().copied().filter(|f| f.is_finite()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, budget + finite_max);
    let tol = 1e-12 * budget;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if alloc(mid) > budget {
            hi = mid;
        } else {
            lo = mid;
        }
        if (alloc(mid) - budget).abs() <= tol || hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);
    let mut out: Vec<f64> = floor.iter().map(|f| (mu - f).max(0.0)).collect();
    // remove the residual bisection error
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        let s = budget / total;
        out.iter_mut().for_each(|v| *v *= s);
    }
    out
}

/// Orthonormal eigenvectors of `r` whose eigenvalues hold `capture` of the trace.
pub fn reference_subspace(r: &CMat, capture: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eig(r)?;
    let k = crate::dof::effective_rank(&vals, capture)?;
    Ok(vecs.columns(0, k.max(1)).into_owned())
}

/// Reduced-subspace LS `ĥ = Ū(Ū^HΦ^HΦŪ)⁻¹Ū^HΦ^H y / √p`.
#[derive(Debug, Clone)]
pub struct RslsEstimator {
    gain: CMat,
    inner_inv: CMat,
    ubar: CMat,
    noise_over_power: f64,
}

impl RslsEstimator {
    pub fn new(pilot: &PilotMatrix, ubar: &CMat) -> Result<Self> {
        let rbar = ubar.ncols();
        if pilot.tau() < rbar {
            return contract(format!(
                "RS-LS needs τ_p ≥ r̄, got τ_p = {}, r̄ = {rbar}",
                pilot.tau()
            ));
        }
        let pu = &pilot.phi * ubar;
        let inner = pu.adjoint() * &pu;
        let inner_inv = match inner.clone().cholesky() {
            Some(ch) => ch.inverse(),
            None => pinv(&inner, PINV_RTOL)?.0,
        };
        let gain = (ubar * &inner_inv * pu.adjoint()).unscale(pilot.power.sqrt());
        Ok(Self {
            gain,
            inner_inv,
            ubar: ubar.clone(),
            noise_over_power: pilot.noise / pilot.power,
        })
    }

    pub fn estimate(&self, y: &CVec) -> CVec {
        &self.gain * y
    }

    /// `(σ²/p) tr((Ū^HΦ^HΦŪ)⁻¹)`, the MSE for channels inside span(Ū).
    pub fn subspace_mse(&self) -> f64 {
        self.noise_over_power * self.inner_inv.trace().re
    }

    pub fn subspace(&self) -> &CMat {
        &self.ubar
    }
}

pub fn rsls_estimate(y: &CVec, pilot: &PilotMatrix, ubar: &CMat) -> Result<CVec> {
    Ok(RslsEstimator::new(pilot, ubar)?.estimate(y))
}

/// `Φ* = √(τ_p/r̄) S Ū^H` with `S` the first `r̄` columns of `I_{τ_p}`.
pub fn rsls_pilot(ubar: &CMat, tau: usize, power: f64, noise: f64) -> Result<PilotMatrix> {
    let rbar = ubar.ncols();
    let s = CMat::identity(tau, rbar);
    rsls_pilot_with(ubar, &s, power, noise)
}

/// `Φ* = √(τ_p/r̄) S Ū^H` for a caller-chosen `S` with orthonormal columns.
pub fn rsls_pilot_with(ubar: &CMat, s: &CMat, power: f64, noise: f64) -> Result<PilotMatrix> {
    let rbar = ubar.ncols();
    let tau = s.nrows();
    if tau < rbar {
        return contract(format!("RS-LS pilot needs τ_p ≥ r̄, got τ_p = {tau}, r̄ = {rbar}"));
    }
    if s.ncols() != rbar {
        return contract("S must have r̄ columns");
    }
    let gram = s.adjoint() * s;
    if (gram - CMat::identity(rbar, rbar)).norm() > 1e-9 {
        return contract("S must have orthonormal columns");
    }
    let phi = (s * ubar.adjoint()).scale((tau as f64 / rbar as f64).sqrt());
    PilotMatrix::new(phi, power, noise)
}

/// How lattice points on the unit circle are treated when building a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeBoundary {
    /// Keep points with `Ψ² + Ω² ≤ 1`.
    Closed,
    /// Keep points with `Ψ² + Ω² < 1`.
    Open,
}

/// Far-field dictionary on a `(Ψ, Ω)` lattice.
#[derive(Debug, Clone)]
pub struct Dictionary {
    /// `M × K` matrix of array responses.
    pub atoms: CMat,
    /// `(Ψ, Ω)` of each atom.
    pub grid: Vec<(f64, f64)>,
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Lattice points `(iΔ, jΔ)` inside the unit disk, Ψ index outer, Ω inner.
pub fn dictionary_grid(step: f64, boundary: LatticeBoundary) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) {
        return contract(format!("dictionary step must be positive, got {step}"));
    }
    let n = (1.0 / step + 1e-9).floor() as i64;
    let mut grid = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            let (a, b) = (i as f64 * step, j as f64 * step);
            let r2 = a * a + b * b;
            let keep = match boundary {
                LatticeBoundary::Closed => r2 <= 1.0 + 1e-12,
                LatticeBoundary::Open => r2 < 1.0 - 1e-12,
            };
            if keep {
                grid.push((a, b));
            }
        }
    }
    Ok(grid)
}

/// Array responses on the closed `(Ψ, Ω)` lattice of period `step`.
pub fn build_ff_dictionary(geom: &ArrayGeometry, step: f64) -> Result<Dictionary> {
    build_ff_dictionary_with(geom, step, LatticeBoundary::Closed)
}

pub fn build_ff_dictionary_with(
    geom: &ArrayGeometry,
    step: f64,
    boundary: LatticeBoundary,
) -> Result<Dictionary> {
    let grid = dictionary_grid(step, boundary)?;
    let mut atoms = CMat::zeros(geom.len(), grid.len());
    for (k, &(psi, omega)) in grid.iter().enumerate() {
        atoms.set_column(k, &array_response_cosines(geom, psi, omega));
    }
    Ok(Dictionary { atoms, grid })
}

/// Sensing operator `√p Φ D` with its column norms, reusable across trials.
#[derive(Debug, Clone)]
pub struct OmpOperator {
    sensing: CMat,
    norms: Vec<f64>,
}

impl OmpOperator {
    pub fn new(pilot: &PilotMatrix, dict: &Dictionary) -> Self {
        let sensing = (&pilot.phi * &dict.atoms).scale(pilot.power.sqrt());
        let norms = sensing.column_iter().map(|c| c.norm()).collect();
        Self { sensing, norms }
    }

    /// Indices of the selected atoms and the synthesized channel estimate.
    pub fn estimate(&self, y: &CVec, dict: &Dictionary, paths: usize) -> Result<(Vec<usize>, CVec)> {
        let k = dict.len();
        if paths == 0 || paths > k {
            return contract(format!("OMP path count {paths} outside 1..={k}"));
        }
        let mut support: Vec<usize> = Vec::with_capacity(paths);
        let mut residual = y.clone();
        let mut coef = CVec::zeros(0);
        for _ in 0..paths {
            let corr = self.sensing.ad_mul(&residual);
            let mut best = None;
            let mut best_val = -1.0;
            for (i, c) in corr.iter().enumerate() {
                if self.norms[i] == 0.0 || support.contains(&i) {
                    continue;
                }
                let v = c.norm() / self.norms[i];
                // strict comparison keeps the lowest index on ties
                if v > best_val {
                    best_val = v;
                    best = Some(i);
                }
            }
            let Some(idx) = best else { break };
            support.push(idx);
            let a = self.sensing.select_columns(support.iter());
            let (ai, _) = pinv(&a, PINV_RTOL)?;
            coef = &ai * y;
            residual = y - &a * &coef;
        }
        let h = dict.atoms.select_columns(support.iter()) * coef;
        Ok((support, h))
    }
}

pub fn omp_estimate(y: &CVec, pilot: &PilotMatrix, dict: &Dictionary, paths: usize) -> Result<CVec> {
    if pilot.tau() < paths {
        return contract(format!("OMP needs τ_p ≥ L, got τ_p = {}, L = {paths}", pilot.tau()));
    }
    Ok(OmpOperator::new(pilot, dict).estimate(y, dict, paths)?.1)
}

/// Aggregate Monte-Carlo NMSE.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    /// Estimate from the last trial.
    pub estimate: CVec,
    pub nmse: f64,
    pub trials: usize,
    pub stderr: f64,
}

/// Running mean and standard error of per-trial squared errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorStats {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl ErrorStats {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, other: &ErrorStats) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = (self.sum_sq - self.sum * self.sum / n) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// Estimators driven by [`nmse_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Ls,
    Mmse,
    Rsls,
    Omp,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Ls => "ls",
            EstimatorKind::Mmse => "mmse",
            EstimatorKind::Rsls => "rsls",
            EstimatorKind::Omp => "omp",
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls" => Ok(EstimatorKind::Ls),
            "mmse" => Ok(EstimatorKind::Mmse),
            "rsls" | "rs-ls" => Ok(EstimatorKind::Rsls),
            "omp" => Ok(EstimatorKind::Omp),
            other => Err(Error::Config(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Channel source for a sweep: draws one realization per call.
pub trait ChannelSource {
    fn dim(&self) -> usize;
    /// `E{‖h‖²}`, the NMSE normalizer.
    fn mean_energy(&self) -> f64;
    fn draw(&self, rng: &mut ChaCha8Rng) -> CVec;
}

impl ChannelSource for crate::channel::RayleighSampler {
    fn dim(&self) -> usize {
        crate::channel::RayleighSampler::dim(self)
    }

    fn mean_energy(&self) -> f64 {
        self.trace()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> CVec {
        self.sample(rng)
    }
}

/// Description of one NMSE-versus-pilot-length sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub estimators: Vec<EstimatorKind>,
    pub pilot_lengths: Vec<usize>,
    pub trials: usize,
    pub power: f64,
    pub noise: f64,
    pub seed: u64,
    /// Correlation matrix for MMSE; identity scaled by the channel energy if absent.
    pub correlation: Option<CMat>,
    /// Reference subspace for RS-LS.
    pub subspace: Option<CMat>,
    /// Dictionary and path count for OMP.
    pub dictionary: Option<(Dictionary, usize)>,
}

/// One `(τ_p, estimator)` point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub pilot_length: usize,
    pub estimator: EstimatorKind,
    pub result: EstimatorResult,
}

enum Prepared {
    Ls(LsEstimator),
    Mmse(MmseEstimator),
    Rsls(RslsEstimator),
    Omp(OmpOperator),
}

/// Monte-Carlo NMSE for every estimator and pilot length.
///
/// Trial `t` draws its channel and noise from stream `t` of the master seed, so
/// every estimator sees the same realizations. Points where an estimator is
/// undefined (RS-LS with `τ_p < r̄`, MMSE with `τ_p > M`) are skipped.
pub fn nmse_sweep(spec: &SweepSpec, source: &dyn ChannelSource) -> Result<Vec<SweepPoint>> {
    let m = source.dim();
    let energy = source.mean_energy();
    if !(energy > 0.0) {
        return contract("channel source has zero mean energy");
    }
    if spec.trials == 0 {
        return Err(Error::Config("trial count must be positive".into()));
    }
    let corr = spec
        .correlation
        .clone()
        .unwrap_or_else(|| CMat::identity(m, m).scale(energy / m as f64));
    let master = RngStream::new(spec.seed, 0);
    let mut out = Vec::new();
    for &tau in &spec.pilot_lengths {
        let pilot_stream = RngStream::new(spec.seed, 1).child(tau as u64);
        let base = orthogonal_pilot(tau, m, spec.power, spec.noise, &pilot_stream)?;
        for &kind in &spec.estimators {
            let (pilot, prepared) = match kind {
                EstimatorKind::Ls => (base.clone(), Prepared::Ls(LsEstimator::new(&base)?)),
                EstimatorKind::Mmse => {
                    if tau > m {
                        continue;
                    }
                    let p = mmse_pilot_design(&corr, spec.power, spec.noise, tau)?;
                    let e = MmseEstimator::new(&p, &corr)?;
                    (p, Prepared::Mmse(e))
                }
                EstimatorKind::Rsls => {
                    let Some(ubar) = &spec.subspace else {
                        return Err(Error::Config("RS-LS requires a reference subspace".into()));
                    };
                    if tau < ubar.ncols() {
                        continue;
                    }
                    let p = rsls_pilot(ubar, tau, spec.power, spec.noise)?;
                    let e = RslsEstimator::new(&p, ubar)?;
                    (p, Prepared::Rsls(e))
                }
                EstimatorKind::Omp => {
                    let Some((dict, paths)) = &spec.dictionary else {
                        return Err(Error::Config("OMP requires a dictionary".into()));
                    };
                    if tau < *paths {
                        continue;
                    }
                    (base.clone(), Prepared::Omp(OmpOperator::new(&base, dict)))
                }
            };
            let mut stats = ErrorStats::default();
            let mut last = CVec::zeros(m);
            for t in 0..spec.trials {
                let mut rng = master.child(t as u64).generator();
                let h = source.draw(&mut rng);
                let y = received_pilot(&pilot, &h, &mut rng)?;
                let est = match &prepared {
                    Prepared::Ls(e) => e.estimate(&y),
                    Prepared::Mmse(e) => e.estimate(&y),
                    Prepared::Rsls(e) => e.estimate(&y),
                    Prepared::Omp(op) => {
                        let (dict, paths) = spec.dictionary.as_ref().expect("checked above");
                        op.estimate(&y, dict, *paths)?.1
                    }
                };
                stats.push((&est - &h).norm_squared());
                last = est;
            }
            out.push(SweepPoint {
                pilot_length: tau,
                estimator: kind,
                result: EstimatorResult {
                    estimate: last,
                    nmse: stats.mean() / energy,
                    trials: stats.count(),
                    stderr: stats.stderr() / energy,
                },
            });
        }
    }
    Ok(out)
}

/// Channels made of `paths` equal-power far-field paths drawn from a dictionary
/// or from continuous angles.
#[derive(Debug, Clone)]
pub struct SparseChannel {
    pub geom: ArrayGeometry,
    pub paths: usize,
    /// Largest |azimuth| and |elevation| in radians.
    pub max_angle: f64,
    /// Restrict path directions to these lattice points when present.
    pub on_grid: Option<Vec<(f64, f64)>>,
}

impl SparseChannel {
    /// Direction cosines of one path.
    fn draw_direction(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        loop {
            let phi = rng.random_range(-self.max_angle..=self.max_angle);
            let theta = rng.random_range(-self.max_angle..=self.max_angle);
            let psi = phi.sin() * theta.cos();
            let omega = theta.sin();
            match &self.on_grid {
                None => return (psi, omega),
                Some(grid) => {
                    // snap to the nearest lattice point
                    let best = grid
                        .iter()
                        .min_by(|a, b| {
                            let da = (a.0 - psi).powi(2) + (a.1 - omega).powi(2);
                            let db = (b.0 - psi).powi(2) + (b.1 - omega).powi(2);
                            da.total_cmp(&db)
                        })
                        .copied();
                    if let Some(p) = best {
                        return p;
                    }
                }
            }
        }
    }
}

impl ChannelSource for SparseChannel {
    fn dim(&self) -> usize {
        self.geom.len()
    }

    fn mean_energy(&self) -> f64 {
        self.geom.len() as f64
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> CVec {
        let mut h = CVec::zeros(self.geom.len());
        let scale = 1.0 / (self.paths as f64).sqrt();
        for _ in 0..self.paths {
            let (psi, omega) = self.draw_direction(rng);
            let g = complex_gaussian_from(1, rng)[0] * scale;
            h += array_response_cosines(&self.geom, psi, omega) * g;
        }
        h
    }
}
