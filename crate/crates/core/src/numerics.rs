//! Special functions, quadrature, dense linear algebra and seeded sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{contract, domain, Result};
use crate::{CMat, CVec};

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd entries.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn gk_adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth == 0 || (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
        return val;
    }
    let m = 0.5 * (a + b);
    gk_adapt(f, a, m, 0.5 * tol, depth - 1) + gk_adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Kronrod (7/15) integral of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    gk_adapt(&f, a, b, tol, 60)
}

/// Fresnel integrals `C(x) = ∫₀ˣ cos(πt²/2) dt`, `S(x) = ∫₀ˣ sin(πt²/2) dt`.
///
/// Odd in `x`. Quadrature for `|x| ≤ 16`, asymptotic auxiliary functions beyond.
pub fn fresnel_cs(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return domain(format!("fresnel_cs: non-finite argument {x}"));
    }
    if x < 0.0 {
        let (c, s) = fresnel_cs(-x)?;
        return Ok((-c, -s));
    }
    if x == 0.0 {
        return Ok((0.0, 0.0));
    }
    if x > 16.0 {
        return Ok(fresnel_asymptotic(x));
    }
    let c = integrate(|t| (FRAC_PI_2 * t * t).cos(), 0.0, x, 1e-12);
    let s = integrate(|t| (FRAC_PI_2 * t * t).sin(), 0.0, x, 1e-12);
    Ok((c, s))
}

fn fresnel_asymptotic(x: f64) -> (f64, f64) {
    let z = PI * x * x;
    let z2 = z * z;
    // f(x) ~ (1/πx) Σ (-1)^n (4n-1)!! / z^{2n}, g(x) ~ (1/πx) Σ (-1)^n (4n+1)!! / z^{2n+1}
    let mut f = 0.0;
    let mut g = 0.0;
    let mut tf = 1.0;
    let mut tg = 1.0 / z;
    for n in 0..6 {
        f += tf;
        g += tg;
        let k = 4.0 * n as f64;
        tf *= -(k + 1.0) * (k + 3.0) / z2;
        tg *= -(k + 3.0) * (k + 5.0) / z2;
    }
    f /= PI * x;
    g /= PI * x;
    let (s, c) = (FRAC_PI_2 * x * x).sin_cos();
    (0.5 + f * s - g * c, 0.5 - f * c - g * s)
}

/// Normalized sinc `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let a = PI * x;
        a.sin() / a
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|t| c + h * t).collect(),
        w.iter().map(|v| v * h).collect(),
    )
}

/// Tensor-product angular quadrature in (azimuth, elevation) with the
/// solid-angle weight `cos(elevation)` folded into `weights`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Front hemisphere: azimuth and elevation both in `[-π/2, π/2]`.
    /// Total measure `2π`.
    pub fn hemisphere(n_az: usize, n_el: usize) -> Self {
        Self::tensor(n_az, (-FRAC_PI_2, FRAC_PI_2), n_el)
    }

    /// Full sphere: azimuth in `[-π, π]`. Total measure `4π`.
    pub fn sphere(n_az: usize, n_el: usize) -> Self {
        Self::tensor(n_az, (-PI, PI), n_el)
    }

    fn tensor(n_az: usize, az: (f64, f64), n_el: usize) -> Self {
        let (pa, wa) = gauss_legendre_on(n_az, az.0, az.1);
        let (pe, we) = gauss_legendre_on(n_el, -FRAC_PI_2, FRAC_PI_2);
        let mut nodes = Vec::with_capacity(n_az * n_el);
        let mut weights = Vec::with_capacity(n_az * n_el);
        for (a, wa) in pa.iter().zip(&wa) {
            for (e, we) in pe.iter().zip(&we) {
                nodes.push((*a, *e));
                weights.push(wa * we * e.cos());
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of the weights.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&(a, e), w)| w * f(a, e))
            .sum()
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self::hemisphere(180, 90)
    }
}

fn check_finite(a: &CMat, what: &str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        contract(format!("{what}: non-finite entry"))
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
///
/// Returns `(values, vectors)` where column `i` of `vectors` pairs with `values[i]`.
pub fn hermitian_eig(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !a.is_square() {
        return contract("hermitian_eig: matrix not square");
    }
    check_finite(a, "hermitian_eig")?;
    let norm = a.norm();
    let skew = (a - a.adjoint()).norm();
    if skew > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return contract(format!(
            "hermitian_eig: not Hermitian (skew {skew:.3e}, norm {norm:.3e})"
        ));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Thin singular value decomposition `A = U diag(values) V^H`, values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

pub fn svd(a: &CMat) -> Result<Svd> {
    check_finite(a, "svd")?;
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(Svd {
            values: vec![],
            u: CMat::zeros(a.nrows(), 0),
            v: CMat::zeros(a.ncols(), 0),
        });
    }
    let dec = SVD::new(a.clone(), true, true);
    let u0 = dec.u.expect("left vectors requested");
    let vt = dec.v_t.expect("right vectors requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let values = order.iter().map(|&i| dec.singular_values[i]).collect();
    let u = CMat::from_fn(a.nrows(), k, |r, c| u0[(r, order[c])]);
    let v = CMat::from_fn(a.ncols(), k, |r, c| vt[(order[c], r)].conj());
    Ok(Svd { values, u, v })
}

/// Moore–Penrose pseudo-inverse; singular values below `rtol × σ_max` are
/// dropped. Also returns the numerical rank.
pub fn pinv(a: &CMat, rtol: f64) -> Result<(CMat, usize)> {
    let dec = svd(a)?;
    let smax = dec.values.first().copied().unwrap_or(0.0);
    let mut out = CMat::zeros(a.ncols(), a.nrows());
    let mut rank = 0;
    for (i, &s) in dec.values.iter().enumerate() {
        if s > rtol * smax && s > 0.0 {
            rank += 1;
            let vi = dec.v.column(i);
            let ui = dec.u.column(i);
            out += (vi * ui.adjoint()).unscale(s);
        }
    }
    Ok((out, rank))
}

/// Hermitian square root via eigen-decomposition, negative eigenvalues clamped to 0.
pub fn hermitian_sqrt(a: &CMat) -> Result<CMat> {
    let (vals, vecs) = hermitian_eig(a)?;
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::from(v.max(0.0).sqrt())),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// Real matrix view of the real part of a complex matrix.
pub fn real_part(a: &CMat) -> DMatrix<f64> {
    a.map(|z| z.re)
}

/// Seed plus stream identifier of a counter-based ChaCha generator.
///
/// Equal pairs replay the same sequence; different stream ids give
/// independent sequences under the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Stream derived from this one for a labelled sub-task.
    pub fn child(&self, index: u64) -> Self {
        // splitmix64 of (stream, index) keeps ids well spread
        let mut z = self
            .stream
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index.wrapping_add(1));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Self::new(self.seed, z ^ (z >> 31))
    }

    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// `n` i.i.d. CN(0,1) draws from a fresh generator on `stream`.
pub fn complex_gaussian(n: usize, stream: &RngStream) -> CVec {
    complex_gaussian_from(n, &mut stream.generator())
}

/// `n` i.i.d. CN(0,1) draws continuing an existing generator.
pub fn complex_gaussian_from<R: Rng>(n: usize, rng: &mut R) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVec::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}
