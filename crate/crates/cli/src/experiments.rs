//! Registry of reproducible experiments and their drivers.

use std::f64::consts::PI;

use rand::Rng;
use umm_core::beam::{beamdepth_3db, depth_gain};
use umm_core::channel::{
    correlation_matrix, gaussian_cluster_profile, isotropic_correlation, los_channel, los_mimo_channel, LosMode,
    RayleighSampler,
};
use umm_core::circuit::{end_to_end_channel, impedance_set, mutual_impedance_z_dipoles, self_resistance, ImpedanceSet};
use umm_core::dof::{bbu_rate, dof_1d, dof_2d, effective_rank};
use umm_core::estimate::{
    build_ff_dictionary, nmse_sweep, reference_subspace, ChannelSource, EstimatorKind, SparseChannel, SweepPoint,
    SweepSpec,
};
use umm_core::fields::{aperture_gain, near_field_factor, subdivided_aperture_gain};
use umm_core::geometry::{build_ula, build_upa, region_bounds, ArrayGeometry};
use umm_core::mux::{lmmse_combiners, optimal_spacing, su_capacity, uplink_se, Allocation, UplinkScenario};
use umm_core::numerics::{hermitian_eig, svd, QuadratureGrid, RngStream};
use umm_core::{CMat, Result};

use crate::config::{ArrayConfig, RunConfig, ScatteringConfig, SweepConfig};
use crate::output::{Cell, Plot, Report, Series, Table};

/// Defaults an experiment starts from before the file and flags apply.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub trials: usize,
    pub snr_db: f64,
    pub array: ArrayConfig,
    pub scattering: ScatteringConfig,
    pub sweep: SweepConfig,
}

pub struct Experiment {
    pub id: &'static str,
    pub figure: &'static str,
    pub summary: &'static str,
    pub defaults: fn() -> Defaults,
    pub run: fn(&RunConfig) -> Result<Report>,
}

pub fn registry() -> Vec<Experiment> {
    vec![
        Experiment { id: "nf-factor", figure: "near-field amplitude factor", summary: "|1 - j/(kz) - 1/(kz)^2| versus distance", defaults: nf_defaults, run: nf_factor },
        Experiment { id: "aperture-gain", figure: "aperture gain loss", summary: "whole versus subdivided square aperture gain", defaults: aperture_defaults, run: aperture },
        Experiment { id: "beam", figure: "beamfocusing depth", summary: "axial gain of focused beams and their 3 dB depth", defaults: beam_defaults, run: beam },
        Experiment { id: "beamdepth", figure: "beamfocusing depth", summary: "3 dB beamdepth at one focus (--F 0.05dF)", defaults: beam_defaults, run: beamdepth },
        Experiment { id: "fig4-mu", figure: "multi-user SE", summary: "uplink LMMSE SE, exact versus far-field model", defaults: mu_defaults, run: fig4_mu },
        Experiment { id: "fig5-su", figure: "single-user SE", summary: "LoS MIMO SE versus transmit antenna spacing", defaults: su_defaults, run: fig5_su },
        Experiment { id: "fig6-ula", figure: "correlation eigenvalues", summary: "isotropic eigenvalues of a ULA for several spacings", defaults: ula_defaults, run: fig6 },
        Experiment { id: "fig6-upa", figure: "correlation eigenvalues", summary: "isotropic eigenvalues of a UPA for several spacings", defaults: upa_defaults, run: fig6 },
        Experiment { id: "fig9", figure: "LS and MMSE NMSE", summary: "NMSE versus pilot length, isotropic and clustered", defaults: fig9_defaults, run: fig9 },
        Experiment { id: "fig10", figure: "NMSE versus spacing", summary: "LS, RS-LS and MMSE NMSE versus antenna spacing", defaults: fig10_defaults, run: fig10 },
        Experiment { id: "fig11", figure: "sparse estimation", summary: "LS, RS-LS and OMP NMSE versus pilot length", defaults: fig11_defaults, run: fig11 },
        Experiment { id: "bbu", figure: "baseband rate", summary: "baseband unit data rate for sub-6 GHz and mmWave", defaults: nf_defaults, run: bbu },
        Experiment { id: "circuit-demo", figure: "mutual coupling", summary: "dipole mutual impedance and coupled channel gain", defaults: circuit_defaults, run: circuit_demo },
    ]
}

pub fn find(id: &str) -> Option<Experiment> {
    registry().into_iter().find(|e| e.id == id)
}

fn base(trials: usize, nx: usize, ny: usize, spacing: f64, wavelength: f64) -> Defaults {
    Defaults {
        trials,
        snr_db: 10.0,
        array: ArrayConfig { nx, ny, spacing, wavelength },
        scattering: ScatteringConfig { azimuths_deg: vec![0.0, 45.0, -45.0], std_deg: 10.0, paths: 3 },
        sweep: SweepConfig { values: Vec::new(), pilot_lengths: Vec::new(), users: Vec::new(), focus: 0.05 },
    }
}

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

fn log_steps(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn nf_defaults() -> Defaults {
    let mut d = base(1, 1, 1, 0.5, 0.01);
    d.sweep.values = steps(0.05, 5.0, 0.05);
    d
}

fn aperture_defaults() -> Defaults {
    let mut d = base(1, 10, 10, 0.5, 1.0);
    d.sweep.values = vec![1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0, 50.0, 100.0, 200.0];
    d
}

fn beam_defaults() -> Defaults {
    let mut d = base(1, 100, 50, 1.0, 0.01);
    d.sweep.values = vec![1.0 / 40.0, 1.0 / 20.0, 1.0 / 15.0, 1.0 / 12.0, 1.0 / 10.0, 1.0 / 5.0];
    d
}

fn mu_defaults() -> Defaults {
    let mut d = base(5, 32, 16, 0.5, 0.01);
    d.snr_db = 0.0;
    d.sweep.users = vec![10, 20, 50, 100];
    d
}

fn su_defaults() -> Defaults {
    let mut d = base(1, 16, 1, 0.5, 0.01);
    d.snr_db = 20.0;
    d.sweep.values = steps(0.25, 20.0, 0.25);
    d
}

fn ula_defaults() -> Defaults {
    let mut d = base(1, 64, 1, 0.5, 1.0);
    d.sweep.values = vec![0.5, 0.25, 1.0 / 6.0];
    d
}

fn upa_defaults() -> Defaults {
    let mut d = base(1, 16, 16, 0.5, 1.0);
    d.sweep.values = vec![0.5, 0.25];
    d
}

fn fig9_defaults() -> Defaults {
    let mut d = base(500, 8, 8, 0.25, 1.0);
    d.sweep.pilot_lengths = vec![1, 2, 4, 8, 12, 16, 24, 32, 48, 64, 80, 96, 128];
    d
}

fn fig10_defaults() -> Defaults {
    let mut d = base(500, 8, 8, 0.25, 1.0);
    d.sweep.values = vec![0.5, 1.0 / 3.0, 0.25, 0.2, 1.0 / 6.0, 1.0 / 7.0, 0.125];
    d
}

fn fig11_defaults() -> Defaults {
    let mut d = base(100, 8, 8, 0.25, 1.0);
    d.sweep.pilot_lengths = vec![4, 8, 12, 16, 24, 32, 40, 48, 56, 64, 80, 96];
    d
}

fn circuit_defaults() -> Defaults {
    let mut d = base(1, 4, 1, 0.5, 1.0);
    d.sweep.values = steps(0.05, 3.0, 0.05);
    d
}

fn geometry(a: &ArrayConfig, spacing: f64) -> Result<ArrayGeometry> {
    let d = spacing * a.wavelength;
    if a.ny == 1 {
        build_ula(a.nx, d, a.wavelength)
    } else {
        build_upa(a.nx, a.ny, d, d, a.wavelength)
    }
}

fn noise_from_db(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}

fn plot(name: &str, title: &str, x: &str, y: &str, log_x: bool, log_y: bool, series: Vec<Series>) -> Plot {
    Plot {
        name: name.into(),
        title: title.into(),
        x_label: x.into(),
        y_label: y.into(),
        log_x,
        log_y,
        series,
    }
}

fn series(label: &str, points: Vec<(f64, f64)>) -> Series {
    Series { label: label.into(), points }
}

fn nf_factor(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.array.wavelength;
    let mut t = Table::new("nf_factor", &["z_over_lambda", "factor"]);
    let mut pts = Vec::new();
    for &z in &cfg.sweep.values {
        let f = near_field_factor(z * l, l)?;
        t.push(vec![z.into(), f.into()]);
        pts.push((z, f));
    }
    Ok(Report {
        tables: vec![t],
        plots: vec![plot("nf_factor", "Near-field amplitude factor", "z / wavelength", "factor", false, false, vec![series("factor", pts)])],
        notes: vec![],
    })
}

fn aperture(cfg: &RunConfig) -> Result<Report> {
    let a = &cfg.array;
    let l = a.wavelength;
    let (w, h) = (a.nx as f64 * a.spacing * l, a.ny as f64 * a.spacing * l);
    let max = w * h / (l * l / (4.0 * PI));
    let mut t = Table::new("aperture_gain", &["z_over_lambda", "whole", "subdivided"]);
    let (mut p1, mut p2) = (Vec::new(), Vec::new());
    for &z in &cfg.sweep.values {
        let whole = aperture_gain(w, h, z * l, l)? / max;
        let split = subdivided_aperture_gain(w, h, a.nx, a.ny, z * l, l)? / max;
        t.push(vec![z.into(), whole.into(), split.into()]);
        p1.push((z, whole));
        p2.push((z, split));
    }
    Ok(Report {
        tables: vec![t],
        plots: vec![plot(
            "aperture_gain",
            "Normalized aperture gain",
            "z / wavelength",
            "gain / maximum",
            true,
            false,
            vec![series("whole aperture", p1), series("subdivided", p2)],
        )],
        notes: vec![],
    })
}

fn fraunhofer(cfg: &RunConfig) -> Result<f64> {
    Ok(region_bounds(&geometry(&cfg.array, cfg.array.spacing)?).fraunhofer)
}

fn beam(cfg: &RunConfig) -> Result<Report> {
    let df = fraunhofer(cfg)?;
    let foci = [1.0 / 20.0, 1.0 / 15.0, 1.0 / 10.0];
    let zs = log_steps(df / 1000.0, 10.0 * df, 200);
    let mut gains = Table::new("axial_gain", &["z_m", "gain_f20", "gain_f15", "gain_f10"]);
    let mut curves = vec![Vec::new(); foci.len()];
    for &z in &zs {
        let mut row = vec![Cell::from(z)];
        for (i, f) in foci.iter().enumerate() {
            let g = depth_gain(f * df, z, df)?;
            row.push(g.into());
            curves[i].push((z, g));
        }
        gains.push(row);
    }
    let mut depth = Table::new("beamdepth", &["focus_over_df", "focus_m", "lower_m", "upper_m", "depth_m"]);
    for &frac in &cfg.sweep.values {
        let bd = beamdepth_3db(frac * df, df)?;
        depth.push(vec![frac.into(), (frac * df).into(), bd.lower.into(), bd.upper.into(), bd.depth.into()]);
    }
    let labels = ["F = dF/20", "F = dF/15", "F = dF/10"];
    Ok(Report {
        tables: vec![gains, depth],
        plots: vec![plot(
            "axial_gain",
            "Normalized gain along the focus direction",
            "distance (m)",
            "gain",
            true,
            false,
            curves.into_iter().zip(labels).map(|(c, l)| series(l, c)).collect(),
        )],
        notes: vec![format!("Fraunhofer distance {df} m"), SPACING_NOTE.into()],
    })
}

const SPACING_NOTE: &str =
    "the 100x50 array spanning 1 x 0.5 m at 0.01 m wavelength is described as half-wavelength spaced but has one-wavelength spacing";

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let below = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn beamdepth(cfg: &RunConfig) -> Result<Report> {
    let df = fraunhofer(cfg)?;
    let f = cfg.sweep.focus * df;
    let bd = beamdepth_3db(f, df)?;
    // independent half-power search on the axial gain
    let g = |z: f64| depth_gain(f, z, df).unwrap_or(f64::NAN) - 0.5;
    let lower = bisect(g, f * 1e-3, f);
    let upper = if bd.is_finite() { bisect(g, f, 1e3 * f) } else { f64::INFINITY };
    let mut t = Table::new(
        "beamdepth",
        &["fraunhofer_m", "focus_m", "lower_m", "upper_m", "depth_m", "search_lower_m", "search_upper_m"],
    );
    t.push(vec![df.into(), f.into(), bd.lower.into(), bd.upper.into(), bd.depth.into(), lower.into(), upper.into()]);
    Ok(Report { tables: vec![t], plots: vec![], notes: vec![] })
}

fn fig4_mu(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.array.wavelength;
    let g = geometry(&cfg.array, cfg.array.spacing)?;
    let df = region_bounds(&g).fraunhofer;
    // per-antenna SNR at the Fraunhofer distance
    let noise = (l / (4.0 * PI * df)).powi(2) * noise_from_db(cfg.snr_db);
    let mut t = Table::new("fig4_mu", &["users", "se_exact", "se_far", "sse_exact", "sse_far"]);
    let (mut pe, mut pf) = (Vec::new(), Vec::new());
    for &k in &cfg.sweep.users {
        let (mut sum_exact, mut sum_far) = (0.0, 0.0);
        for drop in 0..cfg.trials {
            let mut rng = RngStream::new(cfg.seed, k as u64).child(drop as u64).generator();
            let mut exact = CMat::zeros(g.len(), k);
            let mut far = CMat::zeros(g.len(), k);
            for u in 0..k {
                let phi = rng.random_range(-PI / 3.0..=PI / 3.0);
                let d = rng.random_range(0.06 * df..=2.0 * df);
                let p = [d * phi.sin(), 0.0, d * phi.cos()];
                exact.set_column(u, &los_channel(&g, &p, LosMode::Exact)?);
                far.set_column(u, &los_channel(&g, &p, LosMode::FarField)?);
            }
            let truth = UplinkScenario::new(exact, vec![1.0; k], noise)?;
            let model = UplinkScenario::new(far, vec![1.0; k], noise)?;
            sum_exact += uplink_se(&truth, &lmmse_combiners(&truth)?)?.iter().sum::<f64>();
            sum_far += uplink_se(&truth, &lmmse_combiners(&model)?)?.iter().sum::<f64>();
        }
        let (se, sf) = (sum_exact / cfg.trials as f64, sum_far / cfg.trials as f64);
        t.push(vec![k.into(), (se / k as f64).into(), (sf / k as f64).into(), se.into(), sf.into()]);
        pe.push((k as f64, se));
        pf.push((k as f64, sf));
    }
    let notes = vec![
        format!("UEs uniform in azimuth [-60, 60] deg and distance [0.06, 2] x d_F = {df} m; free-space amplitude"),
        "far-field curve uses combiners from planar-wavefront channels applied to the exact channels".to_string(),
        format!("desk scale {}x{} array; {SPACING_NOTE}", cfg.array.nx, cfg.array.ny),
    ];
    Ok(Report {
        tables: vec![t],
        plots: vec![plot(
            "fig4_mu",
            "Uplink sum SE",
            "number of UEs",
            "sum SE (bit/s/Hz)",
            true,
            false,
            vec![series("exact model", pe), series("far-field model", pf)],
        )],
        notes,
    })
}

fn su_channel(cfg: &RunConfig, distance: f64, spacing: f64, mode: LosMode) -> Result<CMat> {
    let l = cfg.array.wavelength;
    let rx = build_ula(cfg.array.nx, cfg.array.spacing * l, l)?;
    let tx = build_ula(cfg.array.nx, spacing, l)?;
    let sources: Vec<[f64; 3]> = tx.positions.iter().map(|p| [p[0], p[1], -distance]).collect();
    los_mimo_channel(&rx, &sources, mode)
}

fn fig5_su(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.array.wavelength;
    let m = cfg.array.nx;
    let distance = 50.0;
    let beta = (l / (4.0 * PI * distance)).powi(2);
    // single-layer SNR: unit power over all receive antennas
    let noise = m as f64 * beta * noise_from_db(cfg.snr_db);
    let mut t = Table::new("fig5_su", &["tx_spacing_m", "se_exact", "se_paraxial"]);
    let (mut pe, mut pp) = (Vec::new(), Vec::new());
    for &dt in &cfg.sweep.values {
        let se = su_capacity(&su_channel(cfg, distance, dt, LosMode::Exact)?, 1.0, noise, Allocation::WaterFilling)?;
        let sp = su_capacity(&su_channel(cfg, distance, dt, LosMode::Paraxial)?, 1.0, noise, Allocation::WaterFilling)?;
        t.push(vec![dt.into(), se.into(), sp.into()]);
        pe.push((dt, se));
        pp.push((dt, sp));
    }
    let rule = optimal_spacing(l, distance, m, cfg.array.spacing * l);
    let exact = svd(&su_channel(cfg, distance, rule, LosMode::Exact)?)?.values;
    let parax = svd(&su_channel(cfg, distance, rule, LosMode::Paraxial)?)?.values;
    let mut sv = Table::new("singular_values", &["index", "exact", "paraxial"]);
    for (i, (a, b)) in exact.iter().zip(&parax).enumerate() {
        sv.push(vec![i.into(), (*a).into(), (*b).into()]);
    }
    Ok(Report {
        tables: vec![t, sv],
        plots: vec![plot(
            "fig5_su",
            "Single-user LoS MIMO SE",
            "transmit antenna spacing (m)",
            "SE (bit/s/Hz)",
            false,
            false,
            vec![series("exact", pe), series("paraxial", pp)],
        )],
        notes: vec![format!("link distance {distance} m; spacing rule gives {rule} m")],
    })
}

fn fig6(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.array.wavelength;
    let mut eig = Table::new("eigenvalues", &["spacing_over_lambda", "index", "eigenvalue"]);
    let mut ranks = Table::new("ranks", &["spacing_over_lambda", "effective_rank", "dof"]);
    let mut curves = Vec::new();
    for &sp in &cfg.sweep.values {
        let g = geometry(&cfg.array, sp)?;
        let (vals, _) = hermitian_eig(&isotropic_correlation(&g, 1.0))?;
        let top = vals[0];
        let mut pts = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            let v = (v / top).max(0.0);
            eig.push(vec![sp.into(), (i + 1).into(), v.into()]);
            pts.push(((i + 1) as f64, v));
        }
        let dof = if cfg.array.ny == 1 {
            dof_1d(cfg.array.nx as f64 * sp * l, l)
        } else {
            dof_2d(cfg.array.nx as f64 * sp * l, cfg.array.ny as f64 * sp * l, l).eta
        };
        ranks.push(vec![sp.into(), effective_rank(&vals, 0.99)?.into(), dof.into()]);
        curves.push(series(&format!("spacing {sp:.4} wavelengths"), pts));
    }
    Ok(Report {
        tables: vec![eig, ranks],
        plots: vec![plot("eigenvalues", "Isotropic correlation eigenvalues", "index", "normalized eigenvalue", false, true, curves)],
        notes: vec!["effective rank counts eigenvalues holding 99% of the trace".into()],
    })
}

fn clustered(cfg: &RunConfig, g: &ArrayGeometry) -> Result<CMat> {
    let grid = QuadratureGrid::default();
    let centers: Vec<(f64, f64)> = cfg.scattering.azimuths_deg.iter().map(|a| (a.to_radians(), 0.0)).collect();
    let profile = gaussian_cluster_profile(&centers, cfg.scattering.std_deg.to_radians(), 1.0, &grid)?;
    correlation_matrix(g, &profile, &grid)
}

fn sweep_spec(cfg: &RunConfig, estimators: Vec<EstimatorKind>, taus: Vec<usize>) -> SweepSpec {
    SweepSpec {
        estimators,
        pilot_lengths: taus,
        trials: cfg.trials,
        power: 1.0,
        noise: noise_from_db(cfg.snr_db),
        seed: cfg.seed,
        correlation: None,
        subspace: None,
        dictionary: None,
    }
}

fn nmse_table(name: &str, points: &[SweepPoint]) -> Table {
    let mut t = Table::new(name, &["tau_p", "estimator", "nmse", "stderr"]);
    for p in points {
        t.push(vec![p.pilot_length.into(), p.estimator.name().into(), p.result.nmse.into(), p.result.stderr.into()]);
    }
    t
}

fn nmse_series(points: &[SweepPoint], kind: EstimatorKind, label: &str) -> Series {
    series(
        label,
        points
            .iter()
            .filter(|p| p.estimator == kind)
            .map(|p| (p.pilot_length as f64, p.result.nmse))
            .collect(),
    )
}

fn fig9(cfg: &RunConfig) -> Result<Report> {
    let g = geometry(&cfg.array, cfg.array.spacing)?;
    let envs = [("isotropic", isotropic_correlation(&g, 1.0)), ("clustered", clustered(cfg, &g)?)];
    let mut tables = Vec::new();
    let mut curves = Vec::new();
    let mut dots = Table::new("fig9_rank", &["environment", "rank", "nmse", "stderr"]);
    for (name, r) in envs {
        let (vals, _) = hermitian_eig(&r)?;
        let rank = effective_rank(&vals, 0.99)?;
        let mut spec = sweep_spec(cfg, vec![EstimatorKind::Ls, EstimatorKind::Mmse], cfg.sweep.pilot_lengths.clone());
        spec.correlation = Some(r.clone());
        let source = RayleighSampler::new(&r)?;
        let points = nmse_sweep(&spec, &source)?;
        let mut at_rank = spec.clone();
        at_rank.estimators = vec![EstimatorKind::Mmse];
        at_rank.pilot_lengths = vec![rank];
        let dot = nmse_sweep(&at_rank, &source)?;
        dots.push(vec![name.into(), rank.into(), dot[0].result.nmse.into(), dot[0].result.stderr.into()]);
        curves.push(nmse_series(&points, EstimatorKind::Ls, &format!("LS, {name}")));
        curves.push(nmse_series(&points, EstimatorKind::Mmse, &format!("MMSE, {name}")));
        tables.push(nmse_table(&format!("fig9_{name}"), &points));
    }
    tables.push(dots);
    Ok(Report {
        tables,
        plots: vec![plot("fig9", "NMSE versus pilot length", "pilot length", "NMSE", false, true, curves)],
        notes: vec![
            "rank is the number of eigenvalues holding 99% of the trace".into(),
            "cluster elevations are 0 with the azimuth spread in both angles".into(),
        ],
    })
}

fn fig10(cfg: &RunConfig) -> Result<Report> {
    let mut t = Table::new("fig10", &["spacing_over_lambda", "estimator", "tau_p", "nmse", "stderr"]);
    let mut curves: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut add = |label: &str, x: f64, y: f64| match curves.iter_mut().find(|c| c.0 == label) {
        Some(c) => c.1.push((x, y)),
        None => curves.push((label.to_string(), vec![(x, y)])),
    };
    for &sp in &cfg.sweep.values {
        let g = geometry(&cfg.array, sp)?;
        let m = g.len();
        let r = clustered(cfg, &g)?;
        let ubar = reference_subspace(&isotropic_correlation(&g, 1.0), 0.9999)?;
        let rbar = ubar.ncols();
        let mut spec = sweep_spec(cfg, vec![EstimatorKind::Ls, EstimatorKind::Mmse, EstimatorKind::Rsls], vec![m]);
        spec.correlation = Some(r.clone());
        spec.subspace = Some(ubar);
        let source = RayleighSampler::new(&r)?;
        let mut points = nmse_sweep(&spec, &source)?;
        if rbar < m {
            spec.estimators = vec![EstimatorKind::Mmse, EstimatorKind::Rsls];
            spec.pilot_lengths = vec![rbar];
            points.extend(nmse_sweep(&spec, &source)?);
        }
        for p in &points {
            t.push(vec![sp.into(), p.estimator.name().into(), p.pilot_length.into(), p.result.nmse.into(), p.result.stderr.into()]);
            let which = if p.pilot_length == m { "M" } else { "r" };
            add(&format!("{} tau={which}", p.estimator.name()), sp, p.result.nmse);
        }
    }
    Ok(Report {
        tables: vec![t],
        plots: vec![plot(
            "fig10",
            "NMSE versus antenna spacing",
            "spacing / wavelength",
            "NMSE",
            false,
            true,
            curves.into_iter().map(|(l, p)| series(&l, p)).collect(),
        )],
        notes: vec!["RS-LS subspace holds 99.99% of the isotropic correlation trace".into()],
    })
}

fn fig11(cfg: &RunConfig) -> Result<Report> {
    let g = geometry(&cfg.array, cfg.array.spacing)?;
    let dict = build_ff_dictionary(&g, 1.0 / 40.0)?;
    let ubar = reference_subspace(&isotropic_correlation(&g, 1.0), 0.9999)?;
    let rbar = ubar.ncols();
    let source = SparseChannel { geom: g.clone(), paths: cfg.scattering.paths, max_angle: 0.9 * PI / 2.0, on_grid: None };
    let mut spec = sweep_spec(
        cfg,
        vec![EstimatorKind::Ls, EstimatorKind::Rsls, EstimatorKind::Omp],
        cfg.sweep.pilot_lengths.clone(),
    );
    spec.subspace = Some(ubar);
    spec.dictionary = Some((dict.clone(), cfg.scattering.paths));
    let points = nmse_sweep(&spec, &source as &dyn ChannelSource)?;
    Ok(Report {
        tables: vec![nmse_table("fig11", &points)],
        plots: vec![plot(
            "fig11",
            "Sparse channel NMSE",
            "pilot length",
            "NMSE",
            false,
            true,
            vec![
                nmse_series(&points, EstimatorKind::Ls, "LS"),
                nmse_series(&points, EstimatorKind::Rsls, "RS-LS"),
                nmse_series(&points, EstimatorKind::Omp, "OMP"),
            ],
        )],
        notes: vec![
            format!("dictionary of {} atoms on a 1/40 direction-cosine grid; RS-LS subspace dimension {rbar}", dict.len()),
            "path directions are continuous, so OMP sees off-grid error".into(),
            "RS-LS rows appear only where the pilot length reaches the subspace dimension".into(),
        ],
    })
}

fn bbu(_cfg: &RunConfig) -> Result<Report> {
    let mut t = Table::new("bbu", &["scenario", "area_m2", "bandwidth_hz", "bits", "carrier_hz", "rate_bps"]);
    for (name, area, bw, bits, fc) in [("sub-6 GHz", 10.0, 1e8, 16.0, 3e9), ("mmWave", 10.0, 1e9, 16.0, 3e10)] {
        t.push(vec![name.into(), area.into(), bw.into(), bits.into(), fc.into(), bbu_rate(area, bw, bits, fc).into()]);
    }
    Ok(Report { tables: vec![t], plots: vec![], notes: vec![] })
}

fn circuit_demo(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.array.wavelength;
    let l0 = 0.1 * l;
    let r0 = 50.0;
    let rself = self_resistance(l0, l)?;
    let mut z = Table::new("mutual_impedance", &["separation_over_lambda", "re_z_ohm", "im_z_ohm"]);
    let (mut re, mut im) = (Vec::new(), Vec::new());
    for &s in &cfg.sweep.values {
        let v = mutual_impedance_z_dipoles(&[s * l, 0.0, 0.0], l, l0)?;
        z.push(vec![s.into(), v.re.into(), v.im.into()]);
        re.push((s, v.re / rself));
        im.push((s, v.im / rself));
    }
    let mut c = Table::new("coupling", &["spacing_over_lambda", "coupled_gain", "uncoupled_gain"]);
    for &s in cfg.sweep.values.iter().filter(|s| **s >= 0.1 && **s <= 1.0) {
        let tx = build_ula(cfg.array.nx, s * l, l)?;
        let rx = build_ula(cfg.array.nx, cfg.array.spacing * l, l)?.translated([0.0, 0.0, 10.0 * l]);
        let set = impedance_set(&tx, &rx, l0, r0, 0.0)?;
        let coupled = end_to_end_channel(&set)?.norm_squared();
        let diag = CMat::from_diagonal(&set.zt.diagonal());
        let uncoupled = end_to_end_channel(&ImpedanceSet { zt: diag, ..set })?.norm_squared();
        c.push(vec![s.into(), coupled.into(), uncoupled.into()]);
    }
    Ok(Report {
        tables: vec![z, c],
        plots: vec![plot(
            "mutual_impedance",
            "Mutual impedance of broadside dipoles",
            "separation / wavelength",
            "Z / self resistance",
            false,
            false,
            vec![series("real part", re), series("imaginary part", im)],
        )],
        notes: vec![format!("dipole length {l0} m, self resistance {rself} ohm, reference resistance {r0} ohm")],
    })
}
