use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use umm_core::circuit::*;
use umm_core::geometry::*;
use umm_core::numerics::{complex_gaussian, hermitian_eig, QuadratureGrid, RngStream};
use umm_core::{CMat, BOLTZMANN};

mod common;
use common::*;

#[test]
fn dipole_impedance_matches_finite_difference() {
    let (l, l0) = (1.0, 0.1);
    for p in [[0.5, 0.0, 0.0], [0.3, 0.2, 0.4], [0.0, 0.0, 0.7], [1.7, -0.4, 0.9]] {
        let fd = fd_dipole(p, l, l0);
        let z = mutual_impedance_z_dipoles(&p, l, l0).unwrap();
        assert!((z - fd).norm() <= 1e-6 * fd.norm(), "{p:?}: {z} vs {fd}");
    }
}

#[test]
fn loop_impedance_matches_finite_difference() {
    let (l, a0) = (1.0, 0.01);
    for p in [[0.5, 0.0, 0.0], [0.3, 0.2, 0.4], [0.1, 0.1, 1.1]] {
        let fd = fd_loop(p, l, a0);
        let z = mutual_impedance_z_loops(&p, l, a0).unwrap();
        assert!((z - fd).norm() <= 1e-6 * fd.norm(), "{p:?}: {z} vs {fd}");
    }
}

#[test]
fn impedance_is_even() {
    let p = [0.3, -0.2, 0.45];
    let q = [-0.3, 0.2, -0.45];
    assert_eq!(mutual_impedance_z_dipoles(&p, 1.0, 0.1).unwrap(), mutual_impedance_z_dipoles(&q, 1.0, 0.1).unwrap());
    assert!(mutual_impedance_z_dipoles(&[0.0; 3], 1.0, 0.1).is_err());
}

#[test]
fn impedance_radiation_slope() {
    let z1 = mutual_impedance_z_dipoles(&[100.0, 0.0, 0.0], 1.0, 0.1).unwrap().norm();
    let z2 = mutual_impedance_z_dipoles(&[1000.0, 0.0, 0.0], 1.0, 0.1).unwrap().norm();
    let slope = (z2 / z1).log10();
    assert!((slope + 1.0).abs() < 0.02, "{slope}");
}

#[test]
fn self_resistance_matches_disk_integral() {
    let l = 1.0;
    let r = self_resistance(0.1 * l, l).unwrap();
    let oracle = disk_integral(0.1 * l, l);
    assert!((r - oracle).abs() <= 1e-6 * oracle, "{r} vs {oracle}");
}

#[test]
fn self_resistance_scaling_and_limit() {
    let l = 0.01;
    let a = self_resistance(0.001, l).unwrap();
    let b = self_resistance(0.002, l).unwrap();
    assert!((b / a - 4.0).abs() < 1e-12);
    let near = mutual_impedance_z_dipoles(&[1e-4 * l, 0.0, 0.0], l, 0.001).unwrap().re;
    assert!((near / a - 1.0).abs() < 0.01);
    assert!(self_resistance(0.0, l).is_err());
}

#[test]
fn single_pair_follows_inverse_distance() {
    let l = 1.0;
    let tx = build_ula(1, 0.5, l).unwrap();
    let near = impedance_set(&tx, &tx.translated([0.0, 100.0, 0.0]), 0.1, 50.0, 0.0).unwrap();
    let far = impedance_set(&tx, &tx.translated([0.0, 200.0, 0.0]), 0.1, 50.0, 0.0).unwrap();
    assert_eq!(near.zrt.shape(), (1, 1));
    let ratio = near.zrt[(0, 0)].norm() / far.zrt[(0, 0)].norm();
    assert!((ratio - 2.0).abs() < 0.01);
}

fn ula_set(n: usize, spacing: f64) -> ImpedanceSet {
    let l = 1.0;
    let tx = build_ula(n, spacing, l).unwrap();
    let rx = build_ula(n, 0.5, l).unwrap().translated([0.0, 0.0, 20.0]);
    impedance_set(&tx, &rx, 0.1, 50.0, 0.0).unwrap()
}

#[test]
fn transmit_block_symmetric_and_passive() {
    let set = ula_set(16, 0.5);
    assert!((&set.zt - set.zt.transpose()).norm() <= 1e-12 * set.zt.norm());
    let re = set.zt.map(|z| Complex64::from(z.re));
    let (vals, _) = hermitian_eig(&re).unwrap();
    let tr: f64 = re.diagonal().iter().map(|z| z.re).sum();
    assert!(*vals.last().unwrap() >= -1e-8 * tr);
}

#[test]
fn matched_diagonal_channel() {
    let zrt = CMat::from_fn(2, 3, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 1.0));
    let set = ImpedanceSet { zt: CMat::identity(3, 3).scale(50.0), zr: CMat::identity(2, 2), zrt: zrt.clone(), r0: 50.0 };
    let h = end_to_end_channel(&set).unwrap();
    assert!((h - zrt.unscale(100.0)).norm() < 1e-14);
}

#[test]
fn scalar_channel() {
    let set = ImpedanceSet {
        zt: CMat::from_element(1, 1, Complex64::new(70.0, 5.0)),
        zr: CMat::identity(1, 1),
        zrt: CMat::from_element(1, 1, Complex64::new(0.3, -0.1)),
        r0: 50.0,
    };
    let h = end_to_end_channel(&set).unwrap()[(0, 0)];
    assert!((h - Complex64::new(0.3, -0.1) / Complex64::new(120.0, 5.0)).norm() < 1e-15);
}

#[test]
fn coupling_changes_channel_at_close_spacing() {
    let set = ula_set(4, 0.2);
    let coupled = end_to_end_channel(&set).unwrap();
    let diag = CMat::from_diagonal(&set.zt.diagonal());
    let uncoupled = end_to_end_channel(&ImpedanceSet { zt: diag, ..set.clone() }).unwrap();
    assert!((coupled - uncoupled).norm() > 1e-3 * set.zrt.norm() / set.r0);
}

#[test]
fn transmit_power_values() {
    let set = ula_set(2, 0.125);
    assert_eq!(tx_power(&[Complex64::new(0.0, 0.0); 2], &set.zt).unwrap(), 0.0);
    let single = ula_set(1, 0.5);
    let i = Complex64::new(0.3, 0.4);
    let p = tx_power(&[i], &single.zt).unwrap();
    assert!((p - 0.5 * i.norm_sqr() * single.zt[(0, 0)].re).abs() < 1e-15);
    assert!(set.zt[(0, 1)].re > 0.0);
    let ones = [Complex64::new(1.0, 0.0); 2];
    let coupled = tx_power(&ones, &set.zt).unwrap();
    let naive = 0.5 * (set.zt[(0, 0)].re + set.zt[(1, 1)].re);
    assert!(coupled > naive);
    assert!(tx_power(&ones[..1], &set.zt).is_err());
}

#[test]
fn johnson_noise() {
    let lna = LnaParams { rv: 0.0, gi: 0.0, beta: 0.0, temperature: 290.0 };
    let rn = noise_covariance(&CMat::identity(3, 3).scale(75.0), &lna).unwrap();
    let want = CMat::identity(3, 3).scale(4.0 * BOLTZMANN * 290.0 * 75.0);
    assert!((rn - &want).norm() < 1e-12 * want.norm());
}

#[test]
fn voltage_noise_dominated() {
    let lna = LnaParams { rv: 1e6, gi: 0.0, beta: 0.0, temperature: 290.0 };
    let zr = ula_set(4, 0.5).zt;
    let rn = noise_covariance(&zr, &lna).unwrap().unscale(4.0 * BOLTZMANN * 290.0 * 1e6);
    assert!((rn - CMat::identity(4, 4)).norm() < 1e-4);
}

#[test]
fn current_noise_dominated() {
    let gi = 1e3;
    let lna = LnaParams { rv: 0.0, gi, beta: -1.0, temperature: 290.0 };
    let zr = ula_set(4, 0.5).zt;
    let rn = noise_covariance(&zr, &lna).unwrap();
    let want = (&zr * zr.adjoint()).scale(4.0 * BOLTZMANN * 290.0 * gi);
    assert!((rn - &want).norm() <= 1e-9 * want.norm());
}

#[test]
fn noise_covariance_psd_for_passive_loads() {
    let lna = LnaParams::default();
    for seed in 0..100 {
        let zr = random_passive(6, seed);
        let rn = noise_covariance(&zr, &lna).unwrap();
        let (vals, _) = hermitian_eig(&rn).unwrap();
        assert!(*vals.last().unwrap() >= -1e-10 * rn.norm());
    }
}

#[test]
fn lna_defaults() {
    let d = LnaParams::default();
    assert_eq!((d.rv, d.gi, d.beta, d.temperature), (5.0, 2e-3, 0.0, 290.0));
}

#[test]
fn isotropic_pattern_radiation() {
    let grid = QuadratureGrid::sphere(72, 36);
    let s = CMat::from_element(1, grid.len(), Complex64::new(1.0, 0.0));
    let b = radiation_matrix(&s, &grid).unwrap();
    assert!((b[(0, 0)].re - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn orthogonal_patterns_diagonal() {
    let grid = QuadratureGrid::sphere(72, 36);
    let s = CMat::from_fn(2, grid.len(), |p, j| {
        let (_, el) = grid.nodes[j];
        Complex64::new(if p == 0 { 1.0 } else { el.sin() }, 0.0)
    });
    let b = radiation_matrix(&s, &grid).unwrap();
    assert!(b[(0, 1)].norm() < 1e-12);
    assert!((b[(1, 1)].re - 4.0 * PI / 3.0).abs() < 1e-9);
    assert!(radiation_matrix(&CMat::zeros(2, 3), &grid).is_err());
}

#[test]
fn lossless_two_port_scattering() {
    let grid = QuadratureGrid::sphere(72, 36);
    // patterns normalized so the radiated fraction stays below one
    let s = CMat::from_fn(2, grid.len(), |p, j| {
        let (az, el) = grid.nodes[j];
        let v = if p == 0 { 0.8 } else { 0.5 * 3f64.sqrt() * el.sin() + 0.2 * az.cos() * el.cos() };
        Complex64::new(v / (4.0 * PI).sqrt(), 0.0)
    });
    let b = radiation_matrix(&s, &grid).unwrap();
    let (vals, u) = hermitian_eig(&b).unwrap();
    assert!(vals.iter().all(|v| *v <= 1.0 + 1e-12 && *v >= -1e-12));
    // S = U diag(e^{jα}) (I − Λ)^{1/2} U^T for real symmetric B
    let d = CMat::from_diagonal(&umm_core::CVec::from_iterator(
        2,
        vals.iter().zip([0.3, -1.1]).map(|(v, a)| Complex64::from_polar((1.0 - v).sqrt(), a)),
    ));
    let ur = u.map(|z| Complex64::from(z.re));
    assert!((&ur - &u).norm() < 1e-9 || (&ur + &u).norm() < 1e-9 || u.iter().all(|z| z.im.abs() < 1e-9));
    let sm = &ur * d * ur.transpose();
    let rebuilt = CMat::identity(2, 2) - &sm * sm.adjoint();
    assert!((rebuilt - &b).norm() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rigid_translation_invariance(dx in -5.0f64..5.0, dy in -5.0f64..5.0, dz in -5.0f64..5.0) {
        let tx = build_ula(3, 0.4, 1.0).unwrap();
        let rx = build_ula(2, 0.5, 1.0).unwrap().translated([0.0, 0.0, 3.0]);
        let a = impedance_set(&tx, &rx, 0.1, 50.0, 0.0).unwrap();
        let b = impedance_set(&tx.translated([dx, dy, dz]), &rx.translated([dx, dy, dz]), 0.1, 50.0, 0.0).unwrap();
        prop_assert!((&a.zrt - &b.zrt).norm() <= 1e-9 * a.zrt.norm());
        prop_assert!((&a.zt - &b.zt).norm() <= 1e-9 * a.zt.norm());
        prop_assert!((&a.zr - &b.zr).norm() <= 1e-9 * a.zr.norm());
    }

    #[test]
    fn noise_covariance_exactly_hermitian(seed in 0u64..1000) {
        let rn = noise_covariance(&random_passive(4, seed), &LnaParams::default()).unwrap();
        prop_assert_eq!(&rn, &rn.adjoint());
    }

    #[test]
    fn channel_linear_in_cross_block(a in -3.0f64..3.0, seed in 0u64..1000) {
        let set = ula_set(3, 0.3);
        let other = CMat::from_fn(3, 3, |i, j| complex_gaussian(1, &RngStream::new(seed, (i * 3 + j) as u64))[0]);
        let combo = ImpedanceSet { zrt: set.zrt.scale(a) + &other, ..set.clone() };
        let h1 = end_to_end_channel(&set).unwrap();
        let h2 = end_to_end_channel(&ImpedanceSet { zrt: other, ..set.clone() }).unwrap();
        let h = end_to_end_channel(&combo).unwrap();
        prop_assert!((h - (h1.scale(a) + &h2)).norm() <= 1e-12 * (h2.norm() + h1.norm()));
    }

    #[test]
    fn azimuthal_symmetry(rho in 0.1f64..3.0, z in -3.0f64..3.0, a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let p = [rho * a.cos(), rho * a.sin(), z];
        let q = [rho * b.cos(), rho * b.sin(), z];
        let zp = mutual_impedance_z_dipoles(&p, 1.0, 0.1).unwrap();
        let zq = mutual_impedance_z_dipoles(&q, 1.0, 0.1).unwrap();
        prop_assert!((zp - zq).norm() <= 1e-12 * zp.norm());
    }
}
