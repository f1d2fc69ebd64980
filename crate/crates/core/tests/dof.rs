use std::f64::consts::PI;

use proptest::prelude::*;
use umm_core::channel::isotropic_correlation;
use umm_core::dof::*;
use umm_core::geometry::build_ula;
use umm_core::numerics::hermitian_eig;

#[test]
fn line_dof() {
    assert!((dof_1d(64.0 * 0.5, 1.0) - 64.0).abs() < 1e-12);
    assert!((dof_1d(16.0, 1.0) - 32.0).abs() < 1e-12);
    assert!((dof_1d(16.0, 2.0) - 16.0).abs() < 1e-12);
}

#[test]
fn planar_dof() {
    let p = dof_2d(8.0, 8.0, 1.0);
    assert!((p.eta - 64.0 * PI).abs() < 1e-9);
    assert!((p.eta - 201.1).abs() < 0.05);
    assert!((p.ratio - 0.785).abs() < 0.001);
    assert!((p.eta / p.separable - PI / 4.0).abs() < 1e-12);
    assert_eq!(dof_2d(0.0, 3.0, 1.0).eta, 0.0);
}

#[test]
fn effective_rank_trivial() {
    assert_eq!(effective_rank(&vec![1.0; 100], 0.99).unwrap(), 99);
    let mut s = vec![0.0; 10];
    s[3] = 5.0;
    assert_eq!(effective_rank(&s, 0.99).unwrap(), 1);
    assert_eq!(effective_rank(&[3.0, 2.0, 1.0], 1.0).unwrap(), 3);
    assert!(effective_rank(&[], 0.9).is_err());
    assert!(effective_rank(&[1.0], 1.5).is_err());
}

#[test]
fn quarter_wavelength_ula_rank() {
    let g = build_ula(64, 0.25, 1.0).unwrap();
    let (vals, _) = hermitian_eig(&isotropic_correlation(&g, 1.0)).unwrap();
    let r = effective_rank(&vals, 0.99).unwrap();
    assert!((30..=34).contains(&r), "rank {r}");
}

#[test]
fn dof_report_normalizes() {
    let g = build_ula(16, 0.5, 1.0).unwrap();
    let rep = dof_report(&isotropic_correlation(&g, 2.0), 16.0, 0.99).unwrap();
    assert!((rep.eigen_spectrum[0] - 1.0).abs() < 1e-12);
    assert_eq!(rep.effective_rank, 16);
}

#[test]
fn baseband_rates() {
    let r = bbu_rate(10.0, 1e8, 16.0, 3e9);
    assert!((r / 5e12 - 1.0).abs() < 0.02);
    let r2 = bbu_rate(10.0, 1e9, 16.0, 3e10);
    assert!((r2 / r - 1000.0).abs() < 1e-9);
    assert!((r2 / 5e15 - 1.0).abs() < 0.02);
    assert_eq!(bbu_rate(0.0, 1e8, 16.0, 3e9), 0.0);
}

#[test]
fn rf_chain_count() {
    let ap = 0.3;
    assert!((active_rf_chains(4.0 * ap, 0.5, 2.0 / ap).unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(active_rf_chains(5.0, 0.0, 10.0).unwrap(), 0.0);
    assert_eq!(active_rf_chains(5.0, 1.0, 10.0).unwrap(), 50.0);
    assert!(active_rf_chains(5.0, 1.5, 10.0).is_err());
}

proptest! {
    #[test]
    fn rank_monotone_in_capture(v in prop::collection::vec(0.0f64..10.0, 1..40), a in 0.01f64..1.0, b in 0.01f64..1.0) {
        prop_assume!(v.iter().sum::<f64>() > 0.0);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(effective_rank(&v, lo).unwrap() <= effective_rank(&v, hi).unwrap());
        prop_assert!(effective_rank(&v, hi).unwrap() <= v.len());
    }

    #[test]
    fn dof_halves_when_wavelength_doubles(l in 0.1f64..100.0, lambda in 0.001f64..1.0) {
        prop_assert!((dof_1d(l, lambda) - 2.0 * dof_1d(l, 2.0 * lambda)).abs() < 1e-9 * dof_1d(l, lambda));
    }
}
