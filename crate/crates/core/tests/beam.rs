use std::f64::consts::PI;

use proptest::prelude::*;
use umm_core::beam::*;
use umm_core::channel::array_response;
use umm_core::geometry::*;
use umm_core::numerics::{sinc, RngStream};
use rand::Rng;

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn focused_gain_is_m() {
    let g = build_upa(16, 16, 0.005, 0.005, 0.01).unwrap();
    let focus = [0.3, -0.2, 2.0];
    let spec = focus_phases(&g, &focus).unwrap();
    let ag = array_gain(&g, &spec, &focus).unwrap();
    assert!((ag - 256.0).abs() < 1e-9 * 256.0);
}

#[test]
fn far_focus_matches_plane_wave() {
    let g = build_upa(8, 8, 0.005, 0.005, 0.01).unwrap();
    let df = region_bounds(&g).fraunhofer;
    let spec = focus_phases(&g, &[0.0, 0.0, 100.0 * df]).unwrap();
    let s = array_response(&g, 0.0, 0.0);
    // relative phases after removing the common offset
    let diffs: Vec<f64> = spec
        .phases
        .iter()
        .zip(s.iter())
        .map(|(p, s)| {
            let d = p - spec.phases[0] + s.arg();
            (d + PI).rem_euclid(2.0 * PI) - PI
        })
        .collect();
    let max = diffs.iter().cloned().fold(f64::MIN, f64::max);
    let min = diffs.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max - min < 0.01);
}

#[test]
fn single_antenna_gain_one() {
    let g = build_ula(1, 0.5, 1.0).unwrap();
    let spec = focus_phases(&g, &[0.0, 0.0, 5.0]).unwrap();
    assert!((array_gain(&g, &spec, &[3.0, 1.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn random_phases_give_unit_gain_on_average() {
    let g = build_upa(8, 8, 0.5, 0.5, 1.0).unwrap();
    let mut rng = RngStream::new(3, 0).generator();
    let rx = [0.0, 0.0, 20.0];
    let mut acc = 0.0;
    for _ in 0..1000 {
        let phases = (0..64).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
        let spec = BeamSpec { focus: rx, phases };
        acc += array_gain(&g, &spec, &rx).unwrap();
    }
    assert!((acc / 1000.0 - 1.0).abs() < 0.2);
}

#[test]
fn taper_values() {
    let (n, d, l) = (32usize, 0.5, 1.0);
    assert!((angular_taper(n, d, l, 0.0) - 1024.0).abs() < 1e-9);
    let half = (0.443 * l / (n as f64 * d)).asin();
    assert!((angular_taper(n, d, l, half) / 512.0 - 1.0).abs() < 0.01);
    let null = (l / (n as f64 * d)).asin();
    assert!(angular_taper(n, d, l, null) < 1e-20);
}

#[test]
fn beamwidth_half_wavelength() {
    for n in [32usize, 64, 100] {
        let bw = beamwidth_3db(n, 0.5, 1.0).unwrap();
        assert!((bw - 1.772 / n as f64).abs() < 1e-12);
    }
}

#[test]
fn beamwidth_matches_half_power_search() {
    for n in [32usize, 48, 128] {
        for spacing in [0.25, 0.5] {
            let m = (n * n) as f64;
            let phi = bisect(|p| angular_taper(n, spacing, 1.0, p) - m / 2.0, 0.0, (0.9 / (n as f64 * spacing)).asin());
            let bw = beamwidth_3db(n, spacing, 1.0).unwrap();
            assert!((2.0 * phi / bw - 1.0).abs() < 0.05, "n={n}");
        }
    }
}

#[test]
fn beamwidth_rejects_tiny_aperture() {
    assert!(beamwidth_3db(0, 0.5, 1.0).is_err());
}

#[test]
fn sinc_half_power_point() {
    assert!((sinc(0.443).powi(2) - 0.5).abs() < 0.005);
}

#[test]
fn depth_profile_values() {
    assert_eq!(depth_profile(0.0).unwrap(), 1.0);
    assert!((depth_profile(1.25).unwrap() - 0.5).abs() < 0.005);
    // both branches against a Simpson evaluation of the Fresnel integrals
    for x in [1e-5, 0.999e-3, 1.001e-3, 0.3] {
        let t = f64::sqrt(x);
        let n = 2000;
        let h = t / n as f64;
        let (mut c, mut s) = (0.0, 0.0);
        for i in 0..=n {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let u = i as f64 * h;
            c += w * (PI * u * u / 2.0).cos();
            s += w * (PI * u * u / 2.0).sin();
        }
        let (c, s) = (c * h / 3.0, s * h / 3.0);
        let oracle = ((c * c + s * s) / x).powi(2);
        assert!((depth_profile(x).unwrap() - oracle).abs() < 1e-10, "x={x}");
    }
    assert!(depth_profile(-1.0).is_err());
}

#[test]
fn depth_gain_at_focus() {
    assert_eq!(depth_gain(10.0, 10.0, 400.0).unwrap(), 1.0);
}

fn numeric_beamdepth(f: f64, df: f64) -> (f64, f64) {
    let g = |z: f64| depth_gain(f, z, df).unwrap() - 0.5;
    let lower = bisect(g, f * 1e-3, f);
    let upper = bisect(g, f, 1e3 * f);
    (lower, upper)
}

#[test]
fn beamdepth_twentieth_of_fraunhofer() {
    let df = 250.0;
    let bd = beamdepth_3db(df / 20.0, df).unwrap();
    assert!((bd.depth - df / 15.0).abs() < 1e-9);
    let (lo, hi) = numeric_beamdepth(df / 20.0, df);
    assert!(((hi - lo) / bd.depth - 1.0).abs() < 0.02);
}

#[test]
fn beamdepth_fifteenth_of_fraunhofer() {
    let df = 250.0;
    let bd = beamdepth_3db(df / 15.0, df).unwrap();
    let (lo, hi) = numeric_beamdepth(df / 15.0, df);
    assert!(((hi - lo) / bd.depth - 1.0).abs() < 0.02);
}

#[test]
fn beamdepth_infinite_beyond_tenth() {
    for f in [25.0, 30.0, 100.0, 1000.0] {
        let bd = beamdepth_3db(f, 250.0).unwrap();
        assert!(!bd.is_finite());
        assert!(bd.depth.is_infinite());
    }
    // the axial gain never drops to half beyond the focus
    let f = 25.0;
    for z in [30.0, 100.0, 1e4, 1e7] {
        assert!(depth_gain(f, z, 250.0).unwrap() > 0.5 - 0.005);
    }
}

#[test]
fn beamdepth_vanishes_with_focus() {
    let bd = beamdepth_3db(1e-6, 250.0).unwrap();
    assert!(bd.depth < 1e-12);
}

proptest! {
    #[test]
    fn depth_gain_symmetric(f in 0.1f64..100.0, z in 0.1f64..100.0, df in 1.0f64..1000.0) {
        let a = depth_gain(f, z, df).unwrap();
        let b = depth_gain(z, f, df).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn gain_never_exceeds_m(seed in 0u64..1000, x in -1.0f64..1.0, y in -1.0f64..1.0, z in 0.1f64..10.0) {
        let g = build_upa(4, 4, 0.5, 0.5, 1.0).unwrap();
        let mut rng = RngStream::new(seed, 1).generator();
        let phases = (0..16).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
        let spec = BeamSpec { focus: [0.0, 0.0, 1.0], phases };
        prop_assert!(array_gain(&g, &spec, &[x, y, z]).unwrap() <= 16.0 + 1e-9);
    }

    #[test]
    fn beamwidth_halves_with_aperture(n in 2usize..100, s in 0.25f64..1.0) {
        let a = beamwidth_3db(n, s, 1.0).unwrap();
        let b = beamwidth_3db(2 * n, s, 1.0).unwrap();
        prop_assert!((a - 2.0 * b).abs() < 1e-12);
    }
}
