use std::f64::consts::{FRAC_2_PI, PI, TAU};

use kerr_qpd::wigner::*;
use kerr_qpd::{Error, KerrState64};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact() -> WignerOptions {
    WignerOptions { exact_bessel: true, ..Default::default() }
}

fn coherent_w(s: &KerrState64, b: C) -> f64 {
    FRAC_2_PI * (-2.0 * (b - s.alpha).norm_sqr()).exp()
}

/// β samples spread over the bright part of the state.
fn samples(s: &KerrState64, n: usize, seed: u64) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = s.alpha.norm();
    let centre = s.alpha.arg() + 2.0 * s.gamma * a * a;
    (0..n)
        .map(|_| {
            let r = (a + rng.gen_range(-1.5..1.5)).max(0.05);
            let ph = centre + rng.gen_range(-1.0..1.0) * (1.5 / a.max(1.0) + 2.0 * s.gamma.abs() * a);
            C::from_polar(r, ph)
        })
        .collect()
}

#[test]
fn coherent_peak_at_zero_gamma() {
    let s = KerrState64::from_polar(3.0, 0.4, 0.0);
    let w = wigner_point(&s, s.alpha, &WignerOptions::default()).unwrap();
    assert!((w.value() - FRAC_2_PI).abs() < 1e-15);
    let b = s.alpha + C::new(0.3, -0.2);
    assert!((wigner_point(&s, b, &WignerOptions::default()).unwrap().value() - coherent_w(&s, b)).abs() < 1e-15);
}

#[test]
fn exact_path_matches_fock_on_circle() {
    let s = KerrState64::from_polar(4.0, 0.0, 0.01);
    for i in 0..24 {
        let b = C::from_polar(4.0, -PI + TAU * i as f64 / 24.0);
        let w = wigner_point(&s, b, &exact()).unwrap().value();
        let f = wigner_fock_oracle(&s, b, 60).unwrap();
        assert!((w - f).abs() <= 1e-8, "beta={b}: {w} vs {f}");
    }
}

#[test]
fn oracle_chain_agrees() {
    let s = KerrState64::from_polar(2.5, 0.3, 0.01);
    for b in samples(&s, 32, 7) {
        let q = wigner_qseries_oracle(&s, b, 0).unwrap();
        let f = wigner_fock_oracle(&s, b, 120).unwrap();
        let km = find_kmax(&s, b, &exact()).unwrap().kmax;
        let fe = wigner_fourier_exact(&s, b, km).unwrap();
        let p = wigner_point(&s, b, &exact()).unwrap().value();
        for (name, v) in [("qseries", q), ("fourier", fe), ("point", p)] {
            assert!((v - f).abs() <= 1e-6, "{name} at beta={b}: {v} vs fock {f}");
        }
        assert!((fe - p).abs() <= 1e-12 * fe.abs().max(1e-300) + 1e-300, "fourier vs point: {fe} vs {p}");
    }
}

#[test]
fn qseries_matches_fock() {
    let s = KerrState64::from_polar(2.0, 0.0, 0.05);
    for b in samples(&s, 16, 11) {
        let q = wigner_qseries_oracle(&s, b, 0).unwrap();
        let f = wigner_fock_oracle(&s, b, 60).unwrap();
        assert!((q - f).abs() <= 1e-6, "beta={b}: {q} vs {f}");
    }
}

#[test]
fn qseries_trivial_cases() {
    let s = KerrState64::from_polar(1.0, 0.0, 0.0);
    let w = wigner_qseries_oracle(&s, C::new(1.0, 0.0), 0).unwrap();
    assert!((w - FRAC_2_PI).abs() <= 1e-8);
    let vac = KerrState64::from_polar(0.0, 0.0, 0.2);
    let b = C::new(0.4, -0.7);
    assert!((wigner_qseries_oracle(&vac, b, 0).unwrap() - coherent_w(&vac, b)).abs() < 1e-14);
    let big = KerrState64::from_polar(3.5, 0.0, 0.01);
    assert!(matches!(wigner_qseries_oracle(&big, b, 0), Err(Error::OracleOutOfRange { .. })));
}

#[test]
fn fock_trivial_cases() {
    let vac = KerrState64::from_polar(0.0, 0.0, 0.3);
    let b = C::new(-0.2, 0.5);
    assert!((wigner_fock_oracle(&vac, b, 20).unwrap() - coherent_w(&vac, b)).abs() < 1e-15);
    let s = KerrState64::from_polar(3.0, 0.7, 0.0);
    for b in samples(&s, 12, 3) {
        assert!((wigner_fock_oracle(&s, b, 60).unwrap() - coherent_w(&s, b)).abs() <= 1e-10);
    }
}

#[test]
fn fock_cutoff_self_consistency() {
    let s = KerrState64::from_polar(5.0, 0.0, 0.01);
    let b = C::new(5.0, 0.0);
    let lo = wigner_fock_oracle(&s, b, 80).unwrap();
    let hi = wigner_fock_oracle(&s, b, 120).unwrap();
    assert!((lo - hi).abs() <= 1e-10, "{lo} vs {hi}");
    assert!(matches!(wigner_fock_oracle(&s, b, 40), Err(Error::CutoffInsufficient { .. })));
    assert!(matches!(wigner_fock_oracle(&s, b, 401), Err(Error::Precondition(_))));
}

#[test]
fn fourier_exact_collapses_at_zero_gamma() {
    let s = KerrState64::from_polar(3.0, 0.2, 0.0);
    for b in samples(&s, 8, 5) {
        let w = wigner_fourier_exact(&s, b, 80).unwrap();
        assert!((w - coherent_w(&s, b)).abs() <= 1e-10, "beta={b}");
    }
    let far = KerrState64::from_polar(20.0, 0.0, 0.01);
    assert!(matches!(wigner_fourier_exact(&far, C::new(20.0, 0.0), 10), Err(Error::OracleOutOfRange { .. })));
}

#[test]
fn fourier_exact_matches_qseries() {
    // the alternating q-series loses about 1e-16·e^{2|α|²}, which is 7e-9 at |α| = 3
    let s = KerrState64::from_polar(2.5, 0.0, 0.01);
    for b in samples(&s, 8, 9) {
        let km = find_kmax(&s, b, &WignerOptions { rel_eps: 1e-12, ..exact() }).unwrap().kmax;
        let w = wigner_fourier_exact(&s, b, km).unwrap();
        let q = wigner_qseries_oracle(&s, b, 0).unwrap();
        assert!((w - q).abs() <= 1e-9, "beta={b}: {w} vs {q}");
    }
}

#[test]
fn terms_beyond_the_window_are_negligible() {
    // the series stops at kΓ < π/2; the full Fourier series agrees with the Fock oracle
    for &(a, g, tol) in &[(3.0, 0.01, 1e-14), (4.0, 0.02, 1e-14), (3.0, 0.05, 1e-6)] {
        let s = KerrState64::from_polar(a, 0.0, g);
        let cap = WignerOptions::default().cap_for(g);
        for b in samples(&s, 6, 13) {
            let inside = wigner_fourier_exact(&s, b, cap).unwrap();
            let full = wigner_fourier_exact(&s, b, 4 * cap).unwrap();
            let fock = wigner_fock_oracle(&s, b, 80).unwrap();
            assert!((full - fock).abs() <= 1e-12, "a={a} g={g} beta={b}: {full} vs {fock}");
            assert!((inside - full).abs() <= tol, "a={a} g={g} beta={b}: {inside} vs {full}");
        }
    }
}

#[test]
fn ring_matches_point() {
    let s = KerrState64::from_polar(30.0, 0.5, 1e-3);
    let opts = WignerOptions::default();
    for &r in &[27.0, 30.0, 32.5] {
        let ring = WignerRing::new(&s, r, &opts).unwrap();
        for i in 0..16 {
            let ph = 0.5 + 1.8 + 0.1 * (i as f64 - 8.0);
            let a = ring.eval(ph).value();
            let b = wigner_point(&s, C::from_polar(r, ph), &opts).unwrap().value();
            assert!((a - b).abs() <= 1e-12, "r={r} ph={ph}: {a} vs {b}");
        }
    }
}

#[test]
fn imaginary_residue_and_bound() {
    for &(a, g) in &[(10.0, 1e-2), (50.0, 1e-3), (300.0, 1e-5), (1000.0, 2e-6)] {
        let s = KerrState64::from_polar(a, 0.0, g);
        for b in samples(&s, 16, 21) {
            let e = wigner_point_detailed(&s, b, &WignerOptions::default()).unwrap();
            assert!(e.imag_residue <= 1e-8, "a={a} beta={b}: residue {}", e.imag_residue);
            assert!(e.value.value().abs() <= FRAC_2_PI + 1e-8, "a={a} beta={b}");
        }
    }
    let s = KerrState64::from_polar(4.0, 0.0, 0.02);
    for b in samples(&s, 16, 2) {
        assert!(wigner_fock_oracle(&s, b, 60).unwrap().abs() <= FRAC_2_PI + 1e-8);
        assert!(wigner_qseries_oracle(&KerrState64::from_polar(2.5, 0.0, 0.02), b * 0.6, 0).unwrap().abs() <= FRAC_2_PI + 1e-8);
    }
}

#[test]
fn rotational_covariance() {
    let s = KerrState64::from_polar(2.5, 0.2, 0.03);
    let rot = C::from_polar(1.0, 1.1);
    let t = KerrState64::new(s.alpha * rot, s.gamma);
    for b in samples(&s, 8, 4) {
        // the q-series turns a 1-ulp change of its rotated inputs into about 1e-16·e^{2|α|²}
        let q_floor = 1e-15 * (2.0 * s.alpha.norm_sqr()).exp();
        let pairs = [
            (wigner_point(&s, b, &exact()).unwrap().value(), wigner_point(&t, b * rot, &exact()).unwrap().value(), 1e-14),
            (wigner_fock_oracle(&s, b, 60).unwrap(), wigner_fock_oracle(&t, b * rot, 60).unwrap(), 1e-14),
            (wigner_qseries_oracle(&s, b, 0).unwrap(), wigner_qseries_oracle(&t, b * rot, 0).unwrap(), q_floor),
        ];
        for (x, y, floor) in pairs {
            assert!((x - y).abs() <= 1e-12 * x.abs() + floor, "beta={b}: {x} vs {y}");
        }
    }
    let s = KerrState64::from_polar(60.0, 0.0, 5e-4);
    let t = KerrState64::new(s.alpha * rot, s.gamma);
    for b in samples(&s, 8, 8) {
        let x = wigner_point(&s, b, &WignerOptions::default()).unwrap().value();
        let y = wigner_point(&t, b * rot, &WignerOptions::default()).unwrap().value();
        assert!((x - y).abs() <= 1e-12 * x.abs() + 1e-14, "beta={b}: {x} vs {y}");
    }
}

#[test]
fn kmax_is_monotone_in_tolerance() {
    let s = KerrState64::from_polar(100.0, 0.0, 2e-4);
    for &r in &[95.0, 100.0, 103.0] {
        let b = C::new(r, 0.0);
        let mut prev = u64::MAX;
        for &eps in &[1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2] {
            let k = find_kmax(&s, b, &WignerOptions { rel_eps: eps, ..Default::default() }).unwrap().kmax;
            assert!(k <= prev, "r={r} eps={eps}: {k} > {prev}");
            prev = k;
        }
    }
}

#[test]
fn kmax_close_to_full_scan() {
    let s = KerrState64::from_polar(100.0, 0.0, 2e-4);
    let opts = WignerOptions::default();
    for &r in &[98.0, 100.0, 101.0] {
        let b = C::new(r, 0.0);
        let got = find_kmax(&s, b, &opts).unwrap();
        assert!(!got.truncated);
        let cap = opts.cap_for(s.gamma);
        let reference = full_scan_kmax(&s, r, cap, opts.rel_eps);
        let ratio = got.kmax as f64 / reference as f64;
        assert!((0.5..=2.0).contains(&ratio), "r={r}: {} vs scan {reference}", got.kmax);
    }
}

/// Exhaustive reference: last `k ≤ cap` whose term is within `rel_eps` of the
/// largest, plus one.
fn full_scan_kmax(s: &KerrState64, r: f64, cap: u64, rel_eps: f64) -> u64 {
    let a = s.alpha.norm();
    let mags: Vec<f64> = (0..=cap).map(|k| asymptotic_term_log_mag(a, r, s.gamma, k as f64)).collect();
    let peak = mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let last = mags.iter().rposition(|&m| m >= peak + rel_eps.ln()).unwrap();
    last as u64 + 1
}

/// Independent closed-form `ln|T_k|` from the uniform Bessel asymptotic at
/// continuous `k`.
fn asymptotic_term_log_mag(a: f64, b: f64, g: f64, k: f64) -> f64 {
    let x = 4.0 * a * b;
    let th = k * g;
    let z = C::from_polar(x, th);
    let s = (z * z + k * k).sqrt();
    let w = C::new(k, 0.0) / z;
    let asinh = (w + (w * w + 1.0).sqrt()).ln();
    let v = s - k * asinh - 0.25 * (z * z + k * k).ln();
    let kerr = a * a * (1.0 - C::from_polar(1.0, 2.0 * th));
    (v + kerr).re - x - 2.0 * (b - a).powi(2)
}

#[test]
fn kmax_grows_linearly_with_amplitude() {
    let ratio = |a: f64| {
        let s = KerrState64::from_polar(a, 0.0, 2.0 / (a * a));
        let k = find_kmax(&s, s.alpha, &WignerOptions::default()).unwrap();
        assert!(!k.truncated);
        k.kmax as f64 / a
    };
    let amps = [1e2_f64, 1e3, 1e4, 3e4];
    let pts: Vec<(f64, f64)> = amps.iter().map(|&a| (a.ln(), (ratio(a) * a).ln())).collect();
    let slope = fit_slope(&pts);
    assert!((0.8..=1.2).contains(&slope), "exponent {slope}");
    // k_max/|α| settles at sqrt(8 ln(1/rel_eps)) once kΓ is small at the tail
    let limit = (8.0 * 1e8_f64.ln()).sqrt();
    assert!((ratio(3e4) / limit - 1.0).abs() < 0.01);
    let small: Vec<f64> = [25.0, 50.0, 100.0, 200.0, 400.0].iter().map(|&a| ratio(a)).collect();
    assert!(small.windows(2).all(|w| w[0] < w[1] && w[1] < limit));
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn find_kmax_rejects_zero_gamma_and_reports_truncation() {
    let s = KerrState64::from_polar(10.0, 0.0, 0.0);
    assert!(matches!(find_kmax(&s, s.alpha, &WignerOptions::default()), Err(Error::Precondition(_))));
    let s = KerrState64::from_polar(100.0, 0.0, 2e-4);
    let k = find_kmax(&s, s.alpha, &WignerOptions { kmax_cap: Some(5), ..Default::default() }).unwrap();
    assert!(k.truncated && k.kmax == 5);
    let bad = WignerOptions { rel_eps: 0.5, ..Default::default() };
    assert!(find_kmax(&s, s.alpha, &bad).is_err());
}

#[test]
fn asymptotic_path_refuses_small_arguments() {
    let s = KerrState64::from_polar(2.0, 0.0, 0.01);
    assert!(matches!(wigner_point(&s, C::new(2.0, 0.0), &WignerOptions::default()), Err(Error::UseExact { .. })));
}

#[test]
fn beta_split_cases() {
    assert!(beta_split(&KerrState64::from_polar(20.0, 0.0, 0.4 / 400.0)).is_none());
    let s = beta_split(&KerrState64::from_polar(20.0, 0.0, 1e3)).unwrap();
    assert!((s - 20.0).abs() < 1e-9);
    let s = beta_split(&KerrState64::from_polar(20.0, 0.0, 0.5 / 400.0)).unwrap();
    assert!((s - 10.0).abs() < 1e-12);
}

#[test]
fn beta_split_matches_term_profile() {
    let (a, g) = (100.0, 1e-3);
    let bs = beta_split(&KerrState64::from_polar(a, 0.0, g)).unwrap();
    // curvature of ln|T_k| at k = 0 is positive (a dip between two maxima)
    // for |β| < β_s and negative beyond
    let curvature = |b: f64| {
        let h = 0.5;
        asymptotic_term_log_mag(a, b, g, h) * 2.0 - 2.0 * asymptotic_term_log_mag(a, b, g, 0.0)
    };
    let radii: Vec<f64> = (0..2000).map(|i| 90.0 + 0.005 * i as f64).collect();
    let flip = radii.windows(2).find(|w| curvature(w[0]) > 0.0 && curvature(w[1]) <= 0.0).map(|w| w[1]).unwrap();
    assert!((flip - bs).abs() <= 0.05 * bs, "profile flips at {flip}, formula {bs}");
    assert!(curvature(0.9 * bs) > 0.0 && curvature(1.1 * bs) < 0.0);
}

#[test]
fn negativity_appears_in_shear_regime() {
    let s = KerrState64::from_polar(50.0, 0.0, 1e-3);
    let centre = 2.0 * s.gamma * 2500.0;
    let half = 6.0 * (1.0 / 50.0 + 2.0 * 1e-3 * 50.0);
    let mut min = f64::INFINITY;
    for i in 0..40 {
        let ring = WignerRing::new(&s, 46.0 + 8.0 * i as f64 / 39.0, &WignerOptions::default()).unwrap();
        for j in 0..120 {
            min = min.min(ring.eval(centre - half + 2.0 * half * j as f64 / 119.0).value());
        }
    }
    assert!(min < 0.0, "min W = {min}");
    let small = KerrState64::from_polar(5.0, 0.0, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fock_min = (0..400)
        .map(|_| C::from_polar(rng.gen_range(3.0..7.0), rng.gen_range(-PI..PI)))
        .map(|b| wigner_fock_oracle(&small, b, 90).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(fock_min < 0.0);
}
