use std::f64::consts::{FRAC_1_PI, FRAC_2_PI, PI};

use kerr_qpd::grid::*;
use kerr_qpd::wigner::wigner_fock_oracle;
use kerr_qpd::{Error, KerrState64, WignerOptions};
use num_complex::Complex64 as C;

fn opts(workers: usize) -> FieldOptions {
    FieldOptions { workers, ..Default::default() }
}

#[test]
fn auto_window_shapes() {
    let s = KerrState64::from_polar(100.0, 0.3, 0.0);
    let w = auto_window(&s);
    assert_eq!(w.mode, GridMode::Polar);
    assert!((w.extent[0] - 4.0).abs() < 1e-15 && (w.extent[1] - 0.06).abs() < 1e-15);
    assert!((w.center.arg() - 0.3).abs() < 1e-15 && (w.center.norm() - 100.0).abs() < 1e-12);

    let s = KerrState64::from_polar(2700.0, 0.0, 1e-6);
    let w = auto_window(&s);
    assert!((w.extent[1] - 6.0 * (1.0 / 2700.0 + 2e-6 * 2700.0)).abs() < 1e-15);
    assert!((w.extent[1] - 0.0346).abs() < 1e-4);
    assert!((w.center.arg() - kerr_qpd::scalar::wrap_phase(2e-6 * 2700.0 * 2700.0)).abs() < 1e-12);

    let w = auto_window(&KerrState64::from_polar(0.0, 0.0, 0.1));
    assert_eq!(w.mode, GridMode::Cartesian);
    assert_eq!(w.extent, [4.0, 4.0]);
    assert_eq!(w.center, C::new(0.0, 0.0));

    // wide windows are capped at the full circle and clipped at the origin
    let w = auto_window(&KerrState64::from_polar(1.0, 0.0, 0.0));
    assert!((w.extent[1] - PI).abs() < 1e-15);
    assert_eq!(w.range(0), (0.0, 5.0));
}

#[test]
fn spec_validation() {
    let c = C::new(1.0, 0.0);
    assert!(GridSpec::cartesian(c, [1.0, 1.0], [1, 4]).validate().is_err());
    assert!(GridSpec::cartesian(c, [0.0, 1.0], [4, 4]).validate().is_err());
    assert!(GridSpec::polar(c, [1.0, 3.5], [4, 4]).validate().is_err());
    assert!(GridSpec::polar(c, [1.0, PI], [4, 4]).validate().is_ok());
    let s = KerrState64::from_polar(1.0, 0.0, 0.0);
    let bad = GridSpec::cartesian(c, [1.0, 1.0], [1, 1]);
    assert!(matches!(eval_field(&s, &bad, FieldKind::Husimi, &opts(1)), Err(Error::Precondition(_))));
}

#[test]
fn trivial_grid_at_zero_gamma() {
    let s = KerrState64::from_polar(1.0, 0.0, 0.0);
    let spec = GridSpec::cartesian(C::new(1.0, 0.0), [0.5, 0.5], [2, 2]);
    let q = eval_field(&s, &spec, FieldKind::Husimi, &opts(1)).unwrap();
    let w = eval_field(&s, &spec, FieldKind::Wigner, &opts(1)).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let b = spec.node(i, j);
            let d = (b - s.alpha).norm_sqr();
            assert!((q.get(i, j).value() - FRAC_1_PI * (-d).exp()).abs() < 1e-16);
            assert!((w.get(i, j).value() - FRAC_2_PI * (-2.0 * d).exp()).abs() < 1e-16);
        }
    }
    assert_eq!(q.values.len(), 4);
    assert_eq!(q.stats.points, 4);
    assert!(q.stats.kmax.is_none());
}

#[test]
fn node_order_is_row_major() {
    let spec = GridSpec::cartesian(C::new(0.0, 0.0), [1.0, 2.0], [3, 5]);
    assert_eq!(spec.node(0, 0), C::new(-1.0, -2.0));
    assert_eq!(spec.node(2, 4), C::new(1.0, 2.0));
    assert_eq!(spec.node(1, 3), C::new(0.0, 1.0));
    let s = KerrState64::from_polar(0.5, 0.0, 0.0);
    let f = eval_field(&s, &spec, FieldKind::Husimi, &opts(1)).unwrap();
    assert_eq!(f.values[5 + 3], f.get(1, 3));
}

#[test]
fn worker_count_does_not_change_results() {
    let s = KerrState64::from_polar(30.0, 0.2, 1e-3);
    let spec = auto_window(&s).with_resolution([40, 30]);
    for kind in [FieldKind::Husimi, FieldKind::Wigner] {
        let one = eval_field(&s, &spec, kind, &opts(1)).unwrap();
        let four = eval_field(&s, &spec, kind, &opts(4)).unwrap();
        assert_eq!(one.values, four.values);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_field_to(&one, FieldFormat::Json, None, &mut a).unwrap();
        write_field_to(&four, FieldFormat::Json, None, &mut b).unwrap();
        assert_eq!(a, b);
        a.clear();
        b.clear();
        write_field_to(&one, FieldFormat::Csv, None, &mut a).unwrap();
        write_field_to(&four, FieldFormat::Csv, None, &mut b).unwrap();
        assert_eq!(a, b);
    }
    let spec = GridSpec::cartesian(s.alpha, [2.0, 2.0], [12, 12]);
    let one = eval_field(&s, &spec, FieldKind::Wigner, &opts(1)).unwrap();
    let three = eval_field(&s, &spec, FieldKind::Wigner, &opts(3)).unwrap();
    assert_eq!(one.values, three.values);
}

#[test]
fn coherent_husimi_normalisation() {
    let s = KerrState64::from_polar(10.0, 0.4, 0.0);
    let f = eval_field(&s, &auto_window(&s).with_resolution([400, 400]), FieldKind::Husimi, &opts(0)).unwrap();
    assert!((integrate_field(&f) - 1.0).abs() <= 1e-3);
}

#[test]
fn wigner_normalisation_against_fock_field() {
    let s = KerrState64::from_polar(5.0, 0.0, 0.01);
    let o = FieldOptions { wigner: WignerOptions { exact_bessel: true, ..Default::default() }, ..opts(0) };
    let spec = auto_window(&s).with_resolution([400, 400]);
    let w = eval_field(&s, &spec, FieldKind::Wigner, &o).unwrap();
    let total = integrate_field(&w);
    assert!((total - 1.0).abs() <= 1e-2, "{total}");

    let coarse = spec.with_resolution([120, 120]);
    let mut fock = eval_field(&s, &coarse, FieldKind::Wigner, &o).unwrap();
    let fast = integrate_field(&fock);
    for i in 0..120 {
        for j in 0..120 {
            let v = wigner_fock_oracle(&s, coarse.node(i, j), 80).unwrap();
            fock.values[i * 120 + j] = kerr_qpd::LogReal64::from_value(v);
        }
    }
    assert!((integrate_field(&fock) - fast).abs() <= 1e-3);
}

#[test]
fn window_holds_the_husimi_mass() {
    for &a in &[30.0, 100.0] {
        let s = KerrState64::from_polar(a, 0.0, 1e-3);
        let f = eval_field(&s, &auto_window(&s).with_resolution([300, 400]), FieldKind::Husimi, &opts(0)).unwrap();
        let m = integrate_field(&f);
        assert!((0.99..=1.0 + 1e-3).contains(&m), "a={a}: mass {m}");
    }
}

#[test]
fn empty_window_integrates_to_zero() {
    // opposite the mean rotation 2Γ|α|² = 2
    let s = KerrState64::from_polar(10.0, 0.0, 1e-2);
    let spec = GridSpec::cartesian(C::from_polar(10.0, 2.0 - PI), [3.0, 3.0], [60, 60]);
    let q = eval_field(&s, &spec, FieldKind::Husimi, &opts(0)).unwrap();
    assert!(integrate_field(&q).abs() < 1e-6);
    let spec = GridSpec::polar(C::from_polar(10.0, 2.0 - PI), [3.0, 0.2], [60, 60]);
    let w = eval_field(&s, &spec, FieldKind::Wigner, &opts(0)).unwrap();
    assert!(integrate_field(&w).abs() < 1e-6);
}

#[test]
fn field_sign_properties() {
    let s = KerrState64::from_polar(20.0, 0.0, 5e-3);
    let spec = auto_window(&s).with_resolution([80, 80]);
    let q = eval_field(&s, &spec, FieldKind::Husimi, &opts(0)).unwrap();
    assert!(q.values.iter().all(|v| v.sign >= 0));
    assert!(q.min_max().1 <= FRAC_1_PI + 1e-10);

    let c = KerrState64::from_polar(20.0, 0.0, 0.0);
    let w = eval_field(&c, &auto_window(&c).with_resolution([80, 80]), FieldKind::Wigner, &opts(0)).unwrap();
    assert!(w.min_max().0 >= -1e-10);
}

#[test]
fn polar_and_cartesian_windows_agree() {
    let s = KerrState64::from_polar(3.0, 0.5, 0.05);
    let polar = GridSpec::polar(C::new(0.0, 0.0), [9.0, PI], [300, 300]);
    let cart = GridSpec::cartesian(C::new(0.0, 0.0), [9.0, 9.0], [300, 300]);
    let p = integrate_field(&eval_field(&s, &polar, FieldKind::Husimi, &opts(0)).unwrap());
    let c = integrate_field(&eval_field(&s, &cart, FieldKind::Husimi, &opts(0)).unwrap());
    assert!((p - c).abs() <= 1e-3, "{p} vs {c}");
}

#[test]
fn husimi_ridge_twists_with_the_sign_of_gamma() {
    // more photons rotate further, so the angular centroid moves with |β|
    for &g in &[2e-4, -2e-4] {
        let s = KerrState64::from_polar(100.0, 0.0, g);
        let spec = auto_window(&s).with_resolution([60, 200]);
        let f = eval_field(&s, &spec, FieldKind::Husimi, &opts(0)).unwrap();
        let phis = spec.axis(1);
        let centroid = |i: usize| {
            let (mut m, mut mp) = (0.0, 0.0);
            for (j, &ph) in phis.iter().enumerate() {
                let v = f.get(i, j).value();
                m += v;
                mp += v * ph;
            }
            mp / m
        };
        let drift = centroid(40) - centroid(20);
        assert!(drift.signum() == g.signum(), "g={g}: drift {drift}");
    }
}

#[test]
fn node_failures_carry_coordinates() {
    let s = KerrState64::from_polar(3.0, 0.0, 0.01);
    let spec = GridSpec::cartesian(C::new(0.0, 0.0), [1.0, 1.0], [3, 3]);
    match eval_field(&s, &spec, FieldKind::Wigner, &opts(2)) {
        Err(Error::Node { i, j, source, .. }) => {
            assert_eq!((i, j), (0, 0));
            assert!(matches!(*source, Error::UseExact { .. }));
        }
        other => panic!("expected a node error, got {other:?}"),
    }
}

#[test]
fn csv_layout() {
    let s = KerrState64::from_polar(1.0, 0.0, 0.0);
    let spec = GridSpec::cartesian(C::new(1.0, 0.0), [0.5, 0.5], [2, 2]);
    let f = eval_field(&s, &spec, FieldKind::Husimi, &opts(1)).unwrap();
    let mut out = Vec::new();
    write_field_to(&f, FieldFormat::Csv, None, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "x,p,value,log_mag,sign");
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells.len(), 5);
    assert_eq!(cells[0], "5.0000000000000000e-1");
    assert_eq!(cells[4], "1");
    let digits = cells[2].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(digits.len(), 17);
    let v: f64 = cells[2].parse().unwrap();
    assert_eq!(v, f.get(0, 0).value());
}

#[test]
fn json_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.json");
    let s = KerrState64::from_polar(30.0, -0.4, 1e-3);
    let mut f = eval_field(&s, &auto_window(&s).with_resolution([20, 24]), FieldKind::Wigner, &opts(1)).unwrap();
    f.values[3] = kerr_qpd::LogReal64::zero();
    let cfg = serde_json::json!({"note": "x"});
    write_field(&f, FieldFormat::Json, &path, Some(cfg.clone())).unwrap();
    let (back, got_cfg) = read_field_json(&path).unwrap();
    assert_eq!(got_cfg, Some(cfg));
    assert_eq!(back.values, f.values);
    assert_eq!(back.spec, f.spec);
    assert_eq!(back.state, f.state);
    assert_eq!((back.kind, back.options, back.stats.kmax, back.stats.points), (f.kind, FieldOptions { workers: 0, ..f.options }, f.stats.kmax, f.stats.points));

    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["state", "spec", "kind", "options", "stats", "log_mag", "sign"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["state"]["alpha_re"].as_f64(), Some(s.alpha.re));
    assert_eq!(doc["log_mag"].as_array().unwrap().len(), 20);
    assert_eq!(doc["sign"][0].as_array().unwrap().len(), 24);
}

#[test]
fn io_errors_name_the_path() {
    let s = KerrState64::from_polar(1.0, 0.0, 0.0);
    let f = eval_field(&s, &GridSpec::cartesian(s.alpha, [1.0, 1.0], [2, 2]), FieldKind::Husimi, &opts(1)).unwrap();
    let bad = std::path::Path::new("/nonexistent-dir/out.csv");
    match write_field(&f, FieldFormat::Csv, bad, None) {
        Err(Error::Io { path, .. }) => assert!(path.contains("nonexistent-dir")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(read_field_json(bad), Err(Error::Io { .. })));
}
