use randprep::bounds::DecayKind;
use randprep::generators::{synthetic_state, SyntheticSpec};
use randprep::sweep::{
    geometric_grid, kept_reduction_at, loglog_slope, parse_grid, read_csv, sweep, theory_violations, verify_rows,
    write_csv,
};
use randprep::normalize;

#[test]
fn grid_parsing() {
    let g = parse_grid("1e-3:1e-1:3").unwrap();
    assert_eq!(g.len(), 3);
    assert_eq!(g[0], 1e-1);
    assert_eq!(g[2], 1e-3);
    assert!((g[1] - 1e-2).abs() < 1e-15);
    assert_eq!(parse_grid("0.2").unwrap(), vec![0.2]);
    assert_eq!(parse_grid("0.2:0.2:1").unwrap(), vec![0.2]);
    for bad in ["", "a:b:c", "0:1:3", "1:0.1:3", "0.1:1:0", "0.1:1", "0.1:1:2:3", "0.1:1:1"] {
        assert!(parse_grid(bad).is_err(), "{bad}");
    }
    assert!(geometric_grid(f64::NAN, 1.0, 2).is_err());
}

#[test]
fn toy_rows_and_notes() {
    let psi = normalize(&[0.98f64.sqrt(), 0.1, 0.1, 0.0], 2).unwrap();
    let rows = sweep(&psi, &[0.05, 2.0, 0.2]).unwrap();
    assert_eq!(rows.iter().map(|r| r.threshold).collect::<Vec<_>>(), vec![2.0, 0.2, 0.05]);
    assert_eq!(rows[0].note, "empty A");
    assert_eq!(rows[2].note, "empty B");
    let v = rows[1].values.as_ref().unwrap();
    assert!((v.lemma_bound - 0.039_409_828_093_302_75).abs() < 1e-12);
    assert!(v.dist_rand < v.dist_det);
    verify_rows(&rows).unwrap();
}

#[test]
fn csv_round_trip_and_verification() {
    let psi = synthetic_state(&SyntheticSpec::new(DecayKind::Geometric, 0.8f64, 64)).unwrap();
    let rows = sweep(&psi, &parse_grid("1e-6:0.5:9").unwrap()).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("threshold,k_kept,eps,"));
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, rows);
    verify_rows(&back).unwrap();
    assert!(theory_violations(&back).is_empty());

    let mut tampered = back.clone();
    let v = tampered.iter_mut().find_map(|r| r.values.as_mut()).unwrap();
    v.dist_det *= 1.01;
    assert!(verify_rows(&tampered).is_err());
}

#[test]
fn slopes_on_geometric_state() {
    let psi = synthetic_state(&SyntheticSpec::new(DecayKind::Geometric, 0.9f64, 256)).unwrap();
    let rows = sweep(&psi, &parse_grid("1e-4:3e-2:10").unwrap()).unwrap();
    let vals: Vec<_> = rows.iter().filter_map(|r| r.values.clone()).collect();
    let eps: Vec<f64> = vals.iter().map(|v| v.eps).collect();
    let det: Vec<f64> = vals.iter().map(|v| v.dist_det).collect();
    let rand: Vec<f64> = vals.iter().map(|v| v.dist_rand).collect();
    assert!((loglog_slope(&eps, &det) - 1.0).abs() < 1e-9);
    let s = loglog_slope(&eps, &rand);
    assert!((1.85..=2.15).contains(&s), "slope {s}");
}

#[test]
fn kept_reduction_on_geometric_state() {
    let psi = synthetic_state(&SyntheticSpec::new(DecayKind::Geometric, 0.9f64, 256)).unwrap();
    let r = kept_reduction_at(&psi, 1e-4).unwrap();
    assert!(r.k_rand < r.k_det);
    assert!(r.reduction > 0.3 && r.reduction < 0.6, "{r:?}");
}
