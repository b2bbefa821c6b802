use rescaled_rbf::experiments::{
    lookup, registry, run, write_csv, Method, RunOptions, TestFunction, CSV_HEADER, REGISTRY_NAMES,
};
use rescaled_rbf::geometry::{grid, halton_in, Domain, PointSet};
use rescaled_rbf::interpolate::{cardinal_table, fit_rescaled, fit_standard, lebesgue};
use rescaled_rbf::io::{read_samples, write_lebesgue, write_predictions};
use rescaled_rbf::kernels::{Kernel, KernelFamily};
use rescaled_rbf::pum::{build_cover, fit_pum};

#[test]
fn every_registry_entry_validates() {
    let all = registry();
    assert_eq!(all.len(), REGISTRY_NAMES.len());
    for spec in &all {
        spec.validate().unwrap();
        assert_eq!(lookup(&spec.name).unwrap().name, spec.name);
    }
    assert!(lookup("nosuch").is_err());
}

#[test]
fn franke_sweep_has_sixty_rows_without_failures() {
    let report = run(&lookup("fig2-franke").unwrap(), &RunOptions::default()).unwrap();
    assert_eq!(report.rows.len(), 60);
    assert_eq!(report.n_failed(), 0);
    assert_eq!(report.method_rows(Method::Standard).len(), 30);
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let spec = lookup("table444").unwrap();
    let render = || {
        let report = run(&spec, &RunOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &report.rows).unwrap();
        buf
    };
    let a = render();
    assert_eq!(a, render());
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 6);
}

#[test]
fn samples_round_trip_through_fit_and_predictions() {
    let input = "x1,x2,f\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n0.5,0.5,2.5\n";
    let (x, f) = read_samples(input.as_bytes()).unwrap();
    let k = Kernel::radial(KernelFamily::Gaussian, 2.0, 2).unwrap();
    let m = fit_rescaled(&k, &x, &f).unwrap();
    let preds = m.eval_many(&x);
    for (p, v) in preds.iter().zip(&f) {
        assert!((p.unwrap() - v).abs() < 1e-10);
    }
    let mut out = Vec::new();
    write_predictions(&mut out, &x, &preds).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("x1,x2,pred,flag\n"));
}

#[test]
fn node_lebesgue_functions_equal_one() {
    let x = grid(&[6], &[-1.0], &[1.0]).unwrap();
    let k = Kernel::radial(KernelFamily::WendlandW2, 4.0, 1).unwrap();
    let t = cardinal_table(&k, &x, &x).unwrap();
    let r = lebesgue(&t);
    for (l, lh) in r.lambda_fn.iter().zip(&r.lambda_hat_fn) {
        assert!((l - 1.0).abs() < 1e-12);
        assert!((lh - 1.0).abs() < 1e-12);
    }
    let mut out = Vec::new();
    write_lebesgue(&mut out, &x, &r).unwrap();
    assert!(String::from_utf8(out)
        .unwrap()
        .starts_with("x1,lebesgue_std,lebesgue_resc,defined_flag\n"));
}

#[test]
fn only_rescaled_reproduces_constants() {
    let domain = Domain::disk(vec![0.0, 0.0], 1.0).unwrap();
    let x = halton_in(&domain, 40, 10_000).unwrap();
    let k = Kernel::radial(KernelFamily::WendlandW2, 1.0, 2).unwrap();
    let e = grid(&[21, 21], &[-0.7, -0.7], &[0.7, 0.7]).unwrap();
    let std = fit_standard(&k, &x, &vec![5.0; 40]).unwrap();
    let resc = fit_rescaled(&k, &x, &vec![5.0; 40]).unwrap();
    let std_err = std
        .eval_many(&e)
        .iter()
        .map(|v| (v - 5.0).abs())
        .fold(0.0, f64::max);
    let resc_err = resc
        .eval_many(&e)
        .iter()
        .flatten()
        .map(|v| (v - 5.0).abs())
        .fold(0.0, f64::max);
    assert!(resc_err < 1e-12);
    assert!(std_err > 1e-6);
}

#[test]
fn rescaled_pum_reproduces_a_global_constant() {
    let domain = Domain::cube(2, 0.0, 1.0).unwrap();
    let x = grid(&[17, 17], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let x = PointSet::new(2, x.coords().to_vec(), domain.clone()).unwrap();
    let cover = build_cover(&domain, &x, 4, 1.5).unwrap();
    let k = Kernel::radial(KernelFamily::WendlandW2, 5.0, 2).unwrap();
    let m = fit_pum(&k, &cover, &x, &vec![-2.0; x.len()], true).unwrap();
    let e = grid(&[30, 30], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
    for v in m.eval_many(&e).into_iter().flatten() {
        assert!((v + 2.0).abs() < 1e-12);
    }
}

#[test]
fn test_function_basics() {
    assert_eq!(TestFunction::Identity1d.eval(&[0.25]), 0.25);
    assert_eq!(TestFunction::Constant(7.0).eval(&[0.1, 0.2]), 7.0);
    let a = TestFunction::Franke2d { classic: false }.eval(&[0.5, 0.0]);
    let b = TestFunction::Franke2d { classic: true }.eval(&[0.5, 0.0]);
    assert!(a.is_finite() && b.is_finite());
}
