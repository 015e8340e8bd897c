use dcorr_core::*;
use proptest::prelude::*;

fn measure() -> impl Strategy<Value = WeightMeasure> {
    prop_oneof![
        (0.2f64..1.95).prop_map(|a| WeightMeasure::szekely(a).unwrap()),
        (0.05f64..4.0).prop_map(|v| WeightMeasure::gaussian(v).unwrap()),
        (0.3f64..2.0, 0.2f64..3.0).prop_map(|(b, s)| WeightMeasure::stable(b, s).unwrap()),
    ]
}

fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..40)
        .prop_flat_map(|n| (prop::collection::vec(-5.0f64..5.0, n), prop::collection::vec(-5.0f64..5.0, n)))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dcov_is_symmetric_and_nonnegative((x, y) in pairs(), m in measure()) {
        let a = dcov_v(&x, &y, &m).unwrap();
        let b = dcov_v(&y, &x, &m).unwrap();
        prop_assert!(a >= -1e-12);
        prop_assert!(close(a, b, 1e-10) || (a - b).abs() < 1e-14);
    }

    #[test]
    fn dcov_is_invariant_to_joint_permutation((x, y) in pairs(), m in measure(), rot in 0usize..40) {
        let n = x.len();
        let idx: Vec<usize> = (0..n).map(|i| (i * 7 + rot) % n).collect();
        // only a permutation when gcd(7, n) = 1
        prop_assume!(n % 7 != 0);
        let px: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
        let py: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
        let a = dcov_v(&x, &y, &m).unwrap();
        let b = dcov_v(&px, &py, &m).unwrap();
        prop_assert!(close(a, b, 1e-9) || (a - b).abs() < 1e-14);
    }

    #[test]
    fn dcov_is_shift_invariant((x, y) in pairs(), m in measure(), s in -50.0f64..50.0, t in -50.0f64..50.0) {
        let sx: Vec<f64> = x.iter().map(|v| v + s).collect();
        let ty: Vec<f64> = y.iter().map(|v| v + t).collect();
        let a = dcov_v(&x, &y, &m).unwrap();
        let b = dcov_v(&sx, &ty, &m).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn szekely_dcor_is_scale_free((x, y) in pairs(), alpha in 0.3f64..1.9, c in 0.01f64..100.0, d in 0.01f64..100.0) {
        let m = WeightMeasure::szekely(alpha).unwrap();
        let (Ok(r0), Ok(r1)) = (
            dcor(&x, &y, &m),
            dcor(&x.iter().map(|v| c * v).collect::<Vec<_>>(), &y.iter().map(|v| -d * v).collect::<Vec<_>>(), &m),
        ) else {
            return Ok(());
        };
        prop_assert!((r0 - r1).abs() < 1e-9);
    }

    #[test]
    fn dcor_lies_in_unit_interval((x, y) in pairs(), m in measure()) {
        if let Ok(r) = dcor(&x, &y, &m) {
            prop_assert!((0.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn adcf_matches_dcor_of_lagged_pairs(x in prop::collection::vec(-3.0f64..3.0, 12..60), m in measure()) {
        let max_lag = 4.min(x.len() - 2);
        let Ok(curve) = adcf(&x, max_lag, &m, false) else { return Ok(()); };
        for (k, &h) in curve.lags.iter().enumerate() {
            let h = h as usize;
            let direct = dcor(&x[..x.len() - h], &x[h..], &m).unwrap();
            prop_assert!((curve.values[k] - direct).abs() < 1e-10);
        }
    }
}

#[test]
fn scaled_adcf_is_n_times_adcf() {
    let x = NoiseGen::student_t(4.0).unwrap().draw(300, 1).unwrap();
    let m = WeightMeasure::gaussian(0.5).unwrap();
    let plain = adcf(&x, 8, &m, false).unwrap();
    let scaled = adcf(&x, 8, &m, true).unwrap();
    for (a, b) in plain.values.iter().zip(&scaled.values) {
        assert!((300.0 * a - b).abs() < 1e-10 * b.abs().max(1.0));
    }
    assert_eq!(scaled.statistic, Statistic::ScaledAdcf);
}

#[test]
fn iid_curve_mostly_inside_permutation_band() {
    let m = WeightMeasure::szekely(1.0).unwrap();
    let x = NoiseGen::gaussian(1.0).unwrap().draw(300, 2).unwrap();
    let env = permutation_envelope(&x, 5, &m, 300, &[0.05, 0.95], 3).unwrap();
    let obs = adcf(&x, 5, &m, true).unwrap();
    let lo = env.quantile(0.05).unwrap();
    let hi = env.quantile(0.95).unwrap();
    let inside = (0..5).filter(|&k| obs.values[k] >= lo[k] && obs.values[k] <= hi[k]).count();
    assert!(inside >= 3, "{inside}");
}

#[test]
fn fit_simulate_pipeline_recovers_white_residuals() {
    let g = NoiseGen::gaussian(2.0).unwrap();
    let x = simulate_ar(&[0.5, -0.3, 0.2], &g, 3000, None, 4).unwrap();
    let p = select_order_aicc(&x, 10).unwrap();
    assert!(p >= 3, "selected {p}");
    let model = fit_ar(&x, p, FitMethod::LeastSquares).unwrap();
    assert!((model.noise_variance - 4.0).abs() < 0.4);
    let r = acf(&model.residuals, 10, Transform::Identity).unwrap();
    let band = 3.0 / (model.residuals.len() as f64).sqrt();
    assert!(r.values.iter().all(|v| v.abs() < band), "{:?}", r.values);
}

#[test]
fn cdcf_is_symmetric_under_swap_and_lag_negation() {
    let g = NoiseGen::gaussian(1.0).unwrap();
    let x = g.draw(200, 5).unwrap();
    let y: Vec<f64> = g.draw(200, 6).unwrap().iter().zip(&x).map(|(e, v)| 0.5 * e + v * v).collect();
    let m = WeightMeasure::gaussian(0.5).unwrap();
    let lags: Vec<i64> = (-4..=4).collect();
    let xy = cdcf(&x, &y, &lags, &m).unwrap();
    let neg: Vec<i64> = lags.iter().map(|h| -h).collect();
    let yx = cdcf(&y, &x, &neg, &m).unwrap();
    for (a, b) in xy.values.iter().zip(&yx.values) {
        assert!((a - b).abs() < 1e-12);
    }
}
