use zygmund_core::weights::{check_slow_variation, eval_weight, potter_bound, SlowlyVaryingWeight, WeightFamily};

fn families() -> Vec<SlowlyVaryingWeight> {
    vec![
        SlowlyVaryingWeight::constant(),
        SlowlyVaryingWeight::log_pow(1.0),
        SlowlyVaryingWeight::log_pow(-0.5),
        SlowlyVaryingWeight::log_log_pow(2.0),
        SlowlyVaryingWeight::log_log_pow(-1.0),
    ]
}

#[test]
fn weights_are_continuous_on_the_unit_interval() {
    // Modulus of continuity on a log grid shrinks linearly with the step.
    for w in families() {
        let modulus = |steps: usize| {
            let ys: Vec<f64> = (0..=steps).map(|k| 10f64.powf(-12.0 * k as f64 / steps as f64)).collect();
            ys.windows(2)
                .map(|p| (eval_weight(&w, p[0]).unwrap() - eval_weight(&w, p[1]).unwrap()).abs())
                .fold(0.0, f64::max)
        };
        let (a, b) = (modulus(2000), modulus(4000));
        assert!(b <= 0.6 * a + 1e-15, "{w}: {a} {b}");
    }
}

#[test]
fn weights_are_positive_and_one_at_one() {
    for w in families() {
        assert_eq!(eval_weight(&w, 1.0).unwrap(), 1.0);
        for k in 0..=120 {
            let y = 10f64.powf(-(k as f64) / 10.0);
            let v = eval_weight(&w, y).unwrap();
            assert!(v > 0.0 && v.is_finite(), "{w} at {y}");
        }
    }
}

#[test]
fn every_family_varies_slowly() {
    let eps: Vec<f64> = (2..=12).map(|k| 10f64.powi(-k)).collect();
    for w in families() {
        let r = check_slow_variation(&w, &[0.5, 2.0, 10.0], &eps).unwrap();
        assert!(r.monotone, "{w}: {:?}", r.per_eps);
        if w.family == WeightFamily::Const {
            assert_eq!(r.deviation, 0.0);
        } else {
            assert!(r.deviation < 0.5 * r.per_eps[0], "{w}: {:?}", r.per_eps);
        }
    }
}

#[test]
fn log_pow_slow_variation_reference() {
    let w = SlowlyVaryingWeight::log_pow(1.0);
    let r = check_slow_variation(&w, &[2.0], &[1e-6]).unwrap();
    let direct = ((1.0 + (2e-6f64).ln().abs()) / (1.0 + (1e-6f64).ln().abs()) - 1.0).abs();
    assert!((r.deviation - direct).abs() < 1e-15);
    assert!((r.deviation - 0.0468).abs() < 5e-5);
}

#[test]
fn potter_constant_is_grid_stable() {
    let w = SlowlyVaryingWeight::log_pow(1.0);
    let run = |per_decade: usize| {
        let ys: Vec<f64> = (0..=8 * per_decade)
            .map(|k| 0.5 * 10f64.powf(-(k as f64) / per_decade as f64))
            .filter(|y| *y >= 1e-8)
            .collect();
        let a: Vec<f64> = (0..=11 * per_decade).map(|k| 1e-3 * 10f64.powf(k as f64 / per_decade as f64)).collect();
        potter_bound(&w, &ys, &a)
    };
    let (c1, c2) = (run(10), run(20));
    assert!(c1.is_finite() && c1 > 0.0);
    assert!((c2 - c1).abs() <= 0.05 * c1, "{c1} {c2}");
}

#[test]
fn serialization_round_trip() {
    for w in families() {
        let text = serde_json::to_string(&w).unwrap();
        let back: SlowlyVaryingWeight = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }
    assert!(serde_json::from_str::<SlowlyVaryingWeight>(r#"{"family":"power","beta":1}"#).is_err());
}
