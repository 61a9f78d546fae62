use std::collections::BTreeSet;

use stablepack::instance::{derive_seed, generate_instance, generate_set};

#[test]
fn sampled_bins_have_the_uniform_mean() {
    let set = generate_set("M_10", 10_000, 17).unwrap();
    let n = set.len() as f64;
    let mean_l = set.iter().map(|i| i.bin.l as f64).sum::<f64>() / n;
    // L is the largest of three U{100..450} draws
    let m = 451.0 - 100.0;
    let support: Vec<f64> = (100..=450).map(f64::from).collect();
    let cdf = |x: f64| ((x - 99.0) / m).powi(3);
    let (mut mu, mut ex2) = (0.0, 0.0);
    for &x in &support {
        let p = cdf(x) - cdf(x - 1.0);
        mu += p * x;
        ex2 += p * x * x;
    }
    let sigma = ((ex2 - mu * mu) / n).sqrt();
    assert!((mean_l - mu).abs() < 3.0 * sigma, "mean {mean_l}, expected {mu} ± {sigma}");
}

#[test]
fn quantities_cover_one_to_ten() {
    let mut seen = BTreeSet::new();
    let mut types = 0;
    for inst in generate_set("S2_M", 2_000, 3).unwrap() {
        for t in &inst.items {
            seen.insert(t.quantity);
            types += 1;
        }
    }
    assert!(types >= 10_000, "{types} types");
    assert!(seen.range(1..=10).count() == 10, "{seen:?}");
}

#[test]
fn every_item_respects_the_bounds() {
    for scheme in ["S1_10", "S1_M", "S2_30", "B1_30", "B2_30", "B3_30", "BM_M", "M_M", "M_30"] {
        for inst in generate_set(scheme, 200, 5).unwrap() {
            let l = inst.bin.l;
            let lo = ((l as f64 * 0.05).ceil() as i64).max(1);
            let hi = (l as f64 * 0.4).floor() as i64;
            assert!(inst.bin.l >= inst.bin.w);
            let mut tall = 0;
            for t in &inst.items {
                assert!((lo..=hi).contains(&t.l) && (lo..=hi).contains(&t.w), "{scheme}: {t:?}");
                assert!(10 * t.h >= t.l && t.h <= hi, "{scheme}: {t:?}");
                tall += t.quantity as i64 * t.dims().max_side();
            }
            assert_eq!(inst.bin.h, tall);
        }
    }
}

#[test]
fn volume_schemes_stop_just_past_the_target() {
    for inst in generate_set("S1_M", 500, 8).unwrap() {
        let nominal = (inst.bin.l * inst.bin.w * 100) as f64;
        let total = inst.total_volume() as f64;
        let biggest = inst.items.iter().map(|t| t.quantity as i64 * t.dims().volume()).max().unwrap() as f64;
        assert!(total > 0.8 * nominal);
        assert!(total <= 1.2 * nominal + biggest);
    }
}

#[test]
fn generation_is_seed_deterministic() {
    assert_eq!(generate_instance("BM_M", 99).unwrap(), generate_instance("BM_M", 99).unwrap());
    assert_ne!(generate_instance("BM_M", 99).unwrap(), generate_instance("BM_M", 100).unwrap());
    assert_eq!(generate_set("S1_30", 1, 4).unwrap().len(), 1);
    assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
}

#[test]
fn unknown_schemes_are_rejected() {
    for bad in ["X_10", "S1", "S1_0", "S1_x", "CASE_3", ""] {
        assert!(generate_instance(bad, 0).is_err(), "{bad}");
    }
}
