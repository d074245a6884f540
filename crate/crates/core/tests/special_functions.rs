use proptest::prelude::*;

use udw_core::reference::{dawson_reference, erfi_reference};
use udw_core::special::{dawson, dawson_derivative, erfi};
use udw_core::Error;

#[test]
fn example_values() {
    assert_eq!(dawson(0.0).unwrap(), 0.0);
    assert!((dawson(1.0).unwrap() - 0.538_079_506_912_768_4).abs() < 1e-15);
    assert!((erfi(1.0).unwrap() - 1.650_425_758_797_543).abs() < 1e-14);
    assert_eq!(erfi(-1.0).unwrap(), -erfi(1.0).unwrap());
    // 1/(2x) Σ (2k-1)!!/(2x²)^k, truncated at its smallest term
    let x: f64 = 10.0;
    let (mut term, mut sum, mut k) = (1.0f64, 1.0f64, 1.0f64);
    loop {
        let next = term * (2.0 * k - 1.0) / (2.0 * x * x);
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    let asymptotic = sum / (2.0 * x);
    assert!((dawson(x).unwrap() - asymptotic).abs() < 1e-12);
    assert!((dawson(10.0).unwrap() - 0.050_253).abs() < 1e-6);
}

#[test]
fn errors() {
    for x in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
        assert!(matches!(dawson(x), Err(Error::Domain(_))));
    }
    assert!(matches!(erfi(25.5), Err(Error::Overflow(_))));
    assert!(matches!(erfi(-30.0), Err(Error::Overflow(_))));
    assert!(erfi(25.0).unwrap().is_finite());
}

#[test]
fn single_maximum_near_0_924() {
    let sample = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..=n)
            .map(|i| dawson(lo + (hi - lo) * i as f64 / n as f64).unwrap())
            .collect()
    };
    assert!(sample(0.0, 0.92, 2000).windows(2).all(|w| w[1] > w[0]));
    assert!(sample(0.93, 5.0, 2000).windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn asymptotic_regime() {
    for x in [30.0, 45.5, 100.0, 1e6] {
        assert!((2.0 * x * dawson(x).unwrap() - 1.0).abs() <= 1e-3);
    }
}

#[test]
fn erfi_consistent_with_dawson() {
    for i in 0..=400 {
        let x = 0.01 + (20.0 - 0.01) * i as f64 / 400.0;
        let from_dawson = std::f64::consts::FRAC_2_SQRT_PI * (x * x).exp() * dawson(x).unwrap();
        let e = erfi(x).unwrap();
        assert!(((from_dawson - e) / e).abs() <= 1e-12, "x = {x}");
    }
}

proptest! {
    #[test]
    fn odd(x in -1e3f64..1e3) {
        prop_assert_eq!(dawson(-x).unwrap(), -dawson(x).unwrap());
    }

    #[test]
    fn matches_reference(x in 1e-6f64..40.0) {
        let exact = dawson_reference(x).unwrap();
        prop_assert!(((dawson(x).unwrap() - exact) / exact).abs() <= 1e-12);
    }

    #[test]
    fn erfi_matches_reference(x in 0.01f64..20.0) {
        let exact = erfi_reference(x).unwrap();
        prop_assert!(((erfi(x).unwrap() - exact) / exact).abs() <= 1e-12);
    }

    #[test]
    fn satisfies_its_differential_equation(x in -8.0f64..8.0) {
        // D' = 1 - 2xD, checked by a central difference
        let h = 1e-5;
        let numeric = (dawson(x + h).unwrap() - dawson(x - h).unwrap()) / (2.0 * h);
        prop_assert!((numeric - dawson_derivative(x).unwrap()).abs() < 1e-9);
    }
}
