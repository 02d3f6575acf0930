use barrierlab_core::scattering::{
    closed_form_amplitudes, probability_partition, series_partial_sum, series_ratio, terms_for_tail,
};
use barrierlab_core::spm::{lambda_prime, naive_predictions};
use barrierlab_core::BarrierConfig;
use num_complex::Complex64;
use proptest::prelude::*;

/// A barrier and a momentum between 1.01 and 4 times its threshold.
fn setup() -> impl Strategy<Value = (BarrierConfig, f64)> {
    (0.1f64..5.0, 0.05f64..6.0, 0.3f64..3.0, 1.01f64..4.0).prop_map(|(v0, l, m, factor)| {
        let barrier = BarrierConfig::new(v0, l, m).unwrap();
        let k = factor * barrier.threshold_momentum();
        (barrier, k)
    })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #[test]
    fn plane_wave_flux_is_conserved((barrier, k) in setup()) {
        let amp = closed_form_amplitudes(&barrier.kinematics(k).unwrap(), &barrier);
        prop_assert!((amp.reflection_probability() + amp.transmission_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_state_is_smooth_at_both_edges((barrier, k) in setup()) {
        let kp = barrier.kinematics(k).unwrap();
        let amp = closed_form_amplitudes(&kp, &barrier);
        let l = barrier.length();
        for edge in [0.0, l] {
            let h = 1e-9 * (1.0 + l);
            let (left, dleft) = amp.stationary_state(&kp, l, edge - h);
            let (right, dright) = amp.stationary_state(&kp, l, edge + h);
            prop_assert!(rel(left, right) < 1e-6);
            prop_assert!(rel(dleft, dright) < 1e-6 * k.max(1.0));
        }
    }

    #[test]
    fn bounce_probabilities_partition_unity((barrier, k) in setup()) {
        let kp = barrier.kinematics(k).unwrap();
        let n = terms_for_tail(&kp, &barrier, 1e-13).unwrap();
        let report = probability_partition(&kp, &barrier, n).unwrap();
        prop_assert!(report.tail_bound < 1e-13);
        prop_assert!((report.partial_sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn series_reaches_closed_form_when_ratio_is_small((barrier, k) in setup()) {
        let kp = barrier.kinematics(k).unwrap();
        prop_assume!(series_ratio(&kp, barrier.length()).norm() <= 0.5);
        let exact = closed_form_amplitudes(&kp, &barrier);
        let sum = series_partial_sum(&kp, &barrier, 60).unwrap();
        for (s, e) in [(sum.r, exact.r), (sum.t, exact.t), (sum.a, exact.a), (sum.b, exact.b)] {
            prop_assert!((s - e).norm() < 1e-12);
        }
    }

    #[test]
    fn reflected_delay_is_never_negative((barrier, k) in setup()) {
        prop_assert!(lambda_prime(k, &barrier).unwrap() >= 0.0);
        let naive = naive_predictions(k, &barrier).unwrap();
        let transit = barrier.mass() * barrier.length() / naive.q0;
        prop_assert!((naive.dt_r - naive.dt_a - transit).abs() < 1e-12 * (1.0 + naive.dt_r.abs()));
        prop_assert_eq!(naive.negative_delay, naive.dt_a < 0.0);
    }
}
